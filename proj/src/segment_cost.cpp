#include <beaconseg/segment_cost.hpp>

#include <beaconseg/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace beaconseg {

namespace {

double clamped_log(double prob) { return std::log(std::clamp(prob, PROB_CLAMP, 1.0 - PROB_CLAMP)); }

// Fixed phase: 1-based period of an event relative to the first event.
std::size_t phase_period(double time, double first, double period) {
    return static_cast<std::size_t>(std::floor((time - first) / period + 0.5)) + 1;
}

// Number of further (empty) periods to skip so that time lies in
// [centre - P/2, centre + P/2) after centre += k P.
std::size_t skip_periods(double time, double centre, double period) {
    const double half = 0.5 * period;
    double k = std::max(0.0, std::floor((time - centre) / period + 0.5));
    while (time >= centre + k * period + half) {
        k += 1.0;
    }
    while (k > 0.0 && time < centre + k * period - half) {
        k -= 1.0;
    }
    return static_cast<std::size_t>(k);
}

double log_likelihood(const CostModel& m, double x, std::size_t periods, std::size_t nonempty, std::size_t events,
                      double angular) {
    const auto empty = static_cast<double>(periods - nonempty);
    const auto full = static_cast<double>(nonempty);
    const auto extra = static_cast<double>(events - nonempty);
    return m.log_lambda - m.lambda * x + static_cast<double>(periods - 1) * m.log_1mq + m.log_q + empty * m.log_p +
           full * (m.log_1mp + m.log_1mr) + extra * m.log_r + m.kappa * angular -
           static_cast<double>(events) * m.log_norm;
}

} // namespace

CostModel CostModel::make(const ModelParams& params, PollingMode mode) {
    params.validate();
    CostModel m;
    m.lambda = params.lambda;
    m.log_lambda = std::log(params.lambda);
    m.log_q = clamped_log(params.q);
    m.log_1mq = clamped_log(1.0 - params.q);
    m.log_p = clamped_log(params.p);
    m.log_1mp = clamped_log(1.0 - params.p);
    m.log_r = clamped_log(params.r);
    m.log_1mr = clamped_log(1.0 - params.r);
    m.kappa = params.kappa;
    m.log_norm = std::log(TWO_PI) + bessel::log_i0(params.kappa);
    m.period = params.period;
    m.mode = mode;
    return m;
}

std::size_t PeriodBinning::empty_periods() const {
    return static_cast<std::size_t>(std::count(counts.begin(), counts.end(), std::size_t{0}));
}

std::size_t PeriodBinning::nonempty_periods() const { return n_periods - empty_periods(); }

PeriodBinning bin_segment(std::span<const double> times, double prev_end, double period, PollingMode mode) {
    if (times.empty()) {
        throw EmptySegment("cannot bin an empty segment");
    }
    if (!(period > 0.0)) {
        throw NonPositivePeriod("period must be positive");
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    PeriodBinning b;
    b.anchor = times.front();
    b.x_gap = times.front() - prev_end;
    b.event_period.reserve(times.size());

    if (mode == PollingMode::FixedPhase) {
        for (double t : times) {
            std::size_t j = phase_period(t, b.anchor, period);
            if (j > b.counts.size()) {
                b.counts.resize(j, 0);
            }
            ++b.counts[j - 1];
            b.event_period.push_back(j - 1);
        }
    } else {
        const double half = 0.5 * period;
        double centre = b.anchor;
        std::size_t current = 0;
        b.counts.push_back(0);
        double sum = 0.0;
        for (double t : times) {
            if (t >= centre + half) {
                centre = sum / static_cast<double>(b.counts[current]) + period;
                std::size_t k = skip_periods(t, centre, period);
                centre += static_cast<double>(k) * period;
                current += k + 1;
                b.counts.resize(current + 1, 0);
                sum = 0.0;
            }
            ++b.counts[current];
            sum += t;
            b.event_period.push_back(current);
        }
    }
    b.n_periods = b.counts.size();

    b.period_means.assign(b.n_periods, 0.0);
    for (std::size_t idx = 0; idx < times.size(); ++idx) {
        b.period_means[b.event_period[idx]] += times[idx];
    }
    for (std::size_t j = 0; j < b.n_periods; ++j) {
        b.period_means[j] = b.counts[j] > 0 ? b.period_means[j] / static_cast<double>(b.counts[j]) : nan;
    }

    std::vector<double> angles(times.size());
    for (std::size_t idx = 0; idx < times.size(); ++idx) {
        angles[idx] = angular_position(times[idx], period);
    }
    b.nu_hat.assign(b.n_periods, nan);
    if (mode == PollingMode::FixedPhase) {
        double nu = resultant(angles).direction();
        for (std::size_t j = 0; j < b.n_periods; ++j) {
            if (b.counts[j] > 0) {
                b.nu_hat[j] = nu;
            }
        }
    } else {
        Resultant first;
        for (std::size_t idx = 0; idx < times.size() && b.event_period[idx] == 0; ++idx) {
            first.add(angles[idx]);
        }
        b.nu_hat[0] = first.direction();
        double previous = b.period_means[0];
        for (std::size_t j = 1; j < b.n_periods; ++j) {
            if (b.counts[j] > 0) {
                b.nu_hat[j] = angular_position(previous, period);
                previous = b.period_means[j];
            }
        }
    }
    b.displacements.reserve(times.size());
    for (std::size_t idx = 0; idx < times.size(); ++idx) {
        b.displacements.push_back(wrap_angle(angles[idx] - b.nu_hat[b.event_period[idx]]));
    }
    return b;
}

SegmentCost segment_cost(std::span<const double> times, double prev_end, const ModelParams& params,
                         PollingMode mode) {
    CostModel m = CostModel::make(params, mode);
    SegmentCost result;
    result.binning = bin_segment(times, prev_end, params.period, mode);
    const auto& b = result.binning;

    double ll = m.log_lambda - m.lambda * b.x_gap + static_cast<double>(b.n_periods - 1) * m.log_1mq + m.log_q;
    std::vector<double> angular(b.n_periods, 0.0);
    for (std::size_t idx = 0; idx < times.size(); ++idx) {
        angular[b.event_period[idx]] += m.kappa * std::cos(b.displacements[idx]) - m.log_norm;
    }
    for (std::size_t j = 0; j < b.n_periods; ++j) {
        if (b.counts[j] == 0) {
            ll += m.log_p;
        } else {
            ll += m.log_1mp + m.log_1mr + static_cast<double>(b.counts[j] - 1) * m.log_r + angular[j];
        }
    }
    result.value = -2.0 * ll;
    return result;
}

void SegmentAccumulator::push(double time) {
    const CostModel& m = *m_Model;
    const double angle = angular_position(time, m.period);
    if (m_Events == 0) {
        m_First = time;
        m_Periods = 1;
        m_Nonempty = 1;
        m_Centre = time;
    }
    ++m_Events;

    if (m.mode == PollingMode::FixedPhase) {
        std::size_t j = phase_period(time, m_First, m.period);
        if (j != m_Periods) {
            m_Periods = j;
            ++m_Nonempty;
        }
        m_All.add(angle);
        return;
    }

    if (m_Count > 0 && time >= m_Centre + 0.5 * m.period) {
        const double mean = m_Sum / static_cast<double>(m_Count);
        m_Nu = angular_position(mean, m.period);
        m_Centre = mean + m.period;
        std::size_t k = skip_periods(time, m_Centre, m.period);
        m_Centre += static_cast<double>(k) * m.period;
        m_Periods += k + 1;
        ++m_Nonempty;
        m_Sum = 0.0;
        m_Count = 0;
    }
    if (m_Periods == 1) {
        m_FirstPeriod.add(angle);
    } else {
        m_CosSum += std::cos(angle - m_Nu);
    }
    m_Sum += time;
    ++m_Count;
}

double SegmentAccumulator::cost() const {
    const CostModel& m = *m_Model;
    double angular = m.mode == PollingMode::FixedPhase ? m_All.length() : m_FirstPeriod.length() + m_CosSum;
    return -2.0 * log_likelihood(m, m_First - m_PrevEnd, m_Periods, m_Nonempty, m_Events, angular);
}

double bic_penalty(std::size_t n, double alpha) {
    if (n == 0) {
        throw InvalidParameter("penalty needs at least one event");
    }
    return alpha * std::log(static_cast<double>(n));
}

} // namespace beaconseg
