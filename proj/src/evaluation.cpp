#include <beaconseg/evaluation.hpp>

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>

namespace beaconseg {

namespace {

bool near_any(std::size_t index, std::span<const std::size_t> sorted, std::size_t tolerance) {
    std::size_t low = index >= tolerance ? index - tolerance : 0;
    auto it = std::lower_bound(sorted.begin(), sorted.end(), low);
    return it != sorted.end() && *it <= index + tolerance;
}

std::vector<std::size_t> sorted_unique(std::span<const std::size_t> values) {
    std::vector<std::size_t> out(values.begin(), values.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

Rates tp_fp(std::span<const std::size_t> found, std::span<const std::size_t> truth, std::size_t n,
            std::size_t tolerance) {
    auto f = sorted_unique(found);
    auto t = sorted_unique(truth);
    Rates rates;
    std::size_t hits = 0;
    for (auto cp : t) {
        hits += near_any(cp, f, tolerance) ? 1 : 0;
    }
    std::size_t false_alarms = 0;
    for (auto cp : f) {
        false_alarms += near_any(cp, t, tolerance) ? 0 : 1;
    }
    if (!t.empty()) {
        rates.tp = static_cast<double>(hits) / static_cast<double>(t.size());
    }
    std::size_t negatives = n > t.size() + 1 ? n - 1 - t.size() : 0;
    if (negatives > 0) {
        rates.fp = std::min(1.0, static_cast<double>(false_alarms) / static_cast<double>(negatives));
    }
    return rates;
}

Rates label_rates(const EventLabels& found, const EventLabels& truth) {
    if (found.labels.size() != truth.labels.size()) {
        throw InvalidParameter("label vectors differ in length");
    }
    std::size_t positives = 0, hits = 0, negatives = 0, false_alarms = 0;
    for (std::size_t k = 0; k < truth.labels.size(); ++k) {
        bool predicted = found.labels[k] == EventLabel::UserDriven;
        if (truth.labels[k] == EventLabel::UserDriven) {
            ++positives;
            hits += predicted ? 1 : 0;
        } else {
            ++negatives;
            false_alarms += predicted ? 1 : 0;
        }
    }
    Rates rates;
    rates.tp = positives > 0 ? static_cast<double>(hits) / static_cast<double>(positives) : 0.0;
    rates.fp = negatives > 0 ? static_cast<double>(false_alarms) / static_cast<double>(negatives) : 0.0;
    return rates;
}

std::vector<std::size_t> histogram_time_of_day(std::span<const double> times, std::size_t bins, double day) {
    if (bins < 2) {
        throw InvalidParameter("time-of-day histogram needs at least 2 bins");
    }
    if (!(day > 0.0)) {
        throw InvalidParameter("day length must be positive");
    }
    std::vector<std::size_t> counts(bins, 0);
    for (double t : times) {
        double within = t - day * std::floor(t / day);
        auto bin = static_cast<std::size_t>(std::floor(within / day * static_cast<double>(bins)));
        ++counts[std::min(bin, bins - 1)];
    }
    return counts;
}

ChiSquare chi_square_uniform(std::span<const std::size_t> counts) {
    if (counts.size() < 2) {
        throw InvalidParameter("chi-square needs at least 2 cells");
    }
    double total = 0.0;
    for (auto c : counts) {
        total += static_cast<double>(c);
    }
    ChiSquare result;
    if (total == 0.0) {
        return result;
    }
    double expected = total / static_cast<double>(counts.size());
    for (auto c : counts) {
        double diff = static_cast<double>(c) - expected;
        result.statistic += diff * diff / expected;
    }
    double dof = static_cast<double>(counts.size() - 1);
    result.p_value = boost::math::gamma_q(0.5 * dof, 0.5 * result.statistic);
    return result;
}

double kolmogorov_q(double x) {
    if (x <= 0.0) {
        return 1.0;
    }
    if (x < 0.2) {
        return 1.0; // the alternating series converges slowly; Q is 1 to double precision here
    }
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        double term = std::exp(-2.0 * j * j * x * x);
        sum += (j % 2 == 1) ? term : -term;
        if (term < 1e-18) {
            break;
        }
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_uniform(std::vector<double> sample) {
    if (sample.empty()) {
        throw EmptySample("KS test on an empty sample");
    }
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double u = std::clamp(sample[i], 0.0, 1.0);
        d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
    }
    KsResult result;
    result.statistic = d;
    double root = std::sqrt(n);
    result.p_value = kolmogorov_q((root + 0.12 + 0.11 / root) * d);
    return result;
}

std::vector<double> ecdf(std::vector<double> sample, std::span<const double> at) {
    std::sort(sample.begin(), sample.end());
    std::vector<double> out;
    out.reserve(at.size());
    for (double x : at) {
        auto count = std::upper_bound(sample.begin(), sample.end(), x) - sample.begin();
        out.push_back(sample.empty() ? 0.0 : static_cast<double>(count) / static_cast<double>(sample.size()));
    }
    return out;
}

double ecdf_excess(std::vector<double> a, std::vector<double> b) {
    std::vector<double> pooled = a;
    pooled.insert(pooled.end(), b.begin(), b.end());
    auto fa = ecdf(a, pooled);
    auto fb = ecdf(b, pooled);
    double excess = 0.0;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        excess = std::max(excess, fa[i] - fb[i]);
    }
    return excess;
}

RobustnessReport robustness_metrics(const std::vector<std::vector<std::vector<std::uint8_t>>>& labels) {
    RobustnessReport report;
    if (labels.empty()) {
        return report;
    }
    report.repetitions = labels.front().size();
    if (report.repetitions < 2) {
        throw InvalidParameter("robustness needs at least two repetitions");
    }
    report.events = labels.front().front().size();
    for (const auto& setting : labels) {
        if (setting.size() != report.repetitions) {
            throw InvalidParameter("every setting needs the same number of repetitions");
        }
        for (const auto& rep : setting) {
            if (rep.size() != report.events) {
                throw InvalidParameter("every repetition needs the same number of events");
            }
        }
    }
    const auto m = static_cast<double>(std::max<std::size_t>(report.events, 1));
    std::vector<std::vector<double>> means;
    for (const auto& setting : labels) {
        double total = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < setting.size(); ++i) {
            for (std::size_t j = i + 1; j < setting.size(); ++j) {
                std::size_t differ = 0;
                for (std::size_t k = 0; k < report.events; ++k) {
                    differ += setting[i][k] != setting[j][k] ? 1 : 0;
                }
                total += static_cast<double>(differ) / m;
                ++pairs;
            }
        }
        report.c.push_back(total / static_cast<double>(pairs));
        std::vector<double> mean(report.events, 0.0);
        for (const auto& rep : setting) {
            for (std::size_t k = 0; k < report.events; ++k) {
                mean[k] += rep[k];
            }
        }
        for (double& v : mean) {
            v /= static_cast<double>(setting.size());
        }
        means.push_back(std::move(mean));
    }
    report.d.assign(labels.size(), std::vector<double>(labels.size(), 0.0));
    for (std::size_t a = 0; a < labels.size(); ++a) {
        for (std::size_t b = a + 1; b < labels.size(); ++b) {
            double sum = 0.0;
            for (std::size_t k = 0; k < report.events; ++k) {
                sum += std::abs(means[a][k] - means[b][k]);
            }
            report.d[a][b] = report.d[b][a] = sum / m;
        }
    }
    return report;
}

} // namespace beaconseg
