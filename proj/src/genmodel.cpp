#include <beaconseg/genmodel.hpp>

#include <beaconseg/directional.hpp>

#include <algorithm>
#include <numeric>
#include <utility>

namespace beaconseg {

std::size_t SubsequenceSpec::event_count() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t LabeledStream::sigma(std::size_t i, std::size_t j, std::size_t k) const {
    if (i == 0 || i > subsequences.size() || j == 0 || j > subsequences[i - 1].n_periods || k == 0 ||
        k > subsequences[i - 1].counts[j - 1]) {
        throw IndexOutOfRange("no event (" + std::to_string(i) + "," + std::to_string(j) + "," +
                              std::to_string(k) + ")");
    }
    std::size_t index = 0;
    for (std::size_t s = 0; s + 1 < i; ++s) {
        index += subsequences[s].event_count();
    }
    const auto& counts = subsequences[i - 1].counts;
    index += std::accumulate(counts.begin(), counts.begin() + static_cast<std::ptrdiff_t>(j - 1), std::size_t{0});
    return index + k - 1;
}

std::size_t sample_hurdle_count(double p, double r, Philox& rng) {
    if (uniform01(rng) < p) {
        return 0;
    }
    return static_cast<std::size_t>(geometric1(rng, 1.0 - r));
}

double fixed_phase_time(double offset, double x, std::size_t period_index, double theta, double period) {
    return offset + x + period * (static_cast<double>(period_index - 1) + theta / TWO_PI);
}

namespace {

// Exponential gap, geometric length and hurdle counts. A subsequence whose
// periods are all empty could never be observed, so it is drawn again.
SubsequenceSpec draw_subsequence(const ModelParams& params, Philox& rng, std::size_t& redraws) {
    while (true) {
        SubsequenceSpec spec;
        spec.x = exponential(rng, params.lambda);
        spec.n_periods = static_cast<std::size_t>(geometric1(rng, params.q));
        spec.counts.resize(spec.n_periods);
        for (auto& m : spec.counts) {
            m = sample_hurdle_count(params.p, params.r, rng);
        }
        if (spec.event_count() > 0) {
            return spec;
        }
        ++redraws;
    }
}

struct TimedEvent {
    double time;
    EventOrigin origin;
};

LabeledStream assemble(std::vector<TimedEvent> events, std::vector<SubsequenceSpec> specs, double horizon,
                       const ModelParams& params, PollingMode mode, const Philox& rng, std::size_t redraws) {
    std::stable_sort(events.begin(), events.end(),
                     [](const TimedEvent& a, const TimedEvent& b) { return a.time < b.time; });

    LabeledStream stream;
    std::vector<double> times;
    times.reserve(events.size());
    stream.origins.reserve(events.size());
    for (const auto& event : events) {
        times.push_back(event.time);
        stream.origins.push_back(event.origin);
    }
    horizon = std::max(horizon, times.empty() ? 0.0 : times.back());
    stream.seq = validate_sequence(std::move(times), horizon);

    // The earliest event of each subsequence is its user-driven initiator.
    std::vector<bool> seen(specs.size(), false);
    stream.truth.labels.assign(events.size(), EventLabel::Automated);
    for (std::size_t idx = 0; idx < events.size(); ++idx) {
        std::size_t i = stream.origins[idx].subsequence;
        if (!seen[i - 1]) {
            seen[i - 1] = true;
            stream.truth.labels[idx] = EventLabel::UserDriven;
            if (idx > 0) {
                stream.truth_changepoints.push_back(idx);
            }
        }
    }

    stream.subsequences = std::move(specs);
    stream.redraws = redraws;
    stream.params = params;
    stream.mode = mode;
    stream.seed = rng.seed();
    stream.stream = rng.stream();
    return stream;
}

} // namespace

LabeledStream simulate_fixed_phase(const ModelParams& params, std::size_t subsequences, Philox& rng) {
    params.validate();
    if (subsequences == 0) {
        throw InvalidParameter("at least one subsequence is required");
    }
    std::vector<SubsequenceSpec> specs;
    std::vector<TimedEvent> events;
    std::vector<double> thetas;
    std::size_t redraws = 0;
    double offset = 0.0;
    for (std::size_t i = 1; i <= subsequences; ++i) {
        SubsequenceSpec spec = draw_subsequence(params, rng, redraws);
        for (std::size_t j = 1; j <= spec.n_periods; ++j) {
            thetas.clear();
            for (std::size_t k = 0; k < spec.counts[j - 1]; ++k) {
                thetas.push_back(von_mises(rng, std::numbers::pi, params.kappa));
            }
            std::sort(thetas.begin(), thetas.end());
            for (std::size_t k = 0; k < thetas.size(); ++k) {
                events.push_back(
                    {fixed_phase_time(offset, spec.x, j, thetas[k], params.period), EventOrigin{i, j, k + 1}});
            }
        }
        offset += spec.x + static_cast<double>(spec.n_periods) * params.period;
        specs.push_back(std::move(spec));
    }
    return assemble(std::move(events), std::move(specs), offset, params, PollingMode::FixedPhase, rng, redraws);
}

LabeledStream simulate_fixed_duration(const ModelParams& params, std::size_t subsequences, Philox& rng) {
    params.validate();
    if (subsequences == 0) {
        throw InvalidParameter("at least one subsequence is required");
    }
    const double period = params.period;
    const double scale = period / TWO_PI;
    std::vector<SubsequenceSpec> specs;
    std::vector<TimedEvent> events;
    std::vector<double> errors;
    std::size_t redraws = 0;
    // Mean time of the last period of the previous subsequence; the shift of
    // P/2 keeps the first events non-negative.
    double previous_mean = 0.5 * period;
    double latest = 0.0;
    for (std::size_t i = 1; i <= subsequences; ++i) {
        SubsequenceSpec spec = draw_subsequence(params, rng, redraws);
        double mean = previous_mean;
        for (std::size_t j = 1; j <= spec.n_periods; ++j) {
            double anchor = j == 1 ? previous_mean + spec.x : mean + period;
            errors.clear();
            for (std::size_t k = 0; k < spec.counts[j - 1]; ++k) {
                errors.push_back(von_mises_centered(rng, params.kappa));
            }
            std::sort(errors.begin(), errors.end());
            if (errors.empty()) {
                mean = anchor;
                continue;
            }
            double sum = 0.0;
            for (std::size_t k = 0; k < errors.size(); ++k) {
                double time = anchor + scale * errors[k];
                sum += time;
                latest = std::max(latest, time);
                events.push_back({time, EventOrigin{i, j, k + 1}});
            }
            mean = sum / static_cast<double>(errors.size());
        }
        previous_mean = mean;
        specs.push_back(std::move(spec));
    }
    double horizon = std::max(latest, previous_mean) + 0.5 * period;
    return assemble(std::move(events), std::move(specs), horizon, params, PollingMode::FixedDuration, rng,
                    redraws);
}

LabeledStream sample_perturbed_uniform_stream(double lambda, double q, std::size_t subsequences, double period,
                                              Philox& rng) {
    if (!(lambda > 0.0) || !(q > 0.0 && q <= 1.0) || !(period > 0.0) || subsequences == 0) {
        throw InvalidParameter("perturbed stream needs lambda > 0, q in (0,1], P > 0 and S >= 1");
    }
    std::vector<SubsequenceSpec> specs;
    std::vector<TimedEvent> events;
    double offset = 0.0;
    for (std::size_t i = 1; i <= subsequences; ++i) {
        SubsequenceSpec spec;
        spec.x = exponential(rng, lambda);
        spec.n_periods = static_cast<std::size_t>(geometric1(rng, q));
        spec.counts.assign(spec.n_periods, 1);
        for (std::size_t j = 1; j <= spec.n_periods; ++j) {
            double grid = offset + spec.x + period * (static_cast<double>(j) - 0.5);
            events.push_back({grid + period * uniform(rng, -0.2, 0.2), EventOrigin{i, j, 1}});
        }
        offset += spec.x + static_cast<double>(spec.n_periods) * period;
        specs.push_back(std::move(spec));
    }
    ModelParams params;
    params.lambda = lambda;
    params.q = q;
    params.period = period;
    return assemble(std::move(events), std::move(specs), offset, params, PollingMode::FixedPhase, rng, 0);
}

} // namespace beaconseg
