#include <beaconseg/inference.hpp>

#include <beaconseg/segment_cost.hpp>
#include <beaconseg/spectral.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace beaconseg {

SufficientStats collect_stats(const EventSequence& seq, const Partition& partition, double period, PollingMode mode) {
    partition.validate(seq.size());
    SufficientStats stats;
    const auto times = seq.times();
    for (auto [begin, end] : partition.segments(seq.size())) {
        double prev_end = begin == 0 ? 0.0 : times[begin - 1];
        PeriodBinning b = bin_segment(times.subspan(begin, end - begin), prev_end, period, mode);
        ++stats.n_segments;
        stats.total_periods += b.n_periods;
        stats.total_events += end - begin;
        for (auto m : b.counts) {
            if (m == 0) {
                ++stats.n_empty_periods;
            } else {
                ++stats.n_nonempty_periods;
                stats.total_duplicates += m - 1;
            }
        }
        stats.gaps.push_back(b.x_gap);
        stats.displacements.insert(stats.displacements.end(), b.displacements.begin(), b.displacements.end());
    }
    return stats;
}

ParamUpdate update_params(const SufficientStats& stats, const PriorHyper& prior, const MhConfig& mh,
                          const ModelParams& current, Philox& rng) {
    prior.validate();
    const auto empty = static_cast<double>(stats.n_empty_periods);
    const auto full = static_cast<double>(stats.n_nonempty_periods);
    const auto dups = static_cast<double>(stats.total_duplicates);
    const auto segments = static_cast<double>(stats.n_segments);
    const auto extra_periods = static_cast<double>(stats.total_periods - stats.n_segments);
    double gap_sum = 0.0;
    for (double x : stats.gaps) {
        gap_sum += x;
    }

    ParamUpdate update;
    update.params = current;
    update.params.p = (prior.alpha_p + empty) / (prior.alpha_p + prior.beta_p + empty + full);
    update.params.r = (prior.alpha_r + dups) / (prior.alpha_r + prior.beta_r + dups + full);
    update.params.q = (prior.alpha_q + segments) / (prior.alpha_q + prior.beta_q + segments + extra_periods);
    update.params.lambda = (prior.alpha_lambda + segments) / (prior.beta_lambda + gap_sum);

    PriorHyper centred = prior;
    centred.nu0 = 0.0;
    VmPosterior post = vm_posterior(centred, stats.displacements);
    update.mh = vm_kappa_mh(post, mh, rng);
    update.params.kappa = update.mh.kappa_mean;
    return update;
}

double update_period(const EventSequence& seq, const Partition& partition, double current, PollingMode mode) {
    partition.validate(seq.size());
    const auto times = seq.times();
    std::vector<double> widths;
    for (auto [begin, end] : partition.segments(seq.size())) {
        double prev_end = begin == 0 ? 0.0 : times[begin - 1];
        PeriodBinning b = bin_segment(times.subspan(begin, end - begin), prev_end, current, mode);
        std::optional<std::size_t> previous;
        for (std::size_t j = 0; j < b.n_periods; ++j) {
            if (b.counts[j] == 0) {
                continue;
            }
            if (previous) {
                double span = static_cast<double>(j - *previous);
                widths.push_back((b.period_means[j] - b.period_means[*previous]) / span);
            }
            previous = j;
        }
    }
    if (widths.empty()) {
        return current;
    }
    double updated = median(std::move(widths));
    return updated > 0.0 ? updated : current;
}

PriorHyper default_prior(const EventSequence& seq, double period) {
    PriorHyper prior;
    const auto times = seq.times();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        double gap = times[i] - times[i - 1];
        if (gap > 1.5 * period) {
            sum += gap;
            ++count;
        }
    }
    double mean_gap = count > 0 ? sum / static_cast<double>(count) : seq.horizon();
    if (!(mean_gap > 0.0)) {
        mean_gap = period;
    }
    prior.beta_lambda = mean_gap;
    return prior;
}

ModelParams prior_means(const PriorHyper& prior, double period) {
    prior.validate();
    ModelParams params;
    params.p = prior.alpha_p / (prior.alpha_p + prior.beta_p);
    params.q = prior.alpha_q / (prior.alpha_q + prior.beta_q);
    params.r = prior.alpha_r / (prior.alpha_r + prior.beta_r);
    params.lambda = prior.alpha_lambda / prior.beta_lambda;
    params.kappa = vm_kappa_marginal_mean(VmPosterior{prior.c, prior.r0, prior.nu0});
    params.period = period;
    params.validate();
    return params;
}

FitState fit(const EventSequence& seq, double initial_period, const PriorHyper& prior, PollingMode mode,
             const FitOptions& options, Philox& rng) {
    if (seq.empty()) {
        throw NoEvents("cannot fit an empty sequence");
    }
    if (!(initial_period > 0.0)) {
        throw NonPositivePeriod("initial period must be positive");
    }
    if (options.max_iters == 0) {
        throw InvalidParameter("max_iters must be at least 1");
    }
    const double beta = bic_penalty(seq.size(), options.alpha);
    FitState state;
    ModelParams params = prior_means(prior, initial_period);

    std::optional<Partition> previous;
    FitState best;
    best.objective = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= options.max_iters; ++it) {
        SearchResult found = search(seq, params, mode, options.algorithm, beta);
        state.history.push_back({found.total_objective, params, found.partition.changepoints.size(), 0.0});
        state.iterations = it;
        if (found.total_objective < best.objective) {
            best.objective = found.total_objective;
            best.params = params;
            best.partition = found.partition;
        }
        if (previous && found.partition == *previous) {
            state.converged = true;
            state.params = params;
            state.partition = found.partition;
            state.objective = found.total_objective;
            break;
        }
        previous = found.partition;

        SufficientStats stats = collect_stats(seq, found.partition, params.period, mode);
        ParamUpdate update = update_params(stats, prior, options.mh, params, rng);
        state.history.back().mh_acceptance = update.mh.acceptance_rate;
        double period = update_period(seq, found.partition, params.period, mode);
        params = update.params;
        params.period = period;
    }
    if (!state.converged) {
        state.params = best.params;
        state.partition = best.partition;
        state.objective = best.objective;
    }
    state.labels = labels_from_partition(seq, state.partition);
    return state;
}

} // namespace beaconseg
