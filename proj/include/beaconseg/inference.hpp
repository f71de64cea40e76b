#pragma once

#include <beaconseg/core.hpp>
#include <beaconseg/directional.hpp>
#include <beaconseg/rng.hpp>
#include <beaconseg/search.hpp>

#include <cstddef>
#include <vector>

namespace beaconseg {

//! Counts and samples behind the conjugate updates, pooled over segments.
struct SufficientStats {
    std::size_t n_empty_periods = 0;
    std::size_t n_nonempty_periods = 0;
    std::size_t total_events = 0;
    std::size_t total_duplicates = 0; //!< sum of (m - 1) over non-empty periods
    std::size_t n_segments = 0;
    std::size_t total_periods = 0;    //!< sum of n_i
    std::vector<double> gaps;          //!< x_i per segment
    std::vector<double> displacements; //!< zhat per event, in [0, 2pi)
};

SufficientStats collect_stats(const EventSequence& seq, const Partition& partition, double period, PollingMode mode);

struct ParamUpdate {
    ModelParams params;
    MhResult mh;
};

//! Posterior means of p, r, q, lambda and the MH posterior mean of kappa
//! (prior direction forced to 0, the expected displacement). The period is
//! carried over from `current`.
ParamUpdate update_params(const SufficientStats& stats, const PriorHyper& prior, const MhConfig& mh,
                          const ModelParams& current, Philox& rng);

//! Median of the per-segment period-mean differences; a difference spanning
//! s periods contributes once as w / s. Returns `current` when no
//! difference exists.
double update_period(const EventSequence& seq, const Partition& partition, double current, PollingMode mode);

//! Beta(1,1) for p, q, r; Gamma(1, g) for lambda with g the mean of the
//! inter-event gaps longer than 1.5 P (the horizon when there are none);
//! (c, R0, nu0) = (2, 1.9, 0).
PriorHyper default_prior(const EventSequence& seq, double period);

//! Prior means of every parameter; kappa from its prior marginal.
ModelParams prior_means(const PriorHyper& prior, double period);

struct FitOptions {
    Algorithm algorithm = Algorithm::PELT;
    double alpha = 2.0;
    std::size_t max_iters = 25;
    MhConfig mh;
};

struct IterationRecord {
    double objective = 0.0;
    ModelParams params; //!< parameters the search of this iteration used
    std::size_t changepoints = 0;
    double mh_acceptance = 0.0; //!< of the update that followed, 0 if none
};

struct FitState {
    ModelParams params;
    Partition partition;
    EventLabels labels;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> history;
};

//! Alternates search, parameter update and period update until two
//! successive searches return the same partition. On convergence the result
//! holds the fixed-point partition and the parameters that produced it;
//! otherwise the iterate with the lowest objective is returned with
//! converged = false. Throws NoEvents.
FitState fit(const EventSequence& seq, double initial_period, const PriorHyper& prior, PollingMode mode,
             const FitOptions& options, Philox& rng);

} // namespace beaconseg
