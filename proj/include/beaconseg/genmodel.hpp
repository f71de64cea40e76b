#pragma once

#include <beaconseg/core.hpp>
#include <beaconseg/rng.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace beaconseg {

//! Draws behind one polling subsequence.
struct SubsequenceSpec {
    double x = 0.0;                   //!< inactivity gap before the subsequence
    std::size_t n_periods = 1;        //!< number of beaconing periods, >= 1
    std::vector<std::size_t> counts;  //!< events observed in each period

    std::size_t event_count() const;
};

//! Where an observed event came from: subsequence i, period j, k-th event of
//! that period, all 1-based.
struct EventOrigin {
    std::size_t subsequence = 0;
    std::size_t period = 0;
    std::size_t k = 0;

    bool operator==(const EventOrigin&) const = default;
};

//! A simulated stream with ground truth.
struct LabeledStream {
    EventSequence seq;
    EventLabels truth;
    //! Changepoints in the Partition convention: the flat index of the first
    //! event of every subsequence after the first.
    std::vector<std::size_t> truth_changepoints;
    std::vector<SubsequenceSpec> subsequences;
    //! origins[idx] is the (i, j, k) of flat event idx.
    std::vector<EventOrigin> origins;
    //! Subsequences regenerated because every period came up empty.
    std::size_t redraws = 0;
    ModelParams params;
    PollingMode mode = PollingMode::FixedPhase;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;

    //! 0-based flat index of event (i, j, k): the count of all events in
    //! earlier subsequences and earlier periods, plus k - 1.
    std::size_t sigma(std::size_t i, std::size_t j, std::size_t k) const;

    Partition truth_partition() const { return Partition{truth_changepoints, mode}; }
};

//! Hurdle geometric count: P(0) = p, P(m) = (1-p)(1-r) r^(m-1) for m >= 1.
std::size_t sample_hurdle_count(double p, double r, Philox& rng);

//! Event time of the k-th draw theta in period j of a fixed-phase
//! subsequence: offset + x + P((j-1) + theta/2pi), where offset is the end of
//! all earlier subsequences.
double fixed_phase_time(double offset, double x, std::size_t period_index, double theta, double period);

//! S subsequences of fixed-phase polling. Within each period the angles are
//! sorted draws from M(pi, kappa).
LabeledStream simulate_fixed_phase(const ModelParams& params, std::size_t subsequences, Philox& rng);

//! S subsequences of fixed-duration polling. Each period is anchored one
//! period after the mean of the previous period (or the propagated anchor
//! when that period is empty), and every event carries a von Mises error
//! z' in (-pi, pi] applied as P z'/(2 pi). The whole stream is shifted by P/2
//! so that every time is non-negative.
LabeledStream simulate_fixed_duration(const ModelParams& params, std::size_t subsequences, Philox& rng);

//! Generator of the periodogram study: exponential gaps, geometric period
//! counts, one event per period at the period midpoint plus
//! U(-0.2, 0.2) P noise.
LabeledStream sample_perturbed_uniform_stream(double lambda, double q, std::size_t subsequences, double period,
                                              Philox& rng);

} // namespace beaconseg
