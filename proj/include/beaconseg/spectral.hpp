#pragma once

#include <beaconseg/core.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace beaconseg {

struct BinnedCounts {
    double bin_width = 1.0;
    std::vector<std::int64_t> counts; //!< events per bin over [0, horizon)
    std::vector<double> centered;     //!< counts minus their mean
};

//! N = ceil(horizon / bin_width) consecutive bins starting at 0; an event at
//! exactly the horizon falls in the last bin. Throws DegenerateBinning for a
//! non-positive width or horizon.
BinnedCounts binned_counts(const EventSequence& seq, double bin_width);

struct PeriodogramPoint {
    double frequency = 0.0; //!< cycles per second
    double power = 0.0;
};

struct GTestOptions {
    double bin_width = 1.0;
    //! Optional band of periods (seconds) the maximisation is restricted to.
    //! Frequencies outside the band are excluded from both the maximum and the
    //! normalising sum, so Fisher's null distribution still applies.
    std::optional<double> min_period;
    std::optional<double> max_period;
};

struct GTestResult {
    double g = 0.0;
    double p_value = 1.0;
    double peak_frequency = 0.0;
    double candidate_period = 0.0;
    std::size_t bins = 0;     //!< N
    std::size_t retained = 0; //!< N*, frequencies in the test
    //! Periodogram at Fourier frequencies j/(N w), j = 1..floor(N/2), with
    //! S(f_j) = |X_j|^2 / N.
    std::vector<PeriodogramPoint> periodogram;
};

//! Fisher's g test for a single hidden periodicity on the binned counts.
//! g = max S / sum S over the retained Fourier frequencies (f = 0 and the
//! even-N Nyquist term are always excluded). Throws DegenerateBinning when
//! fewer than 8 bins or 2 retained frequencies are available and
//! TooFewEvents below 4 events.
GTestResult g_test(const EventSequence& seq, const GTestOptions& options);
GTestResult g_test(const EventSequence& seq, double bin_width);

//! Exact upper-tail probability P(G >= g) with N* retained ordinates:
//! sum_{j=1}^{floor(1/g)} (-1)^(j-1) C(N*, j) (1 - j g)^(N*-1), evaluated in
//! 50-digit arithmetic and clamped to [0, 1].
double fisher_g_pvalue(double g, std::size_t retained);

struct RefinedPeriod {
    double period = 0.0;
    bool fallback = false; //!< no gap qualified; the candidate was returned
    std::size_t gaps_used = 0;
};

//! Median of the inter-event gaps lying within [0.5, 1.5] x candidate.
RefinedPeriod refine_period(const EventSequence& seq, double candidate_period);

//! Guards against a harmonic peak: while more inter-event gaps fall in
//! [1.5, 2.5] x candidate than in [0.5, 1.5] x candidate, the candidate is
//! doubled (never beyond max_period).
double correct_harmonic(const EventSequence& seq, double candidate_period,
                        std::optional<double> max_period = std::nullopt);

//! Median of a sample (mean of the two middle values for even sizes).
double median(std::vector<double> values);

} // namespace beaconseg
