#pragma once

#include <beaconseg/core.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace beaconseg {

struct Rates {
    double tp = 0.0;
    double fp = 0.0;
};

//! Changepoint scoring. A true changepoint counts as found when a detected
//! one lies within `tolerance` indices of it; a detected changepoint is false
//! when no true one lies within `tolerance`. tp divides by |truth| (0 when
//! truth is empty) and fp by the n - 1 - |truth| non-changepoint positions
//! (0 when there are none), so detecting every index gives (1, 1).
Rates tp_fp(std::span<const std::size_t> found, std::span<const std::size_t> truth, std::size_t n,
            std::size_t tolerance = 0);

//! Per-event scoring of user-driven labels: tp over the true initiators, fp
//! over the truly automated events. Throws InvalidParameter on a size
//! mismatch.
Rates label_rates(const EventLabels& found, const EventLabels& truth);

inline constexpr double SECONDS_PER_DAY = 86400.0;

//! Event counts per time-of-day bin; bin b covers
//! [b, b+1) x day/bins of (t mod day). Throws InvalidParameter for bins < 2.
std::vector<std::size_t> histogram_time_of_day(std::span<const double> times, std::size_t bins,
                                               double day = SECONDS_PER_DAY);

//! Chi-square statistic against equal expected counts, with its upper-tail
//! p-value on bins - 1 degrees of freedom.
struct ChiSquare {
    double statistic = 0.0;
    double p_value = 1.0;
};
ChiSquare chi_square_uniform(std::span<const std::size_t> counts);

//! One-sample Kolmogorov-Smirnov test against U(0, 1): statistic D and the
//! asymptotic p-value with Stephens' small-sample correction.
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_uniform(std::vector<double> sample);

//! Kolmogorov distribution upper tail Q(x) = 2 sum (-1)^(j-1) exp(-2 j^2 x^2).
double kolmogorov_q(double x);

//! sup_x (F_a(x) - F_b(x)) over the pooled sample: how far the ECDF of `a`
//! rises above that of `b`.
double ecdf_excess(std::vector<double> a, std::vector<double> b);

//! Empirical CDF of `sample` evaluated at every point of `at`.
std::vector<double> ecdf(std::vector<double> sample, std::span<const double> at);

struct RobustnessReport {
    std::vector<double> c;              //!< mean pairwise disagreement per setting
    std::vector<std::vector<double>> d; //!< disagreement of mean labels between settings
    std::size_t repetitions = 0;
    std::size_t events = 0;
};

//! labels[l][i][k] is 1 when repetition i under setting l marks event k as
//! user driven. c_l is the mean over pairs i < j of the fraction of events
//! labelled differently; d_{l1,l2} the mean absolute difference of the
//! per-event label means. Throws InvalidParameter for fewer than two
//! repetitions or ragged input.
RobustnessReport robustness_metrics(const std::vector<std::vector<std::vector<std::uint8_t>>>& labels);

} // namespace beaconseg
