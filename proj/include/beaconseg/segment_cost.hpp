#pragma once

#include <beaconseg/core.hpp>
#include <beaconseg/directional.hpp>

#include <cstddef>
#include <span>
#include <vector>

namespace beaconseg {

//! Probability clamp used inside every log of the segment likelihood.
inline constexpr double PROB_CLAMP = 1e-9;

//! Parameter-dependent constants of the segment likelihood, computed once per
//! search.
struct CostModel {
    double log_lambda = 0.0;
    double lambda = 0.0;
    double log_q = 0.0;
    double log_1mq = 0.0;
    double log_p = 0.0;
    double log_1mp = 0.0;
    double log_r = 0.0;
    double log_1mr = 0.0;
    double kappa = 0.0;
    double log_norm = 0.0; //!< log(2 pi I0(kappa))
    double period = 1.0;
    PollingMode mode = PollingMode::FixedPhase;

    static CostModel make(const ModelParams& params, PollingMode mode);
};

//! Period structure of one segment, as inferred from its events.
struct PeriodBinning {
    std::size_t n_periods = 0;
    std::vector<std::size_t> counts;     //!< m_j for j = 1..n_periods
    std::vector<double> period_means;    //!< ybar_j, NaN for empty periods
    std::vector<double> nu_hat;          //!< expected angle per period, NaN when empty
    std::vector<std::size_t> event_period; //!< 0-based period of every event
    std::vector<double> displacements;   //!< (phi - nu_hat) mod 2pi per event
    double anchor = 0.0;                 //!< first event time
    double x_gap = 0.0;

    std::size_t empty_periods() const;
    std::size_t nonempty_periods() const;
};

//! Assign the events of one segment to periods.
//!
//! Fixed phase: j = floor((y - t_first)/P + 1/2) + 1, i.e. the nearest grid
//! point P(j-1) after the first event. Fixed duration: the first period is
//! centred on t_first; an event at or beyond centre + P/2 closes the current
//! period and the next centre is ybar_j + P (non-empty) or centre + P (empty).
//! x_gap = t_first - prev_end. Throws EmptySegment.
PeriodBinning bin_segment(std::span<const double> times, double prev_end, double period, PollingMode mode);

//! Twice the negative log-likelihood of one segment.
struct SegmentCost {
    double value = 0.0;
    PeriodBinning binning;
};

//! Evaluates the cost from an explicit binning. Fixed phase uses the mean
//! direction of all segment angles; fixed duration uses the angle of the
//! previous non-empty period mean, with the first period anchored on its own
//! mean direction. Throws EmptySegment.
SegmentCost segment_cost(std::span<const double> times, double prev_end, const ModelParams& params,
                         PollingMode mode);

//! Running segment cost with O(1) push and O(1) evaluation. Pushing the
//! events of a segment in order and calling cost() gives the same value as
//! segment_cost() up to rounding.
class SegmentAccumulator {
public:
    SegmentAccumulator() = default;
    SegmentAccumulator(const CostModel& model, double prev_end) : m_Model{&model}, m_PrevEnd{prev_end} {}

    void push(double time);
    double cost() const;
    std::size_t events() const { return m_Events; }

private:
    const CostModel* m_Model = nullptr;
    double m_PrevEnd = 0.0;
    double m_First = 0.0;
    std::size_t m_Events = 0;
    std::size_t m_Periods = 0;  //!< index of the current (last) period
    std::size_t m_Nonempty = 0;
    // Fixed phase: resultant of all angles.
    Resultant m_All;
    // Fixed duration state.
    Resultant m_FirstPeriod;
    double m_CosSum = 0.0;
    double m_Centre = 0.0;
    double m_Nu = 0.0;
    double m_Sum = 0.0;
    std::size_t m_Count = 0;
};

//! beta_n = alpha log n. Throws InvalidParameter for n = 0.
double bic_penalty(std::size_t n, double alpha);

} // namespace beaconseg
