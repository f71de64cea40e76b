#pragma once

#include <beaconseg/errors.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace beaconseg {

//! How errors in a beaconing subsequence propagate.
//!
//! FixedPhase: every event sits on a fixed grid of multiples of the period and
//! errors do not carry forward. FixedDuration: each period is measured from the
//! mean of the previous one, so errors accumulate like a random walk.
enum class PollingMode { FixedPhase, FixedDuration };

std::string_view to_string(PollingMode mode);
PollingMode parse_polling_mode(std::string_view text);

//! (user, source computer, destination computer) triple naming a network edge.
struct EdgeId {
    std::string user;
    std::string source_computer;
    std::string destination_computer;

    auto operator<=>(const EdgeId&) const = default;
    bool operator==(const EdgeId&) const = default;

    std::string str() const;
};

//! Weakly increasing event times in [0, horizon], seconds from window start.
//!
//! Instances are only created through validate_sequence(), so every live
//! object satisfies the ordering and window invariants. Duplicate times are
//! kept.
class EventSequence {
public:
    EventSequence() = default;

    std::span<const double> times() const { return m_Times; }
    double horizon() const { return m_Horizon; }
    std::size_t size() const { return m_Times.size(); }
    bool empty() const { return m_Times.empty(); }
    double operator[](std::size_t i) const { return m_Times[i]; }
    const std::optional<EdgeId>& edge() const { return m_Edge; }

    bool operator==(const EventSequence&) const = default;

private:
    EventSequence(std::vector<double> times, double horizon, std::optional<EdgeId> edge)
        : m_Times{std::move(times)}, m_Horizon{horizon}, m_Edge{std::move(edge)} {}

    friend EventSequence validate_sequence(std::vector<double>, double, std::optional<EdgeId>);

    std::vector<double> m_Times;
    double m_Horizon = 0.0;
    std::optional<EdgeId> m_Edge;
};

//! Sort and check raw times. Throws NonFiniteTime for NaN/inf (including the
//! horizon) and TimeOutOfWindow for anything outside [0, horizon].
EventSequence validate_sequence(std::vector<double> raw, double horizon,
                                std::optional<EdgeId> edge = std::nullopt);

//! Hurdle/geometric/exponential/von Mises parameters plus the period.
struct ModelParams {
    double p = 0.1;      //!< probability a period is empty
    double r = 0.1;      //!< duplicate geometric parameter
    double q = 0.1;      //!< subsequence-length geometric parameter
    double lambda = 0.1; //!< inactivity rate, 1/seconds
    double kappa = 10.0; //!< von Mises precision
    double period = 1.0; //!< seconds

    //! Throws InvalidParameter unless p, r in (0,1), q in (0,1], lambda,
    //! kappa, period > 0 and all finite.
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

//! Conjugate prior settings: Beta for p, q, r; Gamma(shape, rate) for lambda;
//! von Mises conjugate (c, R0, nu0) for the angular parameters.
struct PriorHyper {
    double alpha_p = 1.0, beta_p = 1.0;
    double alpha_q = 1.0, beta_q = 1.0;
    double alpha_r = 1.0, beta_r = 1.0;
    double alpha_lambda = 1.0, beta_lambda = 1.0;
    double c = 2.0;
    double r0 = 1.9;
    double nu0 = 0.0;

    //! Throws InvalidParameter unless shapes/rates > 0, c >= 0, 0 <= R0 <= c
    //! and nu0 in [0, 2pi).
    void validate() const;

    bool operator==(const PriorHyper&) const = default;
};

//! Changepoints tau_1 < ... < tau_m in (0, n). Segment i covers the 0-based
//! half-open event range [tau_{i-1}, tau_i) with tau_0 = 0 and tau_{m+1} = n,
//! so a changepoint value is also the 0-based index of the first event of
//! the segment it opens.
struct Partition {
    std::vector<std::size_t> changepoints;
    PollingMode mode = PollingMode::FixedPhase;

    //! Throws IndexOutOfRange unless the invariants hold for n events.
    void validate(std::size_t n) const;

    //! Half-open [begin, end) event ranges; empty when n == 0.
    std::vector<std::pair<std::size_t, std::size_t>> segments(std::size_t n) const;

    std::size_t segment_count() const { return changepoints.size() + 1; }

    bool operator==(const Partition&) const = default;
};

enum class EventLabel : std::uint8_t { UserDriven, Automated };

struct EventLabels {
    std::vector<EventLabel> labels;

    std::size_t user_driven_count() const;
    std::vector<std::size_t> user_driven_indices() const;

    bool operator==(const EventLabels&) const = default;
};

//! The first event of every segment is user driven, all others automated.
EventLabels labels_from_partition(const EventSequence& seq, const Partition& part);
EventLabels labels_from_partition(std::size_t n, const Partition& part);

} // namespace beaconseg
