#include <beaconseg/core.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace beaconseg {

std::string_view to_string(PollingMode mode) {
    return mode == PollingMode::FixedPhase ? "fixed-phase" : "fixed-duration";
}

PollingMode parse_polling_mode(std::string_view text) {
    if (text == "fixed-phase") {
        return PollingMode::FixedPhase;
    }
    if (text == "fixed-duration") {
        return PollingMode::FixedDuration;
    }
    throw InvalidParameter("unknown polling mode '" + std::string{text} + "'");
}

std::string EdgeId::str() const {
    return user + "," + source_computer + "," + destination_computer;
}

EventSequence validate_sequence(std::vector<double> raw, double horizon, std::optional<EdgeId> edge) {
    if (!std::isfinite(horizon)) {
        throw NonFiniteTime("horizon is not finite");
    }
    if (horizon < 0.0) {
        throw TimeOutOfWindow("horizon is negative");
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        double t = raw[i];
        if (!std::isfinite(t)) {
            throw NonFiniteTime("event " + std::to_string(i) + " is not finite");
        }
        if (t < 0.0 || t > horizon) {
            throw TimeOutOfWindow("event " + std::to_string(i) + " at " + std::to_string(t) +
                                  " lies outside [0, " + std::to_string(horizon) + "]");
        }
    }
    std::sort(raw.begin(), raw.end());
    return EventSequence{std::move(raw), horizon, std::move(edge)};
}

void ModelParams::validate() const {
    auto open01 = [](double v) { return std::isfinite(v) && v > 0.0 && v < 1.0; };
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!open01(p)) {
        throw InvalidParameter("p must lie in (0,1)");
    }
    if (!open01(r)) {
        throw InvalidParameter("r must lie in (0,1)");
    }
    if (!(std::isfinite(q) && q > 0.0 && q <= 1.0)) {
        throw InvalidParameter("q must lie in (0,1]");
    }
    if (!positive(lambda)) {
        throw InvalidParameter("lambda must be positive");
    }
    if (!positive(kappa)) {
        throw InvalidParameter("kappa must be positive");
    }
    if (!positive(period)) {
        throw NonPositivePeriod("period must be positive");
    }
}

void PriorHyper::validate() const {
    for (double v : {alpha_p, beta_p, alpha_q, beta_q, alpha_r, beta_r, alpha_lambda, beta_lambda}) {
        if (!(std::isfinite(v) && v > 0.0)) {
            throw InvalidParameter("prior shape and rate parameters must be positive");
        }
    }
    if (!(std::isfinite(c) && c >= 0.0)) {
        throw InvalidParameter("prior sample count c must be non-negative");
    }
    if (!(std::isfinite(r0) && r0 >= 0.0 && r0 <= c)) {
        throw InvalidParameter("prior resultant R0 must lie in [0, c]");
    }
    if (!(std::isfinite(nu0) && nu0 >= 0.0 && nu0 < 2.0 * std::numbers::pi)) {
        throw InvalidParameter("prior mean direction nu0 must lie in [0, 2pi)");
    }
}

void Partition::validate(std::size_t n) const {
    std::size_t previous = 0;
    for (std::size_t tau : changepoints) {
        if (tau <= previous || tau >= n) {
            throw IndexOutOfRange("changepoint " + std::to_string(tau) +
                                  " is not strictly increasing within (0, " + std::to_string(n) + ")");
        }
        previous = tau;
    }
}

std::vector<std::pair<std::size_t, std::size_t>> Partition::segments(std::size_t n) const {
    std::vector<std::pair<std::size_t, std::size_t>> result;
    if (n == 0) {
        return result;
    }
    result.reserve(changepoints.size() + 1);
    std::size_t begin = 0;
    for (std::size_t tau : changepoints) {
        result.emplace_back(begin, tau);
        begin = tau;
    }
    result.emplace_back(begin, n);
    return result;
}

std::size_t EventLabels::user_driven_count() const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), EventLabel::UserDriven));
}

std::vector<std::size_t> EventLabels::user_driven_indices() const {
    std::vector<std::size_t> result;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == EventLabel::UserDriven) {
            result.push_back(i);
        }
    }
    return result;
}

EventLabels labels_from_partition(std::size_t n, const Partition& part) {
    part.validate(n);
    EventLabels result;
    result.labels.assign(n, EventLabel::Automated);
    if (n == 0) {
        return result;
    }
    result.labels[0] = EventLabel::UserDriven;
    for (std::size_t tau : part.changepoints) {
        result.labels[tau] = EventLabel::UserDriven;
    }
    return result;
}

EventLabels labels_from_partition(const EventSequence& seq, const Partition& part) {
    return labels_from_partition(seq.size(), part);
}

} // namespace beaconseg
