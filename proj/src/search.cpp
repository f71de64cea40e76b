#include <beaconseg/search.hpp>

#include <beaconseg/segment_cost.hpp>

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>
#include <utility>

namespace beaconseg {

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::BS:
        return "bs";
    case Algorithm::OP:
        return "op";
    case Algorithm::PELT:
        return "pelt";
    }
    return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
    if (text == "bs") {
        return Algorithm::BS;
    }
    if (text == "op") {
        return Algorithm::OP;
    }
    if (text == "pelt") {
        return Algorithm::PELT;
    }
    throw InvalidParameter("unknown algorithm '" + std::string(text) + "' (expected bs, op or pelt)");
}

namespace {

double prev_end_of(std::span<const double> times, std::size_t begin) { return begin == 0 ? 0.0 : times[begin - 1]; }

double range_cost(std::span<const double> times, const CostModel& model, std::size_t begin, std::size_t end) {
    SegmentAccumulator acc(model, prev_end_of(times, begin));
    for (std::size_t i = begin; i < end; ++i) {
        acc.push(times[i]);
    }
    return acc.cost();
}

void require_events(const EventSequence& seq) {
    if (seq.empty()) {
        throw NoEvents("changepoint search needs at least one event");
    }
}

std::vector<std::size_t> backtrack(const std::vector<std::size_t>& last, std::size_t n) {
    std::vector<std::size_t> changepoints;
    for (std::size_t s = n; last[s] > 0; s = last[s]) {
        changepoints.push_back(last[s]);
    }
    std::reverse(changepoints.begin(), changepoints.end());
    return changepoints;
}

struct Candidate {
    std::size_t t;
    SegmentAccumulator acc;
};

SearchResult dynamic_program(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta,
                             bool prune, double pruning_constant) {
    require_events(seq);
    const CostModel model = CostModel::make(params, mode);
    const auto times = seq.times();
    const std::size_t n = times.size();

    std::vector<double> best(n + 1, 0.0);
    std::vector<std::size_t> last(n + 1, 0);
    best[0] = -beta;
    std::vector<Candidate> candidates;
    candidates.reserve(n);
    std::vector<double> costs;
    SearchResult result;
    result.algorithm = prune ? Algorithm::PELT : Algorithm::OP;

    for (std::size_t s = 1; s <= n; ++s) {
        candidates.push_back({s - 1, SegmentAccumulator(model, prev_end_of(times, s - 1))});
        if (prune) {
            result.pruning_stats.push_back(candidates.size());
        }
        costs.resize(candidates.size());
        double minimum = std::numeric_limits<double>::infinity();
        std::size_t argmin = 0;
        for (std::size_t c = 0; c < candidates.size(); ++c) {
            auto& cand = candidates[c];
            cand.acc.push(times[s - 1]);
            costs[c] = cand.acc.cost();
            double value = (best[cand.t] + costs[c]) + beta;
            if (value < minimum) {
                minimum = value;
                argmin = cand.t;
            }
        }
        best[s] = minimum;
        last[s] = argmin;
        if (prune) {
            std::size_t keep = 0;
            for (std::size_t c = 0; c < candidates.size(); ++c) {
                if (!((best[candidates[c].t] + costs[c]) + pruning_constant > minimum)) {
                    candidates[keep++] = candidates[c];
                }
            }
            candidates.resize(keep);
        }
    }
    result.partition = Partition{backtrack(last, n), mode};
    result.total_objective = best[n];
    return result;
}

} // namespace

double partition_objective(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta,
                           const Partition& partition) {
    require_events(seq);
    partition.validate(seq.size());
    const CostModel model = CostModel::make(params, mode);
    double total = -beta;
    for (auto [begin, end] : partition.segments(seq.size())) {
        total = (total + range_cost(seq.times(), model, begin, end)) + beta;
    }
    return total;
}

SearchResult search_op(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta) {
    return dynamic_program(seq, params, mode, beta, false, 0.0);
}

double default_pruning_constant(const ModelParams& params) {
    return -(2.0 * std::abs(std::log(params.lambda)) + 2.0 * std::abs(std::log(params.q)) + 100.0);
}

SearchResult search_pelt(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta,
                         std::optional<double> pruning_constant) {
    return dynamic_program(seq, params, mode, beta, true, pruning_constant.value_or(default_pruning_constant(params)));
}

SearchResult search_bs(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta,
                       double min_gain) {
    require_events(seq);
    const CostModel model = CostModel::make(params, mode);
    const auto times = seq.times();
    std::vector<std::size_t> changepoints;
    std::deque<std::pair<std::size_t, std::size_t>> pending{{0, times.size()}};

    while (!pending.empty()) {
        auto [begin, end] = pending.front();
        pending.pop_front();
        if (end - begin < 2) {
            continue;
        }
        const double whole = range_cost(times, model, begin, end);
        SegmentAccumulator left(model, prev_end_of(times, begin));
        left.push(times[begin]);
        double best = std::numeric_limits<double>::infinity();
        std::size_t split = 0;
        for (std::size_t k = begin + 1; k < end; ++k) {
            double value = left.cost() + range_cost(times, model, k, end);
            if (value < best) {
                best = value;
                split = k;
            }
            left.push(times[k]);
        }
        if (whole - best > beta + min_gain) {
            changepoints.push_back(split);
            pending.emplace_back(begin, split);
            pending.emplace_back(split, end);
        }
    }
    std::sort(changepoints.begin(), changepoints.end());
    SearchResult result;
    result.algorithm = Algorithm::BS;
    result.partition = Partition{std::move(changepoints), mode};
    result.total_objective = partition_objective(seq, params, mode, beta, result.partition);
    return result;
}

SearchResult search(const EventSequence& seq, const ModelParams& params, PollingMode mode, Algorithm algorithm,
                    double beta) {
    switch (algorithm) {
    case Algorithm::BS:
        return search_bs(seq, params, mode, beta);
    case Algorithm::OP:
        return search_op(seq, params, mode, beta);
    case Algorithm::PELT:
        return search_pelt(seq, params, mode, beta);
    }
    throw InvalidParameter("unknown algorithm");
}

SearchResult search_exhaustive(const EventSequence& seq, const ModelParams& params, PollingMode mode, double beta) {
    require_events(seq);
    const std::size_t n = seq.size();
    if (n > 24) {
        throw InvalidParameter("exhaustive search is limited to 24 events");
    }
    SearchResult result;
    result.algorithm = Algorithm::OP;
    result.total_objective = std::numeric_limits<double>::infinity();
    const std::uint64_t masks = std::uint64_t{1} << (n - 1);
    for (std::uint64_t mask = 0; mask < masks; ++mask) {
        Partition candidate{{}, mode};
        for (std::size_t bit = 0; bit + 1 < n; ++bit) {
            if (mask & (std::uint64_t{1} << bit)) {
                candidate.changepoints.push_back(bit + 1);
            }
        }
        double value = partition_objective(seq, params, mode, beta, candidate);
        if (value < result.total_objective) {
            result.total_objective = value;
            result.partition = std::move(candidate);
        }
    }
    return result;
}

} // namespace beaconseg
