#include <beaconseg/directional.hpp>
#include <beaconseg/genmodel.hpp>
#include <beaconseg/search.hpp>
#include <beaconseg/segment_cost.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

using namespace beaconseg;

namespace {

constexpr double PI = std::numbers::pi;

// Independent reconstruction of the binning rules: period index per event.
std::vector<std::size_t> oracle_periods(const std::vector<double>& times, double period, PollingMode mode) {
    std::vector<std::size_t> out;
    if (mode == PollingMode::FixedPhase) {
        for (double t : times) {
            out.push_back(static_cast<std::size_t>(std::floor((t - times.front()) / period + 0.5)));
        }
        return out;
    }
    double centre = times.front();
    std::size_t current = 0;
    std::vector<double> members;
    for (double t : times) {
        while (t >= centre + period / 2) {
            if (!members.empty()) {
                centre = std::accumulate(members.begin(), members.end(), 0.0) / static_cast<double>(members.size());
                members.clear();
            }
            centre += period;
            ++current;
        }
        members.push_back(t);
        out.push_back(current);
    }
    return out;
}

// exp(-cost/2) as a direct product of the likelihood factors.
long double direct_likelihood(const std::vector<double>& times, double prev_end, const ModelParams& m,
                              PollingMode mode) {
    auto periods = oracle_periods(times, m.period, mode);
    const std::size_t n_periods = periods.back() + 1;
    std::vector<std::vector<double>> members(n_periods);
    for (std::size_t i = 0; i < times.size(); ++i) {
        members[periods[i]].push_back(times[i]);
    }
    auto angle_of = [&](double t) { return std::fmod(2.0 * PI * t / m.period, 2.0 * PI); };
    auto mean_direction = [&](const std::vector<double>& ts) {
        double c = 0.0, s = 0.0;
        for (double t : ts) {
            c += std::cos(angle_of(t));
            s += std::sin(angle_of(t));
        }
        return std::atan2(s, c);
    };

    const long double x = times.front() - prev_end;
    long double like = m.lambda * std::exp(-(long double)m.lambda * x) * std::pow((long double)(1 - m.q), n_periods - 1) * m.q;
    const long double norm = 2.0L * PI * std::cyl_bessel_i(0.0L, (long double)m.kappa);
    double previous_mean = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t j = 0; j < n_periods; ++j) {
        if (members[j].empty()) {
            like *= m.p;
            continue;
        }
        like *= (1 - m.p) * (1 - m.r) * std::pow((long double)m.r, members[j].size() - 1);
        double nu;
        if (mode == PollingMode::FixedPhase) {
            nu = mean_direction(times);
        } else if (j == 0) {
            nu = mean_direction(members[0]);
        } else {
            nu = angle_of(previous_mean);
        }
        for (double t : members[j]) {
            like *= std::exp((long double)m.kappa * std::cos(angle_of(t) - nu)) / norm;
        }
        previous_mean = std::accumulate(members[j].begin(), members[j].end(), 0.0) /
                        static_cast<double>(members[j].size());
    }
    return like;
}

double accumulated_cost(const std::vector<double>& times, double prev_end, const ModelParams& params,
                        PollingMode mode) {
    auto model = CostModel::make(params, mode);
    SegmentAccumulator acc(model, prev_end);
    for (double t : times) {
        acc.push(t);
    }
    return acc.cost();
}

EventSequence trains(const std::vector<std::pair<double, int>>& starts, double period) {
    std::vector<double> times;
    for (auto [start, count] : starts) {
        for (int k = 0; k < count; ++k) {
            times.push_back(start + period * k);
        }
    }
    return validate_sequence(times, times.back());
}

const ModelParams TRAIN_PARAMS{0.1, 0.1, 0.1, 0.01, 50.0, 1.0};

} // namespace

TEST_SUITE("segmentation") {

TEST_CASE("bin_segment examples") {
    std::vector<double> a{10.0, 11.0, 12.1};
    auto ba = bin_segment(a, 2.0, 1.0, PollingMode::FixedPhase);
    CHECK(ba.n_periods == 3);
    CHECK(ba.counts == std::vector<std::size_t>{1, 1, 1});
    CHECK(ba.x_gap == doctest::Approx(8.0));
    CHECK(ba.anchor == 10.0);

    std::vector<double> b{10.0, 10.05, 12.0};
    auto bb = bin_segment(b, 0.0, 1.0, PollingMode::FixedPhase);
    CHECK(bb.counts == std::vector<std::size_t>{2, 0, 1});
    CHECK(bb.empty_periods() == 1);
    CHECK(bb.nonempty_periods() == 2);
    CHECK(std::isnan(bb.period_means[1]));
    CHECK(bb.period_means[0] == doctest::Approx(10.025));

    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        std::vector<double> drift{10.0, 11.2, 12.4};
        CHECK(bin_segment(drift, 0.0, 1.2, mode).counts == std::vector<std::size_t>{1, 1, 1});
        std::vector<double> more{10.0, 11.3, 12.6};
        CHECK(bin_segment(more, 0.0, 1.2, mode).counts == std::vector<std::size_t>{1, 1, 1});
    }
    CHECK_THROWS_AS(bin_segment(std::vector<double>{}, 0.0, 1.0, PollingMode::FixedPhase), EmptySegment);
    CHECK_THROWS_AS(bin_segment(a, 0.0, 0.0, PollingMode::FixedPhase), NonPositivePeriod);
}

TEST_CASE("fixed-duration centres follow the drift") {
    // A steady 1.1 s cadence binned at P = 1: centres track each mean, fixed
    // phase eventually skips a grid point.
    std::vector<double> times;
    for (int k = 0; k < 12; ++k) {
        times.push_back(100.0 + 1.1 * k);
    }
    auto duration = bin_segment(times, 0.0, 1.0, PollingMode::FixedDuration);
    CHECK(duration.counts == std::vector<std::size_t>(12, 1));
    auto phase = bin_segment(times, 0.0, 1.0, PollingMode::FixedPhase);
    CHECK(phase.empty_periods() > 0);
}

TEST_CASE("property: binning invariants and oracle agreement") {
    Philox rng(12);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> times;
        double t = uniform(rng, 0.0, 5.0);
        std::size_t n = 1 + rng() % 25;
        for (std::size_t i = 0; i < n; ++i) {
            times.push_back(t);
            t += uniform01(rng) < 0.2 ? uniform(rng, 0.0, 0.2) : uniform(rng, 0.6, 2.6);
        }
        for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
            auto b = bin_segment(times, 0.0, 1.0, mode);
            auto oracle = oracle_periods(times, 1.0, mode);
            CHECK(b.event_period == oracle);
            CHECK(std::accumulate(b.counts.begin(), b.counts.end(), std::size_t{0}) == times.size());
            CHECK(b.counts.front() >= 1);
            CHECK(b.counts.back() >= 1);
            CHECK(b.n_periods == oracle.back() + 1);
            for (double z : b.displacements) {
                CHECK(z >= 0.0);
                CHECK(z < TWO_PI);
            }
        }
    }
}

TEST_CASE("single-event segment cost in closed form") {
    const ModelParams m{0.2, 0.3, 0.25, 0.05, 4.0, 2.0};
    const double gap = 7.5;
    double expected = -2.0 * (std::log(m.lambda) - m.lambda * gap + std::log(m.q) + std::log(1 - m.p) +
                              std::log(1 - m.r) + m.kappa - std::log(TWO_PI * std::cyl_bessel_i(0.0, m.kappa)));
    std::vector<double> one{10.0};
    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        CHECK(segment_cost(one, 10.0 - gap, m, mode).value == doctest::Approx(expected).epsilon(1e-12));
        CHECK(accumulated_cost(one, 10.0 - gap, m, mode) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("noiseless segment has zero displacement") {
    const ModelParams m{0.1, 0.1, 0.1, 0.1, 5.0, 1.0};
    std::vector<double> times{3.25, 4.25, 5.25, 6.25};
    const double per_event = m.kappa - std::log(TWO_PI * std::cyl_bessel_i(0.0, m.kappa));
    double expected = -2.0 * (std::log(m.lambda) - m.lambda * 3.25 + 3 * std::log(0.9) + std::log(0.1) +
                              4 * (std::log(0.9) + std::log(0.9) + per_event));
    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        auto cost = segment_cost(times, 0.0, m, mode);
        CHECK(cost.value == doctest::Approx(expected).epsilon(1e-12));
        for (double z : cost.binning.displacements) {
            CHECK(std::min(z, TWO_PI - z) < 1e-9);
        }
    }
}

TEST_CASE("segment cost equals the direct likelihood product") {
    const ModelParams m{0.2, 0.3, 0.25, 0.1, 5.0, 1.0};
    std::vector<double> times{10.0, 10.05, 11.02, 13.01, 14.0, 14.03};
    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        CAPTURE(to_string(mode));
        double value = segment_cost(times, 2.0, m, mode).value;
        long double direct = direct_likelihood(times, 2.0, m, mode);
        CHECK(std::abs(std::exp(-value / 2.0L) / direct - 1.0L) < 1e-10L);
    }
}

TEST_CASE("property: random segments against the direct product and the accumulator") {
    Philox rng(13);
    for (int trial = 0; trial < 400; ++trial) {
        ModelParams m{uniform(rng, 0.05, 0.5), uniform(rng, 0.05, 0.5), uniform(rng, 0.05, 0.9),
                      uniform(rng, 0.01, 1.0), uniform(rng, 0.5, 30.0), uniform(rng, 0.5, 3.0)};
        std::vector<double> times;
        double t = uniform(rng, 1.0, 20.0);
        const double prev_end = t - uniform(rng, 0.0, 1.0);
        std::size_t n = 1 + rng() % 8;
        for (std::size_t i = 0; i < n; ++i) {
            times.push_back(t);
            t += uniform01(rng) < 0.2 ? uniform(rng, 0.0, 0.1) * m.period : m.period * uniform(rng, 0.8, 2.2);
        }
        for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
            double value = segment_cost(times, prev_end, m, mode).value;
            REQUIRE(std::isfinite(value));
            long double oracle = -2.0L * std::log(direct_likelihood(times, prev_end, m, mode));
            CHECK(std::abs(value - oracle) <= 1e-9 * std::max(1.0L, std::abs(oracle)));
            CHECK(accumulated_cost(times, prev_end, m, mode) ==
                  doctest::Approx(value).epsilon(1e-9).scale(1.0));
        }
    }
}

TEST_CASE("extreme probabilities are clamped, not infinite") {
    ModelParams m{1e-300 + 1e-12, 1e-12, 1.0, 1.0, 1e4, 1.0};
    std::vector<double> times{1.0, 1.0, 3.0};
    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        CHECK(std::isfinite(segment_cost(times, 0.0, m, mode).value));
        CHECK(std::isfinite(accumulated_cost(times, 0.0, m, mode)));
    }
}

TEST_CASE("bic_penalty") {
    CHECK(bic_penalty(1, 7.0) == 0.0);
    CHECK(bic_penalty(static_cast<std::size_t>(std::round(std::exp(3.0))), 2.0) ==
          doctest::Approx(2.0 * std::log(20.0)));
    CHECK(2.0 * std::log(std::exp(3.0)) == doctest::Approx(6.0));
    CHECK(bic_penalty(1000, 0.0) == 0.0);
    CHECK_THROWS_AS(bic_penalty(0, 2.0), InvalidParameter);
}

TEST_CASE("a single noiseless train has no changepoint") {
    auto seq = trains({{5.0, 10}}, 1.0);
    double beta = bic_penalty(seq.size(), 2.0);
    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        CHECK(search_op(seq, TRAIN_PARAMS, mode, beta).partition.changepoints.empty());
        CHECK(search_pelt(seq, TRAIN_PARAMS, mode, beta).partition.changepoints.empty());
        CHECK(search_bs(seq, TRAIN_PARAMS, mode, beta).partition.changepoints.empty());
    }
}

TEST_CASE("two separated trains split at the second train") {
    auto seq = trains({{0.0, 6}, {500.3, 6}}, 1.0);
    REQUIRE(seq.size() == 12);
    double beta = bic_penalty(seq.size(), 2.0);
    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        auto exhaustive = search_exhaustive(seq, TRAIN_PARAMS, mode, beta);
        CHECK(exhaustive.partition.changepoints == std::vector<std::size_t>{6});
        auto op = search_op(seq, TRAIN_PARAMS, mode, beta);
        CHECK(op.partition == exhaustive.partition);
        CHECK(op.total_objective == exhaustive.total_objective);
    }
}

TEST_CASE("a hugely negative penalty makes every index a changepoint") {
    auto seq = trains({{0.0, 8}}, 1.0);
    std::vector<std::size_t> all{1, 2, 3, 4, 5, 6, 7};
    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        CHECK(search_op(seq, TRAIN_PARAMS, mode, -1e6).partition.changepoints == all);
        CHECK(search_pelt(seq, TRAIN_PARAMS, mode, -1e6).partition.changepoints == all);
        CHECK(search_bs(seq, TRAIN_PARAMS, mode, -1e6).partition.changepoints == all);
    }
}

TEST_CASE("three equal trains: binary segmentation finds both changepoints") {
    auto seq = trains({{3.0, 10}, {200.4, 10}, {450.7, 10}}, 1.0);
    double beta = bic_penalty(seq.size(), 2.0);
    for (auto mode : {PollingMode::FixedPhase, PollingMode::FixedDuration}) {
        auto bs = search_bs(seq, TRAIN_PARAMS, mode, beta);
        CHECK(bs.partition.changepoints == std::vector<std::size_t>{10, 20});
        CHECK(search_op(seq, TRAIN_PARAMS, mode, beta).partition == bs.partition);
    }
}

TEST_CASE("property: OP equals exhaustive enumeration on small instances") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Philox rng(seed, 77);
        ModelParams truth{0.2, 0.2, 0.4, 0.3, 10.0, 1.0};
        auto mode = seed % 2 ? PollingMode::FixedPhase : PollingMode::FixedDuration;
        auto stream = mode == PollingMode::FixedPhase ? simulate_fixed_phase(truth, 4, rng)
                                                      : simulate_fixed_duration(truth, 4, rng);
        if (stream.seq.size() > 12 || stream.seq.size() < 2) {
            continue;
        }
        double beta = bic_penalty(stream.seq.size(), uniform(rng, -1.0, 4.0));
        auto op = search_op(stream.seq, truth, mode, beta);
        auto brute = search_exhaustive(stream.seq, truth, mode, beta);
        CHECK(op.total_objective == brute.total_objective);
        CHECK(op.partition == brute.partition);
    }
}

TEST_CASE("property: PELT equals OP and objectives are consistent") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Philox rng(seed, 78);
        ModelParams truth{0.1, 0.1, 0.1, 0.1, 20.0, 1.0};
        auto mode = seed % 2 ? PollingMode::FixedPhase : PollingMode::FixedDuration;
        auto stream = mode == PollingMode::FixedPhase ? simulate_fixed_phase(truth, 8, rng)
                                                      : simulate_fixed_duration(truth, 8, rng);
        double beta = bic_penalty(stream.seq.size(), 2.0);
        auto op = search_op(stream.seq, truth, mode, beta);
        auto pelt = search_pelt(stream.seq, truth, mode, beta);
        auto unpruned = search_pelt(stream.seq, truth, mode, beta, -std::numeric_limits<double>::infinity());
        CHECK(pelt.partition == op.partition);
        CHECK(pelt.total_objective == op.total_objective);
        CHECK(unpruned.partition == op.partition);
        CHECK(unpruned.total_objective == op.total_objective);
        CHECK(partition_objective(stream.seq, truth, mode, beta, op.partition) == op.total_objective);
        CHECK(pelt.pruning_stats.size() == stream.seq.size());

        auto bs = search_bs(stream.seq, truth, mode, beta);
        CHECK(bs.total_objective >= pelt.total_objective);
        CHECK(partition_objective(stream.seq, truth, mode, beta, bs.partition) == bs.total_objective);
    }
}

TEST_CASE("PELT candidate sets grow sub-linearly") {
    ModelParams truth{0.1, 0.1, 0.1, 0.1, 20.0, 1.0};
    auto mean_candidates = [&](std::size_t subsequences) {
        Philox rng(5);
        auto stream = simulate_fixed_phase(truth, subsequences, rng);
        auto pelt = search_pelt(stream.seq, truth, PollingMode::FixedPhase, bic_penalty(stream.seq.size(), 2.0));
        double total = std::accumulate(pelt.pruning_stats.begin(), pelt.pruning_stats.end(), 0.0);
        return std::pair{total / static_cast<double>(pelt.pruning_stats.size()), stream.seq.size()};
    };
    auto [small_mean, small_n] = mean_candidates(25);
    auto [large_mean, large_n] = mean_candidates(200);
    double growth = static_cast<double>(large_n) / static_cast<double>(small_n);
    CHECK(growth > 5.0);
    CHECK(large_mean / small_mean < 0.5 * growth);
}

TEST_CASE("property: optimal objective is non-increasing as the penalty decreases") {
    ModelParams truth{0.1, 0.1, 0.2, 0.2, 10.0, 1.0};
    Philox rng(14);
    auto stream = simulate_fixed_duration(truth, 10, rng);
    const std::size_t n = stream.seq.size();
    double previous = std::numeric_limits<double>::infinity();
    std::size_t previous_count = 0;
    for (double alpha : {40.0, 20.0, 10.0, 5.0, 2.0, 0.0, -1.5, -3.0}) {
        auto result = search_op(stream.seq, truth, PollingMode::FixedDuration, bic_penalty(n, alpha));
        CHECK(result.total_objective <= previous);
        CHECK(result.partition.changepoints.size() >= previous_count);
        previous = result.total_objective;
        previous_count = result.partition.changepoints.size();
    }
}

TEST_CASE("property: segment cost depends only on its events and the previous end") {
    ModelParams truth{0.1, 0.2, 0.2, 0.2, 10.0, 1.0};
    Philox rng(15);
    auto stream = simulate_fixed_duration(truth, 6, rng);
    auto times = stream.seq.times();
    auto part = Partition{stream.truth_changepoints, PollingMode::FixedDuration};
    auto segments = part.segments(times.size());
    std::vector<double> forward, shuffled(segments.size());
    for (auto [b, e] : segments) {
        forward.push_back(segment_cost(times.subspan(b, e - b), b ? times[b - 1] : 0.0, truth,
                                       PollingMode::FixedDuration).value);
    }
    std::vector<std::size_t> order(segments.size());
    std::iota(order.begin(), order.end(), 0);
    std::reverse(order.begin(), order.end());
    for (auto s : order) {
        auto [b, e] = segments[s];
        shuffled[s] = segment_cost(times.subspan(b, e - b), b ? times[b - 1] : 0.0, truth,
                                   PollingMode::FixedDuration).value;
    }
    CHECK(forward == shuffled);
}

TEST_CASE("algorithm names and empty input") {
    CHECK(parse_algorithm("pelt") == Algorithm::PELT);
    CHECK(to_string(Algorithm::BS) == "bs");
    CHECK_THROWS_AS(parse_algorithm("dp"), InvalidParameter);
    auto empty = validate_sequence({}, 1.0);
    CHECK_THROWS_AS(search_op(empty, TRAIN_PARAMS, PollingMode::FixedPhase, 1.0), NoEvents);
    CHECK_THROWS_AS(search_pelt(empty, TRAIN_PARAMS, PollingMode::FixedPhase, 1.0), NoEvents);
    CHECK_THROWS_AS(search_bs(empty, TRAIN_PARAMS, PollingMode::FixedPhase, 1.0), NoEvents);
}

} // TEST_SUITE
