#include <beaconseg/core.hpp>
#include <beaconseg/io.hpp>
#include <beaconseg/rng.hpp>

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace beaconseg;

namespace {

std::vector<double> as_vector(const EventSequence& seq) { return {seq.times().begin(), seq.times().end()}; }

constexpr EventLabel U = EventLabel::UserDriven;
constexpr EventLabel A = EventLabel::Automated;

} // namespace

TEST_SUITE("core") {

TEST_CASE("validate_sequence sorts and keeps duplicates") {
    auto seq = validate_sequence({3.0, 1.0, 1.0}, 10.0);
    CHECK(as_vector(seq) == std::vector<double>{1.0, 1.0, 3.0});
    CHECK(seq.horizon() == 10.0);
}

TEST_CASE("validate_sequence accepts an empty window") {
    auto seq = validate_sequence({}, 10.0);
    CHECK(seq.empty());
}

TEST_CASE("validate_sequence rejects bad times") {
    CHECK_THROWS_AS(validate_sequence({-1.0}, 10.0), TimeOutOfWindow);
    CHECK_THROWS_AS(validate_sequence({11.0}, 10.0), TimeOutOfWindow);
    CHECK_THROWS_AS(validate_sequence({std::nan("")}, 10.0), NonFiniteTime);
    CHECK_THROWS_AS(validate_sequence({1.0}, std::numeric_limits<double>::infinity()), NonFiniteTime);
}

TEST_CASE("labels_from_partition") {
    CHECK(labels_from_partition(5, Partition{{2}, PollingMode::FixedPhase}).labels == std::vector{U, A, U, A, A});
    CHECK(labels_from_partition(3, Partition{}).labels == std::vector{U, A, A});
    CHECK(labels_from_partition(4, Partition{{1, 2, 3}, PollingMode::FixedPhase}).labels == std::vector{U, U, U, U});
    CHECK_THROWS_AS(labels_from_partition(4, Partition{{4}, PollingMode::FixedPhase}), IndexOutOfRange);
    CHECK_THROWS_AS(labels_from_partition(4, Partition{{2, 2}, PollingMode::FixedPhase}), IndexOutOfRange);
    CHECK_THROWS_AS(labels_from_partition(4, Partition{{0}, PollingMode::FixedPhase}), IndexOutOfRange);
}

TEST_CASE("property: user-driven count equals segment count") {
    Philox rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng() % 40;
        Partition part;
        for (std::size_t i = 1; i < n; ++i) {
            if (uniform01(rng) < 0.3) {
                part.changepoints.push_back(i);
            }
        }
        auto labels = labels_from_partition(n, part);
        REQUIRE(labels.labels.size() == n);
        CHECK(labels.user_driven_count() == part.segment_count());
        std::vector<std::size_t> expected{0};
        expected.insert(expected.end(), part.changepoints.begin(), part.changepoints.end());
        CHECK(labels.user_driven_indices() == expected);
    }
}

TEST_CASE("partition segments") {
    Partition part{{2, 5}, PollingMode::FixedDuration};
    auto segments = part.segments(7);
    REQUIRE(segments.size() == 3);
    CHECK(segments[0] == std::pair<std::size_t, std::size_t>{0, 2});
    CHECK(segments[1] == std::pair<std::size_t, std::size_t>{2, 5});
    CHECK(segments[2] == std::pair<std::size_t, std::size_t>{5, 7});
    CHECK(Partition{}.segments(0).empty());
}

TEST_CASE("parameter validation") {
    CHECK_NOTHROW(ModelParams{}.validate());
    ModelParams q_one;
    q_one.q = 1.0;
    CHECK_NOTHROW(q_one.validate());
    for (auto mutate : std::vector<void (*)(ModelParams&)>{
             [](ModelParams& m) { m.p = 0.0; }, [](ModelParams& m) { m.r = 1.0; },
             [](ModelParams& m) { m.q = 0.0; }, [](ModelParams& m) { m.lambda = 0.0; },
             [](ModelParams& m) { m.kappa = -1.0; },
             [](ModelParams& m) { m.kappa = std::nan(""); }}) {
        ModelParams bad;
        mutate(bad);
        CHECK_THROWS_AS(bad.validate(), InvalidParameter);
    }
    ModelParams no_period;
    no_period.period = 0.0;
    CHECK_THROWS_AS(no_period.validate(), NonPositivePeriod);
    PriorHyper prior;
    CHECK_NOTHROW(prior.validate());
    prior.r0 = prior.c + 0.1;
    CHECK_THROWS_AS(prior.validate(), InvalidParameter);
    PriorHyper bad_shape;
    bad_shape.alpha_lambda = 0.0;
    CHECK_THROWS_AS(bad_shape.validate(), InvalidParameter);
}

TEST_CASE("polling mode names") {
    CHECK(to_string(PollingMode::FixedPhase) == "fixed-phase");
    CHECK(parse_polling_mode("fixed-duration") == PollingMode::FixedDuration);
    CHECK_THROWS_AS(parse_polling_mode("sideways"), InvalidParameter);
}

TEST_CASE("property: JSON round trip of every core type") {
    using nlohmann::json;
    ModelParams params{0.05, 0.2, 0.3, 0.01, 12.5, 61.25};
    CHECK(json(params).get<ModelParams>() == params);

    PriorHyper prior;
    prior.alpha_p = 2.0;
    prior.beta_lambda = 37.5;
    prior.r0 = 1.25;
    prior.nu0 = 0.5;
    CHECK(json(prior).get<PriorHyper>() == prior);

    Partition part{{3, 8, 9}, PollingMode::FixedDuration};
    CHECK(json(part).get<Partition>() == part);

    EventLabels labels = labels_from_partition(10, part);
    CHECK(json(labels).get<EventLabels>() == labels);

    EdgeId edge{"U514", "C15607", "C528"};
    CHECK(json(edge).get<EdgeId>() == edge);

    auto seq = validate_sequence({0.1, 0.30000000000000004, 7.0, 7.0}, 9.5, edge);
    CHECK(json(seq).get<EventSequence>() == seq);

    CHECK(json(PollingMode::FixedDuration).get<PollingMode>() == PollingMode::FixedDuration);
}

TEST_CASE("prior JSON keeps defaults for missing keys") {
    auto prior = nlohmann::json{{"alpha_p", 3.0}}.get<PriorHyper>();
    PriorHyper expected;
    expected.alpha_p = 3.0;
    CHECK(prior == expected);
}

TEST_CASE("property: event file round trip is exact") {
    Philox rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> raw;
        std::size_t n = rng() % 100;
        for (std::size_t i = 0; i < n; ++i) {
            raw.push_back(uniform(rng, 0.0, 1e6));
        }
        raw.push_back(1e6);
        auto seq = validate_sequence(raw, 1e6);
        for (bool header : {true, false}) {
            std::stringstream buffer;
            write_event_file(buffer, seq, header);
            auto back = read_event_file(buffer, 1e6);
            CHECK(back == seq);
        }
    }
}

TEST_CASE("event file parsing") {
    std::istringstream text("time\n3\n1.5\n\n2\n");
    auto seq = read_event_file(text);
    CHECK(as_vector(seq) == std::vector<double>{1.5, 2.0, 3.0});
    CHECK(seq.horizon() == 3.0);

    std::istringstream bad("1\nabc\n");
    try {
        read_event_file(bad);
        FAIL("expected MalformedLine");
    } catch (const MalformedLine& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("format_double is shortest round trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    double tricky = 0.1 + 0.2;
    CHECK(std::stod(format_double(tricky)) == tricky);
}

TEST_CASE("Philox streams are deterministic and distinct") {
    Philox a(42, 3), b(42, 3), c(42, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        auto x = a();
        CHECK(x == b());
        differs = differs || (x != c());
    }
    CHECK(differs);
    CHECK(a.split(3).seed() == 42);
}

TEST_CASE("Philox uniform draws have the right moments") {
    Philox rng(9);
    double sum = 0.0, sum_sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = uniform01(rng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sum_sq += u * u;
    }
    double mean = sum / n;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.005));
    CHECK(sum_sq / n - mean * mean == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("geometric draws match the {1, 2, ...} support") {
    Philox rng(3);
    const double q = 0.25;
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        auto draw = geometric1(rng, q);
        REQUIRE(draw >= 1);
        sum += static_cast<double>(draw);
    }
    CHECK(sum / n == doctest::Approx(1.0 / q).epsilon(0.02));
    CHECK(geometric1(rng, 1.0) == 1);
}

} // TEST_SUITE
