#include <beaconseg/bessel.hpp>
#include <beaconseg/directional.hpp>
#include <beaconseg/rng.hpp>

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace beaconseg;

namespace {

constexpr double PI = std::numbers::pi;

std::vector<double> vm_sample(double mu, double kappa, std::size_t n, std::uint64_t seed) {
    Philox rng(seed);
    std::vector<double> out(n);
    for (auto& angle : out) {
        angle = von_mises(rng, mu, kappa);
    }
    return out;
}

// Trapezoid rule on a periodic integrand converges geometrically.
double integrate_circle(const VonMises& dist, std::size_t points) {
    double sum = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        sum += vm_density(TWO_PI * static_cast<double>(i) / static_cast<double>(points), dist);
    }
    return sum * TWO_PI / static_cast<double>(points);
}

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), TWO_PI);
    return std::min(d, TWO_PI - d);
}

} // namespace

TEST_SUITE("directional") {

TEST_CASE("Bessel functions against the standard library") {
    for (double x = 0.0; x <= 700.0; x += (x < 20.0 ? 0.125 : 3.7)) {
        CAPTURE(x);
        CHECK(bessel::i0(x) == doctest::Approx(std::cyl_bessel_i(0.0, x)).epsilon(1e-12));
        CHECK(bessel::i1(x) == doctest::Approx(std::cyl_bessel_i(1.0, x)).epsilon(1e-12));
        CHECK(bessel::log_i0(x) == doctest::Approx(std::log(std::cyl_bessel_i(0.0, x))).epsilon(1e-12));
        CHECK(bessel::ratio_a(x) ==
              doctest::Approx(std::cyl_bessel_i(1.0, x) / std::cyl_bessel_i(0.0, x)).epsilon(1e-12));
    }
}

TEST_CASE("Bessel log and scaled forms stay finite past overflow") {
    const double x = 1e5;
    // log I0(x) ~ x - log(2 pi x)/2 + log(1 + 1/(8x) + 9/(128 x^2)).
    double expected = x - 0.5 * std::log(TWO_PI * x) + std::log1p(1.0 / (8.0 * x) + 9.0 / (128.0 * x * x));
    CHECK(bessel::log_i0(x) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(std::isfinite(bessel::i0_scaled(x)));
    CHECK(bessel::ratio_a(1e4) == doctest::Approx(1.0 - 1.0 / (2e4) - 1.0 / (8e8)).epsilon(1e-12));
}

TEST_CASE("ratio derivative matches a central difference") {
    for (double x : {0.0, 0.3, 1.0, 2.0, 7.5, 14.9, 15.1, 40.0, 500.0}) {
        CAPTURE(x);
        const double h = 1e-5;
        double numeric = x < h ? bessel::ratio_a(h) / h
                               : (bessel::ratio_a(x + h) - bessel::ratio_a(x - h)) / (2.0 * h);
        CHECK(bessel::ratio_a_derivative(x) == doctest::Approx(numeric).epsilon(1e-6));
    }
}

TEST_CASE("angular_position") {
    CHECK(angular_position(0.0, 1.0) == 0.0);
    CHECK(angular_position(1.25, 1.0) == doctest::Approx(PI / 2));
    // 7.5 / 3 = 2.5 cycles, so half a turn.
    CHECK(angular_position(7.5, 3.0) == doctest::Approx(std::fmod(TWO_PI * 7.5 / 3.0, TWO_PI)));
    CHECK(angular_position(7.5, 3.0) == doctest::Approx(PI));
    CHECK_THROWS_AS(angular_position(1.0, 0.0), NonPositivePeriod);
    CHECK(wrap_angle(-0.5) == doctest::Approx(TWO_PI - 0.5));
    CHECK(wrap_angle(TWO_PI) == 0.0);
}

TEST_CASE("circular_summary examples") {
    std::vector<double> same{PI / 2, PI / 2};
    auto s = circular_summary(same);
    CHECK(s.mean_direction == doctest::Approx(PI / 2));
    CHECK(s.resultant_length == doctest::Approx(1.0));
    CHECK(s.circular_variance == doctest::Approx(0.0));

    std::vector<double> opposite{0.0, PI};
    CHECK_THROWS_AS(circular_summary(opposite), DegenerateMean);
    CHECK_THROWS_AS(circular_summary(std::vector<double>{}), EmptySample);

    // Vector sum (1, 1) / 2.
    std::vector<double> quarter{0.0, PI / 2};
    auto q = circular_summary(quarter);
    CHECK(q.mean_direction == doctest::Approx(std::atan2(0.5, 0.5)));
    CHECK(q.resultant_length == doctest::Approx(std::hypot(0.5, 0.5)));
}

TEST_CASE("mean direction resolves every quadrant") {
    for (double theta : {0.3, 2.0, 3.5, 5.9}) {
        std::vector<double> sample{theta - 0.1, theta + 0.1};
        CHECK(circular_summary(sample).mean_direction == doctest::Approx(theta));
    }
}

TEST_CASE("property: summary bounds and rotation equivariance") {
    Philox rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + rng() % 30;
        double kappa = uniform(rng, 0.5, 20.0);
        std::vector<double> angles(n);
        for (auto& a : angles) {
            a = von_mises(rng, uniform(rng, 0.0, TWO_PI), kappa);
        }
        auto base = circular_summary(angles);
        CHECK(base.resultant_length >= 0.0);
        CHECK(base.resultant_length <= 1.0 + 1e-15);
        CHECK(base.circular_variance == 1.0 - base.resultant_length);

        double delta = uniform(rng, 0.0, TWO_PI);
        std::vector<double> rotated(n);
        for (std::size_t i = 0; i < n; ++i) {
            rotated[i] = wrap_angle(angles[i] + delta);
        }
        auto turned = circular_summary(rotated);
        CHECK(circular_distance(turned.mean_direction, base.mean_direction + delta) < 1e-12);
        CHECK(turned.resultant_length == doctest::Approx(base.resultant_length).epsilon(1e-12));
        CHECK(turned.circular_variance == doctest::Approx(base.circular_variance).epsilon(1e-12));
        if (base.resultant_length < 0.999) {
            CHECK(vm_mle(rotated).dist.kappa == doctest::Approx(vm_mle(angles).dist.kappa).epsilon(1e-9));
        }
    }
}

TEST_CASE("vm_density examples and normalisation") {
    CHECK(vm_density(1.0, VonMises{1.0, 0.0}) == doctest::Approx(1.0 / TWO_PI));
    double i0_2 = std::cyl_bessel_i(0.0, 2.0);
    CHECK(vm_density(0.5, VonMises{0.5, 2.0}) == doctest::Approx(std::exp(2.0) / (TWO_PI * i0_2)).epsilon(1e-12));
    CHECK(vm_density(0.5, VonMises{0.5, 2.0}) == doctest::Approx(0.5159).epsilon(1e-3));
    for (double kappa : {0.0, 0.5, 2.0, 5.0, 50.0}) {
        CAPTURE(kappa);
        CHECK(std::abs(integrate_circle(VonMises{1.3, kappa}, 4096) - 1.0) < 1e-9);
    }
}

TEST_CASE("inverse_ratio_a") {
    double a2 = std::cyl_bessel_i(1.0, 2.0) / std::cyl_bessel_i(0.0, 2.0);
    CHECK(a2 == doctest::Approx(0.6978).epsilon(1e-4));
    CHECK(inverse_ratio_a(0.6978) == doctest::Approx(2.0).epsilon(0.005));
    CHECK(inverse_ratio_a(a2) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(inverse_ratio_a(0.0) == 0.0);
    CHECK(inverse_ratio_a(1e-6) == doctest::Approx(2e-6).epsilon(1e-3));
    CHECK(inverse_ratio_a(0.9999999) == KAPPA_MAX);
}

TEST_CASE("vm_mle on a constructed sample with known resultant") {
    // Angles pi +- a have mean direction pi and Rbar = cos a.
    const double a = std::acos(0.6978);
    std::vector<double> sample{PI - a, PI + a, PI - a, PI + a};
    auto fit = vm_mle(sample);
    CHECK(fit.dist.nu == doctest::Approx(PI));
    CHECK(fit.resultant_length == doctest::Approx(0.6978).epsilon(1e-12));
    CHECK(fit.dist.kappa == doctest::Approx(2.0).epsilon(0.005));
    CHECK(std::abs(bessel::ratio_a(fit.dist.kappa) - 0.6978) < 1e-10);
}

TEST_CASE("vm_mle recovers M(pi, 2) from 10^4 draws") {
    auto sample = vm_sample(PI, 2.0, 10000, 2024);
    auto fit = vm_mle(sample);
    CHECK(fit.dist.kappa >= 1.9);
    CHECK(fit.dist.kappa <= 2.1);
    CHECK(circular_distance(fit.dist.nu, PI) < 0.05);
}

TEST_CASE("vm_mle error cases") {
    CHECK_THROWS_AS(vm_mle(std::vector<double>{1.0}), EmptySample);
    CHECK_THROWS_AS(vm_mle(std::vector<double>{0.0, PI}), DegenerateMean);
    auto saturated = vm_mle(std::vector<double>{1.0, 1.0, 1.0});
    CHECK(saturated.saturated);
    CHECK(saturated.dist.kappa == KAPPA_MAX);
}

TEST_CASE("property: MLE is a local maximum of the log likelihood") {
    Philox rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        auto sample = vm_sample(uniform(rng, 0.0, TWO_PI), uniform(rng, 0.5, 10.0), 50, 1000 + trial);
        auto fit = vm_mle(sample);
        double best = vm_log_likelihood(sample, fit.dist);
        for (int k = 0; k < 64; ++k) {
            VonMises other{wrap_angle(fit.dist.nu + uniform(rng, -0.2, 0.2)),
                           std::max(0.0, fit.dist.kappa * (1.0 + uniform(rng, -0.2, 0.2)))};
            CHECK(vm_log_likelihood(sample, other) <= best + 1e-9);
        }
    }
}

TEST_CASE("vm_log_likelihood uses the density-consistent constant") {
    std::vector<double> sample{0.2, 0.4, 1.0};
    VonMises dist{0.5, 3.0};
    double direct = 0.0;
    for (double theta : sample) {
        direct += std::log(vm_density(theta, dist));
    }
    CHECK(vm_log_likelihood(sample, dist) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("vm_posterior examples") {
    PriorHyper flat;
    flat.c = 0.0;
    flat.r0 = 0.0;
    auto a = vm_posterior(flat, std::vector<double>{0.0, 0.0});
    CHECK(a.r_n == doctest::Approx(2.0));
    CHECK(a.nu_n == doctest::Approx(0.0));
    CHECK(a.c_n == doctest::Approx(2.0));

    PriorHyper unit;
    unit.c = 1.0;
    unit.r0 = 1.0;
    unit.nu0 = 0.0;
    auto b = vm_posterior(unit, std::vector<double>{PI});
    CHECK(b.r_n == doctest::Approx(0.0).epsilon(1e-12));

    auto c = vm_posterior(unit, std::vector<double>{PI / 2});
    CHECK(c.r_n == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.nu_n == doctest::Approx(PI / 4));
    CHECK(c.c_n == doctest::Approx(2.0));
}

TEST_CASE("property: posterior resultant never exceeds c_n") {
    Philox rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        PriorHyper prior;
        prior.c = uniform(rng, 0.0, 5.0);
        prior.r0 = uniform(rng, 0.0, prior.c);
        prior.nu0 = uniform(rng, 0.0, TWO_PI);
        auto sample = vm_sample(uniform(rng, 0.0, TWO_PI), 4.0, 1 + rng() % 20, 500 + trial);
        auto post = vm_posterior(prior, sample);
        CHECK(post.r_n <= post.c_n + 1e-12);
        CHECK(post.nu_n >= 0.0);
        CHECK(post.nu_n < TWO_PI);
    }
}

TEST_CASE("vm_kappa_mh on a concentrated posterior") {
    // c_n = 500 pseudo-observations with mean resultant A(2).
    const double rbar = std::cyl_bessel_i(1.0, 2.0) / std::cyl_bessel_i(0.0, 2.0);
    VmPosterior post{500.0, 500.0 * rbar, 0.0};
    MhConfig config;
    config.step = 0.5;
    config.iterations = 20000;
    config.burn_in = 2000;
    Philox rng(31);
    auto result = vm_kappa_mh(post, config, rng);
    CHECK(result.kappa_mean == doctest::Approx(2.0).epsilon(0.05));
    CHECK(result.acceptance_rate > 0.1);
    CHECK(result.acceptance_rate < 0.9);
    CHECK(result.draws == config.iterations - config.burn_in);

    Philox again(31);
    auto repeat = vm_kappa_mh(post, config, again);
    CHECK(repeat.kappa_mean == result.kappa_mean);
    CHECK(repeat.acceptance_rate == result.acceptance_rate);
}

TEST_CASE("vm_kappa_mh mean approaches the MLE as n grows") {
    auto sample = vm_sample(0.0, 5.0, 10000, 77);
    PriorHyper flat;
    flat.c = 0.0;
    flat.r0 = 0.0;
    auto post = vm_posterior(flat, sample);
    Philox rng(1);
    auto mh = vm_kappa_mh(post, MhConfig{}, rng);
    double mle = vm_mle(sample).dist.kappa;
    CHECK(mh.kappa_mean == doctest::Approx(mle).epsilon(0.05));
    CHECK(mh.acceptance_rate > 0.1);
}

TEST_CASE("vm_kappa_marginal_mean agrees with MH") {
    VmPosterior post{20.0, 14.0, 0.0};
    Philox rng(4);
    MhConfig config;
    config.iterations = 100000;
    config.burn_in = 5000;
    auto mh = vm_kappa_mh(post, config, rng);
    CHECK(mh.kappa_mean == doctest::Approx(vm_kappa_marginal_mean(post)).epsilon(0.03));
}

TEST_CASE("von Mises sampler moments") {
    for (double kappa : {0.5, 2.0, 50.0}) {
        auto sample = vm_sample(1.0, kappa, 100000, 3);
        auto s = circular_summary(sample);
        CAPTURE(kappa);
        CHECK(circular_distance(s.mean_direction, 1.0) < 0.02);
        CHECK(s.resultant_length == doctest::Approx(bessel::ratio_a(kappa)).epsilon(0.01));
    }
}

} // TEST_SUITE
