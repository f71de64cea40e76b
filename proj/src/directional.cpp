#include <beaconseg/directional.hpp>

#include <beaconseg/bessel.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace beaconseg {

double wrap_angle(double angle) {
    double wrapped = std::fmod(angle, TWO_PI);
    if (wrapped < 0.0) {
        wrapped += TWO_PI;
    }
    // fmod of a tiny negative value can round up to exactly 2pi.
    return wrapped >= TWO_PI ? 0.0 : wrapped;
}

double angular_position(double time, double period) {
    if (!(period > 0.0) || !std::isfinite(period)) {
        throw NonPositivePeriod("period must be positive");
    }
    return wrap_angle(TWO_PI * (time / period - std::floor(time / period)));
}

double Resultant::direction() const {
    if (sum_cos == 0.0 && sum_sin == 0.0) {
        return 0.0;
    }
    return wrap_angle(std::atan2(sum_sin, sum_cos));
}

Resultant resultant(std::span<const double> angles) {
    Resultant result;
    for (double angle : angles) {
        result.add(angle);
    }
    return result;
}

CircularSummary circular_summary(std::span<const double> angles) {
    if (angles.empty()) {
        throw EmptySample("circular summary of an empty sample");
    }
    Resultant sum = resultant(angles);
    double n = static_cast<double>(angles.size());
    double rbar = std::min(1.0, sum.length() / n);
    if (rbar < DEGENERATE_RESULTANT) {
        throw DegenerateMean("mean resultant length vanishes; mean direction undefined");
    }
    return CircularSummary{sum.direction(), rbar, 1.0 - rbar, angles.size()};
}

double vm_density(double theta, const VonMises& dist) {
    // exp(k cos(t - nu)) / (2 pi I0(k)) = exp(k (cos(t - nu) - 1)) / (2 pi e^-k I0(k))
    return std::exp(dist.kappa * (std::cos(theta - dist.nu) - 1.0)) / (TWO_PI * bessel::i0_scaled(dist.kappa));
}

double vm_log_likelihood(std::span<const double> angles, const VonMises& dist) {
    Resultant sum = resultant(angles);
    double n = static_cast<double>(angles.size());
    // sum_i cos(theta_i - nu) = n Rbar cos(thetabar - nu)
    double projected = sum.sum_cos * std::cos(dist.nu) + sum.sum_sin * std::sin(dist.nu);
    return -n * std::log(TWO_PI) + dist.kappa * projected - n * bessel::log_i0(dist.kappa);
}

double inverse_ratio_a(double rbar) {
    if (rbar <= 0.0) {
        return 0.0;
    }
    double upper = KAPPA_MAX;
    if (rbar >= bessel::ratio_a(upper)) {
        return upper;
    }
    double lower = 0.0;
    double kappa = rbar * (2.0 - rbar * rbar) / (1.0 - rbar * rbar);
    kappa = std::clamp(kappa, 1e-12, upper);
    for (int iteration = 0; iteration < 200; ++iteration) {
        double residual = bessel::ratio_a(kappa) - rbar;
        if (std::fabs(residual) < 1e-10) {
            // One extra Newton step tightens the root well below tolerance.
            double refined = kappa - residual / bessel::ratio_a_derivative(kappa);
            if (refined > lower && refined < upper) {
                kappa = refined;
            }
            break;
        }
        // A is increasing, so the sign of the residual maintains a bracket.
        if (residual > 0.0) {
            upper = kappa;
        } else {
            lower = kappa;
        }
        double next = kappa - residual / bessel::ratio_a_derivative(kappa);
        if (!(next > lower && next < upper)) {
            next = 0.5 * (lower + upper);
        }
        kappa = next;
    }
    return kappa;
}

VmFit vm_mle(std::span<const double> angles) {
    if (angles.size() < 2) {
        throw EmptySample("von Mises MLE needs at least two angles");
    }
    CircularSummary summary = circular_summary(angles);
    VmFit fit;
    fit.resultant_length = summary.resultant_length;
    fit.dist.nu = summary.mean_direction;
    fit.dist.kappa = inverse_ratio_a(summary.resultant_length);
    fit.saturated = fit.dist.kappa >= KAPPA_MAX;
    return fit;
}

VmPosterior vm_posterior(const PriorHyper& prior, std::span<const double> angles) {
    Resultant sum = resultant(angles);
    sum.sum_cos += prior.r0 * std::cos(prior.nu0);
    sum.sum_sin += prior.r0 * std::sin(prior.nu0);
    VmPosterior post;
    post.c_n = prior.c + static_cast<double>(angles.size());
    post.r_n = sum.length();
    post.nu_n = sum.direction();
    return post;
}

namespace {

double log_kappa_marginal(const VmPosterior& post, double kappa) {
    return bessel::log_i0(kappa * post.r_n) - post.c_n * bessel::log_i0(kappa);
}

double kappa_start(const VmPosterior& post) {
    if (post.c_n <= 0.0) {
        throw InvalidParameter("kappa posterior needs c + n > 0");
    }
    double ratio = std::min(post.r_n / post.c_n, 1.0);
    return std::clamp(inverse_ratio_a(ratio), 1e-3, KAPPA_MAX);
}

} // namespace

MhResult vm_kappa_mh(const VmPosterior& post, const MhConfig& config, Philox& rng) {
    if (config.iterations <= config.burn_in) {
        throw InvalidParameter("MH iterations must exceed burn-in");
    }
    double kappa = kappa_start(post);
    double step = config.step;
    if (!(step > 0.0)) {
        double curvature = post.r_n * post.r_n * bessel::ratio_a_derivative(kappa * post.r_n) -
                           post.c_n * bessel::ratio_a_derivative(kappa);
        double sd = curvature < 0.0 ? 1.0 / std::sqrt(-curvature) : 0.5 * kappa;
        step = std::max(2.5 * sd, 1e-6);
    }

    double current = log_kappa_marginal(post, kappa);
    std::size_t accepted = 0;
    double sum = 0.0;
    for (std::size_t it = 0; it < config.iterations; ++it) {
        double proposal = kappa + step * (2.0 * uniform01(rng) - 1.0);
        double u = uniform_open0(rng);
        if (proposal > 0.0 && proposal <= KAPPA_MAX) {
            double candidate = log_kappa_marginal(post, proposal);
            if (std::log(u) < candidate - current) {
                kappa = proposal;
                current = candidate;
                ++accepted;
            }
        }
        if (it >= config.burn_in) {
            sum += kappa;
        }
    }
    MhResult result;
    result.draws = config.iterations - config.burn_in;
    result.kappa_mean = sum / static_cast<double>(result.draws);
    result.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(config.iterations);
    result.step = step;
    return result;
}

double vm_kappa_marginal_mean(const VmPosterior& post) {
    double mode = kappa_start(post);
    double peak = log_kappa_marginal(post, mode);
    // Extend the upper limit until the density has dropped by e^-40.
    double upper = std::max(2.0 * mode, 1.0);
    while (upper < KAPPA_MAX && log_kappa_marginal(post, upper) > peak - 40.0) {
        upper *= 2.0;
    }
    upper = std::min(upper, KAPPA_MAX);

    // Composite Simpson on (0, upper]; the density is finite at 0.
    constexpr std::size_t intervals = 20000;
    double h = upper / intervals;
    double mass = 0.0;
    double moment = 0.0;
    for (std::size_t i = 0; i <= intervals; ++i) {
        double kappa = h * static_cast<double>(i);
        double weight = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        double density = std::exp(log_kappa_marginal(post, kappa) - peak);
        mass += weight * density;
        moment += weight * density * kappa;
    }
    return moment / mass;
}

double von_mises_centered(Philox& rng, double kappa) {
    if (kappa < 1e-8) {
        return std::numbers::pi * (2.0 * uniform01(rng) - 1.0);
    }
    if (kappa > 1e5) {
        return wrap_angle(standard_normal(rng) / std::sqrt(kappa) + std::numbers::pi) - std::numbers::pi;
    }
    double s = 0.0;
    if (kappa < 1e-5) {
        s = 1.0 / kappa + kappa;
    } else {
        double r = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
        double rho = (r - std::sqrt(2.0 * r)) / (2.0 * kappa);
        s = (1.0 + rho * rho) / (2.0 * rho);
    }
    double w = 0.0;
    while (true) {
        double z = std::cos(std::numbers::pi * uniform01(rng));
        w = (1.0 + s * z) / (s + z);
        double y = kappa * (s - w);
        double v = uniform_open0(rng);
        if (y * (2.0 - y) - v >= 0.0 || std::log(y / v) + 1.0 - y >= 0.0) {
            break;
        }
    }
    double angle = std::acos(std::clamp(w, -1.0, 1.0));
    if (uniform01(rng) < 0.5 && angle < std::numbers::pi) {
        angle = -angle;
    }
    return angle;
}

double von_mises(Philox& rng, double mu, double kappa) {
    return wrap_angle(mu + von_mises_centered(rng, kappa));
}

} // namespace beaconseg
