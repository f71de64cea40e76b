#pragma once

#include <beaconseg/core.hpp>
#include <beaconseg/rng.hpp>

#include <cstddef>
#include <numbers>
#include <span>

namespace beaconseg {

inline constexpr double TWO_PI = 2.0 * std::numbers::pi;

//! Resultant length below which the mean direction is treated as undefined.
inline constexpr double DEGENERATE_RESULTANT = 1e-8;

//! Upper cap for kappa estimates of (near) perfectly concentrated samples.
inline constexpr double KAPPA_MAX = 1e4;

//! Reduce an angle to [0, 2pi).
double wrap_angle(double angle);

//! (2 pi y / P) mod 2pi. Throws NonPositivePeriod unless P > 0.
double angular_position(double time, double period);

struct CircularSummary {
    double mean_direction = 0.0;   //!< in [0, 2pi)
    double resultant_length = 0.0; //!< mean resultant length, in [0, 1]
    double circular_variance = 1.0;
    std::size_t n = 0;
};

//! Running vector sum of unit vectors; the sufficient statistic for every
//! circular summary used here.
struct Resultant {
    double sum_cos = 0.0;
    double sum_sin = 0.0;
    std::size_t n = 0;

    void add(double angle) {
        sum_cos += std::cos(angle);
        sum_sin += std::sin(angle);
        ++n;
    }
    double length() const { return std::hypot(sum_cos, sum_sin); }
    //! Direction in [0, 2pi); 0 for the zero vector.
    double direction() const;
};

Resultant resultant(std::span<const double> angles);

//! Throws EmptySample for an empty sample and DegenerateMean when the mean
//! resultant length is below DEGENERATE_RESULTANT.
CircularSummary circular_summary(std::span<const double> angles);

struct VonMises {
    double nu = 0.0;
    double kappa = 0.0; //!< 0 is the uniform limit
};

double vm_density(double theta, const VonMises& dist);

//! Log likelihood n{-log 2pi + kappa Rbar cos(thetabar - nu) - log I0(kappa)}.
double vm_log_likelihood(std::span<const double> angles, const VonMises& dist);

//! Inverse of A(kappa) = I1/I0 on [0, KAPPA_MAX]. Returns KAPPA_MAX when
//! rbar >= A(KAPPA_MAX).
double inverse_ratio_a(double rbar);

struct VmFit {
    VonMises dist;
    double resultant_length = 0.0;
    bool saturated = false; //!< kappa hit KAPPA_MAX
};

//! Maximum likelihood fit. nu is the mean direction; kappa solves
//! A(kappa) = Rbar by Newton iteration from the Banerjee approximation to
//! |A(kappa) - Rbar| < 1e-10. Throws EmptySample for n < 2 and
//! DegenerateMean when Rbar is below DEGENERATE_RESULTANT.
VmFit vm_mle(std::span<const double> angles);

//! Parameters of the conjugate posterior on (nu, kappa).
struct VmPosterior {
    double c_n = 0.0; //!< c + n
    double r_n = 0.0; //!< length of the combined resultant
    double nu_n = 0.0;
};

VmPosterior vm_posterior(const PriorHyper& prior, std::span<const double> angles);

struct MhConfig {
    std::size_t iterations = 2000;
    std::size_t burn_in = 500;
    //! Half-width of the uniform proposal. Non-positive selects a width of
    //! 2.5 posterior standard deviations from a Laplace approximation.
    double step = 0.0;
};

struct MhResult {
    double kappa_mean = 0.0;
    double acceptance_rate = 0.0;
    double step = 0.0;
    std::size_t draws = 0;
};

//! Metropolis-Hastings on the kappa marginal of the posterior,
//! pi(kappa) ~ I0(kappa R_n) I0(kappa)^(-c_n), with a uniform random-walk
//! proposal. Proposals outside (0, KAPPA_MAX] are rejected. Returns the mean
//! of the post burn-in draws.
MhResult vm_kappa_mh(const VmPosterior& post, const MhConfig& config, Philox& rng);

//! Mean of the kappa marginal by quadrature; used to initialise kappa at its
//! prior mean.
double vm_kappa_marginal_mean(const VmPosterior& post);

} // namespace beaconseg
