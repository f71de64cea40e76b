#pragma once

// Modified Bessel functions of the first kind, orders 0 and 1, for
// non-negative arguments. Power series below 15, Hankel asymptotic
// expansion above. The scaled and log forms stay finite for arguments far
// beyond the double overflow point of I0 (~713).

namespace beaconseg::bessel {

//! I0(x).
double i0(double x);

//! I1(x).
double i1(double x);

//! exp(-x) I0(x).
double i0_scaled(double x);

//! exp(-x) I1(x).
double i1_scaled(double x);

//! log I0(x).
double log_i0(double x);

//! A(x) = I1(x) / I0(x), the mean resultant length of M(., x).
double ratio_a(double x);

//! dA/dx = 1 - A/x - A^2 (limit 1/2 at 0).
double ratio_a_derivative(double x);

} // namespace beaconseg::bessel
