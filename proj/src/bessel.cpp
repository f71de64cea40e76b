#include <beaconseg/bessel.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace beaconseg::bessel {
namespace {

constexpr double SERIES_LIMIT = 15.0;

// sum_k (x^2/4)^k / (k! (k+order)!) ; order 0 or 1, without the (x/2)^order factor.
double power_series(double x, int order) {
    double quarter = 0.25 * x * x;
    double term = 1.0;
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= quarter / (static_cast<double>(k) * static_cast<double>(k + order));
        sum += term;
        if (term < sum * 1e-17) {
            break;
        }
    }
    return sum;
}

// Hankel expansion of exp(-x) sqrt(2 pi x) I_order(x).
double asymptotic_series(double x, int order) {
    double mu = 4.0 * order * order;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        double odd = 2.0 * k - 1.0;
        double next = -term * (mu - odd * odd) / (k * 8.0 * x);
        if (std::fabs(next) >= std::fabs(term)) {
            break; // series started to diverge
        }
        term = next;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) {
            break;
        }
    }
    return sum;
}

double scaled(double x, int order) {
    x = std::fabs(x);
    if (x < SERIES_LIMIT) {
        double value = power_series(x, order) * std::exp(-x);
        return order == 0 ? value : value * 0.5 * x;
    }
    return asymptotic_series(x, order) / std::sqrt(2.0 * std::numbers::pi * x);
}

} // namespace

double i0_scaled(double x) {
    return scaled(x, 0);
}

double i1_scaled(double x) {
    double value = scaled(x, 1);
    return x < 0.0 ? -value : value;
}

double i0(double x) {
    x = std::fabs(x);
    if (x < SERIES_LIMIT) {
        return power_series(x, 0);
    }
    return std::exp(x) * i0_scaled(x);
}

double i1(double x) {
    double ax = std::fabs(x);
    double value = ax < SERIES_LIMIT ? 0.5 * ax * power_series(ax, 1) : std::exp(ax) * i1_scaled(ax);
    return x < 0.0 ? -value : value;
}

double log_i0(double x) {
    x = std::fabs(x);
    if (x < SERIES_LIMIT) {
        return std::log(power_series(x, 0));
    }
    return x + std::log(i0_scaled(x));
}

double ratio_a(double x) {
    if (x == 0.0) {
        return 0.0;
    }
    double ax = std::fabs(x);
    double value = 0.0;
    if (ax < SERIES_LIMIT) {
        value = 0.5 * ax * power_series(ax, 1) / power_series(ax, 0);
    } else {
        value = asymptotic_series(ax, 1) / asymptotic_series(ax, 0);
    }
    return x < 0.0 ? -value : value;
}

double ratio_a_derivative(double x) {
    if (std::fabs(x) < 1e-8) {
        return 0.5;
    }
    double a = ratio_a(x);
    return 1.0 - a / x - a * a;
}

} // namespace beaconseg::bessel
