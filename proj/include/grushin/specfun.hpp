#pragma once

// Gamma and modified Bessel functions I_nu, K_nu for real nu in [1/2, 1).

#include <cmath>
#include <numbers>
#include <string>

#include "grushin/errors.hpp"

namespace grushin {

inline constexpr double bessel_x_switch = 12.0;
inline constexpr double bessel_nu_max = 0.975;  // nu = (1 + alpha)/2 with alpha <= 0.95

inline double gamma_fn(double x) {
    if (!(x > 0.0)) throw domain_error("gamma_fn: x must be positive");
    return std::tgamma(x);
}

namespace detail {

inline void check_order(double nu, double x, const char* who) {
    if (!(nu >= 0.5 && nu <= bessel_nu_max))
        throw domain_error(std::string(who) + ": order must lie in [1/2, 0.975]");
    if (!(x > 0.0)) throw domain_error(std::string(who) + ": x must be positive");
}

// Power series, valid for any order in (-1, 1). All terms are positive.
inline double bessel_i_series(double nu, double x) {
    const double q = 0.25 * x * x;
    double term = std::pow(0.5 * x, nu) / std::tgamma(nu + 1.0);
    double sum = term;
    for (int k = 1; k < 500; ++k) {
        term *= q / (k * (k + nu));
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// Hankel series sum_k s^k a_k(nu) / x^k, optimally truncated. s = -1 for I, +1 for K.
inline double hankel_sum(double nu, double x, double s) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0, prev = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        const double next = term * s * (mu - odd * odd) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(prev) && k > 1) break;
        term = next;
        sum += term;
        prev = std::abs(term);
        if (prev < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

inline double bessel_k_asymptotic(double nu, double x) {
    return std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) * hankel_sum(nu, x, 1.0);
}

// Large-x I_nu with the subdominant e^{-x} piece kept (Stokes-line average).
inline double bessel_i_asymptotic(double nu, double x) {
    const double lead = std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * hankel_sum(nu, x, -1.0);
    return lead - std::sin(std::numbers::pi * nu) / std::numbers::pi * bessel_k_asymptotic(nu, x);
}

inline double bessel_k_connection(double nu, double x) {
    return std::numbers::pi * (bessel_i_series(-nu, x) - bessel_i_series(nu, x)) /
           (2.0 * std::sin(std::numbers::pi * nu));
}

// Steed/Temme continued fraction for K, good for x >= 2.
inline double bessel_k_cf2(double nu, double x) {
    const double xmu = nu - 1.0;  // |xmu| <= 1/2, result is K_{xmu+1}
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - xmu * xmu;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    int i = 1;
    for (; i < 10000; ++i) {
        a -= 2 * i;
        c = -a * c / (i + 1.0);
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) break;
    }
    if (i >= 10000) throw numerical_error("bessel_k: continued fraction did not converge", std::abs(delh));
    h = a1 * h;
    const double kmu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    return kmu * (xmu + x + 0.5 - h) / x;
}

}  // namespace detail

inline double bessel_i(double nu, double x) {
    detail::check_order(nu, x, "bessel_i");
    if (x <= bessel_x_switch) return detail::bessel_i_series(nu, x);
    return detail::bessel_i_asymptotic(nu, x);
}

// Connection formula loses about 2x/ln(10) digits, so it is only used for x <= 2.
inline double bessel_k(double nu, double x) {
    detail::check_order(nu, x, "bessel_k");
    if (x <= 2.0) return detail::bessel_k_connection(nu, x);
    if (x <= bessel_x_switch) return detail::bessel_k_cf2(nu, x);
    return detail::bessel_k_asymptotic(nu, x);
}

}  // namespace grushin
