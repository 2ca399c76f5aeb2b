#pragma once

// Decaying/growing solution pair (Phi, F) of the fiber operator
//   S = -d^2/dx^2 + k^2 x^{2 alpha} + C_alpha / x^2,   x > 0,
// its Green kernel, Psi = R_G Phi and short-distance coefficients.
// Mode k = 0 uses the shifted operator S + 1 (Bessel kernels).

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "grushin/errors.hpp"
#include "grushin/quadrature.hpp"
#include "grushin/specfun.hpp"

namespace grushin {

struct GrushinParams {
    double alpha = 0.0;
    double c_alpha = 0.0;

    GrushinParams() = default;
    explicit GrushinParams(double a) : alpha(a), c_alpha(a * (2.0 + a) / 4.0) {
        if (!(a >= 0.0 && a < 1.0)) throw domain_error("alpha must lie in [0, 1)");
    }
    double nu() const { return 0.5 * (1.0 + alpha); }
};

struct AsymptoticCoeffs {
    double p0 = 0.0;  // x^{-alpha/2}
    double p1 = 0.0;  // x^{1+alpha/2}
    double p2 = 0.0;  // x^{2+3alpha/2}, k != 0 only
};

namespace detail {

inline void check_positive(double x, const char* who) {
    if (!(x > 0.0)) throw domain_error(std::string(who) + ": x must be positive");
}

inline void check_bessel_alpha(const GrushinParams& p, const char* who) {
    if (p.alpha > 2.0 * bessel_nu_max - 1.0 + 1e-15)
        throw domain_error(std::string(who) + ": k = 0 kernels need alpha <= 0.95");
}

// u(x) = |k| x^{1+alpha} / (1+alpha)
inline double phase(const GrushinParams& p, int k, double x) {
    return std::abs(k) * std::pow(x, 1.0 + p.alpha) / (1.0 + p.alpha);
}

inline double rho_k_norm(const GrushinParams& p, int k) {
    return std::sqrt(std::numbers::pi * (1.0 + p.alpha) / (2.0 * std::abs(k)));
}

inline double f_k_norm(const GrushinParams& p, int k) {
    return std::sqrt(2.0 * (1.0 + p.alpha) / (std::numbers::pi * std::abs(k)));
}

inline constexpr QuadTol kernel_tol{1e-14, 1e-12, 20000};

}  // namespace detail

inline double phi(const GrushinParams& p, int k, double x) {
    detail::check_positive(x, "phi");
    if (k == 0) {
        detail::check_bessel_alpha(p, "phi");
        return std::sqrt(x) * bessel_k(p.nu(), x);
    }
    return detail::rho_k_norm(p, k) * std::pow(x, -0.5 * p.alpha) * std::exp(-detail::phase(p, k, x));
}

inline double big_f(const GrushinParams& p, int k, double x) {
    detail::check_positive(x, "big_f");
    if (k == 0) {
        detail::check_bessel_alpha(p, "big_f");
        return std::sqrt(x) * bessel_i(p.nu(), x);
    }
    return detail::f_k_norm(p, k) * std::pow(x, -0.5 * p.alpha) * std::sinh(detail::phase(p, k, x));
}

inline double wronskian_value(const GrushinParams& p, int k) { return k == 0 ? 1.0 : 1.0 + p.alpha; }

inline double phi_norm_sq(const GrushinParams& p, int k) {
    if (k == 0) throw domain_error("phi_norm_sq: k = 0, use phi0_norm_sq");
    const double a = p.alpha;
    return std::numbers::pi * std::pow(1.0 + a, (1.0 - a) / (1.0 + a)) * gamma_fn((1.0 - a) / (1.0 + a)) *
           std::pow(2.0 * std::abs(k), -2.0 / (1.0 + a));
}

// Quadrature of int_0^inf Phi^2 for k != 0, independent of the closed form.
inline double phi_norm_sq_quadrature(const GrushinParams& p, int k) {
    if (k == 0) throw domain_error("phi_norm_sq_quadrature: k = 0");
    const double a = p.alpha;
    const double knee = std::pow(std::abs(k), -1.0 / (1.0 + a));
    const double xmax = std::pow((1.0 + a) * 25.0 / std::abs(k), 1.0 / (1.0 + a));
    auto f = [&](double x) {
        const double v = phi(p, k, x);
        return v * v;
    };
    return integrate_origin_weighted(f, 0.0, xmax, a, detail::kernel_tol, {knee}).value;
}

inline double phi0_norm_sq(const GrushinParams& p) {
    detail::check_bessel_alpha(p, "phi0_norm_sq");
    auto f = [&](double x) {
        const double v = phi(p, 0, x);
        return v * v;
    };
    return integrate_origin_weighted(f, 0.0, 40.0, p.alpha, detail::kernel_tol, {1.0, 2.0, 12.0}).value;
}

inline double deficiency_norm_sq(const GrushinParams& p, int k) {
    return k == 0 ? phi0_norm_sq(p) : phi_norm_sq(p, k);
}

// Phi F' - Phi' F by 4th-order central differences on a step tied to the local scale.
inline double wronskian(const GrushinParams& p, int k, double x) {
    detail::check_positive(x, "wronskian");
    double scale = k == 0 ? std::min(x, 1.0) : std::min(x, 1.0 / (std::abs(k) * std::pow(x, p.alpha)));
    const double h = 1e-3 * scale;
    auto d = [&](auto&& g) {
        return (-g(x + 2 * h) + 8.0 * g(x + h) - 8.0 * g(x - h) + g(x - 2 * h)) / (12.0 * h);
    };
    auto fphi = [&](double t) { return phi(p, k, t); };
    auto ff = [&](double t) { return big_f(p, k, t); };
    return fphi(x) * d(ff) - d(fphi) * ff(x);
}

inline double green(const GrushinParams& p, int k, double r, double rho) {
    detail::check_positive(r, "green");
    detail::check_positive(rho, "green");
    const double hi = std::max(r, rho), lo = std::min(r, rho);
    if (k == 0) return phi(p, 0, hi) * big_f(p, 0, lo);
    const double uh = detail::phase(p, k, hi), ul = detail::phase(p, k, lo);
    return std::pow(hi * lo, -0.5 * p.alpha) * std::exp(-(uh - ul)) * (-std::expm1(-2.0 * ul)) /
           (2.0 * std::abs(k));
}

inline double psi_leading(const GrushinParams& p, int k) {
    const double a = p.alpha;
    if (k == 0)
        return phi0_norm_sq(p) / (std::pow(2.0, 0.5 * (1.0 + a)) * gamma_fn(0.5 * (3.0 + a)));
    return std::sqrt(2.0 * std::abs(k) / (std::numbers::pi * std::pow(1.0 + a, 3))) * phi_norm_sq(p, k);
}

inline AsymptoticCoeffs asympt_coeffs(const GrushinParams& p, int k) {
    const double a = p.alpha;
    const double ak = std::abs(k);
    if (k == 0)
        return {std::pow(2.0, 0.5 * (a - 1.0)) * gamma_fn(0.5 * (1.0 + a)),
                -gamma_fn(0.5 * (1.0 - a)) / (std::pow(2.0, 0.5 * (1.0 + a)) * (1.0 + a)), 0.0};
    return {std::sqrt(std::numbers::pi * (1.0 + a) / (2.0 * ak)),
            -std::sqrt(std::numbers::pi * ak / (2.0 * (1.0 + a))),
            std::sqrt(std::numbers::pi * ak * ak * ak / (8.0 * std::pow(1.0 + a, 3)))};
}

// Psi = R_G Phi.
inline double psi(const GrushinParams& p, int k, double x) {
    detail::check_positive(x, "psi");
    const double a = p.alpha;
    if (a > 0.9 + 1e-15) throw domain_error("psi: alpha must be <= 0.9");
    const auto tol = detail::kernel_tol;

    if (k == 0) {
        auto fphi = [&](double r) { return big_f(p, 0, r) * phi(p, 0, r); };
        auto phi2 = [&](double r) {
            const double v = phi(p, 0, r);
            return v * v;
        };
        const double inner = integrate(fphi, 0.0, x, tol, {1.0, 2.0, 12.0}).value;
        const double tail = integrate_origin_weighted(phi2, x, x + 20.0, a, tol, {1.0, 2.0, 12.0}).value;
        return phi(p, 0, x) * inner + big_f(p, 0, x) * tail;
    }

    // Scaled variable s = |k|^{1/(1+a)} rho, w(s) = s^{1+a}/(1+a).
    const double ak = std::abs(k);
    const double X = x * std::pow(ak, 1.0 / (1.0 + a));
    auto w = [&](double s) { return std::pow(s, 1.0 + a) / (1.0 + a); };
    const double wx = w(X);
    auto inner_f = [&](double s) { return std::pow(s, -a) * (-std::expm1(-2.0 * w(s))) * 0.5; };
    auto tail_f = [&](double s) { return std::pow(s, -a) * std::exp(-(2.0 * w(s) - wx)); };
    const double smax = std::pow((1.0 + a) * (wx + 20.0), 1.0 / (1.0 + a));
    const double inner = integrate(inner_f, 0.0, X, tol, {1.0}).value;
    const double tail = integrate_origin_weighted(tail_f, X, smax, a, tol, {1.0}).value;

    // Psi = [Phi(x) int_0^x F Phi + F(x) int_x^inf Phi^2] / (1+a), with e^{wx} moved into the tail.
    const double jac = std::pow(ak, (a - 1.0) / (1.0 + a));  // rho^{-a} d rho = jac * s^{-a} ds
    const double pre = std::pow(x, -0.5 * a) * jac;
    const double t1 = detail::rho_k_norm(p, k) / ak * std::exp(-wx) * inner;
    const double t2 = detail::f_k_norm(p, k) * 0.5 * (-std::expm1(-2.0 * wx)) * (std::numbers::pi / (2.0 * ak)) *
                      tail;
    return pre * (t1 + t2);
}

}  // namespace grushin
