#pragma once

// Globally adaptive Gauss-Kronrod (7/15) integration on finite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "grushin/errors.hpp"

namespace grushin {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;
    int intervals = 0;
};

struct QuadTol {
    double abs = 1e-13;
    double rel = 1e-12;
    int max_intervals = 4000;
};

namespace detail {

inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), r = 0.5 * (b - a);
    const double fc = f(c);
    double k = fc * gk15_wk[7], g = fc * gk15_wg[3];
    for (int i = 0; i < 7; ++i) {
        const double s = f(c - r * gk15_x[i]) + f(c + r * gk15_x[i]);
        k += gk15_wk[i] * s;
        if (i % 2 == 1) g += gk15_wg[i / 2] * s;
    }
    return {a, b, k * r, std::abs((k - g) * r)};
}

}  // namespace detail

// Sum of panels over [a,b] split at the given interior breakpoints.
template <class F>
QuadResult integrate(F&& f, double a, double b, QuadTol tol = {}, std::vector<double> breaks = {}) {
    QuadResult res;
    if (a == b) return res;
    double sign = 1.0;
    if (b < a) {
        std::swap(a, b);
        sign = -1.0;
    }
    std::vector<double> pts{a};
    std::sort(breaks.begin(), breaks.end());
    for (double p : breaks)
        if (p > a && p < b) pts.push_back(p);
    pts.push_back(b);

    std::priority_queue<detail::Panel> heap;
    double value = 0.0, error = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto p = detail::gk15(f, pts[i], pts[i + 1]);
        value += p.value;
        error += p.error;
        heap.push(p);
    }
    int count = static_cast<int>(heap.size());
    while (error > std::max(tol.abs, tol.rel * std::abs(value))) {
        if (count >= tol.max_intervals)
            throw numerical_error("integrate: interval budget exhausted", error);
        auto worst = heap.top();
        heap.pop();
        const double m = 0.5 * (worst.a + worst.b);
        if (m <= worst.a || m >= worst.b) {
            // Panel cannot be split further in double precision.
            if (heap.empty()) break;
            continue;
        }
        auto l = detail::gk15(f, worst.a, m);
        auto r = detail::gk15(f, m, worst.b);
        value += l.value + r.value - worst.value;
        error += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        ++count;
    }
    // Re-sum to drop accumulated update roundoff.
    value = 0.0;
    error = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        error += heap.top().error;
        heap.pop();
    }
    res.value = sign * value;
    res.error = error;
    res.intervals = count;
    return res;
}

// Integrand behaving like rho^{-alpha} near rho = 0: substitute rho = t^m with
// m = 1/(1 - alpha) so the transformed integrand is bounded at t = 0.
template <class F>
QuadResult integrate_origin_weighted(F&& f, double a, double b, double alpha, QuadTol tol = {},
                                     std::vector<double> breaks = {}) {
    const double m = 1.0 / (1.0 - alpha);
    auto g = [&](double t) {
        const double tm1 = std::pow(t, m - 1.0);
        return f(tm1 * t) * m * tm1;
    };
    for (double& p : breaks) p = std::pow(p, 1.0 / m);
    return integrate(g, std::pow(a, 1.0 / m), std::pow(b, 1.0 / m), tol, breaks);
}

}  // namespace grushin
