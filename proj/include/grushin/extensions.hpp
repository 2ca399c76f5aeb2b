#pragma once

// Boundary-condition families at the singular point, trace/coefficient
// conversions, extension-parameter maps and trace-regularity diagnostics.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grushin/errors.hpp"
#include "grushin/kernels.hpp"

namespace grushin {

using cplx = std::complex<double>;

enum class Family { friedrichs, ir, il, iia, iii };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::friedrichs: return "friedrichs";
        case Family::ir: return "IR";
        case Family::il: return "IL";
        case Family::iia: return "IIa";
        case Family::iii: return "III";
    }
    return "?";
}

struct ExtensionSpec {
    Family family = Family::friedrichs;
    double gamma = 0.0;             // IR, IL, IIa
    cplx a{1.0, 0.0};               // IIa
    std::array<double, 4> g{};      // III: gamma1..gamma4

    static ExtensionSpec friedrichs() { return {}; }
    static ExtensionSpec ir(double gamma) { return {Family::ir, gamma, {1.0, 0.0}, {}}; }
    static ExtensionSpec il(double gamma) { return {Family::il, gamma, {1.0, 0.0}, {}}; }
    static ExtensionSpec iia(cplx a, double gamma) {
        if (a == cplx{}) throw domain_error("IIa with a = 0 coincides with IL; use IL");
        return {Family::iia, gamma, a, {}};
    }
    static ExtensionSpec iii(double g1, double g2, double g3, double g4) {
        return {Family::iii, 0.0, {1.0, 0.0}, {g1, g2, g3, g4}};
    }
    static ExtensionSpec bridging() { return iia({1.0, 0.0}, 0.0); }

    cplx zeta() const { return {g[1], g[2]}; }

    void validate() const {
        auto finite = [](double v) { return std::isfinite(v); };
        if (!finite(gamma) || !finite(a.real()) || !finite(a.imag()) ||
            !std::all_of(g.begin(), g.end(), finite))
            throw domain_error("extension parameters must be finite");
        if (family == Family::iia && a == cplx{}) throw domain_error("IIa with a = 0 is rejected");
    }
};

struct BoundaryData {
    cplx g0m, g0p, g1m, g1p;
};

struct CoeffData {
    cplx c0m, c0p, c1m, c1p;
};

struct SobolevOrders {
    std::optional<double> s0m, s0p, s1m, s1p;  // empty: trace forced to zero
};

// Short-distance data of Phi (p0, p1) and Psi (q) for one mode.
struct FrameCoeffs {
    double p0, p1, q;
};

inline FrameCoeffs frame_coeffs(const GrushinParams& p, int k) {
    const auto c = asympt_coeffs(p, k);
    return {c.p0, c.p1, psi_leading(p, k)};
}

inline BoundaryData boundary_from_coeffs(const FrameCoeffs& f, const CoeffData& c) {
    return {f.p0 * c.c0m, f.p0 * c.c0p, f.q * c.c1m + f.p1 * c.c0m, f.q * c.c1p + f.p1 * c.c0p};
}

inline BoundaryData boundary_from_coeffs(const GrushinParams& p, int k, const CoeffData& c) {
    return boundary_from_coeffs(frame_coeffs(p, k), c);
}

inline CoeffData coeffs_from_boundary(const FrameCoeffs& f, const BoundaryData& b) {
    const cplx c0m = b.g0m / f.p0, c0p = b.g0p / f.p0;
    return {c0m, c0p, (b.g1m - f.p1 * c0m) / f.q, (b.g1p - f.p1 * c0p) / f.q};
}

inline CoeffData coeffs_from_boundary(const GrushinParams& p, int k, const BoundaryData& b) {
    return coeffs_from_boundary(frame_coeffs(p, k), b);
}

inline std::array<cplx, 2> bc_residual(const ExtensionSpec& s, const BoundaryData& b) {
    switch (s.family) {
        case Family::friedrichs: return {b.g0m, b.g0p};
        case Family::ir: return {b.g0m, b.g1p - s.gamma * b.g0p};
        case Family::il: return {b.g0p, b.g1m - s.gamma * b.g0m};
        case Family::iia: return {b.g0p - s.a * b.g0m, b.g1m + std::conj(s.a) * b.g1p - s.gamma * b.g0m};
        case Family::iii:
            return {b.g1m - s.g[0] * b.g0m - s.zeta() * b.g0p,
                    b.g1p - std::conj(s.zeta()) * b.g0m - s.g[3] * b.g0p};
    }
    return {};
}

// gamma = slope * beta + intercept, written out as in the closed-form maps.
struct AffineMap {
    double slope, intercept;
    double apply(double t) const { return slope * t + intercept; }
    double invert(double g) const { return (g - intercept) / slope; }
};

inline AffineMap beta_map(const GrushinParams& p, int k) {
    const double a = p.alpha;
    if (k == 0) {
        const double n = phi0_norm_sq(p);
        const double g3 = gamma_fn(0.5 * (3.0 + a)), g1 = gamma_fn(0.5 * (1.0 + a));
        const double slope = n / (std::pow(2.0, a) * g1 * g3);
        return {slope, -slope * gamma_fn(0.5 * (1.0 - a)) * g3 / ((1.0 + a) * n)};
    }
    const double pre = std::abs(k) / (1.0 + a);
    return {pre * 2.0 * phi_norm_sq(p, k) / (std::numbers::pi * (1.0 + a)), -pre};
}

inline double gamma_from_beta(const GrushinParams& p, int k, double beta) { return beta_map(p, k).apply(beta); }
inline double beta_from_gamma(const GrushinParams& p, int k, double gamma) { return beta_map(p, k).invert(gamma); }

inline AffineMap tau_map_iia(const GrushinParams& p, int k, cplx a) {
    if (a == cplx{}) throw domain_error("gamma_from_tau_IIa: a = 0");
    const double w = 1.0 + std::norm(a);
    const double al = p.alpha;
    if (k == 0) {
        const double n = phi0_norm_sq(p);
        const double gm = gamma_fn(0.5 * (1.0 - al));
        const double pre = w * gm / (std::pow(2.0, al) * (1.0 + al) * gamma_fn(0.5 * (1.0 + al)));
        return {pre * (1.0 + al) * n / (gamma_fn(0.5 * (3.0 + al)) * gm), -pre};
    }
    const double pre = w * std::abs(k) / (1.0 + al);
    return {pre * 2.0 * phi_norm_sq(p, k) / (std::numbers::pi * (1.0 + al)), -pre};
}

inline double gamma_from_tau_iia(const GrushinParams& p, int k, cplx a, double tau) {
    return tau_map_iia(p, k, a).apply(tau);
}
inline double tau_from_gamma_iia(const GrushinParams& p, int k, cplx a, double gamma) {
    return tau_map_iia(p, k, a).invert(gamma);
}

// Off-diagonal factor of the III map: gamma2 + i gamma3 = off * (tau2 + i tau3).
inline double iii_offdiag_factor(const GrushinParams& p, int k) {
    const double a = p.alpha;
    if (k == 0)
        return phi0_norm_sq(p) / (std::pow(2.0, a) * gamma_fn(0.5 * (3.0 + a)) * gamma_fn(0.5 * (1.0 + a)));
    return 2.0 * std::abs(k) * phi_norm_sq(p, k) / (std::numbers::pi * (1.0 + a) * (1.0 + a));
}

inline std::array<double, 4> gammas_from_taus_iii(const GrushinParams& p, int k, const std::array<double, 4>& t) {
    const auto d = beta_map(p, k);
    const double off = iii_offdiag_factor(p, k);
    return {d.apply(t[0]), off * t[1], off * t[2], d.apply(t[3])};
}

inline std::array<double, 4> taus_from_gammas_iii(const GrushinParams& p, int k, const std::array<double, 4>& g) {
    const auto d = beta_map(p, k);
    const double off = iii_offdiag_factor(p, k);
    return {d.invert(g[0]), g[1] / off, g[2] / off, d.invert(g[3])};
}

inline double mu_weight(const GrushinParams& p, int k) {
    if (k == 0) return 1.0;
    return std::pow(std::abs(k), -2.0 / (1.0 + p.alpha));
}

inline SobolevOrders sobolev_orders(const ExtensionSpec& s, const GrushinParams& p) {
    const double lo = 0.5 * (1.0 - p.alpha) / (1.0 + p.alpha);
    const double hi = 0.5 * (3.0 + p.alpha) / (1.0 + p.alpha);
    switch (s.family) {
        case Family::friedrichs: return {std::nullopt, std::nullopt, lo, lo};
        case Family::ir: return {std::nullopt, hi, lo, hi};
        case Family::il: return {hi, std::nullopt, hi, lo};
        case Family::iia: return {lo, lo, lo, lo};
        case Family::iii: return {hi, hi, hi, hi};
    }
    return {};
}

struct WeightedSum {
    std::string label;
    double exponent = 0.0;       // weight |k|^exponent
    std::vector<double> partial;  // partial sums over |k| <= K', K' = 0..K
    double total = 0.0;
    double slope = -std::numeric_limits<double>::infinity();
    bool divergent = false;
};

struct RegularityReport {
    std::vector<WeightedSum> sums;
    bool any_divergent() const {
        return std::any_of(sums.begin(), sums.end(), [](const WeightedSum& s) { return s.divergent; });
    }
};

namespace detail {

// Slope of log(K' * term(K')) against log K' over the top decade; a p-series
// with term ~ K^{-p} gives 1 - p, negative exactly when it converges.
inline double tail_slope(const std::vector<double>& terms) {
    const int kmax = static_cast<int>(terms.size()) - 1;
    if (kmax < 2) return -std::numeric_limits<double>::infinity();
    const int lo = std::max(1, kmax / 10);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int kk = lo; kk <= kmax; ++kk) {
        if (!(terms[kk] > 0.0)) continue;
        const double x = std::log(static_cast<double>(kk));
        const double y = std::log(kk * terms[kk]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return -std::numeric_limits<double>::infinity();
    const double den = n * sxx - sx * sx;
    if (den <= 0.0) return -std::numeric_limits<double>::infinity();
    return (n * sxy - sx * sy) / den;
}

}  // namespace detail

inline constexpr double divergence_slope_threshold = -0.05;

inline RegularityReport trace_regularity_report(const GrushinParams& p, const ExtensionSpec& s,
                                                const std::vector<std::pair<int, BoundaryData>>& per_mode) {
    const double lo = (1.0 - p.alpha) / (1.0 + p.alpha);
    const double hi = (3.0 + p.alpha) / (1.0 + p.alpha);
    using Getter = cplx (*)(const BoundaryData&, const ExtensionSpec&);
    struct Item {
        const char* label;
        double w;
        Getter get;
    };
    const Getter g0m = [](const BoundaryData& b, const ExtensionSpec&) { return b.g0m; };
    const Getter g0p = [](const BoundaryData& b, const ExtensionSpec&) { return b.g0p; };
    const Getter g1m = [](const BoundaryData& b, const ExtensionSpec&) { return b.g1m; };
    const Getter g1p = [](const BoundaryData& b, const ExtensionSpec&) { return b.g1p; };
    const Getter mix = [](const BoundaryData& b, const ExtensionSpec& e) { return b.g1m + std::conj(e.a) * b.g1p; };

    std::vector<Item> items;
    switch (s.family) {
        case Family::friedrichs: items = {{"g1m", lo, g1m}, {"g1p", lo, g1p}}; break;
        case Family::ir: items = {{"g1m", lo, g1m}, {"g1p", hi, g1p}, {"g0p", hi, g0p}}; break;
        case Family::il: items = {{"g1p", lo, g1p}, {"g1m", hi, g1m}, {"g0m", hi, g0m}}; break;
        case Family::iia:
            items = {{"g1m", lo, g1m}, {"g1p", lo, g1p}, {"g0m", hi, g0m}, {"g0p", hi, g0p},
                     {"g1m+conj(a)g1p", hi, mix}};
            break;
        case Family::iii: items = {{"g0m", hi, g0m}, {"g0p", hi, g0p}, {"g1m", hi, g1m}, {"g1p", hi, g1p}}; break;
    }

    int kmax = 0;
    for (const auto& [k, b] : per_mode) kmax = std::max(kmax, std::abs(k));

    RegularityReport rep;
    for (const auto& it : items) {
        WeightedSum ws;
        ws.label = it.label;
        ws.exponent = it.w;
        std::vector<double> terms(kmax + 1, 0.0);
        for (const auto& [k, b] : per_mode) {
            if (k == 0) continue;
            terms[std::abs(k)] += std::pow(std::abs(k), it.w) * std::norm(it.get(b, s));
        }
        if (per_mode.empty()) {
            rep.sums.push_back(ws);
            continue;
        }
        double acc = 0.0;
        for (int kk = 0; kk <= kmax; ++kk) {
            acc += terms[kk];
            ws.partial.push_back(acc);
        }
        ws.total = acc;
        ws.slope = detail::tail_slope(terms);
        ws.divergent = ws.slope > divergence_slope_threshold;
        rep.sums.push_back(ws);
    }
    return rep;
}

// Flat key/value form: family, gamma, a_re, a_im, gamma1..gamma4.
inline std::map<std::string, std::string> to_kv(const ExtensionSpec& s) {
    auto num = [](double v) {
        std::ostringstream o;
        o.precision(17);
        o << v;
        return o.str();
    };
    std::map<std::string, std::string> kv{{"family", family_name(s.family)}};
    switch (s.family) {
        case Family::friedrichs: break;
        case Family::ir:
        case Family::il: kv["gamma"] = num(s.gamma); break;
        case Family::iia:
            kv["gamma"] = num(s.gamma);
            kv["a_re"] = num(s.a.real());
            kv["a_im"] = num(s.a.imag());
            break;
        case Family::iii:
            for (int i = 0; i < 4; ++i) kv["gamma" + std::to_string(i + 1)] = num(s.g[i]);
            break;
    }
    return kv;
}

inline Family parse_family(std::string name) {
    std::string low;
    for (char c : name) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (low == "friedrichs") return Family::friedrichs;
    if (low == "ir") return Family::ir;
    if (low == "il") return Family::il;
    if (low == "iia" || low == "bridging") return Family::iia;
    if (low == "iii") return Family::iii;
    throw config_error("unknown family '" + name + "'");
}

inline double parse_real(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double out = 0.0;
    try {
        out = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw config_error("key '" + key + "': not a number: '" + v + "'");
    }
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos]))) ++pos;
    if (pos != v.size() || !std::isfinite(out)) throw config_error("key '" + key + "': not a number: '" + v + "'");
    return out;
}

// Reads the extension keys out of kv; other keys are ignored here.
inline ExtensionSpec spec_from_kv(const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = kv.find(key);
        return it == kv.end() ? dflt : parse_real(key, it->second);
    };
    auto fam_it = kv.find("family");
    const std::string fam = fam_it == kv.end() ? "friedrichs" : fam_it->second;
    const Family f = parse_family(fam);
    std::string low;
    for (char c : fam) low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    ExtensionSpec s;
    switch (f) {
        case Family::friedrichs: s = ExtensionSpec::friedrichs(); break;
        case Family::ir: s = ExtensionSpec::ir(get("gamma", 0.0)); break;
        case Family::il: s = ExtensionSpec::il(get("gamma", 0.0)); break;
        case Family::iia: {
            if (low == "bridging") {
                s = ExtensionSpec::bridging();
                break;
            }
            const cplx a{get("a_re", 1.0), get("a_im", 0.0)};
            if (a == cplx{}) throw config_error("IIa with a = 0 is rejected (it is the IL family)");
            s = ExtensionSpec::iia(a, get("gamma", 0.0));
            break;
        }
        case Family::iii:
            s = ExtensionSpec::iii(get("gamma1", 0.0), get("gamma2", 0.0), get("gamma3", 0.0), get("gamma4", 0.0));
            break;
    }
    return s;
}

}  // namespace grushin
