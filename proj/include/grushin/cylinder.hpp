#pragma once

// (x, y) layer on R x S^1: measure |x|^{-alpha} dx dy, the unitary
// f -> |x|^{-alpha/2} f, Fourier modes in y, whole-cylinder evolution under a
// fibred extension, observables and trace functions.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "grushin/errors.hpp"
#include "grushin/extensions.hpp"
#include "grushin/fiber_solver.hpp"
#include "grushin/kernels.hpp"

namespace grushin {

enum class Weight { physical, flat };

struct GrushinField {
    RadialGrid grid;
    int M = 0;                  // angle samples y_m = 2 pi m / M
    Weight weight = Weight::physical;
    std::vector<cplx> samples;  // row-major: samples[i * M + m]

    GrushinField() = default;
    GrushinField(const RadialGrid& g, int M_, Weight w)
        : grid(g), M(M_), weight(w), samples(static_cast<std::size_t>(g.size()) * M_) {
        if (M_ < 1) throw domain_error("GrushinField: M must be positive");
    }
    cplx& at(int i, int m) { return samples[static_cast<std::size_t>(i) * M + m]; }
    const cplx& at(int i, int m) const { return samples[static_cast<std::size_t>(i) * M + m]; }
    double y(int m) const { return 2.0 * std::numbers::pi * m / M; }
    double dy() const { return 2.0 * std::numbers::pi / M; }
};

inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

inline GrushinField u_alpha(const GrushinField& f, const GrushinParams& p, Weight target) {
    if (f.weight == target) throw domain_error("u_alpha: field already carries the requested weight");
    GrushinField out = f;
    out.weight = target;
    const double e = target == Weight::flat ? -0.5 * p.alpha : 0.5 * p.alpha;
    for (int i = 0; i < f.grid.size(); ++i) {
        const double s = std::pow(std::abs(f.grid.x(i)), e);
        for (int m = 0; m < f.M; ++m) out.at(i, m) *= s;
    }
    return out;
}

// ||f||^2 under |x|^{-alpha} dx dy (physical) or dx dy (flat), midpoint in x, rectangle in y.
inline double field_norm_sq(const GrushinField& f, const GrushinParams& p) {
    std::vector<double> rows(f.grid.size());
    for (int i = 0; i < f.grid.size(); ++i) {
        double s = 0.0;
        for (int m = 0; m < f.M; ++m) s += std::norm(f.at(i, m));
        const double w = f.weight == Weight::physical ? std::pow(std::abs(f.grid.x(i)), -p.alpha) : 1.0;
        rows[i] = s * w * f.grid.h * f.dy();
    }
    return pairwise_sum(rows);
}

struct CylinderState {
    GrushinParams params;
    int K = 0;
    RadialGrid grid;
    std::vector<FiberState> modes;  // modes[k + K]

    FiberState& mode(int k) { return modes[k + K]; }
    const FiberState& mode(int k) const { return modes[k + K]; }
};

inline CylinderState fourier_modes(const GrushinField& f, const GrushinParams& p, int K) {
    if (f.weight != Weight::flat) throw domain_error("fourier_modes: field must be in the flat picture");
    if (K < 0 || f.M < 2 * K + 2) throw domain_error("fourier_modes: need M >= 2K + 2 to avoid aliasing");
    CylinderState st{p, K, f.grid, {}};
    const int n = f.grid.size();
    const double pre = std::sqrt(2.0 * std::numbers::pi) / f.M;
    for (int k = -K; k <= K; ++k) {
        FiberState fs{k, std::vector<cplx>(n)};
        std::vector<cplx> tw(f.M);
        for (int m = 0; m < f.M; ++m) tw[m] = std::polar(1.0, -2.0 * std::numbers::pi * ((static_cast<long>(k) * m) % f.M) / f.M);
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int m = 0; m < f.M; ++m) s += tw[m] * f.at(i, m);
            fs.values[i] = pre * s;
        }
        st.modes.push_back(std::move(fs));
    }
    return st;
}

inline GrushinField reconstruct(const CylinderState& st, int M) {
    if (M < 2 * st.K + 2) throw domain_error("reconstruct: need M >= 2K + 2");
    GrushinField f(st.grid, M, Weight::flat);
    const double pre = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (int k = -st.K; k <= st.K; ++k) {
        std::vector<cplx> tw(M);
        for (int m = 0; m < M; ++m) tw[m] = pre * std::polar(1.0, 2.0 * std::numbers::pi * ((static_cast<long>(k) * m) % M) / M);
        const auto& v = st.mode(k).values;
        for (int i = 0; i < st.grid.size(); ++i)
            for (int m = 0; m < M; ++m) f.at(i, m) += v[i] * tw[m];
    }
    return f;
}

struct Observables {
    double t = 0.0;
    double left_mass = 0.0;
    double right_mass = 0.0;
    double total_norm_sq = 0.0;
    double energy = 0.0;
};

// ops[k + K] is the fiber operator of mode k; may be empty to skip the energy.
inline Observables observables(const CylinderState& st, const std::vector<FiberOperator>& ops, double t = 0.0) {
    const int N = st.grid.N;
    std::vector<double> left, right, energy;
    for (const auto& fs : st.modes) {
        std::vector<double> l(N), r(N);
        for (int i = 0; i < N; ++i) {
            l[i] = std::norm(fs.values[i]);
            r[i] = std::norm(fs.values[N + i]);
        }
        left.push_back(pairwise_sum(l) * st.grid.h);
        right.push_back(pairwise_sum(r) * st.grid.h);
        if (!ops.empty()) {
            const auto mv = ops[fs.k + st.K].apply(fs.values);
            std::vector<double> e(mv.size());
            for (std::size_t i = 0; i < mv.size(); ++i) e[i] = (std::conj(fs.values[i]) * mv[i]).real();
            energy.push_back(pairwise_sum(e) * st.grid.h);
        }
    }
    Observables o;
    o.t = t;
    o.left_mass = pairwise_sum(left);
    o.right_mass = pairwise_sum(right);
    o.total_norm_sq = o.left_mass + o.right_mass;
    o.energy = pairwise_sum(energy);
    return o;
}

struct CylinderConfig {
    int K = 16;
    int M = 64;
    EvolveConfig evolve;
    int threads = 1;
    bool keep_snapshots = false;
    bool reverse_mode_order = false;  // scheduling order only; results must not depend on it
};

struct CylinderRun {
    std::vector<Observables> observables;
    std::vector<GrushinField> snapshots;  // physical picture, one per record
    std::vector<CylinderState> states;    // flat-picture modes, one per record
};

using SpecForMode = std::function<ExtensionSpec(int)>;

inline CylinderRun evolve_cylinder(const GrushinParams& p, const SpecForMode& spec_for, const GrushinField& init,
                                   const CylinderConfig& cfg) {
    cfg.evolve.validate();
    if (init.weight != Weight::physical) throw domain_error("evolve_cylinder: initial field must be physical");
    if (init.M != cfg.M) throw domain_error("evolve_cylinder: field M differs from config M");
    const auto st0 = fourier_modes(u_alpha(init, p, Weight::flat), p, cfg.K);
    const int nk = 2 * cfg.K + 1;
    const int nrec = cfg.evolve.steps / cfg.evolve.record_every + 1;

    std::vector<FiberOperator> ops(nk);
    std::vector<std::vector<std::vector<cplx>>> traj(nk);
    std::vector<std::exception_ptr> errors(nk);

    std::vector<int> order(nk);
    for (int i = 0; i < nk; ++i) order[i] = cfg.reverse_mode_order ? nk - 1 - i : i;
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int slot = next.fetch_add(1);
            if (slot >= nk) return;
            const int idx = order[slot];
            const int k = idx - cfg.K;
            try {
                ops[idx] = assemble(p, k, spec_for(k), init.grid);
                CnStepper stepper(ops[idx], cfg.evolve.dt);
                auto v = st0.mode(k).values;
                traj[idx].reserve(nrec);
                traj[idx].push_back(v);
                const bool zero = std::all_of(v.begin(), v.end(), [](cplx z) { return z == cplx{}; });
                for (int s = 1; s <= cfg.evolve.steps; ++s) {
                    if (!zero) stepper.step(v);
                    if (s % cfg.evolve.record_every == 0) traj[idx].push_back(v);
                }
            } catch (...) {
                errors[idx] = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min(cfg.threads, nk));
    if (nt == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    CylinderRun run;
    for (int r = 0; r < nrec; ++r) {
        CylinderState st{p, cfg.K, init.grid, {}};
        for (int idx = 0; idx < nk; ++idx) st.modes.push_back({idx - cfg.K, traj[idx][r]});
        const double t = r * cfg.evolve.record_every * cfg.evolve.dt;
        run.observables.push_back(observables(st, ops, t));
        if (cfg.keep_snapshots) run.snapshots.push_back(u_alpha(reconstruct(st, cfg.M), p, Weight::physical));
        run.states.push_back(std::move(st));
    }
    return run;
}

inline CylinderRun evolve_cylinder(const GrushinParams& p, const ExtensionSpec& spec, const GrushinField& init,
                                   const CylinderConfig& cfg) {
    return evolve_cylinder(p, [spec](int) { return spec; }, init, cfg);
}

// f(x, y) = exp(-(x - c)^2 / (4 sigma^2) + i q x) e^{i mode y}, scaled to unit norm under |x|^{-alpha} dx dy.
inline GrushinField gaussian_packet(const RadialGrid& g, int M, const GrushinParams& p, double center, double sigma,
                                    double momentum, int mode) {
    if (!(sigma > 0.0)) throw domain_error("gaussian_packet: sigma must be positive");
    GrushinField f(g, M, Weight::physical);
    for (int i = 0; i < g.size(); ++i) {
        const double x = g.x(i);
        const cplx fx = std::exp(cplx{-(x - center) * (x - center) / (4.0 * sigma * sigma), momentum * x});
        for (int m = 0; m < M; ++m) f.at(i, m) = fx * std::polar(1.0, mode * f.y(m));
    }
    const double n = std::sqrt(field_norm_sq(f, p));
    if (!(n > 0.0)) throw domain_error("gaussian_packet: packet vanishes on the grid");
    for (auto& z : f.samples) z /= n;
    return f;
}

struct TraceFunctions {
    std::vector<cplx> f0m, f0p, f1m, f1p;  // per y_m
    // Weighted x-derivative limits lim |x|^{-alpha} d f / dx from each side.
    std::vector<cplx> dm, dp;
};

// Per y-column frame fit; f1 carries the +-(1+alpha)^{-1} factor of the weighted derivative,
// so f1 coincides with the fiber g1 while dm = -(1+alpha) f1m and dp = (1+alpha) f1p.
inline TraceFunctions trace_functions(const GrushinField& field, const GrushinParams& p,
                                      FitModel model = FitModel::extended) {
    if (field.weight != Weight::physical) throw domain_error("trace_functions: field must be physical");
    const auto flat = u_alpha(field, p, Weight::flat);
    const auto& g = field.grid;
    TraceFunctions tf;
    for (int m = 0; m < field.M; ++m) {
        FiberState col{0, std::vector<cplx>(g.size())};
        for (int i = 0; i < g.size(); ++i) col.values[i] = flat.at(i, m);
        const auto b = extract_boundary(col, g, p, model);
        tf.f0m.push_back(b.g0m);
        tf.f0p.push_back(b.g0p);
        tf.f1m.push_back(b.g1m);
        tf.f1p.push_back(b.g1p);
        tf.dm.push_back(-(1.0 + p.alpha) * b.g1m);
        tf.dp.push_back((1.0 + p.alpha) * b.g1p);
    }
    return tf;
}

inline double curvature(const GrushinParams& p, double x) {
    if (x == 0.0 || !std::isfinite(x)) throw domain_error("curvature: x must be nonzero");
    return -p.alpha * (p.alpha + 1.0) / (x * x);
}

// Snapshot file: "GRSH", u32 version, u32 rank = 3, u64 dims {records, 2N, M},
// then row-major little-endian f64 (re, im) pairs.
inline void write_snapshots(const std::string& path, const std::vector<GrushinField>& snaps) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open snapshot file '" + path + "'");
    auto put = [&](auto v) {
        unsigned char buf[sizeof(v)];
        std::memcpy(buf, &v, sizeof(v));
        if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(v));
        out.write(reinterpret_cast<const char*>(buf), sizeof(v));
    };
    out.write("GRSH", 4);
    put(std::uint32_t{1});
    put(std::uint32_t{3});
    const std::uint64_t nx = snaps.empty() ? 0 : snaps.front().grid.size();
    const std::uint64_t ny = snaps.empty() ? 0 : snaps.front().M;
    put(std::uint64_t{snaps.size()});
    put(nx);
    put(ny);
    for (const auto& s : snaps)
        for (const auto& z : s.samples) {
            put(z.real());
            put(z.imag());
        }
    if (!out) throw std::runtime_error("failed writing snapshot file '" + path + "'");
}

}  // namespace grushin
