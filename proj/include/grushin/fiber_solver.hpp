#pragma once

// Bilateral staggered-grid discretization of the fiber operator
//   -d^2/dx^2 + k^2 |x|^{2 alpha} + C_alpha / x^2
// with any boundary family at x = 0, Dirichlet at |x| = L.
//
// Grid functions are flat-picture values phi(x_j). The matrix is built from the
// quadratic form of the physical picture f = |x|^{alpha/2} phi:
//   sum_pm int |x|^{-alpha} |f'|^2 + k^2 |x|^{alpha} |f|^2 + (1+alpha) g0^H Gamma g0,
// where interface weights 1 / int |x|^alpha are exact on the frame {1, |x|^{1+alpha}}
// (that is {|x|^{-alpha/2}, |x|^{1+alpha/2}} for phi), and the traces g0 on the
// admissible subspace of the family are eliminated by a Schur complement. The
// result is Hermitian and tridiagonal in left-to-right node order.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "grushin/errors.hpp"
#include "grushin/extensions.hpp"
#include "grushin/kernels.hpp"

namespace grushin {

struct RadialGrid {
    double L = 1.0;
    int N = 1;
    double h = 1.0;

    RadialGrid() = default;
    RadialGrid(double L_, int N_) : L(L_), N(N_), h(L_ / N_) {
        if (!(L_ > 0.0) || N_ < 4) throw domain_error("RadialGrid: need L > 0 and N >= 4");
    }
    int size() const { return 2 * N; }
    // Node i in [0, 2N): x_i = (i - N + 1/2) h.
    double x(int i) const { return (i - N + 0.5) * h; }
    // Distance index j >= 1 of node i from the origin.
    int dist_index(int i) const { return i >= N ? i - N + 1 : N - i; }
    int node(bool right, int j) const { return right ? N + j - 1 : N - j; }
};

struct FiberState {
    int k = 0;
    std::vector<cplx> values;
};

struct FiberOperator {
    GrushinParams params;
    int k = 0;
    ExtensionSpec spec;
    RadialGrid grid;
    std::vector<double> diag;  // real diagonal
    std::vector<cplx> upper;   // M(i, i+1); M(i+1, i) = conj(upper[i])
    double symmetrization_defect = 0.0;

    int size() const { return static_cast<int>(diag.size()); }
    double max_abs_diag() const {
        double m = 0.0;
        for (double d : diag) m = std::max(m, std::abs(d));
        return m;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        const int n = size();
        if (static_cast<int>(v.size()) != n) throw domain_error("FiberOperator::apply: size mismatch");
        std::vector<cplx> out(n);
        for (int i = 0; i < n; ++i) {
            cplx s = diag[i] * v[i];
            if (i + 1 < n) s += upper[i] * v[i + 1];
            if (i > 0) s += std::conj(upper[i - 1]) * v[i - 1];
            out[i] = s;
        }
        return out;
    }

    // Element access for tests and diagnostics.
    cplx at(int i, int j) const {
        if (i == j) return diag[i];
        if (j == i + 1) return upper[i];
        if (i == j + 1) return std::conj(upper[j]);
        return {};
    }
};

namespace detail {

// Schur complement of the center coupling on (f_{-1}, f_{+1}); c0 is the
// half-cell weight between the first node and the trace at 0.
inline std::array<cplx, 4> center_block(const ExtensionSpec& s, double alpha, double c0) {
    const double w = 1.0 + alpha;
    auto check = [&](cplx d) {
        if (std::abs(d) < 1e-12 * c0)
            throw numerical_error("assemble: boundary parameters make the trace elimination singular", std::abs(d));
    };
    switch (s.family) {
        case Family::friedrichs: return {c0, 0.0, 0.0, c0};
        case Family::ir: {
            const double d = c0 + w * s.gamma;
            check(d);
            return {c0, 0.0, 0.0, c0 - c0 * c0 / d};
        }
        case Family::il: {
            const double d = c0 + w * s.gamma;
            check(d);
            return {c0 - c0 * c0 / d, 0.0, 0.0, c0};
        }
        case Family::iia: {
            const double d = c0 * (1.0 + std::norm(s.a)) + w * s.gamma;
            check(d);
            const double r = c0 * c0 / d;
            // P = (1, a)^T, block = c0 I - r P P^H
            return {c0 - r, -r * std::conj(s.a), -r * s.a, c0 - r * std::norm(s.a)};
        }
        case Family::iii: {
            const cplx a11 = c0 + w * s.g[0], a12 = w * s.zeta(), a21 = w * std::conj(s.zeta()),
                       a22 = c0 + w * s.g[3];
            const cplx det = a11 * a22 - a12 * a21;
            check(det / c0);
            const double c2 = c0 * c0;
            return {c0 - c2 * a22 / det, c2 * a12 / det, c2 * a21 / det, c0 - c2 * a11 / det};
        }
    }
    return {};
}

}  // namespace detail

inline FiberOperator assemble(const GrushinParams& p, int k, const ExtensionSpec& spec, const RadialGrid& g) {
    spec.validate();
    const int n = g.size();
    const double a = p.alpha, w = 1.0 + a;
    auto pw = [&](double x) { return std::pow(x, w); };

    std::vector<double> mass(n);
    for (int i = 0; i < n; ++i) mass[i] = g.h * std::pow(std::abs(g.x(i)), -a);

    // Raw stiffness in the f picture, assembled as a general tridiagonal.
    std::vector<cplx> kd(n, 0.0), ku(n - 1, 0.0), kl(n - 1, 0.0);
    auto link = [&](int i, int j, double c) {  // c |f_i - f_j|^2, j = i + 1
        kd[i] += c;
        kd[j] += c;
        ku[i] -= c;
        kl[i] -= c;
    };
    for (int side = 0; side < 2; ++side) {
        const bool right = side == 1;
        for (int j = 1; j < g.N; ++j) {
            const double xa = (j - 0.5) * g.h, xb = (j + 0.5) * g.h;
            const double c = w / (pw(xb) - pw(xa));
            const int ia = g.node(right, j), ib = g.node(right, j + 1);
            link(std::min(ia, ib), std::max(ia, ib), c);
        }
        const double xN = (g.N - 0.5) * g.h;
        kd[g.node(right, g.N)] += w / (pw(g.L) - pw(xN));
    }
    const double c0 = w / pw(0.5 * g.h);
    const auto b = detail::center_block(spec, a, c0);
    const int im = g.N - 1, ip = g.N;
    kd[im] += b[0];
    ku[im] += b[1];
    kl[im] += b[2];
    kd[ip] += b[3];

    FiberOperator op;
    op.params = p;
    op.k = k;
    op.spec = spec;
    op.grid = g;
    op.diag.resize(n);
    op.upper.resize(n - 1);
    double defect = 0.0;
    std::vector<cplx> lower(n - 1);
    for (int i = 0; i < n; ++i) {
        const double x = std::abs(g.x(i));
        const cplx d = kd[i] / mass[i] + static_cast<double>(k) * k * std::pow(x, 2.0 * a);
        defect = std::max(defect, std::abs(d.imag()));
        op.diag[i] = d.real();
        if (i + 1 < n) {
            const double s = std::sqrt(mass[i] * mass[i + 1]);
            const cplx up = ku[i] / s, lo = kl[i] / s;
            defect = std::max(defect, std::abs(up - std::conj(lo)));
            op.upper[i] = 0.5 * (up + std::conj(lo));
        }
    }
    op.symmetrization_defect = defect;
    return op;
}

inline double min_potential(const GrushinParams& p, int k) {
    if (k == 0) return 0.0;
    const double a = p.alpha;
    return (1.0 + a) * std::pow((2.0 + a) / 4.0, a / (1.0 + a)) * std::pow(std::abs(k), 2.0 / (1.0 + a));
}

// LU with partial pivoting of a complex tridiagonal matrix (two superdiagonals of fill).
class TridiagLU {
public:
    TridiagLU() = default;
    TridiagLU(std::vector<cplx> dl, std::vector<cplx> d, std::vector<cplx> du) { factor(std::move(dl), std::move(d), std::move(du)); }

    void factor(std::vector<cplx> dl, std::vector<cplx> d, std::vector<cplx> du) {
        n_ = static_cast<int>(d.size());
        dl_ = std::move(dl);
        d_ = std::move(d);
        du_ = std::move(du);
        du2_.assign(std::max(0, n_ - 2), 0.0);
        piv_.assign(n_, 0);
        for (int i = 0; i + 1 < n_; ++i) {
            if (std::abs(d_[i]) >= std::abs(dl_[i])) {
                piv_[i] = 0;
                if (d_[i] == cplx{}) throw numerical_error("TridiagLU: zero pivot", 0.0);
                const cplx f = dl_[i] / d_[i];
                dl_[i] = f;
                d_[i + 1] -= f * du_[i];
            } else {
                piv_[i] = 1;
                const cplx f = d_[i] / dl_[i];
                d_[i] = dl_[i];
                dl_[i] = f;
                const cplx t = du_[i];
                du_[i] = d_[i + 1];
                d_[i + 1] = t - f * d_[i + 1];
                if (i + 2 < n_) {
                    du2_[i] = du_[i + 1];
                    du_[i + 1] = -f * du_[i + 1];
                }
            }
        }
        inv_d_.resize(n_);
        for (int i = 0; i < n_; ++i) {
            if (d_[i] == cplx{}) throw numerical_error("TridiagLU: singular matrix", 0.0);
            inv_d_[i] = 1.0 / d_[i];
        }
    }

    void solve_in_place(std::vector<cplx>& b) const {
        for (int i = 0; i + 1 < n_; ++i) {
            if (piv_[i]) std::swap(b[i], b[i + 1]);
            b[i + 1] -= dl_[i] * b[i];
        }
        for (int i = n_ - 1; i >= 0; --i) {
            cplx s = b[i];
            if (i + 1 < n_) s -= du_[i] * b[i + 1];
            if (i + 2 < n_) s -= du2_[i] * b[i + 2];
            b[i] = s * inv_d_[i];
        }
    }

private:
    int n_ = 0;
    std::vector<cplx> dl_, d_, du_, du2_, inv_d_;
    std::vector<char> piv_;
};

struct EvolveConfig {
    double dt = 1e-3;
    int steps = 0;
    int record_every = 1;

    void validate() const {
        if (!(dt > 0.0)) throw domain_error("EvolveConfig: dt must be positive");
        if (steps < 0) throw domain_error("EvolveConfig: steps must be >= 0");
        if (record_every < 1) throw domain_error("EvolveConfig: record_every must be >= 1");
    }
};

inline constexpr double cn_max_dt_diag = 10.0;

// Cayley step (I + i dt/2 M) psi' = (I - i dt/2 M) psi with a prefactored solve.
class CnStepper {
public:
    CnStepper(const FiberOperator& op, double dt) : op_(&op), dt_(dt) {
        if (!(dt > 0.0)) throw domain_error("CnStepper: dt must be positive");
        if (dt * op.max_abs_diag() > cn_max_dt_diag)
            throw domain_error("CnStepper: dt * max|diag| = " + std::to_string(dt * op.max_abs_diag()) +
                               " exceeds " + std::to_string(cn_max_dt_diag) + "; reduce dt");
        const int n = op.size();
        const cplx s{0.0, 0.5 * dt};
        std::vector<cplx> dl(n - 1), d(n), du(n - 1);
        for (int i = 0; i < n; ++i) d[i] = 1.0 + s * op.diag[i];
        for (int i = 0; i + 1 < n; ++i) {
            du[i] = s * op.upper[i];
            dl[i] = s * std::conj(op.upper[i]);
        }
        lu_.factor(std::move(dl), std::move(d), std::move(du));
    }

    void step(std::vector<cplx>& psi) const {
        // rhs = psi - i dt/2 M psi, formed in place with a one-element lag.
        const int n = op_->size();
        const double s = 0.5 * dt_;
        cplx prev{};
        for (int i = 0; i < n; ++i) {
            cplx m = op_->diag[i] * psi[i];
            if (i + 1 < n) m += op_->upper[i] * psi[i + 1];
            if (i > 0) m += std::conj(op_->upper[i - 1]) * prev;
            prev = psi[i];
            psi[i] -= cplx{-s * m.imag(), s * m.real()};
        }
        lu_.solve_in_place(psi);
    }

private:
    const FiberOperator* op_;
    double dt_;
    TridiagLU lu_;
};

inline std::vector<FiberState> evolve_cn(const FiberOperator& op, const FiberState& state, const EvolveConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(state.values.size()) != op.size()) throw domain_error("evolve_cn: state size mismatch");
    CnStepper stepper(op, cfg.dt);
    std::vector<FiberState> traj{state};
    FiberState cur = state;
    for (int s = 1; s <= cfg.steps; ++s) {
        stepper.step(cur.values);
        if (s % cfg.record_every == 0) traj.push_back(cur);
    }
    return traj;
}

struct EigenResult {
    std::vector<double> values;
    std::vector<std::vector<cplx>> vectors;  // unit l2 norm
};

namespace detail {

// Number of eigenvalues below sigma (Sturm sequence of the Hermitian tridiagonal).
inline int sturm_count(const FiberOperator& op, double sigma) {
    const int n = op.size();
    int count = 0;
    double q = op.diag[0] - sigma;
    const double tiny = std::numeric_limits<double>::min() * 1e10;
    for (int i = 0;; ++i) {
        if (q == 0.0) q = -tiny;
        if (q < 0.0) ++count;
        if (i + 1 >= n) break;
        q = op.diag[i + 1] - sigma - std::norm(op.upper[i]) / q;
    }
    return count;
}

inline double norm2(const std::vector<cplx>& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

inline cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

}  // namespace detail

// Lowest m eigenpairs: Sturm bisection locates each eigenvalue, then shifted
// inverse iteration with reorthogonalization against all earlier vectors.
inline EigenResult eigen_lowest(const FiberOperator& op, int m) {
    const int n = op.size();
    if (m < 0 || m > n) throw domain_error("eigen_lowest: m must lie in [0, 2N]");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < n; ++i) {
        double r = 0.0;
        if (i > 0) r += std::abs(op.upper[i - 1]);
        if (i + 1 < n) r += std::abs(op.upper[i]);
        lo = std::min(lo, op.diag[i] - r);
        hi = std::max(hi, op.diag[i] + r);
    }
    const double scale = std::max(std::abs(lo), std::abs(hi));

    EigenResult res;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> nd;
    for (int j = 0; j < m; ++j) {
        double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 4.0 * std::numeric_limits<double>::epsilon() * scale; ++it) {
            const double c = 0.5 * (a + b);
            if (detail::sturm_count(op, c) > j) b = c;
            else a = c;
        }
        const double lam0 = 0.5 * (a + b);
        const double shift = lam0;

        std::vector<cplx> dl(n - 1), d(n), du(n - 1);
        for (int i = 0; i < n; ++i) d[i] = op.diag[i] - shift;
        for (int i = 0; i + 1 < n; ++i) {
            du[i] = op.upper[i];
            dl[i] = std::conj(op.upper[i]);
        }
        // Perturb exact-zero pivots by letting the factorization see a tiny offset.
        TridiagLU lu;
        try {
            lu.factor(dl, d, du);
        } catch (const numerical_error&) {
            for (auto& z : d) z -= 1e-13 * scale;
            lu.factor(dl, d, du);
        }

        std::vector<cplx> v(n);
        for (auto& z : v) z = {nd(rng), nd(rng)};
        double lam = lam0, resid = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 8; ++it) {
            for (const auto& u : res.vectors) {
                const cplx c = detail::dot(u, v);
                for (int i = 0; i < n; ++i) v[i] -= c * u[i];
            }
            const double nv = detail::norm2(v);
            if (!(nv > 0.0)) break;
            for (auto& z : v) z /= nv;
            lu.solve_in_place(v);
            for (const auto& u : res.vectors) {
                const cplx c = detail::dot(u, v);
                for (int i = 0; i < n; ++i) v[i] -= c * u[i];
            }
            const double nv2 = detail::norm2(v);
            for (auto& z : v) z /= nv2;
            const auto mv = op.apply(v);
            lam = detail::dot(v, mv).real();
            double r = 0.0;
            for (int i = 0; i < n; ++i) r += std::norm(mv[i] - lam * v[i]);
            resid = std::sqrt(r);
            if (resid <= 1e-9 && it >= 1) break;
        }
        if (!(resid <= 1e-8)) {
            numerical_error e("eigen_lowest: inverse iteration did not converge for eigenvalue " +
                                  std::to_string(j) + " (residual " + std::to_string(resid) + ")",
                              resid);
            throw e;
        }
        // Fix the phase: largest component real positive.
        std::size_t imax = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (std::abs(v[i]) > std::abs(v[imax])) imax = i;
        const cplx ph = std::abs(v[imax]) > 0 ? std::conj(v[imax]) / std::abs(v[imax]) : cplx{1.0};
        for (auto& z : v) z *= ph;
        res.values.push_back(lam);
        res.vectors.push_back(std::move(v));
    }
    return res;
}

// Midpoint quadrature of int_0^L G(x_j, rho) rhs(rho) d rho on one side.
inline std::vector<cplx> resolvent_apply(const GrushinParams& p, int k, const std::vector<cplx>& rhs,
                                         const RadialGrid& g) {
    const int n = g.N;
    if (static_cast<int>(rhs.size()) != n) throw domain_error("resolvent_apply: rhs must have N values");
    std::vector<double> x(n);
    for (int j = 0; j < n; ++j) x[j] = (j + 0.5) * g.h;
    std::vector<cplx> out(n, 0.0);
    if (k == 0) {
        std::vector<double> ph(n), ff(n);
        for (int j = 0; j < n; ++j) {
            ph[j] = phi(p, 0, x[j]);
            ff[j] = big_f(p, 0, x[j]);
        }
        cplx left = 0.0;
        std::vector<cplx> right(n + 1, 0.0);
        for (int j = n - 1; j >= 0; --j) right[j] = right[j + 1] + ph[j] * rhs[j];
        for (int i = 0; i < n; ++i) {
            left += ff[i] * rhs[i];
            out[i] = g.h * (ph[i] * left + ff[i] * right[i + 1]);
        }
        return out;
    }
    const double a = p.alpha, ak = std::abs(k);
    std::vector<double> u(n), xa(n), s(n);
    for (int j = 0; j < n; ++j) {
        u[j] = detail::phase(p, k, x[j]);
        xa[j] = std::pow(x[j], -0.5 * a);
        s[j] = -std::expm1(-2.0 * u[j]);
    }
    std::vector<cplx> left(n), right(n);
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) {
        if (i > 0) acc *= std::exp(-(u[i] - u[i - 1]));
        acc += xa[i] * s[i] * rhs[i];
        left[i] = acc;
    }
    acc = 0.0;
    for (int i = n - 1; i >= 0; --i) {
        right[i] = acc;
        if (i > 0) acc = std::exp(-(u[i] - u[i - 1])) * (acc + xa[i] * rhs[i]);
    }
    for (int i = 0; i < n; ++i) out[i] = g.h * xa[i] * (left[i] + s[i] * right[i]) / (2.0 * ak);
    return out;
}

// Continuum fiber operator by the plain 3-point stencil on one side (u = 0 beyond both ends).
inline std::vector<cplx> apply_fd_operator(const GrushinParams& p, int k, const std::vector<cplx>& u,
                                           double h) {
    const int n = static_cast<int>(u.size());
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        const double x = (i + 0.5) * h;
        const cplx um = i > 0 ? u[i - 1] : cplx{}, up = i + 1 < n ? u[i + 1] : cplx{};
        out[i] = -(up - 2.0 * u[i] + um) / (h * h) +
                 (static_cast<double>(k) * k * std::pow(x, 2.0 * p.alpha) + p.c_alpha / (x * x)) * u[i];
        if (k == 0) out[i] += u[i];
    }
    return out;
}

enum class FitModel {
    frame,            // g0 |x|^{-a/2} + g1 |x|^{1+a/2}
    extended,  // plus free |x|^{2-a/2} and |x|^{3-a/2} terms
};

inline constexpr double fit_window_lo = 2.0, fit_window_hi = 20.0;  // in units of h

// Least-squares fit of samples at distances r > 0 to the frame; returns (g0, g1).
inline std::pair<cplx, cplx> fit_frame(const std::vector<double>& r, const std::vector<cplx>& v, double alpha,
                                       FitModel model) {
    const int m = static_cast<int>(r.size());
    const int nb = model == FitModel::frame ? 2 : 4;
    if (m < nb + 2) throw domain_error("fit_frame: fewer than " + std::to_string(nb + 2) + " samples in window");
    // Columns scaled to unit norm, then modified Gram-Schmidt.
    std::vector<std::vector<double>> q(nb, std::vector<double>(m));
    std::vector<double> colscale(nb);
    const double ex[4] = {-0.5 * alpha, 1.0 + 0.5 * alpha, 2.0 - 0.5 * alpha, 3.0 - 0.5 * alpha};
    for (int c = 0; c < nb; ++c) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            q[c][i] = std::pow(r[i], ex[c]);
            s += q[c][i] * q[c][i];
        }
        colscale[c] = std::sqrt(s);
        for (auto& z : q[c]) z /= colscale[c];
    }
    std::vector<std::vector<double>> R(nb, std::vector<double>(nb, 0.0));
    for (int c = 0; c < nb; ++c) {
        for (int pc = 0; pc < c; ++pc) {
            double d = 0.0;
            for (int i = 0; i < m; ++i) d += q[pc][i] * q[c][i];
            R[pc][c] = d;
            for (int i = 0; i < m; ++i) q[c][i] -= d * q[pc][i];
        }
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += q[c][i] * q[c][i];
        s = std::sqrt(s);
        if (!(s > 1e-14)) throw domain_error("fit_frame: degenerate basis");
        R[c][c] = s;
        for (auto& z : q[c]) z /= s;
    }
    std::vector<cplx> y(nb, 0.0);
    for (int c = 0; c < nb; ++c)
        for (int i = 0; i < m; ++i) y[c] += q[c][i] * v[i];
    std::vector<cplx> coef(nb);
    for (int c = nb - 1; c >= 0; --c) {
        cplx s = y[c];
        for (int d = c + 1; d < nb; ++d) s -= R[c][d] * coef[d];
        coef[c] = s / R[c][c];
    }
    return {coef[0] / colscale[0], coef[1] / colscale[1]};
}

inline BoundaryData extract_boundary(const FiberState& state, const RadialGrid& g, const GrushinParams& p,
                                     FitModel model = FitModel::extended) {
    if (static_cast<int>(state.values.size()) != g.size()) throw domain_error("extract_boundary: size mismatch");
    BoundaryData b;
    for (int side = 0; side < 2; ++side) {
        const bool right = side == 1;
        std::vector<double> r;
        std::vector<cplx> v;
        for (int j = 1; j <= g.N; ++j) {
            const double d = (j - 0.5) * g.h;
            if (d < fit_window_lo * g.h || d > fit_window_hi * g.h) continue;
            r.push_back(d);
            v.push_back(state.values[g.node(right, j)]);
        }
        if (r.size() < 4) throw domain_error("extract_boundary: fewer than 4 nodes in the fit window");
        const auto [g0, g1] = fit_frame(r, v, p.alpha, model);
        if (right) {
            b.g0p = g0;
            b.g1p = g1;
        } else {
            b.g0m = g0;
            b.g1m = g1;
        }
    }
    return b;
}

struct HardyRatios {
    double first;   // ||x^{-1} h|| / ||h'||, bounded by 2
    double second;  // ||x^{-2} h|| / ||h''||, bounded by 4/3
};

// Samples h_j at x_j = (j + 1/2) dx, j = 0..n-1, with h = 0 outside; derivatives by central differences.
inline HardyRatios hardy_ratios(const std::vector<double>& hv, double dx) {
    const int n = static_cast<int>(hv.size());
    auto at = [&](int j) { return j >= 0 && j < n ? hv[j] : 0.0; };
    double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
    for (int j = 0; j < n; ++j) {
        const double x = (j + 0.5) * dx;
        const double d1 = (at(j + 1) - at(j - 1)) / (2.0 * dx);
        const double d2 = (at(j + 1) - 2.0 * at(j) + at(j - 1)) / (dx * dx);
        a1 += std::pow(hv[j] / x, 2);
        b1 += d1 * d1;
        a2 += std::pow(hv[j] / (x * x), 2);
        b2 += d2 * d2;
    }
    return {std::sqrt(a1 / b1), std::sqrt(a2 / b2)};
}

}  // namespace grushin
