// grushin: kernels, parameter maps, fiber spectra and cylinder evolution.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grushin/config.hpp"
#include "grushin/cylinder.hpp"
#include "grushin/extensions.hpp"
#include "grushin/fiber_solver.hpp"
#include "grushin/kernels.hpp"
#include "grushin/verify.hpp"

using namespace grushin;

namespace {

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw config_error("cannot open output file '" + path + "'");
    }
    std::ostream& os() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void row(std::ostream& os, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
}

GrushinParams params_checked(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw config_error("alpha must lie in [0, 1)");
    return GrushinParams(alpha);
}

struct SpecFlags {
    std::string family = "friedrichs";
    double gamma = 0.0;
    double a_re = 1.0, a_im = 0.0;
    std::vector<double> Gamma;

    void add(CLI::App* app) {
        app->add_option("--family", family, "friedrichs | ir | il | iia | iii | bridging");
        app->add_option("--gamma", gamma, "gamma for IR, IL, IIa");
        app->add_option("--a", a_re, "IIa parameter a (real part)");
        app->add_option("--a-im", a_im, "IIa parameter a (imaginary part)");
        app->add_option("--Gamma", Gamma, "III parameters gamma1 gamma2 gamma3 gamma4")->expected(4)->delimiter(',');
    }

    ExtensionSpec spec() const {
        KeyValues kv{{"family", family}, {"gamma", num(gamma)}, {"a_re", num(a_re)}, {"a_im", num(a_im)}};
        if (!Gamma.empty())
            for (int i = 0; i < 4; ++i) kv["gamma" + std::to_string(i + 1)] = num(Gamma[i]);
        return spec_from_kv(kv);
    }
};

int run_verify(const std::vector<int>& only) {
    auto checks = all_checks();
    int ran = 0, passed = 0;
    for (std::size_t i = 0; i < checks.size(); ++i) {
        if (!only.empty() && std::find(only.begin(), only.end(), static_cast<int>(i + 1)) == only.end()) continue;
        const auto r = checks[i]();
        std::cout << format_check(r) << std::endl;
        passed += r.pass;
        ++ran;
    }
    std::cout << passed << "/" << ran << " checks passed\n";
    return passed == ran ? 0 : 1;
}

int run_kernels(double alpha, int k, double xmin, double xmax, int n, bool logspace, std::optional<double> rho,
                const std::string& out) {
    const auto p = params_checked(alpha);
    if (!(xmin > 0.0 && xmax > xmin)) throw config_error("need 0 < x-min < x-max");
    if (n < 2) throw config_error("--n must be >= 2");
    Output o(out);
    std::vector<std::string> head{"x", "phi", "f", "psi"};
    if (rho) head.push_back("green");
    row(o.os(), head);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        const double x = logspace ? xmin * std::pow(xmax / xmin, t) : xmin + (xmax - xmin) * t;
        std::vector<std::string> r{num(x), num(phi(p, k, x)), num(big_f(p, k, x)), num(psi(p, k, x))};
        if (rho) r.push_back(num(green(p, k, x, *rho)));
        row(o.os(), r);
    }
    return 0;
}

int run_map_params(double alpha, const SpecFlags& sf, int kmax, bool emit_config, const std::string& out) {
    const auto p = params_checked(alpha);
    const auto s = sf.spec();
    if (kmax < 0) throw config_error("--k-max must be >= 0");
    Output o(out);
    if (emit_config) {
        for (const auto& [key, v] : to_kv(s)) o.os() << key << " = " << v << '\n';
        return 0;
    }
    switch (s.family) {
        case Family::friedrichs: throw config_error("map-params: Friedrichs has no parameters");
        case Family::ir:
        case Family::il:
            row(o.os(), {"k", "gamma", "beta"});
            for (int k = 0; k <= kmax; ++k) row(o.os(), {std::to_string(k), num(s.gamma), num(beta_from_gamma(p, k, s.gamma))});
            break;
        case Family::iia:
            row(o.os(), {"k", "gamma", "tau"});
            for (int k = 0; k <= kmax; ++k)
                row(o.os(), {std::to_string(k), num(s.gamma), num(tau_from_gamma_iia(p, k, s.a, s.gamma))});
            break;
        case Family::iii:
            row(o.os(), {"k", "gamma1", "gamma2", "gamma3", "gamma4", "tau1", "tau2", "tau3", "tau4"});
            for (int k = 0; k <= kmax; ++k) {
                const auto t = taus_from_gammas_iii(p, k, s.g);
                row(o.os(), {std::to_string(k), num(s.g[0]), num(s.g[1]), num(s.g[2]), num(s.g[3]), num(t[0]),
                             num(t[1]), num(t[2]), num(t[3])});
            }
            break;
    }
    return 0;
}

int run_spectrum(double alpha, int k, const SpecFlags& sf, double L, int N, int num_eigs, const std::string& out) {
    const auto p = params_checked(alpha);
    if (!(L > 0.0)) throw config_error("--L must be positive");
    if (N < 100) throw config_error("--N must be >= 100");
    if (num_eigs < 1 || num_eigs > 2 * N) throw config_error("--num-eigs must lie in [1, 2N]");
    const RadialGrid g(L, N);
    const auto op = assemble(p, k, sf.spec(), g);
    const auto e = eigen_lowest(op, num_eigs);
    Output o(out);
    row(o.os(), {"index", "eigenvalue", "g0m", "g0p", "g1m", "g1p"});
    for (int i = 0; i < num_eigs; ++i) {
        FiberState st{k, e.vectors[i]};
        for (auto& z : st.values) z /= std::sqrt(g.h);
        const auto b = extract_boundary(st, g, p);
        row(o.os(), {std::to_string(i), num(e.values[i]), num(b.g0m.real()), num(b.g0p.real()), num(b.g1m.real()),
                     num(b.g1p.real())});
    }
    return 0;
}

int run_evolve(const std::string& config, const std::vector<std::string>& sets, const std::string& out,
               const std::string& snapshots, int threads) {
    KeyValues kv = config.empty() ? KeyValues{} : load_config_file(config);
    for (const auto& s : sets) apply_override(kv, s);
    const auto st = evolve_settings(kv);
    const GrushinParams p(st.alpha);
    const RadialGrid g(st.L, st.N);
    CylinderConfig cfg;
    cfg.K = st.K;
    cfg.M = st.M;
    cfg.evolve = {st.dt, st.steps, st.record_every};
    cfg.threads = threads;
    cfg.keep_snapshots = !snapshots.empty();
    const auto init = gaussian_packet(g, cfg.M, p, st.center_x, st.sigma, st.momentum, st.mode);
    const auto run = evolve_cylinder(p, st.spec, init, cfg);
    Output o(out);
    row(o.os(), {"t", "left_mass", "right_mass", "norm", "energy"});
    for (const auto& ob : run.observables)
        row(o.os(), {num(ob.t), num(ob.left_mass), num(ob.right_mass), num(ob.total_norm_sq), num(ob.energy)});
    if (!snapshots.empty()) write_snapshots(snapshots, run.snapshots);
    return 0;
}

int thread_default() {
    if (const char* env = std::getenv("GRUSHIN_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grushin cylinder numerics: kernels, self-adjoint extensions, fiber spectra and evolution"};
    app.require_subcommand(1);

    std::vector<int> only;
    auto* verify = app.add_subcommand("verify", "run the identity suite and print a pass/fail table");
    verify->add_option("--only", only, "run only these check ids")->delimiter(',');

    double alpha = 0.5, xmin = 0.01, xmax = 5.0, L = 6.0;
    int k = 1, n = 50, N = 2000, num_eigs = 5, kmax = 8;
    bool logspace = false, emit_config = false;
    std::optional<double> rho;
    std::string out;

    auto* kernels = app.add_subcommand("kernels", "tabulate Phi, F, Psi (and G(x, rho)) as CSV");
    kernels->add_option("--alpha", alpha, "alpha in [0, 0.9]");
    kernels->add_option("--k", k, "Fourier mode");
    kernels->add_option("--x-min", xmin);
    kernels->add_option("--x-max", xmax);
    kernels->add_option("--n", n, "number of sample points");
    kernels->add_flag("--log", logspace, "logarithmic spacing");
    kernels->add_option("--rho", rho, "add a green column G(x, rho)");
    kernels->add_option("--out", out, "CSV path (default stdout)");

    SpecFlags map_sf, spec_sf;
    auto* maps = app.add_subcommand("map-params", "tabulate beta/tau per mode for a k-independent gamma");
    maps->add_option("--alpha", alpha);
    map_sf.add(maps);
    maps->add_option("--k-max", kmax, "largest |k| in the table");
    maps->add_flag("--emit-config", emit_config, "print the extension as key = value lines instead");
    maps->add_option("--out", out);

    auto* spectrum = app.add_subcommand("spectrum", "lowest eigenpairs of one fiber with boundary traces");
    spectrum->add_option("--alpha", alpha);
    spectrum->add_option("--k", k);
    spec_sf.add(spectrum);
    spectrum->add_option("--L", L, "half-width of the x-interval (Dirichlet at +-L)");
    spectrum->add_option("--N", N, "nodes per side");
    spectrum->add_option("--num-eigs", num_eigs);
    spectrum->add_option("--out", out);

    std::string config, snapshots;
    std::vector<std::string> sets;
    int threads = thread_default();
    auto* evolve = app.add_subcommand(
        "evolve",
        "evolve a Gaussian packet on the cylinder; Dirichlet walls at +-L reflect, so keep L >= 6 sigma beyond "
        "the packet support");
    evolve->add_option("--config", config, "key = value file");
    evolve->add_option("--set", sets, "override key=value (repeatable)");
    evolve->add_option("--out", out, "observables CSV (default stdout)");
    evolve->add_option("--snapshots", snapshots, "write physical-field snapshots (GRSH binary)");
    evolve->add_option("--threads", threads, "worker threads (env GRUSHIN_THREADS)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    try {
        if (*verify) return run_verify(only);
        if (*kernels) return run_kernels(alpha, k, xmin, xmax, n, logspace, rho, out);
        if (*maps) return run_map_params(alpha, map_sf, kmax, emit_config, out);
        if (*spectrum) return run_spectrum(alpha, k, spec_sf, L, N, num_eigs, out);
        if (*evolve) return run_evolve(config, sets, out, snapshots, std::max(1, threads));
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config;
    } catch (const domain_error& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return exit_config;
    } catch (const numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << " (achieved " << e.achieved << ")\n";
        return exit_numerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
