#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "grushin/extensions.hpp"

using namespace grushin;

namespace {
const double sqrt_pi_2 = std::sqrt(std::numbers::pi / 2.0);

void expect_zero(const std::array<cplx, 2>& r, double tol = 1e-14) {
    EXPECT_LT(std::abs(r[0]), tol);
    EXPECT_LT(std::abs(r[1]), tol);
}
}  // namespace

TEST(Spec, Factories) {
    EXPECT_THROW(ExtensionSpec::iia(0.0, 1.0), domain_error);
    const auto b = ExtensionSpec::bridging();
    EXPECT_EQ(b.family, Family::iia);
    EXPECT_EQ(b.a, cplx(1.0));
    EXPECT_EQ(b.gamma, 0.0);
    EXPECT_EQ(ExtensionSpec::iii(1, 2, 3, 4).zeta(), cplx(2, 3));
}

TEST(BoundaryFromCoeffs, Examples) {
    const GrushinParams p(0.0);
    auto b = boundary_from_coeffs(p, 1, {1.0, 0.0, 0.0, 0.0});
    EXPECT_NEAR(b.g0m.real(), sqrt_pi_2, 1e-14);
    EXPECT_NEAR(b.g1m.real(), -sqrt_pi_2, 1e-14);
    b = boundary_from_coeffs(p, 1, {0.0, 0.0, 1.0, 0.0});
    EXPECT_EQ(b.g0m, cplx(0.0));
    EXPECT_NEAR(b.g1m.real(), 0.6266571, 1e-7);
    b = boundary_from_coeffs(GrushinParams(0.4), 3, {});
    EXPECT_EQ(std::abs(b.g0m) + std::abs(b.g0p) + std::abs(b.g1m) + std::abs(b.g1p), 0.0);
}

TEST(CoeffsFromBoundary, RoundtripAndExamples) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    auto rc = [&] { return cplx(nd(rng), nd(rng)); };
    for (int k : {0, 1, 4}) {
        const GrushinParams p(0.35);
        const BoundaryData b{rc(), rc(), rc(), rc()};
        const auto c = coeffs_from_boundary(p, k, b);
        const auto b2 = boundary_from_coeffs(p, k, c);
        EXPECT_LT(std::abs(b2.g0m - b.g0m) + std::abs(b2.g0p - b.g0p) + std::abs(b2.g1m - b.g1m) +
                      std::abs(b2.g1p - b.g1p),
                  1e-12);
    }
    const auto c = coeffs_from_boundary(GrushinParams(0.0), 1, {sqrt_pi_2, 0.0, -sqrt_pi_2, 0.0});
    EXPECT_NEAR(c.c0m.real(), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(c.c1m), 0.0, 1e-14);
    const auto z = coeffs_from_boundary(GrushinParams(0.0), 1, {});
    EXPECT_EQ(std::abs(z.c0m) + std::abs(z.c1p), 0.0);
}

TEST(BcResidual, Examples) {
    expect_zero(bc_residual(ExtensionSpec::friedrichs(), {0.0, 0.0, 0.7, -2.0}));
    expect_zero(bc_residual(ExtensionSpec::bridging(), {1.0, 1.0, 0.3, -0.3}));
    const auto iii = ExtensionSpec::iii(1, 0, 0, 1);
    expect_zero(bc_residual(iii, {2.0, 3.0, 2.0, 3.0}));
    const auto r = bc_residual(iii, {2.0, 3.0, 0.0, 0.0});
    EXPECT_NEAR(r[0].real(), -2.0, 1e-15);
    EXPECT_NEAR(r[1].real(), -3.0, 1e-15);
}

TEST(ParameterMaps, BetaExamples) {
    const GrushinParams p(0.0);
    EXPECT_NEAR(gamma_from_beta(p, 1, 2.0), 0.0, 1e-14);
    EXPECT_NEAR(gamma_from_beta(p, 1, 0.0), -1.0, 1e-14);
    for (int k : {0, 1, 5})
        for (double beta : {-3.0, 0.2, 7.0}) {
            const GrushinParams q(0.6);
            EXPECT_NEAR(beta_from_gamma(q, k, gamma_from_beta(q, k, beta)), beta, 1e-12);
        }
}

TEST(ParameterMaps, TauIIaExamples) {
    const GrushinParams p(0.0);
    EXPECT_NEAR(gamma_from_tau_iia(p, 1, 1.0, 2.0), 0.0, 1e-14);
    EXPECT_NEAR(gamma_from_tau_iia(p, 1, 1.0, 0.0), -2.0, 1e-14);
    EXPECT_NEAR(gamma_from_tau_iia(p, 1, cplx(0, 2), 2.0), 0.0, 1e-14);
    EXPECT_NEAR(gamma_from_tau_iia(p, 1, cplx(0, 2), 0.0), -5.0, 1e-14);
    EXPECT_THROW(gamma_from_tau_iia(p, 1, 0.0, 1.0), domain_error);
}

TEST(ParameterMaps, TauIIIExamples) {
    const GrushinParams p(0.0);
    auto g = gammas_from_taus_iii(p, 1, {2, 0, 0, 2});
    for (double v : g) EXPECT_NEAR(v, 0.0, 1e-14);
    g = gammas_from_taus_iii(p, 1, {0, 2, 2, 0});
    EXPECT_NEAR(g[0], -1, 1e-14);
    EXPECT_NEAR(g[1], 1, 1e-14);
    EXPECT_NEAR(g[2], 1, 1e-14);
    EXPECT_NEAR(g[3], -1, 1e-14);
    const auto t = taus_from_gammas_iii(GrushinParams(0.3), 0, gammas_from_taus_iii(GrushinParams(0.3), 0, {1, 2, 3, 4}));
    EXPECT_NEAR(t[0], 1, 1e-12);
    EXPECT_NEAR(t[3], 4, 1e-12);
}

TEST(ParameterMaps, CoefficientFormReproducesBoundaryConditions) {
    // IR with coefficient constraint c1+ = beta c0+ maps to g1+ = gamma g0+.
    for (int k : {0, 2}) {
        const GrushinParams p(0.45);
        const double beta = 0.8;
        const CoeffData c{0.0, cplx(0.3, 1.1), cplx(-0.4, 0.2), beta * cplx(0.3, 1.1)};
        expect_zero(bc_residual(ExtensionSpec::ir(gamma_from_beta(p, k, beta)), boundary_from_coeffs(p, k, c)), 1e-13);
    }
}

TEST(ModeWeight, Examples) {
    EXPECT_EQ(mu_weight(GrushinParams(0.7), 0), 1.0);
    EXPECT_NEAR(mu_weight(GrushinParams(0.0), 2), 0.25, 1e-15);
    EXPECT_NEAR(mu_weight(GrushinParams(1.0 / 3.0), 8), 0.0441942, 1e-7);
}

TEST(Sobolev, Examples) {
    auto f = sobolev_orders(ExtensionSpec::friedrichs(), GrushinParams(0.0));
    EXPECT_FALSE(f.s0m.has_value());
    EXPECT_FALSE(f.s0p.has_value());
    EXPECT_NEAR(*f.s1m, 0.5, 1e-15);
    EXPECT_NEAR(*f.s1p, 0.5, 1e-15);
    auto t = sobolev_orders(ExtensionSpec::iii(0, 0, 0, 0), GrushinParams(0.0));
    EXPECT_NEAR(*t.s0m, 1.5, 1e-15);
    EXPECT_NEAR(*t.s1p, 1.5, 1e-15);
    auto b = sobolev_orders(ExtensionSpec::bridging(), GrushinParams(0.5));
    EXPECT_NEAR(*b.s0m, 1.0 / 6.0, 1e-15);
    EXPECT_NEAR(*b.s1p, 1.0 / 6.0, 1e-15);
}

TEST(Regularity, ConvergentAndDivergent) {
    const GrushinParams p(0.3);
    std::vector<std::pair<int, BoundaryData>> fast, flat;
    for (int k = -200; k <= 200; ++k) {
        const double g1 = k == 0 ? 0.0 : std::pow(std::abs(k), -2.0);
        fast.push_back({k, {0.0, 0.0, g1, g1}});
        flat.push_back({k, {0.0, 0.0, 1.0, 1.0}});
    }
    const auto rf = trace_regularity_report(p, ExtensionSpec::friedrichs(), fast);
    EXPECT_FALSE(rf.any_divergent());
    for (const auto& s : rf.sums) EXPECT_LT(s.slope, 0.0);
    const auto rd = trace_regularity_report(p, ExtensionSpec::friedrichs(), flat);
    EXPECT_TRUE(rd.any_divergent());
    for (const auto& s : rd.sums) EXPECT_GE(s.slope, 0.0);
    const auto re = trace_regularity_report(p, ExtensionSpec::friedrichs(), {});
    for (const auto& s : re.sums) EXPECT_EQ(s.total, 0.0);
}

TEST(KeyValue, RoundtripAndErrors) {
    for (const auto& s : {ExtensionSpec::friedrichs(), ExtensionSpec::ir(0.25), ExtensionSpec::il(-1.5),
                          ExtensionSpec::iia(cplx(0.5, -2), 3.0), ExtensionSpec::iii(1, 2, 3, 4)}) {
        const auto back = spec_from_kv(to_kv(s));
        EXPECT_EQ(back.family, s.family);
        EXPECT_EQ(back.gamma, s.gamma);
        EXPECT_EQ(back.a, s.a);
        EXPECT_EQ(back.g, s.g);
    }
    EXPECT_EQ(spec_from_kv({{"family", "Bridging"}}).family, Family::iia);
    EXPECT_THROW(spec_from_kv({{"family", "nope"}}), config_error);
    EXPECT_THROW(spec_from_kv({{"family", "ir"}, {"gamma", "x1"}}), config_error);
    EXPECT_THROW(spec_from_kv({{"family", "iia"}, {"a_re", "0"}, {"a_im", "0"}}), config_error);
}
