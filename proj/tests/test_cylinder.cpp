#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "grushin/cylinder.hpp"

using namespace grushin;

namespace {

GrushinField random_band_limited(const RadialGrid& g, int M, int K, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    GrushinField f(g, M, Weight::flat);
    for (int k = -K; k <= K; ++k) {
        const cplx c(nd(rng), nd(rng));
        const double w = 0.5 + std::abs(nd(rng));
        for (int i = 0; i < g.size(); ++i)
            for (int m = 0; m < M; ++m)
                f.at(i, m) += c * std::exp(-w * g.x(i) * g.x(i)) * std::polar(1.0, k * f.y(m));
    }
    return f;
}

double max_diff(const GrushinField& a, const GrushinField& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i) d = std::max(d, std::abs(a.samples[i] - b.samples[i]));
    return d;
}

CylinderConfig small_config(int steps = 200) {
    CylinderConfig cfg;
    cfg.K = 2;
    cfg.M = 8;
    cfg.evolve = {2e-4, steps, 50};
    return cfg;
}

}  // namespace

TEST(UAlpha, IdentityAtAlphaZero) {
    const RadialGrid g(2.0, 50);
    auto f = random_band_limited(g, 8, 2, 1);
    f.weight = Weight::physical;
    const auto flat = u_alpha(f, GrushinParams(0.0), Weight::flat);
    EXPECT_EQ(max_diff(f, flat), 0.0);
}

TEST(UAlpha, RoundtripAndIsometry) {
    const GrushinParams p(0.6);
    const RadialGrid g(3.0, 120);
    const auto f = gaussian_packet(g, 8, p, 0.4, 0.3, 1.0, 2);
    const auto back = u_alpha(u_alpha(f, p, Weight::flat), p, Weight::physical);
    EXPECT_LT(max_diff(f, back), 1e-12);
    EXPECT_NEAR(field_norm_sq(f, p), field_norm_sq(u_alpha(f, p, Weight::flat), p), 1e-8);
    EXPECT_NEAR(field_norm_sq(f, p), 1.0, 1e-12);
    EXPECT_THROW(u_alpha(f, p, Weight::physical), domain_error);
}

TEST(FourierModes, ConstantFieldHasOnlyModeZero) {
    const RadialGrid g(2.0, 40);
    GrushinField f(g, 8, Weight::flat);
    for (int i = 0; i < g.size(); ++i)
        for (int m = 0; m < 8; ++m) f.at(i, m) = std::exp(-g.x(i) * g.x(i));
    const auto st = fourier_modes(f, GrushinParams(0.3), 3);
    for (int k = -3; k <= 3; ++k)
        for (const auto& v : st.mode(k).values)
            if (k != 0) {
                EXPECT_LT(std::abs(v), 1e-14);
            }
}

TEST(FourierModes, SingleModeCoefficient) {
    const RadialGrid g(2.0, 40);
    GrushinField f(g, 16, Weight::flat);
    for (int i = 0; i < g.size(); ++i)
        for (int m = 0; m < 16; ++m) f.at(i, m) = std::exp(-g.x(i) * g.x(i)) * std::polar(1.0, 3 * f.y(m));
    const auto st = fourier_modes(f, GrushinParams(0.3), 5);
    for (int i = 0; i < g.size(); ++i) {
        EXPECT_NEAR(std::abs(st.mode(3).values[i] - std::sqrt(2 * std::numbers::pi) * std::exp(-g.x(i) * g.x(i))), 0.0,
                    1e-13);
        EXPECT_LT(std::abs(st.mode(-3).values[i]), 1e-13);
    }
}

TEST(FourierModes, RoundtripParsevalAndAliasing) {
    const GrushinParams p(0.4);
    const RadialGrid g(3.0, 60);
    const int K = 4, M = 12;
    const auto f = random_band_limited(g, M, K, 9);
    const auto st = fourier_modes(f, p, K);
    EXPECT_LT(max_diff(reconstruct(st, M), f), 1e-10);
    double modes = 0.0;
    for (const auto& m : st.modes)
        for (const auto& v : m.values) modes += std::norm(v) * g.h;
    EXPECT_NEAR(modes / field_norm_sq(f, p), 1.0, 1e-10);
    EXPECT_THROW(fourier_modes(f, p, 6), domain_error);
    auto phys = f;
    phys.weight = Weight::physical;
    EXPECT_THROW(fourier_modes(phys, p, 2), domain_error);
}

TEST(EvolveCylinder, FriedrichsConfinesAndConserves) {
    const GrushinParams p(0.5);
    const RadialGrid g(6.0, 300);
    auto cfg = small_config();
    const auto init = gaussian_packet(g, cfg.M, p, 2.0, 0.25, -3.0, 1);
    const auto run = evolve_cylinder(p, ExtensionSpec::friedrichs(), init, cfg);
    ASSERT_EQ(run.observables.size(), 5u);
    const auto& o0 = run.observables.front();
    for (const auto& o : run.observables) {
        EXPECT_LE(o.left_mass, 1e-6);
        EXPECT_NEAR(o.left_mass + o.right_mass, o.total_norm_sq, 1e-10);
        EXPECT_NEAR(o.total_norm_sq, o0.total_norm_sq, 1e-9);
        EXPECT_NEAR(o.energy, o0.energy, 1e-8 * std::max(1.0, std::abs(o0.energy)));
    }
}

TEST(EvolveCylinder, BridgingTransmits) {
    const GrushinParams p(0.5);
    const RadialGrid g(6.0, 300);
    auto cfg = small_config(1700);
    cfg.evolve.record_every = 1700;
    const auto init = gaussian_packet(g, cfg.M, p, 2.0, 0.25, -3.0, 1);
    const auto run = evolve_cylinder(p, ExtensionSpec::bridging(), init, cfg);
    EXPECT_GE(run.observables.back().left_mass, 0.01);
    EXPECT_NEAR(run.observables.back().total_norm_sq, 1.0, 1e-9);
}

TEST(EvolveCylinder, ModeOrderAndThreadsAreBitIdentical) {
    const GrushinParams p(0.5);
    const RadialGrid g(4.0, 200);
    auto cfg = small_config(60);
    cfg.keep_snapshots = true;
    const auto init = gaussian_packet(g, cfg.M, p, 1.0, 0.3, -2.0, 1);
    const auto spec = ExtensionSpec::iii(0.3, 0.2, -0.1, 0.5);
    const auto a = evolve_cylinder(p, spec, init, cfg);
    cfg.reverse_mode_order = true;
    cfg.threads = 3;
    const auto b = evolve_cylinder(p, spec, init, cfg);
    ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
    for (std::size_t r = 0; r < a.snapshots.size(); ++r) {
        EXPECT_EQ(a.snapshots[r].samples, b.snapshots[r].samples);
        EXPECT_EQ(a.observables[r].total_norm_sq, b.observables[r].total_norm_sq);
        EXPECT_EQ(a.observables[r].energy, b.observables[r].energy);
    }
}

TEST(EvolveCylinder, LeftRightDecoupling) {
    const GrushinParams p(0.5);
    const RadialGrid g(4.0, 200);
    auto cfg = small_config(80);
    cfg.keep_snapshots = true;
    auto joint = gaussian_packet(g, cfg.M, p, 1.0, 0.25, -2.0, 1);
    const auto left_part = gaussian_packet(g, cfg.M, p, -1.2, 0.3, 1.0, 0);
    for (std::size_t i = 0; i < joint.samples.size(); ++i) joint.samples[i] += left_part.samples[i];
    auto minus = joint, plus = joint;
    for (int i = 0; i < g.size(); ++i)
        for (int m = 0; m < cfg.M; ++m) (g.x(i) < 0 ? plus : minus).at(i, m) = 0.0;
    for (const auto& spec : {ExtensionSpec::friedrichs(), ExtensionSpec::ir(0.8), ExtensionSpec::il(-0.5)}) {
        const auto rj = evolve_cylinder(p, spec, joint, cfg);
        const auto rm = evolve_cylinder(p, spec, minus, cfg);
        const auto rp = evolve_cylinder(p, spec, plus, cfg);
        for (std::size_t r = 0; r < rj.snapshots.size(); ++r) {
            double d = 0.0, cross = 0.0;
            for (std::size_t i = 0; i < rj.snapshots[r].samples.size(); ++i)
                d = std::max(d, std::abs(rj.snapshots[r].samples[i] - rm.snapshots[r].samples[i] -
                                         rp.snapshots[r].samples[i]));
            for (int i = 0; i < g.N; ++i)
                for (int m = 0; m < cfg.M; ++m) cross = std::max(cross, std::abs(rp.snapshots[r].at(i, m)));
            EXPECT_LT(d, 1e-10);
            EXPECT_LT(cross, 1e-14);
        }
    }
}

TEST(EvolveCylinder, Validation) {
    const GrushinParams p(0.5);
    const RadialGrid g(4.0, 100);
    auto cfg = small_config();
    const auto init = gaussian_packet(g, cfg.M, p, 1.0, 0.3, 0.0, 0);
    EXPECT_THROW(evolve_cylinder(p, ExtensionSpec::friedrichs(), u_alpha(init, p, Weight::flat), cfg), domain_error);
    cfg.M = 4;
    EXPECT_THROW(evolve_cylinder(p, ExtensionSpec::friedrichs(), init, cfg), domain_error);
    cfg = small_config();
    cfg.evolve.dt = 1.0;
    EXPECT_THROW(evolve_cylinder(p, ExtensionSpec::friedrichs(), init, cfg), domain_error);
}

TEST(TraceFunctions, ModeZeroPhiIsConstantInY) {
    const GrushinParams p(0.5);
    const RadialGrid g(3.0, 600);
    const int K = 2, M = 8;
    CylinderState st{p, K, g, {}};
    for (int k = -K; k <= K; ++k) {
        FiberState fs{k, std::vector<cplx>(g.size())};
        if (k == 0)
            for (int i = 0; i < g.size(); ++i) fs.values[i] = phi(p, 0, std::abs(g.x(i)));
        st.modes.push_back(fs);
    }
    const auto tf = trace_functions(u_alpha(reconstruct(st, M), p, Weight::physical), p);
    const double ref = asympt_coeffs(p, 0).p0 / std::sqrt(2 * std::numbers::pi);
    for (int m = 0; m < M; ++m) {
        EXPECT_NEAR(tf.f0m[m].real(), ref, 1e-3 * ref);
        EXPECT_NEAR(tf.f0p[m].real(), ref, 1e-3 * ref);
    }
}

TEST(TraceFunctions, LinearInModes) {
    const GrushinParams p(0.5);
    const RadialGrid g(3.0, 600);
    const int K = 2, M = 8;
    CylinderState st{p, K, g, {}};
    for (int k = -K; k <= K; ++k) {
        FiberState fs{k, std::vector<cplx>(g.size())};
        for (int i = 0; i < g.size(); ++i) fs.values[i] = phi(p, k, std::abs(g.x(i)));
        st.modes.push_back(fs);
    }
    const auto field = u_alpha(reconstruct(st, M), p, Weight::physical);
    const auto tf = trace_functions(field, p);
    for (int m = 0; m < M; ++m) {
        cplx f0 = 0.0, f1 = 0.0;
        double f0_scale = 0.0, f1_scale = 0.0;
        for (int k = -K; k <= K; ++k) {
            const auto c = asympt_coeffs(p, k);
            const cplx e = std::polar(1.0, k * field.y(m)) / std::sqrt(2 * std::numbers::pi);
            f0 += c.p0 * e;
            f1 += c.p1 * e;
            f0_scale += std::abs(c.p0);
            f1_scale += std::abs(c.p1);
        }
        EXPECT_LT(std::abs(tf.f0p[m] - f0), 1e-3 * f0_scale);
        EXPECT_LT(std::abs(tf.f1m[m] - f1), 2e-2 * f1_scale);
        EXPECT_NEAR(std::abs(tf.dp[m] - 1.5 * tf.f1p[m]), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(tf.dm[m] + 1.5 * tf.f1m[m]), 0.0, 1e-14);
    }
}

TEST(TraceFunctions, ZeroField) {
    const GrushinParams p(0.3);
    const RadialGrid g(2.0, 200);
    const auto tf = trace_functions(GrushinField(g, 4, Weight::physical), p);
    for (int m = 0; m < 4; ++m) EXPECT_EQ(std::abs(tf.f0m[m]) + std::abs(tf.f1p[m]) + std::abs(tf.dm[m]), 0.0);
    EXPECT_THROW(trace_functions(GrushinField(g, 4, Weight::flat), p), domain_error);
}

TEST(Curvature, Examples) {
    EXPECT_EQ(curvature(GrushinParams(0.0), 3.0), 0.0);
    EXPECT_NEAR(curvature(GrushinParams(0.5), 2.0), -0.1875, 1e-15);
    EXPECT_NEAR(curvature(GrushinParams(0.5), -2.0), -0.1875, 1e-15);
    EXPECT_THROW(curvature(GrushinParams(0.5), 0.0), domain_error);
}

TEST(Snapshots, BinaryLayout) {
    const RadialGrid g(1.0, 4);
    GrushinField f(g, 3, Weight::physical);
    for (std::size_t i = 0; i < f.samples.size(); ++i) f.samples[i] = cplx(double(i), -0.5 * i);
    const auto path = (std::filesystem::temp_directory_path() / "grushin_snap_test.grsh").string();
    write_snapshots(path, {f, f});
    std::ifstream in(path, std::ios::binary);
    std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    ASSERT_EQ(buf.size(), 4 + 4 + 4 + 3 * 8 + 2 * 8 * 3 * 16u);
    EXPECT_EQ(std::string(buf.data(), 4), "GRSH");
    std::uint32_t version, rank;
    std::uint64_t dims[3];
    std::memcpy(&version, buf.data() + 4, 4);
    std::memcpy(&rank, buf.data() + 8, 4);
    std::memcpy(dims, buf.data() + 12, 24);
    EXPECT_EQ(version, 1u);
    EXPECT_EQ(rank, 3u);
    EXPECT_EQ(dims[0], 2u);
    EXPECT_EQ(dims[1], 8u);
    EXPECT_EQ(dims[2], 3u);
    double re, im;
    std::memcpy(&re, buf.data() + 36 + 16 * 5, 8);
    std::memcpy(&im, buf.data() + 36 + 16 * 5 + 8, 8);
    EXPECT_EQ(re, 5.0);
    EXPECT_EQ(im, -2.5);
    std::filesystem::remove(path);
}
