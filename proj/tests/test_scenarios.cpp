#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lpswe/scenarios.hpp"

using namespace lpswe;

TEST(Bump, Values) {
    EXPECT_EQ(bump_topography(0.1), 0.0);
    EXPECT_EQ(bump_topography(0.9), 0.0);
    EXPECT_DOUBLE_EQ(bump_topography(0.5), 0.3);
    EXPECT_NEAR(bump_topography(0.35), 0.0203002924854919, 1e-15);
    EXPECT_NEAR(bump_topography(0.65), 0.0203002924854919, 1e-15);
    EXPECT_EQ(bump_topography(0.5, 0.123), bump_topography(0.5, 0.9));
}

TEST(Bump, ContinuousAtBranchPoints) {
    for (double x : {0.325, 0.375, 0.425, 0.575, 0.625, 0.675}) {
        EXPECT_NEAR(bump_topography(x - 1e-9), bump_topography(x + 1e-9), 1e-7) << x;
    }
    EXPECT_DOUBLE_EQ(bump_topography(0.375), 0.15);
}

TEST(GaussianTopography, Values) {
    EXPECT_DOUBLE_EQ(vortex_gaussian_topography(1.0, 0.5), 10.0);
    EXPECT_NEAR(vortex_gaussian_topography(0.0, 0.5), 0.0673794699908547, 1e-15);
    EXPECT_NEAR(vortex_gaussian_topography(2.0, 0.5), 0.0673794699908547, 1e-15);
    EXPECT_NEAR(vortex_gaussian_topography(1.0, 0.0), 3.72665317207867e-5, 1e-18);
}

TEST(Vortex, CentreAndKernel) {
    EXPECT_DOUBLE_EQ(vortex::k(0.0), 2.125);
    EXPECT_NEAR(vortex::k(std::numbers::pi), 5.527203300817, 1e-12);
    const auto c = vortex::profile(0.5, 0.5, 9.81);
    EXPECT_NEAR(c.h, 109.505855410793, 1e-12);
    EXPECT_DOUBLE_EQ(c.u.x, 0.6);
    EXPECT_DOUBLE_EQ(c.u.y, 0.0);
    const auto far = vortex::profile(0.1, 0.1, 9.81);
    EXPECT_EQ(far.h, 110.0);
    EXPECT_EQ(far.u.x, 0.6);
}

TEST(Vortex, PeriodicInTime) {
    for (double x : {0.05, 0.4, 0.77})
        for (double y : {0.3, 0.5, 0.61}) {
            const auto a = vortex_exact(x, y, 0.0, 9.81);
            const auto b = vortex_exact(x, y, vortex::period, 9.81);
            EXPECT_NEAR(a.h, b.h, 1e-12);
            EXPECT_NEAR(a.u.x, b.u.x, 1e-12);
            EXPECT_NEAR(a.u.y, b.u.y, 1e-12);
        }
}

TEST(Vortex, ContinuousAtCoreEdge) {
    const double r = 0.25;
    const auto in = vortex::profile(0.5 + r - 1e-10, 0.5, 9.81);
    const auto out = vortex::profile(0.5 + r + 1e-10, 0.5, 9.81);
    EXPECT_NEAR(in.h, out.h, 1e-8);
    EXPECT_NEAR(in.u.y, out.u.y, 1e-8);
}

TEST(Vortex, LowFroude) {
    double fr = 0.0;
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j) {
            const auto s = vortex::profile(i / 400.0, j / 400.0, 9.81);
            fr = std::max(fr, norm(s.u) / std::sqrt(9.81 * s.h));
        }
    EXPECT_GT(fr, 0.077);
    EXPECT_LT(fr, 0.079);
}

TEST(Scenarios, RegistryAndErrors) {
    for (const auto& n : scenario_names()) EXPECT_NO_THROW(make_scenario(n));
    EXPECT_THROW(make_scenario("tsunami"), InvalidArgument);
    EXPECT_EQ(make_scenario("vortex_topo").domain.x1, 2.0);
    EXPECT_EQ(make_scenario("vortex_flat").bc.x, BcKind::periodic);
}

TEST(Scenarios, LakeAtRestBelowBumpIsDry) {
    const Mesh mesh = build_cartesian(20, 1);
    const Scenario sc = make_scenario("lake_at_rest", 0.25);
    const auto topo = sample_topography(mesh, sc.topography);
    EXPECT_THROW(sc.initial(mesh, topo, Params{}), InvalidArgument);
}

TEST(Scenarios, DamBreakInitialData) {
    const Mesh mesh = build_cartesian(10, 2);
    const Scenario sc = make_scenario("dam_break");
    const auto topo = sample_topography(mesh, sc.topography);
    const auto c = sc.initial(mesh, topo, Params{});
    EXPECT_EQ(dam_break_surface(0.5), 0.5);
    EXPECT_EQ(dam_break_surface(0.5000001), 1.0);
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        const double x = mesh.cells()[j].centroid.x;
        EXPECT_DOUBLE_EQ(c.h[j] + topo.z[j], x < 0.5 ? 0.5 : 1.0);
        EXPECT_EQ(c.hu[j].x, 0.0);
    }
    EXPECT_THROW(sample_exact(sc, mesh, 0.0, Params{}), InvalidArgument);
}

TEST(ErrorNorms, Cases) {
    const Mesh mesh = build_cartesian(2, 1, {0.0, 2.0, 0.0, 1.0});
    const auto zero = error_norms({1.0, 2.0}, {1.0, 2.0}, mesh);
    EXPECT_EQ(zero.linf, 0.0);
    EXPECT_EQ(zero.l2, 0.0);
    const auto n = error_norms({1.0, 2.0}, {0.0, 0.0}, mesh);
    EXPECT_DOUBLE_EQ(n.linf, 2.0);
    EXPECT_DOUBLE_EQ(n.l1, 1.5);
    EXPECT_DOUBLE_EQ(n.l2, std::sqrt(2.5));
    EXPECT_THROW(error_norms({1.0}, {1.0}, mesh), InvalidArgument);
}

TEST(LineCut, Cases) {
    const Mesh mesh = build_cartesian(4, 2);
    ConservedField c(mesh.n_cells());
    Topography t{std::vector<double>(mesh.n_cells(), 0.1)};
    for (std::size_t j = 0; j < mesh.n_cells(); ++j) {
        c.h[j] = 1.0 + static_cast<double>(j);
        c.hu[j] = {c.h[j], 0.0};
    }
    const auto cut = line_cut(c, t, mesh, 0.3);
    ASSERT_EQ(cut.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_DOUBLE_EQ(cut[i].x, 0.125 + 0.25 * static_cast<double>(i));
        EXPECT_EQ(cut[i].h, 1.0 + static_cast<double>(i));
        EXPECT_EQ(cut[i].u.x, 1.0);
        EXPECT_DOUBLE_EQ(cut[i].surface(), cut[i].h + 0.1);
    }
    // on the row boundary both rows are equidistant
    EXPECT_EQ(line_cut(c, t, mesh, 0.5).size(), 8u);
    EXPECT_THROW(line_cut(c, t, mesh, 1.5), InvalidArgument);
    const auto tri = build_triangulated(6, 3);
    const auto cut_t = line_cut(ConservedField(tri.n_cells()), Topography{std::vector<double>(tri.n_cells())}, tri, 0.5);
    for (std::size_t i = 1; i < cut_t.size(); ++i) EXPECT_LE(cut_t[i - 1].x, cut_t[i].x);
}
