#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lpswe/flux_kernels.hpp"

using namespace lpswe;
using namespace lpswe::kernels;

namespace {

Params with_g(double g) {
    Params p;
    p.g = g;
    return p;
}

CellState still(double h, double z, double g) { return {h, z, {0.0, 0.0}, 0.5 * g * h * h}; }

} // namespace

TEST(Impedance, HandValue) {
    EXPECT_DOUBLE_EQ(impedance(1.0, 4.0, with_g(1.0)), 8.08);
    EXPECT_DOUBLE_EQ(impedance(4.0, 1.0, with_g(1.0)), 8.08);
}

TEST(Impedance, SymmetricStatesAndDefaults) {
    const Params p;
    const double h = 0.7;
    EXPECT_DOUBLE_EQ(impedance(h, h, p), 1.01 * h * std::sqrt(9.81 * h));
    // sub-characteristic condition on both sides
    EXPECT_GT(impedance(0.3, 0.9, p), 0.9 * std::sqrt(9.81 * 0.9));
    EXPECT_THROW(impedance(0.0, 1.0, p), InvalidArgument);
    EXPECT_THROW(impedance(1.0, -1.0, p), InvalidArgument);
}

TEST(HydrostaticSource, Values) {
    EXPECT_EQ(hydrostatic_source(1.0, 2.0, 0.3, 0.3, 9.81), 0.0);
    EXPECT_DOUBLE_EQ(hydrostatic_source(2.0, 1.0, 0.0, 1.0, 10.0), 15.0);
    EXPECT_EQ(hydrostatic_source(2.0, 1.0, 0.0, 1.0, 10.0), -hydrostatic_source(1.0, 2.0, 1.0, 0.0, 10.0));
}

TEST(HydrostaticSource, LakeAtRestBalancesPressure) {
    // dyadic data: exact arithmetic
    const double g = 8.0, H = 1.0;
    const double zl = 0.25, zr = 0.5;
    const double hl = H - zl, hr = H - zr;
    EXPECT_EQ(hydrostatic_source(hl, hr, zl, zr, g), 0.5 * g * hl * hl - 0.5 * g * hr * hr);
    // generic data: a few ulps
    const double G = 9.81, z1 = 0.1234, z2 = 0.2871, h1 = 0.5 - z1, h2 = 0.5 - z2;
    const double pl = 0.5 * G * h1 * h1, pr = 0.5 * G * h2 * h2;
    EXPECT_NEAR(hydrostatic_source(h1, h2, z1, z2, G), pl - pr, 4e-16 * pl);
}

TEST(InterfaceVelocity, Values) {
    EXPECT_EQ(interface_velocity(1.0, 0.0, 2.0, 4.0, 2.0, 0.0), 0.0);
    EXPECT_EQ(interface_velocity(0.7, 0.7, 3.0, 3.0, 5.0, 0.0), 0.7);
    // lake at rest: pi_L - pi_R = src
    EXPECT_EQ(interface_velocity(0.0, 0.0, 2.5, 1.0, 3.0, 1.5), 0.0);
}

TEST(ThetaPolicy, Values) {
    const Params p = with_g(1.0);
    EXPECT_EQ(theta_policy(0.0, 1.0, 2.0, p), 0.0);
    EXPECT_EQ(theta_policy(0.5, 1.0, 1.0, p), 0.5);
    EXPECT_EQ(theta_policy(-0.5, 1.0, 1.0, p), 0.5);
    EXPECT_EQ(theta_policy(3.0, 1.0, 4.0, p), 1.0);
    EXPECT_THROW(theta_policy(1.0, 0.0, 0.0, p), InvalidArgument);
    Params u = p;
    u.theta_policy = ThetaPolicy::unity;
    EXPECT_EQ(theta_policy(0.0, 1.0, 1.0, u), 1.0);
}

TEST(InterfacePressures, HandValue) {
    // g = 10, h = (0.3, 0.4), z = (0.2, 0.1)
    const double g = 10.0;
    const double pl = 0.5 * g * 0.3 * 0.3, pr = 0.5 * g * 0.4 * 0.4;
    const double src = hydrostatic_source(0.3, 0.4, 0.2, 0.1, g);
    EXPECT_NEAR(src, -0.35, 1e-15);
    const auto pi = interface_pressures(0.0, 0.0, pl, pr, 1.0, 0.3, src);
    EXPECT_NEAR(pi.left, 0.45, 1e-15);
    EXPECT_NEAR(pi.right, 0.8, 1e-15);
    EXPECT_NEAR((pi.left + pi.right) / 2.0, 0.625, 1e-15);
}

TEST(InterfacePressures, ConsistencyOnEqualStates) {
    for (double th : {0.0, 0.4, 1.0}) {
        const auto pi = interface_pressures(1.3, 1.3, 2.0, 2.0, 7.0, th, 0.0);
        EXPECT_EQ(pi.left, 2.0);
        EXPECT_EQ(pi.right, 2.0);
    }
}

TEST(InterfacePressures, ThetaScalesJumpDissipation) {
    const double a = 3.0, ul = 0.2, ur = -0.5;
    double prev = INFINITY;
    for (double th : {1.0, 0.75, 0.5, 0.25, 0.0}) {
        const auto pi = interface_pressures(ul, ur, 1.0, 1.5, a, th, 0.0);
        const double jump_term = std::abs((pi.left - (1.0 + 1.5) / 2.0));
        EXPECT_LT(jump_term, prev);
        EXPECT_NEAR(jump_term, th * a * std::abs(ur - ul) / 2.0, 1e-15);
        prev = jump_term;
    }
}

TEST(FaceFlux, IdenticalStatesFlatBottom) {
    const Params p;
    const CellState s{1.2, 0.0, {0.3, -0.8}, 0.5 * p.g * 1.2 * 1.2};
    const Vec2 n{0.6, 0.8};
    const FaceFlux f = face_flux(s, s, n, p);
    EXPECT_NEAR(f.u_star, dot(s.u, n), 1e-16);
    EXPECT_EQ(f.pi_star_L, s.pi);
    EXPECT_EQ(f.pi_star_R, s.pi);
}

TEST(FaceFlux, NormalFrameRotation) {
    const Params p;
    const CellState s{1.0, 0.0, {3.0, 4.0}, 0.5 * p.g};
    EXPECT_EQ(face_flux(s, s, {0.0, 1.0}, p).u_star, 4.0);
    EXPECT_EQ(face_flux(s, s, {1.0, 0.0}, p).u_star, 3.0);
}

TEST(FaceFlux, LakeAtRestDyadic) {
    Params p;
    p.g = 8.0;
    const CellState l = still(0.75, 0.25, p.g), r = still(0.5, 0.5, p.g);
    const FaceFlux f = face_flux(l, r, {1.0, 0.0}, p);
    EXPECT_EQ(f.u_star, 0.0);
    EXPECT_EQ(f.pi_star_L, l.pi);
    EXPECT_EQ(f.pi_star_R, r.pi);
}

TEST(FaceFlux, LakeAtRestGeneric) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> z(0.0, 0.45), ang(0.0, 6.283185307179586);
    const Params p;
    for (int i = 0; i < 1000; ++i) {
        const double zl = z(rng), zr = z(rng), t = ang(rng);
        const CellState l = still(0.5 - zl, zl, p.g), r = still(0.5 - zr, zr, p.g);
        const FaceFlux f = face_flux(l, r, {std::cos(t), std::sin(t)}, p);
        const double scale = std::max(l.pi, r.pi);
        EXPECT_LE(std::abs(f.u_star), 4e-16 * scale / f.a);
        EXPECT_LE(std::abs(f.pi_star_L - l.pi), 4 * std::numeric_limits<double>::epsilon() * scale);
        EXPECT_LE(std::abs(f.pi_star_R - r.pi), 4 * std::numeric_limits<double>::epsilon() * scale);
    }
}

TEST(FaceFlux, OwnerNeighborAntisymmetry) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> h(0.1, 3.0), z(-0.5, 0.5), u(-2.0, 2.0), ang(0.0, 6.283185307179586);
    const Params p;
    for (int i = 0; i < 1000; ++i) {
        const double hl = h(rng), hr = h(rng);
        const CellState l{hl, z(rng), {u(rng), u(rng)}, 0.5 * p.g * hl * hl};
        const CellState r{hr, z(rng), {u(rng), u(rng)}, 0.5 * p.g * hr * hr};
        const double t = ang(rng);
        const Vec2 n{std::cos(t), std::sin(t)};
        const FaceFlux a = face_flux(l, r, n, p), b = face_flux(r, l, -n, p);
        EXPECT_EQ(a.u_star, -b.u_star);
        EXPECT_EQ(a.pi_star_L, b.pi_star_R);
        EXPECT_EQ(a.pi_star_R, b.pi_star_L);
        EXPECT_EQ(a.a, b.a);
        EXPECT_EQ(a.theta, b.theta);
        EXPECT_GE(a.theta, 0.0);
        EXPECT_LE(a.theta, 1.0);
    }
}

TEST(FaceFlux, FlatBottomMomentumFluxCancels) {
    const Params p;
    const CellState l{1.0, 0.0, {0.4, 0.1}, 0.5 * p.g}, r{2.0, 0.0, {-0.2, 0.3}, 2.0 * p.g};
    const Vec2 n{0.0, -1.0};
    const FaceFlux f = face_flux(l, r, n, p);
    EXPECT_EQ(f.pi_star_L, f.pi_star_R);
}

TEST(FaceFlux, TangentialVelocityIgnored) {
    const Params p;
    const Vec2 n{0.8, -0.6}, t{0.6, 0.8};
    CellState l{1.0, 0.1, {0.2, 0.1}, 0.5 * p.g}, r{1.5, 0.0, {-0.3, 0.2}, 1.125 * p.g};
    const FaceFlux a = face_flux(l, r, n, p);
    l.u += 5.0 * t;
    r.u += -3.0 * t;
    const FaceFlux b = face_flux(l, r, n, p);
    EXPECT_NEAR(a.u_star, b.u_star, 1e-14);
    EXPECT_NEAR(a.pi_star_L, b.pi_star_L, 1e-13);
    EXPECT_NEAR(a.theta, b.theta, 1e-14);
}

TEST(FaceFlux, HandTranscription) {
    // independent scalar transcription of the interface formulas
    const double g = 9.81, kappa = 1.01;
    const double hl = 1.3, hr = 0.6, zl = 0.05, zr = 0.4, ul = 0.7, ur = -0.2;
    const double pl = g * hl * hl / 2, pr = g * hr * hr / 2;
    const double a = kappa * std::max(hl * std::sqrt(g * hl), hr * std::sqrt(g * hr));
    const double src = g * (hl + hr) / 2 * (zr - zl);
    const double us = (ul + ur) / 2 - (pr - pl) / (2 * a) - src / (2 * a);
    const double th = std::min(std::abs(us) / std::max(std::sqrt(g * hl), std::sqrt(g * hr)), 1.0);
    const double pc = (pl + pr) / 2 - th * a * (ur - ul) / 2;
    const FaceFlux f = face_flux({hl, zl, {ul, 0.0}, pl}, {hr, zr, {ur, 0.0}, pr}, {1.0, 0.0}, Params{});
    EXPECT_NEAR(f.a, a, 1e-14 * a);
    EXPECT_NEAR(f.u_star, us, 1e-14);
    EXPECT_NEAR(f.theta, th, 1e-14);
    EXPECT_NEAR(f.pi_star_L, pc + src / 2, 1e-13);
    EXPECT_NEAR(f.pi_star_R, pc - src / 2, 1e-13);
}

TEST(FaceFlux, SharpLevelUsesFrozenTimeN) {
    // source, impedance and theta come from time-n states even when (u, pi) differ
    const Params p;
    const CellState ln{1.0, 0.0, {0.1, 0.0}, 0.5 * p.g}, rn{0.8, 0.2, {0.0, 0.0}, 0.32 * p.g};
    CellState ls = ln, rs = rn;
    ls.u = {0.5, 0.0};
    ls.pi = 7.0;
    rs.pi = 2.0;
    const FaceFlux f = face_flux(ls, rs, ln, rn, {1.0, 0.0}, p);
    const FrozenFace fr = freeze(rotate(ln, rn, {1.0, 0.0}), p);
    EXPECT_EQ(f.a, fr.a);
    EXPECT_EQ(f.theta, fr.theta);
    EXPECT_NEAR(f.u_star, 0.25 - (2.0 - 7.0) / (2 * fr.a) - fr.src / (2 * fr.a), 1e-15);
}
