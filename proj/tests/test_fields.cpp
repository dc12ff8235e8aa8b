#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lpswe/fields.hpp"

using namespace lpswe;

TEST(ToRelaxed, HandEvaluation) {
    ConservedField c(1);
    c.h[0] = 2.0;
    c.hu[0] = {4.0, 0.0};
    Params p;
    p.g = 10.0;
    const RelaxedField r = to_relaxed(c, p);
    EXPECT_EQ(r.tau[0], 0.5);
    EXPECT_EQ(r.u[0].x, 2.0);
    EXPECT_EQ(r.u[0].y, 0.0);
    EXPECT_EQ(r.pi[0], 20.0);
}

TEST(ToRelaxed, StillUnitDepth) {
    ConservedField c(1);
    c.h[0] = 1.0;
    Params p;
    p.g = 3.7;
    const RelaxedField r = to_relaxed(c, p);
    EXPECT_EQ(r.tau[0], 1.0);
    EXPECT_EQ(norm(r.u[0]), 0.0);
    EXPECT_EQ(r.pi[0], 3.7 / 2.0);
}

TEST(ToRelaxed, NonPositiveDepthReportsCell) {
    ConservedField c(3);
    c.h = {1.0, 0.0, 1.0};
    try {
        to_relaxed(c, Params{});
        FAIL();
    } catch (const PositivityError& e) {
        EXPECT_EQ(e.cell(), 1u);
    }
}

TEST(ToConserved, InverseOfRelaxed) {
    RelaxedField r(1);
    r.tau[0] = 0.5;
    r.u[0] = {2.0, 0.0};
    const ConservedField c = to_conserved(r);
    EXPECT_EQ(c.h[0], 2.0);
    EXPECT_EQ(c.hu[0].x, 4.0);
    r.tau[0] = -1.0;
    EXPECT_THROW(to_conserved(r), PositivityError);
}

TEST(ToConserved, RoundTripRandom) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> e(-6.0, 6.0), u(-10.0, 10.0);
    ConservedField c(2000);
    for (std::size_t j = 0; j < c.size(); ++j) {
        c.h[j] = std::pow(10.0, e(rng));
        c.hu[j] = c.h[j] * Vec2{u(rng), u(rng)};
    }
    Params p;
    const RelaxedField r = to_relaxed(c, p);
    const ConservedField back = to_conserved(r);
    for (std::size_t j = 0; j < c.size(); ++j) {
        EXPECT_LE(std::abs(back.h[j] - c.h[j]), 1e-15 * c.h[j]);
        EXPECT_LE(norm(back.hu[j] - c.hu[j]), 1e-14 * norm(c.hu[j]));
        // pi is the hydrostatic pressure of the stored depth
        EXPECT_LE(std::abs(r.pi[j] - 0.5 * p.g * c.h[j] * c.h[j]), 2.0 * std::numeric_limits<double>::epsilon() * r.pi[j]);
    }
}

TEST(SoundSpeed, Values) {
    EXPECT_NEAR(sound_speed(1.0, 9.81), 3.13209195267316505, 1e-15);
    EXPECT_EQ(sound_speed(0.0, 9.81), 0.0);
    EXPECT_NEAR(sound_speed(0.5, 10.0), std::sqrt(5.0), 1e-15);
    EXPECT_THROW(sound_speed(-1e-3, 9.81), InvalidArgument);
}

TEST(Params, Validation) {
    Params p;
    EXPECT_NO_THROW(p.validate());
    EXPECT_EQ(p.g, 9.81);
    EXPECT_EQ(p.kappa, 1.01);
    EXPECT_EQ(p.k_cfl, 0.9);
    p.kappa = 1.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = {};
    p.g = 0.0;
    EXPECT_THROW(p.validate(), InvalidArgument);
    p = {};
    p.k_cfl = 1.5;
    EXPECT_THROW(p.validate(), InvalidArgument);
}
