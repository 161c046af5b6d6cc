#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "../oracle/frozen_values.hpp"
#include "spaace/plant.hpp"

using namespace spaace;

TEST(Plant, DefaultsAreStable) {
    const Plant plant{PlantParams{}};
    EXPECT_LT(plant.spectral_radius(), 1.0);
    EXPECT_GT(plant.spectral_radius(), 0.9);
}

TEST(Plant, EquilibriumIsFixedPoint) {
    for (const double scr : {1.0, 5.0}) {
        PlantParams pp;
        pp.scr = scr;
        const Plant plant(pp);
        const auto s0 = plant.equilibrium(0.3);
        // One step stays put to the rounding floor of the discretized matrices.
        const auto s1 = plant.step(s0, 0.3, 0.0);
        EXPECT_NEAR(s1.i_d, 0.3, 1e-13);
        EXPECT_NEAR(s1.converter, s0.converter, 1e-11);
        EXPECT_NEAR(s1.integrator, s0.integrator, 1e-13);
        // That floor accumulates through the slow pole but stays bounded.
        auto s = s0;
        for (int k = 0; k < 5000; ++k) s = plant.step(s, 0.3, 0.0);
        EXPECT_NEAR(s.i_d, 0.3, 1e-8);
        EXPECT_NEAR(s.di_d, 0.0, 1e-7);
    }
}

TEST(Plant, ZeroSteadyStateError) {
    const Plant plant{PlantParams{}};
    auto s = plant.equilibrium(0.3);
    for (int k = 0; k < 50000; ++k) s = plant.step(s, 0.7, 0.0);  // 1 s
    EXPECT_NEAR(s.i_d, 0.7, 1e-9);
}

// Documented one-step case against the frozen 50-digit RK4 evaluation.
TEST(Plant, OneStepMatchesOracle) {
    PlantParams pp;
    pp.kp = 1.0;
    pp.ki = 500.0;
    pp.tau_f = 1e-3;
    pp.dt = 2e-5;
    pp.k_grid = 0.0;  // g = 1, the infinite-SCR limit
    pp.omega_r = 794.621276;
    pp.zeta_r = 0.4865;
    const Plant plant(pp);
    const PlantState s0{0.001, 0.45, 0.4, 12.0, 0.0};
    const auto s1 = plant.step(s0, 0.7, 0.0);
    EXPECT_NEAR(s1.integrator, oracle::kStepIntegrator, 1e-11 * oracle::kStepIntegrator);
    EXPECT_NEAR(s1.converter, oracle::kStepConverter, 1e-12);
    EXPECT_NEAR(s1.i_d, oracle::kStepCurrent, 1e-12);
    EXPECT_NEAR(s1.di_d, oracle::kStepCurrentRate, 1e-9);
    EXPECT_DOUBLE_EQ(s1.t, 2e-5);
    EXPECT_EQ(step(s0, pp, 0.7, 0.0), s1);
}

TEST(Plant, SaturationHolds) {
    const Plant plant{PlantParams{}};
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    auto s = plant.equilibrium(0.0);
    for (int k = 0; k < 20000; ++k) {
        const double ref = u(rng);
        const double d = k % 100 < 50 ? u(rng) : 0.0;
        s = plant.step(s, ref, d);
        ASSERT_LE(std::abs(s.i_d), plant.params().i_limit);
    }
}

TEST(Plant, AntiWindupFreezesIntegrator) {
    const Plant plant{PlantParams{}};
    auto s = plant.equilibrium(0.7);
    // A reference far above the limit must eventually clamp.
    bool clamped = false;
    for (int k = 0; k < 5000 && !clamped; ++k) {
        const auto next = plant.step(s, 5.0, 0.0);
        if (std::abs(next.i_d) == plant.params().i_limit) {
            clamped = true;
            EXPECT_EQ(next.integrator, s.integrator);
            EXPECT_EQ(next.di_d, 0.0);
        }
        s = next;
    }
    EXPECT_TRUE(clamped);
}

TEST(Plant, GridGainMonotone) {
    double prev = 0.0;
    for (const double scr : {0.1, 0.5, 1.0, 3.0, 5.0, 50.0, 1e6}) {
        const double g = grid_gain(scr, 0.3033);
        EXPECT_GT(g, prev);
        prev = g;
    }
    EXPECT_NEAR(grid_gain(1e12, 0.3033), 1.0, 1e-9);
    PlantParams pp;
    EXPECT_EQ(pp.grid_gain(), grid_gain(pp.scr, pp.k_grid));
}

TEST(Plant, UnstableParamsRejectedAtConstruction) {
    PlantParams pp;
    pp.kp = 0.0;
    pp.ki = 1e7;
    EXPECT_THROW(Plant{pp}, UnstablePlantError);
}

TEST(Plant, InvalidParamsRejected) {
    PlantParams pp;
    pp.tau_f = 0.0;
    EXPECT_FALSE(validate(pp).empty());
    EXPECT_THROW(Plant{pp}, Error);
    pp = PlantParams{};
    pp.scr = 0.05;
    EXPECT_FALSE(validate(pp).empty());
}

TEST(Plant, DeterministicTrajectories) {
    const Plant a{PlantParams{}}, b{PlantParams{}};
    auto sa = a.equilibrium(0.3), sb = b.equilibrium(0.3);
    for (int k = 0; k < 5000; ++k) {
        const double u = 0.3 + 0.4 * ((k / 500) % 2);
        sa = a.step(sa, u, 0.0);
        sb = b.step(sb, u, 0.0);
        ASSERT_EQ(sa, sb);
    }
}

TEST(ApplyEvent, RefStepExamples) {
    const Event ev{RefStep{0.7}, 2e-3};
    EXPECT_EQ(apply_event(ev, 1e-3, 0.3), std::make_pair(0.3, 0.0));
    EXPECT_EQ(apply_event(ev, 2.5e-3, 0.3), std::make_pair(0.7, 0.0));
    EXPECT_EQ(apply_event(ev, 2e-3, 0.3).first, 0.7);
}

TEST(ApplyEvent, FaultWindow) {
    const Event ev{Fault{1.0, 30e-3}, 5e-3};
    EXPECT_EQ(apply_event(ev, 10e-3, 0.7), std::make_pair(0.7, 1.0));
    EXPECT_EQ(apply_event(ev, 4e-3, 0.7).second, 0.0);
    EXPECT_EQ(apply_event(ev, 35e-3, 0.7).second, 0.0);
}

TEST(Events, Validation) {
    EXPECT_TRUE(validate(std::vector<Event>{{RefStep{0.7}, 0.0}, {Fault{1.0, 0.01}, 0.005}}).empty());
    EXPECT_FALSE(validate(std::vector<Event>{{Fault{1.0, 0.0}, 0.005}}).empty());
    EXPECT_FALSE(validate(std::vector<Event>{{RefStep{0.7}, -1.0}}).empty());
    EXPECT_FALSE(validate(std::vector<Event>{{Fault{1.0, 0.01}, 0.0}, {Fault{1.0, 0.01}, 0.005}}).empty());
}
