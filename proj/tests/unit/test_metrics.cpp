#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "../oracle/frozen_values.hpp"
#include "spaace/metrics.hpp"

using namespace spaace;

namespace {

Trace sampled(const std::function<double(double)>& x, double t_end, double dt, double t_offset = 0.0) {
    Trace tr;
    tr.dt = dt;
    tr.t_sample = dt;
    const auto n = static_cast<int>(std::lround(t_end / dt));
    for (int k = 0; k <= n; ++k) {
        const double t = k * dt;
        tr.samples.push_back(Sample{t + t_offset, 0.0, 0.0, x(t)});
    }
    return tr;
}

Trace first_order(double tau, double dt = 2e-5) {
    return sampled([tau](double t) { return 1.0 - std::exp(-t / tau); }, 40e-3, dt);
}

}  // namespace

TEST(Overshoot, Examples) {
    const auto peak = sampled([](double t) { return t < 0.5e-3 ? 0.0 : (t < 1e-3 ? 1.2 : 1.0); }, 5e-3, 1e-5);
    EXPECT_NEAR(overshoot(peak, {0, 0, 1}), 20.0, 1e-9);
    EXPECT_EQ(overshoot(first_order(2e-3), {0, 0, 1}), 0.0);
    const auto rising = sampled([](double t) { return t < 1e-3 ? 0.3 : (t < 2e-3 ? 0.84944 : 0.7); }, 5e-3, 1e-5);
    EXPECT_NEAR(overshoot(rising, {0, 0.3, 0.7}), oracle::kOvershootForPeak084944, 1e-9);
}

TEST(Overshoot, DegenerateStepRejected) {
    EXPECT_THROW((void)overshoot(first_order(1e-3), {0, 0.5, 0.5}), MetricsError);
    EXPECT_THROW((void)summarize(first_order(1e-3), {0, 1, 1}), MetricsError);
}

TEST(Overshoot, TraceMustReachStart) {
    EXPECT_THROW((void)overshoot(first_order(1e-3), {1.0, 0, 1}), MetricsError);
}

TEST(Settling, FirstOrderAnalytic) {
    const auto t = settling_time(first_order(2e-3), {0, 0, 1});
    ASSERT_TRUE(t);
    EXPECT_NEAR(*t, oracle::kSettlingFirstOrder, 2e-5);
}

TEST(Settling, AlreadyInBand) {
    const auto flat = sampled([](double) { return 1.01; }, 5e-3, 1e-5);
    EXPECT_EQ(*settling_time(flat, {0, 0, 1}), 0.0);
}

TEST(Settling, PersistentOscillationNeverSettles) {
    const auto osc = sampled([](double t) { return 1.0 + 0.2 * std::sin(2000 * t); }, 20e-3, 1e-5);
    EXPECT_FALSE(settling_time(osc, {0, 0, 1}));
}

TEST(Rise, FirstOrderAnalytic) {
    const auto t = rise_time(first_order(2e-3), {0, 0, 1});
    ASSERT_TRUE(t);
    EXPECT_NEAR(*t, oracle::kRiseFirstOrder, 2e-5);
}

TEST(Rise, InstantaneousJump) {
    const auto jump = sampled([](double t) { return t < 1e-3 ? 0.0 : 1.0; }, 5e-3, 1e-5);
    const auto t = rise_time(jump, {0, 0, 1});
    ASSERT_TRUE(t);
    EXPECT_LE(*t, 1e-5);
}

TEST(Rise, StuckBelowThresholdIsAbsent) {
    const auto stuck = sampled([](double t) { return 0.8 * (1.0 - std::exp(-t / 1e-3)); }, 20e-3, 1e-5);
    EXPECT_FALSE(rise_time(stuck, {0, 0, 1}));
}

TEST(Rise, FallingStepUsesDescendingCrossings) {
    const auto fall = sampled([](double t) { return 1.0 - 0.7 * (1.0 - std::exp(-t / 2e-3)); }, 40e-3, 2e-5);
    EXPECT_NEAR(*rise_time(fall, {0, 1.0, 0.3}), oracle::kRiseFirstOrder, 2e-5);
}

TEST(Summarize, FirstOrderJointly) {
    const auto m = summarize(first_order(2e-3), {0, 0, 1});
    EXPECT_EQ(m.overshoot_pct, 0.0);
    EXPECT_EQ(m.undershoot_pct, 0.0);
    EXPECT_NEAR(*m.settling_time, oracle::kSettlingFirstOrder, 2e-5);
    EXPECT_NEAR(*m.rise_time, oracle::kRiseFirstOrder, 2e-5);
    EXPECT_TRUE(m.rising);
}

TEST(Summarize, FallingStepUndershoot) {
    // 1.0 -> 0.3 dipping to 0.1: undershoot of 0.2 on a 0.7 step.
    const auto tr = sampled([](double t) { return t < 1e-3 ? 1.0 : (t < 2e-3 ? 0.1 : 0.3); }, 5e-3, 1e-5);
    const auto m = summarize(tr, {0, 1.0, 0.3});
    EXPECT_NEAR(m.undershoot_pct, 100.0 * 0.2 / 0.7, 1e-9);
    EXPECT_EQ(m.overshoot_pct, 0.0);
    EXPECT_EQ(m.peak_excursion_pct(), m.undershoot_pct);
    EXPECT_EQ(m.trough_value, 0.1);
}

TEST(Invariance, AffineRescaling) {
    const auto base = sampled([](double t) { return 1.0 - std::exp(-t / 1e-3) * std::cos(3000 * t); }, 20e-3, 1e-5);
    auto scaled = base;
    for (auto& s : scaled.samples) s.x = 0.3 + 0.4 * s.x;
    const auto a = summarize(base, {0, 0, 1});
    const auto b = summarize(scaled, {0, 0.3, 0.7});
    EXPECT_NEAR(a.overshoot_pct, b.overshoot_pct, 1e-9);
    EXPECT_NEAR(*a.settling_time, *b.settling_time, 1e-12);
    EXPECT_NEAR(*a.rise_time, *b.rise_time, 1e-12);
}

TEST(Invariance, TimeTranslation) {
    auto f = [](double t) { return 1.0 - std::exp(-t / 1e-3) * std::cos(3000 * t); };
    const auto a = summarize(sampled(f, 20e-3, 1e-5), {0, 0, 1});
    const auto b = summarize(sampled(f, 20e-3, 1e-5, 0.25), {0.25, 0, 1});
    EXPECT_NEAR(a.overshoot_pct, b.overshoot_pct, 1e-12);
    EXPECT_NEAR(*a.settling_time, *b.settling_time, 1e-9);
    EXPECT_NEAR(*a.rise_time, *b.rise_time, 1e-9);
}

TEST(Invariance, HalvingDtMovesMetricsByAtMostOneStep) {
    auto f = [](double t) { return 1.0 - std::exp(-t / 2e-3) * std::cos(1500 * t); };
    const double dt = 2e-5;
    const auto coarse = summarize(sampled(f, 40e-3, dt), {0, 0, 1});
    const auto fine = summarize(sampled(f, 40e-3, dt / 2), {0, 0, 1});
    EXPECT_LE(std::abs(*coarse.settling_time - *fine.settling_time), dt);
    EXPECT_LE(std::abs(*coarse.rise_time - *fine.rise_time), dt);
}

TEST(Fault, RecoveryMetrics) {
    // Reference 0.7; clamp at 1.5 during [1, 2) ms, dip to 0.35 after clearance.
    const auto tr = sampled(
        [](double t) {
            if (t < 1e-3) return 0.7;
            if (t < 2e-3) return 1.5;
            if (t < 3e-3) return 0.35;
            return 0.7;
        },
        10e-3, 1e-5);
    const auto m = summarize_fault(tr, {1e-3, 2e-3, 0.7});
    EXPECT_NEAR(m.undershoot_pct, 50.0, 1e-9);
    EXPECT_NEAR(m.overshoot_pct, 100.0 * 0.8 / 0.7, 1e-9);
    EXPECT_FALSE(m.rise_time);
    ASSERT_TRUE(m.settling_time);
    EXPECT_NEAR(*m.settling_time, 1e-3, 1e-5);
    EXPECT_FALSE(m.rising);
}

TEST(EquivalentDamping, InvertsSecondOrderOvershoot) {
    EXPECT_NEAR(equivalent_damping(oracle::kOvershootAtZeta03), 0.3, 1e-12);
    EXPECT_EQ(equivalent_damping(0.0), 1.0);
}
