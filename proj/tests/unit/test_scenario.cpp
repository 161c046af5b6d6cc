#include <gtest/gtest.h>

#include <algorithm>

#include "spaace/batch.hpp"
#include "spaace/config.hpp"
#include "spaace/scenario.hpp"

using namespace spaace;

TEST(Scenario, NamedCasesMatchTheExperimentSetup) {
    const auto c = named_case("case1_1");
    EXPECT_EQ(c.controller.t_sample, 0.2e-3);
    EXPECT_EQ(c.effective_controller().n, 4);
    EXPECT_EQ(c.controller.m1, -0.3);
    EXPECT_EQ(c.controller.m2, -1.0);
    EXPECT_EQ(c.controller.epsilon, 0.05);
    EXPECT_EQ(c.controller.j, 2);
    EXPECT_EQ(c.initial_ref, 0.3);
    EXPECT_EQ(named_case("case1_2").effective_controller().n, 1);
    EXPECT_EQ(named_case("case3_2").plant.scr, 1.0);
    EXPECT_EQ(named_case("case3").name, "case3_1");
    EXPECT_THROW((void)named_case("case9"), Error);
    for (const auto& name : named_case_names()) EXPECT_TRUE(validate(named_case(name)).empty()) << name;
}

TEST(Scenario, ModulatorRunsEveryTenPlantSteps) {
    auto s = named_case("case1_1");
    EXPECT_EQ(steps_per_sample(s.controller.t_sample, s.plant.dt), 10u);
    const auto tr = run(s);
    EXPECT_EQ(tr.size(), static_cast<std::size_t>(std::llround(s.duration() / s.plant.dt)) + 1);
    EXPECT_TRUE(validate(tr).empty());
}

TEST(Scenario, BaseModePassesReferenceThrough) {
    auto s = named_case("case1_1");
    s.controller.mode = Mode::Base;
    for (const auto& p : run(s).samples) ASSERT_EQ(p.x_ref_mod, p.x_ref);
}

TEST(Scenario, BaseEqualsZeroGainSpaaceM) {
    auto base = named_case("case3_1");
    base.controller.mode = Mode::Base;
    auto zero = base;
    zero.controller.mode = Mode::SpaaceM;
    zero.controller.m1 = 0.0;
    zero.controller.m2 = 0.0;
    EXPECT_EQ(run(base), run(zero));
}

TEST(Scenario, ZeroOrderHold) {
    for (const auto* name : {"case1_1", "case1_2", "case2_slow"}) {
        const auto s = named_case(name);
        const auto tr = run(s);
        const auto ratio = steps_per_sample(s.controller.t_sample, s.plant.dt);
        for (std::size_t k = 1; k < tr.size(); ++k) {
            if (k % ratio != 0) ASSERT_EQ(tr.samples[k].x_ref_mod, tr.samples[k - 1].x_ref_mod) << name << " k=" << k;
        }
    }
}

TEST(Scenario, StepSeenAtFirstSamplingInstantAfterEvent) {
    const auto s = named_case("case1_2");  // step at 22 ms absolute, 3 ms sampling
    const auto tr = run(s);
    for (const auto& p : tr.samples) {
        if (p.t < 0.024 - 1e-9) ASSERT_EQ(p.x_ref_mod, 0.3) << p.t;
    }
}

TEST(Scenario, SampleTimeOverrideRederivesHorizon) {
    auto s = named_case("case1_1");
    apply_setting(s, "t_sample", "3ms");
    EXPECT_EQ(run(s), run(named_case("case1_2")));
    apply_setting(s, "n", "2");
    EXPECT_EQ(s.effective_controller().n, 2);
}

TEST(Scenario, InvalidScenarioRejectedBeforeLoop) {
    auto s = named_case("case1_1");
    s.controller.n = 0;
    s.prediction_horizon.reset();
    EXPECT_THROW((void)run(s), ScenarioError);
    s = named_case("case1_1");
    s.plant.ki = 1e7;
    s.plant.kp = 0;
    EXPECT_THROW((void)run(s), UnstablePlantError);
    s = named_case("case1_1");
    s.t_end = 1e-3;
    EXPECT_FALSE(validate(s).empty());
}

TEST(Scenario, DeterministicAcrossRuns) {
    const auto s = named_case("case2_fast");
    EXPECT_EQ(run(s), run(s));
}

TEST(Compare, RowsInRequestedOrder) {
    const auto rows = compare(named_case("case1_1"), {Mode::SpaaceM, Mode::Base});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].mode, Mode::SpaaceM);
    EXPECT_EQ(rows[1].mode, Mode::Base);
    EXPECT_TRUE(rows[0].ok() && rows[1].ok());
}

TEST(Compare, ModeOrderDoesNotChangeRows) {
    const auto a = compare(named_case("case1_2"), {Mode::Base, Mode::Spaace, Mode::SpaaceM});
    const auto b = compare(named_case("case1_2"), {Mode::SpaaceM, Mode::Spaace, Mode::Base});
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(*a[i].metrics, *b[2 - i].metrics);
}

TEST(Compare, SingleBaseRow) {
    const auto rows = compare(named_case("case1_1"), {Mode::Base});
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].mode, Mode::Base);
}

TEST(Sweep, ScrRowsValueMajor) {
    const auto rows = sweep(named_case("case3"), SweepAxis::Scr, {1, 5}, {Mode::Base, Mode::Spaace, Mode::SpaaceM});
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].label, "case3_1[scr=1]");
    EXPECT_EQ(rows[3].label, "case3_1[scr=5]");
    const auto direct = compare(named_case("case3_2"), {Mode::Base});
    EXPECT_EQ(*rows[0].metrics, *direct[0].metrics);
}

TEST(Sweep, InvalidValueYieldsErrorRowsOnly) {
    const auto rows = sweep(named_case("case1_1"), SweepAxis::TSample, {0.2e-3, 0.13e-3}, {Mode::Base});
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0].ok());
    EXPECT_FALSE(rows[1].ok());
    EXPECT_NE(rows[1].error.find("integer multiple"), std::string::npos);
}

TEST(Sweep, EmptyValuesIsPreconditionError) {
    EXPECT_THROW((void)sweep(named_case("case1_1"), SweepAxis::M1, {}, {Mode::Base}), Error);
}

TEST(Sweep, AxisNames) {
    for (const auto axis : {SweepAxis::TSample, SweepAxis::Scr, SweepAxis::M1, SweepAxis::M2}) {
        EXPECT_EQ(parse_sweep_axis(to_string(axis)), axis);
    }
    EXPECT_THROW((void)parse_sweep_axis("kp"), Error);
}

TEST(Analyze, NeedsAStepOrFault) {
    auto s = named_case("case1_1");
    s.events.clear();
    EXPECT_THROW((void)analyze(s, run(s)), MetricsError);
}

TEST(Batch, SerialAndParallelAgree) {
    std::vector<Scenario> scenarios;
    for (const auto& name : named_case_names()) scenarios.push_back(named_case(name));
    auto broken = named_case("case1_1");
    broken.controller.j = 0;
    scenarios.push_back(broken);

    BatchOptions serial;
    serial.execution = Execution::Serial;
    const auto ref = run_batch(scenarios, serial);
    ASSERT_FALSE(ref.back().ok());
    for (const int threads : {1, 3, 8}) {
        BatchOptions par;
        par.threads = threads;
        const auto got = run_batch(scenarios, par);
        ASSERT_EQ(got.size(), ref.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].error, ref[i].error);
            EXPECT_EQ(got[i].trace, ref[i].trace);
            EXPECT_EQ(got[i].metrics, ref[i].metrics);
        }
    }
}

TEST(Batch, DropsTracesOnRequest) {
    BatchOptions o;
    o.keep_traces = false;
    const auto out = run_batch({named_case("case1_1")}, o);
    EXPECT_FALSE(out[0].trace);
    EXPECT_TRUE(out[0].metrics);
}
