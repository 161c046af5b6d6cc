#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spaace/core.hpp"
#include "spaace/metrics.hpp"
#include "spaace/plant.hpp"

namespace spaace {

/// A timed experiment.
///
/// Event times and t_end are measured from the end of a steady-state hold of length
/// pre_hold, during which the plant sits at equilibrium on initial_ref. Trace times are
/// absolute simulation time, so an event at t_start shows up at pre_hold + t_start.
struct Scenario {
    std::string name = "custom";
    PlantParams plant;
    ControllerParams controller;
    std::vector<Event> events;
    double t_end = 0.06;
    double initial_ref = 0.3;
    double pre_hold = 0.02;
    /// When set, n is re-derived as max(1, round(prediction_horizon / t_sample)) so that a
    /// t_sample override keeps the horizon close to its target.
    std::optional<double> prediction_horizon;
    std::uint64_t seed = 0;

    /// Controller params with n resolved from the prediction horizon.
    [[nodiscard]] ControllerParams effective_controller() const;

    [[nodiscard]] double duration() const noexcept { return pre_hold + t_end; }
};

/// Violations of scenario invariants, including controller and plant params.
[[nodiscard]] std::vector<std::string> validate(const Scenario& scenario);

/// Thrown by run() for an invalid scenario; what() lists every violation.
class ScenarioError : public Error {
public:
    using Error::Error;
};

/// Dual-rate closed loop. At every fine step k (t = k*dt, k = 0..N): evaluate the events,
/// call the modulator if k is a controller instant (controller phase starts at t = 0),
/// record (t, x_ref, x_ref_mod, x), then advance the plant with the held x_ref_mod.
[[nodiscard]] Trace run(const Scenario& scenario);

/// Reference and disturbance at absolute time t.
[[nodiscard]] std::pair<double, double> drive(const Scenario& scenario, double t);

/// Step description for the first reference step, in absolute time.
[[nodiscard]] std::optional<StepSpec> step_spec(const Scenario& scenario);

/// Fault description for the first fault, in absolute time.
[[nodiscard]] std::optional<FaultSpec> fault_spec(const Scenario& scenario);

/// Metrics of the scenario's primary event: the first fault if there is one, else the
/// first reference step. Throws MetricsError if the scenario has neither.
[[nodiscard]] StepMetrics analyze(const Scenario& scenario, const Trace& trace);

/// Built-in cases: case1_1, case1_2, case2_fast, case2_slow, case3_1, case3_2. Aliases:
/// case1 -> case1_1, case2 -> case2_slow, case3 -> case3_1. Throws Error for other names.
[[nodiscard]] Scenario named_case(std::string_view name);
[[nodiscard]] std::vector<std::string> named_case_names();

struct ComparisonRow {
    std::string label;
    Mode mode = Mode::Base;
    std::optional<StepMetrics> metrics;
    std::string error;  // empty when the row succeeded

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
};

/// Runs one scenario per mode, all else equal. Rows come back in the order of `modes`;
/// a failure in one row never aborts the others.
[[nodiscard]] std::vector<ComparisonRow> compare(const Scenario& scenario, const std::vector<Mode>& modes,
                                                 bool parallel = true);

enum class SweepAxis { TSample, Scr, M1, M2 };

[[nodiscard]] std::string_view to_string(SweepAxis axis) noexcept;
[[nodiscard]] SweepAxis parse_sweep_axis(std::string_view text);

/// Copy of scenario with one axis set to value. Does not validate.
[[nodiscard]] Scenario with_axis(Scenario scenario, SweepAxis axis, double value);

/// One comparison per value, value-major. Labels carry "<name>[<axis>=<value>]". An
/// invalid value yields error rows for that value only. Throws Error for empty values.
[[nodiscard]] std::vector<ComparisonRow> sweep(const Scenario& scenario, SweepAxis axis,
                                               const std::vector<double>& values,
                                               const std::vector<Mode>& modes, bool parallel = true);

}  // namespace spaace
