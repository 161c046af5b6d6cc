#pragma once

#include <string>

#include "spaace/metrics.hpp"
#include "spaace/plant.hpp"
#include "spaace/scenario.hpp"

namespace spaace {

/// Acceptance band around each target.
struct CalibrationTolerance {
    double overshoot_pts = 2.0;   // absolute, percentage points
    double settling_rel = 0.2;    // relative
    double rise_rel = 0.3;        // relative
};

/// Log-spaced axis of the coarse grid.
struct GridAxis {
    double lo = 1.0;
    double hi = 1.0;
    int count = 1;
};

/// Coarse grid over (kp, ki, tau_f); every other plant field is taken from `scenario.plant`,
/// which also seeds the refinement. The scenario must contain a reference step and is run
/// in Base mode.
struct SearchSpace {
    Scenario scenario = named_case("case1_1");
    GridAxis kp{0.5, 8.0, 9};
    GridAxis ki{200.0, 4000.0, 9};
    GridAxis tau_f{1e-5, 2e-4, 6};
    int max_refine_sweeps = 200;
    bool parallel = true;
};

/// Residuals scaled by the tolerance, so |r| <= 1 is inside the band. A metric the run
/// failed to produce gets a residual of 1e3.
struct CalibrationResiduals {
    double overshoot = 0.0;
    double settling = 0.0;
    double rise = 0.0;

    [[nodiscard]] bool feasible() const noexcept;
    [[nodiscard]] double cost() const noexcept;
};

struct CalibrationResult {
    PlantParams params;
    StepMetrics achieved;
    CalibrationResiduals residuals;
    int evaluations = 0;
};

/// Raised when no point of the search reaches the tolerance band. Carries the best point.
class CalibrationError : public Error {
public:
    CalibrationError(const std::string& what, CalibrationResult best) : Error(what), best_(std::move(best)) {}
    [[nodiscard]] const CalibrationResult& best() const noexcept { return best_; }

private:
    CalibrationResult best_;
};

[[nodiscard]] CalibrationResiduals residuals(const StepMetrics& achieved, const StepMetrics& targets,
                                             const CalibrationTolerance& tolerance = {});

/// Deterministic grid search followed by multiplicative coordinate descent on
/// (kp, ki, tau_f). Targets use overshoot_pct, settling_time and rise_time.
[[nodiscard]] CalibrationResult calibrate(const StepMetrics& targets, const SearchSpace& space = {},
                                          const CalibrationTolerance& tolerance = {});

}  // namespace spaace
