#include "spaace/calibrate.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "spaace/batch.hpp"

namespace spaace {

namespace {

constexpr double kMissing = 1e3;

std::vector<double> log_space(const GridAxis& axis) {
    std::vector<double> out;
    if (axis.count <= 1) return {axis.lo};
    const double a = std::log(axis.lo);
    const double b = std::log(axis.hi);
    for (int i = 0; i < axis.count; ++i) out.push_back(std::exp(a + (b - a) * i / (axis.count - 1)));
    return out;
}

double& knob(PlantParams& p, int which) {
    switch (which) {
        case 0: return p.kp;
        case 1: return p.ki;
        default: return p.tau_f;
    }
}

struct Evaluator {
    const SearchSpace& space;
    const StepMetrics& targets;
    const CalibrationTolerance& tolerance;
    int evaluations = 0;

    std::vector<CalibrationResult> evaluate(const std::vector<PlantParams>& candidates) {
        std::vector<Scenario> scenarios;
        scenarios.reserve(candidates.size());
        for (const auto& p : candidates) {
            Scenario s = space.scenario;
            s.controller.mode = Mode::Base;
            s.plant = p;
            scenarios.push_back(std::move(s));
        }
        BatchOptions options;
        options.execution = space.parallel ? Execution::Parallel : Execution::Serial;
        options.keep_traces = false;
        const auto outcomes = run_batch(scenarios, options);
        evaluations += static_cast<int>(candidates.size());

        std::vector<CalibrationResult> out;
        out.reserve(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            CalibrationResult r;
            r.params = candidates[i];
            if (outcomes[i].ok()) {
                r.achieved = *outcomes[i].metrics;
                r.residuals = residuals(r.achieved, targets, tolerance);
            } else {
                r.residuals = {kMissing, kMissing, kMissing};
            }
            out.push_back(r);
        }
        return out;
    }
};

}  // namespace

bool CalibrationResiduals::feasible() const noexcept {
    return std::abs(overshoot) <= 1.0 && std::abs(settling) <= 1.0 && std::abs(rise) <= 1.0;
}

double CalibrationResiduals::cost() const noexcept {
    return overshoot * overshoot + settling * settling + rise * rise;
}

CalibrationResiduals residuals(const StepMetrics& achieved, const StepMetrics& targets,
                               const CalibrationTolerance& tolerance) {
    CalibrationResiduals r;
    r.overshoot = (achieved.peak_excursion_pct() - targets.peak_excursion_pct()) / tolerance.overshoot_pts;
    auto relative = [](const std::optional<double>& got, const std::optional<double>& want, double tol) {
        if (!got || !want || !(*want > 0.0)) return kMissing;
        return (*got - *want) / (tol * *want);
    };
    r.settling = relative(achieved.settling_time, targets.settling_time, tolerance.settling_rel);
    r.rise = relative(achieved.rise_time, targets.rise_time, tolerance.rise_rel);
    return r;
}

CalibrationResult calibrate(const StepMetrics& targets, const SearchSpace& space,
                            const CalibrationTolerance& tolerance) {
    if (!targets.settling_time || !targets.rise_time) throw Error("calibration targets need settling and rise times");
    if (!step_spec(space.scenario)) throw Error("calibration scenario needs a reference step");

    Evaluator eval{space, targets, tolerance};

    // Coarse grid, plus the seed point itself.
    std::vector<PlantParams> grid{space.scenario.plant};
    for (const double kp : log_space(space.kp)) {
        for (const double ki : log_space(space.ki)) {
            for (const double tau_f : log_space(space.tau_f)) {
                PlantParams p = space.scenario.plant;
                p.kp = kp;
                p.ki = ki;
                p.tau_f = tau_f;
                grid.push_back(p);
            }
        }
    }
    CalibrationResult best;
    best.residuals = {kMissing, kMissing, kMissing};
    for (const auto& r : eval.evaluate(grid)) {
        if (r.residuals.cost() < best.residuals.cost()) best = r;
    }

    // Multiplicative coordinate descent in log space; the factor shrinks when a full sweep
    // brings no improvement.
    double factor = std::exp(std::log(space.kp.hi / space.kp.lo) / std::max(1, space.kp.count - 1));
    for (int sweep = 0; sweep < space.max_refine_sweeps && factor > 1.0 + 1e-4; ++sweep) {
        bool improved = false;
        for (int which = 0; which < 3; ++which) {
            std::array<PlantParams, 2> trial{best.params, best.params};
            knob(trial[0], which) *= factor;
            knob(trial[1], which) /= factor;
            for (const auto& r : eval.evaluate({trial[0], trial[1]})) {
                if (r.residuals.cost() < best.residuals.cost()) {
                    best = r;
                    improved = true;
                }
            }
        }
        if (!improved) factor = std::sqrt(factor);
    }
    best.evaluations = eval.evaluations;

    if (!best.residuals.feasible()) {
        throw CalibrationError("no feasible point: best scaled residuals (overshoot, settling, rise) = (" +
                                   format_double(best.residuals.overshoot) + ", " +
                                   format_double(best.residuals.settling) + ", " +
                                   format_double(best.residuals.rise) + ")",
                               best);
    }
    return best;
}

}  // namespace spaace
