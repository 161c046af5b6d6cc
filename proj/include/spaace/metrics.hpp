#pragma once

#include <optional>

#include "spaace/core.hpp"

namespace spaace {

/// A reference step seen by the metrics: the signal starts at x_init and should end at
/// x_final; measurement starts at t0.
struct StepSpec {
    double t0 = 0.0;
    double x_init = 0.0;
    double x_final = 0.0;

    [[nodiscard]] double magnitude() const noexcept { return x_final - x_init; }
    [[nodiscard]] bool rising() const noexcept { return x_final > x_init; }
};

/// Figures of merit for one response. Times are seconds, percentages are of the step
/// magnitude. Absent times mean "not settled" / "never crossed".
struct StepMetrics {
    double overshoot_pct = 0.0;
    double undershoot_pct = 0.0;
    std::optional<double> settling_time;
    std::optional<double> rise_time;
    double peak_value = 0.0;
    double trough_value = 0.0;
    /// True for a rising step; selects which of the two percentages is the peak excursion.
    bool rising = true;

    /// Excursion past the final value in the direction of the step.
    [[nodiscard]] double peak_excursion_pct() const noexcept {
        return rising ? overshoot_pct : undershoot_pct;
    }

    friend bool operator==(const StepMetrics&, const StepMetrics&) = default;
};

/// Raised for a degenerate step (x_final == x_init) or a trace that does not reach t0.
class MetricsError : public Error {
public:
    using Error::Error;
};

/// Peak excursion past x_final in the step direction, in percent of |x_final - x_init|.
[[nodiscard]] double overshoot(const Trace& trace, const StepSpec& step);

/// Time from t0 after which |x - x_final| stays within band_pct% of the step magnitude.
/// The band exit is located by linear interpolation.
[[nodiscard]] std::optional<double> settling_time(const Trace& trace, const StepSpec& step,
                                                  double band_pct = 5.0);

/// 10%-90% rise time with interpolated first crossings (descending crossings for a
/// falling step).
[[nodiscard]] std::optional<double> rise_time(const Trace& trace, const StepSpec& step);

[[nodiscard]] StepMetrics summarize(const Trace& trace, const StepSpec& step, double band_pct = 5.0);

/// Recovery after a disturbance that ends at t_clear while the reference is held at
/// `reference`. Percentages are of |reference|: undershoot is the deepest dip below the
/// reference after t_clear, overshoot the highest excursion above it from t_start on.
/// Settling is measured from t_clear. Rise time is absent.
struct FaultSpec {
    double t_start = 0.0;
    double t_clear = 0.0;
    double reference = 0.0;
};

[[nodiscard]] StepMetrics summarize_fault(const Trace& trace, const FaultSpec& fault,
                                          double band_pct = 5.0);

/// Damping ratio of the second-order system whose step overshoot is overshoot_pct.
[[nodiscard]] double equivalent_damping(double overshoot_pct);

}  // namespace spaace
