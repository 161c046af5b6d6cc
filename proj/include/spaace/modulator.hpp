#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "spaace/core.hpp"

namespace spaace {

/// Thrown when modulate_step is called with a time that does not advance.
class CallOrderError : public Error {
public:
    using Error::Error;
};

/// Tracking error e = x_ref - x.
[[nodiscard]] constexpr double tracking_error(double x_ref, double x) noexcept { return x_ref - x; }

/// Predicted error e_pred = x_ref - x_pred.
[[nodiscard]] constexpr double predicted_error(double x_ref, double x_pred) noexcept {
    return x_ref - x_pred;
}

/// Bounded measurement and error history. This is the only mutable state of the modulator.
///
/// x_history holds at most max(n, j) + 1 measurements and e_history at most j + 1 errors,
/// most recent last, one entry per controller sampling instant.
class ModulatorState {
public:
    ModulatorState() = default;
    explicit ModulatorState(const ControllerParams& params);

    /// Clears both histories and the call-order guard.
    void reset() noexcept;

    /// Resizes the bounds for new params, keeping the most recent entries.
    void rebind(const ControllerParams& params);

    void push(double x, double e, double t);

    [[nodiscard]] const std::deque<double>& x_history() const noexcept { return x_history_; }
    [[nodiscard]] const std::deque<double>& e_history() const noexcept { return e_history_; }
    [[nodiscard]] std::size_t x_capacity() const noexcept { return x_capacity_; }
    [[nodiscard]] std::size_t e_capacity() const noexcept { return e_capacity_; }
    [[nodiscard]] std::optional<double> last_time() const noexcept { return last_t_; }

    /// True once both histories are full.
    [[nodiscard]] bool initialized() const noexcept {
        return x_capacity_ > 0 && x_history_.size() == x_capacity_ && e_history_.size() == e_capacity_;
    }

private:
    std::deque<double> x_history_;
    std::deque<double> e_history_;
    std::size_t x_capacity_ = 0;
    std::size_t e_capacity_ = 0;
    std::optional<double> last_t_;
};

// The helpers below read the history as it stands after the current sample was pushed:
// the newest entries are x(t_k) and e(t_k).

/// (x(t_k) - x(t_k - T_pred)) / T_pred. Empty until the history reaches n samples back.
[[nodiscard]] std::optional<double> rate_of_change(const ModulatorState& state,
                                                   const ControllerParams& params);

/// Linear extrapolation x(t_k) + r(t_k) * T_pred. Empty during cold start.
[[nodiscard]] std::optional<double> predict(const ModulatorState& state,
                                            const ControllerParams& params);

/// Windowed error aggregate over e(t_k - i*t_sample), i = 0..j. The sum is divided by j
/// (MemoryAverage::Literal) or j+1 (MemoryAverage::Mean). Empty while the window is not full.
[[nodiscard]] std::optional<double> past_error_average(const ModulatorState& state,
                                                       const ControllerParams& params);

/// Set-point modulator: a causal per-sample map (x_ref, x) -> x'_ref.
///
/// Call modulate_step once per controller sampling instant with strictly increasing t.
/// Until the history reaches n samples back the unmodified reference is issued; until it
/// holds j+1 errors the memory term is zero. Outside the dead zone (|e| > epsilon) the
/// output is x_ref + m1*e_pred (+ m2*e_past for SpaaceM), clamped to +-output_limit.
class Modulator {
public:
    Modulator() : Modulator(ControllerParams{}) {}
    explicit Modulator(ControllerParams params);

    double modulate_step(double t, double x_ref, double x);

    void reset() noexcept { state_.reset(); }

    /// Swaps in new params mid-run. Throws Error listing violations if they are invalid.
    void set_params(const ControllerParams& params);

    [[nodiscard]] const ControllerParams& params() const noexcept { return params_; }
    [[nodiscard]] const ModulatorState& state() const noexcept { return state_; }

private:
    ControllerParams params_;
    ModulatorState state_;
};

}  // namespace spaace
