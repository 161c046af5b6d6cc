#pragma once

#include <array>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "spaace/core.hpp"

namespace spaace {

/// Surrogate of a grid-following DER current loop.
///
/// A PI controller acts on (u_ref - i_d). Its output, scaled by the grid-strength gain
/// g(scr) = scr / (scr + k_grid), drives a first-order converter lag tau_f, which feeds a
/// second-order current path with natural frequency omega_r and damping zeta_r:
///
///   dI/dt     = u_ref - i_d
///   tau_f dv/dt = g * (kp (u_ref - i_d) + ki I) - v
///   i_d''     + 2 zeta_r omega_r i_d' + omega_r^2 i_d = omega_r^2 (v + d)
///
/// The disturbance d enters the current path. The defaults are the calibrated surrogate
/// used by the built-in cases.
struct PlantParams {
    double kp = 2.937597;
    double ki = 1107.68254;       // 1/s
    double tau_f = 2e-5;          // s
    double omega_r = 794.621276;  // rad/s
    double zeta_r = 0.4865;
    double scr = 5.0;
    double k_grid = 0.3033;
    double dt = 2e-5;        // s
    double i_limit = 1.5;    // pu

    [[nodiscard]] double grid_gain() const noexcept { return scr / (scr + k_grid); }

    friend bool operator==(const PlantParams&, const PlantParams&) = default;
};

/// Static parameter checks (positivity, finiteness). Stability is checked by Plant.
[[nodiscard]] std::vector<std::string> validate(const PlantParams& params);

/// g(scr) = scr / (scr + k_grid).
[[nodiscard]] double grid_gain(double scr, double k_grid) noexcept;

struct PlantState {
    double integrator = 0.0;  // pu*s
    double converter = 0.0;   // pu
    double i_d = 0.0;         // pu
    double di_d = 0.0;        // pu/s
    double t = 0.0;           // s

    friend bool operator==(const PlantState&, const PlantState&) = default;
};

class UnstablePlantError : public Error {
public:
    using Error::Error;
};

/// Discretized plant. Construction precomputes the exact zero-order-hold transition
/// matrices and rejects parameterizations whose spectral radius is >= 1.
class Plant {
public:
    using StateVector = Eigen::Vector4d;
    using TransitionMatrix = Eigen::Matrix4d;
    using InputMatrix = Eigen::Matrix<double, 4, 2>;

    explicit Plant(PlantParams params);

    /// Advances one dt with u_ref and d held constant. After the linear update, i_d is
    /// clamped to +-i_limit; while clamped the integrator is frozen and di_d is zeroed.
    [[nodiscard]] PlantState step(const PlantState& state, double u_ref, double d) const;

    /// Steady state carrying i_d = level with zero disturbance.
    [[nodiscard]] PlantState equilibrium(double level, double t = 0.0) const;

    [[nodiscard]] const PlantParams& params() const noexcept { return params_; }
    [[nodiscard]] double spectral_radius() const noexcept { return spectral_radius_; }
    [[nodiscard]] const TransitionMatrix& transition() const noexcept { return a_d_; }
    [[nodiscard]] const InputMatrix& input() const noexcept { return b_d_; }

    /// Continuous-time system matrices (state order: integrator, converter, i_d, di_d;
    /// input order: u_ref, d).
    [[nodiscard]] static TransitionMatrix continuous_a(const PlantParams& params);
    [[nodiscard]] static InputMatrix continuous_b(const PlantParams& params);

private:
    PlantParams params_;
    TransitionMatrix a_d_;
    InputMatrix b_d_;
    double spectral_radius_ = 0.0;
};

/// Free-function form of Plant::step. Rebuilds the discretization on every call, so
/// prefer a Plant instance inside loops.
[[nodiscard]] PlantState step(const PlantState& state, const PlantParams& params, double u_ref,
                              double d);

struct RefStep {
    double new_ref = 0.0;
};

struct Fault {
    double depth = 1.0;     // pu added to the current path while active
    double duration = 0.0;  // s
};

struct Event {
    std::variant<RefStep, Fault> kind;
    double t_start = 0.0;

    [[nodiscard]] bool is_fault() const noexcept { return std::holds_alternative<Fault>(kind); }
};

/// Applies one event at time t. A RefStep replaces the reference from t_start on; a Fault
/// contributes its depth for t in [t_start, t_start + duration). Returns (ref, d).
[[nodiscard]] std::pair<double, double> apply_event(const Event& event, double t, double current_ref);

/// Checks t_start >= 0, positive fault durations and non-overlapping faults.
[[nodiscard]] std::vector<std::string> validate(const std::vector<Event>& events);

}  // namespace spaace
