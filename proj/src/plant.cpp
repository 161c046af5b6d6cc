#include "spaace/plant.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace spaace {

namespace {

constexpr double kTimeTolerance = 1e-12;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

double grid_gain(double scr, double k_grid) noexcept { return scr / (scr + k_grid); }

std::vector<std::string> validate(const PlantParams& p) {
    std::vector<std::string> errors;
    if (!(std::isfinite(p.kp) && p.kp >= 0.0)) errors.emplace_back("kp must be ≥ 0");
    if (!positive_finite(p.ki)) errors.emplace_back("ki must be positive");
    if (!positive_finite(p.tau_f)) errors.emplace_back("tau_f must be positive");
    if (!positive_finite(p.omega_r)) errors.emplace_back("omega_r must be positive");
    if (!positive_finite(p.zeta_r)) errors.emplace_back("zeta_r must be positive");
    if (!(std::isfinite(p.scr) && p.scr >= 0.1)) errors.emplace_back("scr must be ≥ 0.1");
    if (!(std::isfinite(p.k_grid) && p.k_grid >= 0.0)) errors.emplace_back("k_grid must be ≥ 0");
    if (!positive_finite(p.dt)) errors.emplace_back("dt must be positive");
    if (!positive_finite(p.i_limit)) errors.emplace_back("i_limit must be positive");
    return errors;
}

Plant::TransitionMatrix Plant::continuous_a(const PlantParams& p) {
    const double g = p.grid_gain();
    const double w2 = p.omega_r * p.omega_r;
    TransitionMatrix a;
    // clang-format off
    a << 0.0,                0.0,           -1.0,                 0.0,
         g * p.ki / p.tau_f, -1.0 / p.tau_f, -g * p.kp / p.tau_f, 0.0,
         0.0,                0.0,            0.0,                 1.0,
         0.0,                w2,            -w2,                 -2.0 * p.zeta_r * p.omega_r;
    // clang-format on
    return a;
}

Plant::InputMatrix Plant::continuous_b(const PlantParams& p) {
    const double g = p.grid_gain();
    const double w2 = p.omega_r * p.omega_r;
    InputMatrix b;
    // clang-format off
    b << 1.0,                 0.0,
         g * p.kp / p.tau_f,  0.0,
         0.0,                 0.0,
         0.0,                 w2;
    // clang-format on
    return b;
}

Plant::Plant(PlantParams params) : params_(params) {
    if (auto errors = validate(params_); !errors.empty()) {
        std::string msg = "invalid plant params:";
        for (const auto& e : errors) msg += " " + e + ";";
        throw Error(msg);
    }
    // Zero-order-hold discretization via the augmented matrix exponential
    // exp([[A, B], [0, 0]] * dt) = [[A_d, B_d], [0, I]].
    Eigen::Matrix<double, 6, 6> augmented = Eigen::Matrix<double, 6, 6>::Zero();
    augmented.topLeftCorner<4, 4>() = continuous_a(params_);
    augmented.topRightCorner<4, 2>() = continuous_b(params_);
    const Eigen::Matrix<double, 6, 6> phi = (augmented * params_.dt).exp();
    a_d_ = phi.topLeftCorner<4, 4>();
    b_d_ = phi.topRightCorner<4, 2>();

    const Eigen::EigenSolver<TransitionMatrix> solver(a_d_, false);
    spectral_radius_ = solver.eigenvalues().cwiseAbs().maxCoeff();
    if (!(spectral_radius_ < 1.0)) {
        throw UnstablePlantError("plant is unstable: discrete spectral radius " +
                                 format_double(spectral_radius_) + " ≥ 1");
    }
}

PlantState Plant::step(const PlantState& s, double u_ref, double d) const {
    const StateVector x(s.integrator, s.converter, s.i_d, s.di_d);
    const Eigen::Vector2d u(u_ref, d);
    const StateVector next = a_d_ * x + b_d_ * u;

    PlantState out{next(0), next(1), next(2), next(3), s.t + params_.dt};
    if (std::abs(out.i_d) > params_.i_limit) {
        out.i_d = std::clamp(out.i_d, -params_.i_limit, params_.i_limit);
        out.di_d = 0.0;
        out.integrator = s.integrator;  // anti-windup
    }
    return out;
}

PlantState Plant::equilibrium(double level, double t) const {
    PlantState s;
    s.integrator = level / (params_.grid_gain() * params_.ki);
    s.converter = level;
    s.i_d = level;
    s.di_d = 0.0;
    s.t = t;
    return s;
}

PlantState step(const PlantState& state, const PlantParams& params, double u_ref, double d) {
    return Plant(params).step(state, u_ref, d);
}

std::pair<double, double> apply_event(const Event& event, double t, double current_ref) {
    if (t + kTimeTolerance < event.t_start) return {current_ref, 0.0};
    if (const auto* step = std::get_if<RefStep>(&event.kind)) {
        return {step->new_ref, 0.0};
    }
    const auto& fault = std::get<Fault>(event.kind);
    if (t + kTimeTolerance < event.t_start + fault.duration) return {current_ref, fault.depth};
    return {current_ref, 0.0};
}

std::vector<std::string> validate(const std::vector<Event>& events) {
    std::vector<std::string> errors;
    std::vector<std::pair<double, double>> windows;
    for (const auto& ev : events) {
        if (!(ev.t_start >= 0.0) || !std::isfinite(ev.t_start)) {
            errors.emplace_back("event t_start must be ≥ 0");
        }
        if (const auto* fault = std::get_if<Fault>(&ev.kind)) {
            if (!positive_finite(fault->duration)) {
                errors.emplace_back("fault duration must be positive");
            } else {
                windows.emplace_back(ev.t_start, ev.t_start + fault->duration);
            }
        }
    }
    std::sort(windows.begin(), windows.end());
    for (std::size_t i = 1; i < windows.size(); ++i) {
        if (windows[i].first < windows[i - 1].second) {
            errors.emplace_back("faults must not overlap");
            break;
        }
    }
    return errors;
}

}  // namespace spaace
