#include "spaace/modulator.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace spaace {

namespace {

std::string join(const std::vector<std::string>& errors) {
    std::string out;
    for (const auto& e : errors) {
        if (!out.empty()) out += "; ";
        out += e;
    }
    return out;
}

}  // namespace

ModulatorState::ModulatorState(const ControllerParams& params) { rebind(params); }

void ModulatorState::reset() noexcept {
    x_history_.clear();
    e_history_.clear();
    last_t_.reset();
}

void ModulatorState::rebind(const ControllerParams& params) {
    x_capacity_ = static_cast<std::size_t>(std::max(params.n, params.j)) + 1;
    e_capacity_ = static_cast<std::size_t>(params.j) + 1;
    while (x_history_.size() > x_capacity_) x_history_.pop_front();
    while (e_history_.size() > e_capacity_) e_history_.pop_front();
}

void ModulatorState::push(double x, double e, double t) {
    x_history_.push_back(x);
    e_history_.push_back(e);
    if (x_history_.size() > x_capacity_) x_history_.pop_front();
    if (e_history_.size() > e_capacity_) e_history_.pop_front();
    last_t_ = t;
}

std::optional<double> rate_of_change(const ModulatorState& state, const ControllerParams& params) {
    const auto& xs = state.x_history();
    const auto lag = static_cast<std::size_t>(params.n);
    if (params.n < 1 || xs.size() < lag + 1) return std::nullopt;
    const double x_now = xs.back();
    const double x_then = xs[xs.size() - 1 - lag];
    return (x_now - x_then) / params.t_pred();
}

std::optional<double> predict(const ModulatorState& state, const ControllerParams& params) {
    const auto rate = rate_of_change(state, params);
    if (!rate) return std::nullopt;
    return state.x_history().back() + *rate * params.t_pred();
}

std::optional<double> past_error_average(const ModulatorState& state, const ControllerParams& params) {
    const auto& es = state.e_history();
    const auto window = static_cast<std::size_t>(params.j) + 1;
    if (params.j < 1 || es.size() < window) return std::nullopt;
    double sum = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        sum += es[es.size() - 1 - i];
    }
    const double divisor = params.memory_average == MemoryAverage::Literal
                               ? static_cast<double>(params.j)
                               : static_cast<double>(window);
    return sum / divisor;
}

Modulator::Modulator(ControllerParams params) : params_(std::move(params)) {
    if (auto errors = validate(params_); !errors.empty()) {
        throw Error("invalid controller params: " + join(errors));
    }
    state_.rebind(params_);
}

void Modulator::set_params(const ControllerParams& params) {
    if (auto errors = validate(params); !errors.empty()) {
        throw Error("invalid controller params: " + join(errors));
    }
    params_ = params;
    state_.rebind(params_);
}

double Modulator::modulate_step(double t, double x_ref, double x) {
    if (const auto last = state_.last_time(); last && !(t > *last)) {
        throw CallOrderError("modulate_step called with non-increasing time " + format_double(t) +
                             " after " + format_double(*last));
    }
    const double e = tracking_error(x_ref, x);
    // Push first: the helpers read x(t_k), e(t_k) as the newest entries, and every other
    // entry is strictly older, so the output depends on samples up to t_k only.
    state_.push(x, e, t);

    if (params_.mode == Mode::Base || !(std::abs(e) > params_.epsilon)) return x_ref;
    const auto x_pred = predict(state_, params_);
    if (!x_pred) return x_ref;

    double e_pred = predicted_error(x_ref, *x_pred);
    if (params_.prediction_sense == PredictionSense::PredictedMinusReference) e_pred = -e_pred;
    double out = x_ref + params_.m1 * e_pred;
    if (params_.mode == Mode::SpaaceM) {
        if (const auto e_past = past_error_average(state_, params_)) {
            out += params_.m2 * *e_past;
        }
    }
    return std::clamp(out, -params_.output_limit, params_.output_limit);
}

}  // namespace spaace
