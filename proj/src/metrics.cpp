#include "spaace/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace spaace {

namespace {

constexpr double kTimeTolerance = 1e-12;

// Index of the first sample at or after t0.
std::size_t first_at(const Trace& trace, double t0) {
    const auto it = std::lower_bound(trace.samples.begin(), trace.samples.end(), t0 - kTimeTolerance,
                                     [](const Sample& s, double t) { return s.t < t; });
    return static_cast<std::size_t>(it - trace.samples.begin());
}

void check_step(const Trace& trace, const StepSpec& step) {
    if (!(step.x_final != step.x_init)) throw MetricsError("degenerate step: x_final equals x_init");
    if (first_at(trace, step.t0) >= trace.size()) throw MetricsError("trace does not reach t0");
}

// Normalized progress toward x_final: 0 at x_init, 1 at x_final.
double progress(double x, const StepSpec& step) { return (x - step.x_init) / step.magnitude(); }

// Time at which a linear segment from (t_a, f_a) to (t_b, f_b) crosses zero.
double zero_crossing(double t_a, double f_a, double t_b, double f_b) {
    if (f_a == f_b) return t_b;
    return t_a + f_a / (f_a - f_b) * (t_b - t_a);
}

// Settling measured from `from` into a band of half-width `band` around `target`.
std::optional<double> settle(const Trace& trace, std::size_t begin, double target, double band) {
    const auto& s = trace.samples;
    std::optional<std::size_t> last_out;
    for (std::size_t k = begin; k < s.size(); ++k) {
        if (std::abs(s[k].x - target) > band) last_out = k;
    }
    if (!last_out) return 0.0;
    const std::size_t k = *last_out;
    if (k + 1 >= s.size()) return std::nullopt;
    const double f_a = std::abs(s[k].x - target) - band;
    const double f_b = std::abs(s[k + 1].x - target) - band;
    return zero_crossing(s[k].t, f_a, s[k + 1].t, f_b) - s[begin].t;
}

std::optional<double> first_crossing(const Trace& trace, std::size_t begin, const StepSpec& step,
                                     double level) {
    const auto& s = trace.samples;
    for (std::size_t k = begin; k < s.size(); ++k) {
        const double y = progress(s[k].x, step);
        if (y >= level) {
            if (k == begin) return s[k].t;
            const double y_prev = progress(s[k - 1].x, step);
            return zero_crossing(s[k - 1].t, y_prev - level, s[k].t, y - level);
        }
    }
    return std::nullopt;
}

}  // namespace

double overshoot(const Trace& trace, const StepSpec& step) {
    check_step(trace, step);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = first_at(trace, step.t0); k < trace.size(); ++k) {
        peak = std::max(peak, progress(trace.samples[k].x, step));
    }
    return 100.0 * std::max(0.0, peak - 1.0);
}

std::optional<double> settling_time(const Trace& trace, const StepSpec& step, double band_pct) {
    check_step(trace, step);
    const std::size_t begin = first_at(trace, step.t0);
    const auto t = settle(trace, begin, step.x_final, band_pct / 100.0 * std::abs(step.magnitude()));
    if (!t) return std::nullopt;
    // Measured from t0 itself, which may fall between samples.
    return std::max(0.0, *t + trace.samples[begin].t - step.t0);
}

std::optional<double> rise_time(const Trace& trace, const StepSpec& step) {
    check_step(trace, step);
    const std::size_t begin = first_at(trace, step.t0);
    const auto t10 = first_crossing(trace, begin, step, 0.1);
    const auto t90 = first_crossing(trace, begin, step, 0.9);
    if (!t10 || !t90) return std::nullopt;
    return *t90 - *t10;
}

StepMetrics summarize(const Trace& trace, const StepSpec& step, double band_pct) {
    check_step(trace, step);
    StepMetrics m;
    m.rising = step.rising();
    m.peak_value = -std::numeric_limits<double>::infinity();
    m.trough_value = std::numeric_limits<double>::infinity();
    for (std::size_t k = first_at(trace, step.t0); k < trace.size(); ++k) {
        m.peak_value = std::max(m.peak_value, trace.samples[k].x);
        m.trough_value = std::min(m.trough_value, trace.samples[k].x);
    }
    const double span = std::abs(step.magnitude());
    const double past_final = m.rising ? m.peak_value - step.x_final : step.x_final - m.trough_value;
    const double before_initial = m.rising ? step.x_init - m.trough_value : m.peak_value - step.x_init;
    const double excursion = 100.0 * std::max(0.0, past_final) / span;
    const double reverse = 100.0 * std::max(0.0, before_initial) / span;
    m.overshoot_pct = m.rising ? excursion : reverse;
    m.undershoot_pct = m.rising ? reverse : excursion;
    m.settling_time = settling_time(trace, step, band_pct);
    m.rise_time = rise_time(trace, step);
    return m;
}

StepMetrics summarize_fault(const Trace& trace, const FaultSpec& fault, double band_pct) {
    if (!(fault.reference != 0.0)) throw MetricsError("fault metrics need a nonzero reference");
    if (!(fault.t_clear >= fault.t_start)) throw MetricsError("fault clears before it starts");
    const std::size_t start = first_at(trace, fault.t_start);
    const std::size_t clear = first_at(trace, fault.t_clear);
    if (clear >= trace.size()) throw MetricsError("trace does not reach fault clearance");

    const double base = std::abs(fault.reference);
    StepMetrics m;
    m.rising = false;
    m.peak_value = -std::numeric_limits<double>::infinity();
    for (std::size_t k = start; k < trace.size(); ++k) {
        m.peak_value = std::max(m.peak_value, trace.samples[k].x);
    }
    m.trough_value = std::numeric_limits<double>::infinity();
    for (std::size_t k = clear; k < trace.size(); ++k) {
        m.trough_value = std::min(m.trough_value, trace.samples[k].x);
    }
    m.overshoot_pct = 100.0 * std::max(0.0, m.peak_value - fault.reference) / base;
    m.undershoot_pct = 100.0 * std::max(0.0, fault.reference - m.trough_value) / base;
    if (const auto t = settle(trace, clear, fault.reference, band_pct / 100.0 * base)) {
        m.settling_time = std::max(0.0, *t + trace.samples[clear].t - fault.t_clear);
    }
    return m;
}

double equivalent_damping(double overshoot_pct) {
    if (!(overshoot_pct > 0.0)) return 1.0;
    const double l = std::log(overshoot_pct / 100.0);
    return -l / std::sqrt(std::numbers::pi * std::numbers::pi + l * l);
}

}  // namespace spaace
