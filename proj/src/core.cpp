#include "spaace/core.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <system_error>

namespace spaace {

std::vector<std::string> validate(const ControllerParams& params) {
    std::vector<std::string> errors;
    if (!(params.t_sample > 0.0) || !std::isfinite(params.t_sample)) {
        errors.emplace_back("t_sample must be positive");
    }
    if (params.n < 1) {
        errors.emplace_back("n must be ≥ 1");
    }
    if (params.j < 1) {
        errors.emplace_back("j must be ≥ 1");
    }
    if (!(params.epsilon >= 0.0) || !std::isfinite(params.epsilon)) {
        errors.emplace_back("epsilon must be ≥ 0");
    }
    if (!std::isfinite(params.m1)) {
        errors.emplace_back("m1 must be finite");
    }
    if (!std::isfinite(params.m2)) {
        errors.emplace_back("m2 must be finite");
    }
    if (!(params.output_limit > 0.0)) {
        errors.emplace_back("output_limit must be positive");
    }
    return errors;
}

std::size_t steps_per_sample(double t_sample, double dt) noexcept {
    if (!(dt > 0.0) || !(t_sample > 0.0)) return 0;
    const double ratio = t_sample / dt;
    const double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) return 0;
    return static_cast<std::size_t>(rounded);
}

std::vector<std::string> validate(const Trace& trace) {
    std::vector<std::string> errors;
    if (!(trace.dt > 0.0)) errors.emplace_back("dt must be positive");
    if (steps_per_sample(trace.t_sample, trace.dt) == 0) {
        errors.emplace_back("t_sample must be an integer multiple of dt");
    }
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        const double t = trace.samples[i].t;
        if (t < 0.0) {
            errors.emplace_back("sample times must be non-negative");
            break;
        }
        if (i == 0) continue;
        const double gap = t - trace.samples[i - 1].t;
        if (!(gap > 0.0)) {
            errors.emplace_back("sample times must be strictly increasing");
            break;
        }
        if (std::abs(gap - trace.dt) > 1e-12 * std::max(1.0, t) + 1e-12 * trace.dt) {
            errors.emplace_back("samples must be uniformly spaced by dt");
            break;
        }
    }
    return errors;
}

std::string_view to_string(Mode mode) noexcept {
    switch (mode) {
        case Mode::Base: return "base";
        case Mode::Spaace: return "spaace";
        case Mode::SpaaceM: return "spaace_m";
    }
    return "?";
}

std::string_view to_string(PredictionSense sense) noexcept {
    return sense == PredictionSense::ReferenceMinusPredicted ? "ref_minus_pred" : "pred_minus_ref";
}

std::string_view to_string(MemoryAverage average) noexcept {
    return average == MemoryAverage::Literal ? "literal" : "mean";
}

Mode parse_mode(std::string_view text) {
    if (text == "base") return Mode::Base;
    if (text == "spaace") return Mode::Spaace;
    if (text == "spaace_m" || text == "spaace-m" || text == "spaacem") return Mode::SpaaceM;
    throw Error("unknown mode '" + std::string(text) + "' (expected base, spaace or spaace_m)");
}

PredictionSense parse_prediction_sense(std::string_view text) {
    if (text == "ref_minus_pred") return PredictionSense::ReferenceMinusPredicted;
    if (text == "pred_minus_ref") return PredictionSense::PredictedMinusReference;
    throw Error("unknown prediction_sense '" + std::string(text) +
                "' (expected ref_minus_pred or pred_minus_ref)");
}

MemoryAverage parse_memory_average(std::string_view text) {
    if (text == "literal") return MemoryAverage::Literal;
    if (text == "mean") return MemoryAverage::Mean;
    throw Error("unknown memory_average '" + std::string(text) + "' (expected literal or mean)");
}

double parse_double(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw Error("not a number: '" + std::string(text) + "'");
    }
    return value;
}

int parse_int(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    int value = 0;
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), last, value);
    if (text.empty() || ec != std::errc() || ptr != last) {
        throw Error("not an integer: '" + std::string(text) + "'");
    }
    return value;
}

double parse_duration(std::string_view text) {
    struct Suffix {
        std::string_view name;
        std::string_view exponent;
        double scale;
    };
    constexpr std::array<Suffix, 4> suffixes{
        {{"ms", "e-3", 1e-3}, {"us", "e-6", 1e-6}, {"µs", "e-6", 1e-6}, {"s", "", 1.0}}};
    for (const auto& suffix : suffixes) {
        if (text.size() > suffix.name.size() && text.ends_with(suffix.name)) {
            const auto mantissa = text.substr(0, text.size() - suffix.name.size());
            // "0.2ms" parses as "0.2e-3" so it lands on the same double as "0.0002".
            if (mantissa.find_first_of("eE") == std::string_view::npos) {
                return parse_double(std::string(mantissa) + std::string(suffix.exponent));
            }
            return parse_double(mantissa) * suffix.scale;
        }
    }
    return parse_double(text);
}

std::string format_double(double value) {
    std::array<char, 32> buffer{};
    auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc()) return "nan";
    return {buffer.data(), ptr};
}

}  // namespace spaace
