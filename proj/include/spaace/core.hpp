#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Conventions: every signal is a per-unit double, every time is in seconds.
// Only the CLI and config layer ever see milliseconds.
namespace spaace {

/// Base class for errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Mode { Base, Spaace, SpaaceM };

/// Orientation of the predicted-error term inside the modulation law.
///
/// ReferenceMinusPredicted is the literal form, x_ref - x_pred. PredictedMinusReference
/// flips only that term, which makes a negative m1 raise the issued reference while the
/// output is predicted to fall short of it.
enum class PredictionSense { ReferenceMinusPredicted, PredictedMinusReference };

/// How the memory window is reduced to one number.
///
/// Literal sums the j+1 most recent errors and divides by j; Mean divides by j+1.
enum class MemoryAverage { Literal, Mean };

struct ControllerParams {
    Mode mode = Mode::SpaaceM;
    double m1 = -0.3;
    double m2 = -1.0;
    int n = 4;
    double t_sample = 2e-4;
    double epsilon = 0.05;
    int j = 2;
    PredictionSense prediction_sense = PredictionSense::ReferenceMinusPredicted;
    MemoryAverage memory_average = MemoryAverage::Literal;
    /// Symmetric clamp on the issued reference.
    double output_limit = 1.5;

    /// Prediction horizon, always n * t_sample.
    [[nodiscard]] double t_pred() const noexcept { return n * t_sample; }

    friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

/// Returns every violated invariant by name. An empty list means the params are valid.
[[nodiscard]] std::vector<std::string> validate(const ControllerParams& params);

struct Sample {
    double t = 0.0;
    double x_ref = 0.0;
    double x_ref_mod = 0.0;
    double x = 0.0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

struct Trace {
    std::vector<Sample> samples;
    double dt = 0.0;
    double t_sample = 0.0;

    [[nodiscard]] std::size_t size() const noexcept { return samples.size(); }
    [[nodiscard]] bool empty() const noexcept { return samples.empty(); }

    friend bool operator==(const Trace&, const Trace&) = default;
};

/// Checks uniform spacing, monotone time and the t_sample / dt ratio.
[[nodiscard]] std::vector<std::string> validate(const Trace& trace);

/// Number of fine steps in one controller period, or 0 when t_sample is not an
/// integer multiple of dt.
[[nodiscard]] std::size_t steps_per_sample(double t_sample, double dt) noexcept;

[[nodiscard]] std::string_view to_string(Mode mode) noexcept;
[[nodiscard]] std::string_view to_string(PredictionSense sense) noexcept;
[[nodiscard]] std::string_view to_string(MemoryAverage average) noexcept;

/// Accepts "base", "spaace", "spaace_m" (also "spaace-m"). Throws Error otherwise.
[[nodiscard]] Mode parse_mode(std::string_view text);
[[nodiscard]] PredictionSense parse_prediction_sense(std::string_view text);
[[nodiscard]] MemoryAverage parse_memory_average(std::string_view text);

/// Parses a duration such as "0.2ms", "20us", "3e-3s" or a bare number of seconds.
[[nodiscard]] double parse_duration(std::string_view text);

/// Parses a plain floating point number, rejecting trailing garbage.
[[nodiscard]] double parse_double(std::string_view text);
[[nodiscard]] int parse_int(std::string_view text);

/// Shortest decimal text that parses back to exactly the same double.
[[nodiscard]] std::string format_double(double value);

}  // namespace spaace
