#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "spaace/core.hpp"
#include "spaace/metrics.hpp"
#include "spaace/plant.hpp"
#include "spaace/scenario.hpp"

namespace spaace {

class ConfigError : public Error {
public:
    using Error::Error;
};

struct ConfigEntry {
    std::string key;
    std::string value;
    int line = 0;
};

struct ConfigSection {
    std::string name;  // empty for entries before the first header
    std::vector<ConfigEntry> entries;
    int line = 0;
};

/// Flat key=value text with [section] headers. '#' and ';' start comments, blank lines
/// are ignored, whitespace around keys and values is trimmed. A section name may repeat
/// ([event] does, once per event).
struct ConfigDocument {
    std::vector<ConfigSection> sections;
};

[[nodiscard]] ConfigDocument parse_config(std::istream& in);
[[nodiscard]] ConfigDocument parse_config_text(std::string_view text);
[[nodiscard]] ConfigDocument load_config_file(const std::string& path);

/// Sets one ControllerParams field. Returns false when key is not a controller key; throws
/// ConfigError when the value does not parse.
bool apply_controller_setting(ControllerParams& params, std::string_view key, std::string_view value);
bool apply_plant_setting(PlantParams& params, std::string_view key, std::string_view value);

/// Sets one scenario, controller or plant field. Keys may be qualified
/// ("plant.kp") or bare ("kp"). Setting n drops the prediction-horizon target; setting
/// t_sample keeps it, so n is re-derived. Throws ConfigError for unknown keys.
void apply_setting(Scenario& scenario, std::string_view key, std::string_view value);

/// Parses "key=value" and applies it.
void apply_assignment(Scenario& scenario, std::string_view assignment);

/// Builds a scenario from a document. [scenario] case=<name> selects a named case as the
/// starting point; [controller] and [plant] override fields; any [event] sections replace
/// the event list.
[[nodiscard]] Scenario scenario_from_config(const ConfigDocument& doc);

/// Applies only the [plant] section (a calibrated params fragment) to a scenario.
void apply_plant_fragment(Scenario& scenario, const ConfigDocument& doc);

/// [plant] fragment listing every PlantParams field, in round-trip precision.
[[nodiscard]] std::string format_plant_fragment(const PlantParams& params);

/// [targets] overshoot_pct=<percent> settling=<duration> rise=<duration>.
[[nodiscard]] StepMetrics targets_from_config(const ConfigDocument& doc);

}  // namespace spaace
