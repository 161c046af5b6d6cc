#include "spaace/config.hpp"

#include <fstream>
#include <sstream>

namespace spaace {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Wraps value parse failures with the offending key.
template <typename F>
auto parse_as(std::string_view key, std::string_view value, F&& parser) {
    try {
        return parser(value);
    } catch (const Error& e) {
        throw ConfigError(std::string(key) + ": " + e.what());
    }
}

double number(std::string_view key, std::string_view value) {
    return parse_as(key, value, [](std::string_view v) { return parse_double(v); });
}
double duration(std::string_view key, std::string_view value) {
    return parse_as(key, value, [](std::string_view v) { return parse_duration(v); });
}
int integer(std::string_view key, std::string_view value) {
    return parse_as(key, value, [](std::string_view v) { return parse_int(v); });
}

bool boolean(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(value) + "'");
}

bool apply_scenario_setting(Scenario& s, std::string_view key, std::string_view value) {
    if (key == "name") s.name = std::string(value);
    else if (key == "initial_ref") s.initial_ref = number(key, value);
    else if (key == "t_end") s.t_end = duration(key, value);
    else if (key == "pre_hold") s.pre_hold = duration(key, value);
    else if (key == "prediction_horizon") {
        if (value == "none") s.prediction_horizon.reset();
        else s.prediction_horizon = duration(key, value);
    } else if (key == "seed") {
        s.seed = static_cast<std::uint64_t>(parse_as(key, value, [](std::string_view v) {
            const int x = parse_int(v);
            if (x < 0) throw Error("must be ≥ 0");
            return x;
        }));
    } else return false;
    return true;
}

Event event_from_section(const ConfigSection& section) {
    std::string type;
    double t_start = 0.0;
    std::optional<double> ref;
    double depth = 1.0;
    std::optional<double> dur;
    for (const auto& e : section.entries) {
        if (e.key == "type") type = e.value;
        else if (e.key == "t_start" || e.key == "at") t_start = duration(e.key, e.value);
        else if (e.key == "ref") ref = number(e.key, e.value);
        else if (e.key == "depth") depth = number(e.key, e.value);
        else if (e.key == "duration") dur = duration(e.key, e.value);
        else throw ConfigError("line " + std::to_string(e.line) + ": unknown event key '" + e.key + "'");
    }
    if (type == "step") {
        if (!ref) throw ConfigError("line " + std::to_string(section.line) + ": step event needs ref");
        return Event{RefStep{*ref}, t_start};
    }
    if (type == "fault") {
        if (!dur) throw ConfigError("line " + std::to_string(section.line) + ": fault event needs duration");
        return Event{Fault{depth, *dur}, t_start};
    }
    throw ConfigError("line " + std::to_string(section.line) + ": event type must be step or fault");
}

}  // namespace

ConfigDocument parse_config(std::istream& in) {
    ConfigDocument doc;
    doc.sections.push_back(ConfigSection{});
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
            }
            doc.sections.push_back(ConfigSection{std::string(trim(line.substr(1, line.size() - 2))), {}, line_no});
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        doc.sections.back().entries.push_back(ConfigEntry{std::string(key), std::string(value), line_no});
    }
    return doc;
}

ConfigDocument parse_config_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_config(in);
}

ConfigDocument load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_config(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

bool apply_controller_setting(ControllerParams& p, std::string_view key, std::string_view value) {
    if (key == "mode") p.mode = parse_as(key, value, [](std::string_view v) { return parse_mode(v); });
    else if (key == "m1" || key == "m") p.m1 = number(key, value);
    else if (key == "m2") p.m2 = number(key, value);
    else if (key == "n") p.n = integer(key, value);
    else if (key == "t_sample") p.t_sample = duration(key, value);
    else if (key == "epsilon") p.epsilon = number(key, value);
    else if (key == "j") p.j = integer(key, value);
    else if (key == "output_limit") p.output_limit = number(key, value);
    else if (key == "prediction_sense") {
        p.prediction_sense = parse_as(key, value, [](std::string_view v) { return parse_prediction_sense(v); });
    } else if (key == "memory_average") {
        p.memory_average = parse_as(key, value, [](std::string_view v) { return parse_memory_average(v); });
    } else if (key == "strict_eq7") {
        p.memory_average = boolean(key, value) ? MemoryAverage::Literal : MemoryAverage::Mean;
    } else return false;
    return true;
}

bool apply_plant_setting(PlantParams& p, std::string_view key, std::string_view value) {
    if (key == "kp") p.kp = number(key, value);
    else if (key == "ki") p.ki = number(key, value);
    else if (key == "tau_f") p.tau_f = duration(key, value);
    else if (key == "omega_r") p.omega_r = number(key, value);
    else if (key == "zeta_r") p.zeta_r = number(key, value);
    else if (key == "scr") p.scr = number(key, value);
    else if (key == "k_grid") p.k_grid = number(key, value);
    else if (key == "dt") p.dt = duration(key, value);
    else if (key == "i_limit") p.i_limit = number(key, value);
    else return false;
    return true;
}

void apply_setting(Scenario& s, std::string_view key, std::string_view value) {
    std::string_view section;
    if (const auto dot = key.find('.'); dot != std::string_view::npos) {
        section = key.substr(0, dot);
        key = key.substr(dot + 1);
    }
    const bool any = section.empty();
    if ((any || section == "controller") && apply_controller_setting(s.controller, key, value)) {
        if (key == "n") s.prediction_horizon.reset();
        return;
    }
    if ((any || section == "plant") && apply_plant_setting(s.plant, key, value)) return;
    if ((any || section == "scenario") && apply_scenario_setting(s, key, value)) return;
    throw ConfigError("unknown setting '" + (section.empty() ? "" : std::string(section) + ".") + std::string(key) + "'");
}

void apply_assignment(Scenario& s, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(assignment) + "'");
    apply_setting(s, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

Scenario scenario_from_config(const ConfigDocument& doc) {
    Scenario s;
    for (const auto& section : doc.sections) {
        if (section.name != "scenario") continue;
        for (const auto& e : section.entries) {
            if (e.key == "case") s = named_case(e.value);
        }
    }
    std::vector<Event> events;
    bool has_events = false;
    for (const auto& section : doc.sections) {
        if (section.name == "event") {
            events.push_back(event_from_section(section));
            has_events = true;
            continue;
        }
        if (section.name != "scenario" && section.name != "controller" && section.name != "plant") {
            if (section.name.empty() && section.entries.empty()) continue;
            throw ConfigError("line " + std::to_string(section.line) + ": unknown section '" + section.name + "'");
        }
        for (const auto& e : section.entries) {
            if (section.name == "scenario" && e.key == "case") continue;
            try {
                apply_setting(s, section.name + "." + e.key, e.value);
            } catch (const ConfigError& err) {
                throw ConfigError("line " + std::to_string(e.line) + ": " + err.what());
            }
        }
    }
    if (has_events) s.events = std::move(events);
    return s;
}

void apply_plant_fragment(Scenario& s, const ConfigDocument& doc) {
    bool found = false;
    for (const auto& section : doc.sections) {
        if (section.name != "plant") continue;
        found = true;
        for (const auto& e : section.entries) {
            if (!apply_plant_setting(s.plant, e.key, e.value)) {
                throw ConfigError("line " + std::to_string(e.line) + ": unknown plant key '" + e.key + "'");
            }
        }
    }
    if (!found) throw ConfigError("params fragment has no [plant] section");
}

std::string format_plant_fragment(const PlantParams& p) {
    std::ostringstream out;
    out << "[plant]\n"
        << "kp = " << format_double(p.kp) << "\n"
        << "ki = " << format_double(p.ki) << "\n"
        << "tau_f = " << format_double(p.tau_f) << "\n"
        << "omega_r = " << format_double(p.omega_r) << "\n"
        << "zeta_r = " << format_double(p.zeta_r) << "\n"
        << "scr = " << format_double(p.scr) << "\n"
        << "k_grid = " << format_double(p.k_grid) << "\n"
        << "dt = " << format_double(p.dt) << "\n"
        << "i_limit = " << format_double(p.i_limit) << "\n";
    return out.str();
}

StepMetrics targets_from_config(const ConfigDocument& doc) {
    StepMetrics t;
    bool os = false;
    for (const auto& section : doc.sections) {
        if (section.name != "targets") continue;
        for (const auto& e : section.entries) {
            if (e.key == "overshoot_pct") {
                t.overshoot_pct = number(e.key, e.value);
                os = true;
            } else if (e.key == "settling") {
                t.settling_time = duration(e.key, e.value);
            } else if (e.key == "rise") {
                t.rise_time = duration(e.key, e.value);
            } else {
                throw ConfigError("line " + std::to_string(e.line) + ": unknown target '" + e.key + "'");
            }
        }
    }
    if (!os || !t.settling_time || !t.rise_time) {
        throw ConfigError("[targets] needs overshoot_pct, settling and rise");
    }
    return t;
}

}  // namespace spaace
