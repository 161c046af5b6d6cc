#include "spaace/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "spaace/batch.hpp"
#include "spaace/modulator.hpp"

namespace spaace {

namespace {

std::vector<Event> shifted(const std::vector<Event>& events, double offset) {
    std::vector<Event> out = events;
    for (auto& ev : out) ev.t_start += offset;
    return out;
}

std::pair<double, double> drive_absolute(const std::vector<Event>& events, double initial_ref, double t) {
    double ref = initial_ref;
    double d = 0.0;
    for (const auto& ev : events) {
        const auto [r, dd] = apply_event(ev, t, ref);
        ref = r;
        d += dd;
    }
    return {ref, d};
}

std::string join(const std::vector<std::string>& errors) {
    std::string out;
    for (const auto& e : errors) {
        if (!out.empty()) out += "; ";
        out += e;
    }
    return out;
}

constexpr double kCasePredictionHorizon = 0.8e-3;

Scenario case_defaults(std::string name) {
    Scenario s;
    s.name = std::move(name);
    s.controller.mode = Mode::SpaaceM;
    s.controller.m1 = -0.3;
    s.controller.m2 = -1.0;
    s.controller.epsilon = 0.05;
    s.controller.j = 2;
    s.controller.t_sample = 0.2e-3;
    s.controller.prediction_sense = PredictionSense::PredictedMinusReference;
    s.controller.memory_average = MemoryAverage::Mean;
    s.prediction_horizon = kCasePredictionHorizon;
    s.controller.n = s.effective_controller().n;
    s.pre_hold = 0.02;
    return s;
}

Scenario step_case(std::string name, double from, double to, double t_sample, double scr) {
    Scenario s = case_defaults(std::move(name));
    s.initial_ref = from;
    s.events = {Event{RefStep{to}, 2e-3}};
    s.t_end = 0.062;
    s.controller.t_sample = t_sample;
    s.controller.n = s.effective_controller().n;
    s.plant.scr = scr;
    return s;
}

Scenario fault_case(std::string name, double t_sample) {
    Scenario s = case_defaults(std::move(name));
    s.initial_ref = 0.7;
    s.events = {Event{Fault{1.0, 15e-3}, 5e-3}};
    s.t_end = 0.08;
    s.controller.t_sample = t_sample;
    s.controller.n = s.effective_controller().n;
    return s;
}

}  // namespace

ControllerParams Scenario::effective_controller() const {
    ControllerParams c = controller;
    if (prediction_horizon && c.t_sample > 0.0) {
        c.n = std::max(1, static_cast<int>(std::lround(*prediction_horizon / c.t_sample)));
    }
    return c;
}

std::vector<std::string> validate(const Scenario& s) {
    std::vector<std::string> errors = validate(s.effective_controller());
    for (auto& e : validate(s.plant)) errors.push_back(std::move(e));
    for (auto& e : validate(s.events)) errors.push_back(std::move(e));
    if (!(s.pre_hold >= 0.0) || !std::isfinite(s.pre_hold)) errors.emplace_back("pre_hold must be ≥ 0");
    if (!(s.t_end > 0.0) || !std::isfinite(s.t_end)) errors.emplace_back("t_end must be positive");
    for (const auto& ev : s.events) {
        if (!(ev.t_start < s.t_end)) {
            errors.emplace_back("t_end must exceed every event start");
            break;
        }
    }
    if (s.prediction_horizon && !(*s.prediction_horizon > 0.0)) {
        errors.emplace_back("prediction_horizon must be positive");
    }
    if (!std::isfinite(s.initial_ref)) errors.emplace_back("initial_ref must be finite");
    if (s.controller.t_sample > 0.0 && s.plant.dt > 0.0) {
        if (s.plant.dt > s.controller.t_sample) {
            errors.emplace_back("dt must not exceed t_sample");
        } else if (steps_per_sample(s.controller.t_sample, s.plant.dt) == 0) {
            errors.emplace_back("t_sample must be an integer multiple of dt");
        }
    }
    return errors;
}

std::pair<double, double> drive(const Scenario& s, double t) {
    return drive_absolute(shifted(s.events, s.pre_hold), s.initial_ref, t);
}

Trace run(const Scenario& s) {
    if (auto errors = validate(s); !errors.empty()) throw ScenarioError("invalid scenario: " + join(errors));

    const Plant plant(s.plant);
    Modulator modulator(s.effective_controller());
    const auto events = shifted(s.events, s.pre_hold);
    const double dt = s.plant.dt;
    const std::size_t ratio = steps_per_sample(s.controller.t_sample, dt);
    const auto n_steps = static_cast<std::size_t>(std::llround(s.duration() / dt));

    Trace trace;
    trace.dt = dt;
    trace.t_sample = s.controller.t_sample;
    trace.samples.reserve(n_steps + 1);

    PlantState state = plant.equilibrium(s.initial_ref);
    double held = s.initial_ref;
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const auto [ref, d] = drive_absolute(events, s.initial_ref, t);
        if (k % ratio == 0) held = modulator.modulate_step(t, ref, state.i_d);
        trace.samples.push_back(Sample{t, ref, held, state.i_d});
        state = plant.step(state, held, d);
    }
    return trace;
}

std::optional<StepSpec> step_spec(const Scenario& s) {
    double ref = s.initial_ref;
    for (const auto& ev : s.events) {
        if (const auto* step = std::get_if<RefStep>(&ev.kind)) {
            if (step->new_ref != ref) return StepSpec{s.pre_hold + ev.t_start, ref, step->new_ref};
        }
    }
    return std::nullopt;
}

std::optional<FaultSpec> fault_spec(const Scenario& s) {
    for (const auto& ev : s.events) {
        if (const auto* fault = std::get_if<Fault>(&ev.kind)) {
            const double start = s.pre_hold + ev.t_start;
            const auto [ref, d] = drive(s, start);
            return FaultSpec{start, start + fault->duration, ref};
        }
    }
    return std::nullopt;
}

StepMetrics analyze(const Scenario& s, const Trace& trace) {
    if (const auto fault = fault_spec(s)) return summarize_fault(trace, *fault);
    if (const auto step = step_spec(s)) return summarize(trace, *step);
    throw MetricsError("scenario has no reference step or fault to measure");
}

Scenario named_case(std::string_view name) {
    if (name == "case1_1" || name == "case1") return step_case("case1_1", 0.3, 0.7, 0.2e-3, 5.0);
    if (name == "case1_2") return step_case("case1_2", 0.3, 0.7, 3e-3, 5.0);
    if (name == "case2_fast") return fault_case("case2_fast", 0.2e-3);
    if (name == "case2_slow" || name == "case2") return fault_case("case2_slow", 3e-3);
    if (name == "case3_1" || name == "case3") return step_case("case3_1", 1.0, 0.3, 0.2e-3, 5.0);
    if (name == "case3_2") return step_case("case3_2", 1.0, 0.3, 0.2e-3, 1.0);
    throw Error("unknown case '" + std::string(name) + "'");
}

std::vector<std::string> named_case_names() {
    return {"case1_1", "case1_2", "case2_fast", "case2_slow", "case3_1", "case3_2"};
}

namespace {

std::vector<ComparisonRow> rows_from(const std::vector<Scenario>& scenarios, const std::vector<std::string>& labels,
                                     bool parallel) {
    BatchOptions options;
    options.execution = parallel ? Execution::Parallel : Execution::Serial;
    options.keep_traces = false;
    const auto outcomes = run_batch(scenarios, options);
    std::vector<ComparisonRow> rows;
    rows.reserve(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        rows.push_back(ComparisonRow{labels[i], scenarios[i].controller.mode, outcomes[i].metrics, outcomes[i].error});
    }
    return rows;
}

}  // namespace

std::vector<ComparisonRow> compare(const Scenario& scenario, const std::vector<Mode>& modes, bool parallel) {
    std::vector<Scenario> scenarios;
    std::vector<std::string> labels;
    for (const Mode mode : modes) {
        Scenario s = scenario;
        s.controller.mode = mode;
        scenarios.push_back(std::move(s));
        labels.push_back(scenario.name);
    }
    return rows_from(scenarios, labels, parallel);
}

std::string_view to_string(SweepAxis axis) noexcept {
    switch (axis) {
        case SweepAxis::TSample: return "t_sample";
        case SweepAxis::Scr: return "scr";
        case SweepAxis::M1: return "m1";
        case SweepAxis::M2: return "m2";
    }
    return "?";
}

SweepAxis parse_sweep_axis(std::string_view text) {
    static const std::map<std::string_view, SweepAxis> table{
        {"t_sample", SweepAxis::TSample}, {"scr", SweepAxis::Scr}, {"m1", SweepAxis::M1}, {"m2", SweepAxis::M2}};
    if (const auto it = table.find(text); it != table.end()) return it->second;
    throw Error("unknown sweep axis '" + std::string(text) + "' (expected t_sample, scr, m1 or m2)");
}

Scenario with_axis(Scenario s, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::TSample: s.controller.t_sample = value; break;
        case SweepAxis::Scr: s.plant.scr = value; break;
        case SweepAxis::M1: s.controller.m1 = value; break;
        case SweepAxis::M2: s.controller.m2 = value; break;
    }
    return s;
}

std::vector<ComparisonRow> sweep(const Scenario& scenario, SweepAxis axis, const std::vector<double>& values,
                                 const std::vector<Mode>& modes, bool parallel) {
    if (values.empty()) throw Error("sweep needs at least one value");
    if (modes.empty()) throw Error("sweep needs at least one mode");
    std::vector<Scenario> scenarios;
    std::vector<std::string> labels;
    for (const double value : values) {
        const Scenario base = with_axis(scenario, axis, value);
        const std::string label = scenario.name + "[" + std::string(to_string(axis)) + "=" + format_double(value) + "]";
        for (const Mode mode : modes) {
            Scenario s = base;
            s.controller.mode = mode;
            scenarios.push_back(std::move(s));
            labels.push_back(label);
        }
    }
    return rows_from(scenarios, labels, parallel);
}

}  // namespace spaace
