// spaace-sim: reproduce the set-point modulation case studies, calibrate the surrogate
// plant, and serve the modulator over TCP.

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <omp.h>
#include <pthread.h>

#include "CLI11.hpp"
#include "spaace/batch.hpp"
#include "spaace/calibrate.hpp"
#include "spaace/config.hpp"
#include "spaace/cosim.hpp"
#include "spaace/io.hpp"
#include "spaace/scenario.hpp"

namespace fs = std::filesystem;
using namespace spaace;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Options shared by every command that builds a scenario.
struct ScenarioArgs {
    std::string case_name;
    std::string config_path;
    std::string params_path;
    std::vector<std::string> sets;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& args) {
    auto* c = cmd->add_option("case", args.case_name, "Named case (case1_1, case1_2, case2_fast, case2_slow, case3_1, case3_2) or config file");
    auto* f = cmd->add_option("--config", args.config_path, "Scenario config file")->check(CLI::ExistingFile);
    c->excludes(f);
    f->excludes(c);
    cmd->add_option("--params", args.params_path, "Plant params fragment, e.g. from calibrate")->check(CLI::ExistingFile);
    cmd->add_option("--set", args.sets, "Override key=value (repeatable)")->allow_extra_args(false);
}

Scenario build_scenario(const ScenarioArgs& args) {
    Scenario s;
    if (!args.config_path.empty()) {
        s = scenario_from_config(load_config_file(args.config_path));
    } else if (!args.case_name.empty() && fs::is_regular_file(args.case_name)) {
        s = scenario_from_config(load_config_file(args.case_name));
    } else if (!args.case_name.empty()) {
        try {
            s = named_case(args.case_name);
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    } else {
        throw UsageError("a case name or --config is required");
    }
    if (!args.params_path.empty()) apply_plant_fragment(s, load_config_file(args.params_path));
    for (const auto& a : args.sets) apply_assignment(s, a);
    if (auto errors = validate(s); !errors.empty()) {
        std::string msg = "invalid configuration:";
        for (const auto& e : errors) msg += "\n  " + e;
        throw Error(msg);
    }
    return s;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<Mode> parse_modes(const std::string& text) {
    std::vector<Mode> modes;
    for (const auto& m : split(text)) {
        try {
            modes.push_back(parse_mode(m));
        } catch (const Error& e) {
            throw UsageError(e.what());
        }
    }
    if (modes.empty()) throw UsageError("no modes given");
    return modes;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream out(dir / name);
    if (!out) throw Error("cannot write " + (dir / name).string());
    return out;
}

void set_threads(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
}

int emit_rows(const std::vector<ComparisonRow>& rows, const fs::path& out_dir, const std::string& csv_name,
              bool write_csv) {
    write_comparison_table(std::cout, rows);
    if (write_csv) {
        auto out = open_output(out_dir, csv_name);
        write_comparison_csv(out, rows);
        std::cout << "wrote " << (out_dir / csv_name).string() << '\n';
    }
    for (const auto& r : rows) {
        if (!r.ok()) return kExitFailure;
    }
    return 0;
}

int cmd_run(const ScenarioArgs& args, const std::string& emit, const fs::path& out_dir) {
    bool csv = false, svg = false, table = false;
    for (const auto& e : split(emit)) {
        if (e == "csv") csv = true;
        else if (e == "svg") svg = true;
        else if (e == "table") table = true;
        else throw UsageError("unknown --emit flag '" + e + "' (expected csv, svg, table)");
    }
    const Scenario s = build_scenario(args);
    const Trace trace = run(s);
    const StepMetrics metrics = analyze(s, trace);
    if (csv) {
        auto out = open_output(out_dir, "trace.csv");
        write_trace_csv(out, trace);
    }
    if (svg) {
        auto out = open_output(out_dir, "trace.svg");
        write_trace_svg(out, trace, s.name + " (" + std::string(to_string(s.controller.mode)) + ")");
    }
    if (table) {
        auto out = open_output(out_dir, "metrics.txt");
        write_metrics_table(out, s.name, s.controller.mode, metrics);
        write_metrics_table(std::cout, s.name, s.controller.mode, metrics);
    }
    return 0;
}

int cmd_calibrate(const std::string& targets_path, const fs::path& out_path) {
    StepMetrics targets;
    if (targets_path.empty()) {
        targets.overshoot_pct = 37.36;
        targets.settling_time = 14.59e-3;
        targets.rise_time = 0.78e-3;
    } else {
        targets = targets_from_config(load_config_file(targets_path));
    }
    auto report = [](const CalibrationResult& r) {
        std::cout << "overshoot_pct " << r.achieved.overshoot_pct << "  residual " << r.residuals.overshoot << '\n'
                  << "settling_ms   " << (r.achieved.settling_time ? *r.achieved.settling_time * 1e3 : -1)
                  << "  residual " << r.residuals.settling << '\n'
                  << "rise_ms       " << (r.achieved.rise_time ? *r.achieved.rise_time * 1e3 : -1) << "  residual "
                  << r.residuals.rise << '\n'
                  << "evaluations   " << r.evaluations << '\n';
    };
    try {
        const auto result = calibrate(targets);
        report(result);
        std::ofstream out(out_path);
        if (!out) throw Error("cannot write " + out_path.string());
        out << "# calibrated surrogate plant\n" << format_plant_fragment(result.params);
        std::cout << "wrote " << out_path.string() << '\n';
        return 0;
    } catch (const CalibrationError& e) {
        std::cerr << "calibration failed: " << e.what() << '\n';
        report(e.best());
        return kExitFailure;
    }
}

int cmd_serve(const ScenarioArgs& args, int port) {
    ScenarioArgs a = args;
    if (a.case_name.empty() && a.config_path.empty()) a.case_name = "case1_1";
    const Scenario s = build_scenario(a);

    // Route SIGINT/SIGTERM to a watcher thread so stop() runs outside a signal handler.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    CosimServer server(s.effective_controller(), static_cast<std::uint16_t>(port));
    std::cout << "listening on 127.0.0.1:" << server.port() << std::endl;
    std::thread watcher([&] {
        int sig = 0;
        sigwait(&signals, &sig);
        server.stop();
    });
    server.serve();
    pthread_kill(watcher.native_handle(), SIGTERM);
    watcher.join();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Set-point modulation simulator for grid-following DER current control"};
    app.require_subcommand(1);

    ScenarioArgs run_args, cmp_args, sweep_args, serve_args;
    std::string emit = "csv,table";
    std::string out_dir = ".";
    std::string modes_text;
    std::string sweep_axis, sweep_values;
    std::string sweep_modes = "base,spaace,spaace_m";
    std::string targets_path;
    std::string params_out = "calibrated.conf";
    int threads = 0;
    int port = 0;
    bool no_csv = false;

    auto* run_cmd = app.add_subcommand("run", "Run one scenario and write trace.csv / trace.svg / metrics.txt");
    add_scenario_options(run_cmd, run_args);
    run_cmd->add_option("--emit", emit, "Comma list of csv, svg, table");
    run_cmd->add_option("--out", out_dir, "Output directory");

    auto* cmp_cmd = app.add_subcommand("compare", "Compare modes on one scenario");
    cmp_cmd->add_option("case", cmp_args.case_name, "Named case or config file")->required();
    cmp_cmd->add_option("modes", modes_text, "Comma list of base, spaace, spaace_m")->required();
    cmp_cmd->add_option("--params", cmp_args.params_path, "Plant params fragment")->check(CLI::ExistingFile);
    cmp_cmd->add_option("--set", cmp_args.sets, "Override key=value (repeatable)");
    cmp_cmd->add_option("--out", out_dir, "Directory for comparison.csv");
    cmp_cmd->add_flag("--no-csv", no_csv, "Only print the table");
    cmp_cmd->add_option("--threads", threads, "OpenMP threads (0 = default)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter across modes");
    sweep_cmd->add_option("case", sweep_args.case_name, "Named case or config file")->required();
    sweep_cmd->add_option("axis", sweep_axis, "t_sample, scr, m1 or m2")->required();
    sweep_cmd->add_option("values", sweep_values, "Comma list of values (t_sample accepts ms/us/s)")->required();
    sweep_cmd->add_option("--modes", sweep_modes, "Comma list of modes");
    sweep_cmd->add_option("--params", sweep_args.params_path, "Plant params fragment")->check(CLI::ExistingFile);
    sweep_cmd->add_option("--set", sweep_args.sets, "Override key=value (repeatable)");
    sweep_cmd->add_option("--out", out_dir, "Directory for sweep.csv");
    sweep_cmd->add_flag("--no-csv", no_csv, "Only print the table");
    sweep_cmd->add_option("--threads", threads, "OpenMP threads (0 = default)");

    auto* cal_cmd = app.add_subcommand("calibrate", "Fit the surrogate plant to base-case step targets");
    cal_cmd->add_option("targets", targets_path, "Targets file with a [targets] section")->check(CLI::ExistingFile);
    cal_cmd->add_option("--out", params_out, "Where to write the [plant] fragment");
    cal_cmd->add_option("--threads", threads, "OpenMP threads (0 = default)");

    auto* serve_cmd = app.add_subcommand("serve", "Serve the modulator over TCP");
    add_scenario_options(serve_cmd, serve_args);
    serve_cmd->add_option("--port", port, "TCP port (0 picks a free one)")->required()->check(CLI::Range(0, 65535));

    CLI11_PARSE(app, argc, argv);

    try {
        set_threads(threads);
        if (*run_cmd) return cmd_run(run_args, emit, out_dir);
        if (*cmp_cmd) {
            const auto modes = parse_modes(modes_text);
            const auto s = build_scenario(cmp_args);
            return emit_rows(compare(s, modes), out_dir, "comparison.csv", !no_csv);
        }
        if (*sweep_cmd) {
            const auto modes = parse_modes(sweep_modes);
            SweepAxis axis;
            try {
                axis = parse_sweep_axis(sweep_axis);
            } catch (const Error& e) {
                throw UsageError(e.what());
            }
            std::vector<double> values;
            for (const auto& v : split(sweep_values)) {
                try {
                    values.push_back(axis == SweepAxis::TSample ? parse_duration(v) : parse_double(v));
                } catch (const Error& e) {
                    throw UsageError("bad sweep value '" + v + "': " + e.what());
                }
            }
            if (values.empty()) throw UsageError("no sweep values given");
            const auto s = build_scenario(sweep_args);
            return emit_rows(sweep(s, axis, values, modes), out_dir, "sweep.csv", !no_csv);
        }
        if (*cal_cmd) return cmd_calibrate(targets_path, params_out);
        if (*serve_cmd) return cmd_serve(serve_args, port);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
