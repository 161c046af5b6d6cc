#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spaace/scenario.hpp"

namespace spaace {

enum class Execution { Serial, Parallel };

struct BatchOptions {
    Execution execution = Execution::Parallel;
    /// OpenMP thread count; 0 keeps the runtime default.
    int threads = 0;
    /// Drop traces after analysis to bound memory on large grids.
    bool keep_traces = true;
};

struct RunOutcome {
    std::optional<Trace> trace;
    std::optional<StepMetrics> metrics;
    std::string error;

    [[nodiscard]] bool ok() const noexcept { return error.empty(); }
};

/// Runs and analyzes every scenario. Outcome i always belongs to scenario i, and each
/// item is computed independently, so the serial and parallel paths agree bitwise.
[[nodiscard]] std::vector<RunOutcome> run_batch(const std::vector<Scenario>& scenarios,
                                                const BatchOptions& options = {});

/// Single-item kernel shared by both paths.
[[nodiscard]] RunOutcome run_one(const Scenario& scenario, bool keep_trace);

}  // namespace spaace
