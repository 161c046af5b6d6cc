#include "spaace/batch.hpp"

#include <exception>

#include <omp.h>

namespace spaace {

RunOutcome run_one(const Scenario& scenario, bool keep_trace) {
    RunOutcome out;
    try {
        Trace trace = run(scenario);
        out.metrics = analyze(scenario, trace);
        if (keep_trace) out.trace = std::move(trace);
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

std::vector<RunOutcome> run_batch(const std::vector<Scenario>& scenarios, const BatchOptions& options) {
    std::vector<RunOutcome> outcomes(scenarios.size());
    const auto count = static_cast<long>(scenarios.size());
    if (options.execution == Execution::Serial) {
        for (long i = 0; i < count; ++i) outcomes[i] = run_one(scenarios[i], options.keep_traces);
        return outcomes;
    }
    const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < count; ++i) {
        outcomes[i] = run_one(scenarios[i], options.keep_traces);
    }
    return outcomes;
}

}  // namespace spaace
