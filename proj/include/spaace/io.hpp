#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "spaace/core.hpp"
#include "spaace/metrics.hpp"
#include "spaace/scenario.hpp"

namespace spaace {

/// Header `t,x_ref,x_ref_mod,x`, one row per sample, shortest round-trip numbers.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Inverse of write_trace_csv. dt is taken from the first two rows; t_sample is not
/// stored in the file and is left at 0 unless given.
[[nodiscard]] Trace read_trace_csv(std::istream& in, double t_sample = 0.0);

/// Two-column "metric  value" table for one run.
void write_metrics_table(std::ostream& out, const std::string& label, Mode mode, const StepMetrics& metrics);

/// CSV with columns case,mode,overshoot_pct,settling_ms,rise_ms. overshoot_pct is the peak
/// excursion in the step direction (the post-fault undershoot for fault cases). Failed rows
/// carry ERR(<reason>) in every metric cell; absent times are written as "n/a".
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Same content as write_comparison_csv, as an aligned text table.
void write_comparison_table(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Static line chart of x_ref, x_ref_mod and x against time in ms.
void write_trace_svg(std::ostream& out, const Trace& trace, const std::string& title);

}  // namespace spaace
