#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "yeast/boundaries.hpp"
#include "yeast/monitor.hpp"
#include "yeast/rules.hpp"
#include "yeast/simharness.hpp"

namespace yeast {

/// Boundary document:
///   {"type": "constant" | "staircase" | "schedule",
///    "alpha": a, "sidedness": "one_sided" | "two_sided",
///    "thresholds": [...], "period_end_indices": [...]}
/// A constant boundary has one threshold ending at N; a schedule has one
/// threshold per event. Staircases add "achieved_fdr_bound" and
/// "inflation_steps". Schedules may carry "alpha": null.
std::string boundary_to_json(const Boundary& b, int indent = 2);

/// Inverse of boundary_to_json; malformed documents raise DataError.
Boundary boundary_from_json(std::string_view text);

/// Staircase plan document, either explicit
///   {"period_sizes": [...], "incr_variances": [...],
///    "cum_variances": [...] (optional), "epsilon": 0.01 (optional)}
/// or equal periods
///   {"horizon": N, "periods": K, "variance_per_event": v, "epsilon": 0.01}.
StaircasePlan plan_from_json(std::string_view text);

/// {"detected_at": n | null, "n_processed": n, "final_s": s,
///  "warnings": [...], "boundary": {...}}
std::string report_to_json(const MonitorReport& report, const Boundary& boundary, int indent = 2);

/// Reads a simulation config in key=value form. Blank lines and lines
/// starting with '#' are skipped. Keys:
///   scenario = normal | student_t | gamma
///   mean, sd (normal); df, shift (student_t); shape, scale (gamma)
///   n_per_group, replications, seed, alpha, threads
///   sidedness = one_sided | two_sided
///   effects = 0.0,0.1,...       methods = YEAST,pYEAST7,...
///   mode = continuous | discrete   checks = 14,28,...
/// Unknown keys and malformed values raise DataError with the line number;
/// unknown method names raise UsageError.
SimConfig read_sim_config(std::istream& in);

/// Manifest of a simulation run: the full config and the library version.
std::string sim_manifest_json(const SimConfig& cfg, int indent = 2);

}  // namespace yeast
