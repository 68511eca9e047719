#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "yeast/events.hpp"
#include "yeast/rules.hpp"
#include "yeast/variance.hpp"

namespace yeast {

/// Synthetic clustered event data with a history period and a later
/// validation period over the same subjects. Each subject has a latent
/// effect u ~ N(0, 1) shared by both periods; an event outcome is
///   exp(log_mean + log_sd * (sqrt(rho) u + sqrt(1 - rho) e)),  e ~ N(0, 1),
/// so the latent scores of two events of one subject have correlation rho.
/// Per period a subject produces min_events + Poisson(extra_events_mean)
/// events at uniformly random instants of the period.
struct ClusteredSynthConfig {
  std::int64_t n_subjects = 2000;
  std::int64_t min_events = 5;
  double extra_events_mean = 1.0;
  double within_subject_corr = 0.5;
  double log_mean = 0.0;
  double log_sd = 0.5;
  std::uint64_t seed = 2024;
  std::chrono::seconds period_length{14 * 24 * 3600};

  void validate() const;
};

struct ClusteredSynthData {
  std::vector<Event> history;
  std::vector<Event> validation;
};

/// Groups are assigned once per subject by a fair coin and kept in both
/// periods. Events are time-ordered and indexed from 1 within each period.
ClusteredSynthData generate_clustered_synth(const ClusteredSynthConfig& cfg);

struct ValidationResult {
  double detection_rate = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // Wilson 95% interval
  double ci_high = 0.0;
  std::int64_t detections = 0;
  std::int64_t replications = 0;
};

/// A/A protocol: per replication every subject is reassigned to control or
/// treatment by a fair coin drawn from mix_seed(seed, rep), and the method
/// compiled from `cfg` is run on the relabelled stream. Events past
/// cfg.horizon_events are ignored. Needs at least two subjects.
ValidationResult permutation_validation(std::span<const Event> events, std::int64_t replications,
                                        std::uint64_t seed, const TestConfig& cfg, const MethodSpec& method);

struct HistoryValidationOptions {
  VarianceMethod variance = VarianceMethod::cluster_robust;
  /// Progressive cap at this percentile of per-subject history totals.
  std::optional<double> cap_percentile;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::one_sided;
  MethodSpec method{MethodKind::yeast, 0.0};
  std::int64_t replications = 10000;
  std::uint64_t seed = 2024;
};

struct HistoryValidationReport {
  ValidationResult result;
  VarianceEstimate variance;
  TestConfig test;
  std::optional<double> cap;
  std::int64_t history_events = 0;
  std::int64_t validation_events = 0;
};

/// Estimates V on the history period with its recorded groups (after
/// optional capping of both periods), sets the horizon to the history event
/// count, and runs permutation_validation on the validation period.
HistoryValidationReport validate_on_history(std::span<const Event> history, std::span<const Event> validation,
                                            const HistoryValidationOptions& options);

}  // namespace yeast
