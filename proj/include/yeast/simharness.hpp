#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "yeast/boundaries.hpp"
#include "yeast/rng.hpp"
#include "yeast/rules.hpp"

namespace yeast {

enum class ScenarioKind { normal, student_t, gamma };

std::string_view to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(std::string_view text);

/// Outcome distribution of one simulation scenario. The effect xi scales the
/// treatment's location parameter by (1 + xi): the normal mean, the shift of
/// the t distribution, the gamma scale.
struct ScenarioDistribution {
  ScenarioKind kind = ScenarioKind::normal;
  double first = 1.0;   // normal: mean; student_t: degrees of freedom; gamma: shape
  double second = 1.0;  // normal: sd; student_t: shift; gamma: scale

  static ScenarioDistribution normal(double mean = 1.0, double sd = 1.0);
  /// t with integer df, shifted by `shift` (default sqrt(3)).
  static ScenarioDistribution student_t(double df = 3.0, double shift = 1.7320508075688772);
  static ScenarioDistribution gamma(double shape = 1.0, double scale = 2.0);

  void validate() const;
  /// var(Y_control - Y_treatment) when the effect is zero.
  double null_increment_variance() const;
};

struct ScenarioDraw {
  double control = 0.0;
  double treatment = 0.0;
};

/// One control and one treatment draw. Normal draws use the inverse CDF,
/// t(df) the ratio of a normal to sqrt(chi-square/df) built from df normals,
/// gamma(shape 1) the exponential inverse CDF and other shapes
/// Marsaglia-Tsang. Both draws share the same uniforms, so a replication seen
/// at different effects differs only through the effect.
ScenarioDraw sample_scenario(const ScenarioDistribution& dist, double effect, Xoshiro256& rng);

/// Standard normal draw by inversion of one uniform.
double standard_normal(Xoshiro256& rng);

/// Checkpoint layout: continuous checks every event; discrete runs one
/// evaluation per entry of `check_counts`, checking at round(N j / c).
struct SimMode {
  bool discrete = false;
  std::vector<std::int64_t> check_counts;
};

struct SimConfig {
  ScenarioDistribution scenario = ScenarioDistribution::normal();
  std::int64_t n_per_group = 500;
  std::vector<double> effect_sizes{0.0, 0.1, 0.2, 0.3, 0.4};
  std::int64_t replications = 100000;
  std::uint64_t base_seed = 8163;
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::one_sided;
  std::vector<MethodSpec> methods = benchmark_methods();
  SimMode mode;
  /// Worker threads; 0 picks std::thread::hardware_concurrency().
  int threads = 0;

  void validate() const;
  /// The TestConfig every method is compiled against: N = n_per_group and
  /// the known null per-event variance.
  TestConfig test_config() const;
};

struct SimResult {
  std::string method;
  double effect = 0.0;
  std::string mode;  // "continuous" or "discrete"
  std::int64_t check_count = 0;
  double detection_rate = 0.0;
  double std_error = 0.0;
  double mean_savings = 0.0;           // averaged over all replications
  double mean_savings_detected = 0.0;  // averaged over detecting replications
  std::int64_t replications = 0;
  std::uint64_t seed = 0;
};

struct ReplicationOutcome {
  bool detected = false;
  std::optional<std::int64_t> detection_index;
};

/// Sample savings 1 - detection_index / n_total; zero without detection.
double savings(std::optional<std::int64_t> detection_index, std::int64_t n_total);

/// Equally spaced checkpoints round(n * j / check_count), j = 1..check_count.
/// check_count > n is a UsageError.
std::vector<std::int64_t> checkpoint_indices(std::int64_t n, std::int64_t check_count);

/// Running sums of one replication. The tracked statistic is the
/// treatment-minus-control total, so a positive effect drifts upward and the
/// one-sided rules alert on it. Determined by (base_seed, rep_index).
std::vector<double> simulate_path(const SimConfig& cfg, double effect, std::int64_t rep_index);

/// First index (1-based) where `path` crosses `schedule`, looking only at
/// `checkpoints` when given.
std::optional<std::int64_t> first_crossing(const ThresholdSchedule& schedule, const std::vector<double>& path,
                                           const std::vector<std::int64_t>* checkpoints = nullptr);

/// Runs one method on one replication. `check_count` 0 means continuous.
ReplicationOutcome simulate_replication(const SimConfig& cfg, double effect, std::int64_t rep_index,
                                        const MethodSpec& method, std::int64_t check_count = 0);

/// Methods x effects (x check counts in discrete mode). All methods see the
/// same replications.
std::vector<SimResult> run_experiment_grid(const SimConfig& cfg);

/// As run_experiment_grid, requiring cfg.mode.discrete.
std::vector<SimResult> run_discrete_mode(const SimConfig& cfg);

/// Header: method,effect,mode,check_count,detection_rate,std_error,
/// mean_savings,replications,seed,mean_savings_detected
void write_results_csv(std::ostream& out, const std::vector<SimResult>& results);

}  // namespace yeast
