#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "yeast/statdist.hpp"

namespace yeast {

enum class Sidedness { one_sided, two_sided };

std::string_view to_string(Sidedness s);
/// Accepts "one", "one_sided", "one-sided", "two", "two_sided", "two-sided".
Sidedness parse_sidedness(std::string_view text);

/// Inputs shared by every monitoring rule: significance level, sidedness,
/// the planned number of events N and the scaled variance V = var(S_N) / N.
struct TestConfig {
  double alpha = 0.05;
  Sidedness sidedness = Sidedness::one_sided;
  std::int64_t horizon_events = 1;
  double variance_scaled = 1.0;

  void validate() const;
};

/// YEAST: a single threshold on S_n (one-sided) or |S_n| (two-sided).
struct ConstantBoundary {
  double threshold = 0.0;
  Sidedness sidedness = Sidedness::one_sided;
  double alpha = 0.05;
  std::int64_t horizon_events = 1;
};

/// Inputs of the staircase search. Period k spans period_sizes[k] events;
/// cum_variances[k] estimates var(S) at the end of period k and
/// incr_variances[k] the variance of the sum over period k alone.
struct StaircasePlan {
  std::vector<std::int64_t> period_sizes;
  std::vector<double> cum_variances;
  std::vector<double> incr_variances;
  double epsilon = 0.01;

  std::size_t period_count() const noexcept { return period_sizes.size(); }
  std::vector<std::int64_t> period_end_indices() const;
  void validate() const;

  /// Builds a plan under independent increments: cumulative variances are
  /// running sums of the per-period ones.
  static StaircasePlan from_period_variances(std::vector<std::int64_t> sizes, std::vector<double> incr_variances,
                                             double epsilon = 0.01);

  /// K periods of (nearly) equal length covering `horizon` events, each
  /// event contributing `variance_per_event`. Period k ends at
  /// round(horizon * k / K).
  static StaircasePlan equal_periods(std::int64_t horizon, int period_count, double variance_per_event,
                                     double epsilon = 0.01);
};

/// pYEAST thresholds, one per period, increasing in k.
struct StaircaseBoundary {
  std::vector<double> thresholds;
  std::vector<std::int64_t> period_end_indices;
  double alpha = 0.05;
  int inflation_steps = 0;
  double achieved_fdr_bound = 0.0;

  std::int64_t horizon() const noexcept { return period_end_indices.empty() ? 0 : period_end_indices.back(); }
  /// 0-based period containing event n (1-based); throws UsageError past the
  /// last period.
  std::size_t period_of(std::int64_t n) const;
  double threshold_at(std::int64_t n) const { return thresholds[period_of(n)]; }
};

inline constexpr int kMaxInflationSteps = 10000;
/// The bound is accepted when it is within alpha * (1 + this) of alpha, so
/// that a single period reproduces the constant boundary despite rounding.
inline constexpr double kFdrRelativeTolerance = 1e-10;

ConstantBoundary constant_boundary(const TestConfig& cfg);

/// Approximate false detection bound of a staircase:
///   2 * (1 - Phi(b_1/sqrt(U_1)) + sum_{k>=2} Z_k (1 - J_k)),
/// Z_k = Phi(b_{k-1}/sqrt(U_{k-1})), J_k the truncated-normal convolution CDF.
double fdr_bound(const StaircasePlan& plan, std::span<const double> thresholds, const QuadratureSpec& quad = {});

/// Inflates z_{1-alpha/2} sqrt(U_k) jointly by (1+epsilon) until the bound
/// drops to alpha (up to kFdrRelativeTolerance). Throws NumericalError after kMaxInflationSteps passes.
StaircaseBoundary staircase_boundaries(const StaircasePlan& plan, double alpha, const QuadratureSpec& quad = {});

// ---------------------------------------------------------------------------
// Baselines. `outcome_variance` / `variance_per_event` is the per-event
// variance of the increments; intrinsic time after n events is n times that.
// One-sided rules at level alpha are the two-sided constructions at 2*alpha
// restricted to the alerting direction.

/// Mixture variance of the mSPRT normal mixing distribution for tuning
/// value `phi`: tau^2 = outcome_variance / phi.
double msprt_mixture_variance(double outcome_variance, double phi);

/// log Lambda_n of the normal-mixture likelihood ratio after n events with
/// running sum S_n.
double msprt_log_likelihood_ratio(std::int64_t n, double running_sum, double outcome_variance, double phi);

/// Always-valid p-value update p_n = min(p_{n-1}, 1/Lambda_n).
double msprt_p_value(double prev_p, std::int64_t n, double running_sum, double outcome_variance, double phi);

/// Critical |S_n| at which Lambda_n reaches 1/alpha (two-sided) or
/// 1/(2 alpha) (one-sided).
double msprt_threshold(std::int64_t n, double outcome_variance, double phi, double alpha, Sidedness sidedness);

/// rho from its sample-size numerator:
///   rho = numerator * variance_per_event / (-2 log alpha + log(log(e / alpha^2))).
double gavi_rho(double rho_numerator, double variance_per_event, double alpha);

/// Normal-mixture boundary sqrt((V_n + rho) log((V_n + rho) / (rho a^2))) with
/// V_n = n * variance_per_event and a = alpha (two-sided) or 2 alpha
/// (one-sided).
double gavi_boundary(std::int64_t n, double variance_per_event, double rho_numerator, double alpha,
                     Sidedness sidedness = Sidedness::two_sided);

/// Fixed-sample z threshold at level alpha / check_count on S_n:
/// z * sqrt(n * variance_scaled).
double bonferroni_threshold(double alpha, std::int64_t check_count, std::int64_t n, double variance_scaled,
                            Sidedness sidedness = Sidedness::one_sided);

}  // namespace yeast
