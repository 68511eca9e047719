#include "yeast/boundaries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "yeast/errors.hpp"

namespace yeast {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1)");
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

// Per-side level of a rule; one-sided rules reuse the two-sided construction
// at twice the level.
double two_sided_level(double alpha, Sidedness s) { return s == Sidedness::one_sided ? 2.0 * alpha : alpha; }

}  // namespace

std::string_view to_string(Sidedness s) { return s == Sidedness::one_sided ? "one_sided" : "two_sided"; }

Sidedness parse_sidedness(std::string_view text) {
  if (text == "one" || text == "one_sided" || text == "one-sided") {
    return Sidedness::one_sided;
  }
  if (text == "two" || text == "two_sided" || text == "two-sided") {
    return Sidedness::two_sided;
  }
  throw DomainError("unknown sidedness '" + std::string(text) + "'");
}

void TestConfig::validate() const {
  require_alpha(alpha);
  if (horizon_events < 1) {
    throw DomainError("horizon_events must be at least 1");
  }
  require_positive(variance_scaled, "variance_scaled");
}

ConstantBoundary constant_boundary(const TestConfig& cfg) {
  cfg.validate();
  const double level = cfg.sidedness == Sidedness::one_sided ? 1.0 - cfg.alpha / 2.0 : 1.0 - cfg.alpha / 4.0;
  const double scale = std::sqrt(static_cast<double>(cfg.horizon_events) * cfg.variance_scaled);
  return {normal_quantile(level) * scale, cfg.sidedness, cfg.alpha, cfg.horizon_events};
}

std::vector<std::int64_t> StaircasePlan::period_end_indices() const {
  std::vector<std::int64_t> ends;
  ends.reserve(period_sizes.size());
  std::int64_t total = 0;
  for (auto size : period_sizes) {
    total += size;
    ends.push_back(total);
  }
  return ends;
}

void StaircasePlan::validate() const {
  const auto k = period_sizes.size();
  if (k == 0) {
    throw DomainError("staircase plan needs at least one period");
  }
  if (cum_variances.size() != k || incr_variances.size() != k) {
    throw DomainError("staircase plan lists must all have length K");
  }
  for (std::size_t i = 0; i < k; ++i) {
    if (period_sizes[i] < 1) {
      throw DomainError("staircase period sizes must be positive");
    }
    require_positive(cum_variances[i], "cumulative variance");
    require_positive(incr_variances[i], "period variance");
    if (i > 0 && !(cum_variances[i] > cum_variances[i - 1])) {
      throw DomainError("cumulative variances must be strictly increasing");
    }
  }
  require_positive(epsilon, "epsilon");
}

StaircasePlan StaircasePlan::from_period_variances(std::vector<std::int64_t> sizes, std::vector<double> incr,
                                                   double epsilon) {
  StaircasePlan plan;
  plan.period_sizes = std::move(sizes);
  plan.incr_variances = std::move(incr);
  plan.epsilon = epsilon;
  double total = 0.0;
  for (double u : plan.incr_variances) {
    total += u;
    plan.cum_variances.push_back(total);
  }
  plan.validate();
  return plan;
}

StaircasePlan StaircasePlan::equal_periods(std::int64_t horizon, int period_count, double variance_per_event,
                                           double epsilon) {
  if (period_count < 1 || horizon < period_count) {
    throw DomainError("equal staircase needs 1 <= K <= horizon");
  }
  require_positive(variance_per_event, "variance_per_event");
  std::vector<std::int64_t> sizes;
  std::vector<double> incr;
  std::int64_t prev_end = 0;
  for (int k = 1; k <= period_count; ++k) {
    const auto end = static_cast<std::int64_t>(
        std::llround(static_cast<double>(horizon) * k / static_cast<double>(period_count)));
    sizes.push_back(end - prev_end);
    incr.push_back(variance_per_event * static_cast<double>(end - prev_end));
    prev_end = end;
  }
  return from_period_variances(std::move(sizes), std::move(incr), epsilon);
}

std::size_t StaircaseBoundary::period_of(std::int64_t n) const {
  if (n < 1 || n > horizon()) {
    throw UsageError("event index " + std::to_string(n) + " lies outside the staircase periods");
  }
  std::size_t k = 0;
  while (period_end_indices[k] < n) {
    ++k;
  }
  return k;
}

double fdr_bound(const StaircasePlan& plan, std::span<const double> thresholds, const QuadratureSpec& quad) {
  plan.validate();
  quad.validate();
  const auto k_count = plan.period_count();
  if (thresholds.size() != k_count) {
    throw DomainError("fdr_bound: expected one threshold per period");
  }
  for (double b : thresholds) {
    if (!(b > 0.0) || !std::isfinite(b)) {
      throw DomainError("fdr_bound: thresholds must be positive and finite");
    }
  }
  const GaussLegendreRule coarse(quad.node_count);
  const GaussLegendreRule fine(2 * quad.node_count);

  double total = normal_sf(thresholds[0] / std::sqrt(plan.cum_variances[0]));
  for (std::size_t k = 1; k < k_count; ++k) {
    const double z = normal_cdf(thresholds[k - 1] / std::sqrt(plan.cum_variances[k - 1]));
    const double j = truncated_normal_convolution_cdf(thresholds[k - 1], thresholds[k], plan.cum_variances[k - 1],
                                                      plan.incr_variances[k], quad.domain_halfwidth_sigmas, coarse,
                                                      fine);
    total += z * (1.0 - j);
  }
  return 2.0 * total;
}

StaircaseBoundary staircase_boundaries(const StaircasePlan& plan, double alpha, const QuadratureSpec& quad) {
  require_alpha(alpha);
  plan.validate();
  const double z = normal_quantile(1.0 - alpha / 2.0);
  std::vector<double> initial;
  initial.reserve(plan.period_count());
  for (double u : plan.cum_variances) {
    initial.push_back(z * std::sqrt(u));
  }

  // b_k = (1+eps)^m * b_k^0, recomputed from the initial values each pass so
  // the result does not accumulate rounding from repeated multiplication.
  std::vector<double> current = initial;
  for (int m = 0; m <= kMaxInflationSteps; ++m) {
    const double factor = std::pow(1.0 + plan.epsilon, m);
    for (std::size_t k = 0; k < current.size(); ++k) {
      current[k] = initial[k] * factor;
    }
    const double bound = fdr_bound(plan, current, quad);
    if (bound <= alpha * (1.0 + kFdrRelativeTolerance)) {
      return {current, plan.period_end_indices(), alpha, m, bound};
    }
  }
  throw NumericalError("staircase_boundaries: FDR bound still above alpha after " +
                       std::to_string(kMaxInflationSteps) + " inflation steps");
}

double msprt_mixture_variance(double outcome_variance, double phi) {
  require_positive(outcome_variance, "outcome variance");
  require_positive(phi, "mSPRT tuning parameter");
  return outcome_variance / phi;
}

double msprt_log_likelihood_ratio(std::int64_t n, double running_sum, double outcome_variance, double phi) {
  if (n < 0) {
    throw DomainError("msprt: event count must be nonnegative");
  }
  const double tau2 = msprt_mixture_variance(outcome_variance, phi);
  const double sigma2 = outcome_variance;
  const double denom = sigma2 + static_cast<double>(n) * tau2;
  return 0.5 * std::log(sigma2 / denom) + tau2 * running_sum * running_sum / (2.0 * sigma2 * denom);
}

double msprt_p_value(double prev_p, std::int64_t n, double running_sum, double outcome_variance, double phi) {
  if (!(prev_p > 0.0 && prev_p <= 1.0)) {
    throw DomainError("msprt: previous p-value must lie in (0, 1]");
  }
  const double log_lr = msprt_log_likelihood_ratio(n, running_sum, outcome_variance, phi);
  return std::min(prev_p, std::exp(-log_lr));
}

double msprt_threshold(std::int64_t n, double outcome_variance, double phi, double alpha, Sidedness sidedness) {
  require_alpha(alpha);
  if (n < 1) {
    throw DomainError("msprt: event count must be at least 1");
  }
  const double tau2 = msprt_mixture_variance(outcome_variance, phi);
  const double sigma2 = outcome_variance;
  const double denom = sigma2 + static_cast<double>(n) * tau2;
  const double level = two_sided_level(alpha, sidedness);
  // log Lambda_n >= -log(level)  <=>  S^2 >= 2 sigma^2 denom / tau^2 * (-log(level) + 0.5 log(denom / sigma^2))
  const double rhs = -std::log(level) + 0.5 * std::log(denom / sigma2);
  return std::sqrt(2.0 * sigma2 * denom / tau2 * rhs);
}

double gavi_rho(double rho_numerator, double variance_per_event, double alpha) {
  require_alpha(alpha);
  require_positive(rho_numerator, "GAVI rho numerator");
  require_positive(variance_per_event, "variance_per_event");
  const double denom = -2.0 * std::log(alpha) + std::log(std::log(std::numbers::e / (alpha * alpha)));
  return rho_numerator * variance_per_event / denom;
}

double gavi_boundary(std::int64_t n, double variance_per_event, double rho_numerator, double alpha,
                     Sidedness sidedness) {
  require_alpha(alpha);
  if (n < 1) {
    throw DomainError("gavi: event count must be at least 1");
  }
  const double rho = gavi_rho(rho_numerator, variance_per_event, alpha);
  const double level = two_sided_level(alpha, sidedness);
  const double v = static_cast<double>(n) * variance_per_event + rho;
  return std::sqrt(v * std::log(v / (rho * level * level)));
}

double bonferroni_threshold(double alpha, std::int64_t check_count, std::int64_t n, double variance_scaled,
                            Sidedness sidedness) {
  require_alpha(alpha);
  if (check_count < 1) {
    throw DomainError("bonferroni: check_count must be at least 1");
  }
  if (n < 1) {
    throw DomainError("bonferroni: event count must be at least 1");
  }
  require_positive(variance_scaled, "variance_scaled");
  const double per_check = alpha / static_cast<double>(check_count);
  const double level = sidedness == Sidedness::one_sided ? 1.0 - per_check : 1.0 - per_check / 2.0;
  return normal_quantile(level) * std::sqrt(static_cast<double>(n) * variance_scaled);
}

}  // namespace yeast
