#pragma once

#include <cstdint>
#include <span>
#include <string_view>

#include "yeast/events.hpp"

namespace yeast {

enum class VarianceMethod { iid, cluster_robust };

std::string_view to_string(VarianceMethod m);
/// "iid" / "non-robust" or "robust" / "cluster" / "cluster_robust".
VarianceMethod parse_variance_method(std::string_view text);

/// Estimate of V = var(S_N) / N, so that N * value estimates var(S_N).
struct VarianceEstimate {
  double value = 0.0;
  VarianceMethod method = VarianceMethod::iid;
  std::int64_t n_events = 0;
  std::int64_t n_clusters = 0;  // cluster_robust only
};

/// Sample variance with the N-1 denominator. Needs at least two values and
/// raises DataError when they are all equal.
VarianceEstimate estimate_variance_iid(std::span<const double> increments);
VarianceEstimate estimate_variance_iid(std::span<const Event> events);

/// (1/N) * sum over subjects of (sum of demeaned increments)^2, clustering
/// by subject_id. Needs at least two subjects.
VarianceEstimate estimate_variance_cluster_robust(std::span<const Event> events);

VarianceEstimate estimate_variance(std::span<const Event> events, VarianceMethod method);

}  // namespace yeast
