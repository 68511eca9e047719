#include "yeast/variance.hpp"

#include <string>
#include <unordered_map>
#include <vector>

#include "yeast/errors.hpp"

namespace yeast {

std::string_view to_string(VarianceMethod m) { return m == VarianceMethod::iid ? "iid" : "cluster_robust"; }

VarianceMethod parse_variance_method(std::string_view text) {
  if (text == "iid" || text == "non-robust" || text == "nonrobust") {
    return VarianceMethod::iid;
  }
  if (text == "robust" || text == "cluster" || text == "cluster_robust" || text == "cluster-robust") {
    return VarianceMethod::cluster_robust;
  }
  throw DomainError("unknown variance method '" + std::string(text) + "'");
}

VarianceEstimate estimate_variance_iid(std::span<const double> increments) {
  const auto n = increments.size();
  if (n < 2) {
    throw DataError("iid variance needs at least two increments");
  }
  double mean = 0.0;
  for (double x : increments) {
    mean += x;
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double x : increments) {
    ss += (x - mean) * (x - mean);
  }
  const double value = ss / static_cast<double>(n - 1);
  if (!(value > 0.0)) {
    throw DataError("degenerate variance: all increments are equal");
  }
  return {value, VarianceMethod::iid, static_cast<std::int64_t>(n), 0};
}

VarianceEstimate estimate_variance_iid(std::span<const Event> events) {
  std::vector<double> x;
  x.reserve(events.size());
  for (const auto& e : events) {
    x.push_back(increment_from_event(e).value);
  }
  return estimate_variance_iid(x);
}

VarianceEstimate estimate_variance_cluster_robust(std::span<const Event> events) {
  const auto n = events.size();
  if (n == 0) {
    throw DataError("cluster-robust variance needs events");
  }
  double mean = 0.0;
  for (const auto& e : events) {
    mean += increment_from_event(e).value;
  }
  mean /= static_cast<double>(n);

  // Clusters are kept in order of first appearance so the result does not
  // depend on hashing.
  std::unordered_map<std::string_view, std::size_t> slot;
  std::vector<double> cluster_sums;
  for (const auto& e : events) {
    auto [it, inserted] = slot.try_emplace(e.subject_id, cluster_sums.size());
    if (inserted) {
      cluster_sums.push_back(0.0);
    }
    cluster_sums[it->second] += increment_from_event(e).value - mean;
  }
  if (cluster_sums.size() < 2) {
    throw DataError("cluster-robust variance needs at least two subjects");
  }
  double total = 0.0;
  for (double sum : cluster_sums) {
    total += sum * sum;
  }
  const double value = total / static_cast<double>(n);
  if (!(value > 0.0)) {
    throw DataError("degenerate variance: all cluster sums vanish");
  }
  return {value, VarianceMethod::cluster_robust, static_cast<std::int64_t>(n),
          static_cast<std::int64_t>(cluster_sums.size())};
}

VarianceEstimate estimate_variance(std::span<const Event> events, VarianceMethod method) {
  return method == VarianceMethod::iid ? estimate_variance_iid(events) : estimate_variance_cluster_robust(events);
}

}  // namespace yeast
