#include "yeast/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "yeast/errors.hpp"
#include "yeast/rng.hpp"

namespace yeast {

namespace {

// Sorted subject ids per group; sorting makes sampling independent of the
// order in which subjects first appear.
std::pair<std::vector<std::string>, std::vector<std::string>> subjects_by_group(std::span<const Event> events) {
  std::map<std::string, Group> seen;
  for (const auto& e : events) {
    auto [it, inserted] = seen.emplace(e.subject_id, e.group);
    if (!inserted && it->second != e.group) {
      throw DataError("subject '" + e.subject_id + "' appears in both groups");
    }
  }
  std::vector<std::string> control;
  std::vector<std::string> treatment;
  for (const auto& [id, g] : seen) {
    (g == Group::control ? control : treatment).push_back(id);
  }
  return {std::move(control), std::move(treatment)};
}

}  // namespace

GroupSubjectCounts count_subjects(std::span<const Event> events) {
  const auto [control, treatment] = subjects_by_group(events);
  return {static_cast<std::int64_t>(control.size()), static_cast<std::int64_t>(treatment.size())};
}

std::vector<Event> downsample_subjects(std::span<const Event> events, double target_ratio, std::uint64_t seed) {
  if (!(target_ratio > 0.0 && target_ratio <= 1.0)) {
    throw DomainError("downsampling ratio must lie in (0, 1]");
  }
  auto [control, treatment] = subjects_by_group(events);
  if (control.empty() || treatment.empty()) {
    throw DataError("downsampling needs subjects in both groups");
  }
  auto& larger = control.size() > treatment.size() ? control : treatment;
  const auto keep = static_cast<std::size_t>(std::llround(target_ratio * static_cast<double>(larger.size())));

  // Partial Fisher-Yates: the first `keep` slots become a uniform sample.
  Xoshiro256 rng(seed);
  for (std::size_t i = 0; i < keep && i + 1 < larger.size(); ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(larger.size() - i));
    std::swap(larger[i], larger[j]);
  }
  std::unordered_set<std::string> dropped(larger.begin() + static_cast<std::ptrdiff_t>(keep), larger.end());

  std::vector<Event> out;
  out.reserve(events.size());
  for (const auto& e : events) {
    if (!dropped.contains(e.subject_id)) {
      out.push_back(e);
    }
  }
  return out;
}

std::vector<Event> balance_groups(std::span<const Event> events, std::uint64_t seed) {
  const auto counts = count_subjects(events);
  if (counts.control == 0 || counts.treatment == 0) {
    throw DataError("balancing needs subjects in both groups");
  }
  const double ratio = static_cast<double>(std::min(counts.control, counts.treatment)) /
                       static_cast<double>(std::max(counts.control, counts.treatment));
  return downsample_subjects(events, ratio, seed);
}

std::vector<Event> progressive_cap(std::span<const Event> events, double cap) {
  if (!(cap > 0.0)) {
    throw DomainError("cap must be positive");
  }
  std::vector<Event> out;
  out.reserve(events.size());
  if (std::isinf(cap)) {
    out.assign(events.begin(), events.end());
    return out;
  }
  std::unordered_map<std::string_view, double> totals;
  std::unordered_set<std::string_view> stopped;
  for (const auto& e : events) {
    if (stopped.contains(e.subject_id)) {
      continue;
    }
    double& total = totals[e.subject_id];
    total += e.outcome;
    if (total > cap) {
      stopped.insert(e.subject_id);
      continue;
    }
    out.push_back(e);
  }
  return out;
}

double percentile_cap_from_history(std::span<const Event> events, double percentile) {
  if (!(percentile > 0.0 && percentile < 1.0)) {
    throw DomainError("percentile must lie in (0, 1)");
  }
  if (events.empty()) {
    throw DataError("percentile cap needs at least one event");
  }
  std::unordered_map<std::string_view, double> totals;
  for (const auto& e : events) {
    totals[e.subject_id] += e.outcome;
  }
  std::vector<double> sorted;
  sorted.reserve(totals.size());
  for (const auto& [id, total] : totals) {
    sorted.push_back(total);
  }
  std::sort(sorted.begin(), sorted.end());
  const auto m = sorted.size();
  // The small slack keeps exact products such as 0.999 * 1000 on their integer.
  auto rank = static_cast<std::size_t>(std::floor(percentile * static_cast<double>(m) + 1e-9)) + 1;
  rank = std::min(rank, m);
  const double cap = sorted[rank - 1];
  if (!(cap > 0.0)) {
    throw DataError("percentile of subject totals is not positive");
  }
  return cap;
}

}  // namespace yeast
