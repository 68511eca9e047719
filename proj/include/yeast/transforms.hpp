#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "yeast/events.hpp"

namespace yeast {

struct GroupSubjectCounts {
  std::int64_t control = 0;
  std::int64_t treatment = 0;
};

GroupSubjectCounts count_subjects(std::span<const Event> events);

/// Keeps round(target_ratio * m) of the m subjects in the group with more
/// subjects (treatment on ties), chosen uniformly at random from `seed`, and
/// drops every event of the others. Order of the surviving events is kept.
/// Raises DataError when either group has no subjects or a subject appears
/// in both groups.
std::vector<Event> downsample_subjects(std::span<const Event> events, double target_ratio, std::uint64_t seed);

/// Downsamples the larger group to the subject count of the smaller one.
std::vector<Event> balance_groups(std::span<const Event> events, std::uint64_t seed);

/// Per subject, keeps events while the cumulative outcome stays within
/// `cap`; the event that pushes it above the cap and all later events of
/// that subject are dropped. cap = +infinity is the identity.
std::vector<Event> progressive_cap(std::span<const Event> events, double cap);

/// Nearest-rank percentile of per-subject total outcome: the value at rank
/// floor(percentile * m) + 1 (clamped to m) among the m ascending totals.
double percentile_cap_from_history(std::span<const Event> events, double percentile);

}  // namespace yeast
