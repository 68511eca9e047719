#include "yeast/validation.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "yeast/errors.hpp"
#include "yeast/rng.hpp"
#include "yeast/simharness.hpp"
#include "yeast/statdist.hpp"
#include "yeast/transforms.hpp"

namespace yeast {

namespace {

std::int64_t poisson(double mean, Xoshiro256& rng) {
  if (mean <= 0.0) {
    return 0;
  }
  const double limit = std::exp(-mean);
  std::int64_t k = 0;
  double prod = rng.uniform_open();
  while (prod > limit) {
    ++k;
    prod *= rng.uniform_open();
  }
  return k;
}

std::string subject_name(std::int64_t i) {
  std::string digits = std::to_string(i);
  return "s" + std::string(digits.size() < 6 ? 6 - digits.size() : 0, '0') + digits;
}

struct Draft {
  Timestamp timestamp;
  std::int64_t subject;
  std::int64_t order;
  double outcome;
};

std::vector<Event> finish_period(std::vector<Draft>& drafts, const std::vector<Group>& groups) {
  std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.order < b.order;
  });
  std::vector<Event> events;
  events.reserve(drafts.size());
  std::int64_t index = 0;
  for (const auto& d : drafts) {
    events.push_back({++index, d.timestamp, subject_name(d.subject), groups[static_cast<std::size_t>(d.subject)],
                      d.outcome});
  }
  return events;
}

}  // namespace

void ClusteredSynthConfig::validate() const {
  if (n_subjects < 2) {
    throw DomainError("synthetic data needs at least two subjects");
  }
  if (min_events < 1) {
    throw DomainError("min_events must be positive");
  }
  if (!(extra_events_mean >= 0.0) || !std::isfinite(extra_events_mean)) {
    throw DomainError("extra_events_mean must be finite and nonnegative");
  }
  if (!(within_subject_corr >= 0.0 && within_subject_corr < 1.0)) {
    throw DomainError("within_subject_corr must lie in [0, 1)");
  }
  if (!std::isfinite(log_mean) || !(log_sd > 0.0) || !std::isfinite(log_sd)) {
    throw DomainError("log_sd must be positive and log_mean finite");
  }
  if (period_length.count() <= 0) {
    throw DomainError("period length must be positive");
  }
}

ClusteredSynthData generate_clustered_synth(const ClusteredSynthConfig& cfg) {
  cfg.validate();
  Xoshiro256 rng(cfg.seed);
  const double shared = std::sqrt(cfg.within_subject_corr);
  const double own = std::sqrt(1.0 - cfg.within_subject_corr);
  const auto period_us = std::chrono::duration_cast<std::chrono::microseconds>(cfg.period_length).count();
  const Timestamp history_start = std::chrono::sys_days{std::chrono::year{2023} / 1 / 1};
  const Timestamp validation_start = history_start + std::chrono::microseconds(period_us);

  std::vector<Group> groups(static_cast<std::size_t>(cfg.n_subjects));
  std::vector<double> latent(groups.size());
  for (std::size_t s = 0; s < groups.size(); ++s) {
    groups[s] = rng.below(2) == 0 ? Group::control : Group::treatment;
    latent[s] = standard_normal(rng);
  }

  std::vector<Draft> history;
  std::vector<Draft> validation;
  std::int64_t order = 0;
  for (auto* period : {&history, &validation}) {
    const Timestamp start = period == &history ? history_start : validation_start;
    for (std::int64_t s = 0; s < cfg.n_subjects; ++s) {
      const std::int64_t m = cfg.min_events + poisson(cfg.extra_events_mean, rng);
      for (std::int64_t j = 0; j < m; ++j) {
        const double z = shared * latent[static_cast<std::size_t>(s)] + own * standard_normal(rng);
        const auto offset = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(period_us)));
        period->push_back({start + std::chrono::microseconds(offset), s, order++,
                           std::exp(cfg.log_mean + cfg.log_sd * z)});
      }
    }
  }
  return {finish_period(history, groups), finish_period(validation, groups)};
}

ValidationResult permutation_validation(std::span<const Event> events, std::int64_t replications,
                                        std::uint64_t seed, const TestConfig& cfg, const MethodSpec& method) {
  if (replications < 1) {
    throw DomainError("replications must be at least 1");
  }
  const auto schedule = schedule_for(method, cfg);
  const auto used = std::min<std::size_t>(events.size(), static_cast<std::size_t>(schedule.horizon()));

  // Subject slots in order of first appearance, so coin flips do not depend
  // on hashing.
  std::unordered_map<std::string_view, std::size_t> slot_of;
  std::vector<std::size_t> slots(used);
  std::vector<double> outcomes(used);
  for (std::size_t i = 0; i < used; ++i) {
    const auto& e = events[i];
    if (!std::isfinite(e.outcome)) {
      throw DataError("non-finite outcome at event " + std::to_string(e.index));
    }
    slots[i] = slot_of.try_emplace(e.subject_id, slot_of.size()).first->second;
    outcomes[i] = e.outcome;
  }
  if (slot_of.size() < 2) {
    throw DataError("permutation validation needs at least two subjects");
  }

  std::vector<double> sign(slot_of.size());
  std::int64_t detections = 0;
  for (std::int64_t rep = 0; rep < replications; ++rep) {
    Xoshiro256 rng(mix_seed(seed, static_cast<std::uint64_t>(rep)));
    for (auto& s : sign) {
      s = (rng() >> 63) == 0 ? 1.0 : -1.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < used; ++i) {
      sum += sign[slots[i]] * outcomes[i];
      if (schedule.crosses(static_cast<std::int64_t>(i + 1), sum)) {
        ++detections;
        break;
      }
    }
  }

  ValidationResult r;
  r.detections = detections;
  r.replications = replications;
  const auto n = static_cast<double>(replications);
  const double p = static_cast<double>(detections) / n;
  r.detection_rate = p;
  r.std_error = std::sqrt(p * (1.0 - p) / n);
  const double z = normal_quantile(0.975);
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  r.ci_low = std::max(0.0, centre - half);
  r.ci_high = std::min(1.0, centre + half);
  return r;
}

HistoryValidationReport validate_on_history(std::span<const Event> history, std::span<const Event> validation,
                                            const HistoryValidationOptions& options) {
  HistoryValidationReport report;
  std::vector<Event> hist(history.begin(), history.end());
  std::vector<Event> valid(validation.begin(), validation.end());
  if (options.cap_percentile) {
    const double cap = percentile_cap_from_history(hist, *options.cap_percentile);
    report.cap = cap;
    hist = progressive_cap(hist, cap);
    valid = progressive_cap(valid, cap);
  }
  report.history_events = static_cast<std::int64_t>(hist.size());
  report.validation_events = static_cast<std::int64_t>(valid.size());
  report.variance = estimate_variance(hist, options.variance);
  report.test = {options.alpha, options.sidedness, report.history_events, report.variance.value};
  report.test.validate();
  report.result = permutation_validation(valid, options.replications, options.seed, report.test, options.method);
  return report;
}

}  // namespace yeast
