#include "yeast/rules.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <type_traits>

#include "yeast/errors.hpp"

namespace yeast {

namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string format_parameter(double value) {
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  std::string s = std::to_string(value);
  s.erase(s.find_last_not_of('0') + 1);
  return s;
}

// Parses the numeric suffix after `prefix`; nullopt when the prefix does not
// match or the rest is not a positive number.
std::optional<double> suffix_number(const std::string& text, std::string_view prefix) {
  if (text.rfind(prefix, 0) != 0 || text.size() == prefix.size()) {
    return std::nullopt;
  }
  const char* first = text.data() + prefix.size();
  const char* last = text.data() + text.size();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !(value > 0.0)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

std::string MethodSpec::name() const {
  switch (kind) {
    case MethodKind::yeast:
      return "YEAST";
    case MethodKind::pyeast:
      return "pYEAST" + format_parameter(parameter);
    case MethodKind::msprt:
      return "mSPRTphi" + format_parameter(parameter);
    case MethodKind::gavi:
      return "GAVI" + format_parameter(parameter);
    case MethodKind::bonferroni:
      return "Bonferroni";
  }
  return "unknown";
}

std::string method_name_help() {
  return "YEAST, pYEAST<K>, mSPRTphi<phi> (or mSPRT<phi>), GAVI<rho numerator>, Bonferroni";
}

MethodSpec MethodSpec::parse(std::string_view text) {
  const std::string t = lower(text);
  if (t == "yeast") {
    return {MethodKind::yeast, 0.0};
  }
  if (t == "bonferroni") {
    return {MethodKind::bonferroni, 0.0};
  }
  if (auto k = suffix_number(t, "pyeast"); k && *k == std::floor(*k)) {
    return {MethodKind::pyeast, *k};
  }
  if (auto phi = suffix_number(t, "msprtphi")) {
    return {MethodKind::msprt, *phi};
  }
  if (auto phi = suffix_number(t, "msprt")) {
    return {MethodKind::msprt, *phi};
  }
  if (auto rho = suffix_number(t, "gavi")) {
    return {MethodKind::gavi, *rho};
  }
  throw UsageError("unknown method '" + std::string(text) + "'; valid methods: " + method_name_help());
}

std::vector<MethodSpec> benchmark_methods() {
  return {
      {MethodKind::yeast, 0.0},   {MethodKind::pyeast, 7.0}, {MethodKind::pyeast, 14.0},
      {MethodKind::msprt, 100.0}, {MethodKind::msprt, 11.0}, {MethodKind::msprt, 25.0},
      {MethodKind::gavi, 250.0},  {MethodKind::gavi, 500.0}, {MethodKind::gavi, 750.0},
      {MethodKind::bonferroni, 0.0},
  };
}

double ThresholdSchedule::threshold_at(std::int64_t n) const {
  if (n < 1 || n > horizon()) {
    throw UsageError("event index " + std::to_string(n) + " lies outside the schedule");
  }
  return thresholds[static_cast<std::size_t>(n - 1)];
}

ThresholdSchedule to_schedule(const ConstantBoundary& b) {
  return {b.sidedness, std::vector<double>(static_cast<std::size_t>(b.horizon_events), b.threshold)};
}

ThresholdSchedule to_schedule(const StaircaseBoundary& b) {
  ThresholdSchedule s{Sidedness::one_sided, {}};
  s.thresholds.reserve(static_cast<std::size_t>(b.horizon()));
  std::int64_t start = 0;
  for (std::size_t k = 0; k < b.thresholds.size(); ++k) {
    for (std::int64_t n = start; n < b.period_end_indices[k]; ++n) {
      s.thresholds.push_back(b.thresholds[k]);
    }
    start = b.period_end_indices[k];
  }
  return s;
}

ThresholdSchedule schedule_for(const MethodSpec& method, const TestConfig& cfg, std::int64_t check_count,
                               const QuadratureSpec& quad) {
  cfg.validate();
  const std::int64_t horizon = cfg.horizon_events;
  const double v = cfg.variance_scaled;
  ThresholdSchedule s{cfg.sidedness, std::vector<double>(static_cast<std::size_t>(horizon))};
  switch (method.kind) {
    case MethodKind::yeast:
      return to_schedule(constant_boundary(cfg));
    case MethodKind::pyeast: {
      if (cfg.sidedness != Sidedness::one_sided) {
        throw UsageError("staircase boundaries are one-sided only");
      }
      const auto k = static_cast<int>(method.parameter);
      const auto plan = StaircasePlan::equal_periods(horizon, k, v);
      return to_schedule(staircase_boundaries(plan, cfg.alpha, quad));
    }
    case MethodKind::msprt:
      for (std::int64_t n = 1; n <= horizon; ++n) {
        s.thresholds[n - 1] = msprt_threshold(n, v, method.parameter, cfg.alpha, cfg.sidedness);
      }
      return s;
    case MethodKind::gavi:
      for (std::int64_t n = 1; n <= horizon; ++n) {
        s.thresholds[n - 1] = gavi_boundary(n, v, method.parameter, cfg.alpha, cfg.sidedness);
      }
      return s;
    case MethodKind::bonferroni: {
      const std::int64_t checks = check_count > 0 ? check_count : horizon;
      for (std::int64_t n = 1; n <= horizon; ++n) {
        s.thresholds[n - 1] = bonferroni_threshold(cfg.alpha, checks, n, v, cfg.sidedness);
      }
      return s;
    }
  }
  throw UsageError("unsupported method");
}

std::int64_t horizon_of(const Boundary& b) {
  return std::visit(
      [](const auto& x) -> std::int64_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ConstantBoundary>) {
          return x.horizon_events;
        } else {
          return x.horizon();
        }
      },
      b);
}

Sidedness sidedness_of(const Boundary& b) {
  return std::visit(
      [](const auto& x) -> Sidedness {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, StaircaseBoundary>) {
          return Sidedness::one_sided;
        } else {
          return x.sidedness;
        }
      },
      b);
}

double threshold_at(const Boundary& b, std::int64_t n) {
  return std::visit(
      [n](const auto& x) -> double {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ConstantBoundary>) {
          if (n < 1 || n > x.horizon_events) {
            throw UsageError("event index " + std::to_string(n) + " lies past the horizon");
          }
          return x.threshold;
        } else {
          return x.threshold_at(n);
        }
      },
      b);
}

}  // namespace yeast
