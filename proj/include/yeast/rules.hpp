#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "yeast/boundaries.hpp"

namespace yeast {

enum class MethodKind { yeast, pyeast, msprt, gavi, bonferroni };

/// A monitoring method with its single tuning value: the number of periods K
/// for pYEAST, phi for mSPRT, the rho numerator for GAVI. YEAST and
/// Bonferroni take none.
struct MethodSpec {
  MethodKind kind = MethodKind::yeast;
  double parameter = 0.0;

  /// Display name, e.g. "YEAST", "pYEAST7", "mSPRTphi100", "GAVI250".
  std::string name() const;

  /// Case-insensitive parse of the display name; also accepts "msprt100".
  /// Throws UsageError naming the valid methods.
  static MethodSpec parse(std::string_view text);

  bool operator==(const MethodSpec&) const = default;
};

/// The ten continuous-monitoring methods of the benchmark grid.
std::vector<MethodSpec> benchmark_methods();

/// Human-readable list of accepted method names.
std::string method_name_help();

/// Per-event thresholds on S_n (one-sided) or |S_n| (two-sided);
/// thresholds[n-1] applies to the n-th event. A crossing is strict.
struct ThresholdSchedule {
  Sidedness sidedness = Sidedness::one_sided;
  std::vector<double> thresholds;

  std::int64_t horizon() const noexcept { return static_cast<std::int64_t>(thresholds.size()); }
  double threshold_at(std::int64_t n) const;
  bool crosses(std::int64_t n, double running_sum) const {
    const double stat = sidedness == Sidedness::one_sided ? running_sum : (running_sum < 0 ? -running_sum : running_sum);
    return stat > thresholds[static_cast<std::size_t>(n - 1)];
  }
};

ThresholdSchedule to_schedule(const ConstantBoundary& b);
ThresholdSchedule to_schedule(const StaircaseBoundary& b);

/// Compiles a method into a per-event schedule for the inputs in `cfg`.
/// `check_count` is the Bonferroni correction factor (defaults to N when
/// zero). pYEAST uses K equal periods with cfg.variance_scaled per event and
/// rejects two-sided configs.
ThresholdSchedule schedule_for(const MethodSpec& method, const TestConfig& cfg, std::int64_t check_count = 0,
                               const QuadratureSpec& quad = {});

/// Anything a monitor can compare the running sum against.
using Boundary = std::variant<ConstantBoundary, StaircaseBoundary, ThresholdSchedule>;

std::int64_t horizon_of(const Boundary& b);
Sidedness sidedness_of(const Boundary& b);
double threshold_at(const Boundary& b, std::int64_t n);

}  // namespace yeast
