#pragma once

#include <cstdint>

namespace yeast {

/// Exact probabilities over all 2^n equiprobable Rademacher walks
/// S_m = x_1 + ... + x_m, x_j = +-1.
struct LevyResult {
  double lhs = 0.0;  // Pr{max_{1<=m<=n} S_m >= b}
  double rhs = 0.0;  // 2 Pr{S_n >= b}
  std::uint64_t max_count = 0;
  std::uint64_t end_count = 0;
  std::uint64_t paths = 0;
  bool holds = false;  // lhs <= rhs, decided on the integer counts
};

inline constexpr int kMaxLevyEnumerationSteps = 20;

/// Enumerates every path of length n (1 <= n <= 20). With `two_sided` the
/// walk is replaced by |S_m| on both sides. n > 20 raises ResourceError.
LevyResult levy_oracle_enumerate(int n, double threshold, bool two_sided = false);

}  // namespace yeast
