#include "yeast/levy.hpp"

#include <cmath>
#include <string>

#include "yeast/errors.hpp"

namespace yeast {

LevyResult levy_oracle_enumerate(int n, double threshold, bool two_sided) {
  if (n > kMaxLevyEnumerationSteps) {
    throw ResourceError("enumeration is limited to n <= " + std::to_string(kMaxLevyEnumerationSteps));
  }
  if (n < 1) {
    throw DomainError("walk length must be positive");
  }
  if (!std::isfinite(threshold)) {
    throw DomainError("threshold must be finite");
  }
  LevyResult r;
  r.paths = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < r.paths; ++mask) {
    int s = 0;
    bool crossed = false;
    for (int j = 0; j < n; ++j) {
      s += ((mask >> j) & 1U) != 0 ? 1 : -1;
      const int stat = two_sided ? std::abs(s) : s;
      crossed = crossed || stat >= threshold;
    }
    const int final_stat = two_sided ? std::abs(s) : s;
    r.max_count += crossed ? 1 : 0;
    r.end_count += final_stat >= threshold ? 1 : 0;
  }
  const auto total = static_cast<double>(r.paths);
  r.lhs = static_cast<double>(r.max_count) / total;
  r.rhs = 2.0 * static_cast<double>(r.end_count) / total;
  r.holds = r.max_count <= 2 * r.end_count;
  return r;
}

}  // namespace yeast
