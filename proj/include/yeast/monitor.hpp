#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "yeast/events.hpp"
#include "yeast/rules.hpp"

namespace yeast {

enum class Decision { continue_monitoring, flag };

/// Running state of one monitored experiment. `running_max` is the largest
/// S_m (|S_m| for two-sided boundaries) seen so far, starting from S_0 = 0.
struct MonitorState {
  std::int64_t n = 0;
  double running_sum = 0.0;
  double running_max = 0.0;
  std::optional<std::int64_t> detected_at;
};

/// Streaming test engine. Each step adds the signed increment of one event
/// and compares the running sum with the boundary for that event index.
/// Once flagged, every later step reports flag as well.
class Monitor {
 public:
  explicit Monitor(Boundary boundary);

  Decision step(const Event& e);
  Decision step(Increment x);

  const MonitorState& state() const noexcept { return state_; }
  const Boundary& boundary() const noexcept { return boundary_; }
  std::int64_t horizon() const noexcept { return horizon_; }
  /// Threshold applied to the most recent step; nullopt before the first one.
  std::optional<double> last_threshold() const noexcept { return last_threshold_; }

 private:
  Boundary boundary_;
  Sidedness sidedness_;
  std::int64_t horizon_;
  MonitorState state_;
  std::optional<double> last_threshold_;
};

struct TrajectoryPoint {
  std::int64_t n = 0;
  double running_sum = 0.0;
  double threshold = 0.0;
  bool flag = false;
};

struct StreamOptions {
  /// Out-of-order timestamps raise DataError when true, else add a warning.
  bool strict_order = true;
  /// Record one TrajectoryPoint per processed event.
  bool record_trajectory = false;
};

struct MonitorReport {
  std::optional<std::int64_t> detected_at;
  double final_s = 0.0;
  std::int64_t n_processed = 0;
  std::vector<std::string> warnings;
  std::vector<TrajectoryPoint> trajectory;
};

/// Folds Monitor::step over the stream. Streams longer than the boundary's
/// horizon raise UsageError.
MonitorReport run_stream(std::span<const Event> events, const Boundary& boundary, const StreamOptions& options = {});

}  // namespace yeast
