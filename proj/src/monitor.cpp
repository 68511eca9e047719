#include "yeast/monitor.hpp"

#include <algorithm>
#include <cmath>

#include "yeast/errors.hpp"

namespace yeast {

Monitor::Monitor(Boundary boundary)
    : boundary_(std::move(boundary)), sidedness_(sidedness_of(boundary_)), horizon_(horizon_of(boundary_)) {}

Decision Monitor::step(const Event& e) { return step(increment_from_event(e)); }

Decision Monitor::step(Increment x) {
  if (state_.n >= horizon_) {
    throw UsageError("monitor already consumed its horizon of " + std::to_string(horizon_) + " events");
  }
  if (!std::isfinite(x.value)) {
    throw DataError("non-finite increment");
  }
  const std::int64_t n = state_.n + 1;
  const double threshold = threshold_at(boundary_, n);
  state_.n = n;
  state_.running_sum += x.value;
  const double stat = sidedness_ == Sidedness::one_sided ? state_.running_sum : std::abs(state_.running_sum);
  state_.running_max = std::max(state_.running_max, stat);
  last_threshold_ = threshold;
  if (!state_.detected_at && stat > threshold) {
    state_.detected_at = n;
  }
  return state_.detected_at ? Decision::flag : Decision::continue_monitoring;
}

MonitorReport run_stream(std::span<const Event> events, const Boundary& boundary, const StreamOptions& options) {
  Monitor monitor(boundary);
  MonitorReport report;
  if (options.record_trajectory) {
    report.trajectory.reserve(events.size());
  }
  const Event* previous = nullptr;
  for (const auto& e : events) {
    if (previous != nullptr && e.timestamp < previous->timestamp) {
      const std::string msg = "event " + std::to_string(e.index) + " is earlier than event " +
                              std::to_string(previous->index);
      if (options.strict_order) {
        throw DataError(msg);
      }
      report.warnings.push_back(msg);
    }
    const Decision d = monitor.step(e);
    if (options.record_trajectory) {
      report.trajectory.push_back(
          {monitor.state().n, monitor.state().running_sum, *monitor.last_threshold(), d == Decision::flag});
    }
    previous = &e;
  }
  report.detected_at = monitor.state().detected_at;
  report.final_s = monitor.state().running_sum;
  report.n_processed = monitor.state().n;
  return report;
}

}  // namespace yeast
