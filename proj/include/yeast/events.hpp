#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace yeast {

enum class Group { control, treatment };

std::string_view to_string(Group g);
/// "control" or "treatment"; anything else is a DataError.
Group parse_group(std::string_view text);

using Timestamp = std::chrono::sys_time<std::chrono::microseconds>;

/// RFC 3339 date-time: "2023-08-01T12:00:00Z", optional fraction and
/// numeric offset. A space may replace the 'T'; a missing offset means UTC.
Timestamp parse_timestamp(std::string_view text);
/// UTC, "YYYY-MM-DDTHH:MM:SS[.ffffff]Z".
std::string format_timestamp(Timestamp t);

/// One observation of the monitored metric.
struct Event {
  std::int64_t index = 0;
  Timestamp timestamp{};
  std::string subject_id;
  Group group = Group::control;
  double outcome = 0.0;

  bool operator==(const Event&) const = default;
};

/// Signed increment of the running sum: +outcome for control, -outcome for
/// treatment.
struct Increment {
  double value = 0.0;
};

Increment increment_from_event(const Event& e);

enum class EventFormat { csv, ndjson };

/// CSV needs the header `i,timestamp,subject_id,group,y`; NDJSON carries the
/// same keys, one object per line. Blank lines are skipped. Parse failures
/// raise DataError with the offending line number.
std::vector<Event> read_events(std::istream& in, EventFormat format);

/// Format from the extension: .ndjson / .jsonl select NDJSON, anything else
/// CSV, unless `format` is given.
std::vector<Event> read_events_file(const std::filesystem::path& path, std::optional<EventFormat> format = {});

void write_events_csv(std::ostream& out, std::span<const Event> events);
void write_events_ndjson(std::ostream& out, std::span<const Event> events);

}  // namespace yeast
