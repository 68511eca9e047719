#include "yeast/events.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "yeast/errors.hpp"

namespace yeast {

namespace {

using namespace std::chrono;

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) {
    throw DataError("truncated timestamp '" + std::string(text) + "'");
  }
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      throw DataError("malformed timestamp '" + std::string(text) + "'");
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits one CSV record; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current.push_back(c);
      }
    } else if (c == '"' && trim(current).empty()) {
      current.clear();
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? current : std::string(trim(current)));
      current.clear();
      was_quoted = false;
    } else {
      current.push_back(c);
    }
  }
  if (quoted) {
    throw DataError("unterminated quoted field", line_no);
  }
  fields.push_back(was_quoted ? current : std::string(trim(current)));
  return fields;
}

double parse_outcome(std::string_view text, std::size_t line_no) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw DataError("outcome '" + std::string(text) + "' is not a finite number", line_no);
  }
  return value;
}

std::int64_t parse_index(std::string_view text, std::size_t line_no) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 1) {
    throw DataError("event index '" + std::string(text) + "' is not a positive integer", line_no);
  }
  return value;
}

template <typename F>
auto with_line(std::size_t line_no, F&& f) {
  try {
    return f();
  } catch (const DataError& e) {
    if (e.line()) {
      throw;
    }
    throw DataError(e.what(), line_no);
  }
}

Event event_from_json(const nlohmann::json& j, std::size_t line_no) {
  if (!j.is_object()) {
    throw DataError("expected a JSON object", line_no);
  }
  for (const char* key : {"i", "timestamp", "subject_id", "group", "y"}) {
    if (!j.contains(key)) {
      throw DataError(std::string("missing field '") + key + "'", line_no);
    }
  }
  Event e;
  const auto& i = j.at("i");
  if (!i.is_number_integer() || i.get<std::int64_t>() < 1) {
    throw DataError("field 'i' must be a positive integer", line_no);
  }
  e.index = i.get<std::int64_t>();
  if (!j.at("timestamp").is_string() || !j.at("group").is_string()) {
    throw DataError("fields 'timestamp' and 'group' must be strings", line_no);
  }
  const auto& subject = j.at("subject_id");
  if (subject.is_string()) {
    e.subject_id = subject.get<std::string>();
  } else if (subject.is_number_integer()) {
    e.subject_id = std::to_string(subject.get<std::int64_t>());
  } else {
    throw DataError("field 'subject_id' must be a string", line_no);
  }
  const auto& y = j.at("y");
  if (!y.is_number() || !std::isfinite(y.get<double>())) {
    throw DataError("field 'y' must be a finite number", line_no);
  }
  e.outcome = y.get<double>();
  with_line(line_no, [&] {
    e.timestamp = parse_timestamp(j.at("timestamp").get<std::string>());
    e.group = parse_group(j.at("group").get<std::string>());
    return 0;
  });
  return e;
}

}  // namespace

std::string_view to_string(Group g) { return g == Group::control ? "control" : "treatment"; }

Group parse_group(std::string_view text) {
  if (text == "control") {
    return Group::control;
  }
  if (text == "treatment") {
    return Group::treatment;
  }
  throw DataError("group must be 'control' or 'treatment', got '" + std::string(text) + "'");
}

Timestamp parse_timestamp(std::string_view raw) {
  const std::string_view text = trim(raw);
  const int y = parse_digits(text, 0, 4);
  expect_char(text, 4, '-');
  const int mo = parse_digits(text, 5, 2);
  expect_char(text, 7, '-');
  const int d = parse_digits(text, 8, 2);
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != 't' && text[10] != ' ')) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
  const int hh = parse_digits(text, 11, 2);
  expect_char(text, 13, ':');
  const int mm = parse_digits(text, 14, 2);
  expect_char(text, 16, ':');
  const int ss = parse_digits(text, 17, 2);

  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!date.ok() || hh > 23 || mm > 59 || ss > 60) {
    throw DataError("timestamp out of range '" + std::string(text) + "'");
  }

  std::size_t pos = 19;
  std::int64_t micros = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (digits < 6) {
        micros = micros * 10 + (text[pos] - '0');
      }
      ++digits;
      ++pos;
    }
    if (digits == 0) {
      throw DataError("malformed fractional seconds in '" + std::string(text) + "'");
    }
    for (int i = digits; i < 6; ++i) {
      micros *= 10;
    }
  }

  minutes offset{0};
  if (pos < text.size()) {
    const char c = text[pos];
    if ((c == 'Z' || c == 'z') && pos + 1 == text.size()) {
      // UTC
    } else if ((c == '+' || c == '-') && pos + 6 == text.size()) {
      const int oh = parse_digits(text, pos + 1, 2);
      expect_char(text, pos + 3, ':');
      const int om = parse_digits(text, pos + 4, 2);
      offset = minutes{oh * 60 + om};
      if (c == '-') {
        offset = -offset;
      }
    } else {
      throw DataError("malformed timestamp offset in '" + std::string(text) + "'");
    }
  }

  const auto local = sys_days{date} + hours{hh} + minutes{mm} + seconds{ss} + microseconds{micros};
  return time_point_cast<microseconds>(local - offset);
}

std::string format_timestamp(Timestamp t) {
  const auto day_point = floor<days>(t);
  const year_month_day date{day_point};
  const auto since_midnight = t - day_point;
  const auto h = duration_cast<hours>(since_midnight);
  const auto m = duration_cast<minutes>(since_midnight - h);
  const auto s = duration_cast<seconds>(since_midnight - h - m);
  const auto us = (since_midnight - h - m - s).count();
  char buf[64];
  if (us == 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()), static_cast<int>(h.count()),
                  static_cast<int>(m.count()), static_cast<int>(s.count()));
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%06lldZ", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()), static_cast<int>(h.count()),
                  static_cast<int>(m.count()), static_cast<int>(s.count()), static_cast<long long>(us));
  }
  return buf;
}

Increment increment_from_event(const Event& e) {
  if (!std::isfinite(e.outcome)) {
    throw DataError("event " + std::to_string(e.index) + " has a non-finite outcome");
  }
  return {e.group == Group::control ? e.outcome : -e.outcome};
}

std::vector<Event> read_events(std::istream& in, EventFormat format) {
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    if (format == EventFormat::ndjson) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        throw DataError(std::string("invalid JSON: ") + e.what(), line_no);
      }
      events.push_back(event_from_json(j, line_no));
      continue;
    }

    auto fields = split_csv(line, line_no);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"i", "timestamp", "subject_id", "group", "y"}) {
        throw DataError("expected CSV header 'i,timestamp,subject_id,group,y'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 5) {
      throw DataError("expected 5 fields, got " + std::to_string(fields.size()), line_no);
    }
    Event e;
    e.index = parse_index(fields[0], line_no);
    e.timestamp = with_line(line_no, [&] { return parse_timestamp(fields[1]); });
    e.subject_id = fields[2];
    e.group = with_line(line_no, [&] { return parse_group(fields[3]); });
    e.outcome = parse_outcome(fields[4], line_no);
    events.push_back(std::move(e));
  }
  if (format == EventFormat::csv && !header_seen && line_no > 0) {
    throw DataError("missing CSV header", 1);
  }
  return events;
}

std::vector<Event> read_events_file(const std::filesystem::path& path, std::optional<EventFormat> format) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open event file '" + path.string() + "'");
  }
  if (!format) {
    const auto ext = path.extension().string();
    format = (ext == ".ndjson" || ext == ".jsonl") ? EventFormat::ndjson : EventFormat::csv;
  }
  return read_events(in, *format);
}

void write_events_csv(std::ostream& out, std::span<const Event> events) {
  out << "i,timestamp,subject_id,group,y\n";
  char buf[64];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof buf, "%.17g", e.outcome);
    const bool needs_quotes = e.subject_id.find_first_of(",\"") != std::string::npos;
    std::string subject = e.subject_id;
    if (needs_quotes) {
      std::string escaped = "\"";
      for (char c : subject) {
        escaped += c;
        if (c == '"') {
          escaped += '"';
        }
      }
      subject = escaped + "\"";
    }
    out << e.index << ',' << format_timestamp(e.timestamp) << ',' << subject << ',' << to_string(e.group) << ','
        << buf << '\n';
  }
}

void write_events_ndjson(std::ostream& out, std::span<const Event> events) {
  for (const auto& e : events) {
    nlohmann::json j = {{"i", e.index},
                        {"timestamp", format_timestamp(e.timestamp)},
                        {"subject_id", e.subject_id},
                        {"group", std::string(to_string(e.group))},
                        {"y", e.outcome}};
    out << j.dump() << '\n';
  }
}

}  // namespace yeast
