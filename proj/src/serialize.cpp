#include "yeast/serialize.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <json.hpp>
#include <sstream>
#include <type_traits>

#include "yeast/errors.hpp"

namespace yeast {

namespace {

using nlohmann::json;

json boundary_json(const Boundary& b) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        json j;
        if constexpr (std::is_same_v<T, ConstantBoundary>) {
          j["type"] = "constant";
          j["alpha"] = x.alpha;
          j["sidedness"] = to_string(x.sidedness);
          j["thresholds"] = json::array({x.threshold});
          j["period_end_indices"] = json::array({x.horizon_events});
        } else if constexpr (std::is_same_v<T, StaircaseBoundary>) {
          j["type"] = "staircase";
          j["alpha"] = x.alpha;
          j["sidedness"] = to_string(Sidedness::one_sided);
          j["thresholds"] = x.thresholds;
          j["period_end_indices"] = x.period_end_indices;
          j["achieved_fdr_bound"] = x.achieved_fdr_bound;
          j["inflation_steps"] = x.inflation_steps;
        } else {
          j["type"] = "schedule";
          j["alpha"] = nullptr;
          j["sidedness"] = to_string(x.sidedness);
          j["thresholds"] = x.thresholds;
          json ends = json::array();
          for (std::int64_t n = 1; n <= x.horizon(); ++n) {
            ends.push_back(n);
          }
          j["period_end_indices"] = std::move(ends);
        }
        return j;
      },
      b);
}

template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw DataError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string("field '") + key + "' has the wrong type");
  }
}

json parse_document(std::string_view text) {
  try {
    json j = json::parse(text);
    if (!j.is_object()) {
      throw DataError("expected a JSON object");
    }
    return j;
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
}

Sidedness sidedness_field(const json& j) {
  try {
    return parse_sidedness(field<std::string>(j, "sidedness"));
  } catch (const DomainError& e) {
    throw DataError(e.what());
  }
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) {
      throw DataError("empty list item");
    }
    out.push_back(item.substr(b, e - b + 1));
  }
  if (out.empty()) {
    throw DataError("empty list");
  }
  return out;
}

template <typename T>
T parse_number(const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw DataError("'" + text + "' is not a valid number");
  }
  return value;
}

}  // namespace

std::string boundary_to_json(const Boundary& b, int indent) { return boundary_json(b).dump(indent); }

Boundary boundary_from_json(std::string_view text) {
  const json j = parse_document(text);
  const auto type = field<std::string>(j, "type");
  const auto thresholds = field<std::vector<double>>(j, "thresholds");
  const auto ends = field<std::vector<std::int64_t>>(j, "period_end_indices");
  const Sidedness sidedness = sidedness_field(j);
  const double alpha = j.contains("alpha") && !j["alpha"].is_null() ? field<double>(j, "alpha") : 0.0;
  for (double t : thresholds) {
    if (!std::isfinite(t)) {
      throw DataError("thresholds must be finite");
    }
  }
  if (type == "constant") {
    if (thresholds.size() != 1 || ends.size() != 1 || ends[0] < 1) {
      throw DataError("constant boundary needs one threshold and one positive end index");
    }
    return ConstantBoundary{thresholds[0], sidedness, alpha, ends[0]};
  }
  if (type == "staircase") {
    if (sidedness != Sidedness::one_sided) {
      throw DataError("staircase boundaries are one-sided only");
    }
    if (thresholds.empty() || thresholds.size() != ends.size()) {
      throw DataError("staircase needs one end index per threshold");
    }
    for (std::size_t k = 0; k < ends.size(); ++k) {
      if (ends[k] < 1 || (k > 0 && ends[k] <= ends[k - 1])) {
        throw DataError("period end indices must be positive and strictly increasing");
      }
    }
    StaircaseBoundary s;
    s.thresholds = thresholds;
    s.period_end_indices = ends;
    s.alpha = alpha;
    if (j.contains("achieved_fdr_bound")) {
      s.achieved_fdr_bound = field<double>(j, "achieved_fdr_bound");
    }
    if (j.contains("inflation_steps")) {
      s.inflation_steps = field<int>(j, "inflation_steps");
    }
    return s;
  }
  if (type == "schedule") {
    if (thresholds.empty()) {
      throw DataError("schedule needs at least one threshold");
    }
    return ThresholdSchedule{sidedness, thresholds};
  }
  throw DataError("unknown boundary type '" + type + "'");
}

StaircasePlan plan_from_json(std::string_view text) {
  const json j = parse_document(text);
  const double epsilon = j.contains("epsilon") ? field<double>(j, "epsilon") : 0.01;
  try {
    if (j.contains("periods")) {
      return StaircasePlan::equal_periods(field<std::int64_t>(j, "horizon"), field<int>(j, "periods"),
                                          field<double>(j, "variance_per_event"), epsilon);
    }
    auto sizes = field<std::vector<std::int64_t>>(j, "period_sizes");
    auto incr = field<std::vector<double>>(j, "incr_variances");
    if (j.contains("cum_variances")) {
      StaircasePlan plan{std::move(sizes), field<std::vector<double>>(j, "cum_variances"), std::move(incr), epsilon};
      plan.validate();
      return plan;
    }
    return StaircasePlan::from_period_variances(std::move(sizes), std::move(incr), epsilon);
  } catch (const DomainError& e) {
    throw DataError(std::string("invalid plan: ") + e.what());
  }
}

std::string report_to_json(const MonitorReport& report, const Boundary& boundary, int indent) {
  json j;
  j["detected_at"] = report.detected_at ? json(*report.detected_at) : json(nullptr);
  j["n_processed"] = report.n_processed;
  j["final_s"] = report.final_s;
  j["warnings"] = report.warnings;
  j["boundary"] = boundary_json(boundary);
  return j.dump(indent);
}

SimConfig read_sim_config(std::istream& in) {
  SimConfig cfg;
  std::string kind = "normal";
  std::optional<double> normal_mean, normal_sd, t_df, t_shift, g_shape, g_scale;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("expected key = value", line_no);
    }
    auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r");
      const auto last = s.find_last_not_of(" \t\r");
      return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "scenario") {
        parse_scenario_kind(value);
        kind = value == "t" ? "student_t" : value;
      } else if (key == "mean") {
        normal_mean = parse_number<double>(value);
      } else if (key == "sd") {
        normal_sd = parse_number<double>(value);
      } else if (key == "df") {
        t_df = parse_number<double>(value);
      } else if (key == "shift") {
        t_shift = parse_number<double>(value);
      } else if (key == "shape") {
        g_shape = parse_number<double>(value);
      } else if (key == "scale") {
        g_scale = parse_number<double>(value);
      } else if (key == "n_per_group") {
        cfg.n_per_group = parse_number<std::int64_t>(value);
      } else if (key == "replications") {
        cfg.replications = parse_number<std::int64_t>(value);
      } else if (key == "seed") {
        cfg.base_seed = parse_number<std::uint64_t>(value);
      } else if (key == "alpha") {
        cfg.alpha = parse_number<double>(value);
      } else if (key == "threads") {
        cfg.threads = parse_number<int>(value);
      } else if (key == "sidedness") {
        cfg.sidedness = parse_sidedness(value);
      } else if (key == "effects") {
        cfg.effect_sizes.clear();
        for (const auto& item : split_list(value)) {
          cfg.effect_sizes.push_back(parse_number<double>(item));
        }
      } else if (key == "methods") {
        cfg.methods.clear();
        for (const auto& item : split_list(value)) {
          cfg.methods.push_back(MethodSpec::parse(item));
        }
      } else if (key == "mode") {
        if (value != "continuous" && value != "discrete") {
          throw DataError("mode must be continuous or discrete");
        }
        cfg.mode.discrete = value == "discrete";
      } else if (key == "checks") {
        cfg.mode.check_counts.clear();
        for (const auto& item : split_list(value)) {
          cfg.mode.check_counts.push_back(parse_number<std::int64_t>(item));
        }
      } else {
        throw DataError("unknown key '" + key + "'");
      }
    } catch (const DataError& e) {
      throw DataError(e.what(), line_no);
    } catch (const DomainError& e) {
      throw DataError(e.what(), line_no);
    }
  }
  if (kind == "normal") {
    cfg.scenario = ScenarioDistribution::normal(normal_mean.value_or(1.0), normal_sd.value_or(1.0));
  } else if (kind == "student_t") {
    cfg.scenario = ScenarioDistribution::student_t(t_df.value_or(3.0), t_shift.value_or(std::sqrt(3.0)));
  } else {
    cfg.scenario = ScenarioDistribution::gamma(g_shape.value_or(1.0), g_scale.value_or(2.0));
  }
  return cfg;
}

std::string sim_manifest_json(const SimConfig& cfg, int indent) {
  json j;
  j["library"] = "yeast";
  j["version"] = YEAST_VERSION;
  json scenario;
  scenario["kind"] = to_string(cfg.scenario.kind);
  switch (cfg.scenario.kind) {
    case ScenarioKind::normal:
      scenario["mean"] = cfg.scenario.first;
      scenario["sd"] = cfg.scenario.second;
      break;
    case ScenarioKind::student_t:
      scenario["df"] = cfg.scenario.first;
      scenario["shift"] = cfg.scenario.second;
      break;
    case ScenarioKind::gamma:
      scenario["shape"] = cfg.scenario.first;
      scenario["scale"] = cfg.scenario.second;
      break;
  }
  j["scenario"] = scenario;
  j["n_per_group"] = cfg.n_per_group;
  j["effects"] = cfg.effect_sizes;
  j["replications"] = cfg.replications;
  j["seed"] = cfg.base_seed;
  j["alpha"] = cfg.alpha;
  j["sidedness"] = to_string(cfg.sidedness);
  json methods = json::array();
  for (const auto& m : cfg.methods) {
    methods.push_back(m.name());
  }
  j["methods"] = methods;
  j["mode"] = cfg.mode.discrete ? "discrete" : "continuous";
  j["checks"] = cfg.mode.check_counts;
  j["threads"] = cfg.threads;
  j["savings_convention"] = "mean_savings averages over all replications with 0 for no detection";
  return j.dump(indent);
}

}  // namespace yeast
