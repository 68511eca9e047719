#include "yeast/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "yeast/boundaries.hpp"
#include "yeast/errors.hpp"
#include "yeast/events.hpp"
#include "yeast/levy.hpp"
#include "yeast/monitor.hpp"
#include "yeast/serialize.hpp"
#include "yeast/simharness.hpp"
#include "yeast/validation.hpp"

namespace yeast {

namespace {

using nlohmann::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open '" + path + "'");
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw DataError("cannot write '" + path + "'");
  }
  return f;
}

std::optional<EventFormat> event_format(const std::string& text) {
  if (text.empty()) {
    return std::nullopt;
  }
  if (text == "csv") {
    return EventFormat::csv;
  }
  if (text == "ndjson" || text == "jsonl") {
    return EventFormat::ndjson;
  }
  throw UsageError("unknown input format '" + text + "'; use csv or ndjson");
}

Sidedness sided_flag(const std::string& text) {
  try {
    return parse_sidedness(text);
  } catch (const DomainError&) {
    throw UsageError("--sided must be one or two");
  }
}

struct BoundaryArgs {
  double alpha = 0.05;
  std::string sided = "one";
  std::int64_t n = 0;
  double var = 0.0;
};

struct StaircaseArgs {
  std::string plan;
  double alpha = 0.05;
  int nodes = 128;
};

struct MonitorArgs {
  std::string input;
  std::string input_format;
  std::optional<double> threshold;
  std::string boundary_file;
  std::optional<std::int64_t> n;
  std::optional<double> var;
  double alpha = 0.05;
  std::string sided = "one";
  std::string trajectory;
  bool lenient = false;
};

struct SimulateArgs {
  std::string config;
  std::optional<std::int64_t> reps;
  std::optional<std::uint64_t> seed;
  std::string mode;
  std::vector<std::int64_t> checks;
  std::vector<std::string> methods;
  std::optional<int> threads;
  std::string output;
  std::string manifest;
  std::string format = "csv";
};

struct ValidateArgs {
  bool synth = false;
  std::int64_t subjects = 2000;
  double corr = 0.5;
  std::string input;
  std::string history;
  std::string input_format;
  std::string variance = "robust";
  std::optional<double> cap_percentile;
  std::int64_t reps = 10000;
  std::optional<std::uint64_t> seed;
  double alpha = 0.05;
  std::string sided = "one";
  std::string method = "YEAST";
};

struct LevyArgs {
  int n = 12;
  bool two_sided = false;
};

int cmd_boundary(const BoundaryArgs& a, std::ostream& out) {
  TestConfig cfg{a.alpha, sided_flag(a.sided), a.n, a.var};
  out << boundary_to_json(constant_boundary(cfg)) << '\n';
  return kExitOk;
}

int cmd_staircase(const StaircaseArgs& a, std::ostream& out) {
  const StaircasePlan plan = plan_from_json(read_text_file(a.plan));
  QuadratureSpec quad;
  quad.node_count = a.nodes;
  const StaircaseBoundary b = staircase_boundaries(plan, a.alpha, quad);
  out << boundary_to_json(b) << '\n';
  return kExitOk;
}

int cmd_monitor(const MonitorArgs& a, std::ostream& out) {
  const auto events = read_events_file(a.input, event_format(a.input_format));
  const auto count = static_cast<std::int64_t>(events.size());
  Boundary boundary;
  const int sources = (a.threshold ? 1 : 0) + (a.boundary_file.empty() ? 0 : 1) + (a.var ? 1 : 0);
  if (sources != 1) {
    throw UsageError("give exactly one of --threshold, --boundary or --var");
  }
  if (!a.boundary_file.empty()) {
    boundary = boundary_from_json(read_text_file(a.boundary_file));
  } else if (a.threshold) {
    if (!std::isfinite(*a.threshold)) {
      throw DomainError("threshold must be finite");
    }
    boundary = ConstantBoundary{*a.threshold, sided_flag(a.sided), a.alpha, a.n.value_or(std::max<std::int64_t>(count, 1))};
  } else {
    if (!a.n) {
      throw UsageError("--var needs --n");
    }
    boundary = constant_boundary(TestConfig{a.alpha, sided_flag(a.sided), *a.n, *a.var});
  }
  StreamOptions options;
  options.strict_order = !a.lenient;
  options.record_trajectory = !a.trajectory.empty();
  const MonitorReport report = run_stream(events, boundary, options);
  if (!a.trajectory.empty()) {
    auto f = open_output(a.trajectory);
    f << "n,s,threshold,flag\n";
    for (const auto& p : report.trajectory) {
      f << p.n << ',' << json(p.running_sum).dump() << ',' << json(p.threshold).dump() << ',' << (p.flag ? 1 : 0)
        << '\n';
    }
  }
  out << report_to_json(report, boundary) << '\n';
  return kExitOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream& err) {
  SimConfig cfg;
  if (!a.config.empty()) {
    std::istringstream in(read_text_file(a.config));
    cfg = read_sim_config(in);
  }
  cfg.base_seed = *a.seed;
  if (a.reps) {
    cfg.replications = *a.reps;
  }
  if (!a.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : a.methods) {
      cfg.methods.push_back(MethodSpec::parse(m));
    }
  }
  if (!a.mode.empty()) {
    if (a.mode != "continuous" && a.mode != "discrete") {
      throw UsageError("--mode must be continuous or discrete");
    }
    cfg.mode.discrete = a.mode == "discrete";
  }
  if (!a.checks.empty()) {
    cfg.mode.check_counts = a.checks;
  }
  if (a.threads) {
    cfg.threads = *a.threads;
  }
  if (a.format != "csv" && a.format != "json") {
    throw UsageError("--format must be csv or json");
  }
  const auto results = run_experiment_grid(cfg);

  std::ostringstream body;
  if (a.format == "csv") {
    write_results_csv(body, results);
  } else {
    json rows = json::array();
    for (const auto& r : results) {
      rows.push_back({{"method", r.method},
                      {"effect", r.effect},
                      {"mode", r.mode},
                      {"check_count", r.check_count},
                      {"detection_rate", r.detection_rate},
                      {"std_error", r.std_error},
                      {"mean_savings", r.mean_savings},
                      {"mean_savings_detected", r.mean_savings_detected},
                      {"replications", r.replications},
                      {"seed", r.seed}});
    }
    body << rows.dump(2) << '\n';
  }
  const std::string manifest = sim_manifest_json(cfg) + "\n";
  if (a.output.empty()) {
    out << body.str();
  } else {
    open_output(a.output) << body.str();
  }
  if (!a.manifest.empty()) {
    open_output(a.manifest) << manifest;
  } else if (!a.output.empty()) {
    open_output(a.output + ".manifest.json") << manifest;
  } else {
    err << manifest;
  }
  return kExitOk;
}

int cmd_validate(const ValidateArgs& a, std::ostream& out) {
  std::vector<Event> history;
  std::vector<Event> validation;
  if (a.synth) {
    if (!a.input.empty() || !a.history.empty()) {
      throw UsageError("--synth excludes --input and --history");
    }
    ClusteredSynthConfig sc;
    sc.n_subjects = a.subjects;
    sc.within_subject_corr = a.corr;
    sc.seed = *a.seed;
    auto data = generate_clustered_synth(sc);
    history = std::move(data.history);
    validation = std::move(data.validation);
  } else {
    if (a.input.empty() || a.history.empty()) {
      throw UsageError("give --synth, or both --input and --history");
    }
    const auto fmt = event_format(a.input_format);
    history = read_events_file(a.history, fmt);
    validation = read_events_file(a.input, fmt);
  }
  HistoryValidationOptions o;
  o.variance = parse_variance_method(a.variance);
  o.cap_percentile = a.cap_percentile;
  o.alpha = a.alpha;
  o.sidedness = sided_flag(a.sided);
  o.method = MethodSpec::parse(a.method);
  o.replications = a.reps;
  o.seed = *a.seed;
  const auto report = validate_on_history(history, validation, o);
  json j;
  j["detection_rate"] = report.result.detection_rate;
  j["std_error"] = report.result.std_error;
  j["ci_low"] = report.result.ci_low;
  j["ci_high"] = report.result.ci_high;
  j["detections"] = report.result.detections;
  j["replications"] = report.result.replications;
  j["method"] = o.method.name();
  j["alpha"] = o.alpha;
  j["sidedness"] = to_string(o.sidedness);
  j["variance"] = {{"method", to_string(report.variance.method)},
                   {"value", report.variance.value},
                   {"n_events", report.variance.n_events},
                   {"n_clusters", report.variance.n_clusters}};
  j["horizon"] = report.test.horizon_events;
  j["history_events"] = report.history_events;
  j["validation_events"] = report.validation_events;
  j["cap"] = report.cap ? json(*report.cap) : json(nullptr);
  j["seed"] = o.seed;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_levy(const LevyArgs& a, std::ostream& out) {
  json cases = json::array();
  std::int64_t violations = 0;
  for (int n = 1; n <= a.n; ++n) {
    for (int twice_b = 1; twice_b <= 2 * n; ++twice_b) {
      const double b = 0.5 * twice_b;
      const LevyResult r = levy_oracle_enumerate(n, b, a.two_sided);
      violations += r.holds ? 0 : 1;
      cases.push_back({{"n", n}, {"b", b}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"holds", r.holds}});
    }
  }
  json j;
  j["max_n"] = a.n;
  j["two_sided"] = a.two_sided;
  j["cases"] = cases.size();
  j["violations"] = violations;
  j["results"] = std::move(cases);
  out << j.dump(2) << '\n';
  return violations == 0 ? kExitOk : kExitNumerical;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential A/B test monitoring with constant and staircase boundaries", "yeast"};
  app.require_subcommand(1);
  app.set_version_flag("--version", YEAST_VERSION);

  BoundaryArgs ba;
  auto* boundary = app.add_subcommand("boundary", "Constant boundary for a planned horizon");
  boundary->add_option("--alpha", ba.alpha, "Significance level")->capture_default_str();
  boundary->add_option("--sided", ba.sided, "one or two")->capture_default_str();
  boundary->add_option("--n", ba.n, "Planned number of events N")->required();
  boundary->add_option("--var", ba.var, "Scaled variance V = var(S_N) / N")->required();

  StaircaseArgs sa;
  auto* staircase = app.add_subcommand("staircase", "Staircase boundary from a JSON plan file");
  staircase->add_option("--plan", sa.plan, "Plan JSON file")->required();
  staircase->add_option("--alpha", sa.alpha, "Significance level")->capture_default_str();
  staircase->add_option("--nodes", sa.nodes, "Gauss-Legendre nodes per panel")->capture_default_str();

  MonitorArgs ma;
  auto* monitor = app.add_subcommand("monitor", "Run a boundary over an event file");
  monitor->add_option("--input", ma.input, "Event file (CSV or NDJSON)")->required();
  monitor->add_option("--input-format", ma.input_format, "csv or ndjson (default: from extension)");
  monitor->add_option("--threshold", ma.threshold, "Constant threshold b*");
  monitor->add_option("--boundary", ma.boundary_file, "Boundary JSON file");
  monitor->add_option("--n", ma.n, "Horizon N");
  monitor->add_option("--var", ma.var, "Scaled variance V; computes the constant boundary");
  monitor->add_option("--alpha", ma.alpha, "Significance level")->capture_default_str();
  monitor->add_option("--sided", ma.sided, "one or two")->capture_default_str();
  monitor->add_option("--emit-trajectory", ma.trajectory, "Write per-event CSV n,s,threshold,flag");
  monitor->add_flag("--lenient", ma.lenient, "Warn instead of failing on out-of-order timestamps");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo grid of methods x effects");
  simulate->add_option("--config", sim.config, "key=value scenario file");
  simulate->add_option("--reps", sim.reps, "Override the replication count");
  simulate->add_option("--seed", sim.seed, "Base seed")->required();
  simulate->add_option("--mode", sim.mode, "continuous or discrete");
  simulate->add_option("--checks", sim.checks, "Check counts for discrete mode")->delimiter(',');
  simulate->add_option("--methods", sim.methods, "Method names")->delimiter(',');
  simulate->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
  simulate->add_option("--output", sim.output, "Results file (default stdout)");
  simulate->add_option("--manifest", sim.manifest, "Manifest file (default <output>.manifest.json)");
  simulate->add_option("--format", sim.format, "csv or json")->capture_default_str();

  ValidateArgs va;
  auto* validate = app.add_subcommand("validate", "Permutation (A/A) validation of the false detection rate");
  validate->add_flag("--synth", va.synth, "Use generated clustered data");
  validate->add_option("--subjects", va.subjects, "Subjects in generated data")->capture_default_str();
  validate->add_option("--corr", va.corr, "Within-subject correlation of generated data")->capture_default_str();
  validate->add_option("--input", va.input, "Validation-period event file");
  validate->add_option("--history", va.history, "History-period event file");
  validate->add_option("--input-format", va.input_format, "csv or ndjson (default: from extension)");
  validate->add_option("--variance", va.variance, "iid or robust")->capture_default_str();
  validate->add_option("--cap-percentile", va.cap_percentile, "Progressive cap percentile, e.g. 0.999");
  validate->add_option("--reps", va.reps, "Replications")->capture_default_str();
  validate->add_option("--seed", va.seed, "Seed")->required();
  validate->add_option("--alpha", va.alpha, "Significance level")->capture_default_str();
  validate->add_option("--sided", va.sided, "one or two")->capture_default_str();
  validate->add_option("--method", va.method, "Method name")->capture_default_str();

  LevyArgs la;
  auto* levy = app.add_subcommand("levy-check", "Exhaustive check of the maximal inequality for +-1 walks");
  levy->add_option("--n", la.n, "Largest walk length (<= 20)")->capture_default_str();
  levy->add_flag("--two-sided", la.two_sided, "Use |S_m|");

  std::vector<std::string> storage(args.begin(), args.end());
  if (storage.empty()) {
    storage.emplace_back("yeast");
  }
  std::vector<char*> argv;
  argv.reserve(storage.size());
  for (auto& s : storage) {
    argv.push_back(s.data());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << YEAST_VERSION << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const CLI::App* scope = &app;
    for (const auto* sub : app.get_subcommands()) {
      scope = sub;
    }
    err << scope->help();
    return kExitUsage;
  }

  try {
    if (boundary->parsed()) {
      return cmd_boundary(ba, out);
    }
    if (staircase->parsed()) {
      return cmd_staircase(sa, out);
    }
    if (monitor->parsed()) {
      return cmd_monitor(ma, out);
    }
    if (simulate->parsed()) {
      return cmd_simulate(sim, out, err);
    }
    if (validate->parsed()) {
      return cmd_validate(va, out);
    }
    if (levy->parsed()) {
      return cmd_levy(la, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitData;
  } catch (const ResourceError& e) {
    err << "resource error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace yeast
