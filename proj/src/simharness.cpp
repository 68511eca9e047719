#include "yeast/simharness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include "yeast/errors.hpp"
#include "yeast/statdist.hpp"

namespace yeast {

namespace {

// One event pair before the effect is applied:
//   control = control_value, treatment = treatment_noise + treatment_loc * (1 + effect).
struct UnitDraw {
  double control_value;
  double treatment_noise;
  double treatment_loc;
};

double exponential(Xoshiro256& rng) { return -std::log(rng.uniform_open()); }

double student_t_noise(int df, Xoshiro256& rng) {
  const double z = standard_normal(rng);
  double chi2 = 0.0;
  for (int j = 0; j < df; ++j) {
    const double g = standard_normal(rng);
    chi2 += g * g;
  }
  return z / std::sqrt(chi2 / df);
}

// Marsaglia-Tsang for shape >= 1; smaller shapes use the U^(1/shape) boost.
double standard_gamma(double shape, Xoshiro256& rng) {
  if (shape == 1.0) {
    return exponential(rng);
  }
  if (shape < 1.0) {
    const double g = standard_gamma(shape + 1.0, rng);
    return g * std::pow(rng.uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0.0;
    double v = 0.0;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x || std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
      return d * v;
    }
  }
}

UnitDraw unit_draw(const ScenarioDistribution& dist, Xoshiro256& rng) {
  switch (dist.kind) {
    case ScenarioKind::normal: {
      const double zc = standard_normal(rng);
      const double zt = standard_normal(rng);
      return {dist.first + dist.second * zc, dist.second * zt, dist.first};
    }
    case ScenarioKind::student_t: {
      const int df = static_cast<int>(dist.first);
      const double tc = student_t_noise(df, rng);
      const double tt = student_t_noise(df, rng);
      return {dist.second + tc, tt, dist.second};
    }
    case ScenarioKind::gamma: {
      const double gc = standard_gamma(dist.first, rng);
      const double gt = standard_gamma(dist.first, rng);
      return {dist.second * gc, 0.0, dist.second * gt};
    }
  }
  return {0.0, 0.0, 0.0};
}

// Prefix sums of one replication, so that the running sum at event n for
// effect xi is base[n] + (1 + xi) * loc[n].
struct ReplicationPrefix {
  std::vector<double> base;
  std::vector<double> loc;
};

void fill_prefix(const SimConfig& cfg, std::int64_t rep_index, ReplicationPrefix& out) {
  const auto n = static_cast<std::size_t>(cfg.n_per_group);
  out.base.resize(n);
  out.loc.resize(n);
  Xoshiro256 rng(mix_seed(cfg.base_seed, static_cast<std::uint64_t>(rep_index)));
  double base = 0.0;
  double loc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const UnitDraw d = unit_draw(cfg.scenario, rng);
    base += d.treatment_noise - d.control_value;
    loc += d.treatment_loc;
    out.base[i] = base;
    out.loc[i] = loc;
  }
}

void fill_path(const ReplicationPrefix& prefix, double effect, std::vector<double>& path) {
  const double scale = 1.0 + effect;
  path.resize(prefix.base.size());
  for (std::size_t i = 0; i < path.size(); ++i) {
    path[i] = prefix.base[i] + scale * prefix.loc[i];
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

// One evaluation layout of the grid: a check count (0 = continuous), its
// checkpoints and the per-method schedules compiled for it.
struct Layout {
  std::int64_t check_count = 0;
  std::vector<std::int64_t> checkpoints;
  std::vector<ThresholdSchedule> schedules;
};

struct Tally {
  std::vector<std::int64_t> detections;
  std::vector<std::int64_t> remaining;  // sum of (N - detection_index)
};

}  // namespace

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::normal:
      return "normal";
    case ScenarioKind::student_t:
      return "student_t";
    case ScenarioKind::gamma:
      return "gamma";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view text) {
  if (text == "normal") {
    return ScenarioKind::normal;
  }
  if (text == "student_t" || text == "t") {
    return ScenarioKind::student_t;
  }
  if (text == "gamma") {
    return ScenarioKind::gamma;
  }
  throw UsageError("unknown scenario '" + std::string(text) + "'; valid: normal, student_t, gamma");
}

ScenarioDistribution ScenarioDistribution::normal(double mean, double sd) {
  return {ScenarioKind::normal, mean, sd};
}

ScenarioDistribution ScenarioDistribution::student_t(double df, double shift) {
  return {ScenarioKind::student_t, df, shift};
}

ScenarioDistribution ScenarioDistribution::gamma(double shape, double scale) {
  return {ScenarioKind::gamma, shape, scale};
}

void ScenarioDistribution::validate() const {
  if (!std::isfinite(first) || !std::isfinite(second)) {
    throw DomainError("scenario parameters must be finite");
  }
  switch (kind) {
    case ScenarioKind::normal:
      if (!(second > 0.0)) {
        throw DomainError("normal scenario needs sd > 0");
      }
      break;
    case ScenarioKind::student_t:
      if (!(first > 2.0) || first != std::floor(first) || first > 1000.0) {
        throw DomainError("t scenario needs an integer df in (2, 1000]");
      }
      break;
    case ScenarioKind::gamma:
      if (!(first > 0.0) || !(second > 0.0)) {
        throw DomainError("gamma scenario needs shape > 0 and scale > 0");
      }
      break;
  }
}

double ScenarioDistribution::null_increment_variance() const {
  validate();
  switch (kind) {
    case ScenarioKind::normal:
      return 2.0 * second * second;
    case ScenarioKind::student_t:
      return 2.0 * first / (first - 2.0);
    case ScenarioKind::gamma:
      return 2.0 * first * second * second;
  }
  return 0.0;
}

double standard_normal(Xoshiro256& rng) { return normal_quantile_fast(rng.uniform_open()); }

ScenarioDraw sample_scenario(const ScenarioDistribution& dist, double effect, Xoshiro256& rng) {
  const UnitDraw d = unit_draw(dist, rng);
  return {d.control_value, d.treatment_noise + d.treatment_loc * (1.0 + effect)};
}

void SimConfig::validate() const {
  scenario.validate();
  if (n_per_group < 1) {
    throw DomainError("n_per_group must be positive");
  }
  if (effect_sizes.empty()) {
    throw DomainError("effect grid is empty");
  }
  for (double e : effect_sizes) {
    if (!std::isfinite(e) || !(e > -1.0)) {
      throw DomainError("effect sizes must be finite and above -1");
    }
  }
  if (replications < 1) {
    throw DomainError("replications must be at least 1");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1)");
  }
  if (methods.empty()) {
    throw UsageError("no methods selected");
  }
  if (threads < 0) {
    throw UsageError("thread count must be nonnegative");
  }
  if (mode.discrete) {
    if (mode.check_counts.empty()) {
      throw UsageError("discrete mode needs at least one check count");
    }
    for (auto c : mode.check_counts) {
      if (c < 1 || c > n_per_group) {
        throw UsageError("check count " + std::to_string(c) + " must lie in [1, N]");
      }
    }
  }
}

TestConfig SimConfig::test_config() const {
  return {alpha, sidedness, n_per_group, scenario.null_increment_variance()};
}

double savings(std::optional<std::int64_t> detection_index, std::int64_t n_total) {
  if (n_total < 1) {
    throw DomainError("n_total must be positive");
  }
  if (!detection_index) {
    return 0.0;
  }
  if (*detection_index < 1 || *detection_index > n_total) {
    throw DomainError("detection index must lie in [1, n_total]");
  }
  return 1.0 - static_cast<double>(*detection_index) / static_cast<double>(n_total);
}

std::vector<std::int64_t> checkpoint_indices(std::int64_t n, std::int64_t check_count) {
  if (check_count < 1 || check_count > n) {
    throw UsageError("check count " + std::to_string(check_count) + " must lie in [1, " + std::to_string(n) + "]");
  }
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(check_count));
  for (std::int64_t j = 1; j <= check_count; ++j) {
    // round(n * j / c), halves rounded up
    out.push_back((2 * n * j + check_count) / (2 * check_count));
  }
  return out;
}

std::vector<double> simulate_path(const SimConfig& cfg, double effect, std::int64_t rep_index) {
  cfg.validate();
  ReplicationPrefix prefix;
  fill_prefix(cfg, rep_index, prefix);
  std::vector<double> path;
  fill_path(prefix, effect, path);
  return path;
}

std::optional<std::int64_t> first_crossing(const ThresholdSchedule& schedule, const std::vector<double>& path,
                                           const std::vector<std::int64_t>* checkpoints) {
  const auto limit = std::min<std::int64_t>(schedule.horizon(), static_cast<std::int64_t>(path.size()));
  if (checkpoints != nullptr) {
    for (auto n : *checkpoints) {
      if (n > limit) {
        break;
      }
      if (schedule.crosses(n, path[static_cast<std::size_t>(n - 1)])) {
        return n;
      }
    }
    return std::nullopt;
  }
  for (std::int64_t n = 1; n <= limit; ++n) {
    if (schedule.crosses(n, path[static_cast<std::size_t>(n - 1)])) {
      return n;
    }
  }
  return std::nullopt;
}

ReplicationOutcome simulate_replication(const SimConfig& cfg, double effect, std::int64_t rep_index,
                                        const MethodSpec& method, std::int64_t check_count) {
  if (rep_index < 0 || rep_index >= cfg.replications) {
    throw UsageError("replication index out of range");
  }
  const auto path = simulate_path(cfg, effect, rep_index);
  const auto schedule = schedule_for(method, cfg.test_config(), check_count);
  std::optional<std::int64_t> idx;
  if (check_count > 0) {
    const auto checkpoints = checkpoint_indices(cfg.n_per_group, check_count);
    idx = first_crossing(schedule, path, &checkpoints);
  } else {
    idx = first_crossing(schedule, path);
  }
  return {idx.has_value(), idx};
}

std::vector<SimResult> run_experiment_grid(const SimConfig& cfg) {
  cfg.validate();
  const TestConfig tc = cfg.test_config();
  const std::int64_t n_total = cfg.n_per_group;

  std::vector<Layout> layouts;
  if (cfg.mode.discrete) {
    for (auto c : cfg.mode.check_counts) {
      layouts.push_back({c, checkpoint_indices(n_total, c), {}});
    }
  } else {
    layouts.push_back({0, {}, {}});
  }
  for (auto& layout : layouts) {
    for (const auto& m : cfg.methods) {
      layout.schedules.push_back(schedule_for(m, tc, layout.check_count));
    }
  }

  const std::size_t n_methods = cfg.methods.size();
  const std::size_t n_effects = cfg.effect_sizes.size();
  const std::size_t n_layouts = layouts.size();
  const std::size_t n_cells = n_methods * n_effects * n_layouts;
  auto cell = [&](std::size_t m, std::size_t e, std::size_t l) { return (l * n_effects + e) * n_methods + m; };

  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = static_cast<int>(std::clamp<std::int64_t>(threads, 1, cfg.replications));

  std::vector<Tally> tallies(static_cast<std::size_t>(threads),
                             Tally{std::vector<std::int64_t>(n_cells, 0), std::vector<std::int64_t>(n_cells, 0)});
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));

  auto worker = [&](int t) {
    try {
      const std::int64_t lo = cfg.replications * t / threads;
      const std::int64_t hi = cfg.replications * (t + 1) / threads;
      Tally& tally = tallies[static_cast<std::size_t>(t)];
      ReplicationPrefix prefix;
      std::vector<double> path;
      for (std::int64_t rep = lo; rep < hi; ++rep) {
        fill_prefix(cfg, rep, prefix);
        for (std::size_t e = 0; e < n_effects; ++e) {
          fill_path(prefix, cfg.effect_sizes[e], path);
          for (std::size_t l = 0; l < n_layouts; ++l) {
            const auto* checkpoints = layouts[l].check_count > 0 ? &layouts[l].checkpoints : nullptr;
            for (std::size_t m = 0; m < n_methods; ++m) {
              if (auto idx = first_crossing(layouts[l].schedules[m], path, checkpoints)) {
                const auto c = cell(m, e, l);
                tally.detections[c] += 1;
                tally.remaining[c] += n_total - *idx;
              }
            }
          }
        }
      }
    } catch (...) {
      errors[static_cast<std::size_t>(t)] = std::current_exception();
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back(worker, t);
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  for (const auto& err : errors) {
    if (err) {
      std::rethrow_exception(err);
    }
  }

  std::vector<SimResult> results;
  results.reserve(n_cells);
  const auto reps = static_cast<double>(cfg.replications);
  for (std::size_t l = 0; l < n_layouts; ++l) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      for (std::size_t e = 0; e < n_effects; ++e) {
        const auto c = cell(m, e, l);
        std::int64_t detections = 0;
        std::int64_t remaining = 0;
        for (const auto& tally : tallies) {
          detections += tally.detections[c];
          remaining += tally.remaining[c];
        }
        SimResult r;
        r.method = cfg.methods[m].name();
        r.effect = cfg.effect_sizes[e];
        r.mode = cfg.mode.discrete ? "discrete" : "continuous";
        r.check_count = cfg.mode.discrete ? layouts[l].check_count : n_total;
        r.detection_rate = static_cast<double>(detections) / reps;
        r.std_error = std::sqrt(r.detection_rate * (1.0 - r.detection_rate) / reps);
        r.mean_savings = static_cast<double>(remaining) / (reps * static_cast<double>(n_total));
        r.mean_savings_detected =
            detections > 0
                ? static_cast<double>(remaining) / (static_cast<double>(detections) * static_cast<double>(n_total))
                : 0.0;
        r.replications = cfg.replications;
        r.seed = cfg.base_seed;
        results.push_back(std::move(r));
      }
    }
  }
  return results;
}

std::vector<SimResult> run_discrete_mode(const SimConfig& cfg) {
  if (!cfg.mode.discrete) {
    throw UsageError("run_discrete_mode needs a discrete mode config");
  }
  return run_experiment_grid(cfg);
}

void write_results_csv(std::ostream& out, const std::vector<SimResult>& results) {
  out << "method,effect,mode,check_count,detection_rate,std_error,mean_savings,replications,seed,"
         "mean_savings_detected\n";
  for (const auto& r : results) {
    out << r.method << ',' << format_double(r.effect) << ',' << r.mode << ',' << r.check_count << ','
        << format_double(r.detection_rate) << ',' << format_double(r.std_error) << ','
        << format_double(r.mean_savings) << ',' << r.replications << ',' << r.seed << ','
        << format_double(r.mean_savings_detected) << '\n';
  }
}

}  // namespace yeast
