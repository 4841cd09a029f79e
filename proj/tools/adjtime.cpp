#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adjtime/adaptivity.hpp"
#include "adjtime/report.hpp"

namespace fs = std::filesystem;
using namespace adjt;

namespace {

constexpr int kConfigError = 2;
constexpr int kSolverError = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string case_name = "perturbed_shock";
  ShockPath path;
  int base_cells = 20;
  std::vector<int> levels;
  int level = 1;
  double cfl = 0.8;
  StepMode mode = StepMode::Explicit;
  std::string refine = "both";
  Strategy strategy = Strategy::AdaptiveImplicit;
  LoopConfig loop;
  fs::path output = "out";
  bool dry_run = false;
  bool plots = false;
  double spacing = 1e-3;
};

/// Reads typed values out of the merged key/value map, remembering which keys
/// were consumed so leftovers can be reported.
class Settings {
 public:
  explicit Settings(ConfigMap map) : map_(std::move(map)) {}

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    const auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  double number(const std::string& key, double fallback) {
    const auto v = raw(key);
    return v ? to_number(key, *v) : fallback;
  }

  std::optional<double> optional_number(const std::string& key) {
    const auto v = raw(key);
    if (!v || v->empty() || *v == "none") return std::nullopt;
    return to_number(key, *v);
  }

  int integer(const std::string& key, int fallback) {
    const auto v = raw(key);
    return v ? to_integer(key, *v) : fallback;
  }

  std::string text(const std::string& key, const std::string& fallback) {
    return raw(key).value_or(fallback);
  }

  bool flag(const std::string& key, bool fallback) {
    const auto v = raw(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(key + ": expected true or false, got '" + *v + "'");
  }

  /// "0,1,2" or "1-4".
  std::vector<int> level_list(const std::string& key, const std::string& fallback) {
    const auto v = text(key, fallback);
    std::vector<int> out;
    for (const auto& item : split_csv_line(v)) {
      if (item.empty()) continue;
      const auto dash = item.find('-', 1);
      if (dash == std::string::npos) {
        out.push_back(to_integer(key, item));
        continue;
      }
      const int a = to_integer(key, item.substr(0, dash));
      const int b = to_integer(key, item.substr(dash + 1));
      if (b < a) throw ConfigError(key + ": descending range '" + item + "'");
      for (int l = a; l <= b; ++l) out.push_back(l);
    }
    return out;
  }

  void reject_unused() const {
    for (const auto& [key, value] : map_)
      if (!used_.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }

 private:
  static double to_number(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size())
      throw ConfigError(key + ": not a number '" + v + "'");
    return out;
  }
  static int to_integer(const std::string& key, const std::string& v) {
    int out = 0;
    const auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size())
      throw ConfigError(key + ": not an integer '" + v + "'");
    return out;
  }

  ConfigMap map_;
  std::set<std::string> used_;
};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

template <typename Parse>
auto parse_enum(const std::string& key, const std::string& value, Parse parse) {
  try {
    return parse(value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

RunConfig build_config(Settings& s, const std::string& default_levels) {
  RunConfig c;
  c.case_name = s.text("case", c.case_name);
  require(c.case_name == "perturbed_shock" || c.case_name == "steady_shock",
          "case: expected perturbed_shock or steady_shock");
  c.path.first_amplitude = s.number("amplitude1", c.path.first_amplitude);
  c.path.second_amplitude = s.number("amplitude2", c.path.second_amplitude);
  c.base_cells = s.integer("base_cells", c.base_cells);
  require(c.base_cells >= 2, "base_cells must be at least 2");
  c.levels = s.level_list("levels", default_levels);
  c.level = s.integer("level", c.level);
  for (int l : c.levels) require(l >= 0 && l <= 10, "levels must lie in 0..10");
  require(c.level >= 1 && c.level <= 10, "level must lie in 1..10");
  require(std::set<int>(c.levels.begin(), c.levels.end()).size() == c.levels.size(),
          "levels must not repeat");
  c.cfl = s.number("cfl", c.cfl);
  require(c.cfl > 0.0, "cfl must be positive");
  c.mode = parse_enum("mode", s.text("mode", "explicit"), parse_step_mode);
  c.refine = s.text("refine", c.refine);
  require(c.refine == "both" || c.refine == "time" || c.refine == "space",
          "refine: expected both, time or space");
  c.strategy = parse_enum("strategy", s.text("strategy", "implicit"), parse_strategy);
  require(c.strategy != Strategy::UniformExplicit, "strategy: expected implicit or imex");

  auto& loop = c.loop;
  loop.uniform_cfl = c.cfl;
  loop.rule = parse_enum("rule", s.text("rule", "match_previous"), parse_tolerance_rule);
  loop.factor = s.number("factor", loop.factor);
  require(loop.factor > 0.0, "factor must be positive");
  loop.initial_tol = s.optional_number("initial_tol");
  require(!loop.initial_tol || *loop.initial_tol > 0.0, "initial_tol must be positive");
  loop.adapt.tol_total = s.optional_number("tol_total");
  loop.adapt.cfl_switch = s.number("cfl_switch", loop.adapt.cfl_switch);
  loop.adapt.cfl_explicit = s.number("cfl_explicit", loop.adapt.cfl_explicit);
  loop.adapt.cfl_cap = s.number("cfl_cap", loop.adapt.cfl_cap);
  loop.adapt.density_floor = s.optional_number("density_floor");
  {
    AdaptationConfig probe = loop.adapt;
    probe.tol_k = 1.0;
    try {
      probe.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  loop.analysis.base_cells = c.base_cells;
  loop.analysis.dual_cfl = s.number("dual_cfl", loop.analysis.dual_cfl);
  require(loop.analysis.dual_cfl > 0.0 && loop.analysis.dual_cfl <= 1.0, "dual_cfl must lie in (0, 1]");
  {
    const auto ref = s.text("reference_level", "6");
    if (ref == "none") {
      loop.analysis.reference_level.reset();
    } else {
      loop.analysis.reference_level = s.integer("reference_level", 6);
      require(*loop.analysis.reference_level >= 0 && *loop.analysis.reference_level <= 10,
              "reference_level must lie in 0..10 or be none");
    }
  }
  loop.analysis.newton.tolerance = s.number("newton_tol", loop.analysis.newton.tolerance);
  loop.analysis.newton.max_iterations = s.integer("newton_max_iter", loop.analysis.newton.max_iterations);
  require(loop.analysis.newton.tolerance > 0.0, "newton_tol must be positive");
  require(loop.analysis.newton.max_iterations >= 1, "newton_max_iter must be at least 1");
  c.output = s.text("output", c.output.string());
  require(!c.output.empty(), "output must not be empty");
  c.dry_run = s.flag("dry_run", false);
  c.plots = s.flag("plots", false);
  c.spacing = s.number("spacing", c.spacing);
  require(c.spacing > 0.0, "spacing must be positive");
  s.reject_unused();
  return c;
}

TestCase make_case(const RunConfig& c) {
  return c.case_name == "steady_shock" ? steady_shock() : perturbed_shock(c.path);
}

/// Options shared by every subcommand; flags override --set which overrides --config.
struct Inputs {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

void add_common(CLI::App* sub, Inputs& in) {
  sub->add_option("-c,--config", in.config_file, "key = value configuration file");
  sub->add_option("-s,--set", in.sets, "override a key, e.g. --set cfl=0.4");
  auto flag_option = [&](const char* name, const char* key, const char* help) {
    sub->add_option_function<std::string>(
        name, [&in, key](const std::string& v) { in.flags[key] = v; }, help);
  };
  flag_option("--case", "case", "perturbed_shock or steady_shock");
  flag_option("--base-cells", "base_cells", "cells on level 0");
  flag_option("--cfl", "cfl", "uniform CFL number");
  flag_option("--dual-cfl", "dual_cfl", "CFL of the dual sub-steps");
  flag_option("--reference-level", "reference_level", "level of the J_ref run, or none");
  flag_option("-o,--out", "output", "output directory");
  sub->add_flag_callback("--dry-run", [&in] { in.flags["dry_run"] = "true"; },
                         "print the resolved configuration and stop");
  sub->add_flag_callback("--plots", [&in] { in.flags["plots"] = "true"; },
                         "also write plot_cfl.csv and plot_eta_k.csv per level");
}

void add_run_flags(CLI::App* sub, Inputs& in, bool uniform) {
  auto flag_option = [&](const char* name, const char* key, const char* help) {
    sub->add_option_function<std::string>(
        name, [&in, key](const std::string& v) { in.flags[key] = v; }, help);
  };
  if (uniform) {
    flag_option("--levels", "levels", "levels, e.g. 0,1,2 or 1-4");
    flag_option("--mode", "mode", "explicit or implicit");
    flag_option("--refine", "refine", "both, time or space");
    return;
  }
  flag_option("--strategy", "strategy", "implicit or imex");
  flag_option("--rule", "rule", "halve, match_previous or scaled_ref");
  flag_option("--factor", "factor", "scale of the scaled_ref rule");
  flag_option("--tol-total", "tol_total", "stop once eta_k_bar + eta_h_bar is below");
}

Settings merge(const Inputs& in) {
  ConfigMap map;
  if (!in.config_file.empty()) {
    std::ifstream file(in.config_file);
    if (!file) throw ConfigError("cannot read config file " + in.config_file);
    try {
      map = parse_config(file);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(in.config_file + ": " + e.what());
    }
  }
  for (const auto& item : in.sets) {
    std::istringstream line(item);
    ConfigMap one;
    try {
      one = parse_config(line);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("--set " + item + ": " + e.what());
    }
    if (one.empty()) throw ConfigError("--set " + item + ": expected key=value");
    for (auto& [k, v] : one) map[k] = v;
  }
  for (const auto& [k, v] : in.flags) map[k] = v;
  return Settings(std::move(map));
}

/// Resolved configuration in config-file syntax, readable back with --config.
void echo(const RunConfig& c, const std::string& subcommand) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string("none"); };
  std::string levels;
  for (int l : c.levels) levels += (levels.empty() ? "" : ",") + std::to_string(l);
  const auto& a = c.loop.adapt;
  const auto& an = c.loop.analysis;
  std::printf("# %s\n", subcommand.c_str());
  std::printf("case = %s\n", c.case_name.c_str());
  std::printf("amplitude1 = %s\n", format_number(c.path.first_amplitude).c_str());
  std::printf("amplitude2 = %s\n", format_number(c.path.second_amplitude).c_str());
  std::printf("base_cells = %d\n", c.base_cells);
  std::printf("levels = %s\n", levels.c_str());
  std::printf("level = %d\n", c.level);
  std::printf("cfl = %s\n", format_number(c.cfl).c_str());
  std::printf("mode = %s\n", std::string(to_string(c.mode)).c_str());
  std::printf("refine = %s\n", c.refine.c_str());
  std::printf("strategy = %s\n", std::string(to_string(c.strategy)).c_str());
  std::printf("rule = %s\n", std::string(to_string(c.loop.rule)).c_str());
  std::printf("factor = %s\n", format_number(c.loop.factor).c_str());
  std::printf("initial_tol = %s\n", opt(c.loop.initial_tol).c_str());
  std::printf("tol_total = %s\n", opt(a.tol_total).c_str());
  std::printf("cfl_switch = %s\n", format_number(a.cfl_switch).c_str());
  std::printf("cfl_explicit = %s\n", format_number(a.cfl_explicit).c_str());
  std::printf("cfl_cap = %s\n", format_number(a.cfl_cap).c_str());
  std::printf("density_floor = %s\n", opt(a.density_floor).c_str());
  std::printf("dual_cfl = %s\n", format_number(an.dual_cfl).c_str());
  std::printf("reference_level = %s\n",
              an.reference_level ? std::to_string(*an.reference_level).c_str() : "none");
  std::printf("newton_tol = %s\n", format_number(an.newton.tolerance).c_str());
  std::printf("newton_max_iter = %d\n", an.newton.max_iterations);
  std::printf("spacing = %s\n", format_number(c.spacing).c_str());
  std::printf("output = %s\n", c.output.string().c_str());
  std::printf("plots = %s\n", c.plots ? "true" : "false");
}

std::ofstream open_output(const fs::path& path) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

void write_outputs(const RunConfig& c, const std::vector<LevelReport>& reports) {
  auto summary = open_output(c.output / "summary.csv");
  write_summary_header(summary);
  for (const auto& r : reports) {
    const fs::path dir = c.output / ("L" + std::to_string(r.level));
    auto steps = open_output(dir / "steps.csv");
    write_steps_csv(steps, r);
    if (c.plots) emit_plot_data(r, dir);
    write_summary_row(summary, r);
    std::printf("L%d cells=%zu N=%zu (explicit %zu) eta_k_bar=%s eta_h_bar=%s J_h=%s%s\n", r.level,
                r.cells, r.plan.partition.size(), r.plan.partition.count(StepMode::Explicit),
                format_number(r.breakdown.eta_k_bar).c_str(),
                format_number(r.breakdown.eta_h_bar).c_str(),
                format_number(r.breakdown.functional).c_str(),
                r.efficiency && r.efficiency->defined
                    ? (" theta=" + format_number(r.efficiency->value)).c_str()
                    : "");
    if (r.cfl_warnings > 0)
      std::fprintf(stderr, "warning: L%d has %zu explicit steps above CFL 1\n", r.level, r.cfl_warnings);
  }
}

int run_uniform(const RunConfig& c) {
  require(!c.levels.empty(), "levels: empty schedule");
  const auto tc = make_case(c);
  std::vector<LevelReport> reports;
  for (int level : c.levels) {
    // Time-only refinement keeps the first grid; space-only keeps the last step size.
    const int space_level = c.refine == "time" ? c.levels.front() : level;
    const int time_level = c.refine == "space" ? c.levels.back() : level;
    const auto grid = build_spatial_grid(c.base_cells, space_level, tc.domain);
    auto partition = uniform_cfl_partition(build_spatial_grid(c.base_cells, time_level, tc.domain),
                                           tc, c.cfl, c.mode);
    auto report = analyze_run(grid, partition, tc, c.loop.analysis);
    report.level = level;
    reports.push_back(std::move(report));
  }
  write_outputs(c, reports);
  return 0;
}

int run_schedule(const RunConfig& c, const std::vector<LevelSpec>& schedule, bool early_stop) {
  auto cfg = c.loop;
  if (!early_stop) cfg.adapt.tol_total.reset();
  const auto reports = adaptive_loop(cfg, schedule, make_case(c));
  write_outputs(c, reports);
  return 0;
}

int validate_case(const RunConfig& c) {
  ShockPath path = c.path;
  if (c.case_name == "steady_shock") path.first_amplitude = path.second_amplitude = 0.0;
  const auto report = validate_characteristics(path, c.spacing);
  std::printf("case = %s\n", c.case_name.c_str());
  std::printf("samples = %zu\n", report.samples);
  std::printf("monotone = %s\n", report.monotone ? "true" : "false");
  std::printf("positive_speed = %s\n", report.positive_speed ? "true" : "false");
  std::printf("min_upstream_state = %s\n", format_number(report.min_upstream_state).c_str());
  std::printf("max_upstream_state = %s\n", format_number(report.max_upstream_state).c_str());
  std::printf("min_departure_slope = %s\n", format_number(report.min_departure_slope).c_str());
  if (report.ok()) {
    const auto tc = make_case(c);
    std::printf("inflow_max = %s\n", format_number(tc.inflow_max).c_str());
    return 0;
  }
  std::fprintf(stderr, "error: characteristics cross, boundary data is not well defined\n");
  return kSolverError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adjoint error estimation and adaptive time stepping for 1D conservation laws"};
  app.require_subcommand(1);

  Inputs uniform_in, adaptive_in, loop_in, validate_in;
  auto* uniform = app.add_subcommand("run-uniform", "uniform runs over a list of levels");
  add_common(uniform, uniform_in);
  add_run_flags(uniform, uniform_in, true);

  auto* adaptive = app.add_subcommand("run-adaptive", "uniform level 0 then one adaptive level");
  add_common(adaptive, adaptive_in);
  add_run_flags(adaptive, adaptive_in, false);
  adaptive->add_option_function<std::string>(
      "--level", [&](const std::string& v) { adaptive_in.flags["level"] = v; }, "adaptive level");

  auto* loop = app.add_subcommand("run-loop", "uniform first level then adaptive levels");
  add_common(loop, loop_in);
  add_run_flags(loop, loop_in, false);
  loop->add_option_function<std::string>(
      "--levels", [&](const std::string& v) { loop_in.flags["levels"] = v; }, "level schedule");

  std::string steps_file, plot_dir;
  auto* plots = app.add_subcommand("emit-plots", "split a steps.csv into plot CSVs");
  plots->add_option("steps", steps_file, "steps.csv to read")->required();
  plots->add_option("-o,--out", plot_dir, "directory for plot_cfl.csv and plot_eta_k.csv");

  auto* validate = app.add_subcommand("validate-case", "check the characteristic construction");
  add_common(validate, validate_in);
  validate->add_option_function<std::string>(
      "--amplitude1", [&](const std::string& v) { validate_in.flags["amplitude1"] = v; }, "first perturbation");
  validate->add_option_function<std::string>(
      "--amplitude2", [&](const std::string& v) { validate_in.flags["amplitude2"] = v; }, "second perturbation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*plots) {
      std::ifstream in(steps_file);
      if (!in) throw ConfigError("cannot read " + steps_file);
      const fs::path dir = plot_dir.empty() ? fs::path(steps_file).parent_path() : fs::path(plot_dir);
      auto cfl = open_output(dir / "plot_cfl.csv");
      auto eta = open_output(dir / "plot_eta_k.csv");
      try {
        emit_plots_from_steps(in, cfl, eta);
      } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
      }
      return 0;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    Inputs& in = *uniform ? uniform_in : *adaptive ? adaptive_in : *loop ? loop_in : validate_in;
    auto settings = merge(in);
    const std::string default_levels = name == "run-loop" ? "0,1,2" : "0";
    const auto cfg = build_config(settings, default_levels);
    if (cfg.dry_run) {
      echo(cfg, name);
      return 0;
    }
    if (*uniform) return run_uniform(cfg);
    if (*adaptive)
      return run_schedule(cfg, {{0, Strategy::UniformExplicit}, {cfg.level, cfg.strategy}}, false);
    if (*loop) {
      require(!cfg.levels.empty(), "levels: empty schedule");
      std::vector<LevelSpec> schedule;
      for (std::size_t i = 0; i < cfg.levels.size(); ++i)
        schedule.push_back({cfg.levels[i], i == 0 ? Strategy::UniformExplicit : cfg.strategy});
      return run_schedule(cfg, schedule, true);
    }
    return validate_case(cfg);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const SolverError& e) {
    std::fprintf(stderr, "solver error: %s\n", e.what());
    return kSolverError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
