#include "adjtime/adaptivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace adjt {

namespace {

void validate_cfl(const AdaptationConfig& cfg) {
  if (!(cfg.cfl_explicit > 0.0 && cfg.cfl_explicit < cfg.cfl_switch &&
        cfg.cfl_switch <= cfg.cfl_cap))
    throw std::invalid_argument("need 0 < cfl_explicit < cfl_switch <= cfl_cap");
  if (cfg.cfl_explicit > 1.0) throw std::invalid_argument("cfl_explicit must not exceed 1");
}

}  // namespace

void AdaptationConfig::validate() const {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(tol_k > 0.0)) throw std::invalid_argument("tol_k must be positive");
  if (tol_total && !(*tol_total > 0.0)) throw std::invalid_argument("tol_total must be positive");
  validate_cfl(*this);
  if (!(floor() > 0.0)) throw std::invalid_argument("density floor must be positive");
}

SpeedProfile::SpeedProfile(TimePartition partition, std::vector<double> speeds)
    : partition_(std::move(partition)), speeds_(std::move(speeds)) {
  if (speeds_.size() != partition_.size() || speeds_.empty())
    throw std::invalid_argument("speed profile needs one value per interval");
}

SpeedProfile SpeedProfile::from_trajectory(const ForwardTrajectory& traj, const TestCase& tc) {
  const auto& p = traj.partition;
  std::vector<double> speeds(p.size());
  for (std::size_t n = 0; n < p.size(); ++n) {
    speeds[n] = std::max(max_wave_speed(tc.law, traj.states[n], tc.inflow(p.start(n))),
                         max_wave_speed(tc.law, traj.states[n + 1], tc.inflow(p.end(n))));
  }
  return SpeedProfile(p, std::move(speeds));
}

SpeedProfile SpeedProfile::constant(double horizon, double speed) {
  return SpeedProfile(partition_from_times({0.0, horizon}, StepMode::Implicit), {speed});
}

double SpeedProfile::at(double t) const { return speeds_[partition_.locate(t)]; }

double SpeedProfile::over(double a, double b) const {
  std::size_t n = partition_.locate(a);
  double s = speeds_[n];
  for (++n; n < speeds_.size() && partition_.start(n) < b; ++n) s = std::max(s, speeds_[n]);
  return s;
}

std::vector<double> propose_timesteps(const TimePartition& old, std::span<const double> densities,
                                      const AdaptationConfig& cfg) {
  if (densities.empty()) throw std::invalid_argument("no error densities to equidistribute");
  if (densities.size() != old.size())
    throw std::invalid_argument("densities do not match the old partition");
  cfg.validate();

  const double target = cfg.tol_k / cfg.horizon;
  const double floor = cfg.floor();
  std::vector<double> proposed(old.size());
  for (std::size_t n = 0; n < old.size(); ++n) {
    if (densities[n] < 0.0 || !std::isfinite(densities[n]))
      throw std::invalid_argument("error densities must be finite and nonnegative");
    proposed[n] = old.step(n) * target / std::max(densities[n], floor);
  }

  const double T = old.horizon();
  std::vector<double> times{0.0};
  double t = 0.0;
  std::size_t n = 0;
  while (t < T) {
    while (n + 1 < old.size() && old.end(n) <= t) ++n;
    double end = t + proposed[n];
    for (std::size_t m = n + 1; m < old.size() && old.start(m) < end; ++m) {
      if (proposed[m] < end - old.start(m)) {
        end = old.start(m);
        break;
      }
    }
    if (end >= T || T - end <= 1e-12 * T) end = T;
    times.push_back(end);
    t = end;
  }
  return times;
}

PlanStats plan_stats(const TimePartition& partition, std::span<const double> cfl) {
  PlanStats s;
  s.steps = partition.size();
  s.explicit_steps = partition.count(StepMode::Explicit);
  s.implicit_steps = partition.count(StepMode::Implicit);
  if (!cfl.empty()) {
    const auto [lo, hi] = std::minmax_element(cfl.begin(), cfl.end());
    s.min_cfl = *lo;
    s.max_cfl = *hi;
  }
  return s;
}

AdaptationPlan assign_modes(std::span<const double> raw, const SpeedProfile& speed, double h,
                            const AdaptationConfig& cfg, bool switching) {
  validate_cfl(cfg);
  if (raw.size() < 2 || raw.front() != 0.0)
    throw std::invalid_argument("raw timesteps must cover [0, T]");

  std::vector<double> raw_cfl(raw.size() - 1);
  for (std::size_t i = 0; i + 1 < raw.size(); ++i)
    raw_cfl[i] = cfl_of_step(raw[i + 1] - raw[i], h, speed.over(raw[i], raw[i + 1]));

  std::vector<double> times{0.0};
  std::vector<StepMode> modes;
  std::vector<double> planned;

  auto push_implicit = [&](double a, double b, double cfl) {
    const auto parts = static_cast<std::size_t>(std::max(1.0, std::ceil(cfl / cfg.cfl_cap)));
    for (std::size_t p = 1; p <= parts; ++p) {
      times.push_back(p == parts ? b : a + (b - a) * static_cast<double>(p) / static_cast<double>(parts));
      modes.push_back(StepMode::Implicit);
      planned.push_back(cfl / static_cast<double>(parts));
    }
  };

  std::size_t i = 0;
  while (i < raw_cfl.size()) {
    if (!switching || raw_cfl[i] >= cfg.cfl_switch) {
      push_implicit(raw[i], raw[i + 1], raw_cfl[i]);
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < raw_cfl.size() && raw_cfl[j] < cfg.cfl_switch) ++j;
    const double b = raw[j];
    double t = raw[i];
    while (t < b) {
      double k = cfg.cfl_explicit * h / speed.at(t);
      const double s = speed.over(t, t + k);
      k = cfg.cfl_explicit * h / s;
      double end = t + k;
      // Fold a sub-rounding remainder into this step.
      if (end >= b || b - end <= 1e-6 * k) end = b;
      times.push_back(end);
      modes.push_back(StepMode::Explicit);
      planned.push_back(cfl_of_step(end - t, h, speed.over(t, end)));
      t = end;
    }
    i = j;
  }

  AdaptationPlan plan;
  plan.partition = TimePartition(std::move(times), std::move(modes));
  plan.planned_cfl = std::move(planned);
  plan.stats = plan_stats(plan.partition, plan.planned_cfl);
  return plan;
}

std::string_view to_string(ToleranceRule rule) {
  switch (rule) {
    case ToleranceRule::Halve: return "halve";
    case ToleranceRule::MatchPrevious: return "match_previous";
    case ToleranceRule::ScaledReference: return "scaled_ref";
  }
  return "?";
}

ToleranceRule parse_tolerance_rule(std::string_view text) {
  if (text == "halve") return ToleranceRule::Halve;
  if (text == "match_previous") return ToleranceRule::MatchPrevious;
  if (text == "scaled_ref") return ToleranceRule::ScaledReference;
  throw std::invalid_argument("unknown tolerance rule '" + std::string(text) + "'");
}

double tolerance_schedule(ToleranceRule rule, std::span<const double> prior, double factor,
                          std::optional<double> previous_tol) {
  switch (rule) {
    case ToleranceRule::Halve:
      if (previous_tol) return 0.5 * *previous_tol;
      if (prior.empty()) throw std::invalid_argument("halve rule needs a previous tolerance");
      return 0.5 * prior.back();
    case ToleranceRule::MatchPrevious:
      if (prior.empty()) throw std::invalid_argument("match_previous needs a measured eta_k");
      return prior.back();
    case ToleranceRule::ScaledReference:
      if (prior.empty()) throw std::invalid_argument("scaled_ref needs a reference eta_k");
      return factor * prior.front();
  }
  throw std::invalid_argument("unknown tolerance rule");
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::UniformExplicit: return "uniform";
    case Strategy::AdaptiveImplicit: return "implicit";
    case Strategy::AdaptiveImplicitExplicit: return "imex";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "uniform") return Strategy::UniformExplicit;
  if (text == "implicit") return Strategy::AdaptiveImplicit;
  if (text == "imex") return Strategy::AdaptiveImplicitExplicit;
  throw std::invalid_argument("unknown strategy '" + std::string(text) + "'");
}

LevelReport analyze_run(const SpatialGrid& grid, const TimePartition& partition,
                        const TestCase& tc, const AnalysisOptions& options,
                        ForwardTrajectory* trajectory_out) {
  auto traj = run_forward(grid, partition, tc, ForwardOptions{options.newton});
  const auto coeff = build_coefficient_field(traj, tc.law);
  const auto dual = solve_dual_gradient(coeff, tc, DualOptions{options.dual_cfl, false});

  LevelReport report;
  report.level = grid.level();
  report.cells = grid.cell_count();
  report.h = grid.h();
  report.breakdown = assemble_breakdown(traj, coeff, dual, tc);
  report.plan.partition = partition;
  report.plan.planned_cfl = traj.step_cfl;
  report.plan.stats = plan_stats(partition, traj.step_cfl);
  report.cfl_warnings = traj.cfl_warnings;
  for (const auto& s : traj.newton) report.newton_iterations += static_cast<std::size_t>(s.iterations);

  auto& series = report.series;
  for (std::size_t n = 0; n < partition.size(); ++n) {
    series.time.push_back(partition.end(n));
    series.step.push_back(partition.step(n));
    series.cfl.push_back(traj.step_cfl[n]);
    series.mode.push_back(partition.mode(n));
  }
  series.eta_k_density = report.breakdown.eta_k_density;
  series.eta_h_density = report.breakdown.eta_h_density;

  if (options.reference_level) {
    const double ref =
        reference_functional(tc, *options.reference_level, options.base_cells, 0.8);
    report.reference = ref;
    report.efficiency = efficiency_index(report.breakdown, ref);
  }
  if (trajectory_out) *trajectory_out = std::move(traj);
  return report;
}

std::vector<LevelReport> adaptive_loop(const LoopConfig& cfg, std::span<const LevelSpec> levels,
                                       const TestCase& tc) {
  if (levels.empty()) throw std::invalid_argument("level schedule is empty");
  if (levels.front().strategy != Strategy::UniformExplicit)
    throw std::invalid_argument("the first level must be a uniform explicit run");

  std::vector<LevelReport> reports;
  std::vector<double> measured;
  std::optional<double> tol = cfg.initial_tol;
  ForwardTrajectory previous{build_spatial_grid(cfg.analysis.base_cells, 0, tc.domain), {}, {}, {}, {}, {}, 0};

  for (const auto& spec : levels) {
    const auto grid = build_spatial_grid(cfg.analysis.base_cells, spec.level, tc.domain);
    AdaptationPlan plan;
    std::optional<double> level_tol;
    try {
      if (spec.strategy == Strategy::UniformExplicit) {
        plan.partition = uniform_cfl_partition(grid, tc, cfg.uniform_cfl);
      } else {
        if (reports.empty()) throw std::invalid_argument("adaptive level without a prior run");
        level_tol = tolerance_schedule(cfg.rule, measured, cfg.factor, tol);
        AdaptationConfig adapt = cfg.adapt;
        adapt.horizon = tc.horizon;
        adapt.tol_k = *level_tol;
        const auto raw = propose_timesteps(previous.partition,
                                           reports.back().breakdown.eta_k_density, adapt);
        plan = assign_modes(raw, SpeedProfile::from_trajectory(previous, tc), grid.h(), adapt,
                            spec.strategy == Strategy::AdaptiveImplicitExplicit);
        tol = level_tol;
      }
      ForwardTrajectory traj{grid, {}, {}, {}, {}, {}, 0};
      auto report = analyze_run(grid, plan.partition, tc, cfg.analysis, &traj);
      report.strategy = spec.strategy;
      report.tol_k = level_tol;
      if (spec.strategy != Strategy::UniformExplicit) {
        // Keep the planning view of the partition; the series carries the run's CFL.
        report.plan = std::move(plan);
      }
      measured.push_back(report.breakdown.eta_k_bar);
      previous = std::move(traj);
      reports.push_back(std::move(report));
    } catch (const SolverError& e) {
      throw SolverError("level " + std::to_string(spec.level) + ": " + e.what(), e.interval(),
                        e.residual());
    }
    const auto& last = reports.back().breakdown;
    if (cfg.adapt.tol_total && std::isfinite(*cfg.adapt.tol_total) &&
        last.eta_k_bar + last.eta_h_bar < *cfg.adapt.tol_total) break;
  }
  return reports;
}

}  // namespace adjt
