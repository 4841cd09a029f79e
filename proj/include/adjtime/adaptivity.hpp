#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "adjtime/dual.hpp"
#include "adjtime/estimator.hpp"
#include "adjtime/forward.hpp"
#include "adjtime/grid.hpp"
#include "adjtime/testcase.hpp"

namespace adjt {

struct AdaptationConfig {
  double horizon = 48.0;
  double tol_k = 0.0;
  std::optional<double> tol_total;
  double cfl_switch = 5.0;
  double cfl_explicit = 0.8;
  double cfl_cap = 1e4;
  std::optional<double> density_floor;  // defaults to 1e-14 tol_k / T

  double floor() const { return density_floor.value_or(1e-14 * tol_k / horizon); }
  void validate() const;
};

struct PlanStats {
  std::size_t steps = 0;
  std::size_t explicit_steps = 0;
  std::size_t implicit_steps = 0;
  double min_cfl = 0.0;
  double max_cfl = 0.0;
};

struct AdaptationPlan {
  TimePartition partition;
  std::vector<double> planned_cfl;  // per interval, from the planning speed profile
  PlanStats stats;
};

/// Piecewise-constant max wave speed over the intervals of a finished run.
class SpeedProfile {
 public:
  SpeedProfile(TimePartition partition, std::vector<double> speeds);
  static SpeedProfile from_trajectory(const ForwardTrajectory& traj, const TestCase& tc);
  static SpeedProfile constant(double horizon, double speed);

  double at(double t) const;
  /// Max speed over the old intervals overlapping [a, b).
  double over(double a, double b) const;

 private:
  TimePartition partition_;
  std::vector<double> speeds_;
};

/// Equidistribution k_m = k_n (tol_k/T) / max(density_n, floor), laid out as
/// consecutive steps. A step started inside old interval n is clipped at the
/// first later old boundary whose own k_m is smaller than the part of the
/// step that would extend past it. Returns step boundaries 0 = t_0 < ... = T.
std::vector<double> propose_timesteps(const TimePartition& old, std::span<const double> densities,
                                      const AdaptationConfig& cfg);

/// Steps with planned CFL >= cfl_switch stay implicit (split to respect
/// cfl_cap); maximal runs below the switch are re-laid as explicit steps at
/// cfl_explicit. With `switching` off every step stays implicit.
AdaptationPlan assign_modes(std::span<const double> raw, const SpeedProfile& speed, double h,
                            const AdaptationConfig& cfg, bool switching = true);

PlanStats plan_stats(const TimePartition& partition, std::span<const double> cfl);

enum class ToleranceRule { Halve, MatchPrevious, ScaledReference };

std::string_view to_string(ToleranceRule rule);
ToleranceRule parse_tolerance_rule(std::string_view text);

/// Halve: 0.5 * previous tolerance (or the last measured eta_k_bar when no
/// tolerance was set yet). MatchPrevious: last measured eta_k_bar.
/// ScaledReference: factor * first measured eta_k_bar.
double tolerance_schedule(ToleranceRule rule, std::span<const double> prior, double factor = 1.0,
                          std::optional<double> previous_tol = std::nullopt);

enum class Strategy { UniformExplicit, AdaptiveImplicit, AdaptiveImplicitExplicit };

std::string_view to_string(Strategy strategy);
Strategy parse_strategy(std::string_view text);

struct LevelSpec {
  int level = 0;
  Strategy strategy = Strategy::UniformExplicit;
};

/// Per-interval data for tables and plots.
struct IntervalSeries {
  std::vector<double> time;  // t_n (end of interval)
  std::vector<double> step;
  std::vector<double> cfl;   // from the state that sized/started the step
  std::vector<StepMode> mode;
  std::vector<double> eta_k_density;
  std::vector<double> eta_h_density;
};

struct LevelReport {
  int level = 0;
  std::size_t cells = 0;
  double h = 0.0;
  Strategy strategy = Strategy::UniformExplicit;
  std::optional<double> tol_k;
  AdaptationPlan plan;
  ErrorBreakdown breakdown;
  IntervalSeries series;
  std::size_t newton_iterations = 0;
  std::size_t cfl_warnings = 0;
  std::optional<double> reference;
  std::optional<EfficiencyIndex> efficiency;
};

struct AnalysisOptions {
  double dual_cfl = 0.8;
  NewtonOptions newton;
  std::optional<int> reference_level = 6;  // nullopt skips J_ref and theta
  int base_cells = 20;
};

/// Forward run, dual gradient and error breakdown on one grid/partition.
/// `trajectory_out`, when given, receives the forward run.
LevelReport analyze_run(const SpatialGrid& grid, const TimePartition& partition,
                        const TestCase& tc, const AnalysisOptions& options,
                        ForwardTrajectory* trajectory_out = nullptr);

struct LoopConfig {
  AdaptationConfig adapt;
  ToleranceRule rule = ToleranceRule::MatchPrevious;
  double factor = 1.0;
  std::optional<double> initial_tol;  // previous tolerance seed for Halve
  double uniform_cfl = 0.8;
  AnalysisOptions analysis;
};

/// Runs the level schedule: the first entry must be uniform; each adaptive
/// entry plans its partition from the previous level's densities. Stops early
/// once eta_k_bar + eta_h_bar < tol_total.
std::vector<LevelReport> adaptive_loop(const LoopConfig& cfg, std::span<const LevelSpec> levels,
                                       const TestCase& tc);

}  // namespace adjt
