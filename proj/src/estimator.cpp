#include "adjtime/estimator.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace adjt {

std::vector<double> cell_weights(const SpatialGrid& grid, const BumpWeight& weight) {
  std::vector<double> w(grid.cell_count());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = weight.integral(grid.left(j), grid.right(j));
  return w;
}

double evaluate_functional(const ForwardTrajectory& traj, const TestCase& tc) {
  const auto weights = cell_weights(traj.grid, tc.weight);
  double total = 0.0;
  for (std::size_t n = 0; n < traj.partition.size(); ++n) {
    const auto& u = traj.states.at(n + 1);
    double inner = 0.0;
    for (std::size_t j = 0; j < u.size(); ++j) inner += u[j] * weights[j];
    total += traj.partition.step(n) * inner;
  }
  return total;
}

double cell_time_error(std::size_t j, std::size_t n, const ForwardTrajectory& traj,
                       const CoefficientField& coeff, const DualGradientTrajectory& dual,
                       const TestCase& tc) {
  const auto& grid = traj.grid;
  const double jump = traj.states.at(n + 1).at(j) - traj.states.at(n).at(j);
  return time_error_term(traj.partition.step(n), grid.h(), jump,
                         tc.weight.value(grid.center(j)), coeff.at(j, n), sample_w(dual, j, n));
}

double cell_space_error(std::size_t j, std::size_t n, const ForwardTrajectory& traj,
                        const DualGradientTrajectory& dual, const ConservationLaw& law) {
  const auto& flux = traj.fluxes.at(n);
  const double u = traj.states.at(n + 1).at(j);
  return space_error_term(traj.partition.step(n), traj.grid.h(), sample_w(dual, j, n),
                          flux.at(j), flux.at(j + 1), law.flux(u));
}

ErrorBreakdown assemble_breakdown(const ForwardTrajectory& traj, const CoefficientField& coeff,
                                  const DualGradientTrajectory& dual, const TestCase& tc) {
  const std::size_t intervals = traj.partition.size();
  const std::size_t cells = traj.grid.cell_count();
  if (traj.states.size() != intervals + 1 || traj.fluxes.size() != intervals ||
      coeff.values.size() != intervals || dual.samples.size() != intervals ||
      coeff.grid.cell_count() != cells || dual.grid.cell_count() != cells)
    throw std::invalid_argument("forward, coefficient and dual data are not aligned");

  ErrorBreakdown out;
  out.eta_k_cells.assign(intervals, std::vector<double>(cells));
  out.eta_h_cells.assign(intervals, std::vector<double>(cells));
  out.eta_k_density.resize(intervals);
  out.eta_h_density.resize(intervals);

  for (std::size_t n = 0; n < intervals; ++n) {
    const double k = traj.partition.step(n);
    double abs_k = 0.0;
    double abs_h = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
      const double ek = cell_time_error(j, n, traj, coeff, dual, tc);
      const double eh = cell_space_error(j, n, traj, dual, tc.law);
      out.eta_k_cells[n][j] = ek;
      out.eta_h_cells[n][j] = eh;
      out.eta_k += ek;
      out.eta_h += eh;
      abs_k += std::abs(ek);
      abs_h += std::abs(eh);
    }
    out.eta_k_density[n] = abs_k / k;
    out.eta_h_density[n] = abs_h / k;
    out.eta_k_bar += k * out.eta_k_density[n];
    out.eta_h_bar += k * out.eta_h_density[n];
  }
  out.eta_bar = out.eta_k_bar + out.eta_h_bar;
  out.functional = evaluate_functional(traj, tc);
  return out;
}

EfficiencyIndex efficiency_index(const ErrorBreakdown& breakdown, double reference) {
  const double error = reference - breakdown.functional;
  if (std::abs(error) < 1e-14) return {};
  return {(breakdown.eta_h + breakdown.eta_k) / error, true};
}

double reference_functional(const TestCase& tc, int ref_level, int base_cells, double cfl) {
  using Key = std::tuple<std::string, double, int, int, double>;
  static std::mutex mutex;
  static std::map<Key, double> cache;
  const Key key{tc.name, tc.inflow_max, ref_level, base_cells, cfl};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }

  const auto grid = build_spatial_grid(base_cells, ref_level, tc.domain);
  const auto partition = uniform_cfl_partition(grid, tc, cfl);
  const auto weights = cell_weights(grid, tc.weight);
  double total = 0.0;
  march_forward(grid, partition, tc, [&](std::size_t n, const StepResult& step, const TimePartition& p) {
    double inner = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) inner += step.state[j] * weights[j];
    total += p.step(n) * inner;
  });

  std::lock_guard lock(mutex);
  cache.emplace(key, total);
  return total;
}

}  // namespace adjt
