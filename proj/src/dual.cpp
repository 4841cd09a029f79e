#include "adjtime/dual.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adjt {

CoefficientField build_coefficient_field(const ForwardTrajectory& traj,
                                         const ConservationLaw& law) {
  if (traj.states.size() != traj.partition.size() + 1)
    throw std::invalid_argument("forward trajectory is incomplete");
  CoefficientField field{traj.grid, traj.partition, {}};
  field.values.reserve(traj.partition.size());
  for (std::size_t n = 0; n < traj.partition.size(); ++n) {
    const auto& u = traj.states[n + 1];
    std::vector<double> a(u.size());
    std::transform(u.begin(), u.end(), a.begin(), [&](double v) { return law.derivative(v); });
    field.values.push_back(std::move(a));
  }
  return field;
}

DualSubstep dual_substep(std::span<const double> a, std::span<const double> w,
                         std::span<const double> source, double dtau, double h) {
  const std::size_t cells = w.size();
  std::vector<double> flux(cells + 1);
  flux[0] = dual_flux(a[0], a[0], 0.0, w[0]);
  for (std::size_t j = 1; j < cells; ++j) flux[j] = dual_flux(a[j - 1], a[j], w[j - 1], w[j]);
  flux[cells] = dual_flux(a[cells - 1], a[cells - 1], w[cells - 1], 0.0);

  DualSubstep out;
  out.w.resize(cells);
  const double ratio = dtau / h;
  for (std::size_t j = 0; j < cells; ++j)
    out.w[j] = w[j] - ratio * (flux[j + 1] - flux[j]) + dtau * source[j];
  out.left_flux = flux[0];
  out.right_flux = flux[cells];
  return out;
}

DualGradientTrajectory solve_dual_gradient(const CoefficientField& coeff, const TestCase& tc,
                                           const DualOptions& options) {
  if (!(options.cfl > 0.0 && options.cfl <= 1.0))
    throw std::invalid_argument("dual CFL must lie in (0, 1]");
  const auto& grid = coeff.grid;
  const auto& partition = coeff.partition;
  const std::size_t cells = grid.cell_count();
  const std::size_t intervals = partition.size();
  if (coeff.values.size() != intervals)
    throw std::invalid_argument("coefficient field does not match the partition");

  // Backward-time source -d_x psi at cell midpoints.
  std::vector<double> source(cells);
  for (std::size_t j = 0; j < cells; ++j) source[j] = -tc.weight.derivative(grid.center(j));

  DualGradientTrajectory out{grid, partition, {}, std::vector<double>(cells, 0.0), {}, {}, {}};
  out.samples.resize(intervals);
  out.substeps.resize(intervals);
  out.sample_substep.resize(intervals);

  std::vector<double> w = out.terminal;
  const double h = grid.h();
  for (std::size_t n = intervals; n-- > 0;) {
    const auto& a = coeff.values[n];
    if (a.size() != cells) throw std::invalid_argument("coefficient row has the wrong size");
    const double k = partition.step(n);
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    std::size_t m = 1;
    if (amax > 0.0) m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(k * amax / (options.cfl * h))));
    const double dtau = k / static_cast<double>(m);
    const std::size_t pick = (m + 1) / 2;

    if (options.keep_substeps) out.log.push_back({n, partition.end(n), w});
    for (std::size_t i = 1; i <= m; ++i) {
      auto step = dual_substep(a, w, source, dtau, h);
      w = std::move(step.w);
      for (double v : w)
        if (!std::isfinite(v))
          throw SolverError("dual solve produced a non-finite value in interval " +
                                std::to_string(n),
                            static_cast<std::ptrdiff_t>(n));
      if (i == pick) out.samples[n] = w;
      if (options.keep_substeps)
        out.log.push_back({n, i == m ? partition.start(n)
                                     : partition.end(n) - static_cast<double>(i) * dtau,
                           w});
    }
    out.substeps[n] = m;
    out.sample_substep[n] = pick;
  }
  return out;
}

double sample_w(const DualGradientTrajectory& dual, std::size_t j, std::size_t n) {
  if (n >= dual.samples.size() || j >= dual.samples[n].size())
    throw std::out_of_range("dual sample index out of range");
  return dual.samples[n][j];
}

}  // namespace adjt
