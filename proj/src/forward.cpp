#include "adjtime/forward.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace adjt {

namespace {

void check_finite(std::span<const double> u, const char* what) {
  for (double v : u)
    if (!std::isfinite(v)) throw SolverError(std::string(what) + " produced a non-finite state");
}

double max_abs(std::span<const double> r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::vector<double> interface_fluxes(const ConservationLaw& law, std::span<const double> u,
                                     double inflow) {
  const std::size_t cells = u.size();
  std::vector<double> flux(cells + 1);
  flux[0] = law.numerical_flux(inflow, u[0]);
  for (std::size_t j = 1; j < cells; ++j) flux[j] = law.numerical_flux(u[j - 1], u[j]);
  flux[cells] = law.flux(u[cells - 1]);
  return flux;
}

std::vector<double> update_residual(const ConservationLaw& law, std::span<const double> u,
                                    std::span<const double> u_old, double k, double h,
                                    double inflow) {
  const auto flux = interface_fluxes(law, u, inflow);
  const double ratio = k / h;
  std::vector<double> r(u.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    r[j] = u[j] - u_old[j] + ratio * (flux[j + 1] - flux[j]);
  return r;
}

double max_wave_speed(std::span<const double> u, double inflow) {
  return std::max(max_abs(u), std::abs(inflow));
}

double max_wave_speed(const ConservationLaw& law, std::span<const double> u, double inflow) {
  if (law.kind() == ConservationLaw::Kind::LinearAdvection) return std::abs(law.advection_speed());
  return max_wave_speed(u, inflow);
}

StepResult explicit_step(const ConservationLaw& law, std::span<const double> u, double k,
                         double h, double inflow) {
  StepResult out;
  out.fluxes = interface_fluxes(law, u, inflow);
  out.cfl = cfl_of_step(k, h, max_wave_speed(law, u, inflow));
  const double ratio = k / h;
  out.state.resize(u.size());
  for (std::size_t j = 0; j < u.size(); ++j)
    out.state[j] = u[j] - ratio * (out.fluxes[j + 1] - out.fluxes[j]);
  check_finite(out.state, "explicit step");
  return out;
}

std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper,
                                      std::span<const double> rhs) {
  const std::size_t n = diag.size();
  std::vector<double> c(n), d(n), x(n);
  c[0] = n > 1 ? upper[0] / diag[0] : 0.0;
  d[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double denom = diag[i] - lower[i] * c[i - 1];
    c[i] = i + 1 < n ? upper[i] / denom : 0.0;
    d[i] = (rhs[i] - lower[i] * d[i - 1]) / denom;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

StepResult implicit_step(const ConservationLaw& law, std::span<const double> u, double k,
                         double h, double inflow, const NewtonOptions& options) {
  const std::size_t cells = u.size();
  const double ratio = k / h;
  State v(u.begin(), u.end());
  std::vector<double> lower(cells), diag(cells), upper(cells);

  StepResult out;
  out.cfl = cfl_of_step(k, h, max_wave_speed(law, u, inflow));
  auto residual = update_residual(law, v, u, k, h, inflow);
  double norm = max_abs(residual);
  int iterations = 0;
  // At least one Newton update, so a fixed point reports one iteration.
  do {
    if (iterations == options.max_iterations)
      throw SolverError("Newton did not converge in " + std::to_string(iterations) +
                            " iterations (residual " + std::to_string(norm) + ")",
                        -1, norm);
    // dR_j/dv: F_{j+1/2} depends on (v_j, v_{j+1}), F_{j-1/2} on (v_{j-1}, v_j).
    for (std::size_t j = 0; j < cells; ++j) {
      const double d_right_flux =
          j + 1 < cells ? law.d_numerical_flux_left(v[j]) : law.derivative(v[j]);
      const double d_left_flux = law.d_numerical_flux_right(v[j]);
      diag[j] = 1.0 + ratio * (d_right_flux - d_left_flux);
      lower[j] = j > 0 ? -ratio * law.d_numerical_flux_left(v[j - 1]) : 0.0;
      upper[j] = j + 1 < cells ? ratio * law.d_numerical_flux_right(v[j + 1]) : 0.0;
    }
    const auto delta = solve_tridiagonal(lower, diag, upper, residual);
    for (std::size_t j = 0; j < cells; ++j) v[j] -= delta[j];
    ++iterations;
    residual = update_residual(law, v, u, k, h, inflow);
    norm = max_abs(residual);
    if (!std::isfinite(norm)) throw SolverError("Newton iterate became non-finite", -1, norm);
  } while (norm > options.tolerance);

  out.newton = {iterations, norm};
  out.fluxes = interface_fluxes(law, v, inflow);
  out.state = std::move(v);
  return out;
}

State march_forward(const SpatialGrid& grid, const TimePartition& partition, const TestCase& tc,
                    const StepObserver& observer, const ForwardOptions& options) {
  if (partition.empty()) return tc.project_initial(grid);
  if (std::abs(partition.horizon() - tc.horizon) > 1e-12 * tc.horizon)
    throw std::invalid_argument("time partition does not end at the case horizon");
  if (grid.domain().lo != tc.domain.lo || grid.domain().hi != tc.domain.hi)
    throw std::invalid_argument("grid domain differs from the case domain");

  State u = tc.project_initial(grid);
  const double h = grid.h();
  for (std::size_t n = 0; n < partition.size(); ++n) {
    const double k = partition.step(n);
    StepResult step;
    try {
      if (partition.mode(n) == StepMode::Explicit)
        step = explicit_step(tc.law, u, k, h, tc.inflow(partition.start(n)));
      else
        step = implicit_step(tc.law, u, k, h, tc.inflow(partition.end(n)), options.newton);
    } catch (const SolverError& e) {
      throw SolverError("interval " + std::to_string(n) + ": " + e.what(),
                        static_cast<std::ptrdiff_t>(n), e.residual());
    }
    if (observer) observer(n, step, partition);
    u = std::move(step.state);
  }
  return u;
}

TimePartition uniform_cfl_partition(const SpatialGrid& grid, const TestCase& tc, double cfl,
                                    StepMode mode) {
  const auto u0 = tc.project_initial(grid);
  const double speed = max_wave_speed(tc.law, u0, tc.inflow_max);
  if (!(speed > 0.0)) throw std::invalid_argument("zero wave speed cannot size a CFL step");
  return uniform_partition(tc.horizon, cfl * grid.h() / speed, mode);
}

ForwardTrajectory run_forward(const SpatialGrid& grid, const TimePartition& partition,
                              const TestCase& tc, const ForwardOptions& options) {
  ForwardTrajectory traj{grid, partition, {}, {}, {}, {}, 0};
  traj.states.reserve(partition.size() + 1);
  traj.states.push_back(tc.project_initial(grid));
  traj.fluxes.reserve(partition.size());
  march_forward(
      grid, partition, tc,
      [&](std::size_t n, const StepResult& step, const TimePartition& p) {
        traj.states.push_back(step.state);
        traj.fluxes.push_back(step.fluxes);
        traj.step_cfl.push_back(step.cfl);
        traj.newton.push_back(step.newton);
        if (p.mode(n) == StepMode::Explicit && step.cfl > 1.0) ++traj.cfl_warnings;
      },
      options);
  return traj;
}

}  // namespace adjt
