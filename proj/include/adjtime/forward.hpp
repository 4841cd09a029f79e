#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adjtime/grid.hpp"
#include "adjtime/law.hpp"
#include "adjtime/testcase.hpp"

namespace adjt {

using State = std::vector<double>;

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::ptrdiff_t interval = -1, double residual = 0.0)
      : std::runtime_error(what), interval_(interval), residual_(residual) {}

  std::ptrdiff_t interval() const { return interval_; }
  double residual() const { return residual_; }

 private:
  std::ptrdiff_t interval_;
  double residual_;
};

struct NewtonOptions {
  double tolerance = 1e-12;
  int max_iterations = 50;
};

struct NewtonStats {
  int iterations = 0;
  double residual = 0.0;
};

struct StepResult {
  State state;
  std::vector<double> fluxes;  // cell_count + 1 interface fluxes
  double cfl = 0.0;            // k * max speed / h of the sizing state
  NewtonStats newton;          // untouched for explicit steps
};

/// Interface fluxes F_{1/2} ... F_{J+1/2}: left ghost value `inflow`, right
/// boundary pure upwind f(u_J).
std::vector<double> interface_fluxes(const ConservationLaw& law, std::span<const double> u,
                                     double inflow);

/// u_j - u_old_j + (k/h)(F_{j+1/2}(u) - F_{j-1/2}(u)).
std::vector<double> update_residual(const ConservationLaw& law, std::span<const double> u,
                                    std::span<const double> u_old, double k, double h,
                                    double inflow);

double max_wave_speed(std::span<const double> u, double inflow);
double max_wave_speed(const ConservationLaw& law, std::span<const double> u, double inflow);

StepResult explicit_step(const ConservationLaw& law, std::span<const double> u, double k,
                         double h, double inflow);

StepResult implicit_step(const ConservationLaw& law, std::span<const double> u, double k,
                         double h, double inflow, const NewtonOptions& options = {});

/// Solves the tridiagonal system lower_i x_{i-1} + diag_i x_i + upper_i x_{i+1} = rhs_i.
/// lower[0] and upper[n-1] are ignored.
std::vector<double> solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                                      std::span<const double> upper, std::span<const double> rhs);

struct ForwardTrajectory {
  SpatialGrid grid;
  TimePartition partition;
  std::vector<State> states;                 // N + 1 entries
  std::vector<std::vector<double>> fluxes;   // N entries of cell_count + 1
  std::vector<double> step_cfl;              // N entries, sized from the stepping state
  std::vector<NewtonStats> newton;           // N entries
  std::size_t cfl_warnings = 0;              // explicit steps with CFL > 1
};

struct ForwardOptions {
  NewtonOptions newton;
};

/// Called after every step with the interval index, its result and the
/// interval length. Used for streaming evaluations that do not keep states.
using StepObserver =
    std::function<void(std::size_t n, const StepResult& step, const TimePartition& partition)>;

/// Marches through the partition without storing states; returns the final state.
State march_forward(const SpatialGrid& grid, const TimePartition& partition, const TestCase& tc,
                    const StepObserver& observer, const ForwardOptions& options = {});

/// Uniform partition with k = cfl h / max(|u_0|, max_t |g|).
TimePartition uniform_cfl_partition(const SpatialGrid& grid, const TestCase& tc, double cfl,
                                    StepMode mode = StepMode::Explicit);

ForwardTrajectory run_forward(const SpatialGrid& grid, const TimePartition& partition,
                              const TestCase& tc, const ForwardOptions& options = {});

}  // namespace adjt
