#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "adjtime/forward.hpp"
#include "adjtime/grid.hpp"
#include "adjtime/testcase.hpp"

namespace adjt {

/// Linearization coefficient a_j^n = f'(u_j^n) per forward space-time cell,
/// taken from the end-of-interval state. Indexed [interval][cell].
struct CoefficientField {
  SpatialGrid grid;
  TimePartition partition;
  std::vector<std::vector<double>> values;

  double at(std::size_t j, std::size_t n) const { return values.at(n).at(j); }
};

CoefficientField build_coefficient_field(const ForwardTrajectory& traj,
                                         const ConservationLaw& law);

/// Upwind interface flux for g(w) = -a w marched in backward time:
/// with a = (aL + aR)/2 the flux is -(max(a,0) wR + min(a,0) wL).
inline double dual_flux(double aL, double aR, double wL, double wR) {
  const double a = 0.5 * (aL + aR);
  return -(std::max(a, 0.0) * wR + std::min(a, 0.0) * wL);
}

struct DualSubstep {
  std::vector<double> w;
  double left_flux = 0.0;   // G_{1/2}
  double right_flux = 0.0;  // G_{J+1/2}
};

/// One explicit backward-time step of dw/dtau - d_x(a w) = source with zero
/// ghost values for w and the adjacent cell's coefficient at the boundaries.
DualSubstep dual_substep(std::span<const double> a, std::span<const double> w,
                         std::span<const double> source, double dtau, double h);

struct DualOptions {
  double cfl = 0.8;
  bool keep_substeps = false;
};

struct DualLogEntry {
  std::size_t interval;
  double time;  // forward time t of the stored state
  std::vector<double> w;
};

struct DualGradientTrajectory {
  SpatialGrid grid;
  TimePartition partition;
  std::vector<std::vector<double>> samples;  // [interval][cell]
  std::vector<double> terminal;              // w(., T)
  std::vector<std::size_t> substeps;         // per interval
  std::vector<std::size_t> sample_substep;   // sub-step index of the sample within the interval
  std::vector<DualLogEntry> log;             // only with keep_substeps
};

/// Marches w backward from w(., T) = 0. Inside forward interval n the
/// coefficient is frozen and sub-steps dtau <= cfl h / max|a| are taken; the
/// sample for interval n is the sub-step state nearest to the interval midpoint.
DualGradientTrajectory solve_dual_gradient(const CoefficientField& coeff, const TestCase& tc,
                                           const DualOptions& options = {});

double sample_w(const DualGradientTrajectory& dual, std::size_t j, std::size_t n);

}  // namespace adjt
