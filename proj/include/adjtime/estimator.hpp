#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "adjtime/dual.hpp"
#include "adjtime/forward.hpp"
#include "adjtime/testcase.hpp"

namespace adjt {

/// Space-time split of the adjoint error representation. Cell arrays are
/// indexed [interval][cell].
struct ErrorBreakdown {
  std::vector<std::vector<double>> eta_k_cells;
  std::vector<std::vector<double>> eta_h_cells;
  std::vector<double> eta_k_density;  // (1/k_n) sum_j |eta_k^{jn}|
  std::vector<double> eta_h_density;
  double eta_k_bar = 0.0;
  double eta_h_bar = 0.0;
  double eta_bar = 0.0;
  double eta_k = 0.0;  // signed sums
  double eta_h = 0.0;
  double functional = 0.0;  // J(u_h)
};

/// W_j = integral of psi over cell j (5-point Gauss).
std::vector<double> cell_weights(const SpatialGrid& grid, const BumpWeight& weight);

/// J_h = sum_n k_n sum_j u_j^n W_j with the end-of-interval state.
double evaluate_functional(const ForwardTrajectory& traj, const TestCase& tc);

/// -(k/2) h (u^n - u^{n-1}) (psi - a w): time-jump residual against the
/// time-projection error of the linear dual model.
inline double time_error_term(double k, double h, double jump, double psi, double a, double w) {
  return -0.5 * k * h * jump * (psi - a * w);
}

/// k (h/2) w (F_{j+1/2} + F_{j-1/2} - 2 f(u_j)): edge residuals against the
/// space-projection error (x - x_j) w.
inline double space_error_term(double k, double h, double w, double flux_left, double flux_right,
                               double cell_flux) {
  return k * 0.5 * h * w * (flux_right + flux_left - 2.0 * cell_flux);
}

double cell_time_error(std::size_t j, std::size_t n, const ForwardTrajectory& traj,
                       const CoefficientField& coeff, const DualGradientTrajectory& dual,
                       const TestCase& tc);

double cell_space_error(std::size_t j, std::size_t n, const ForwardTrajectory& traj,
                        const DualGradientTrajectory& dual, const ConservationLaw& law);

ErrorBreakdown assemble_breakdown(const ForwardTrajectory& traj, const CoefficientField& coeff,
                                  const DualGradientTrajectory& dual, const TestCase& tc);

struct EfficiencyIndex {
  double value = 0.0;
  bool defined = false;  // false when |J_ref - J_h| < 1e-14
};

EfficiencyIndex efficiency_index(const ErrorBreakdown& breakdown, double reference);

/// J from a uniform explicit run at `ref_level` (base 20 cells, CFL 0.8).
/// Results are cached per case name and level.
double reference_functional(const TestCase& tc, int ref_level = 6, int base_cells = 20,
                            double cfl = 0.8);

}  // namespace adjt
