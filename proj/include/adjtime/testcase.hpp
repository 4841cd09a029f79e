#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "adjtime/grid.hpp"
#include "adjtime/law.hpp"

namespace adjt {

/// Shock trajectory of the perturbed stationary shock: s(t) = 0.5 outside the
/// windows (12, 18) and (30, 36), inside them 0.5 + theta_i(t) sin(2pi/3 (t - t_i))
/// with theta_i(t) = amp_i (t - a)^4 (t - b)^4 / 6561.
struct ShockPath {
  double first_amplitude = 7.5e-3;
  double second_amplitude = 0.5e-3;
  double horizon = 48.0;

  double position(double t) const;
  double speed(double t) const;

  /// Pre-shock state from Rankine-Hugoniot with post-shock state -1.
  double upstream_state(double tau) const { return 1.0 + 2.0 * speed(tau); }
  /// Time at which the characteristic hitting the shock at tau left x = 0.
  double departure_time(double tau) const {
    return tau - position(tau) / upstream_state(tau);
  }
};

double shock_position(double t);
double shock_speed(double t);

/// Left inflow value g(t0) obtained by tracing the straight characteristic
/// from x = 0 to the shock. Solves departure_time(tau) = t0 to |dtau| <= 1e-12.
double left_boundary_value(double t0, const ShockPath& path = {});

struct CharacteristicReport {
  bool monotone = true;         // departure time strictly increasing in tau
  bool positive_speed = true;   // upstream state stays > 0
  double min_upstream_state = 0.0;
  double max_upstream_state = 0.0;
  double min_departure_slope = 0.0;  // min d t0 / d tau over the samples
  std::size_t samples = 0;
  bool ok() const { return monotone && positive_speed; }
};

CharacteristicReport validate_characteristics(const ShockPath& path, double spacing = 1e-3);

/// Smooth bump weight psi(x) = exp(-1/(1 - y^2)), y = (x - center)/half_width.
struct BumpWeight {
  double center = 0.45;
  double half_width = 0.2;

  std::pair<double, double> value_and_derivative(double x) const;
  double value(double x) const { return value_and_derivative(x).first; }
  double derivative(double x) const { return value_and_derivative(x).second; }
  Interval support() const { return {center - half_width, center + half_width}; }
  /// Integral over [a, b] with 5-point Gauss-Legendre quadrature.
  double integral(double a, double b) const;
};

inline std::pair<double, double> weight_and_derivative(double x) {
  return BumpWeight{}.value_and_derivative(x);
}

/// Inflow values tabulated on a uniform time grid, linearly interpolated.
class InflowTable {
 public:
  InflowTable(std::function<double(double)> exact, double horizon, double spacing);

  double operator()(double t) const;
  double max_value() const { return max_; }
  double min_value() const { return min_; }

 private:
  double spacing_;
  std::vector<double> values_;
  double max_;
  double min_;
};

/// Everything the forward, dual and estimator passes need to know about a
/// problem instance. Immutable once built.
struct TestCase {
  std::string name;
  ConservationLaw law = ConservationLaw::burgers();
  Interval domain;
  double horizon = 48.0;
  /// Exact average of the initial data over [a, b].
  std::function<double(double, double)> initial_average;
  /// Left boundary data g(t).
  std::function<double(double)> inflow;
  /// Upper bound of |g| over [0, T], used for uniform CFL sizing.
  double inflow_max = 1.0;
  BumpWeight weight;

  std::vector<double> project_initial(const SpatialGrid& grid) const;
};

/// The benchmark: Burgers on [0,1] x [0,48], step data 1 | -1 at x = 0.5,
/// inflow derived from `path`.
TestCase perturbed_shock(const ShockPath& path = {});
/// Same data without perturbation: g = 1, steady shock at 0.5.
TestCase steady_shock();

}  // namespace adjt
