#include "doctest.h"

#include <cmath>
#include <numbers>

#include "adjtime/grid.hpp"
#include "adjtime/testcase.hpp"

using namespace adjt;

namespace {

// Straight re-evaluation of the piecewise shock path.
double path_oracle(double t) {
  auto bump = [](double amp, double a, double b, double t) {
    return amp * std::pow(t - a, 4) * std::pow(t - b, 4) / 6561.0 *
           std::sin(2.0 * std::numbers::pi / 3.0 * (t - a));
  };
  if (t > 12 && t < 18) return 0.5 + bump(7.5e-3, 12, 18, t);
  if (t > 30 && t < 36) return 0.5 + bump(0.5e-3, 30, 36, t);
  return 0.5;
}

// Inflow by scanning tau on a fine grid and refining with secant steps.
double inflow_oracle(double t0) {
  const ShockPath path;
  auto dep = [&](double tau) {
    return tau - path_oracle(tau) / (1.0 + 2.0 * path.speed(tau)) - t0;
  };
  double a = std::max(0.0, t0);
  const double stop = std::min(48.0, t0 + 1.0);
  for (double b = a + 1e-3; b <= stop; a = b, b += 1e-3) {
    if (dep(a) <= 0.0 && dep(b) >= 0.0) {
      for (int i = 0; i < 200 && b - a > 1e-14; ++i) {
        const double m = 0.5 * (a + b);
        (dep(m) < 0.0 ? a : b) = m;
      }
      return 1.0 + 2.0 * path.speed(0.5 * (a + b));
    }
  }
  return 1.0;
}

}  // namespace

TEST_CASE("shock position") {
  CHECK(shock_position(6.0) == 0.5);
  CHECK(shock_position(15.0) == doctest::Approx(0.5).epsilon(1e-14).scale(0.0));
  CHECK(shock_position(12.75) == doctest::Approx(0.5002748).epsilon(1e-7).scale(0.0));
  for (double t = 0.0; t <= 48.0; t += 0.173)
    CHECK(shock_position(t) == doctest::Approx(path_oracle(t)).epsilon(1e-14).scale(0.0));
  CHECK_THROWS_AS(shock_position(-0.1), std::out_of_range);
  CHECK_THROWS_AS(shock_position(48.5), std::out_of_range);
}

TEST_CASE("shock speed") {
  CHECK(shock_speed(6.0) == 0.0);
  CHECK(shock_speed(12.0) == 0.0);
  CHECK(shock_speed(18.0) == 0.0);
  for (double t = 11.9; t < 36.2; t += 0.0731) {
    const double d = 1e-5;
    const double fd = (path_oracle(t + d) - path_oracle(t - d)) / (2 * d);
    CHECK(std::abs(shock_speed(t) - fd) <= 1e-8);
  }
  double peak = 0.0;
  for (double t = 12.0; t <= 18.0; t += 1e-3) peak = std::max(peak, std::abs(2 * shock_speed(t)));
  CHECK(peak == doctest::Approx(0.03).epsilon(0.1).scale(0.0));
}

TEST_CASE("left boundary value") {
  CHECK(left_boundary_value(5.0) == 1.0);
  for (double t = 11.0; t < 36.5; t += 0.377)
    CHECK(left_boundary_value(t) == doctest::Approx(inflow_oracle(t)).epsilon(1e-9).scale(0.0));

  double first = 0.0, second = 0.0;
  double first_lo = 48.0, first_hi = 0.0, second_lo = 48.0, second_hi = 0.0;
  for (double t = 0.0; t <= 48.0; t += 5e-3) {
    const double d = left_boundary_value(t) - 1.0;
    if (t < 24.0) {
      first = std::max(first, d);
      if (std::abs(d) > 1e-9) first_lo = std::min(first_lo, t), first_hi = std::max(first_hi, t);
    } else {
      second = std::max(second, d);
      if (std::abs(d) > 1e-9) second_lo = std::min(second_lo, t), second_hi = std::max(second_hi, t);
    }
  }
  CHECK(first == doctest::Approx(0.03).epsilon(0.1).scale(0.0));
  CHECK(second == doctest::Approx(0.002).epsilon(0.1).scale(0.0));
  // The two wave packets arrive about half a time unit before the shock moves.
  CHECK(first_lo > 11.0);
  CHECK(first_hi < 18.0);
  CHECK(second_lo > 29.0);
  CHECK(second_hi < 36.0);
}

TEST_CASE("characteristics validation") {
  const auto ok = validate_characteristics(ShockPath{});
  CHECK(ok.ok());
  // Dense sampling of 1 + 2 s'(t) from the path oracle.
  double lowest = 1.0;
  for (double t = 12.0; t <= 36.0; t += 1e-4) {
    const double d = 1e-6;
    lowest = std::min(lowest, 1.0 + (path_oracle(t + d) - path_oracle(t - d)) / d);
  }
  CHECK(ok.min_upstream_state == doctest::Approx(lowest).epsilon(1e-6).scale(0.0));
  CHECK(ok.min_upstream_state > 0.95);
  CHECK(ok.min_upstream_state < 1.0);

  const auto flat = validate_characteristics(ShockPath{0.0, 0.0, 48.0});
  CHECK(flat.ok());
  CHECK(flat.min_departure_slope == doctest::Approx(1.0));

  const auto wild = validate_characteristics(ShockPath{0.75, 0.05, 48.0});
  CHECK_FALSE(wild.ok());
  CHECK_THROWS_AS(perturbed_shock(ShockPath{0.75, 0.05, 48.0}), std::invalid_argument);
}

TEST_CASE("bump weight") {
  const BumpWeight psi;
  CHECK(psi.value(0.45) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15).scale(0.0));
  CHECK(psi.derivative(0.45) == 0.0);
  CHECK(psi.value(0.25) == 0.0);
  CHECK(psi.value(0.65) == 0.0);
  CHECK(std::abs(psi.value(0.55) - 0.26360) <= 5e-6);
  CHECK(psi.value(0.65 - 1e-12) == 0.0);
  CHECK(std::isfinite(psi.derivative(0.25 + 1e-300)));

  for (double x = 0.26; x < 0.65; x += 0.0137) {
    const double d = 1e-6;
    const double fd = (psi.value(x + d) - psi.value(x - d)) / (2 * d);
    CHECK(psi.derivative(x) == doctest::Approx(fd).epsilon(1e-6).scale(1e-6));
  }

  // Cell integrals against a fine midpoint sum.
  const auto grid = build_spatial_grid(20, 2);
  for (std::size_t j = 0; j < grid.cell_count(); ++j) {
    const int m = 4000;
    double s = 0.0;
    const double a = grid.left(j), b = grid.right(j);
    for (int i = 0; i < m; ++i) s += psi.value(a + (b - a) * (i + 0.5) / m);
    CHECK(std::abs(psi.integral(a, b) - s * (b - a) / m) <= 1e-9);
  }
}

TEST_CASE("inflow table") {
  const InflowTable table([](double t) { return t * t; }, 2.0, 0.5);
  CHECK(table(0.0) == 0.0);
  CHECK(table(0.25) == doctest::Approx(0.125));
  CHECK(table(2.0) == 4.0);
  CHECK(table.max_value() == 4.0);
  CHECK(table.min_value() == 0.0);
}

TEST_CASE("benchmark cases") {
  const auto tc = perturbed_shock();
  CHECK(tc.horizon == 48.0);
  CHECK(tc.inflow_max == doctest::Approx(1.0314).epsilon(1e-4).scale(0.0));
  CHECK(tc.inflow(14.0) == doctest::Approx(left_boundary_value(14.0)).epsilon(1e-7).scale(0.0));
  CHECK(tc.inflow(3.0) == 1.0);

  const auto g = build_spatial_grid(20, 0);
  const auto u0 = tc.project_initial(g);
  CHECK(u0[9] == 1.0);
  CHECK(u0[10] == -1.0);

  const auto odd = build_spatial_grid(5, 0);
  const auto v0 = steady_shock().project_initial(odd);
  CHECK(v0[2] == doctest::Approx(0.0).scale(1.0));
  CHECK(v0[0] == 1.0);
  CHECK(v0[4] == -1.0);
  CHECK(steady_shock().inflow(20.0) == 1.0);
}
