#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "adjtime/dual.hpp"
#include "cases.hpp"

using namespace adjt;

namespace {

DualGradientTrajectory solve_on(const TestCase& tc, int level, double cfl, bool keep,
                                ForwardTrajectory* out = nullptr) {
  const auto grid = build_spatial_grid(20, level, tc.domain);
  auto traj = run_forward(grid, uniform_cfl_partition(grid, tc, cfl), tc);
  auto dual = solve_dual_gradient(build_coefficient_field(traj, tc.law), tc, {0.8, keep});
  if (out) *out = std::move(traj);
  return dual;
}

}  // namespace

TEST_CASE("dual interface flux") {
  CHECK(dual_flux(1, 1, 3, 5) == -5);
  CHECK(dual_flux(-1, -1, 3, 5) == 3);
  CHECK(dual_flux(1, -1, 3, 5) == 0);
  // Consistency with g(w) = -a w.
  for (double a = -2; a <= 2; a += 0.5) CHECK(dual_flux(a, a, 0.7, 0.7) == doctest::Approx(-a * 0.7));
}

TEST_CASE("coefficient field follows the end state") {
  const auto tc = steady_shock();
  const auto grid = build_spatial_grid(20, 0);
  const auto traj = run_forward(grid, uniform_partition(48.0, 1.0, StepMode::Implicit), tc);
  const auto field = build_coefficient_field(traj, tc.law);
  REQUIRE(field.values.size() == traj.partition.size());
  for (std::size_t n = 0; n < field.values.size(); ++n)
    for (std::size_t j = 0; j < grid.cell_count(); ++j)
      CHECK(field.at(j, n) == traj.states[n + 1][j]);
  // Entropy-consistent sign: the coefficient drops across the shock.
  CHECK(field.at(9, 10) - field.at(10, 10) > 0.0);
  CHECK(field.at(10, 10) - field.at(11, 10) > 0.0);
  CHECK(field.at(8, 10) - field.at(11, 10) == doctest::Approx(2.0));

  ForwardTrajectory flat{grid, uniform_partition(1.0, 0.5, StepMode::Explicit),
                         {State(20, 0.3), State(20, 0.3), State(20, 0.3)}, {}, {}, {}, 0};
  const auto c = build_coefficient_field(flat, tc.law);
  for (const auto& row : c.values)
    for (double a : row) CHECK(a == 0.3);
}

TEST_CASE("zero weight gives zero gradient") {
  const auto dual = solve_on(testing::weightless(), 1, 0.8, false);
  for (const auto& row : dual.samples)
    for (double w : row) CHECK(w == 0.0);
  for (double w : dual.terminal) CHECK(w == 0.0);
  CHECK(sample_w(dual, 3, 2) == 0.0);
  CHECK_THROWS_AS(sample_w(dual, 999, 0), std::out_of_range);
  CHECK_THROWS_AS(sample_w(dual, 0, dual.samples.size()), std::out_of_range);
}

TEST_CASE("constant coefficient gradient converges at first order") {
  // Characteristics: w(x,t) = -(psi(x + T - t) - psi(x)) for a = 1.
  const auto tc = testing::advected_pulse(0.5);
  const BumpWeight psi;
  std::vector<double> errors;
  for (int level = 0; level < 4; ++level) {
    const auto dual = solve_on(tc, level, 0.8, true);
    const auto& first = dual.log.back();
    REQUIRE(first.interval == 0);
    REQUIRE(first.time == 0.0);
    const auto& grid = dual.grid;
    double err = 0.0;
    for (std::size_t j = 0; j < grid.cell_count(); ++j) {
      // Cell average of the exact gradient by 8-point midpoint rule.
      double avg = 0.0;
      for (int q = 0; q < 8; ++q) {
        const double x = grid.left(j) + grid.h() * (q + 0.5) / 8;
        avg += -(psi.value(x + tc.horizon) - psi.value(x)) / 8;
      }
      err += grid.h() * std::abs(first.w[j] - avg);
    }
    errors.push_back(err);
  }
  for (std::size_t i = 1; i < errors.size(); ++i)
    CHECK(errors[i - 1] / errors[i] == doctest::Approx(2.0).epsilon(0.2).scale(0.0));
}

TEST_CASE("dual mass identity per sub-step") {
  const std::size_t cells = 20;
  const double h = 0.05;
  std::vector<double> a(cells), w(cells), src(cells);
  const BumpWeight psi;
  for (std::size_t j = 0; j < cells; ++j) {
    const double x = (j + 0.5) * h;
    a[j] = x < 0.5 ? 1.0 : -1.0;
    w[j] = std::sin(7.0 * x) + 0.1 * j;
    src[j] = -psi.derivative(x);
  }
  for (int step = 0; step < 50; ++step) {
    const double dtau = 0.8 * h;
    const auto next = dual_substep(a, w, src, dtau, h);
    double change = 0.0, source = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < cells; ++j) {
      change += h * (next.w[j] - w[j]);
      source += h * src[j];
      scale += h * (std::abs(next.w[j]) + std::abs(w[j]));
    }
    const double expected = dtau * (next.left_flux - next.right_flux) + dtau * source;
    CHECK(std::abs(change - expected) <= 1e-12 * scale);
    w = next.w;
  }
}

TEST_CASE("samples sit at the interval midpoint") {
  const auto tc = perturbed_shock();
  const auto grid = build_spatial_grid(20, 0);
  const auto partition = uniform_partition(48.0, 0.5, StepMode::Implicit);
  const auto traj = run_forward(grid, partition, tc);
  const auto dual = solve_dual_gradient(build_coefficient_field(traj, tc.law), tc, {0.8, true});
  std::size_t pos = 0;
  for (std::size_t n = partition.size(); n-- > 0;) {
    // Log holds the entry state followed by m sub-step states.
    const std::size_t m = dual.substeps[n];
    REQUIRE(dual.log[pos].interval == n);
    const auto& picked = dual.log[pos + dual.sample_substep[n]];
    CHECK(picked.w == dual.samples[n]);
    const double mid = 0.5 * (partition.start(n) + partition.end(n));
    const double dtau = partition.step(n) / static_cast<double>(m);
    CHECK(std::abs(picked.time - mid) <= 0.5 * dtau + 1e-12);
    for (std::size_t i = 0; i <= m; ++i)
      CHECK(std::abs(picked.time - mid) <= std::abs(dual.log[pos + i].time - mid) + 1e-12);
    CHECK(0.8 * grid.h() >= dtau * 1.0 - 1e-12);
    pos += m + 1;
  }
  CHECK(pos == dual.log.size());
}

TEST_CASE("gradient away from the shock is grid independent") {
  const auto tc = perturbed_shock();
  const auto coarse = solve_on(tc, 0, 0.8, false);
  const auto fine = solve_on(tc, 1, 0.8, false);
  const double hc = coarse.grid.h();

  double peak_c = 0.0, peak_f = 0.0;
  for (double t : {6.0, 24.0, 40.0, 46.0}) {
    const auto nc = coarse.partition.locate(t);
    const auto nf = fine.partition.locate(t);
    double scale = 0.0;
    for (double w : coarse.samples[nc]) scale = std::max(scale, std::abs(w));
    for (std::size_t j = 0; j < coarse.grid.cell_count(); ++j) {
      if (std::abs(coarse.grid.center(j) - 0.5) <= 3 * hc) continue;
      const double wc = coarse.samples[nc][j];
      const double wf = 0.5 * (fine.samples[nf][2 * j] + fine.samples[nf][2 * j + 1]);
      if (std::abs(wc) < 0.05 * scale) continue;
      CHECK(wf == doctest::Approx(wc).epsilon(0.2).scale(0.0));
    }
  }
  for (const auto& row : coarse.samples)
    for (double w : row) peak_c = std::max(peak_c, std::abs(w));
  for (const auto& row : fine.samples)
    for (double w : row) peak_f = std::max(peak_f, std::abs(w));
  // At most 1/h growth at the shock.
  CHECK(peak_f * fine.grid.h() <= 1.1 * peak_c * hc);
}

TEST_CASE("dual options are validated") {
  const auto tc = steady_shock();
  const auto grid = build_spatial_grid(20, 0);
  const auto traj = run_forward(grid, uniform_partition(48.0, 4.0, StepMode::Implicit), tc);
  const auto field = build_coefficient_field(traj, tc.law);
  CHECK_THROWS_AS(solve_dual_gradient(field, tc, {0.0, false}), std::invalid_argument);
  CHECK_THROWS_AS(solve_dual_gradient(field, tc, {1.5, false}), std::invalid_argument);
  const auto dual = solve_dual_gradient(field, tc, {1.0, false});
  for (std::size_t n = 0; n < dual.substeps.size(); ++n) {
    const double m = static_cast<double>(dual.substeps[n]);
    CHECK(4.0 / m <= grid.h() * (1 + 1e-12));
    CHECK(4.0 / (m - 1) > grid.h());
  }
}
