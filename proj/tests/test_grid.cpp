#include "doctest.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "adjtime/grid.hpp"

using namespace adjt;

TEST_CASE("spatial grid sizes") {
  const auto g0 = build_spatial_grid(20, 0);
  CHECK(g0.cell_count() == 20);
  CHECK(g0.h() == doctest::Approx(0.05).epsilon(1e-15).scale(0.0));

  const auto g4 = build_spatial_grid(20, 4);
  CHECK(g4.cell_count() == 320);
  CHECK(g4.h() == doctest::Approx(0.003125).epsilon(1e-15).scale(0.0));

  const auto g = build_spatial_grid(2, 0);
  REQUIRE(g.edges().size() == 3);
  CHECK(g.edges()[0] == 0.0);
  CHECK(g.edges()[1] == 0.5);
  CHECK(g.edges()[2] == 1.0);
  CHECK(g.center(1) == 0.75);
}

TEST_CASE("refinement halves h") {
  for (int base : {2, 3, 20}) {
    for (int level = 0; level < 6; ++level) {
      const auto coarse = build_spatial_grid(base, level, {-1.0, 2.0});
      const auto fine = build_spatial_grid(base, level + 1, {-1.0, 2.0});
      CHECK(fine.h() == doctest::Approx(coarse.h() / 2).epsilon(1e-14).scale(0.0));
      CHECK(fine.cell_count() == 2 * coarse.cell_count());
      CHECK(fine.edges().back() == 2.0);
    }
  }
}

TEST_CASE("grid rejects bad input") {
  CHECK_THROWS_AS(build_spatial_grid(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_spatial_grid(20, -1), std::invalid_argument);
  CHECK_THROWS_AS(build_spatial_grid(20, 0, {1.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(build_spatial_grid(20, 60), std::invalid_argument);
}

TEST_CASE("uniform partition") {
  const auto p = uniform_partition(48.0, 0.038795, StepMode::Explicit);
  CHECK(p.size() == 1238);
  CHECK(p.horizon() == 48.0);

  const auto one = uniform_partition(1.0, 1.0, StepMode::Implicit);
  REQUIRE(one.size() == 1);
  CHECK(one.start(0) == 0.0);
  CHECK(one.end(0) == 1.0);
  CHECK(one.mode(0) == StepMode::Implicit);

  const auto rem = uniform_partition(1.0, 0.4, StepMode::Explicit);
  REQUIRE(rem.times().size() == 4);
  CHECK(rem.times()[1] == doctest::Approx(0.4));
  CHECK(rem.times()[2] == doctest::Approx(0.8));
  CHECK(rem.times()[3] == 1.0);
}

TEST_CASE("uniform partition lengths sum to the horizon") {
  for (double T : {1.0, 48.0, 3.3}) {
    for (double k : {0.7, 0.1, 0.038795, 1e-3, 0.33333333}) {
      if (k > T) continue;
      const auto p = uniform_partition(T, k, StepMode::Explicit);
      double sum = 0.0;
      for (std::size_t n = 0; n < p.size(); ++n) {
        CHECK(p.step(n) > 0.0);
        CHECK(p.step(n) <= k * (1 + 1e-9));
        sum += p.step(n);
      }
      CHECK(p.horizon() == T);
      CHECK(sum == doctest::Approx(T).epsilon(1e-12).scale(0.0));
    }
  }
}

TEST_CASE("time partition validation and lookup") {
  CHECK_THROWS_AS(TimePartition({0.5, 1.0}, {StepMode::Explicit}), std::invalid_argument);
  CHECK_THROWS_AS(TimePartition({0.0, 1.0, 1.0}, {StepMode::Explicit, StepMode::Explicit}),
                  std::invalid_argument);
  CHECK_THROWS_AS(TimePartition({0.0, 1.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(uniform_partition(1.0, 0.0, StepMode::Explicit), std::invalid_argument);

  const TimePartition p({0.0, 1.0, 3.0, 4.0},
                        {StepMode::Explicit, StepMode::Implicit, StepMode::Implicit});
  CHECK(p.locate(0.0) == 0);
  CHECK(p.locate(0.99) == 0);
  CHECK(p.locate(1.0) == 1);
  CHECK(p.locate(3.5) == 2);
  CHECK(p.locate(4.0) == 2);
  CHECK(p.count(StepMode::Implicit) == 2);
  CHECK(p.count(StepMode::Explicit) == 1);

  const TimePartition empty;
  CHECK(empty.empty());
  CHECK(empty.horizon() == 0.0);
}

TEST_CASE("cfl numbers") {
  CHECK(cfl_of_step(0.038795, 0.05, 1.0311) == doctest::Approx(0.8001).epsilon(1e-4).scale(0.0));
  CHECK(cfl_of_step(0.3, 0.05, 0.0) == 0.0);
  CHECK(cfl_of_step(0.05, 0.05, 1.0) == 1.0);
}

TEST_CASE("step mode names") {
  CHECK(to_string(StepMode::Explicit) == "explicit");
  CHECK(parse_step_mode("implicit") == StepMode::Implicit);
  CHECK_THROWS_AS(parse_step_mode("rk4"), std::invalid_argument);
}
