#include "doctest.h"

#include <sstream>
#include <string>

#include "adjtime/report.hpp"

using namespace adjt;

namespace {

LevelReport small_run() {
  const auto tc = perturbed_shock();
  const auto grid = build_spatial_grid(20, 0);
  AnalysisOptions options;
  options.reference_level.reset();
  return analyze_run(grid, uniform_cfl_partition(grid, tc, 0.8), tc, options);
}

}  // namespace

TEST_CASE("number format") {
  CHECK(format_number(1.234567891) == "1.23457e+00");
  CHECK(format_number(-2.5e-7) == "-2.50000e-07");
  CHECK(format_number(0.0) == "0.00000e+00");
}

TEST_CASE("steps csv") {
  const auto r = small_run();
  std::ostringstream a, b;
  write_steps_csv(a, r);
  write_steps_csv(b, small_run());
  CHECK(a.str() == b.str());

  std::istringstream in(a.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "t_n,k_n,cfl_n,mode,eta_k_n,eta_h_n");
  std::size_t rows = 0;
  double eta_k_bar = 0.0;
  while (std::getline(in, line)) {
    const auto f = split_csv_line(line);
    REQUIRE(f.size() == 6);
    CHECK(f[3] == "explicit");
    eta_k_bar += std::stod(f[1]) * std::stod(f[4]);
    ++rows;
  }
  CHECK(rows == 1238);
  // Six significant digits per field bound the rounding drift.
  CHECK(eta_k_bar == doctest::Approx(r.breakdown.eta_k_bar).epsilon(1e-4).scale(0.0));
}

TEST_CASE("summary csv") {
  const auto r = small_run();
  std::ostringstream out;
  write_summary_header(out);
  write_summary_row(out, r);
  std::istringstream in(out.str());
  std::string head, row;
  std::getline(in, head);
  std::getline(in, row);
  const auto h = split_csv_line(head);
  const auto f = split_csv_line(row);
  REQUIRE(h.size() == f.size());
  auto field = [&](const std::string& name) {
    for (std::size_t i = 0; i < h.size(); ++i)
      if (h[i] == name) return f[i];
    FAIL("missing column " << name);
    return std::string{};
  };
  CHECK(field("level") == "0");
  CHECK(field("cells") == "20");
  CHECK(field("N") == "1238");
  CHECK(field("N_implicit") == "0");
  CHECK(field("tol_k").empty());
  CHECK(field("theta").empty());
  const double sum = std::stod(field("eta_k_bar")) + std::stod(field("eta_h_bar"));
  CHECK(std::stod(field("eta_bar")) == doctest::Approx(sum).epsilon(1e-5).scale(0.0));
}

TEST_CASE("plot data from steps") {
  const auto r = small_run();
  std::ostringstream steps;
  write_steps_csv(steps, r);
  std::istringstream in(steps.str());
  std::ostringstream cfl, eta;
  emit_plots_from_steps(in, cfl, eta);

  std::ostringstream direct;
  write_plot_csv(direct, "t_n", "cfl_n", r.series.time, r.series.cfl);
  CHECK(cfl.str() == direct.str());

  std::istringstream header_only("t_n,k_n,cfl_n,mode,eta_k_n,eta_h_n\n");
  std::ostringstream c2, e2;
  emit_plots_from_steps(header_only, c2, e2);
  CHECK(c2.str() == "t_n,cfl_n\n");
  CHECK(e2.str() == "t_n,eta_k_n\n");

  std::istringstream empty("");
  CHECK_THROWS(emit_plots_from_steps(empty, c2, e2));
  std::istringstream wrong("a,b\n1,2\n");
  CHECK_THROWS(emit_plots_from_steps(wrong, c2, e2));
}

TEST_CASE("config parsing") {
  std::istringstream in("# comment\nlevels = 0,1\n\n  cfl=0.8   # trailing\nrule = halve\n");
  const auto cfg = parse_config(in);
  CHECK(cfg.size() == 3);
  CHECK(cfg.at("levels") == "0,1");
  CHECK(cfg.at("cfl") == "0.8");
  CHECK(cfg.at("rule") == "halve");
  std::istringstream bad("just words\n");
  CHECK_THROWS_AS(parse_config(bad), std::invalid_argument);
  std::istringstream nokey(" = 3\n");
  CHECK_THROWS_AS(parse_config(nokey), std::invalid_argument);
}
