#include "adjtime/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace adjt {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", value);
  return buf;
}

void write_steps_csv(std::ostream& out, const LevelReport& report) {
  const auto& s = report.series;
  out << "t_n,k_n,cfl_n,mode,eta_k_n,eta_h_n\n";
  for (std::size_t n = 0; n < s.time.size(); ++n) {
    out << format_number(s.time[n]) << ',' << format_number(s.step[n]) << ','
        << format_number(s.cfl[n]) << ',' << to_string(s.mode[n]) << ','
        << format_number(s.eta_k_density[n]) << ',' << format_number(s.eta_h_density[n]) << '\n';
  }
}

void write_summary_header(std::ostream& out) {
  out << "level,cells,dx,dt_min,dt_max,N,N_explicit,N_implicit,tol_k,eta_k_bar,eta_h_bar,"
         "eta_bar,eta_k,eta_h,J_h,J_ref,theta\n";
}

void write_summary_row(std::ostream& out, const LevelReport& report) {
  const auto& b = report.breakdown;
  const auto& steps = report.series.step;
  const double dt_min = steps.empty() ? 0.0 : *std::min_element(steps.begin(), steps.end());
  const double dt_max = steps.empty() ? 0.0 : *std::max_element(steps.begin(), steps.end());
  const auto& p = report.plan.partition;
  out << report.level << ',' << report.cells << ',' << format_number(report.h) << ','
      << format_number(dt_min) << ',' << format_number(dt_max) << ',' << p.size() << ','
      << p.count(StepMode::Explicit) << ',' << p.count(StepMode::Implicit) << ','
      << (report.tol_k ? format_number(*report.tol_k) : "") << ','
      << format_number(b.eta_k_bar) << ',' << format_number(b.eta_h_bar) << ','
      << format_number(b.eta_bar) << ',' << format_number(b.eta_k) << ','
      << format_number(b.eta_h) << ',' << format_number(b.functional) << ','
      << (report.reference ? format_number(*report.reference) : "") << ','
      << (report.efficiency && report.efficiency->defined ? format_number(report.efficiency->value)
                                                          : "")
      << '\n';
}

void write_plot_csv(std::ostream& out, std::string_view x_name, std::string_view y_name,
                    std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("plot columns differ in length");
  out << x_name << ',' << y_name << '\n';
  for (std::size_t i = 0; i < x.size(); ++i)
    out << format_number(x[i]) << ',' << format_number(y[i]) << '\n';
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void emit_plot_data(const LevelReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto cfl = open_for_write(dir / "plot_cfl.csv");
  write_plot_csv(cfl, "t_n", "cfl_n", report.series.time, report.series.cfl);
  auto eta = open_for_write(dir / "plot_eta_k.csv");
  write_plot_csv(eta, "t_n", "eta_k_n", report.series.time, report.series.eta_k_density);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

void emit_plots_from_steps(std::istream& steps, std::ostream& cfl_out, std::ostream& eta_out) {
  std::string line;
  if (!std::getline(steps, line)) throw std::runtime_error("steps.csv is empty");
  const auto header = split_csv_line(line);
  auto column = [&](std::string_view name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::runtime_error("steps.csv lacks column " + std::string(name));
    return static_cast<std::size_t>(it - header.begin());
  };
  const auto t_col = column("t_n");
  const auto cfl_col = column("cfl_n");
  const auto eta_col = column("eta_k_n");
  cfl_out << "t_n,cfl_n\n";
  eta_out << "t_n,eta_k_n\n";
  while (std::getline(steps, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) throw std::runtime_error("malformed steps.csv row: " + line);
    cfl_out << f[t_col] << ',' << f[cfl_col] << '\n';
    eta_out << f[t_col] << ',' << f[eta_col] << '\n';
  }
}

ConfigMap parse_config(std::istream& in) {
  ConfigMap map;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    map[key] = value;
  }
  return map;
}

}  // namespace adjt
