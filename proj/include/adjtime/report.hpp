#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "adjtime/adaptivity.hpp"

namespace adjt {

/// Fixed scientific notation with 6 significant digits, e.g. 1.23457e-03.
std::string format_number(double value);

void write_steps_csv(std::ostream& out, const LevelReport& report);

void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const LevelReport& report);

/// Two-column CSVs for the CFL(t_n) and eta_k^n(t_n) panels.
void write_plot_csv(std::ostream& out, std::string_view x_name, std::string_view y_name,
                    std::span<const double> x, std::span<const double> y);
void emit_plot_data(const LevelReport& report, const std::filesystem::path& dir);

/// Splits steps.csv into plot_cfl.csv and plot_eta_k.csv, copying fields
/// verbatim so no value is re-rounded.
void emit_plots_from_steps(std::istream& steps, std::ostream& cfl_out, std::ostream& eta_out);

/// key = value lines; '#' starts a comment; blank lines ignored.
using ConfigMap = std::map<std::string, std::string>;
ConfigMap parse_config(std::istream& in);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace adjt
