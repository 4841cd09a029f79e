#include "adjtime/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace adjt {

SpatialGrid::SpatialGrid(int base_cells, int level, Interval domain)
    : base_cells_(base_cells), level_(level), domain_(domain) {
  if (base_cells < 2) throw std::invalid_argument("base_cells must be at least 2");
  if (level < 0) throw std::invalid_argument("level must be non-negative");
  if (!(domain.hi > domain.lo) || !std::isfinite(domain.lo) || !std::isfinite(domain.hi))
    throw std::invalid_argument("degenerate spatial domain");
  // h >= 2^-40 * |D| means base_cells * 2^level <= 2^40.
  const double cells = std::ldexp(static_cast<double>(base_cells), level);
  if (cells > std::ldexp(1.0, 40))
    throw std::invalid_argument("refinement level " + std::to_string(level) +
                                " underflows the cell width");

  const auto n = static_cast<std::size_t>(cells);
  h_ = domain.length() / static_cast<double>(n);
  edges_.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) edges_[j] = domain.lo + static_cast<double>(j) * h_;
  edges_.back() = domain.hi;
}

SpatialGrid build_spatial_grid(int base_cells, int level, Interval domain) {
  return SpatialGrid(base_cells, level, domain);
}

std::string_view to_string(StepMode mode) {
  return mode == StepMode::Explicit ? "explicit" : "implicit";
}

StepMode parse_step_mode(std::string_view text) {
  if (text == "explicit") return StepMode::Explicit;
  if (text == "implicit") return StepMode::Implicit;
  throw std::invalid_argument("unknown step mode '" + std::string(text) + "'");
}

TimePartition::TimePartition(std::vector<double> times, std::vector<StepMode> modes)
    : times_(std::move(times)), modes_(std::move(modes)) {
  if (times_.empty()) throw std::invalid_argument("time partition needs at least t_0");
  if (times_.front() != 0.0) throw std::invalid_argument("time partition must start at 0");
  if (modes_.size() + 1 != times_.size())
    throw std::invalid_argument("time partition needs one mode per interval");
  for (std::size_t n = 1; n < times_.size(); ++n) {
    if (!(times_[n] > times_[n - 1]))
      throw std::invalid_argument("time partition must be strictly increasing");
  }
}

std::size_t TimePartition::count(StepMode mode) const {
  return static_cast<std::size_t>(std::count(modes_.begin(), modes_.end(), mode));
}

std::size_t TimePartition::locate(double t) const {
  if (modes_.empty()) throw std::out_of_range("empty time partition");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  auto idx = static_cast<std::ptrdiff_t>(it - times_.begin()) - 1;
  idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(modes_.size()) - 1);
  return static_cast<std::size_t>(idx);
}

TimePartition uniform_partition(double horizon, double k, StepMode mode) {
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
  if (!(k > 0.0)) throw std::invalid_argument("timestep must be positive");
  if (k > horizon) throw std::invalid_argument("timestep exceeds horizon");

  auto steps = static_cast<std::size_t>(std::ceil(horizon / k));
  // A remainder below rounding level would create a sliver interval.
  if (steps > 1 && horizon - static_cast<double>(steps - 1) * k <= 1e-9 * k) --steps;
  steps = std::max<std::size_t>(steps, 1);

  std::vector<double> times(steps + 1);
  for (std::size_t n = 0; n < steps; ++n) times[n] = static_cast<double>(n) * k;
  times[steps] = horizon;
  return TimePartition(std::move(times), std::vector<StepMode>(steps, mode));
}

TimePartition partition_from_times(std::vector<double> times, StepMode mode) {
  const std::size_t n = times.empty() ? 0 : times.size() - 1;
  return TimePartition(std::move(times), std::vector<StepMode>(n, mode));
}

}  // namespace adjt
