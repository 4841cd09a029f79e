#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace adjt {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double length() const { return hi - lo; }
};

/// Uniform partition of a 1D domain into `base_cells * 2^level` cells.
class SpatialGrid {
 public:
  SpatialGrid(int base_cells, int level, Interval domain);

  int level() const { return level_; }
  int base_cells() const { return base_cells_; }
  std::size_t cell_count() const { return edges_.size() - 1; }
  double h() const { return h_; }
  const Interval& domain() const { return domain_; }
  const std::vector<double>& edges() const { return edges_; }

  double left(std::size_t j) const { return edges_[j]; }
  double right(std::size_t j) const { return edges_[j + 1]; }
  double center(std::size_t j) const { return 0.5 * (edges_[j] + edges_[j + 1]); }

 private:
  int base_cells_;
  int level_;
  Interval domain_;
  double h_;
  std::vector<double> edges_;
};

enum class StepMode { Explicit, Implicit };

std::string_view to_string(StepMode mode);
StepMode parse_step_mode(std::string_view text);

/// Ordered step boundaries 0 = t_0 < ... < t_N = T with one solver mode per
/// interval (t_{n-1}, t_n). Interval indices are 0-based: interval n spans
/// times[n]..times[n+1].
class TimePartition {
 public:
  TimePartition() = default;
  TimePartition(std::vector<double> times, std::vector<StepMode> modes);

  std::size_t size() const { return modes_.size(); }
  bool empty() const { return modes_.empty(); }
  double horizon() const { return times_.back(); }
  double start(std::size_t n) const { return times_[n]; }
  double end(std::size_t n) const { return times_[n + 1]; }
  double step(std::size_t n) const { return times_[n + 1] - times_[n]; }
  StepMode mode(std::size_t n) const { return modes_[n]; }

  const std::vector<double>& times() const { return times_; }
  const std::vector<StepMode>& modes() const { return modes_; }

  std::size_t count(StepMode mode) const;
  /// Interval containing t (right-continuous; t == T maps to the last interval).
  std::size_t locate(double t) const;

 private:
  std::vector<double> times_{0.0};
  std::vector<StepMode> modes_;
};

SpatialGrid build_spatial_grid(int base_cells, int level, Interval domain = {});

/// N = ceil(T/k) steps of size k; the final step is shortened so t_N = T.
TimePartition uniform_partition(double horizon, double k, StepMode mode);

/// Partition with the given boundaries, all intervals sharing one mode.
TimePartition partition_from_times(std::vector<double> times, StepMode mode);

inline double cfl_of_step(double k, double h, double speed) { return k * speed / h; }

}  // namespace adjt
