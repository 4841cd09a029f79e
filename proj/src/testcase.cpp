#include "adjtime/testcase.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace adjt {

namespace {

constexpr double kOmega = 2.0 * std::numbers::pi / 3.0;

struct Window {
  double a;
  double b;
  double amplitude;
};

// theta(t) sin(omega (t - a)) and its time derivative on one window.
double window_offset(const Window& w, double t) {
  const double p = (t - w.a) * (t - w.b);
  const double theta = w.amplitude * p * p * p * p / 6561.0;
  return theta * std::sin(kOmega * (t - w.a));
}

double window_rate(const Window& w, double t) {
  const double ta = t - w.a;
  const double tb = t - w.b;
  const double p = ta * tb;
  const double theta = w.amplitude * p * p * p * p / 6561.0;
  const double dtheta = w.amplitude * 4.0 * p * p * p * (ta + tb) / 6561.0;
  return dtheta * std::sin(kOmega * ta) + theta * kOmega * std::cos(kOmega * ta);
}

std::array<Window, 2> windows(const ShockPath& path) {
  return {Window{12.0, 18.0, path.first_amplitude}, Window{30.0, 36.0, path.second_amplitude}};
}

void check_time(const ShockPath& path, double t) {
  if (!(t >= 0.0 && t <= path.horizon))
    throw std::out_of_range("shock time " + std::to_string(t) + " outside [0, T]");
}

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                            0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights{0.2369268850561891, 0.4786286704993665,
                                              0.5688888888888889, 0.4786286704993665,
                                              0.2369268850561891};

}  // namespace

double ShockPath::position(double t) const {
  check_time(*this, t);
  for (const auto& w : windows(*this))
    if (t > w.a && t < w.b) return 0.5 + window_offset(w, t);
  return 0.5;
}

double ShockPath::speed(double t) const {
  check_time(*this, t);
  for (const auto& w : windows(*this))
    if (t > w.a && t < w.b) return window_rate(w, t);
  return 0.0;
}

double shock_position(double t) { return ShockPath{}.position(t); }
double shock_speed(double t) { return ShockPath{}.speed(t); }

double left_boundary_value(double t0, const ShockPath& path) {
  if (!(t0 >= 0.0 && t0 <= path.horizon))
    throw std::out_of_range("boundary time outside [0, T]");

  // Characteristics reach the shock after s/u0, which stays close to 0.5 for
  // the benchmark amplitudes. Outside the shifted windows nothing is perturbed.
  bool near_window = false;
  for (const auto& w : windows(path))
    if (t0 + 1.0 > w.a && t0 < w.b) near_window = true;
  if (!near_window) return 1.0;

  auto residual = [&](double tau) { return path.departure_time(tau) - t0; };
  double lo = t0;
  double hi = std::min(t0 + 1.0, path.horizon);
  if (residual(hi) < 0.0) return 1.0;  // characteristic reaches the shock after T
  if (residual(lo) > 0.0) throw std::runtime_error("characteristic bracket failed");
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (residual(mid) < 0.0 ? lo : hi) = mid;
  }
  if (hi - lo > 1e-12) throw std::runtime_error("characteristic root did not converge");
  return path.upstream_state(0.5 * (lo + hi));
}

CharacteristicReport validate_characteristics(const ShockPath& path, double spacing) {
  CharacteristicReport report;
  report.min_upstream_state = std::numeric_limits<double>::infinity();
  report.max_upstream_state = -std::numeric_limits<double>::infinity();
  report.min_departure_slope = std::numeric_limits<double>::infinity();

  const auto samples = static_cast<std::size_t>(std::ceil(path.horizon / spacing));
  double prev_departure = 0.0;
  for (std::size_t i = 0; i <= samples; ++i) {
    const double tau = std::min(static_cast<double>(i) * spacing, path.horizon);
    const double u0 = path.upstream_state(tau);
    report.min_upstream_state = std::min(report.min_upstream_state, u0);
    report.max_upstream_state = std::max(report.max_upstream_state, u0);
    if (!(u0 > 0.0)) report.positive_speed = false;
    const double departure = path.departure_time(tau);
    if (i > 0) {
      const double slope = (departure - prev_departure) / spacing;
      report.min_departure_slope = std::min(report.min_departure_slope, slope);
      if (!(departure > prev_departure)) report.monotone = false;
    }
    prev_departure = departure;
  }
  report.samples = samples + 1;
  return report;
}

std::pair<double, double> BumpWeight::value_and_derivative(double x) const {
  const double y = (x - center) / half_width;
  const double q = 1.0 - y * y;
  if (!(q > 0.0)) return {0.0, 0.0};
  const double psi = std::exp(-1.0 / q);
  if (psi == 0.0) return {0.0, 0.0};
  return {psi, psi * (-2.0 * y / (q * q)) / half_width};
}

double BumpWeight::integral(double a, double b) const {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGaussNodes.size(); ++i)
    sum += kGaussWeights[i] * value(mid + half * kGaussNodes[i]);
  return half * sum;
}

InflowTable::InflowTable(std::function<double(double)> exact, double horizon, double spacing)
    : spacing_(spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("table spacing must be positive");
  const auto n = static_cast<std::size_t>(std::ceil(horizon / spacing));
  values_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    values_[i] = exact(std::min(static_cast<double>(i) * spacing, horizon));
  max_ = *std::max_element(values_.begin(), values_.end());
  min_ = *std::min_element(values_.begin(), values_.end());
}

double InflowTable::operator()(double t) const {
  const double x = std::max(t, 0.0) / spacing_;
  const auto i = static_cast<std::size_t>(x);
  if (i + 1 >= values_.size()) return values_.back();
  const double frac = x - static_cast<double>(i);
  return values_[i] + frac * (values_[i + 1] - values_[i]);
}

std::vector<double> TestCase::project_initial(const SpatialGrid& grid) const {
  std::vector<double> u(grid.cell_count());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = initial_average(grid.left(j), grid.right(j));
  return u;
}

namespace {

double step_average(double a, double b) {
  // 1 on x < 0.5, -1 on x > 0.5
  const double cut = std::clamp(0.5, a, b);
  return ((cut - a) - (b - cut)) / (b - a);
}

std::shared_ptr<const InflowTable> cached_inflow(const ShockPath& path) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, double>, std::shared_ptr<const InflowTable>> cache;
  const auto key = std::make_tuple(path.first_amplitude, path.second_amplitude, path.horizon);
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<const InflowTable>(
      [path](double t) { return left_boundary_value(t, path); }, path.horizon, 1e-4);
  cache.emplace(key, table);
  return table;
}

}  // namespace

TestCase perturbed_shock(const ShockPath& path) {
  const auto report = validate_characteristics(path);
  if (!report.ok())
    throw std::invalid_argument("perturbation produces crossing or reversed characteristics");
  auto table = cached_inflow(path);

  TestCase tc;
  tc.name = "perturbed_shock";
  tc.domain = {0.0, 1.0};
  tc.horizon = path.horizon;
  tc.initial_average = step_average;
  tc.inflow = [table](double t) { return (*table)(t); };
  tc.inflow_max = std::max(std::abs(table->max_value()), std::abs(table->min_value()));
  return tc;
}

TestCase steady_shock() {
  TestCase tc;
  tc.name = "steady_shock";
  tc.domain = {0.0, 1.0};
  tc.horizon = 48.0;
  tc.initial_average = step_average;
  tc.inflow = [](double) { return 1.0; };
  tc.inflow_max = 1.0;
  return tc;
}

}  // namespace adjt
