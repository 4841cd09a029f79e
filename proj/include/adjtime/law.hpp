#pragma once

#include <algorithm>

namespace adjt {

/// Engquist-Osher flux for Burgers' equation, f(u) = u^2/2:
/// F(uL, uR) = f+(uL) + f-(uR).
inline double eo_flux(double uL, double uR) {
  const double p = std::max(uL, 0.0);
  const double m = std::min(uR, 0.0);
  return 0.5 * (p * p + m * m);
}

/// Scalar flux function together with its Engquist-Osher numerical flux.
/// Burgers is the benchmark; linear advection f(u) = a u is kept for the
/// exactness checks of the error representation.
class ConservationLaw {
 public:
  enum class Kind { Burgers, LinearAdvection };

  static ConservationLaw burgers() { return ConservationLaw(Kind::Burgers, 0.0); }
  static ConservationLaw linear_advection(double speed) {
    return ConservationLaw(Kind::LinearAdvection, speed);
  }

  Kind kind() const { return kind_; }
  double advection_speed() const { return speed_; }

  double flux(double u) const { return kind_ == Kind::Burgers ? 0.5 * u * u : speed_ * u; }
  double derivative(double u) const { return kind_ == Kind::Burgers ? u : speed_; }

  double numerical_flux(double uL, double uR) const {
    if (kind_ == Kind::Burgers) return eo_flux(uL, uR);
    return std::max(speed_, 0.0) * uL + std::min(speed_, 0.0) * uR;
  }

  /// Partial derivatives of numerical_flux with respect to uL and uR. At the
  /// sonic point u = 0 the one-sided value 0 is used.
  double d_numerical_flux_left(double uL) const {
    return kind_ == Kind::Burgers ? std::max(uL, 0.0) : std::max(speed_, 0.0);
  }
  double d_numerical_flux_right(double uR) const {
    return kind_ == Kind::Burgers ? std::min(uR, 0.0) : std::min(speed_, 0.0);
  }

 private:
  ConservationLaw(Kind kind, double speed) : kind_(kind), speed_(speed) {}

  Kind kind_;
  double speed_;
};

}  // namespace adjt
