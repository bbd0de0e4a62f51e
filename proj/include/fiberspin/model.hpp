// Stationary string model of a slender viscous fiber spun from a rotating
// drum: parameter set, state vectors and right-hand sides for the viscous
// Euler-frame system, the inviscid reduced system and the Lagrangian system.
//
// Conventions:
//   s      arc length along the centerline, s in [0, L]
//   u      tangential speed (cross-section A = 1/u, mass flux A u = 1)
//   q      internal energy  q = u - delta u'/u - kappa/sqrt(u)
//   r      distance of the centerline point from the rotation axis
//   beta   angle between tangent and radial direction (alpha - phi)
#pragma once

#include "fiberspin/errors.hpp"

#include <Eigen/Core>

namespace fiberspin {

/// Evaluations closer than these to the singular set raise DomainError.
inline constexpr double kSpeedFloor = 1e-12;
inline constexpr double kEnergyFloor = 1e-12;

/// Dimensionless parameters of one spinning configuration.
///   delta   = 3/Re, viscosity
///   epsilon = Rossby number
///   kappa   = sqrt(pi)/(2 We), surface tension
///   length  = fiber arc length L
struct SpinParams {
  double delta = 0.0;
  double epsilon = 1.0;
  double kappa = 0.0;
  double length = 1.0;

  /// Surface tension in rescaled variables, epsilon^{3/2} kappa.
  [[nodiscard]] double lambda() const;
  /// delta / epsilon^2, the abscissa of the existence diagram.
  [[nodiscard]] double ratio() const;

  /// Throws ParameterError unless delta >= 0, epsilon > 0,
  /// 0 <= kappa < 1 and length > 0 (all finite).
  void validate() const;

  [[nodiscard]] SpinParams with_delta(double d) const;
  [[nodiscard]] SpinParams with_kappa(double k) const;

  bool operator==(const SpinParams&) const = default;
};

struct ViscousState {
  double u = 1.0;
  double q = 0.0;
  double r = 1.0;
  double beta = 0.0;

  [[nodiscard]] Eigen::Vector4d to_vector() const { return {u, q, r, beta}; }
  static ViscousState from_vector(const Eigen::Ref<const Eigen::VectorXd>& y) {
    return {y[0], y[1], y[2], y[3]};
  }
};

/// Reduced inviscid state with rescaled speed v = epsilon u.
struct InviscidState {
  double v = 0.0;
  double r = 1.0;
  double beta = 0.0;

  [[nodiscard]] Eigen::Vector3d to_vector() const { return {v, r, beta}; }
  static InviscidState from_vector(const Eigen::Ref<const Eigen::VectorXd>& y) {
    return {y[0], y[1], y[2]};
  }
  /// State at the nozzle: v = epsilon, r = 1, beta = 0.
  static InviscidState at_nozzle(const SpinParams& p) { return {p.epsilon, 1.0, 0.0}; }
};

/// Inviscid state written in the rescaled energy w = epsilon q instead of v.
/// Used as an independent integration route; v is recovered from the
/// algebraic relation v - lambda/sqrt(v) = w.
struct RescaledEnergyState {
  double w = 0.0;
  double r = 1.0;
  double beta = 0.0;

  [[nodiscard]] Eigen::Vector3d to_vector() const { return {w, r, beta}; }
  static RescaledEnergyState from_vector(const Eigen::Ref<const Eigen::VectorXd>& y) {
    return {y[0], y[1], y[2]};
  }
};

/// Material (flight-time) description, ds/dt = u.
struct LagrangianState {
  double u = 1.0;
  double q = 0.0;
  double r = 1.0;
  double beta = 0.0;

  [[nodiscard]] Eigen::Vector4d to_vector() const { return {u, q, r, beta}; }
  static LagrangianState from_vector(const Eigen::Ref<const Eigen::VectorXd>& y) {
    return {y[0], y[1], y[2], y[3]};
  }
};

/// d/ds of the viscous state. Requires delta > 0.
/// Throws DomainError if u <= kSpeedFloor, |q| <= kEnergyFloor or r <= 0.
ViscousState rhs_viscous(const ViscousState& y, const SpinParams& p);

/// Analytic Jacobian d(rhs_viscous)/d(u, q, r, beta), rows = components of y'.
Eigen::Matrix4d jacobian_viscous(const ViscousState& y, const SpinParams& p);

/// Boundary residual (u(0)-1, r(0)-1, beta(0), q(L) - u(L) + 2 kappa/sqrt(u(L))).
Eigen::Vector4d bc_residual_viscous(const ViscousState& left, const ViscousState& right,
                                    const SpinParams& p);

/// d/ds of the reduced inviscid system. Throws DomainError when
/// v - lambda/sqrt(v) is not positive.
InviscidState rhs_inviscid(const InviscidState& y, const SpinParams& p);

/// d/ds of the inviscid system in (w, r, beta).
RescaledEnergyState rhs_rescaled_energy(const RescaledEnergyState& y, const SpinParams& p);

/// Root v > 0 of v - lambda/sqrt(v) = w. Throws DomainError if w <= 0
/// (the root would sit where the angle equation is singular).
double speed_from_rescaled_energy(double w, double lambda);

/// d/dt of the Lagrangian system. For delta = 0 the speed equation is
/// replaced by the differentiated constraint
///   epsilon^2 du/dt = r cos(beta) / (1 + kappa / (2 u^{3/2})).
LagrangianState rhs_lagrangian(const LagrangianState& y, const SpinParams& p);

/// q = u - delta u'/u - kappa/sqrt(u).
double internal_energy(double u, double u_prime, const SpinParams& p);

/// Euler-frame state reconstructed from an inviscid one (u = v/epsilon,
/// q = u - kappa/sqrt(u)).
ViscousState viscous_from_inviscid(const InviscidState& y, const SpinParams& p);

}  // namespace fiberspin
