// Closed-form properties of stationary solutions near the nozzle and the
// resulting existence bounds, plus classification of computed solutions as
// physically relevant:
//   (P1) q0 in (0, 1 - kappa]     (P2) u''(0) < 0     (P3) d^2 u_L/dt^2 (0) > 0
#pragma once

#include "fiberspin/collocation.hpp"
#include "fiberspin/model.hpp"

#include <stdexcept>
#include <string_view>

namespace fiberspin {

class NotConverged : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Existence { MayExist, CannotExist };
std::string_view to_string(Existence e);

/// Admissible interval for q0 = q(0) of a physically relevant solution.
struct Q0Bounds {
  double lower_raw = 0.0;
  double upper_raw = 0.0;
  double lower = 0.0;  ///< max(0, lower_raw)
  double upper = 0.0;  ///< min(1, upper_raw)

  /// An empty interval rules out physically relevant solutions.
  [[nodiscard]] bool empty() const { return lower > upper; }
  [[nodiscard]] bool contains(double q0) const { return lower <= q0 && q0 <= upper; }
};

struct ExistenceCriterion {
  double p_kappa = 0.0;
  double ratio = 0.0;  ///< delta / epsilon^2
  Existence verdict = Existence::MayExist;
};

/// p(kappa) = 3 (1 - 3 kappa/2 + kappa^2/2).
double existence_bound(double kappa);

/// Inviscid u''(0). Requires 0 < epsilon < sqrt(1 - kappa/4)/(1 + kappa/2),
/// where the value is negative; throws PreconditionError otherwise.
double u_dd0_inviscid(double epsilon, double kappa);

/// Inviscid second flight-time derivative of the Lagrangian speed at t = 0.
double uL_dd0_inviscid(double epsilon, double kappa);

/// Viscous u''(0) for a given q0:
///   delta^2 u''(0) = (2 - kappa/2 - q0)(1 - kappa - q0) - delta/epsilon^2.
double u_dd0_viscous(double q0, const SpinParams& params);

/// Viscous d^2 u_L/dt^2 at t = 0:
///   delta^2 uL''(0) = (1 - kappa - q0)(3 - 3 kappa/2 - 2 q0) - delta/epsilon^2.
double uL_dd0_viscous(double q0, const SpinParams& params);

/// Chain rule at the nozzle: uL''(0) = u''(0) u(0)^2 + u'(0)^2 u(0).
double lagrangian_second_derivative(double u_dd, double u_d, double u = 1.0);

Q0Bounds q0_bounds(const SpinParams& params);

/// CannotExist iff delta/epsilon^2 >= p(kappa) (the boundary is inclusive).
ExistenceCriterion existence_criterion(const SpinParams& params);

struct ClassificationReport {
  double q0 = 0.0;
  bool p1 = false;                 ///< q0 in (0, 1 - kappa]
  bool p1_via_derivatives = false; ///< u'(0) >= 0 and beta'(0) < 0
  bool p2 = false;                 ///< analytic u''(0) < 0
  bool p3 = false;                 ///< analytic uL''(0) > 0
  double u_d0 = 0.0;               ///< u'(0) from the ODE at the nozzle state
  double beta_d0 = 0.0;
  double q_d0 = 0.0;               ///< q'(0) of the collocation polynomial
  double u_dd0_analytic = 0.0;
  double uL_dd0_analytic = 0.0;
  double u_dd0_numeric = 0.0;      ///< second derivative of the collocation polynomial
  Q0Bounds bounds;
  bool in_bounds = false;
  Existence existence = Existence::MayExist;  ///< delta/epsilon^2 vs p(kappa)

  [[nodiscard]] bool physically_relevant() const { return p1 && p2 && p3; }
  /// Distinct from `existence`: the q0 interval itself may already be empty.
  [[nodiscard]] bool excluded_by_bounds() const { return bounds.empty(); }
};

/// Classifies a converged viscous solution. Throws NotConverged otherwise.
ClassificationReport classify(const collocation::MeshSolution& solution, const SpinParams& params);

}  // namespace fiberspin
