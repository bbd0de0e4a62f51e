#include "fiberspin/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fiberspin {

std::string_view to_string(Existence e) {
  return e == Existence::MayExist ? "MayExist" : "CannotExist";
}

double existence_bound(double kappa) {
  return 3.0 * (1.0 - 1.5 * kappa + 0.5 * kappa * kappa);
}

double u_dd0_inviscid(double epsilon, double kappa) {
  const double k2 = 1.0 + 0.5 * kappa;
  const double limit = std::sqrt(1.0 - 0.25 * kappa) / k2;
  if (!(kappa >= 0.0 && kappa < 1.0)) throw PreconditionError("kappa must lie in [0, 1)");
  if (!(epsilon > 0.0 && epsilon < limit)) {
    std::ostringstream os;
    os << "u''(0) closed form needs 0 < epsilon < " << limit << ", got " << epsilon;
    throw PreconditionError(os.str());
  }
  const double e2 = epsilon * epsilon;
  return (e2 * k2 * k2 + 0.25 * kappa - 1.0) / (e2 * e2 * k2 * k2 * k2);
}

double uL_dd0_inviscid(double epsilon, double kappa) {
  const double k2 = 1.0 + 0.5 * kappa;
  const double e2 = epsilon * epsilon;
  return (k2 * k2 / e2 + 0.75 * kappa / (e2 * e2)) / (k2 * k2 * k2);
}

namespace {

void require_viscous(const SpinParams& p) {
  p.validate();
  if (!(p.delta > 0.0)) throw PreconditionError("viscous closed forms need delta > 0");
}

}  // namespace

double u_dd0_viscous(double q0, const SpinParams& p) {
  require_viscous(p);
  const double k = p.kappa;
  return ((2.0 - 0.5 * k - q0) * (1.0 - k - q0) - p.ratio()) / (p.delta * p.delta);
}

double uL_dd0_viscous(double q0, const SpinParams& p) {
  require_viscous(p);
  const double k = p.kappa;
  return ((1.0 - k - q0) * (3.0 - 1.5 * k - 2.0 * q0) - p.ratio()) / (p.delta * p.delta);
}

double lagrangian_second_derivative(double u_dd, double u_d, double u) {
  return u_dd * u * u + u_d * u_d * u;
}

Q0Bounds q0_bounds(const SpinParams& p) {
  p.validate();
  const double k = p.kappa;
  const double base = (1.0 + 0.5 * k) * (1.0 + 0.5 * k);
  const double r = p.ratio();
  Q0Bounds b;
  b.lower_raw = (3.0 - 1.5 * k - std::sqrt(base + 4.0 * r)) / 2.0;
  b.upper_raw = (5.0 - 3.5 * k - std::sqrt(base + 8.0 * r)) / 4.0;
  b.lower = std::max(0.0, b.lower_raw);
  b.upper = std::min(1.0, b.upper_raw);
  return b;
}

ExistenceCriterion existence_criterion(const SpinParams& p) {
  p.validate();
  ExistenceCriterion c;
  c.p_kappa = existence_bound(p.kappa);
  c.ratio = p.ratio();
  c.verdict = c.ratio >= c.p_kappa ? Existence::CannotExist : Existence::MayExist;
  return c;
}

ClassificationReport classify(const collocation::MeshSolution& solution, const SpinParams& p) {
  if (!solution.converged) throw NotConverged("classification needs a converged solution");
  if (solution.dim() != 4) throw std::invalid_argument("expected (u, q, r, beta) solution");
  p.validate();

  ClassificationReport rep;
  const auto nozzle = ViscousState::from_vector(solution.front());
  rep.q0 = nozzle.q;
  rep.p1 = rep.q0 > 0.0 && rep.q0 <= 1.0 - p.kappa;

  try {
    const auto d = rhs_viscous(nozzle, p);
    rep.u_d0 = d.u;
    rep.beta_d0 = d.beta;
    rep.p1_via_derivatives = d.u >= 0.0 && d.beta < 0.0;
  } catch (const DomainError&) {
    // q0 == 0: beta'(0) is unbounded, P1 fails either way.
    rep.p1_via_derivatives = false;
  }

  rep.q_d0 = solution.derivative(solution.mesh.start())[1];
  rep.u_dd0_analytic = u_dd0_viscous(rep.q0, p);
  rep.uL_dd0_analytic = uL_dd0_viscous(rep.q0, p);
  rep.u_dd0_numeric = solution.second_derivative(solution.mesh.start())[0];
  rep.p2 = rep.u_dd0_analytic < 0.0;
  rep.p3 = rep.uL_dd0_analytic > 0.0;

  rep.bounds = q0_bounds(p);
  rep.in_bounds = rep.bounds.contains(rep.q0);
  rep.existence = existence_criterion(p).verdict;
  return rep;
}

}  // namespace fiberspin
