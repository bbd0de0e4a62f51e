#include "fiberspin/model.hpp"

#include <cmath>
#include <sstream>

namespace fiberspin {

namespace {

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) {
    throw ParameterError(std::string(name) + " must be finite");
  }
}

void check_viscous_domain(const ViscousState& y) {
  if (!(y.u > kSpeedFloor)) throw DomainError("speed u left the physical domain (u <= 0)");
  if (!(std::abs(y.q) > kEnergyFloor)) throw DomainError("internal energy q vanished");
  if (!(y.r > 0.0)) throw DomainError("radius r left the physical domain (r <= 0)");
}

void require_viscous(const SpinParams& p) {
  if (!(p.delta > 0.0)) throw PreconditionError("viscous system requires delta > 0");
}

}  // namespace

double SpinParams::lambda() const { return std::pow(epsilon, 1.5) * kappa; }

double SpinParams::ratio() const { return delta / (epsilon * epsilon); }

void SpinParams::validate() const {
  require_finite(delta, "delta");
  require_finite(epsilon, "epsilon");
  require_finite(kappa, "kappa");
  require_finite(length, "length");
  if (delta < 0.0) throw ParameterError("delta must be >= 0");
  if (epsilon <= 0.0) throw ParameterError("epsilon must be > 0");
  if (kappa < 0.0) throw ParameterError("kappa must be >= 0");
  if (kappa >= 1.0) {
    std::ostringstream msg;
    msg << "kappa = " << kappa
        << " rejected: physically relevant solutions require 0 <= kappa < 1";
    throw ParameterError(msg.str());
  }
  if (length <= 0.0) throw ParameterError("length must be > 0");
}

SpinParams SpinParams::with_delta(double d) const {
  SpinParams p = *this;
  p.delta = d;
  return p;
}

SpinParams SpinParams::with_kappa(double k) const {
  SpinParams p = *this;
  p.kappa = k;
  return p;
}

ViscousState rhs_viscous(const ViscousState& y, const SpinParams& p) {
  require_viscous(p);
  check_viscous_domain(y);
  const double eps2 = p.epsilon * p.epsilon;
  const double sqrt_u = std::sqrt(y.u);
  const double sb = std::sin(y.beta);
  const double cb = std::cos(y.beta);

  ViscousState d;
  d.u = y.u * (y.u - p.kappa / sqrt_u - y.q) / p.delta;
  d.q = y.r * cb / (eps2 * y.u);
  d.r = cb;
  d.beta = (-2.0 / p.epsilon - (y.r * y.r / (eps2 * y.u) + y.q) * sb / y.r) / y.q;
  return d;
}

Eigen::Matrix4d jacobian_viscous(const ViscousState& y, const SpinParams& p) {
  require_viscous(p);
  check_viscous_domain(y);
  const double eps2 = p.epsilon * p.epsilon;
  const double sqrt_u = std::sqrt(y.u);
  const double sb = std::sin(y.beta);
  const double cb = std::cos(y.beta);
  const double u = y.u;
  const double q = y.q;
  const double r = y.r;

  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  // u' = (u^2 - kappa sqrt(u) - u q) / delta
  j(0, 0) = (2.0 * u - 0.5 * p.kappa / sqrt_u - q) / p.delta;
  j(0, 1) = -u / p.delta;
  // q' = r cos(beta) / (eps^2 u)
  j(1, 0) = -r * cb / (eps2 * u * u);
  j(1, 2) = cb / (eps2 * u);
  j(1, 3) = -r * sb / (eps2 * u);
  // r' = cos(beta)
  j(2, 3) = -sb;
  // beta' = -2/(eps q) - r sin(beta)/(eps^2 u q) - sin(beta)/r
  j(3, 0) = r * sb / (eps2 * u * u * q);
  j(3, 1) = 2.0 / (p.epsilon * q * q) + r * sb / (eps2 * u * q * q);
  j(3, 2) = -sb / (eps2 * u * q) + sb / (r * r);
  j(3, 3) = -r * cb / (eps2 * u * q) - cb / r;
  return j;
}

Eigen::Vector4d bc_residual_viscous(const ViscousState& left, const ViscousState& right,
                                    const SpinParams& p) {
  if (!(right.u > kSpeedFloor)) throw DomainError("end speed u(L) must be positive");
  return {left.u - 1.0, left.r - 1.0, left.beta,
          right.q - right.u + 2.0 * p.kappa / std::sqrt(right.u)};
}

InviscidState rhs_inviscid(const InviscidState& y, const SpinParams& p) {
  const double lambda = p.lambda();
  if (!(y.v > kSpeedFloor)) throw DomainError("rescaled speed v must be positive");
  if (!(y.r > 0.0)) throw DomainError("radius r must be positive");
  const double sqrt_v = std::sqrt(y.v);
  const double energy = y.v - lambda / sqrt_v;  // w = v - lambda/sqrt(v)
  if (!(energy > kEnergyFloor)) {
    throw DomainError("inviscid system singular: v - lambda/sqrt(v) <= 0");
  }
  const double sb = std::sin(y.beta);
  const double cb = std::cos(y.beta);

  InviscidState d;
  d.v = y.r * cb / (y.v + 0.5 * lambda / sqrt_v);
  d.r = cb;
  d.beta = -2.0 / energy - (y.r * y.r / (y.v * energy) + 1.0) * sb / y.r;
  return d;
}

double speed_from_rescaled_energy(double w, double lambda) {
  if (!(w > kEnergyFloor)) throw DomainError("rescaled energy w must be positive");
  if (lambda == 0.0) return w;
  // g(v) = v - lambda/sqrt(v) is increasing and concave; Newton started left
  // of the root (g(w) < 0) increases monotonically towards it.
  double v = w;
  for (int it = 0; it < 100; ++it) {
    const double sv = std::sqrt(v);
    const double g = v - lambda / sv - w;
    const double dg = 1.0 + 0.5 * lambda / (v * sv);
    const double step = g / dg;
    v -= step;
    if (std::abs(step) <= 1e-16 * v) break;
  }
  return v;
}

RescaledEnergyState rhs_rescaled_energy(const RescaledEnergyState& y, const SpinParams& p) {
  if (!(y.r > 0.0)) throw DomainError("radius r must be positive");
  const double v = speed_from_rescaled_energy(y.w, p.lambda());
  const double sb = std::sin(y.beta);
  const double cb = std::cos(y.beta);

  RescaledEnergyState d;
  d.w = y.r * cb / v;
  d.r = cb;
  d.beta = -2.0 / y.w - (y.r * y.r / (v * y.w) + 1.0) * sb / y.r;
  return d;
}

LagrangianState rhs_lagrangian(const LagrangianState& y, const SpinParams& p) {
  if (!(y.u > kSpeedFloor)) throw DomainError("speed u left the physical domain (u <= 0)");
  if (!(std::abs(y.q) > kEnergyFloor)) throw DomainError("internal energy q vanished");
  if (!(y.r > 0.0)) throw DomainError("radius r left the physical domain (r <= 0)");
  const double eps2 = p.epsilon * p.epsilon;
  const double sqrt_u = std::sqrt(y.u);
  const double sb = std::sin(y.beta);
  const double cb = std::cos(y.beta);

  LagrangianState d;
  if (p.delta > 0.0) {
    d.u = y.u * y.u * (y.u - p.kappa / sqrt_u - y.q) / p.delta;
  } else {
    d.u = y.r * cb / (eps2 * (1.0 + p.kappa / (2.0 * y.u * sqrt_u)));
  }
  d.q = y.r * cb / eps2;
  d.r = y.u * cb;
  d.beta = -2.0 * y.u / (p.epsilon * y.q) - (y.r * y.r / (eps2 * y.q) + y.u) * sb / y.r;
  return d;
}

double internal_energy(double u, double u_prime, const SpinParams& p) {
  if (!(u > kSpeedFloor)) throw DomainError("speed u must be positive");
  return u - p.delta * u_prime / u - p.kappa / std::sqrt(u);
}

ViscousState viscous_from_inviscid(const InviscidState& y, const SpinParams& p) {
  const double u = y.v / p.epsilon;
  if (!(u > kSpeedFloor)) throw DomainError("speed u must be positive");
  return {u, u - p.kappa / std::sqrt(u), y.r, y.beta};
}

}  // namespace fiberspin
