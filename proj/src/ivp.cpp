#include "fiberspin/ivp.hpp"

#include "fiberspin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fiberspin::ivp {

namespace {

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
// Difference between fifth-order and embedded fourth-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous extension.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Stages {
  Vector k1, k2, k3, k4, k5, k6, k7;
  Vector y_new;
};

// One Dormand-Prince step from (t, y) with k1 = f(t, y) already known.
void dopri_step(const VectorField& f, double t, const Vector& y, double h, Stages& s) {
  s.k2 = f(t + c2 * h, y + h * a21 * s.k1);
  s.k3 = f(t + c3 * h, y + h * (a31 * s.k1 + a32 * s.k2));
  s.k4 = f(t + c4 * h, y + h * (a41 * s.k1 + a42 * s.k2 + a43 * s.k3));
  s.k5 = f(t + c5 * h, y + h * (a51 * s.k1 + a52 * s.k2 + a53 * s.k3 + a54 * s.k4));
  s.k6 = f(t + h, y + h * (a61 * s.k1 + a62 * s.k2 + a63 * s.k3 + a64 * s.k4 + a65 * s.k5));
  s.y_new = y + h * (a71 * s.k1 + a73 * s.k3 + a74 * s.k4 + a75 * s.k5 + a76 * s.k6);
  s.k7 = f(t + h, s.y_new);
}

double error_norm(const Vector& err, const Vector& y0, const Vector& y1, const IvpConfig& cfg) {
  double e = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    e = std::max(e, std::abs(err[i]) / sk);
  }
  return e;
}

double rms_scaled(const Vector& x, const Vector& y, const IvpConfig& cfg) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y[i]);
    acc += (x[i] / sk) * (x[i] / sk);
  }
  return std::sqrt(acc / static_cast<double>(x.size()));
}

// Starting step estimate (Hairer, Norsett & Wanner, Sec. II.4).
double initial_step(const VectorField& f, double t, const Vector& y, const Vector& f0,
                    double span, const IvpConfig& cfg) {
  const double dnf = rms_scaled(f0, y, cfg);
  const double dny = rms_scaled(y, y, cfg);
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
  h = std::min(h, span);
  Vector f1;
  try {
    f1 = f(t + h, y + h * f0);
  } catch (const DomainError&) {
    return std::min(h * 1e-3, span);
  }
  const double der2 = rms_scaled(f1 - f0, y, cfg) / h;
  const double der12 = std::max(der2, dnf);
  const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  return std::min({100.0 * h, h1, span});
}

}  // namespace

void IvpConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("IVP tolerances must be positive");
  }
  if (max_steps < 1) throw std::invalid_argument("IVP step budget must be >= 1");
}

Vector Trajectory::evaluate(double t) const {
  if (times_.empty() || t < times_.front() || t > times_.back()) {
    std::ostringstream msg;
    msg << "evaluation point " << t << " outside trajectory span";
    throw OutOfSpan(msg.str());
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.end()) return states_.back();
  const auto i = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
  if (t == times_[i]) return states_[i];
  const double h = times_[i + 1] - times_[i];
  const double theta = (t - times_[i]) / h;
  const double theta1 = 1.0 - theta;
  const auto& rc = dense_[i];
  return rc[0] + theta * (rc[1] + theta1 * (rc[2] + theta * (rc[3] + theta1 * rc[4])));
}

Trajectory integrate(const VectorField& f, const Vector& initial, double a, double b,
                     const IvpConfig& cfg) {
  cfg.validate();
  if (!(a < b)) throw std::invalid_argument("integration span requires a < b");

  Trajectory traj;
  traj.times_.push_back(a);
  traj.states_.push_back(initial);

  Stages st;
  try {
    st.k1 = f(a, initial);
  } catch (const DomainError& e) {
    traj.stop_reason_ = StopReason::DomainStop;
    traj.stop_message_ = e.what();
    return traj;
  }
  if (!st.k1.allFinite()) throw std::invalid_argument("vector field not finite at initial state");

  const double span = b - a;
  double h = cfg.initial_step ? std::min(*cfg.initial_step, span)
                              : initial_step(f, a, initial, st.k1, span, cfg);
  double t = a;
  Vector y = initial;
  double fac_old = 1e-4;
  bool last_rejected = false;
  constexpr double safe = 0.9, beta = 0.04, expo = 0.2 - beta * 0.75;
  constexpr double fac_min = 0.2, fac_max = 10.0;

  std::size_t steps = 0;
  while (t < b) {
    if (++steps > cfg.max_steps) {
      std::ostringstream msg;
      msg << "IVP step budget of " << cfg.max_steps << " exhausted at t = " << t;
      throw StepBudgetExceeded(msg.str());
    }
    const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
    bool last = false;
    if (t + h >= b || t + 1.01 * h >= b) {
      h = b - t;
      last = true;
    }
    try {
      dopri_step(f, t, y, h, st);
    } catch (const DomainError& e) {
      h *= 0.25;
      if (h < h_min) {
        traj.stop_reason_ = StopReason::DomainStop;
        traj.stop_message_ = e.what();
        return traj;
      }
      last_rejected = true;
      continue;
    }
    const Vector err = h * (e1 * st.k1 + e3 * st.k3 + e4 * st.k4 + e5 * st.k5 + e6 * st.k6 +
                            e7 * st.k7);
    double err_norm = error_norm(err, y, st.y_new, cfg);
    if (!std::isfinite(err_norm) || !st.y_new.allFinite()) err_norm = 1e10;

    const double fac11 = std::pow(err_norm, expo);
    if (err_norm <= 1.0) {
      double fac = fac11 / std::pow(fac_old, beta);
      fac = std::clamp(fac / safe, 1.0 / fac_max, 1.0 / fac_min);
      double h_new = h / fac;
      fac_old = std::max(err_norm, 1e-4);

      std::array<Vector, 5> rc;
      rc[0] = y;
      rc[1] = st.y_new - y;
      rc[2] = h * st.k1 - rc[1];
      rc[3] = rc[1] - h * st.k7 - rc[2];
      rc[4] = h * (d1 * st.k1 + d3 * st.k3 + d4 * st.k4 + d5 * st.k5 + d6 * st.k6 + d7 * st.k7);

      t = last ? b : t + h;
      y = st.y_new;
      st.k1 = st.k7;
      traj.times_.push_back(t);
      traj.states_.push_back(y);
      traj.dense_.push_back(std::move(rc));

      if (last_rejected) h_new = std::min(h_new, h);
      last_rejected = false;
      h = h_new;
    } else {
      h /= std::min(1.0 / fac_min, fac11 / safe);
      last_rejected = true;
      if (h < h_min) {
        std::ostringstream msg;
        msg << "IVP step size underflow at t = " << t;
        throw StepUnderflow(msg.str());
      }
    }
  }
  return traj;
}

Vector integrate_fixed(const VectorField& f, const Vector& initial, double a, double b,
                       std::size_t steps, PairMember member) {
  if (steps < 1) throw std::invalid_argument("fixed-step integration needs >= 1 step");
  const double h = (b - a) / static_cast<double>(steps);
  Vector y = initial;
  Stages st;
  for (std::size_t n = 0; n < steps; ++n) {
    const double t = a + static_cast<double>(n) * h;
    st.k1 = f(t, y);
    dopri_step(f, t, y, h, st);
    if (member == PairMember::Fifth) {
      y = st.y_new;
    } else {
      y = st.y_new - h * (e1 * st.k1 + e3 * st.k3 + e4 * st.k4 + e5 * st.k5 + e6 * st.k6 +
                          e7 * st.k7);
    }
  }
  return y;
}

}  // namespace fiberspin::ivp
