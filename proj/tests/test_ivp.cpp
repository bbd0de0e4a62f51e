#include "doctest.h"

#include "fiberspin/errors.hpp"
#include "fiberspin/ivp.hpp"

#include <cmath>
#include <numbers>

using namespace fiberspin;
using ivp::Vector;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

const ivp::VectorField oscillator = [](double, const Vector& y) { return vec({y[1], -y[0]}); };

}  // namespace

TEST_CASE("harmonic oscillator over one period") {
  const auto traj = ivp::integrate(oscillator, vec({0.0, 1.0}), 0.0, 2 * std::numbers::pi,
                                   {1e-11, 1e-13, 100000, {}});
  CHECK(traj.completed());
  CHECK(traj.end() == 2 * std::numbers::pi);
  const auto& y = traj.state(traj.size() - 1);
  CHECK(std::abs(y[0]) < 1e-9);
  CHECK(std::abs(y[1] - 1.0) < 1e-9);
}

TEST_CASE("error scales with tolerance") {
  const ivp::VectorField decay = [](double t, const Vector& y) { return vec({-2.0 * t * y[0]}); };
  double prev = 1.0;
  for (double tol : {1e-4, 1e-7, 1e-10}) {
    const auto traj = ivp::integrate(decay, vec({1.0}), 0.0, 2.0, {tol, tol * 1e-2, 100000, {}});
    const double err = std::abs(traj.state(traj.size() - 1)[0] - std::exp(-4.0));
    CHECK(err < 50 * tol);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("dense output") {
  const auto traj =
      ivp::integrate(oscillator, vec({0.0, 1.0}), 0.0, 3.0, {1e-10, 1e-12, 100000, {}});
  for (std::size_t i = 0; i < traj.size(); ++i) CHECK(traj.evaluate(traj.time(i)) == traj.state(i));
  for (double t = 0.0; t <= 3.0; t += 0.0371) {
    const auto y = traj.evaluate(t);
    CHECK(std::abs(y[0] - std::sin(t)) < 1e-8);
    CHECK(std::abs(y[1] - std::cos(t)) < 1e-8);
  }
  CHECK_THROWS_AS(traj.evaluate(3.5), ivp::OutOfSpan);
  CHECK_THROWS_AS(traj.evaluate(-0.1), ivp::OutOfSpan);
}

TEST_CASE("fixed-step order of both pair members") {
  const ivp::VectorField f = [](double t, const Vector& y) { return vec({y[0] * std::cos(t)}); };
  const double exact = std::exp(std::sin(2.0));
  auto err = [&](std::size_t n, ivp::PairMember m) {
    return std::abs(ivp::integrate_fixed(f, vec({1.0}), 0.0, 2.0, n, m)[0] - exact);
  };
  const double o5 = std::log2(err(20, ivp::PairMember::Fifth) / err(40, ivp::PairMember::Fifth));
  const double o4 = std::log2(err(20, ivp::PairMember::EmbeddedFourth) /
                              err(40, ivp::PairMember::EmbeddedFourth));
  CHECK(o5 == doctest::Approx(5.0).epsilon(0.1));
  CHECK(o4 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("domain error ends the integration") {
  const ivp::VectorField f = [](double t, const Vector& y) {
    if (t > 0.5) throw DomainError("outside");
    return vec({y[0]});
  };
  const auto traj = ivp::integrate(f, vec({1.0}), 0.0, 1.0);
  CHECK_FALSE(traj.completed());
  CHECK(traj.stop_reason() == ivp::StopReason::DomainStop);
  CHECK(traj.end() <= 0.5);
  CHECK(traj.end() > 0.49);
  CHECK(std::abs(traj.state(traj.size() - 1)[0] - std::exp(traj.end())) < 1e-7);
}

TEST_CASE("budgets and configuration") {
  CHECK_THROWS_AS(ivp::integrate(oscillator, vec({0.0, 1.0}), 0.0, 100.0, {1e-12, 1e-14, 5, {}}),
                  ivp::StepBudgetExceeded);
  CHECK_THROWS_AS(ivp::integrate(oscillator, vec({0.0, 1.0}), 0.0, 1.0, {-1.0, 1e-10, 10, {}}),
                  std::invalid_argument);
  const ivp::VectorField blowup = [](double, const Vector& y) { return vec({y[0] * y[0]}); };
  CHECK_THROWS_AS(ivp::integrate(blowup, vec({1.0}), 0.0, 2.0), ivp::StepUnderflow);
}
