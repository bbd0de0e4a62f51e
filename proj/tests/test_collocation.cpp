#include "doctest.h"

#include "fiberspin/collocation.hpp"
#include "fiberspin/errors.hpp"

#include <cmath>
#include <numbers>

using namespace fiberspin;
using namespace fiberspin::collocation;

namespace {

// y'' = -y as a first-order system, y(0) = 0, y(pi/2) = 1; solution sin.
BvpSystem sine_problem() {
  BvpSystem s;
  s.dim = 2;
  s.left_count = 1;
  s.rhs = [](double, const Vector& y, Vector& f) {
    f.resize(2);
    f << y[1], -y[0];
  };
  s.jacobian = [](double, const Vector&, Matrix& j) {
    j = Matrix::Zero(2, 2);
    j(0, 1) = 1.0;
    j(1, 0) = -1.0;
  };
  s.left_bc = [](const Vector& ya, Vector& r) {
    r.resize(1);
    r[0] = ya[0];
  };
  s.left_bc_jacobian = [](const Vector&, Matrix& j) {
    j = Matrix::Zero(1, 2);
    j(0, 0) = 1.0;
  };
  s.right_bc = [](const Vector& yb, Vector& r) {
    r.resize(1);
    r[0] = yb[0] - 1.0;
  };
  s.right_bc_jacobian = [](const Vector&, Matrix& j) {
    j = Matrix::Zero(1, 2);
    j(0, 0) = 1.0;
  };
  return s;
}

// Bratu: y'' + exp(y) = 0, y(0) = y(1) = 0 (lower branch).
BvpSystem bratu_problem() {
  BvpSystem s = sine_problem();
  s.rhs = [](double, const Vector& y, Vector& f) {
    f.resize(2);
    f << y[1], -std::exp(y[0]);
  };
  s.jacobian = [](double, const Vector& y, Matrix& j) {
    j = Matrix::Zero(2, 2);
    j(0, 1) = 1.0;
    j(1, 0) = -std::exp(y[0]);
  };
  s.right_bc = [](const Vector& yb, Vector& r) {
    r.resize(1);
    r[0] = yb[0];
  };
  return s;
}

double bratu_exact(double x) {
  double theta = 1.0;
  for (int i = 0; i < 200; ++i) theta = std::sqrt(2.0) * std::cosh(theta / 4.0);
  return -2.0 * std::log(std::cosh((x - 0.5) * theta / 2.0) / std::cosh(theta / 4.0));
}

MeshSolution zero_guess(double a, double b, std::size_t n) {
  auto zero = [](double) -> Vector { return Vector::Zero(2); };
  return MeshSolution::sample(Mesh::uniform(a, b, n), zero, zero);
}

double max_sine_error(const MeshSolution& sol) {
  double err = 0.0;
  const double b = sol.mesh.end();
  for (int k = 0; k <= 2000; ++k) {
    const double s = b * k / 2000.0;
    const auto y = sol.evaluate(s);
    err = std::max({err, std::abs(y[0] - std::sin(s)), std::abs(y[1] - std::cos(s))});
  }
  return err;
}

}  // namespace

TEST_CASE("mesh validation and indexing") {
  CHECK_THROWS_AS(Mesh({0.0, 0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Mesh({0.0, 0.2, 0.2, 0.6, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Mesh({0.0, 0.3, 0.2, 0.6, 1.0}), std::invalid_argument);
  const auto m = Mesh::uniform(0.0, 2.0, 8);
  CHECK(m.intervals() == 8);
  CHECK(m.point_count() == 25);
  CHECK(m.point(0) == 0.0);
  CHECK(m.point(24) == 2.0);
  CHECK(m.point(3) == doctest::Approx(0.25));
  CHECK(m.point(1) == doctest::Approx(0.25 * (5.0 - std::sqrt(5.0)) / 10.0));
  CHECK(m.locate(0.0) == 0);
  CHECK(m.locate(0.3) == 1);
  CHECK(m.locate(2.0) == 7);
}

TEST_CASE("y'' = -y at tolerance 1e-8") {
  const auto rep = solve_bvp(sine_problem(), zero_guess(0.0, std::numbers::pi / 2, 4), {});
  REQUIRE(rep.converged());
  CHECK(rep.solution->max_error_estimate() <= 1e-8);
  CHECK(max_sine_error(*rep.solution) <= 1e-8);
}

TEST_CASE("solution is C1 across breakpoints") {
  const auto rep = solve_bvp(sine_problem(), zero_guess(0.0, std::numbers::pi / 2, 8), {});
  REQUIRE(rep.converged());
  const auto& sol = *rep.solution;
  for (std::size_t n = 1; n < sol.mesh.intervals(); ++n) {
    const double x = sol.mesh.breakpoints()[n];
    const double h = 1e-9;
    CHECK((sol.evaluate(x - h) - sol.evaluate(x + h)).norm() < 1e-8);
    CHECK((sol.derivative(x - h) - sol.derivative(x + h)).norm() < 1e-7);
  }
  // Value and slope reproduce the stored collocation data.
  for (std::size_t k = 0; k < sol.mesh.point_count(); ++k) {
    const double s = sol.mesh.point(k);
    CHECK((sol.evaluate(s) - sol.values.col(static_cast<Eigen::Index>(k))).norm() < 1e-13);
  }
}

TEST_CASE("fifth-order convergence on fixed meshes") {
  std::vector<double> errs;
  for (std::size_t n : {4, 8, 16, 32}) {
    const auto rep = solve_on_mesh(sine_problem(), zero_guess(0.0, std::numbers::pi / 2, n));
    REQUIRE(rep.solution);
    REQUIRE(rep.solution->converged);
    errs.push_back(max_sine_error(*rep.solution));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) {
    const double order = std::log2(errs[i - 1] / errs[i]);
    CHECK(order > 4.6);
  }
}

TEST_CASE("nonlinear problem with closed-form solution") {
  const auto rep = solve_bvp(bratu_problem(), zero_guess(0.0, 1.0, 4), {});
  REQUIRE(rep.converged());
  double err = 0.0;
  for (int k = 0; k <= 500; ++k) {
    const double x = k / 500.0;
    err = std::max(err, std::abs(rep.solution->evaluate(x)[0] - bratu_exact(x)));
  }
  CHECK(err < 1e-8);
  CHECK(rep.solution->newton_iterations > 1);
}

TEST_CASE("residual estimate of an exact sample is tiny") {
  auto value = [](double s) -> Vector {
    Vector v(2);
    v << std::sin(s), std::cos(s);
    return v;
  };
  auto slope = [](double s) -> Vector {
    Vector v(2);
    v << std::cos(s), -std::sin(s);
    return v;
  };
  const auto fine = MeshSolution::sample(Mesh::uniform(0.0, 1.0, 64), value, slope);
  const auto coarse = MeshSolution::sample(Mesh::uniform(0.0, 1.0, 4), value, slope);
  const auto ef = residual_estimate(sine_problem(), fine);
  const auto ec = residual_estimate(sine_problem(), coarse);
  CHECK(*std::max_element(ef.begin(), ef.end()) < 1e-10);
  CHECK(*std::max_element(ec.begin(), ec.end()) > *std::max_element(ef.begin(), ef.end()));
}

TEST_CASE("rhs outside its domain everywhere gives DomainExit") {
  auto sys = sine_problem();
  sys.rhs = [](double, const Vector&, Vector&) { throw DomainError("never defined"); };
  const auto rep = solve_bvp(sys, zero_guess(0.0, 1.0, 4), {});
  CHECK(rep.outcome == Outcome::DomainExit);
  CHECK_FALSE(rep.converged());
}

TEST_CASE("node budget exhaustion is NoConvergence") {
  CollocationSettings s;
  s.tol = 1e-14;
  s.max_nodes = 40;
  const auto rep = solve_bvp(bratu_problem(), zero_guess(0.0, 1.0, 4), s);
  CHECK(rep.outcome == Outcome::NoConvergence);
  CHECK_FALSE(rep.reason.empty());
}

TEST_CASE("settings validation") {
  CollocationSettings s;
  s.tol = 0.0;
  CHECK_THROWS(s.validate());
  s = {};
  s.max_newton_iterations = 0;
  CHECK_THROWS(s.validate());
}
