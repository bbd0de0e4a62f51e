#include "doctest.h"

#include "fiberspin/centerline.hpp"
#include "fiberspin/fiber_solver.hpp"

#include <cmath>

using namespace fiberspin;

TEST_CASE("centerline of the reference solution") {
  const auto rep = continuation_solve({0.1, 0.25, 0.1, 1.0});
  REQUIRE(rep.converged());
  const auto& sol = *rep.solution;
  const auto line = reconstruct_centerline(sol);
  REQUIRE(line.samples.size() == sol.mesh.point_count());

  const auto& first = line.samples.front();
  CHECK(first.s == 0.0);
  CHECK(first.phi == 0.0);
  CHECK(first.x == doctest::Approx(1.0));
  CHECK(first.y == doctest::Approx(0.0).scale(1.0));
  CHECK(first.area == doctest::Approx(1.0));

  // Independent composite Simpson quadrature of phi' = sin(beta)/r.
  auto g = [&](double s) {
    const auto y = sol.evaluate(s);
    return std::sin(y[3]) / y[2];
  };
  const int n = 20000;
  double acc = 0.0;
  const double h = 1.0 / n;
  for (int k = 0; k < n; ++k) {
    const double a = k * h;
    acc += h / 6.0 * (g(a) + 4.0 * g(a + 0.5 * h) + g(a + h));
  }
  const auto& last = line.samples.back();
  CHECK(last.phi == doctest::Approx(acc).epsilon(1e-9));
  CHECK(last.phi < 0.0);  // the jet lags the rotation

  for (const auto& smp : line.samples) {
    const auto y = sol.evaluate(smp.s);
    CHECK(std::hypot(smp.x, smp.y) == doctest::Approx(y[2]).epsilon(1e-12));
    CHECK(smp.area == doctest::Approx(1.0 / y[0]).epsilon(1e-12));
  }
}
