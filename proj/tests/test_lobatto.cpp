#include "doctest.h"

#include "fiberspin/lobatto.hpp"

#include <cmath>

using namespace fiberspin;

namespace {

// Lagrange basis by the product formula, integrated with 10-point
// Gauss-Legendre (exact for the cubic integrands).
double lagrange(int j, double t) {
  const auto& c = lobatto::nodes();
  double v = 1.0;
  for (int m = 0; m < lobatto::kStages; ++m)
    if (m != j) v *= (t - c[m]) / (c[j] - c[m]);
  return v;
}

double integrate_lagrange(int j, double upper) {
  static const double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
                              0.8650633666889845, 0.9739065285171717};
  static const double w[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
                              0.1494513491505806, 0.0666713443086881};
  double acc = 0.0;
  for (int k = 0; k < 5; ++k) {
    for (double s : {-1.0, 1.0}) acc += w[k] * lagrange(j, 0.5 * upper * (1.0 + s * x[k]));
  }
  return 0.5 * upper * acc;
}

}  // namespace

TEST_CASE("abscissae") {
  const auto& c = lobatto::nodes();
  CHECK(c[0] == 0.0);
  CHECK(c[3] == 1.0);
  CHECK(c[1] == doctest::Approx((5.0 - std::sqrt(5.0)) / 10.0).epsilon(1e-15));
  CHECK(c[1] + c[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Runge-Kutta matrix equals integrated Lagrange polynomials") {
  const auto& a = lobatto::matrix();
  const auto& c = lobatto::nodes();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      CHECK(a[i][j] == doctest::Approx(integrate_lagrange(j, c[i])).epsilon(1e-14).scale(1.0));
}

TEST_CASE("row sums and quadrature order") {
  const auto& a = lobatto::matrix();
  const auto& c = lobatto::nodes();
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += a[i][j];
    CHECK(s == doctest::Approx(c[i]).epsilon(1e-15).scale(1.0));
  }
  // Last row = quadrature weights, exact through degree 5.
  for (int k = 0; k <= 5; ++k) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += a[3][j] * std::pow(c[j], k);
    CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
  }
  double s6 = 0.0;
  for (int j = 0; j < 4; ++j) s6 += a[3][j] * std::pow(c[j], 6);
  CHECK(std::abs(s6 - 1.0 / 7.0) > 1e-6);
}

TEST_CASE("basis functions") {
  const auto& c = lobatto::nodes();
  const auto& a = lobatto::matrix();
  for (int i = 0; i < 4; ++i) {
    const auto l = lobatto::basis(c[i]);
    const auto li = lobatto::basis_integral(c[i]);
    for (int j = 0; j < 4; ++j) {
      CHECK(l[j] == doctest::Approx(i == j ? 1.0 : 0.0).scale(1.0));
      CHECK(li[j] == doctest::Approx(a[i][j]).epsilon(1e-13).scale(1.0));
    }
  }
  for (double t : {0.07, 0.33, 0.61, 0.95}) {
    const auto l = lobatto::basis(t);
    const auto dl = lobatto::basis_derivative(t);
    double sum = 0.0, dsum = 0.0;
    for (int j = 0; j < 4; ++j) {
      sum += l[j];
      dsum += dl[j];
      const double h = 1e-6;
      const double fd = (lagrange(j, t + h) - lagrange(j, t - h)) / (2 * h);
      CHECK(dl[j] == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
      CHECK(l[j] == doctest::Approx(lagrange(j, t)).epsilon(1e-13).scale(1.0));
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dsum == doctest::Approx(0.0).scale(1.0));
  }
}
