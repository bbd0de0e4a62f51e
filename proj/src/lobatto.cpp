#include "fiberspin/lobatto.hpp"

#include <cmath>

namespace fiberspin::lobatto {

namespace {

// Monomial coefficients (ascending powers) of each Lagrange basis polynomial.
using Poly = std::array<double, kStages>;

std::array<Poly, kStages> make_lagrange() {
  const auto& c = nodes();
  std::array<Poly, kStages> out{};
  for (int j = 0; j < kStages; ++j) {
    Poly p{1.0, 0.0, 0.0, 0.0};
    int degree = 0;
    double denom = 1.0;
    for (int m = 0; m < kStages; ++m) {
      if (m == j) continue;
      // p <- p * (t - c_m)
      Poly next{};
      for (int k = 0; k <= degree; ++k) {
        next[k + 1] += p[k];
        next[k] -= c[m] * p[k];
      }
      p = next;
      ++degree;
      denom *= c[j] - c[m];
    }
    for (double& v : p) v /= denom;
    out[j] = p;
  }
  return out;
}

const std::array<Poly, kStages>& lagrange() {
  static const std::array<Poly, kStages> table = make_lagrange();
  return table;
}

}  // namespace

const std::array<double, kStages>& nodes() {
  static const std::array<double, kStages> c{0.0, (5.0 - std::sqrt(5.0)) / 10.0,
                                             (5.0 + std::sqrt(5.0)) / 10.0, 1.0};
  return c;
}

const std::array<std::array<double, kStages>, kStages>& matrix() {
  static const std::array<std::array<double, kStages>, kStages> a = [] {
    const double r5 = std::sqrt(5.0);
    return std::array<std::array<double, kStages>, kStages>{{
        {0.0, 0.0, 0.0, 0.0},
        {(11.0 + r5) / 120.0, (25.0 - r5) / 120.0, (25.0 - 13.0 * r5) / 120.0,
         (-1.0 + r5) / 120.0},
        {(11.0 - r5) / 120.0, (25.0 + 13.0 * r5) / 120.0, (25.0 + r5) / 120.0,
         (-1.0 - r5) / 120.0},
        {1.0 / 12.0, 5.0 / 12.0, 5.0 / 12.0, 1.0 / 12.0},
    }};
  }();
  return a;
}

std::array<double, kStages> basis(double tau) {
  std::array<double, kStages> out{};
  const auto& l = lagrange();
  for (int j = 0; j < kStages; ++j) {
    out[j] = ((l[j][3] * tau + l[j][2]) * tau + l[j][1]) * tau + l[j][0];
  }
  return out;
}

std::array<double, kStages> basis_integral(double tau) {
  std::array<double, kStages> out{};
  const auto& l = lagrange();
  for (int j = 0; j < kStages; ++j) {
    out[j] =
        (((l[j][3] / 4.0 * tau + l[j][2] / 3.0) * tau + l[j][1] / 2.0) * tau + l[j][0]) * tau;
  }
  return out;
}

std::array<double, kStages> basis_derivative(double tau) {
  std::array<double, kStages> out{};
  const auto& l = lagrange();
  for (int j = 0; j < kStages; ++j) {
    out[j] = (3.0 * l[j][3] * tau + 2.0 * l[j][2]) * tau + l[j][1];
  }
  return out;
}

}  // namespace fiberspin::lobatto
