// Four-stage Lobatto IIIA collocation: abscissae, Runge-Kutta matrix and the
// polynomial basis used for dense evaluation of the collocation solution.
#pragma once

#include <array>

namespace fiberspin::lobatto {

inline constexpr int kStages = 4;

/// Abscissae 0, (5 - sqrt5)/10, (5 + sqrt5)/10, 1.
const std::array<double, kStages>& nodes();

/// a[i][j] = integral_0^{c_i} l_j(t) dt for the Lagrange basis l_j on the nodes.
const std::array<std::array<double, kStages>, kStages>& matrix();

/// Lagrange basis l_j(tau), its integral from 0 and its derivative, on [0, 1].
/// With slopes f_j at the nodes the collocation polynomial on an interval of
/// width h starting at y0 is  p(tau) = y0 + h sum_j integral_j(tau) f_j.
std::array<double, kStages> basis(double tau);
std::array<double, kStages> basis_integral(double tau);
std::array<double, kStages> basis_derivative(double tau);

}  // namespace fiberspin::lobatto
