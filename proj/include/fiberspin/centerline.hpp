#pragma once

#include "fiberspin/collocation.hpp"

#include <vector>

namespace fiberspin {

struct CenterlineSample {
  double s = 0.0;
  double phi = 0.0;  ///< polar angle of the centerline point
  double x = 0.0;
  double y = 0.0;
  double area = 0.0;  ///< cross-section A = 1/u
};

struct Centerline {
  std::vector<CenterlineSample> samples;
};

/// Integrates phi' = sin(beta)/r, phi(0) = 0 with the collocation formula of
/// the solution's own mesh and returns one sample per collocation point.
/// The solution must hold viscous states (u, q, r, beta).
/// Throws DomainError if r <= 0 or u <= 0 anywhere.
Centerline reconstruct_centerline(const collocation::MeshSolution& solution);

}  // namespace fiberspin
