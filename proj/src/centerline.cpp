#include "fiberspin/centerline.hpp"

#include "fiberspin/errors.hpp"
#include "fiberspin/lobatto.hpp"

#include <cmath>
#include <stdexcept>

namespace fiberspin {

Centerline reconstruct_centerline(const collocation::MeshSolution& solution) {
  if (solution.dim() != 4) throw std::invalid_argument("centerline needs (u, q, r, beta) states");
  const auto& mesh = solution.mesh;
  const auto& a = lobatto::matrix();
  const auto np = static_cast<std::size_t>(mesh.point_count());

  std::vector<double> dphi(np);
  for (std::size_t j = 0; j < np; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const double u = solution.values(0, col);
    const double r = solution.values(2, col);
    if (!(r > 0.0)) throw DomainError("centerline radius r <= 0");
    if (!(u > 0.0)) throw DomainError("centerline speed u <= 0");
    dphi[j] = std::sin(solution.values(3, col)) / r;
  }

  Centerline out;
  out.samples.resize(np);
  std::vector<double> phi(np, 0.0);
  for (std::size_t n = 0; n < mesh.intervals(); ++n) {
    const double h = mesh.width(n);
    const std::size_t c0 = 3 * n;
    for (int i = 1; i < lobatto::kStages; ++i) {
      double acc = phi[c0];
      for (int j = 0; j < lobatto::kStages; ++j) acc += h * a[i][j] * dphi[c0 + j];
      phi[c0 + i] = acc;
    }
  }
  for (std::size_t j = 0; j < np; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const double r = solution.values(2, col);
    auto& smp = out.samples[j];
    smp.s = mesh.point(j);
    smp.phi = phi[j];
    smp.x = r * std::cos(phi[j]);
    smp.y = r * std::sin(phi[j]);
    smp.area = 1.0 / solution.values(0, col);
  }
  return out;
}

}  // namespace fiberspin
