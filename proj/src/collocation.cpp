#include "fiberspin/collocation.hpp"

#include "fiberspin/banded.hpp"
#include "fiberspin/errors.hpp"
#include "fiberspin/lobatto.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace fiberspin::collocation {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Off-collocation sample points for the residual estimate.
constexpr std::array<double, 3> kResidualSamples{0.13819660112501052, 0.5, 0.86180339887498948};

std::string describe(std::string_view what, int iterations) {
  std::ostringstream os;
  os << what << " (after " << iterations << " Newton iterations)";
  return os.str();
}

// Evaluates f at every collocation point. Returns false on DomainError.
bool eval_rhs(const BvpSystem& sys, const Mesh& mesh, const Matrix& z, Matrix& f,
              std::string* why = nullptr) {
  Vector fy(sys.dim);
  Vector y(sys.dim);
  try {
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      y = z.col(j);
      sys.rhs(mesh.point(static_cast<std::size_t>(j)), y, fy);
      if (!fy.allFinite()) throw DomainError("non-finite right-hand side");
      f.col(j) = fy;
    }
  } catch (const DomainError& e) {
    if (why) *why = e.what();
    return false;
  }
  return true;
}

// Collocation residual (left BCs, 3 stage equations per interval, right BCs).
bool eval_residual(const BvpSystem& sys, const Mesh& mesh, const Matrix& z, const Matrix& f,
                   Vector& res) {
  const auto dim = sys.dim;
  const auto lc = sys.left_count;
  const auto& a = lobatto::matrix();
  const std::size_t n_int = mesh.intervals();
  res.resize(static_cast<Eigen::Index>(mesh.point_count()) * dim);
  try {
    Vector bl(lc);
    Vector y0 = z.col(0);
    sys.left_bc(y0, bl);
    res.head(lc) = bl;
    for (std::size_t n = 0; n < n_int; ++n) {
      const double h = mesh.width(n);
      const auto c0 = static_cast<Eigen::Index>(3 * n);
      for (int i = 1; i < lobatto::kStages; ++i) {
        Vector e = z.col(c0 + i) - z.col(c0);
        for (int j = 0; j < lobatto::kStages; ++j) {
          if (a[i][j] != 0.0) e -= h * a[i][j] * f.col(c0 + j);
        }
        res.segment(lc + (c0 + i - 1) * dim, dim) = e;
      }
    }
    Vector br(dim - lc);
    Vector yb = z.col(z.cols() - 1);
    sys.right_bc(yb, br);
    res.tail(dim - lc) = br;
  } catch (const DomainError&) {
    return false;
  }
  return res.allFinite();
}

// Row weights for the merit function: stage rows become relative slope
// defects, boundary rows are left as they are.
Vector residual_weights(const BvpSystem& sys, const Mesh& mesh, const Matrix& f) {
  const auto dim = sys.dim;
  const auto lc = sys.left_count;
  Vector w = Vector::Ones(static_cast<Eigen::Index>(mesh.point_count()) * dim);
  for (std::size_t n = 0; n < mesh.intervals(); ++n) {
    const double h = mesh.width(n);
    const auto c0 = static_cast<Eigen::Index>(3 * n);
    for (int i = 1; i < lobatto::kStages; ++i) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        w[lc + (c0 + i - 1) * dim + k] = 1.0 / (h * (1.0 + std::abs(f(k, c0 + i))));
      }
    }
  }
  return w;
}

bool assemble_jacobian(const BvpSystem& sys, const Mesh& mesh, const Matrix& z,
                       BandedMatrix& jac) {
  const auto dim = sys.dim;
  const auto lc = sys.left_count;
  const auto& a = lobatto::matrix();
  const std::size_t n_int = mesh.intervals();
  jac.set_zero();
  auto put = [&](Eigen::Index row, Eigen::Index col, double v) {
    jac(static_cast<std::size_t>(row), static_cast<std::size_t>(col)) += v;
  };
  try {
    std::vector<Matrix> jpts(static_cast<std::size_t>(z.cols()), Matrix(dim, dim));
    Vector y(dim);
    for (Eigen::Index j = 0; j < z.cols(); ++j) {
      y = z.col(j);
      sys.jacobian(mesh.point(static_cast<std::size_t>(j)), y, jpts[static_cast<std::size_t>(j)]);
    }
    Matrix bl(lc, dim);
    Vector y0 = z.col(0);
    sys.left_bc_jacobian(y0, bl);
    for (Eigen::Index r = 0; r < lc; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) put(r, c, bl(r, c));

    for (std::size_t n = 0; n < n_int; ++n) {
      const double h = mesh.width(n);
      const auto c0 = static_cast<Eigen::Index>(3 * n);
      for (int i = 1; i < lobatto::kStages; ++i) {
        const Eigen::Index row0 = lc + (c0 + i - 1) * dim;
        for (int j = 0; j < lobatto::kStages; ++j) {
          const Eigen::Index col0 = (c0 + j) * dim;
          const Matrix& jj = jpts[static_cast<std::size_t>(c0 + j)];
          for (Eigen::Index r = 0; r < dim; ++r) {
            for (Eigen::Index c = 0; c < dim; ++c) {
              double v = -h * a[i][j] * jj(r, c);
              if (r == c) {
                if (j == i) v += 1.0;
                if (j == 0) v -= 1.0;
              }
              if (v != 0.0) put(row0 + r, col0 + c, v);
            }
          }
        }
      }
    }
    Matrix br(dim - lc, dim);
    Vector yb = z.col(z.cols() - 1);
    sys.right_bc_jacobian(yb, br);
    const Eigen::Index row0 = lc + static_cast<Eigen::Index>(3 * n_int) * dim;
    const Eigen::Index col0 = static_cast<Eigen::Index>(3 * n_int) * dim;
    for (Eigen::Index r = 0; r < dim - lc; ++r)
      for (Eigen::Index c = 0; c < dim; ++c) put(row0 + r, col0 + c, br(r, c));
  } catch (const DomainError&) {
    return false;
  }
  return true;
}

double weighted_norm2(const Vector& w, const Vector& r) { return w.cwiseProduct(r).norm(); }
double weighted_norm_inf(const Vector& w, const Vector& r) {
  return w.cwiseProduct(r).cwiseAbs().maxCoeff();
}

struct NewtonOutcome {
  Outcome outcome = Outcome::NoConvergence;
  std::string reason;
  Matrix z;
  Matrix f;
  int iterations = 0;
};

NewtonOutcome newton(const BvpSystem& sys, const Mesh& mesh, Matrix z,
                     const CollocationSettings& cfg) {
  NewtonOutcome out;
  const auto dim = sys.dim;
  const auto lc = sys.left_count;
  const auto n_unknown = static_cast<std::size_t>(mesh.point_count()) * static_cast<std::size_t>(dim);
  const double newton_tol = std::max(1e-3 * cfg.tol, 1e-13);

  Matrix f(dim, z.cols());
  std::string why;
  if (!eval_rhs(sys, mesh, z, f, &why)) {
    out.outcome = Outcome::DomainExit;
    out.reason = "initial guess outside the physical domain: " + why;
    return out;
  }
  Vector res;
  if (!eval_residual(sys, mesh, z, f, res)) {
    out.outcome = Outcome::DomainExit;
    out.reason = "boundary conditions not evaluable at initial guess";
    return out;
  }

  BandedMatrix jac(n_unknown, static_cast<std::size_t>(lc + 3 * dim - 1),
                   static_cast<std::size_t>(4 * dim - 1 - lc));
  Vector step(static_cast<Eigen::Index>(n_unknown));
  Matrix z_trial(dim, z.cols());
  Matrix f_trial(dim, z.cols());
  Vector res_trial;

  for (int it = 0; it <= cfg.max_newton_iterations; ++it) {
    const Vector w = residual_weights(sys, mesh, f);
    if (weighted_norm_inf(w, res) <= newton_tol) {
      out.outcome = Outcome::Converged;
      out.iterations = it;
      out.z = std::move(z);
      out.f = std::move(f);
      return out;
    }
    if (it == cfg.max_newton_iterations) break;

    if (!assemble_jacobian(sys, mesh, z, jac)) {
      out.outcome = Outcome::DomainExit;
      out.reason = describe("Jacobian not evaluable", it);
      return out;
    }
    try {
      jac.factorize();
    } catch (const SingularMatrix&) {
      out.reason = describe("singular collocation Jacobian", it);
      return out;
    }
    step = -res;
    jac.solve(std::span<double>(step.data(), n_unknown));
    if (!step.allFinite()) {
      out.reason = describe("non-finite Newton correction", it);
      return out;
    }
    const Eigen::Map<const Matrix> dz(step.data(), dim, z.cols());

    const double merit0 = weighted_norm2(w, res);
    double lambda = 1.0;
    bool accepted = false;
    bool any_in_domain = false;
    for (int k = 0; k <= cfg.max_damping_halvings; ++k, lambda *= 0.5) {
      z_trial = z + lambda * dz;
      if (!eval_rhs(sys, mesh, z_trial, f_trial)) continue;
      if (!eval_residual(sys, mesh, z_trial, f_trial, res_trial)) continue;
      any_in_domain = true;
      const double merit = weighted_norm2(w, res_trial);
      if (merit <= (1.0 - 1e-4 * lambda) * merit0) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_in_domain) {
        out.outcome = Outcome::DomainExit;
        out.reason = describe("every damped Newton step left the physical domain", it + 1);
      } else {
        // Round-off floor: the full residual is already below tol.
        if (weighted_norm_inf(w, res) <= cfg.tol) {
          out.outcome = Outcome::Converged;
          out.iterations = it;
          out.z = std::move(z);
          out.f = std::move(f);
          return out;
        }
        out.reason = describe("Newton damping factor underflow", it + 1);
      }
      return out;
    }
    std::swap(z, z_trial);
    std::swap(f, f_trial);
    std::swap(res, res_trial);
  }
  out.reason = describe("Newton iteration budget exhausted", cfg.max_newton_iterations);
  return out;
}

MeshSolution make_solution(const Mesh& mesh, Matrix z, Matrix f, int iterations) {
  MeshSolution sol{mesh, std::move(z), std::move(f), {}, iterations, false};
  return sol;
}

Mesh refine(const Mesh& mesh, const std::vector<double>& estimate, double tol) {
  std::vector<double> x;
  x.reserve(2 * mesh.breakpoints().size());
  const auto& bp = mesh.breakpoints();
  for (std::size_t n = 0; n < mesh.intervals(); ++n) {
    x.push_back(bp[n]);
    const double e = estimate[n];
    if (e > tol) {
      // Residual decays like h^4.
      int pieces = std::isfinite(e) ? static_cast<int>(std::ceil(std::pow(e / tol, 0.25))) : 2;
      pieces = std::clamp(pieces, 2, 4);
      for (int k = 1; k < pieces; ++k) {
        x.push_back(bp[n] + (bp[n + 1] - bp[n]) * static_cast<double>(k) / pieces);
      }
    }
  }
  x.push_back(bp.back());
  return Mesh(std::move(x));
}

void check_system(const BvpSystem& sys, const MeshSolution& guess) {
  if (sys.dim < 1 || sys.left_count < 0 || sys.left_count > sys.dim) {
    throw std::invalid_argument("BVP system dimensions inconsistent");
  }
  if (!sys.rhs || !sys.jacobian || !sys.left_bc || !sys.left_bc_jacobian || !sys.right_bc ||
      !sys.right_bc_jacobian) {
    throw std::invalid_argument("BVP system callbacks missing");
  }
  if (guess.values.rows() != sys.dim ||
      guess.values.cols() != static_cast<Eigen::Index>(guess.mesh.point_count())) {
    throw std::invalid_argument("guess does not match system dimension or mesh");
  }
}

}  // namespace

Mesh::Mesh(std::vector<double> breakpoints) : x_(std::move(breakpoints)) {
  if (x_.size() < kMinIntervals + 1) {
    throw std::invalid_argument("mesh needs at least 4 intervals");
  }
  for (std::size_t i = 0; i + 1 < x_.size(); ++i) {
    if (!(x_[i + 1] > x_[i])) throw std::invalid_argument("mesh breakpoints must increase");
  }
}

Mesh Mesh::uniform(double a, double b, std::size_t intervals) {
  if (!(b > a)) throw std::invalid_argument("mesh span requires a < b");
  std::vector<double> x(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    x[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(intervals);
  }
  x.back() = b;
  return Mesh(std::move(x));
}

double Mesh::point(std::size_t index) const {
  const std::size_t n = index / 3;
  const std::size_t k = index % 3;
  if (n == intervals()) return x_.back();
  return x_[n] + lobatto::nodes()[k] * width(n);
}

std::size_t Mesh::locate(double s) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), s);
  if (it == x_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it)) - 1;
  return std::min(idx, intervals() - 1);
}

Vector MeshSolution::evaluate(double s) const {
  const std::size_t n = mesh.locate(s);
  const double h = mesh.width(n);
  const double tau = (s - mesh.breakpoints()[n]) / h;
  const auto c0 = static_cast<Eigen::Index>(3 * n);
  if (tau == 0.0) return values.col(c0);
  if (tau == 1.0) return values.col(c0 + 3);
  const auto b = lobatto::basis_integral(tau);
  Vector p = values.col(c0);
  for (int j = 0; j < lobatto::kStages; ++j) p += h * b[j] * slopes.col(c0 + j);
  return p;
}

Vector MeshSolution::derivative(double s) const {
  const std::size_t n = mesh.locate(s);
  const double tau = (s - mesh.breakpoints()[n]) / mesh.width(n);
  const auto c0 = static_cast<Eigen::Index>(3 * n);
  const auto l = lobatto::basis(tau);
  Vector d = Vector::Zero(dim());
  for (int j = 0; j < lobatto::kStages; ++j) d += l[j] * slopes.col(c0 + j);
  return d;
}

Vector MeshSolution::second_derivative(double s) const {
  const std::size_t n = mesh.locate(s);
  const double h = mesh.width(n);
  const double tau = (s - mesh.breakpoints()[n]) / h;
  const auto c0 = static_cast<Eigen::Index>(3 * n);
  const auto dl = lobatto::basis_derivative(tau);
  Vector d = Vector::Zero(dim());
  for (int j = 0; j < lobatto::kStages; ++j) d += dl[j] / h * slopes.col(c0 + j);
  return d;
}

double MeshSolution::max_error_estimate() const {
  if (error_estimate.empty()) return kInf;
  return *std::max_element(error_estimate.begin(), error_estimate.end());
}

MeshSolution MeshSolution::sample(const Mesh& mesh, const std::function<Vector(double)>& value,
                                  const std::function<Vector(double)>& slope) {
  const auto np = static_cast<Eigen::Index>(mesh.point_count());
  const Vector v0 = value(mesh.start());
  Matrix vals(v0.size(), np);
  Matrix slps(v0.size(), np);
  for (Eigen::Index j = 0; j < np; ++j) {
    const double s = mesh.point(static_cast<std::size_t>(j));
    vals.col(j) = value(s);
    slps.col(j) = slope(s);
  }
  return MeshSolution{mesh, std::move(vals), std::move(slps), {}, 0, false};
}

MeshSolution MeshSolution::resample(const Mesh& other) const {
  return sample(
      other, [this](double s) { return evaluate(s); },
      [this](double s) { return derivative(s); });
}

void CollocationSettings::validate() const {
  if (!(tol > 0.0)) throw std::invalid_argument("collocation tolerance must be positive");
  if (max_newton_iterations < 1) throw std::invalid_argument("Newton budget must be >= 1");
  if (max_damping_halvings < 0) throw std::invalid_argument("damping halvings must be >= 0");
  if (max_nodes < kMinIntervals + 1) throw std::invalid_argument("node budget too small");
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Converged:
      return "Converged";
    case Outcome::NoConvergence:
      return "NoConvergence";
    case Outcome::DomainExit:
      return "DomainExit";
  }
  return "Unknown";
}

double scaled_residual(const Vector& dp, const Vector& f) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < f.size(); ++k) {
    r = std::max(r, std::abs(dp[k] - f[k]) / (1.0 + std::abs(f[k])));
  }
  return r;
}

std::vector<double> residual_estimate(const BvpSystem& sys, const MeshSolution& sol) {
  const Mesh& mesh = sol.mesh;
  std::vector<double> est(mesh.intervals(), 0.0);
  Vector fy(sys.dim);
  Vector p(sys.dim);
  Vector dp(sys.dim);
  for (std::size_t n = 0; n < mesh.intervals(); ++n) {
    const double h = mesh.width(n);
    const double x0 = mesh.breakpoints()[n];
    const auto c0 = static_cast<Eigen::Index>(3 * n);
    double worst = 0.0;
    for (double tau : kResidualSamples) {
      const auto b = lobatto::basis_integral(tau);
      const auto l = lobatto::basis(tau);
      p = sol.values.col(c0);
      dp.setZero();
      for (int j = 0; j < lobatto::kStages; ++j) {
        p += h * b[j] * sol.slopes.col(c0 + j);
        dp += l[j] * sol.slopes.col(c0 + j);
      }
      try {
        sys.rhs(x0 + tau * h, p, fy);
      } catch (const DomainError&) {
        worst = kInf;
        break;
      }
      const double r = scaled_residual(dp, fy);
      worst = std::isfinite(r) ? std::max(worst, r) : kInf;
    }
    est[n] = worst;
  }
  return est;
}

SolveReport solve_on_mesh(const BvpSystem& sys, const MeshSolution& guess,
                          const CollocationSettings& cfg) {
  cfg.validate();
  check_system(sys, guess);
  SolveReport report;
  NewtonOutcome nr = newton(sys, guess.mesh, guess.values, cfg);
  report.outcome = nr.outcome;
  report.reason = nr.reason;
  if (nr.outcome == Outcome::Converged) {
    MeshSolution sol = make_solution(guess.mesh, std::move(nr.z), std::move(nr.f), nr.iterations);
    sol.error_estimate = residual_estimate(sys, sol);
    sol.converged = true;
    report.solution = std::move(sol);
  }
  return report;
}

SolveReport solve_bvp(const BvpSystem& sys, const MeshSolution& guess,
                      const CollocationSettings& cfg) {
  cfg.validate();
  check_system(sys, guess);
  SolveReport report;
  Mesh mesh = guess.mesh;
  Matrix z = guess.values;
  int total_iterations = 0;

  for (int round = 0;; ++round) {
    NewtonOutcome nr = newton(sys, mesh, std::move(z), cfg);
    total_iterations += nr.iterations;
    if (nr.outcome != Outcome::Converged) {
      report.outcome = nr.outcome;
      std::ostringstream os;
      os << nr.reason << " on mesh of " << mesh.intervals() << " intervals";
      report.reason = os.str();
      return report;
    }
    MeshSolution sol = make_solution(mesh, std::move(nr.z), std::move(nr.f), total_iterations);
    sol.error_estimate = residual_estimate(sys, sol);
    if (sol.max_error_estimate() <= cfg.tol) {
      sol.converged = true;
      report.outcome = Outcome::Converged;
      report.solution = std::move(sol);
      return report;
    }
    if (round >= cfg.max_refinements) {
      report.outcome = Outcome::NoConvergence;
      report.reason = "mesh refinement round limit reached";
      return report;
    }
    Mesh finer = refine(mesh, sol.error_estimate, cfg.tol);
    if (finer.breakpoints().size() > cfg.max_nodes) {
      report.outcome = Outcome::NoConvergence;
      std::ostringstream os;
      os << "mesh node budget of " << cfg.max_nodes << " exceeded";
      report.reason = os.str();
      return report;
    }
    z = sol.resample(finer).values;
    mesh = std::move(finer);
  }
}

}  // namespace fiberspin::collocation
