// Two-point boundary value problems y' = f(s, y) with separated boundary
// conditions, discretized by four-stage Lobatto IIIA collocation.
//
// On each mesh interval the solution is the quartic polynomial that matches
// y at the left breakpoint and satisfies the ODE at the four Lobatto points,
// giving a C^1 piecewise polynomial that is fifth-order accurate uniformly.
// The collocation equations are solved directly (all stage values are
// unknowns) by damped Newton with a banded LU, and the mesh is refined where
// the ODE residual of the polynomial exceeds the tolerance.
#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fiberspin::collocation {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr std::size_t kMinIntervals = 4;

/// y' = f(s, y) on [a, b] with `left_count` conditions at a and
/// dim - left_count conditions at b. Any callback may throw DomainError.
struct BvpSystem {
  Eigen::Index dim = 0;
  Eigen::Index left_count = 0;
  std::function<void(double s, const Vector& y, Vector& f)> rhs;
  std::function<void(double s, const Vector& y, Matrix& jac)> jacobian;
  std::function<void(const Vector& ya, Vector& res)> left_bc;
  std::function<void(const Vector& ya, Matrix& jac)> left_bc_jacobian;
  std::function<void(const Vector& yb, Vector& res)> right_bc;
  std::function<void(const Vector& yb, Matrix& jac)> right_bc_jacobian;
};

/// Strictly increasing breakpoints with at least kMinIntervals intervals.
class Mesh {
 public:
  explicit Mesh(std::vector<double> breakpoints);
  static Mesh uniform(double a, double b, std::size_t intervals);

  [[nodiscard]] std::size_t intervals() const { return x_.size() - 1; }
  [[nodiscard]] const std::vector<double>& breakpoints() const { return x_; }
  [[nodiscard]] double start() const { return x_.front(); }
  [[nodiscard]] double end() const { return x_.back(); }
  [[nodiscard]] double width(std::size_t interval) const { return x_[interval + 1] - x_[interval]; }

  /// Collocation points are numbered 3 n + k (k = 0..3 Lobatto stage of
  /// interval n); point 3 n + 3 coincides with 3 (n + 1).
  [[nodiscard]] std::size_t point_count() const { return 3 * intervals() + 1; }
  [[nodiscard]] double point(std::size_t index) const;

  /// Interval containing s (the last one for s == end()).
  [[nodiscard]] std::size_t locate(double s) const;

 private:
  std::vector<double> x_;
};

/// Piecewise quartic described by its values and slopes at the collocation
/// points (columns ordered as in Mesh::point).
struct MeshSolution {
  Mesh mesh;
  Matrix values;
  Matrix slopes;
  std::vector<double> error_estimate;
  int newton_iterations = 0;
  bool converged = false;

  [[nodiscard]] Eigen::Index dim() const { return values.rows(); }
  [[nodiscard]] Vector evaluate(double s) const;
  [[nodiscard]] Vector derivative(double s) const;
  [[nodiscard]] Vector second_derivative(double s) const;
  [[nodiscard]] Vector front() const { return values.col(0); }
  [[nodiscard]] Vector back() const { return values.col(values.cols() - 1); }
  [[nodiscard]] double max_error_estimate() const;

  /// Samples value and slope functions at the collocation points of `mesh`.
  static MeshSolution sample(const Mesh& mesh, const std::function<Vector(double)>& value,
                             const std::function<Vector(double)>& slope);
  /// Evaluates this solution (value and slope) at the points of another mesh.
  [[nodiscard]] MeshSolution resample(const Mesh& other) const;
};

struct CollocationSettings {
  double tol = 1e-8;
  int max_newton_iterations = 50;
  int max_damping_halvings = 10;
  std::size_t max_nodes = 10000;
  int max_refinements = 40;

  void validate() const;
};

enum class Outcome { Converged, NoConvergence, DomainExit };
std::string_view to_string(Outcome outcome);

struct ContinuationStep {
  double delta = 0.0;
  Outcome outcome = Outcome::NoConvergence;
  std::string reason;
};

struct SolveReport {
  Outcome outcome = Outcome::NoConvergence;
  std::string reason;
  std::optional<MeshSolution> solution;
  std::vector<ContinuationStep> continuation_trace;

  [[nodiscard]] bool converged() const {
    return outcome == Outcome::Converged && solution && solution->converged;
  }
};

/// Error-controlled solve: Newton on the guess mesh, then refinement until
/// every interval's scaled residual is <= tol.
SolveReport solve_bvp(const BvpSystem& system, const MeshSolution& guess,
                      const CollocationSettings& settings = {});

/// Newton on the guess mesh only (no refinement). `converged` on the
/// returned solution refers to the discrete collocation equations; the
/// residual estimate is filled in but not enforced.
SolveReport solve_on_mesh(const BvpSystem& system, const MeshSolution& guess,
                          const CollocationSettings& settings = {});

/// Scaled ODE residual of the polynomial, max over three off-collocation
/// points per interval:  |p'(s) - f(s, p(s))|_k / (1 + |f_k(s, p(s))|).
/// Intervals where f cannot be evaluated get +infinity.
std::vector<double> residual_estimate(const BvpSystem& system, const MeshSolution& solution);

/// Componentwise residual scaling shared by the estimate and the audits.
double scaled_residual(const Vector& dp, const Vector& f);

}  // namespace fiberspin::collocation
