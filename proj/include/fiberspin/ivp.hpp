// Explicit adaptive initial-value integration: Dormand-Prince 5(4) with
// proportional-integral step control and the standard fourth-order
// continuous extension for dense output.
#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberspin::ivp {

using Vector = Eigen::VectorXd;
using VectorField = std::function<Vector(double, const Vector&)>;

struct IvpConfig {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t max_steps = 200000;
  std::optional<double> initial_step;

  void validate() const;
};

class StepBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step size fell below what floating point can resolve; usually a
/// singularity of the vector field (e.g. v^3 -> lambda^2).
class StepUnderflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OutOfSpan : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

enum class StopReason { Completed, DomainStop };

/// Accepted steps plus per-step dense-output coefficients.
class Trajectory {
 public:
  Trajectory() = default;

  [[nodiscard]] std::size_t size() const { return times_.size(); }
  [[nodiscard]] double time(std::size_t i) const { return times_[i]; }
  [[nodiscard]] const Vector& state(std::size_t i) const { return states_[i]; }
  [[nodiscard]] const std::vector<double>& times() const { return times_; }
  [[nodiscard]] double start() const { return times_.front(); }
  [[nodiscard]] double end() const { return times_.back(); }

  /// Interpolated state; exact at nodes. Throws OutOfSpan outside [start, end].
  [[nodiscard]] Vector evaluate(double t) const;

  [[nodiscard]] StopReason stop_reason() const { return stop_reason_; }
  [[nodiscard]] const std::string& stop_message() const { return stop_message_; }
  [[nodiscard]] bool completed() const { return stop_reason_ == StopReason::Completed; }

 private:
  friend Trajectory integrate(const VectorField&, const Vector&, double, double,
                              const IvpConfig&);

  std::vector<double> times_;
  std::vector<Vector> states_;
  // Five coefficient vectors per step (Hairer's rcont1..rcont5).
  std::vector<std::array<Vector, 5>> dense_;
  StopReason stop_reason_ = StopReason::Completed;
  std::string stop_message_;
};

/// Adaptive integration of y' = rhs(t, y) over [a, b].
/// A DomainError raised by rhs that cannot be avoided by shrinking the step
/// ends the integration early with StopReason::DomainStop.
Trajectory integrate(const VectorField& rhs, const Vector& initial, double a, double b,
                     const IvpConfig& config = {});

inline Vector evaluate(const Trajectory& traj, double t) { return traj.evaluate(t); }

/// Which member of the embedded pair advances the solution in fixed-step mode.
enum class PairMember { Fifth, EmbeddedFourth };

/// Fixed-step integration, used to measure convergence order.
/// Returns the state at b.
Vector integrate_fixed(const VectorField& rhs, const Vector& initial, double a, double b,
                       std::size_t steps, PairMember member = PairMember::Fifth);

}  // namespace fiberspin::ivp
