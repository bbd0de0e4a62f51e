// Parameter-grid studies over continuation_solve + classify, the empirical
// convergence boundary in delta, and CSV/JSON persistence of the records.
#pragma once

#include "fiberspin/analysis.hpp"
#include "fiberspin/collocation.hpp"
#include "fiberspin/fiber_solver.hpp"
#include "fiberspin/model.hpp"

#include <atomic>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberspin {

/// Values of one parameter axis, in order.
std::vector<double> linspace(double min, double max, std::size_t count);

/// One rectangular block of a plan. The delta axis is given either directly
/// or as delta/epsilon^2 (`delta_is_ratio`), which keeps grids aligned with
/// the existence curve. Iteration order: epsilon, kappa, delta (innermost).
struct SweepGrid {
  std::vector<double> delta_values;
  bool delta_is_ratio = false;
  std::vector<double> epsilon_values;
  std::vector<double> kappa_values;

  [[nodiscard]] std::size_t size() const {
    return delta_values.size() * epsilon_values.size() * kappa_values.size();
  }
};

struct SweepPlan {
  std::vector<SweepGrid> grids;
  double length = 1.0;
  SolverSettings solver;
  unsigned jobs = 1;
  /// When false every wall_time is written as 0, making exports reproducible.
  bool record_timing = true;

  /// Throws ParameterError on an empty axis or an invalid grid point.
  void validate() const;
  /// All grid points in iteration order.
  [[nodiscard]] std::vector<SpinParams> points() const;
};

struct SweepRecord {
  SpinParams params;
  collocation::Outcome outcome = collocation::Outcome::NoConvergence;
  std::string reason;
  std::optional<double> q0;  ///< present iff Converged
  std::optional<ClassificationReport> classification;
  Q0Bounds bounds;
  double ratio = 0.0;
  double p_kappa = 0.0;
  double wall_time = 0.0;
  std::size_t continuation_attempts = 0;
};

/// Solves and classifies one point.
SweepRecord solve_point(const SpinParams& params, const SolverSettings& settings,
                        bool record_timing = true);

/// One record per grid point, in grid order regardless of `plan.jobs`.
/// If `cancel` becomes true, workers stop taking points and only the points
/// finished so far are returned (still in grid order, possibly with gaps).
std::vector<SweepRecord> run_sweep(const SweepPlan& plan,
                                   const std::atomic<bool>* cancel = nullptr);

/// Calls fn(i) for i in [0, count) on `jobs` threads; indices are handed out
/// by an atomic counter. The first exception is rethrown after all threads join.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn,
                  const std::atomic<bool>* cancel = nullptr);

class NoBracket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundaryProbe {
  double delta = 0.0;
  bool converged = false;
};

struct BoundaryResult {
  double epsilon = 0.0;
  double kappa = 0.0;
  double length = 1.0;
  double delta_lo = 0.0;  ///< largest converged delta found
  double delta_hi = 0.0;  ///< smallest failed delta above it
  double ratio_lo = 0.0;
  double ratio_hi = 0.0;
  double p_kappa = 0.0;
  std::vector<BoundaryProbe> probes;  ///< scan first, then bisection

  /// (p - ratio_hi)/p; nonnegative when failure sets in below the analytic bound.
  [[nodiscard]] double relative_gap() const { return (p_kappa - ratio_hi) / p_kappa; }
};

/// First delta of the geometric scan: a quarter of the analytic bound.
double boundary_scan_start(double epsilon, double kappa);
/// Gap between the first two scan points; finer resolutions are meaningful.
double boundary_scan_step(double epsilon, double kappa);

/// Geometric scan delta_k = start * sqrt(2)^k until three consecutive
/// failures, then bisection on Converged(delta) down to `resolution`.
/// Throws NoBracket if the first scan point fails or no failure run appears.
BoundaryResult find_boundary(double epsilon, double kappa, double length, double resolution,
                             const SolverSettings& settings = {}, unsigned jobs = 1);

/// Exact CSV header of export_csv.
const std::vector<std::string>& csv_columns();

void write_csv(const std::vector<SweepRecord>& records, std::ostream& out);
void write_json(const std::vector<SweepRecord>& records, std::ostream& out);
/// File variants; throw IoError if the path cannot be written.
void export_csv(const std::vector<SweepRecord>& records, const std::string& path);
void export_json(const std::vector<SweepRecord>& records, const std::string& path);

/// Parses a CSV written by write_csv. Fields absent from the CSV (reason,
/// derivative checks) stay default. Throws IoError on malformed input.
std::vector<SweepRecord> read_csv(std::istream& in);

}  // namespace fiberspin
