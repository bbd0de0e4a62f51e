// Stationary viscous fiber as a collocation BVP: the inviscid starting guess
// and continuation in delta.
#pragma once

#include "fiberspin/collocation.hpp"
#include "fiberspin/ivp.hpp"
#include "fiberspin/model.hpp"

#include <cstddef>
#include <stdexcept>

namespace fiberspin {

class GuessFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ContinuationSettings {
  /// First delta of the continuation path when the direct solve fails.
  double delta_start = 1e-3;
  /// The path gives up when the delta step drops below this fraction of the target.
  double step_min_fraction = 1e-6;
  int max_attempts = 400;
};

struct SolverSettings {
  collocation::CollocationSettings collocation;
  ContinuationSettings continuation;
  std::size_t guess_intervals = 32;
  ivp::IvpConfig guess_ivp{1e-10, 1e-12, 200000, {}};
};

/// The viscous Euler-frame system with its boundary conditions
/// (u, r, beta fixed at the nozzle; q(L) = u(L) - 2 kappa/sqrt(u(L))).
/// States with q <= kEnergyFloor are outside the physical domain.
collocation::BvpSystem viscous_system(const SpinParams& params);

/// Integrates the reduced inviscid system in (v, r, beta) over [0, L].
ivp::Trajectory integrate_inviscid(const SpinParams& params, const ivp::IvpConfig& config);

/// Inviscid solution written in viscous variables on a uniform mesh.
/// Throws GuessFailure if the inviscid trajectory leaves its domain before L.
collocation::MeshSolution inviscid_guess(const SpinParams& params, std::size_t intervals = 32,
                                         const ivp::IvpConfig& config = {1e-10, 1e-12, 200000,
                                                                        {}});

/// Direct solve from the inviscid guess; on failure, continuation in delta
/// from delta_start towards params.delta with step halving. The attempted
/// deltas are recorded in the report's continuation_trace.
collocation::SolveReport continuation_solve(const SpinParams& params,
                                            const SolverSettings& settings = {});

}  // namespace fiberspin
