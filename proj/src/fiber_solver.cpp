#include "fiberspin/fiber_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace fiberspin {

using collocation::Matrix;
using collocation::MeshSolution;
using collocation::Outcome;
using collocation::SolveReport;
using collocation::Vector;

namespace {

void check_physical(const Vector& y) {
  if (!(y[1] > kEnergyFloor)) throw DomainError("internal energy q <= 0");
}

}  // namespace

collocation::BvpSystem viscous_system(const SpinParams& params) {
  params.validate();
  collocation::BvpSystem sys;
  sys.dim = 4;
  sys.left_count = 3;
  sys.rhs = [params](double, const Vector& y, Vector& f) {
    check_physical(y);
    f = rhs_viscous(ViscousState::from_vector(y), params).to_vector();
  };
  sys.jacobian = [params](double, const Vector& y, Matrix& j) {
    check_physical(y);
    j = jacobian_viscous(ViscousState::from_vector(y), params);
  };
  sys.left_bc = [](const Vector& ya, Vector& res) {
    res.resize(3);
    res << ya[0] - 1.0, ya[2] - 1.0, ya[3];
  };
  sys.left_bc_jacobian = [](const Vector&, Matrix& j) {
    j = Matrix::Zero(3, 4);
    j(0, 0) = 1.0;
    j(1, 2) = 1.0;
    j(2, 3) = 1.0;
  };
  const double kappa = params.kappa;
  sys.right_bc = [kappa](const Vector& yb, Vector& res) {
    if (!(yb[0] > kSpeedFloor)) throw DomainError("end speed u(L) must be positive");
    res.resize(1);
    res[0] = yb[1] - yb[0] + 2.0 * kappa / std::sqrt(yb[0]);
  };
  sys.right_bc_jacobian = [kappa](const Vector& yb, Matrix& j) {
    if (!(yb[0] > kSpeedFloor)) throw DomainError("end speed u(L) must be positive");
    j = Matrix::Zero(1, 4);
    j(0, 0) = -1.0 - kappa / (yb[0] * std::sqrt(yb[0]));
    j(0, 1) = 1.0;
  };
  return sys;
}

ivp::Trajectory integrate_inviscid(const SpinParams& params, const ivp::IvpConfig& config) {
  params.validate();
  const ivp::VectorField field = [params](double, const ivp::Vector& y) -> ivp::Vector {
    return rhs_inviscid(InviscidState::from_vector(y), params).to_vector();
  };
  return ivp::integrate(field, InviscidState::at_nozzle(params).to_vector(), 0.0, params.length,
                        config);
}

MeshSolution inviscid_guess(const SpinParams& params, std::size_t intervals,
                            const ivp::IvpConfig& config) {
  ivp::Trajectory traj;
  try {
    traj = integrate_inviscid(params, config);
  } catch (const ivp::StepUnderflow& e) {
    throw GuessFailure(std::string("inviscid trajectory hit a singularity: ") + e.what());
  }
  if (!traj.completed()) {
    std::ostringstream os;
    os << "inviscid trajectory left its domain at s = " << traj.end() << " < L ("
       << traj.stop_message() << ")";
    throw GuessFailure(os.str());
  }
  const auto mesh = collocation::Mesh::uniform(0.0, params.length, intervals);

  auto value = [&](double s) -> Vector {
    const auto inv = InviscidState::from_vector(traj.evaluate(s));
    return viscous_from_inviscid(inv, params).to_vector();
  };
  auto slope = [&](double s) -> Vector {
    const auto inv = InviscidState::from_vector(traj.evaluate(s));
    const auto d = rhs_inviscid(inv, params);
    const double u = inv.v / params.epsilon;
    const double du = d.v / params.epsilon;
    Vector out(4);
    out << du, du * (1.0 + params.kappa / (2.0 * u * std::sqrt(u))), d.r, d.beta;
    return out;
  };
  MeshSolution guess = MeshSolution::sample(mesh, value, slope);
  // Nozzle data hold exactly.
  guess.values(0, 0) = 1.0;
  guess.values(1, 0) = 1.0 - params.kappa;
  guess.values(2, 0) = 1.0;
  guess.values(3, 0) = 0.0;
  return guess;
}

SolveReport continuation_solve(const SpinParams& params, const SolverSettings& settings) {
  params.validate();
  if (!(params.delta > 0.0)) throw PreconditionError("continuation_solve requires delta > 0");
  const double target = params.delta;
  const auto& cont = settings.continuation;

  std::vector<collocation::ContinuationStep> trace;
  auto attempt = [&](double delta, const MeshSolution& guess) {
    SolveReport r =
        collocation::solve_bvp(viscous_system(params.with_delta(delta)), guess,
                               settings.collocation);
    trace.push_back({delta, r.outcome, r.reason});
    return r;
  };
  auto finish = [&](SolveReport r) {
    r.continuation_trace = std::move(trace);
    return r;
  };

  std::optional<MeshSolution> guess;
  try {
    guess = inviscid_guess(params, settings.guess_intervals, settings.guess_ivp);
  } catch (const GuessFailure& e) {
    SolveReport r;
    r.outcome = Outcome::DomainExit;
    r.reason = e.what();
    return r;
  }

  SolveReport direct = attempt(target, *guess);
  if (direct.converged()) return finish(std::move(direct));

  const double delta0 = std::min(target, cont.delta_start);
  if (delta0 >= target) return finish(std::move(direct));

  SolveReport current = attempt(delta0, *guess);
  if (!current.converged()) return finish(std::move(current));

  const double step_min = cont.step_min_fraction * target;
  double delta = delta0;
  double step = delta0;  // first geometric step doubles delta
  // Previous converged point, for the secant predictor.
  std::optional<MeshSolution> previous;
  double delta_previous = 0.0;
  int attempts = 2;
  while (delta < target) {
    if (++attempts > cont.max_attempts) {
      SolveReport r;
      r.outcome = Outcome::NoConvergence;
      r.reason = "continuation attempt budget exhausted";
      return finish(std::move(r));
    }
    const double next = std::min(target, delta + step);
    MeshSolution predicted = *current.solution;
    if (previous) {
      const double w = (next - delta) / (delta - delta_previous);
      const Matrix prev_values = previous->mesh.breakpoints() == predicted.mesh.breakpoints()
                                     ? previous->values
                                     : previous->resample(predicted.mesh).values;
      predicted.values += w * (predicted.values - prev_values);
    }
    SolveReport r = attempt(next, predicted);
    if (r.converged()) {
      step = std::min(2.0 * (next - delta), next);
      previous = std::move(current.solution);
      delta_previous = delta;
      delta = next;
      current = std::move(r);
      continue;
    }
    step = 0.5 * (next - delta);
    if (step < step_min) {
      std::ostringstream os;
      os << "continuation step underflow at delta = " << delta << " towards " << target
         << " (last failure: " << r.reason << ")";
      SolveReport fail;
      fail.outcome = Outcome::NoConvergence;
      fail.reason = os.str();
      return finish(std::move(fail));
    }
  }
  current.reason.clear();
  return finish(std::move(current));
}

}  // namespace fiberspin
