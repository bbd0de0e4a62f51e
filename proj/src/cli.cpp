#include "fiberspin/cli.hpp"

#include "fiberspin/analysis.hpp"
#include "fiberspin/centerline.hpp"
#include "fiberspin/errors.hpp"
#include "fiberspin/fiber_solver.hpp"
#include "fiberspin/plan.hpp"
#include "fiberspin/svg.hpp"
#include "fiberspin/sweep.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace fiberspin::cli {

using nlohmann::ordered_json;

std::atomic<bool>& interrupt_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

namespace {

struct Options {
  std::optional<double> delta;
  std::optional<double> epsilon;
  double kappa = 0.0;
  std::optional<double> length;
  std::optional<double> tol;
  std::string out;
  std::string svg;
  std::string svg_q0;
  std::string plan;
  bool json = false;
  bool compare_zero_kappa = false;
  bool no_timing = false;
  unsigned jobs = 1;
  double resolution = 1e-3;
};

/// Usage errors detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

SolverSettings settings_from(const Options& o) {
  SolverSettings s;
  if (o.tol) s.collocation.tol = *o.tol;
  s.collocation.validate();
  return s;
}

SpinParams params_from(const Options& o, bool need_delta) {
  if (need_delta && !o.delta) throw UsageError("--delta is required");
  if (!o.epsilon) throw UsageError("--epsilon is required");
  SpinParams p;
  p.delta = o.delta.value_or(0.0);
  p.epsilon = *o.epsilon;
  p.kappa = o.kappa;
  p.length = o.length.value_or(1.0);
  p.validate();
  return p;
}

std::string g(double v, int prec = 10) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

ordered_json settings_json(const SolverSettings& s, double length) {
  return {{"tol", s.collocation.tol},
          {"newton_iterations", s.collocation.max_newton_iterations},
          {"damping_halvings", s.collocation.max_damping_halvings},
          {"initial_intervals", s.guess_intervals},
          {"max_nodes", s.collocation.max_nodes},
          {"max_refinements", s.collocation.max_refinements},
          {"delta_start", s.continuation.delta_start},
          {"step_min_fraction", s.continuation.step_min_fraction},
          {"guess_rel_tol", s.guess_ivp.rel_tol},
          {"length", length}};
}

void header(std::ostream& out, const std::string& command, const SolverSettings& s,
            double length) {
  out << "# fiberspin " << command << " | tol=" << g(s.collocation.tol)
      << " newton_iterations=" << s.collocation.max_newton_iterations
      << " damping=1..2^-" << s.collocation.max_damping_halvings
      << " initial_intervals=" << s.guess_intervals << " max_nodes=" << s.collocation.max_nodes
      << " max_refinements=" << s.collocation.max_refinements
      << " delta_start=" << g(s.continuation.delta_start)
      << " step_min_fraction=" << g(s.continuation.step_min_fraction)
      << " length=" << g(length) << '\n';
}

ordered_json bounds_json(const Q0Bounds& b) {
  return {{"lower_raw", b.lower_raw}, {"upper_raw", b.upper_raw}, {"lower", b.lower},
          {"upper", b.upper}, {"empty", b.empty()}};
}

// ------------------------------------------------------------------- solve

void write_solution_csv(const collocation::MeshSolution& sol, const std::string& path) {
  const auto line = reconstruct_centerline(sol);
  std::ofstream f(path);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << "s,u,q,r,beta,phi,x,y,A\n" << std::setprecision(17);
  for (std::size_t j = 0; j < line.samples.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    const auto& c = line.samples[j];
    f << c.s << ',' << sol.values(0, col) << ',' << sol.values(1, col) << ','
      << sol.values(2, col) << ',' << sol.values(3, col) << ',' << c.phi << ',' << c.x << ','
      << c.y << ',' << c.area << '\n';
  }
  if (!f) throw IoError("write to '" + path + "' failed");
}

void write_solution_svg(const collocation::MeshSolution& sol, const SpinParams& p,
                        const std::string& path) {
  const auto line = reconstruct_centerline(sol);
  svg::Series curve{"centerline", {}, {}, svg::Style::Line, "#1f77b4"};
  svg::Series speed{"u", {}, {}, svg::Style::Line, "#d62728"};
  for (std::size_t j = 0; j < line.samples.size(); ++j) {
    curve.x.push_back(line.samples[j].x);
    curve.y.push_back(line.samples[j].y);
    speed.x.push_back(line.samples[j].s);
    speed.y.push_back(sol.values(0, static_cast<Eigen::Index>(j)));
  }
  svg::Series nozzle{"nozzle", {1.0}, {0.0}, svg::Style::Markers, "#000000"};
  const std::string tag =
      "delta=" + g(p.delta, 4) + " eps=" + g(p.epsilon, 4) + " kappa=" + g(p.kappa, 4);
  svg::Figure fig;
  fig.panels.push_back({"centerline, " + tag, "x", "y", {curve, nozzle}, true});
  fig.panels.push_back({"speed, " + tag, "s", "u", {speed}, false});
  svg::save(fig, path);
}

int cmd_solve(const Options& o, std::ostream& out, std::ostream& err) {
  const auto params = params_from(o, true);
  if (!(params.delta > 0.0)) throw UsageError("--delta must be positive for the viscous solve");
  const auto settings = settings_from(o);
  const auto report = continuation_solve(params, settings);
  const auto crit = existence_criterion(params);
  const auto bounds = q0_bounds(params);

  std::optional<ClassificationReport> cls;
  if (report.converged()) cls = classify(*report.solution, params);

  if (o.json) {
    ordered_json j;
    j["command"] = "solve";
    j["settings"] = settings_json(settings, params.length);
    j["params"] = {{"delta", params.delta}, {"epsilon", params.epsilon},
                   {"kappa", params.kappa}, {"length", params.length}};
    j["outcome"] = collocation::to_string(report.outcome);
    j["reason"] = report.reason;
    j["existence"] = {{"p_kappa", crit.p_kappa}, {"ratio", crit.ratio},
                      {"verdict", to_string(crit.verdict)}};
    j["bounds"] = bounds_json(bounds);
    if (cls) {
      j["q0"] = cls->q0;
      j["classification"] = {{"p1", cls->p1},
                             {"p1_via_derivatives", cls->p1_via_derivatives},
                             {"p2", cls->p2},
                             {"p3", cls->p3},
                             {"physically_relevant", cls->physically_relevant()},
                             {"u_d0", cls->u_d0},
                             {"beta_d0", cls->beta_d0},
                             {"q_d0", cls->q_d0},
                             {"u_dd0_analytic", cls->u_dd0_analytic},
                             {"u_dd0_numeric", cls->u_dd0_numeric},
                             {"uL_dd0_analytic", cls->uL_dd0_analytic},
                             {"in_bounds", cls->in_bounds}};
      j["mesh_intervals"] = report.solution->mesh.intervals();
      j["max_error_estimate"] = report.solution->max_error_estimate();
    } else {
      j["q0"] = nullptr;
    }
    ordered_json trace = ordered_json::array();
    for (const auto& t : report.continuation_trace)
      trace.push_back({{"delta", t.delta}, {"outcome", collocation::to_string(t.outcome)},
                       {"reason", t.reason}});
    j["continuation_trace"] = trace;
    out << j.dump(2) << '\n';
  } else {
    header(out, "solve", settings, params.length);
    out << "parameters   delta=" << g(params.delta) << " epsilon=" << g(params.epsilon)
        << " kappa=" << g(params.kappa) << " length=" << g(params.length) << '\n';
    out << "outcome      " << collocation::to_string(report.outcome);
    if (!report.reason.empty()) out << " (" << report.reason << ")";
    out << '\n';
    if (cls) {
      const auto& sol = *report.solution;
      out << "q0           " << g(cls->q0) << '\n';
      out << "mesh         " << sol.mesh.intervals() << " intervals, max residual estimate "
          << g(sol.max_error_estimate(), 3) << '\n';
      out << "P1           " << (cls->p1 ? "yes" : "no") << "  (q0 in (0, 1-kappa]; via u'(0)="
          << g(cls->u_d0, 6) << ", beta'(0)=" << g(cls->beta_d0, 6) << ": "
          << (cls->p1_via_derivatives ? "yes" : "no") << ")\n";
      out << "P2           " << (cls->p2 ? "yes" : "no") << "  (u''(0) analytic "
          << g(cls->u_dd0_analytic, 8) << ", collocation " << g(cls->u_dd0_numeric, 8) << ")\n";
      out << "P3           " << (cls->p3 ? "yes" : "no") << "  (uL''(0) analytic "
          << g(cls->uL_dd0_analytic, 8) << ")\n";
      out << "relevant     " << (cls->physically_relevant() ? "yes" : "no") << '\n';
    }
    out << "q0 bounds    [" << g(bounds.lower) << ", " << g(bounds.upper) << "]  raw ["
        << g(bounds.lower_raw) << ", " << g(bounds.upper_raw) << "]"
        << (bounds.empty() ? "  empty" : "") << (cls ? (cls->in_bounds ? "  contains q0" : "  q0 OUTSIDE") : "")
        << '\n';
    out << "existence    p(kappa)=" << g(crit.p_kappa) << " delta/eps^2=" << g(crit.ratio) << " "
        << to_string(crit.verdict) << '\n';
    out << "continuation " << report.continuation_trace.size() << " attempt(s)\n";
    for (const auto& t : report.continuation_trace) {
      out << "  delta=" << std::setw(14) << std::left << g(t.delta) << std::right << " "
          << collocation::to_string(t.outcome);
      if (!t.reason.empty() && t.outcome != collocation::Outcome::Converged)
        out << "  " << t.reason;
      out << '\n';
    }
  }

  if (report.converged()) {
    if (!o.out.empty()) write_solution_csv(*report.solution, o.out);
    if (!o.svg.empty()) write_solution_svg(*report.solution, params, o.svg);
    return kExitOk;
  }
  err << "solve: " << collocation::to_string(report.outcome) << ": " << report.reason << '\n';
  return report.outcome == collocation::Outcome::DomainExit ? kExitDomain : kExitNoConvergence;
}

// ---------------------------------------------------------------- inviscid

struct InviscidRun {
  SpinParams params;
  ivp::Trajectory traj;
};

InviscidRun run_inviscid(const SpinParams& p) {
  ivp::IvpConfig cfg{1e-10, 1e-12, 200000, {}};
  return {p, integrate_inviscid(p, cfg)};
}

int cmd_inviscid(const Options& o, std::ostream& out, std::ostream& err) {
  auto params = params_from(o, false);
  params.delta = 0.0;
  std::vector<InviscidRun> runs{run_inviscid(params)};
  if (o.compare_zero_kappa && params.kappa != 0.0) runs.push_back(run_inviscid(params.with_kappa(0.0)));

  const auto& main = runs.front();
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw IoError("cannot open '" + o.out + "' for writing");
    f << "s,v,r,beta,w\n" << std::setprecision(17);
    const double lam = params.lambda();
    for (std::size_t i = 0; i < main.traj.size(); ++i) {
      const auto& y = main.traj.state(i);
      f << main.traj.time(i) << ',' << y[0] << ',' << y[1] << ',' << y[2] << ','
        << y[0] - lam / std::sqrt(y[0]) << '\n';
    }
    if (!f) throw IoError("write to '" + o.out + "' failed");
  }
  if (!o.svg.empty()) {
    const char* colors[] = {"#1f77b4", "#d62728"};
    svg::Panel phase{"phase portrait", "r", "beta", {}, false};
    svg::Panel speed{"inviscid speed", "s", "v", {}, false};
    for (std::size_t k = 0; k < runs.size(); ++k) {
      svg::Series a{"kappa=" + g(runs[k].params.kappa, 4), {}, {}, svg::Style::Line, colors[k]};
      svg::Series b = a;
      for (std::size_t i = 0; i < runs[k].traj.size(); ++i) {
        const auto& y = runs[k].traj.state(i);
        a.x.push_back(y[1]);
        a.y.push_back(y[2]);
        b.x.push_back(runs[k].traj.time(i));
        b.y.push_back(y[0]);
      }
      phase.series.push_back(std::move(a));
      speed.series.push_back(std::move(b));
    }
    svg::save({{phase, speed}, 460, 360}, o.svg);
  }

  double u_dd0 = std::nan("");
  try {
    u_dd0 = u_dd0_inviscid(params.epsilon, params.kappa);
  } catch (const PreconditionError&) {
  }
  const double uL_dd0 = uL_dd0_inviscid(params.epsilon, params.kappa);

  if (o.json) {
    ordered_json j;
    j["command"] = "inviscid";
    j["params"] = {{"epsilon", params.epsilon}, {"kappa", params.kappa},
                   {"length", params.length}, {"lambda", params.lambda()}};
    ordered_json arr = ordered_json::array();
    for (const auto& r : runs) {
      const auto end = r.traj.state(r.traj.size() - 1);
      arr.push_back({{"kappa", r.params.kappa},
                     {"completed", r.traj.completed()},
                     {"s_end", r.traj.end()},
                     {"stop", r.traj.stop_message()},
                     {"steps", r.traj.size() - 1},
                     {"v_end", end[0]},
                     {"r_end", end[1]},
                     {"beta_end", end[2]}});
    }
    j["runs"] = arr;
    j["u_dd0"] = std::isfinite(u_dd0) ? ordered_json(u_dd0) : ordered_json(nullptr);
    j["uL_dd0"] = uL_dd0;
    out << j.dump(2) << '\n';
  } else {
    out << "# fiberspin inviscid | rel_tol=1e-10 abs_tol=1e-12 length=" << g(params.length)
        << '\n';
    out << "parameters   epsilon=" << g(params.epsilon) << " kappa=" << g(params.kappa)
        << " lambda=" << g(params.lambda()) << '\n';
    for (const auto& r : runs) {
      const auto end = r.traj.state(r.traj.size() - 1);
      out << "kappa=" << g(r.params.kappa, 6) << "  "
          << (r.traj.completed() ? "reached L" : "left domain") << " at s=" << g(r.traj.end())
          << "  v=" << g(end[0]) << " r=" << g(end[1]) << " beta=" << g(end[2]) << "  ("
          << r.traj.size() - 1 << " steps)\n";
    }
    out << "u''(0)       "
        << (std::isfinite(u_dd0) ? g(u_dd0) : std::string("n/a (epsilon above validity range)"))
        << '\n';
    out << "uL''(0)      " << g(uL_dd0) << '\n';
  }
  if (!main.traj.completed()) {
    err << "inviscid: trajectory left its domain at s=" << g(main.traj.end()) << " < L ("
        << main.traj.stop_message() << ")\n";
    return kExitDomain;
  }
  return kExitOk;
}

// ------------------------------------------------------------------ bounds

int cmd_bounds(const Options& o, std::ostream& out) {
  const auto params = params_from(o, true);
  const auto crit = existence_criterion(params);
  const auto b = q0_bounds(params);
  if (o.json) {
    ordered_json j;
    j["command"] = "bounds";
    j["params"] = {{"delta", params.delta}, {"epsilon", params.epsilon}, {"kappa", params.kappa}};
    j["p_kappa"] = crit.p_kappa;
    j["ratio"] = crit.ratio;
    j["verdict"] = to_string(crit.verdict);
    j["bounds"] = bounds_json(b);
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  out << "# fiberspin bounds\n";
  out << "parameters   delta=" << g(params.delta) << " epsilon=" << g(params.epsilon)
      << " kappa=" << g(params.kappa) << '\n';
  out << "p(kappa)     " << g(crit.p_kappa) << '\n';
  out << "delta/eps^2  " << g(crit.ratio) << '\n';
  out << "verdict      " << to_string(crit.verdict) << '\n';
  out << "q0 lower     " << g(b.lower) << "  (raw " << g(b.lower_raw) << ")\n";
  out << "q0 upper     " << g(b.upper) << "  (raw " << g(b.upper_raw) << ")\n";
  if (b.empty()) out << "interval     empty: no physically relevant solution\n";
  return kExitOk;
}

// ------------------------------------------------------------------- sweep

void sweep_svg(const std::vector<SweepRecord>& recs, const std::string& path) {
  svg::Series good{"relevant", {}, {}, svg::Style::Markers, "#2ca02c"};
  svg::Series other{"converged, not relevant", {}, {}, svg::Style::Markers, "#ff7f0e"};
  svg::Series fail{"no convergence", {}, {}, svg::Style::Markers, "#bbbbbb"};
  double kmin = 0.0, kmax = 0.0;
  bool first = true;
  for (const auto& r : recs) {
    auto& s = r.classification ? (r.classification->physically_relevant() ? good : other) : fail;
    s.x.push_back(r.params.kappa);
    s.y.push_back(r.ratio);
    kmin = first ? r.params.kappa : std::min(kmin, r.params.kappa);
    kmax = first ? r.params.kappa : std::max(kmax, r.params.kappa);
    first = false;
  }
  svg::Series curve{"p(kappa)", {}, {}, svg::Style::Line, "#000000"};
  if (!first) {
    for (double k : linspace(kmin, kmax == kmin ? kmin + 0.1 : kmax, 101)) {
      curve.x.push_back(k);
      curve.y.push_back(existence_bound(k));
    }
  }
  svg::Figure fig;
  fig.panels.push_back({"convergence map", "kappa", "delta/epsilon^2", {fail, other, good, curve}, false});
  svg::save(fig, path);
}

void sweep_q0_svg(const std::vector<SweepRecord>& recs, const std::string& path) {
  // One marker series and one pair of bound curves per (epsilon, kappa).
  std::map<std::pair<double, double>, std::vector<const SweepRecord*>> groups;
  for (const auto& r : recs) groups[{r.params.epsilon, r.params.kappa}].push_back(&r);
  const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  svg::Panel panel{"q0 and its bounds", "delta", "q0", {}, false};
  std::size_t c = 0;
  for (const auto& [key, rs] : groups) {
    const std::string color = palette[c++ % 6];
    const std::string tag = "eps=" + g(key.first, 4) + " kappa=" + g(key.second, 4);
    svg::Series pts{"q0 " + tag, {}, {}, svg::Style::Markers, color};
    double dmax = 0.0;
    for (const auto* r : rs) {
      dmax = std::max(dmax, r->params.delta);
      if (r->q0) {
        pts.x.push_back(r->params.delta);
        pts.y.push_back(*r->q0);
      }
    }
    svg::Series lo{"", {}, {}, svg::Style::Line, color};
    svg::Series hi{"", {}, {}, svg::Style::Line, color};
    SpinParams p = rs.front()->params;
    for (double d : linspace(0.0, dmax, 101)) {
      const auto b = q0_bounds(p.with_delta(d));
      lo.x.push_back(d);
      lo.y.push_back(b.lower);
      hi.x.push_back(d);
      hi.y.push_back(b.upper);
    }
    panel.series.push_back(std::move(pts));
    panel.series.push_back(std::move(lo));
    panel.series.push_back(std::move(hi));
  }
  svg::save({{panel}, 560, 400}, path);
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.plan.empty()) throw UsageError("--plan is required");
  SweepPlan plan;
  try {
    plan = load_plan(o.plan);
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
  if (o.length) plan.length = *o.length;
  if (o.tol) plan.solver.collocation.tol = *o.tol;
  plan.jobs = o.jobs;
  plan.record_timing = !o.no_timing;
  plan.validate();

  if (!o.json) {
    header(out, "sweep", plan.solver, plan.length);
    out << "plan         " << o.plan << ": " << plan.points().size() << " point(s), jobs=" << plan.jobs
        << '\n';
  }
  auto& flag = interrupt_flag();
  const auto recs = run_sweep(plan, &flag);
  const bool interrupted = flag.load();

  if (!o.out.empty()) export_csv(recs, o.out);
  if (!o.svg.empty()) sweep_svg(recs, o.svg);
  if (!o.svg_q0.empty()) sweep_q0_svg(recs, o.svg_q0);

  if (o.json) {
    write_json(recs, out);
  } else {
    std::size_t conv = 0, relevant = 0, forbidden = 0, outside = 0;
    for (const auto& r : recs) {
      if (!r.classification) continue;
      ++conv;
      relevant += r.classification->physically_relevant();
      forbidden += r.ratio >= r.p_kappa;
      outside += !r.classification->in_bounds;
    }
    out << "points       " << recs.size() << " solved, " << conv << " converged, " << relevant
        << " physically relevant\n";
    out << "checks       " << forbidden << " converged at delta/eps^2 >= p(kappa), " << outside
        << " q0 outside bounds\n";
    if (!o.out.empty()) out << "csv          " << o.out << '\n';
  }
  if (interrupted) {
    err << "sweep: interrupted, " << recs.size() << " of " << plan.points().size()
        << " point(s) written\n";
    return kExitInterrupted;
  }
  return kExitOk;
}

// ---------------------------------------------------------------- boundary

int cmd_boundary(const Options& o, std::ostream& out, std::ostream& err) {
  auto params = params_from(o, false);
  const auto settings = settings_from(o);
  const double scan_step = boundary_scan_step(params.epsilon, params.kappa);
  if (!(o.resolution > 0.0)) throw UsageError("--resolution must be positive");
  if (o.resolution > scan_step)
    throw UsageError("--resolution " + g(o.resolution) + " exceeds the initial scan step " +
                     g(scan_step));
  BoundaryResult b;
  try {
    b = find_boundary(params.epsilon, params.kappa, params.length, o.resolution, settings, o.jobs);
  } catch (const NoBracket& e) {
    err << "boundary: no bracket: " << e.what() << '\n';
    return kExitDomain;
  }
  if (o.json) {
    ordered_json j;
    j["command"] = "boundary";
    j["settings"] = settings_json(settings, params.length);
    j["epsilon"] = b.epsilon;
    j["kappa"] = b.kappa;
    j["resolution"] = o.resolution;
    j["delta_lo"] = b.delta_lo;
    j["delta_hi"] = b.delta_hi;
    j["ratio_lo"] = b.ratio_lo;
    j["ratio_hi"] = b.ratio_hi;
    j["p_kappa"] = b.p_kappa;
    j["relative_gap"] = b.relative_gap();
    ordered_json probes = ordered_json::array();
    for (const auto& p : b.probes) probes.push_back({{"delta", p.delta}, {"converged", p.converged}});
    j["probes"] = probes;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  header(out, "boundary", settings, params.length);
  out << "parameters   epsilon=" << g(b.epsilon) << " kappa=" << g(b.kappa)
      << " resolution=" << g(o.resolution) << '\n';
  out << "bracket      delta in (" << g(b.delta_lo) << ", " << g(b.delta_hi) << "]\n";
  out << "ratio        (" << g(b.ratio_lo) << ", " << g(b.ratio_hi) << "]\n";
  out << "p(kappa)     " << g(b.p_kappa) << '\n';
  out << "gap          (p - ratio_hi)/p = " << g(b.relative_gap(), 6) << '\n';
  out << "probes       ";
  for (const auto& p : b.probes) out << g(p.delta, 6) << (p.converged ? "+ " : "- ");
  out << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stationary rotational spinning of viscous fibers with surface tension"};
  app.name("fiberspin");
  app.require_subcommand(1);
  Options o;

  auto params = [&](CLI::App* sub, bool delta) {
    if (delta) sub->add_option("--delta", o.delta, "viscosity parameter delta");
    sub->add_option("--epsilon", o.epsilon, "Rossby number epsilon");
    sub->add_option("--kappa", o.kappa, "surface tension kappa in [0, 1)")->capture_default_str();
    sub->add_option("--length", o.length, "arc length L (default 1)");
  };
  auto solver = [&](CLI::App* sub) {
    sub->add_option("--tol", o.tol, "collocation tolerance (default 1e-8)");
  };

  auto* solve = app.add_subcommand("solve", "viscous stationary solution by collocation");
  params(solve, true);
  solver(solve);
  solve->add_option("--out", o.out, "solution samples CSV");
  solve->add_option("--svg", o.svg, "centerline and speed plot");
  solve->add_flag("--json", o.json, "JSON report on stdout");

  auto* inviscid = app.add_subcommand("inviscid", "inviscid trajectory (delta = 0)");
  params(inviscid, true);
  inviscid->add_option("--out", o.out, "trajectory CSV");
  inviscid->add_option("--svg", o.svg, "phase portrait and speed plot");
  inviscid->add_flag("--compare-zero-kappa", o.compare_zero_kappa, "overlay a kappa = 0 run");
  inviscid->add_flag("--json", o.json, "JSON report on stdout");

  auto* bounds = app.add_subcommand("bounds", "existence criterion and q0 bounds");
  params(bounds, true);
  bounds->add_flag("--json", o.json, "JSON report on stdout");

  auto* sweep = app.add_subcommand("sweep", "parameter grid from a plan file");
  sweep->add_option("--plan", o.plan, "plan file")->required();
  sweep->add_option("--length", o.length, "override the plan's L");
  solver(sweep);
  sweep->add_option("--out", o.out, "records CSV");
  sweep->add_option("--svg", o.svg, "convergence map (kappa vs delta/epsilon^2)");
  sweep->add_option("--svg-q0", o.svg_q0, "q0 vs delta with bound curves");
  sweep->add_flag("--json", o.json, "records as JSON on stdout");
  sweep->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sweep->add_flag("--no-timing", o.no_timing, "write wall_time as 0 (reproducible exports)");

  auto* boundary = app.add_subcommand("boundary", "empirical convergence boundary in delta");
  params(boundary, false);
  solver(boundary);
  boundary->add_option("--resolution", o.resolution, "bracket width")->capture_default_str();
  boundary->add_option("--jobs", o.jobs, "worker threads for the scan")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  boundary->add_flag("--json", o.json, "JSON report on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*solve) return cmd_solve(o, out, err);
    if (*inviscid) {
      try {
        return cmd_inviscid(o, out, err);
      } catch (const ivp::StepUnderflow& e) {
        err << "inviscid: " << e.what() << '\n';
        return kExitDomain;
      }
    }
    if (*bounds) return cmd_bounds(o, out);
    if (*sweep) return cmd_sweep(o, out, err);
    if (*boundary) return cmd_boundary(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {  // ParameterError, PlanError, PreconditionError
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fiberspin::cli
