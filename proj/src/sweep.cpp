#include "fiberspin/sweep.hpp"

#include "fiberspin/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fiberspin {

using collocation::Outcome;

std::vector<double> linspace(double min, double max, std::size_t count) {
  if (count == 0) throw ParameterError("axis needs at least one value");
  if (count == 1) return {min};
  std::vector<double> v(count);
  const double span = max - min;
  for (std::size_t i = 0; i < count; ++i)
    v[i] = min + span * static_cast<double>(i) / static_cast<double>(count - 1);
  v.back() = max;
  return v;
}

void SweepPlan::validate() const {
  if (!(length > 0.0)) throw ParameterError("sweep length must be positive");
  for (std::size_t g = 0; g < grids.size(); ++g) {
    const auto& grid = grids[g];
    if (grid.delta_values.empty() || grid.epsilon_values.empty() || grid.kappa_values.empty()) {
      throw ParameterError("grid " + std::to_string(g + 1) +
                           ": every axis (delta or ratio, epsilon, kappa) needs a value");
    }
  }
  for (const auto& p : points()) {
    p.validate();
    if (!(p.delta > 0.0)) throw ParameterError("sweep points need delta > 0");
  }
}

std::vector<SpinParams> SweepPlan::points() const {
  std::vector<SpinParams> out;
  for (const auto& grid : grids) {
    for (double eps : grid.epsilon_values) {
      for (double kap : grid.kappa_values) {
        for (double d : grid.delta_values) {
          SpinParams p;
          p.epsilon = eps;
          p.kappa = kap;
          p.delta = grid.delta_is_ratio ? d * eps * eps : d;
          p.length = length;
          out.push_back(p);
        }
      }
    }
  }
  return out;
}

SweepRecord solve_point(const SpinParams& params, const SolverSettings& settings,
                        bool record_timing) {
  const auto t0 = std::chrono::steady_clock::now();
  SweepRecord rec;
  rec.params = params;
  const auto crit = existence_criterion(params);
  rec.ratio = crit.ratio;
  rec.p_kappa = crit.p_kappa;
  rec.bounds = q0_bounds(params);

  auto report = continuation_solve(params, settings);
  rec.outcome = report.outcome;
  rec.reason = report.reason;
  rec.continuation_attempts = report.continuation_trace.size();
  if (report.converged()) {
    rec.classification = classify(*report.solution, params);
    rec.q0 = rec.classification->q0;
  }
  if (record_timing) {
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return rec;
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn,
                  const std::atomic<bool>* cancel) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      if (cancel && cancel->load()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        next.store(count);
      }
    }
  };
  const unsigned width = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(width);
    for (unsigned t = 0; t < width; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<SweepRecord> run_sweep(const SweepPlan& plan, const std::atomic<bool>* cancel) {
  plan.validate();
  const auto pts = plan.points();
  std::vector<std::optional<SweepRecord>> slots(pts.size());
  parallel_for(
      pts.size(), plan.jobs,
      [&](std::size_t i) { slots[i] = solve_point(pts[i], plan.solver, plan.record_timing); },
      cancel);
  std::vector<SweepRecord> out;
  out.reserve(pts.size());
  for (auto& s : slots)
    if (s) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------- boundary

double boundary_scan_start(double epsilon, double kappa) {
  return 0.25 * epsilon * epsilon * existence_bound(kappa);
}

double boundary_scan_step(double epsilon, double kappa) {
  return boundary_scan_start(epsilon, kappa) * (std::sqrt(2.0) - 1.0);
}

BoundaryResult find_boundary(double epsilon, double kappa, double length, double resolution,
                             const SolverSettings& settings, unsigned jobs) {
  if (!(resolution > 0.0)) throw PreconditionError("boundary resolution must be positive");
  SpinParams base;
  base.epsilon = epsilon;
  base.kappa = kappa;
  base.length = length;
  base.delta = 1.0;
  base.validate();

  BoundaryResult res;
  res.epsilon = epsilon;
  res.kappa = kappa;
  res.length = length;
  res.p_kappa = existence_bound(kappa);

  auto converges = [&](double delta) {
    return continuation_solve(base.with_delta(delta), settings).converged();
  };

  constexpr std::size_t kMaxScan = 48;
  constexpr int kFailureRun = 3;
  const double start = boundary_scan_start(epsilon, kappa);
  const unsigned batch = std::max(1u, jobs);

  std::vector<BoundaryProbe> scan;
  std::optional<std::size_t> run_begin;  // first failure of the accepted run
  while (!run_begin && scan.size() < kMaxScan) {
    const std::size_t k0 = scan.size();
    const std::size_t n = std::min<std::size_t>(batch, kMaxScan - k0);
    std::vector<BoundaryProbe> chunk(n);
    parallel_for(n, jobs, [&](std::size_t i) {
      const double d = start * std::pow(std::sqrt(2.0), static_cast<double>(k0 + i));
      chunk[i] = {d, converges(d)};
    });
    scan.insert(scan.end(), chunk.begin(), chunk.end());
    if (!scan.front().converged) {
      res.probes = scan;
      std::ostringstream os;
      os << "smallest scanned delta " << scan.front().delta << " does not converge";
      throw NoBracket(os.str());
    }
    int streak = 0;
    for (std::size_t k = 1; k < scan.size(); ++k) {
      streak = scan[k].converged ? 0 : streak + 1;
      if (streak == kFailureRun) {
        run_begin = k + 1 - kFailureRun;
        break;
      }
    }
  }
  res.probes = scan;
  if (!run_begin) {
    std::ostringstream os;
    os << "no run of " << kFailureRun << " failures up to delta " << scan.back().delta;
    throw NoBracket(os.str());
  }

  double lo = scan[*run_begin - 1].delta;
  double hi = scan[*run_begin].delta;
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    const bool ok = converges(mid);
    res.probes.push_back({mid, ok});
    (ok ? lo : hi) = mid;
  }
  res.delta_lo = lo;
  res.delta_hi = hi;
  res.ratio_lo = lo / (epsilon * epsilon);
  res.ratio_hi = hi / (epsilon * epsilon);
  return res;
}

// ------------------------------------------------------------------ export

namespace {

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* flag(bool b) { return b ? "true" : "false"; }

Outcome outcome_from(const std::string& s) {
  for (auto o : {Outcome::Converged, Outcome::NoConvergence, Outcome::DomainExit})
    if (collocation::to_string(o) == s) return o;
  throw IoError("unknown outcome '" + s + "'");
}

}  // namespace

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols = {
      "delta",          "epsilon",       "kappa",           "length", "ratio", "p_kappa",
      "outcome",        "q0",            "q0_lower",        "q0_upper", "u_dd0_analytic",
      "u_dd0_numeric",  "uL_dd0_analytic", "p1",            "p2",     "p3",    "in_bounds",
      "wall_time"};
  return cols;
}

void write_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  for (const auto& r : records) {
    out << num(r.params.delta) << ',' << num(r.params.epsilon) << ',' << num(r.params.kappa) << ','
        << num(r.params.length) << ',' << num(r.ratio) << ',' << num(r.p_kappa) << ','
        << collocation::to_string(r.outcome) << ',' << (r.q0 ? num(*r.q0) : "") << ','
        << num(r.bounds.lower) << ',' << num(r.bounds.upper) << ',';
    if (const auto& c = r.classification) {
      out << num(c->u_dd0_analytic) << ',' << num(c->u_dd0_numeric) << ','
          << num(c->uL_dd0_analytic) << ',' << flag(c->p1) << ',' << flag(c->p2) << ','
          << flag(c->p3) << ',' << flag(c->in_bounds) << ',';
    } else {
      out << ",,,,,,,";
    }
    out << num(r.wall_time) << '\n';
  }
}

void write_json(const std::vector<SweepRecord>& records, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) {
    ordered_json j;
    j["delta"] = r.params.delta;
    j["epsilon"] = r.params.epsilon;
    j["kappa"] = r.params.kappa;
    j["length"] = r.params.length;
    j["ratio"] = r.ratio;
    j["p_kappa"] = r.p_kappa;
    j["outcome"] = collocation::to_string(r.outcome);
    j["reason"] = r.reason;
    j["q0"] = r.q0 ? ordered_json(*r.q0) : ordered_json(nullptr);
    j["bounds"] = {{"lower_raw", r.bounds.lower_raw},
                   {"upper_raw", r.bounds.upper_raw},
                   {"lower", r.bounds.lower},
                   {"upper", r.bounds.upper}};
    if (const auto& c = r.classification) {
      j["classification"] = {{"p1", c->p1},
                             {"p1_via_derivatives", c->p1_via_derivatives},
                             {"p2", c->p2},
                             {"p3", c->p3},
                             {"u_d0", c->u_d0},
                             {"beta_d0", c->beta_d0},
                             {"q_d0", c->q_d0},
                             {"u_dd0_analytic", c->u_dd0_analytic},
                             {"u_dd0_numeric", c->u_dd0_numeric},
                             {"uL_dd0_analytic", c->uL_dd0_analytic},
                             {"in_bounds", c->in_bounds},
                             {"existence", to_string(c->existence)}};
    } else {
      j["classification"] = nullptr;
    }
    j["continuation_attempts"] = r.continuation_attempts;
    j["wall_time"] = r.wall_time;
    arr.push_back(std::move(j));
  }
  out << ordered_json{{"records", std::move(arr)}}.dump(2) << '\n';
}

namespace {

template <class Writer>
void write_file(const std::string& path, Writer w) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  w(f);
  f.flush();
  if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace

void export_csv(const std::vector<SweepRecord>& records, const std::string& path) {
  write_file(path, [&](std::ostream& o) { write_csv(records, o); });
}

void export_json(const std::vector<SweepRecord>& records, const std::string& path) {
  write_file(path, [&](std::ostream& o) { write_json(records, o); });
}

std::vector<SweepRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty CSV");
  {
    std::string expect;
    for (const auto& c : csv_columns()) expect += (expect.empty() ? "" : ",") + c;
    if (line != expect) throw IoError("unexpected CSV header: " + line);
  }
  const std::size_t ncol = csv_columns().size();
  std::vector<SweepRecord> out;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    if (f.size() != ncol) throw IoError("line " + std::to_string(lineno) + ": wrong field count");

    auto number = [&](std::size_t i) {
      char* end = nullptr;
      const double v = std::strtod(f[i].c_str(), &end);
      if (f[i].empty() || *end != '\0')
        throw IoError("line " + std::to_string(lineno) + ": bad number '" + f[i] + "'");
      return v;
    };
    auto boolean = [&](std::size_t i) {
      if (f[i] == "true") return true;
      if (f[i] == "false") return false;
      throw IoError("line " + std::to_string(lineno) + ": bad flag '" + f[i] + "'");
    };

    SweepRecord r;
    r.params.delta = number(0);
    r.params.epsilon = number(1);
    r.params.kappa = number(2);
    r.params.length = number(3);
    r.ratio = number(4);
    r.p_kappa = number(5);
    r.outcome = outcome_from(f[6]);
    if (!f[7].empty()) r.q0 = number(7);
    r.bounds = q0_bounds(r.params);
    r.bounds.lower = number(8);
    r.bounds.upper = number(9);
    if (!f[10].empty()) {
      ClassificationReport c;
      c.q0 = r.q0.value_or(0.0);
      c.u_dd0_analytic = number(10);
      c.u_dd0_numeric = number(11);
      c.uL_dd0_analytic = number(12);
      c.p1 = boolean(13);
      c.p2 = boolean(14);
      c.p3 = boolean(15);
      c.in_bounds = boolean(16);
      c.bounds = r.bounds;
      r.classification = c;
    }
    r.wall_time = number(17);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace fiberspin
