#include "fiberspin/plan.hpp"

#include "fiberspin/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace fiberspin {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v))
    throw PlanError("not a number: '" + s + "'");
  return v;
}

long to_count(const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0' || v < 1) throw PlanError("count must be a positive integer: '" + s + "'");
  return v;
}

struct GridDraft {
  SweepGrid grid;
  bool has_delta = false;
  bool has_ratio = false;
  bool touched = false;
  int first_line = 0;
};

}  // namespace

std::vector<double> parse_axis(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw PlanError("empty axis");
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string p;
    while (std::getline(ss, p, ':')) parts.push_back(p);
    if (parts.size() != 3) throw PlanError("range must be min:max:count, got '" + s + "'");
    const double lo = to_double(parts[0]);
    const double hi = to_double(parts[1]);
    const long n = to_count(parts[2]);
    if (hi < lo) throw PlanError("range max below min in '" + s + "'");
    return linspace(lo, hi, static_cast<std::size_t>(n));
  }
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(item));
  return out;
}

SweepPlan parse_plan(std::istream& in) {
  SweepPlan plan;
  std::vector<GridDraft> drafts(1);
  std::string line;
  int lineno = 0;

  auto close = [&](GridDraft& d) {
    if (!d.touched) return;
    if (d.grid.delta_values.empty() || d.grid.epsilon_values.empty() ||
        d.grid.kappa_values.empty()) {
      throw PlanError("grid starting at line " + std::to_string(d.first_line) +
                      " needs delta (or ratio), epsilon and kappa");
    }
    plan.grids.push_back(d.grid);
  };

  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = [&] { return "line " + std::to_string(lineno) + ": "; };

    if (line == "[grid]") {
      drafts.emplace_back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw PlanError(where() + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    try {
      auto& d = drafts.back();
      auto axis = [&](std::vector<double>& target) {
        if (!target.empty()) throw PlanError("axis '" + key + "' given twice");
        target = parse_axis(value);
        if (!d.touched) d.first_line = lineno;
        d.touched = true;
      };
      if (key == "delta" || key == "ratio") {
        if (d.has_delta || d.has_ratio) throw PlanError("delta and ratio are exclusive per grid");
        (key == "delta" ? d.has_delta : d.has_ratio) = true;
        d.grid.delta_is_ratio = key == "ratio";
        axis(d.grid.delta_values);
      } else if (key == "epsilon") {
        axis(d.grid.epsilon_values);
      } else if (key == "kappa") {
        axis(d.grid.kappa_values);
      } else if (key == "length") {
        plan.length = to_double(value);
      } else if (key == "tol") {
        plan.solver.collocation.tol = to_double(value);
      } else if (key == "jobs") {
        plan.jobs = static_cast<unsigned>(to_count(value));
      } else if (key == "max_nodes") {
        plan.solver.collocation.max_nodes = static_cast<std::size_t>(to_count(value));
      } else if (key == "newton_iterations") {
        plan.solver.collocation.max_newton_iterations = static_cast<int>(to_count(value));
      } else {
        throw PlanError("unknown key '" + key + "'");
      }
    } catch (const PlanError& e) {
      throw PlanError(where() + e.what());
    }
  }
  for (auto& d : drafts) close(d);
  try {
    plan.solver.collocation.validate();
    plan.validate();
  } catch (const std::invalid_argument& e) {
    throw PlanError(e.what());
  }
  return plan;
}

SweepPlan load_plan(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open plan file '" + path + "'");
  return parse_plan(f);
}

}  // namespace fiberspin
