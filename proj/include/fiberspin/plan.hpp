// Plan files: flat `key = value` text, one axis per line.
//
//   # left reference block
//   length  = 1
//   epsilon = 0.25
//   kappa   = 0.1
//   delta   = 0.1, 0.125, 0.13, 0.133, 0.135
//
//   [grid]                 # starts another block
//   epsilon = 0.2
//   kappa   = 0:0.6:20     # min:max:count
//   ratio   = 0.5:4:20     # delta/epsilon^2 instead of delta
//
// Global keys (length, tol, jobs, max_nodes, newton_iterations) may appear
// anywhere. A file with no axis lines is an empty plan.
#pragma once

#include "fiberspin/sweep.hpp"

#include <istream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fiberspin {

class PlanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "a, b, c" or "min:max:count".
std::vector<double> parse_axis(const std::string& text);

SweepPlan parse_plan(std::istream& in);
SweepPlan load_plan(const std::string& path);

}  // namespace fiberspin
