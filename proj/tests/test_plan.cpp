#include "doctest.h"

#include "fiberspin/errors.hpp"
#include "fiberspin/plan.hpp"

#include <sstream>

using namespace fiberspin;

namespace {

SweepPlan parse(const std::string& text) {
  std::istringstream in(text);
  return parse_plan(in);
}

}  // namespace

TEST_CASE("axis syntax") {
  CHECK(parse_axis("0.1, 0.125,0.13") == std::vector<double>{0.1, 0.125, 0.13});
  CHECK(parse_axis("0:1:5") == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  CHECK(parse_axis(" 2 ") == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_axis("0:1"), PlanError);
  CHECK_THROWS_AS(parse_axis("0:1:0"), PlanError);
  CHECK_THROWS_AS(parse_axis("1:0:3"), PlanError);
  CHECK_THROWS_AS(parse_axis("a, b"), PlanError);
  CHECK_THROWS_AS(parse_axis(""), PlanError);
}

TEST_CASE("full plan") {
  const auto plan = parse(R"(# two blocks
length = 1.5
tol = 1e-7
jobs = 3

epsilon = 0.25
kappa = 0.1
delta = 0.1, 0.125, 0.13, 0.133, 0.135   # reference block

[grid]
epsilon = 0.2
kappa = 0:0.6:20
ratio = 0.5:4:20
)");
  CHECK(plan.length == 1.5);
  CHECK(plan.solver.collocation.tol == 1e-7);
  CHECK(plan.jobs == 3);
  REQUIRE(plan.grids.size() == 2);
  CHECK(plan.grids[0].size() == 5);
  CHECK_FALSE(plan.grids[0].delta_is_ratio);
  CHECK(plan.grids[1].delta_is_ratio);
  CHECK(plan.grids[1].size() == 400);
  CHECK(plan.points().size() == 405);
  CHECK(plan.points()[5].delta == doctest::Approx(0.5 * 0.04));
}

TEST_CASE("empty plan") {
  CHECK(parse("").grids.empty());
  CHECK(parse("# nothing\nlength = 2\n").grids.empty());
}

TEST_CASE("plan errors carry line numbers") {
  auto message = [](const std::string& text) {
    try {
      parse(text);
    } catch (const PlanError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("epsilon = 0.2\nkappa 0.1\n").find("line 2") != std::string::npos);
  CHECK(message("speed = 3\n").find("unknown key") != std::string::npos);
  CHECK(message("epsilon = 0.2\nkappa = 0.1\ndelta = 0.1\nratio = 1\n").find("exclusive") !=
        std::string::npos);
  CHECK_FALSE(message("epsilon = 0.2\nkappa = 0.1\n").empty());
  CHECK(message("epsilon = 0.2\nkappa = 1.5\ndelta = 0.1\n").find("kappa") != std::string::npos);
  CHECK_THROWS_AS(load_plan("/nonexistent/plan.txt"), IoError);
}
