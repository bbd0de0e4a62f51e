#include "doctest.h"

#include "fiberspin/errors.hpp"
#include "fiberspin/svg.hpp"

#include <cmath>
#include <sstream>

using namespace fiberspin;

namespace {

std::size_t count(const std::string& s, const std::string& what) {
  std::size_t n = 0;
  for (auto p = s.find(what); p != std::string::npos; p = s.find(what, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("tick positions") {
  const auto t = svg::ticks(0.0, 1.0);
  CHECK(t.front() <= 0.0);
  CHECK(t.back() >= 1.0);
  CHECK(t.size() >= 4);
  CHECK(t.size() <= 12);
  CHECK(t[1] - t[0] == doctest::Approx(0.2));
  const auto n = svg::ticks(-652.0, 12.0);
  CHECK(n.front() <= -652.0);
  CHECK(n[1] - n[0] == doctest::Approx(200.0));
}

TEST_CASE("document structure") {
  svg::Series line{"a < b", {0.0, 1.0, std::nan(""), 2.0, 3.0}, {0.0, 1.0, 0.5, 4.0, 9.0},
                   svg::Style::Line, "#123456"};
  svg::Series dots{"dots", {0.5, 1.5, 2.5}, {1.0, 2.0, 3.0}, svg::Style::Markers, "#654321"};
  svg::Figure fig{{{"first", "x", "y", {line}, false}, {"second", "kappa", "ratio", {dots}, true}}};
  std::ostringstream os;
  svg::write(fig, os);
  const auto s = os.str();
  CHECK(s.rfind("<?xml", 0) == 0);
  CHECK(s.find("width=\"920\"") != std::string::npos);
  CHECK(count(s, "<polyline") == 2);  // the NaN splits the line
  CHECK(count(s, "<circle") == 3 + 1);  // markers + legend swatch
  CHECK(s.find("a &lt; b") != std::string::npos);
  CHECK(count(s, "<g ") == count(s, "</g>"));
  CHECK(s.find("</svg>") != std::string::npos);
  CHECK_THROWS_AS(svg::save(fig, "/nonexistent-dir/f.svg"), IoError);
}

TEST_CASE("degenerate ranges still render") {
  svg::Figure fig{{{"flat", "x", "y", {{"", {1.0, 1.0}, {2.0, 2.0}, svg::Style::Line, "#000"}}, false}}};
  std::ostringstream os;
  svg::write(fig, os);
  CHECK(os.str().find("nan") == std::string::npos);
  CHECK(os.str().find("inf") == std::string::npos);
}
