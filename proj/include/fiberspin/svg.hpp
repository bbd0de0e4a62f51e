// Minimal SVG 1.1 line/scatter plots, panels laid out side by side.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fiberspin::svg {

enum class Style { Line, Markers };

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  Style style = Style::Line;
  std::string color = "#1f77b4";
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool equal_aspect = false;  ///< same data scale on both axes (centerlines)
};

struct Figure {
  std::vector<Panel> panels;
  int panel_width = 460;
  int panel_height = 360;
};

/// "Nice" tick positions (1, 2, 5 x 10^k steps) covering [lo, hi].
std::vector<double> ticks(double lo, double hi, int target = 6);

void write(const Figure& figure, std::ostream& out);
/// Throws IoError if the file cannot be written.
void save(const Figure& figure, const std::string& path);

}  // namespace fiberspin::svg
