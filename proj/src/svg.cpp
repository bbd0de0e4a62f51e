#include "fiberspin/svg.hpp"

#include "fiberspin/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace fiberspin::svg {

namespace {

constexpr double kMarginLeft = 62, kMarginRight = 16, kMarginTop = 30, kMarginBottom = 46;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    switch (c) {
      case '<': o += "&lt;"; break;
      case '>': o += "&gt;"; break;
      case '&': o += "&amp;"; break;
      case '"': o += "&quot;"; break;
      default: o += c;
    }
  }
  return o;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-300) {
      const double pad = lo == 0.0 ? 1.0 : 0.05 * std::abs(lo);
      lo -= pad, hi += pad;
    }
  }
};

void write_panel(const Panel& p, double ox, double w, double h, std::ostream& out) {
  Range rx, ry;
  for (const auto& s : p.series) {
    for (double v : s.x) rx.add(v);
    for (double v : s.y) ry.add(v);
  }
  rx.settle();
  ry.settle();
  const auto tx = ticks(rx.lo, rx.hi);
  const auto ty = ticks(ry.lo, ry.hi);
  rx.lo = std::min(rx.lo, tx.front()), rx.hi = std::max(rx.hi, tx.back());
  ry.lo = std::min(ry.lo, ty.front()), ry.hi = std::max(ry.hi, ty.back());

  double pw = w - kMarginLeft - kMarginRight;
  double ph = h - kMarginTop - kMarginBottom;
  if (p.equal_aspect) {
    const double scale = std::min(pw / (rx.hi - rx.lo), ph / (ry.hi - ry.lo));
    pw = scale * (rx.hi - rx.lo);
    ph = scale * (ry.hi - ry.lo);
  }
  const double x0 = ox + kMarginLeft, y0 = kMarginTop;
  auto X = [&](double v) { return x0 + (v - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto Y = [&](double v) { return y0 + ph - (v - ry.lo) / (ry.hi - ry.lo) * ph; };

  out << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  out << "<rect x=\"" << fmt(x0) << "\" y=\"" << fmt(y0) << "\" width=\"" << fmt(pw)
      << "\" height=\"" << fmt(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (double t : tx) {
    if (t < rx.lo - 1e-12 || t > rx.hi + 1e-12) continue;
    out << "<line x1=\"" << fmt(X(t)) << "\" y1=\"" << fmt(y0 + ph) << "\" x2=\"" << fmt(X(t))
        << "\" y2=\"" << fmt(y0 + ph + 4) << "\" stroke=\"#333\"/>"
        << "<text x=\"" << fmt(X(t)) << "\" y=\"" << fmt(y0 + ph + 16)
        << "\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : ty) {
    if (t < ry.lo - 1e-12 || t > ry.hi + 1e-12) continue;
    out << "<line x1=\"" << fmt(x0 - 4) << "\" y1=\"" << fmt(Y(t)) << "\" x2=\"" << fmt(x0)
        << "\" y2=\"" << fmt(Y(t)) << "\" stroke=\"#333\"/>"
        << "<text x=\"" << fmt(x0 - 6) << "\" y=\"" << fmt(Y(t) + 4)
        << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  out << "<text x=\"" << fmt(x0 + pw / 2) << "\" y=\"" << fmt(y0 - 10)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(p.title) << "</text>\n";
  out << "<text x=\"" << fmt(x0 + pw / 2) << "\" y=\"" << fmt(y0 + ph + 34)
      << "\" text-anchor=\"middle\">" << escape(p.x_label) << "</text>\n";
  out << "<text transform=\"translate(" << fmt(ox + 14) << "," << fmt(y0 + ph / 2)
      << ") rotate(-90)\" text-anchor=\"middle\">" << escape(p.y_label) << "</text>\n";

  for (const auto& s : p.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.style == Style::Line) {
      // Non-finite samples break the polyline.
      std::string pts;
      auto flush = [&] {
        if (!pts.empty())
          out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\""
              << pts << "\"/>\n";
        pts.clear();
      };
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
          flush();
          continue;
        }
        pts += (pts.empty() ? "" : " ") + fmt(X(s.x[i])) + "," + fmt(Y(s.y[i]));
      }
      flush();
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
        out << "<circle cx=\"" << fmt(X(s.x[i])) << "\" cy=\"" << fmt(Y(s.y[i]))
            << "\" r=\"2.5\" fill=\"" << s.color << "\"/>\n";
      }
    }
  }

  double ly = y0 + 14;
  for (const auto& s : p.series) {
    if (s.label.empty()) continue;
    const double lx = x0 + pw - 110;
    if (s.style == Style::Line)
      out << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\"" << fmt(lx + 18)
          << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << s.color << "\" stroke-width=\"1.5\"/>";
    else
      out << "<circle cx=\"" << fmt(lx + 9) << "\" cy=\"" << fmt(ly - 4) << "\" r=\"2.5\" fill=\""
          << s.color << "\"/>";
    out << "<text x=\"" << fmt(lx + 24) << "\" y=\"" << fmt(ly) << "\">" << escape(s.label)
        << "</text>\n";
    ly += 14;
  }
  out << "</g>\n";
}

}  // namespace

std::vector<double> ticks(double lo, double hi, int target) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> out;
  const double first = std::floor(lo / step) * step;
  for (double t = first; t < hi + 0.5 * step; t += step) out.push_back(t);
  return out;
}

void write(const Figure& f, std::ostream& out) {
  const int n = std::max<int>(1, static_cast<int>(f.panels.size()));
  const int width = n * f.panel_width;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << f.panel_height << "\" viewBox=\"0 0 " << width << ' ' << f.panel_height
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < f.panels.size(); ++i)
    write_panel(f.panels[i], static_cast<double>(i) * f.panel_width, f.panel_width, f.panel_height,
                out);
  out << "</svg>\n";
}

void save(const Figure& f, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  write(f, file);
  if (!file) throw IoError("write to '" + path + "' failed");
}

}  // namespace fiberspin::svg
