#include "polysieve/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace polysieve::svg {

namespace {

constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 55;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` ticks.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double f = r < 1.5 ? 1 : r < 3.5 ? 2 : r < 7.5 ? 5 : 10;
  return f * mag;
}

}  // namespace

std::string render(const Plot& plot) {
  Range xr, yr;
  for (const auto& b : plot.bands) {
    for (double v : b.x) xr.add(v);
    for (double v : b.lower) yr.add(v);
    for (double v : b.upper) yr.add(v);
  }
  for (const auto& l : plot.lines) {
    for (double v : l.x) xr.add(v);
    for (double v : l.y) yr.add(v);
  }
  for (const auto& p : plot.points) {
    for (double v : p.x) xr.add(v);
    for (double v : p.y) yr.add(v);
  }
  xr.finish();
  yr.finish();
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  const double w = plot.width, h = plot.height;
  const double pw = w - kLeft - kRight, ph = h - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
       "\" viewBox=\"0 0 " + num(w) + ' ' + num(h) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
       escape(plot.title) + "</text>\n";

  // Axes and ticks.
  s += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(pw) +
       "\" height=\"" + num(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  const double xs = nice_step(xr.hi - xr.lo, 8);
  for (double t = std::ceil(xr.lo / xs) * xs; t <= xr.hi + 1e-9 * xs; t += xs) {
    const double px = sx(t);
    s += "<line x1=\"" + num(px) + "\" y1=\"" + num(kTop + ph) + "\" x2=\"" + num(px) + "\" y2=\"" +
         num(kTop + ph + 5) + "\" stroke=\"#444\"/>\n";
    s += "<text x=\"" + num(px) + "\" y=\"" + num(kTop + ph + 18) + "\" text-anchor=\"middle\">" +
         tick_label(t) + "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo, 6);
  for (double t = std::ceil(yr.lo / ys) * ys; t <= yr.hi + 1e-9 * ys; t += ys) {
    const double py = sy(t);
    s += "<line x1=\"" + num(kLeft - 5) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
         num(py) + "\" stroke=\"#444\"/>\n";
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kLeft + pw) +
         "\" y2=\"" + num(py) + "\" stroke=\"#eee\"/>\n";
    s += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" +
         tick_label(t) + "</text>\n";
  }
  s += "<text x=\"" + num(kLeft + pw / 2) + "\" y=\"" + num(h - 12) + "\" text-anchor=\"middle\">" +
       escape(plot.x_label) + "</text>\n";
  s += "<text transform=\"translate(18 " + num(kTop + ph / 2) +
       ") rotate(-90)\" text-anchor=\"middle\">" + escape(plot.y_label) + "</text>\n";

  s += "<g>\n";
  for (const auto& b : plot.bands) {
    std::string pts;
    for (std::size_t i = 0; i < b.x.size(); ++i) {
      if (std::isfinite(b.x[i]) && std::isfinite(b.upper[i])) {
        pts += num(sx(b.x[i])) + ',' + num(sy(b.upper[i])) + ' ';
      }
    }
    for (std::size_t i = b.x.size(); i-- > 0;) {
      if (std::isfinite(b.x[i]) && std::isfinite(b.lower[i])) {
        pts += num(sx(b.x[i])) + ',' + num(sy(b.lower[i])) + ' ';
      }
    }
    s += "<polygon points=\"" + pts + "\" fill=\"" + b.color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
  }
  for (const auto& l : plot.lines) {
    std::string pts;
    for (std::size_t i = 0; i < l.x.size(); ++i) {
      if (std::isfinite(l.x[i]) && std::isfinite(l.y[i])) {
        pts += num(sx(l.x[i])) + ',' + num(sy(l.y[i])) + ' ';
      }
    }
    s += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + l.color +
         "\" stroke-width=\"1.8\"" + (l.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
  }
  for (const auto& p : plot.points) {
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      if (!std::isfinite(p.x[i]) || !std::isfinite(p.y[i])) continue;
      s += "<circle cx=\"" + num(sx(p.x[i])) + "\" cy=\"" + num(sy(p.y[i])) +
           "\" r=\"3\" fill=\"none\" stroke=\"" + p.color + "\"/>\n";
    }
  }
  s += "</g>\n";

  // Legend.
  double ly = kTop + 10;
  const double lx = kLeft + pw + 15;
  auto legend_text = [&](const std::string& label) {
    s += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\">" + escape(label) + "</text>\n";
    ly += 20;
  };
  for (const auto& b : plot.bands) {
    s += "<rect x=\"" + num(lx) + "\" y=\"" + num(ly - 6) + "\" width=\"22\" height=\"12\" fill=\"" +
         b.color + "\" fill-opacity=\"0.2\"/>\n";
    legend_text(b.label);
  }
  for (const auto& l : plot.lines) {
    s += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 22) + "\" y2=\"" +
         num(ly) + "\" stroke=\"" + l.color + "\" stroke-width=\"1.8\"" +
         (l.dashed ? " stroke-dasharray=\"6 4\"" : "") + "/>\n";
    legend_text(l.label);
  }
  for (const auto& p : plot.points) {
    s += "<circle cx=\"" + num(lx + 11) + "\" cy=\"" + num(ly) + "\" r=\"3\" fill=\"none\" stroke=\"" +
         p.color + "\"/>\n";
    legend_text(p.label);
  }
  s += "</svg>\n";
  return s;
}

}  // namespace polysieve::svg
