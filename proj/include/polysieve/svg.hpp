#pragma once

#include <string>
#include <vector>

namespace polysieve::svg {

struct Line {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f4e9c";
  bool dashed = false;
};

struct Band {
  std::string label;
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> upper;
  std::string color = "#1f4e9c";
};

struct Points {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#333333";
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Band> bands;
  std::vector<Line> lines;
  std::vector<Points> points;
  int width = 720;
  int height = 460;
};

/// Self-contained SVG document: axes with ticks, band fills, polylines,
/// circle markers and a legend. Non-finite values are skipped.
std::string render(const Plot& plot);

}  // namespace polysieve::svg
