#pragma once

// Numeric leaf plots of rank-one foliations on a 2-dimensional chart.

#include <array>
#include <string>
#include <vector>

#include "bilag/calculus.hpp"

namespace bilag {

struct PlotFamily {
  std::string name;
  VectorField field;  // generator of the foliation
  std::string color;
};

struct PlotOptions {
  std::array<double, 4> window{-2, 2, -2, 2};  // xmin, xmax, ymin, ymax
  int leaves = 9;                              // seeds per family
  double step = 0.05;                          // RK4 step in arc length
  int steps = 200;                             // per direction
  int size = 480;                              // pixels
};

struct Plot {
  std::string svg;
  std::size_t curves = 0;
  std::size_t points = 0;
};

/// Integral curves through evenly spaced seeds on the window's center line
/// crossing each family, drawn with fixed-step RK4 on the unit-speed field.
/// Throws DomainError on a chart that is not 2-dimensional or on a field with
/// unbound opaque functions.
Plot plot_leaves(const std::vector<PlotFamily>& families, const PlotOptions& options);

}  // namespace bilag
