#pragma once

#include <functional>
#include <vector>

#include "magstrip/geometry.hpp"

namespace magstrip {

/// Cell-centred 1-D grid: cells tile [faces.front(), faces.back()] and the
/// unknowns live at the cell centres.
struct Grid1D {
  std::vector<double> faces;
  std::vector<double> centers;

  std::size_t size() const { return centers.size(); }
  double width(std::size_t i) const { return faces[i + 1] - faces[i]; }
};

/// Cells of local width ~ spacing(x) tiling [a, b], with every breakpoint
/// inside (a, b) placed on a cell face.
Grid1D make_cell_grid(double a, double b, std::vector<double> breakpoints,
                      const std::function<double(double)>& spacing);

/// Splits every cell in two (nested refinement for Richardson ladders).
Grid1D refine(const Grid1D& g);

struct GridOptions {
  /// Target spacing of the uniform core in x and of the whole y-grid.
  double h = 0.05;
  /// Half-width of the uniform x-core; negative selects it automatically
  /// (window, field support and singular points plus a margin of 2).
  double core_half_width = -1.0;
  /// Geometric growth factor of the x-spacing outside the core (1 = uniform).
  double growth = 1.0;
  double h_max = 0.5;
};

/// Tensor grid on [-L, L] x [0, pi]. Nodes with x1 = +-L or x2 = pi are
/// Dirichlet; bottom nodes are unknowns only on the open window |x1| < l.
/// When the window is wider than h its edges +-l sit at midpoints between
/// nodes; otherwise the node x1 = 0 alone represents it.
struct Grid2D {
  StripGeometry geom;
  std::vector<double> x;  // includes both Dirichlet ends
  int ny = 0;
  double hy = 0.0;
  double hx = 0.0;  // spacing of the uniform core
  std::vector<int> index;  // (i, j) -> unknown number or -1
  int unknowns = 0;
  int window_nodes = 0;
  bool window_edge_on_node = false;

  int nx() const { return static_cast<int>(x.size()); }
  double y(int j) const { return j * hy; }
  Point node(int i, int j) const { return {x[i], y(j)}; }
  int idx(int i, int j) const { return index[static_cast<std::size_t>(i) * (ny + 1) + j]; }
  bool is_window(int i, int j) const { return j == 0 && idx(i, j) >= 0; }
  /// Length of the dual cell around x[i].
  double dual_x(int i) const { return 0.5 * (x[i + 1] - x[i - 1]); }
  double dual_y(int j) const { return j == 0 ? 0.5 * hy : hy; }
  double mass(int i, int j) const { return dual_x(i) * dual_y(j); }
};

/// Builds the grid; `singular` points (Aharonov-Bohm) are kept strictly
/// inside a cell, at least a quarter spacing away from every grid line.
/// `field_extent` is the half-width |x1| beyond which the field vanishes.
Grid2D make_grid(const StripGeometry& geom, const GridOptions& opt, const std::vector<Point>& singular = {},
                 double field_extent = 0.0);

}  // namespace magstrip
