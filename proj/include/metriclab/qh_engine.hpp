#pragma once

#include <stdexcept>
#include <vector>

#include "metriclab/geometry.hpp"

namespace metriclab {

// Quadrature could not produce a trustworthy value (a segment runs closer to
// the boundary than 1e-12, or cannot be certified to stay interior).
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Polyline through interior points; a single vertex is the degenerate path.
struct Path {
  std::vector<Point> vertices;
};

// Lattice of spacing `resolution` over `window`, clipped to points with
// boundary clearance at least `delta`. Edges are implicit: the 32 primitive
// integer offsets with max(|i|,|j|) <= 3, weighted by the quasi-hyperbolic
// length of the straight segment.
struct GridGraph {
  double resolution = 0.0;
  double delta = 0.0;
  Rect window{};
  int nx = 0, ny = 0;
  std::vector<Point> nodes;        // kept lattice nodes, row-major order
  std::vector<double> clearance;   // boundary distance per kept node
  std::vector<int> node_id;        // raster cell -> index into nodes, or -1

  static GridGraph build(const Domain& d, const Rect& window, double resolution, double delta);
};

// Certified bracket for the quasi-hyperbolic distance: `upper` is the length
// of an admissible path (so a true upper bound), `lower` the closed-form
// universal lower bound.
struct QHResult {
  double upper = 0.0;
  double lower = 0.0;
  Path path;
  double resolution = 0.0;
  double bracket_width = 0.0;
};

struct RefineOptions {
  // Split segments longer than min(rho, fraction of local clearance);
  // rho <= 0 means use the clearance rule alone.
  double rho = 0.0;
  int max_sweeps = 200;
  double rel_tol = 1e-7;
  int max_vertices = 4096;
};

// Integral of 1/d_D along the polyline: adaptive Gauss-Legendre per segment
// (error target 1e-9), exact logarithmic form on half-plane and interval
// domains. Vertices must be interior; segments of domains that are not known
// to be convex are certified interior by sphere marching before integrating.
double path_length(const Domain& d, const Path& p);

// Monotone non-increasing local improvement: midpoint insertion plus
// golden-section descent of each vertex along 4 fixed directions, swept until
// the relative gain drops below rel_tol. Never worsens the path.
Path refine_path(const Domain& d, const Path& p, const RefineOptions& opt);
Path refine_path(const Domain& d, const Path& p);

// Shortest lattice path from z to w (query points injected as extra graph
// nodes), refined; returns the bracket [i_dist, refined length]. Interval
// domains are delegated to the exact 1-D formula.
QHResult h_num(const Domain& d, const Point& z, const Point& w, double resolution);

struct ConvergenceRow {
  double resolution = 0.0;
  double upper = 0.0;
  double bracket_width = 0.0;
  double order = 0.0;  // empirical rate from the last three rows; NaN until defined
};

// Runs h_num over a decreasing resolution schedule (at least 3 entries),
// carrying the best path forward so the reported uppers never increase.
std::vector<ConvergenceRow> convergence_study(const Domain& d, const Point& z, const Point& w,
                                              std::vector<double> resolutions);

}  // namespace metriclab
