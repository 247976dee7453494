#pragma once

#include <cmath>
#include <complex>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace metriclab {

// Raised for malformed or inconsistent domain descriptions (bad JSON fields,
// self-intersecting polygons, unknown map names, ...).
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A point of the plane (dim == 2) or of the real line (dim == 1, y unused).
struct Point {
  double x = 0.0;
  double y = 0.0;
  int dim = 2;

  static Point planar(double x, double y) { return {x, y, 2}; }
  static Point line(double x) { return {x, 0.0, 1}; }
};

inline std::complex<double> to_complex(const Point& p) { return {p.x, p.y}; }
inline Point from_complex(std::complex<double> z) { return Point::planar(z.real(), z.imag()); }

inline Point operator+(const Point& a, const Point& b) { return {a.x + b.x, a.y + b.y, a.dim}; }
inline Point operator-(const Point& a, const Point& b) { return {a.x - b.x, a.y - b.y, a.dim}; }
inline Point operator*(double s, const Point& a) { return {s * a.x, s * a.y, a.dim}; }
inline double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline double norm(const Point& a) { return std::hypot(a.x, a.y); }
inline double dist(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct Rect {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
};

// Finitely many boundary samples with inner unit normals and cumulative
// arclength positions, in traversal order.
struct BoundaryPatch {
  std::vector<Point> points;
  std::vector<Point> normals;
  std::vector<double> arclength;
};

// Tabulated modulus of continuity of the inner normal: rows (t, omega(t))
// with t decreasing toward 0.
struct DiniModulus {
  std::vector<std::pair<double, double>> table;
};

struct BoundaryPolyline;  // cached closed polyline, internal to geometry.cpp

// A planar (or 1-D interval) domain with the metric-side queries the rest of
// the library needs: membership, distance to the boundary, boundary sampling.
//
// half_plane is the set {x : n . x > offset} with n the inner unit normal.
class Domain {
 public:
  enum class Kind { half_plane, disc, interval, polygon, mapped_disc, boundary_curve };

  static Domain half_plane(double nx, double ny, double offset);
  static Domain disc(double cx, double cy, double radius);
  static Domain interval(double a, double b);  // b may be +infinity
  static Domain polygon(std::vector<Point> vertices);
  static Domain mapped_disc(const std::string& map_name);
  static Domain boundary_curve(std::vector<Point> closed_polyline);

  static Domain from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;

  Kind kind() const { return kind_; }
  int dimension() const { return kind_ == Kind::interval ? 1 : 2; }
  std::string kind_name() const;

  bool contains(const Point& p) const;
  // True when the domain is known convex (half-plane, disc, interval, convex
  // polygon); chords between interior points then stay interior.
  bool is_convex() const;
  // Euclidean distance from p to the boundary set (>= 0 on either side).
  double boundary_distance(const Point& p) const;
  // Same value, but `lower_bound` must be a valid lower bound on the result
  // (callers typically derive one from a nearby known clearance via the
  // 1-Lipschitz property). Lets polyline-backed kinds skip most of the
  // nearest-segment search; exact kinds ignore it.
  double boundary_distance(const Point& p, double lower_bound) const;
  // For polyline-backed kinds, a bound on how far boundary_distance may sit
  // from the distance to the true curve. Zero for exact kinds.
  double boundary_distance_error_bound() const;

  // m samples spread over the boundary by arclength. Polygon corners are
  // skipped (the normal is undefined there), so fewer than m points may come
  // back. Unbounded kinds are rejected.
  BoundaryPatch sample_boundary(int m) const;

  // Axis-aligned box containing the domain, when bounded.
  std::optional<Rect> bounding_box() const;

  // Accessors for the exact kinds; throw std::logic_error on kind mismatch.
  double interval_a() const;
  double interval_b() const;
  std::string map_name() const;

 private:
  Domain() = default;

  struct HalfPlaneData {
    double nx, ny, offset;
  };
  struct DiscData {
    double cx, cy, radius;
  };
  struct IntervalData {
    double a, b;
  };
  struct PolygonData {
    std::vector<Point> verts;
    bool convex = false;
  };

  Kind kind_ = Kind::disc;
  HalfPlaneData hp_{};
  DiscData disc_{};
  IntervalData iv_{};
  PolygonData poly_{};
  std::string map_name_;
  std::shared_ptr<const BoundaryPolyline> polyline_;
};

// Largest jump of the inner normal between patch samples at most t apart;
// zero when no pair of samples is that close.
double normal_modulus(const BoundaryPatch& patch, double t);

// Tabulates normal_modulus at the given scales (sorted into decreasing order).
DiniModulus estimate_dini_modulus(const BoundaryPatch& patch, std::vector<double> ts);

// Trapezoid value of the Dini integral of omega(t)/t over the tabulated
// scales up to t0. Small values indicate a Dini-smooth patch.
double dini_integral(const DiniModulus& mod, double t0);

}  // namespace metriclab
