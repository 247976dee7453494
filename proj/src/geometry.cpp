#include "metriclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "metriclab/maps.hpp"

namespace metriclab {

namespace {

constexpr double kBoundaryTie = 1e-12;  // points this close to the boundary are not interior

double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

double point_segment_dist(const Point& p, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 <= 0.0) return dist(p, a);
  const double t = clamp01(dot(p - a, ab) / len2);
  return dist(p, a + t * ab);
}

int orientation_sign(const Point& a, const Point& b, const Point& c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment_collinear(const Point& a, const Point& b, const Point& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
  const int o1 = orientation_sign(a, b, c);
  const int o2 = orientation_sign(a, b, d);
  const int o3 = orientation_sign(c, d, a);
  const int o4 = orientation_sign(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_collinear(a, b, c)) return true;
  if (o2 == 0 && on_segment_collinear(a, b, d)) return true;
  if (o3 == 0 && on_segment_collinear(c, d, a)) return true;
  if (o4 == 0 && on_segment_collinear(c, d, b)) return true;
  return false;
}

double signed_area(const std::vector<Point>& v) {
  double a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % v.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

// Circumradius of a point triple; +inf when collinear.
double circumradius(const Point& a, const Point& b, const Point& c) {
  const double ab = dist(a, b), bc = dist(b, c), ca = dist(c, a);
  const double area2 = std::abs((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
  if (area2 < 1e-300) return std::numeric_limits<double>::infinity();
  return ab * bc * ca / (2.0 * area2);
}

}  // namespace

// Closed boundary polyline with a uniform-grid segment index. Backs the
// mapped_disc and boundary_curve kinds; for mapped discs a guarded Newton
// step on the map parameter sharpens each distance query.
struct BoundaryPolyline {
  const ConformalMap* map = nullptr;
  std::vector<double> theta;  // parameter of pts[i], only when map != nullptr
  std::vector<Point> pts;     // closed: segment i joins pts[i] and pts[(i+1)%n]
  std::vector<double> cumlen;
  double total_len = 0.0;
  double err_bound = 0.0;
  bool ccw = true;
  Rect box{};

  double cell = 1.0;
  int ncx = 1, ncy = 1;
  std::vector<int> cell_start;
  std::vector<int> cell_items;
  std::vector<std::vector<int>> row_items;  // segments grouped by y-band, for parity tests

  // Box tree over contiguous segment ranges. The curve is a closed chain, so
  // parameter ranges have tight boxes and a nearest query descends in
  // logarithmic time from anywhere in the plane; the uniform grid above would
  // scan every empty ring between a deep interior point and the boundary.
  struct BvhNode {
    double xmin, ymin, xmax, ymax;
    int lo, hi;
    int left = -1, right = -1;
  };
  static constexpr int kBvhLeaf = 16;
  std::vector<BvhNode> bvh;

  std::size_t size() const { return pts.size(); }
  const Point& seg_a(int i) const { return pts[i]; }
  const Point& seg_b(int i) const { return pts[(i + 1) % pts.size()]; }

  void build_index() {
    box.xmin = box.ymin = std::numeric_limits<double>::infinity();
    box.xmax = box.ymax = -std::numeric_limits<double>::infinity();
    for (const Point& p : pts) {
      box.xmin = std::min(box.xmin, p.x);
      box.xmax = std::max(box.xmax, p.x);
      box.ymin = std::min(box.ymin, p.y);
      box.ymax = std::max(box.ymax, p.y);
    }
    const double diag = std::max(box.xmax - box.xmin, box.ymax - box.ymin);
    cell = std::max(diag / 256.0, 1e-12);
    ncx = static_cast<int>((box.xmax - box.xmin) / cell) + 1;
    ncy = static_cast<int>((box.ymax - box.ymin) / cell) + 1;

    const int n = static_cast<int>(pts.size());
    std::vector<int> counts(static_cast<std::size_t>(ncx) * ncy + 1, 0);
    auto cells_of = [&](int i, auto&& fn) {
      const Point& a = seg_a(i);
      const Point& b = seg_b(i);
      const int i0 = cell_x(std::min(a.x, b.x)), i1 = cell_x(std::max(a.x, b.x));
      const int j0 = cell_y(std::min(a.y, b.y)), j1 = cell_y(std::max(a.y, b.y));
      for (int cx = i0; cx <= i1; ++cx)
        for (int cy = j0; cy <= j1; ++cy) fn(cx + cy * ncx);
    };
    for (int i = 0; i < n; ++i) cells_of(i, [&](int c) { ++counts[c + 1]; });
    for (std::size_t c = 1; c < counts.size(); ++c) counts[c] += counts[c - 1];
    cell_start = counts;
    cell_items.resize(cell_start.back());
    std::vector<int> fill = cell_start;
    for (int i = 0; i < n; ++i) cells_of(i, [&](int c) { cell_items[fill[c]++] = i; });

    row_items.assign(ncy, {});
    for (int i = 0; i < n; ++i) {
      const int j0 = cell_y(std::min(seg_a(i).y, seg_b(i).y));
      const int j1 = cell_y(std::max(seg_a(i).y, seg_b(i).y));
      for (int cy = j0; cy <= j1; ++cy) row_items[cy].push_back(i);
    }
  }

  int cell_x(double x) const {
    return std::clamp(static_cast<int>((x - box.xmin) / cell), 0, ncx - 1);
  }
  int cell_y(double y) const {
    return std::clamp(static_cast<int>((y - box.ymin) / cell), 0, ncy - 1);
  }

  int build_bvh_node(int lo, int hi) {
    const int idx = static_cast<int>(bvh.size());
    bvh.push_back({});
    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (int i = lo; i < hi; ++i) {
      for (const Point* q : {&seg_a(i), &seg_b(i)}) {
        xmin = std::min(xmin, q->x);
        xmax = std::max(xmax, q->x);
        ymin = std::min(ymin, q->y);
        ymax = std::max(ymax, q->y);
      }
    }
    int left = -1, right = -1;
    if (hi - lo > kBvhLeaf) {
      const int mid = lo + (hi - lo) / 2;
      left = build_bvh_node(lo, mid);
      right = build_bvh_node(mid, hi);
    }
    bvh[idx] = {xmin, ymin, xmax, ymax, lo, hi, left, right};
    return idx;
  }

  static double node_dist2(const BvhNode& nd, const Point& p) {
    const double dx = std::max({nd.xmin - p.x, 0.0, p.x - nd.xmax});
    const double dy = std::max({nd.ymin - p.y, 0.0, p.y - nd.ymax});
    return dx * dx + dy * dy;
  }

  int nearest_segment(const Point& p, double* out_dist, double lower_bound) const {
    double best = std::numeric_limits<double>::infinity();
    int best_seg = -1;
    int stack[64];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
      const BvhNode& nd = bvh[stack[--top]];
      if (node_dist2(nd, p) >= best * best) continue;
      if (nd.left < 0) {
        for (int s = nd.lo; s < nd.hi; ++s) {
          const double d = point_segment_dist(p, seg_a(s), seg_b(s));
          if (d < best) {
            best = d;
            best_seg = s;
          }
        }
        // A certified lower bound met exactly cannot be improved on, so the
        // rest of the tree is settled.
        if (best <= lower_bound) break;
        continue;
      }
      // Explore the nearer child first; the farther one usually prunes.
      if (node_dist2(bvh[nd.left], p) <= node_dist2(bvh[nd.right], p)) {
        stack[top++] = nd.right;
        stack[top++] = nd.left;
      } else {
        stack[top++] = nd.left;
        stack[top++] = nd.right;
      }
    }
    *out_dist = best;
    return best_seg;
  }

  double distance(const Point& p, double lower_bound = 0.0) const {
    double d = 0.0;
    const int s = nearest_segment(p, &d, lower_bound);
    if (s < 0 || map == nullptr) return d;

    // One guarded Newton step on theta around the projection parameter.
    const Point a = seg_a(s), b = seg_b(s);
    const Point ab = b - a;
    const double len2 = std::max(dot(ab, ab), 1e-300);
    const double frac = clamp01(dot(p - a, ab) / len2);
    const double t0 = theta[s];
    const double t1 = (s + 1 < static_cast<int>(size())) ? theta[s + 1] : theta[0] + 2.0 * std::numbers::pi;
    const double dt = t1 - t0;
    const double th = t0 + frac * dt;

    const std::complex<double> z(p.x, p.y);
    auto fprime = [&](double t) {
      const std::complex<double> e = std::polar(1.0, t);
      const std::complex<double> phi = map->eval(e);
      const std::complex<double> dphi = std::complex<double>(0, 1) * e * map->deriv(e);
      return 2.0 * std::real(std::conj(phi - z) * dphi);
    };
    const double h = dt / 8.0;
    const double g = fprime(th);
    const double gpp = (fprime(th + h) - fprime(th - h)) / (2.0 * h);
    if (std::isfinite(g) && std::isfinite(gpp) && gpp > 0.0) {
      const double step = std::clamp(-g / gpp, -dt, dt);
      const std::complex<double> q = map->eval(std::polar(1.0, th + step));
      if (std::isfinite(q.real()) && std::isfinite(q.imag()))
        d = std::min(d, std::abs(q - z));
    }
    return d;
  }

  bool interior(const Point& p) const {
    if (p.x < box.xmin || p.x > box.xmax || p.y < box.ymin || p.y > box.ymax) return false;
    int crossings = 0;
    for (int s : row_items[cell_y(p.y)]) {
      const Point& a = seg_a(s);
      const Point& b = seg_b(s);
      if ((a.y > p.y) != (b.y > p.y)) {
        const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (xint > p.x) ++crossings;
      }
    }
    if (crossings % 2 == 0) return false;
    return distance(p) > kBoundaryTie;
  }

  void finish(bool estimate_sagitta) {
    const std::size_t n = pts.size();
    cumlen.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      cumlen[i + 1] = cumlen[i] + dist(pts[i], pts[(i + 1) % n]);
    total_len = cumlen[n];
    ccw = signed_area(pts) > 0.0;

    if (estimate_sagitta) {
      // Sagitta bound chord^2 / (8 r) with r the local circumradius estimate.
      double worst = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Point& a = pts[(i + n - 1) % n];
        const Point& b = pts[i];
        const Point& c = pts[(i + 1) % n];
        const double r = std::max(circumradius(a, b, c), 1e-9);
        const double chord = std::max(dist(a, b), dist(b, c));
        worst = std::max(worst, chord * chord / (8.0 * r));
      }
      err_bound = worst;
    }
    build_index();
    bvh.clear();
    bvh.reserve(2 * (pts.size() / kBvhLeaf + 2));
    build_bvh_node(0, static_cast<int>(pts.size()));
  }
};

namespace {

std::shared_ptr<const BoundaryPolyline> build_map_polyline(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const BoundaryPolyline>> cache;
  std::scoped_lock lock(mu);
  if (auto it = cache.find(name); it != cache.end()) return it->second;

  const ConformalMap& map = map_by_name(name);
  if (!map.bounded_image())
    throw SpecError("mapped_disc requires a map with bounded image: " + name);

  auto poly = std::make_shared<BoundaryPolyline>();
  poly->map = &map;
  constexpr int n = 1 << 16;
  poly->theta.reserve(n);
  poly->pts.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * i / n;
    const std::complex<double> w = map.eval(std::polar(1.0, th));
    if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
      throw SpecError("map does not extend continuously to the circle: " + name);
    if (!poly->pts.empty() && dist(poly->pts.back(), from_complex(w)) < 1e-15) continue;
    poly->theta.push_back(th);
    poly->pts.push_back(from_complex(w));
  }
  poly->finish(/*estimate_sagitta=*/true);

  // Simplicity check via the cell index: segments sharing a cell must not
  // cross unless they are neighbors along the curve.
  const int nseg = static_cast<int>(poly->size());
  for (std::size_t c = 0; c + 1 < poly->cell_start.size(); ++c) {
    for (int a = poly->cell_start[c]; a < poly->cell_start[c + 1]; ++a) {
      for (int b = a + 1; b < poly->cell_start[c + 1]; ++b) {
        const int i = poly->cell_items[a], j = poly->cell_items[b];
        const int gap = std::min(std::abs(i - j), nseg - std::abs(i - j));
        if (gap <= 1) continue;
        if (segments_intersect(poly->seg_a(i), poly->seg_b(i), poly->seg_a(j), poly->seg_b(j)))
          throw SpecError("map boundary polyline self-intersects: " + name);
      }
    }
  }
  cache[name] = poly;
  return poly;
}

std::shared_ptr<const BoundaryPolyline> build_curve_polyline(std::vector<Point> pts) {
  if (pts.size() >= 2 && dist(pts.front(), pts.back()) < 1e-15) pts.pop_back();
  if (pts.size() < 3) throw SpecError("boundary_curve needs at least 3 distinct points");
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (dist(pts[i], pts[(i + 1) % pts.size()]) < 1e-15)
      throw SpecError("boundary_curve has a repeated point");
  auto poly = std::make_shared<BoundaryPolyline>();
  poly->pts = std::move(pts);
  poly->finish(/*estimate_sagitta=*/false);
  return poly;
}

}  // namespace

Domain Domain::half_plane(double nx, double ny, double offset) {
  const double n = std::hypot(nx, ny);
  if (!(n > 0.0) || !std::isfinite(n) || !std::isfinite(offset))
    throw SpecError("half_plane needs a nonzero finite normal and finite offset");
  Domain d;
  d.kind_ = Kind::half_plane;
  d.hp_ = {nx / n, ny / n, offset};
  return d;
}

Domain Domain::disc(double cx, double cy, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius) || !std::isfinite(cx) || !std::isfinite(cy))
    throw SpecError("disc needs a finite center and positive radius");
  Domain d;
  d.kind_ = Kind::disc;
  d.disc_ = {cx, cy, radius};
  return d;
}

Domain Domain::interval(double a, double b) {
  if (!std::isfinite(a) || std::isnan(b) || !(a < b))
    throw SpecError("interval needs finite a < b (b may be +inf)");
  Domain d;
  d.kind_ = Kind::interval;
  d.iv_ = {a, b};
  return d;
}

Domain Domain::polygon(std::vector<Point> vertices) {
  const std::size_t n = vertices.size();
  if (n < 3) throw SpecError("polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(vertices[i].x) || !std::isfinite(vertices[i].y))
      throw SpecError("polygon vertex is not finite");
    if (dist(vertices[i], vertices[(i + 1) % n]) < 1e-15)
      throw SpecError("polygon has repeated consecutive vertices");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Edges sharing a vertex may touch there; all other pairs must be disjoint.
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j],
                             vertices[(j + 1) % n]))
        throw SpecError("polygon is self-intersecting");
    }
  }
  Domain d;
  d.kind_ = Kind::polygon;
  d.poly_.verts = std::move(vertices);
  int pos = 0, neg = 0;
  const auto& v = d.poly_.verts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int o = orientation_sign(v[i], v[(i + 1) % v.size()], v[(i + 2) % v.size()]);
    if (o > 0) ++pos;
    if (o < 0) ++neg;
  }
  d.poly_.convex = pos == 0 || neg == 0;
  return d;
}

Domain Domain::mapped_disc(const std::string& map_name) {
  Domain d;
  d.kind_ = Kind::mapped_disc;
  d.map_name_ = map_name;
  try {
    d.polyline_ = build_map_polyline(map_name);
  } catch (const std::invalid_argument& e) {
    throw SpecError(e.what());
  }
  return d;
}

Domain Domain::boundary_curve(std::vector<Point> closed_polyline) {
  Domain d;
  d.kind_ = Kind::boundary_curve;
  d.polyline_ = build_curve_polyline(std::move(closed_polyline));
  return d;
}

std::string Domain::kind_name() const {
  switch (kind_) {
    case Kind::half_plane: return "half_plane";
    case Kind::disc: return "disc";
    case Kind::interval: return "interval";
    case Kind::polygon: return "polygon";
    case Kind::mapped_disc: return "mapped_disc";
    case Kind::boundary_curve: return "boundary_curve";
  }
  return "unknown";
}

bool Domain::is_convex() const {
  switch (kind_) {
    case Kind::half_plane:
    case Kind::disc:
    case Kind::interval:
      return true;
    case Kind::polygon:
      return poly_.convex;
    case Kind::mapped_disc:
    case Kind::boundary_curve:
      return false;
  }
  return false;
}

bool Domain::contains(const Point& p) const {
  switch (kind_) {
    case Kind::half_plane:
      return hp_.nx * p.x + hp_.ny * p.y - hp_.offset > 0.0;
    case Kind::disc:
      return std::hypot(p.x - disc_.cx, p.y - disc_.cy) < disc_.radius;
    case Kind::interval:
      return iv_.a < p.x && p.x < iv_.b;
    case Kind::polygon: {
      const auto& v = poly_.verts;
      int crossings = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        if ((a.y > p.y) != (b.y > p.y)) {
          const double xint = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
          if (xint > p.x) ++crossings;
        }
      }
      if (crossings % 2 == 0) return false;
      return boundary_distance(p) > kBoundaryTie;
    }
    case Kind::mapped_disc:
    case Kind::boundary_curve:
      return polyline_->interior(p);
  }
  return false;
}

double Domain::boundary_distance(const Point& p, double lower_bound) const {
  if (kind_ == Kind::mapped_disc || kind_ == Kind::boundary_curve)
    return polyline_->distance(p, std::max(lower_bound, 0.0));
  return boundary_distance(p);
}

double Domain::boundary_distance(const Point& p) const {
  switch (kind_) {
    case Kind::half_plane:
      return std::abs(hp_.nx * p.x + hp_.ny * p.y - hp_.offset);
    case Kind::disc:
      return std::abs(disc_.radius - std::hypot(p.x - disc_.cx, p.y - disc_.cy));
    case Kind::interval: {
      const double left = std::abs(p.x - iv_.a);
      return std::isfinite(iv_.b) ? std::min(left, std::abs(iv_.b - p.x)) : left;
    }
    case Kind::polygon: {
      double best = std::numeric_limits<double>::infinity();
      const auto& v = poly_.verts;
      for (std::size_t i = 0; i < v.size(); ++i)
        best = std::min(best, point_segment_dist(p, v[i], v[(i + 1) % v.size()]));
      return best;
    }
    case Kind::mapped_disc:
    case Kind::boundary_curve:
      return polyline_->distance(p);
  }
  return 0.0;
}

double Domain::boundary_distance_error_bound() const {
  return polyline_ ? polyline_->err_bound : 0.0;
}

std::optional<Rect> Domain::bounding_box() const {
  switch (kind_) {
    case Kind::half_plane:
      return std::nullopt;
    case Kind::disc:
      return Rect{disc_.cx - disc_.radius, disc_.cx + disc_.radius, disc_.cy - disc_.radius,
                  disc_.cy + disc_.radius};
    case Kind::interval:
      if (!std::isfinite(iv_.b)) return std::nullopt;
      return Rect{iv_.a, iv_.b, 0.0, 0.0};
    case Kind::polygon: {
      Rect r{poly_.verts[0].x, poly_.verts[0].x, poly_.verts[0].y, poly_.verts[0].y};
      for (const Point& p : poly_.verts) {
        r.xmin = std::min(r.xmin, p.x);
        r.xmax = std::max(r.xmax, p.x);
        r.ymin = std::min(r.ymin, p.y);
        r.ymax = std::max(r.ymax, p.y);
      }
      return r;
    }
    case Kind::mapped_disc:
    case Kind::boundary_curve:
      return polyline_->box;
  }
  return std::nullopt;
}

BoundaryPatch Domain::sample_boundary(int m) const {
  if (m < 1) throw SpecError("sample_boundary needs m >= 1");
  BoundaryPatch patch;

  if (kind_ == Kind::interval) {
    patch.points.push_back(Point::line(iv_.a));
    patch.normals.push_back(Point::line(1.0));
    patch.arclength.push_back(0.0);
    if (std::isfinite(iv_.b)) {
      patch.points.push_back(Point::line(iv_.b));
      patch.normals.push_back(Point::line(-1.0));
      patch.arclength.push_back(iv_.b - iv_.a);
    }
    return patch;
  }
  if (kind_ == Kind::half_plane)
    throw SpecError("sample_boundary is only defined for bounded domains");

  if (kind_ == Kind::disc) {
    for (int k = 0; k < m; ++k) {
      const double th = 2.0 * std::numbers::pi * k / m;
      const Point n{-std::cos(th), -std::sin(th), 2};
      patch.points.push_back(Point::planar(disc_.cx + disc_.radius * std::cos(th),
                                           disc_.cy + disc_.radius * std::sin(th)));
      patch.normals.push_back(n);
      patch.arclength.push_back(disc_.radius * th);
    }
    return patch;
  }

  // Polyline-backed kinds: walk the outline by arclength. Samples that land
  // on a polygon corner are dropped since the normal is undefined there.
  std::vector<Point> outline;
  std::vector<double> outline_theta;
  const BoundaryPolyline* poly = polyline_.get();
  std::shared_ptr<const BoundaryPolyline> tmp;
  if (kind_ == Kind::polygon) {
    tmp = build_curve_polyline(poly_.verts);
    poly = tmp.get();
  }

  const double step = poly->total_len / m;
  const bool drop_corners = kind_ == Kind::polygon;
  const std::size_t n = poly->size();
  for (int k = 0; k < m; ++k) {
    const double target = k * step;
    const auto it = std::upper_bound(poly->cumlen.begin(), poly->cumlen.end(), target);
    std::size_t seg = std::min<std::size_t>(it - poly->cumlen.begin() - 1, n - 1);
    const Point a = poly->seg_a(static_cast<int>(seg));
    const Point b = poly->seg_b(static_cast<int>(seg));
    const double seg_len = std::max(dist(a, b), 1e-300);
    const double frac = (target - poly->cumlen[seg]) / seg_len;
    if (drop_corners &&
        (frac * seg_len < 1e-9 * poly->total_len || (1.0 - frac) * seg_len < 1e-9 * poly->total_len))
      continue;
    const Point p = a + clamp01(frac) * (b - a);
    Point tangent = (1.0 / seg_len) * (b - a);
    Point inner = poly->ccw ? Point::planar(-tangent.y, tangent.x)
                            : Point::planar(tangent.y, -tangent.x);
    patch.points.push_back(p);
    patch.normals.push_back(inner);
    patch.arclength.push_back(target);
  }
  if (patch.points.empty())
    throw SpecError("sample_boundary produced no usable samples; increase m");
  return patch;
}

double Domain::interval_a() const {
  if (kind_ != Kind::interval) throw std::logic_error("interval_a on a non-interval domain");
  return iv_.a;
}

double Domain::interval_b() const {
  if (kind_ != Kind::interval) throw std::logic_error("interval_b on a non-interval domain");
  return iv_.b;
}

std::string Domain::map_name() const {
  if (kind_ != Kind::mapped_disc) throw std::logic_error("map_name on a non-mapped domain");
  return map_name_;
}

namespace {

Point json_point(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SpecError(std::string(what) + " must be a [x, y] pair");
  return Point::planar(j[0].get<double>(), j[1].get<double>());
}

}  // namespace

Domain Domain::from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
      throw SpecError("domain spec needs a string \"type\" field");
    const std::string type = j.at("type").get<std::string>();
    if (type == "disc") {
      const Point c = json_point(j.at("center"), "disc center");
      return disc(c.x, c.y, j.at("radius").get<double>());
    }
    if (type == "half_plane") {
      const Point n = json_point(j.at("normal"), "half_plane normal");
      return half_plane(n.x, n.y, j.at("offset").get<double>());
    }
    if (type == "interval") {
      double b = std::numeric_limits<double>::infinity();
      if (j.contains("b") && !j.at("b").is_string()) b = j.at("b").get<double>();
      return interval(j.at("a").get<double>(), b);
    }
    if (type == "polygon") {
      std::vector<Point> verts;
      for (const auto& v : j.at("vertices")) verts.push_back(json_point(v, "polygon vertex"));
      return polygon(std::move(verts));
    }
    if (type == "mapped_disc") return mapped_disc(j.at("map").get<std::string>());
    if (type == "boundary_curve") {
      std::vector<Point> pts;
      for (const auto& v : j.at("points")) pts.push_back(json_point(v, "boundary_curve point"));
      return boundary_curve(std::move(pts));
    }
    throw SpecError("unknown domain type: " + type);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("bad domain spec: ") + e.what());
  }
}

nlohmann::ordered_json Domain::to_json() const {
  nlohmann::ordered_json j;
  j["type"] = kind_name();
  switch (kind_) {
    case Kind::half_plane:
      j["normal"] = {hp_.nx, hp_.ny};
      j["offset"] = hp_.offset;
      break;
    case Kind::disc:
      j["center"] = {disc_.cx, disc_.cy};
      j["radius"] = disc_.radius;
      break;
    case Kind::interval:
      j["a"] = iv_.a;
      if (std::isfinite(iv_.b))
        j["b"] = iv_.b;
      else
        j["b"] = "inf";
      break;
    case Kind::polygon: {
      auto arr = nlohmann::ordered_json::array();
      for (const Point& p : poly_.verts) arr.push_back({p.x, p.y});
      j["vertices"] = arr;
      break;
    }
    case Kind::mapped_disc:
      j["map"] = map_name_;
      break;
    case Kind::boundary_curve: {
      auto arr = nlohmann::ordered_json::array();
      for (const Point& p : polyline_->pts) arr.push_back({p.x, p.y});
      j["points"] = arr;
      break;
    }
  }
  return j;
}

double normal_modulus(const BoundaryPatch& patch, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("normal_modulus needs t > 0");
  double worst = 0.0;
  const std::size_t n = patch.points.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dist(patch.points[i], patch.points[j]) <= t)
        worst = std::max(worst, norm(patch.normals[i] - patch.normals[j]));
  return worst;
}

DiniModulus estimate_dini_modulus(const BoundaryPatch& patch, std::vector<double> ts) {
  std::sort(ts.begin(), ts.end(), std::greater<>());
  const std::size_t n = patch.points.size();
  std::vector<std::pair<double, double>> pairs;  // (separation, normal jump)
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      pairs.emplace_back(dist(patch.points[i], patch.points[j]),
                         norm(patch.normals[i] - patch.normals[j]));
  std::sort(pairs.begin(), pairs.end());
  std::vector<double> prefix_max(pairs.size());
  double running = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    running = std::max(running, pairs[k].second);
    prefix_max[k] = running;
  }

  DiniModulus mod;
  for (double t : ts) {
    if (!(t > 0.0)) throw std::invalid_argument("modulus scales must be positive");
    const auto it = std::upper_bound(pairs.begin(), pairs.end(), std::make_pair(t, 1e300));
    const double omega = it == pairs.begin() ? 0.0 : prefix_max[it - pairs.begin() - 1];
    mod.table.emplace_back(t, omega);
  }
  return mod;
}

double dini_integral(const DiniModulus& mod, double t0) {
  // Table rows run from large t down to 0; integrate the rows with t <= t0.
  std::vector<std::pair<double, double>> rows;
  for (const auto& [t, w] : mod.table)
    if (t <= t0) rows.emplace_back(t, w);
  std::sort(rows.begin(), rows.end());
  double acc = 0.0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto& [ta, wa] = rows[k - 1];
    const auto& [tb, wb] = rows[k];
    acc += 0.5 * (wa / ta + wb / tb) * (tb - ta);
  }
  return acc;
}

}  // namespace metriclab
