#include "metriclab/qh_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <utility>

#include "metriclab/closed_forms.hpp"

namespace metriclab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMinClearance = 1e-12;
constexpr double kSplitClearanceFraction = 0.15;

// 5-point Gauss-Legendre nodes/weights on [0, 1].
constexpr double kGlX[5] = {0.04691007703066800, 0.23076534494715845, 0.5,
                            0.76923465505284155, 0.95308992296933200};
constexpr double kGlW[5] = {0.11846344252809454, 0.23931433524968324, 0.28444444444444444,
                            0.23931433524968324, 0.11846344252809454};

bool segments_known_interior(const Domain& d) {
  return d.is_convex();  // chords between interior points of a convex set stay interior
}

bool exact_segment_form(const Domain& d) {
  // Clearance is linear along any straight segment for these kinds, so the
  // density integral has a closed logarithmic form.
  return d.kind() == Domain::Kind::half_plane || d.kind() == Domain::Kind::interval;
}

double linear_clearance_integral(double len, double da, double db) {
  if (len <= 0.0) return 0.0;
  if (std::abs(da - db) < 1e-14 * std::max(da, db)) return len / (0.5 * (da + db));
  return len * std::log(db / da) / (db - da);
}

// Endpoint clearances da/db, when known, give certified Lipschitz lower
// bounds for the interior sample clearances; pass NaN when unknown.
double gl5(const Domain& d, const Point& a, const Point& b, double da, double db) {
  const double len = dist(a, b);
  if (len <= 0.0) return 0.0;
  const bool hinted = std::isfinite(da) && std::isfinite(db);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Point p = a + kGlX[i] * (b - a);
    const double lo =
        hinted ? std::max({da - kGlX[i] * len, db - (1.0 - kGlX[i]) * len, 0.0}) : 0.0;
    const double c = d.boundary_distance(p, lo);
    if (c <= kMinClearance)
      throw QuadratureError("segment approaches the boundary closer than 1e-12");
    acc += kGlW[i] / c;
  }
  return acc * len;
}

// Graph-build weight: one adaptive split when the endpoint clearances differ
// by more than 2x; full adaptivity is reserved for final path lengths.
double segment_quick(const Domain& d, const Point& a, const Point& b, double da, double db) {
  const double len = dist(a, b);
  if (len <= 0.0) return 0.0;
  if (exact_segment_form(d)) return linear_clearance_integral(len, da, db);
  if (std::max(da, db) > 2.0 * std::min(da, db)) {
    const Point m = a + 0.5 * (b - a);
    const double dm = d.boundary_distance(m, std::max(std::max(da, db) - 0.5 * len, 0.0));
    return gl5(d, a, m, da, dm) + gl5(d, m, b, dm, db);
  }
  return gl5(d, a, b, da, db);
}

const double kNan = std::numeric_limits<double>::quiet_NaN();

double segment_adaptive_rec(const Domain& d, const Point& a, const Point& b, double whole,
                            double tol, int depth) {
  const Point m = a + 0.5 * (b - a);
  const double left = gl5(d, a, m, kNan, kNan);
  const double right = gl5(d, m, b, kNan, kNan);
  if (std::abs(left + right - whole) <= tol || depth >= 48) return left + right;
  return segment_adaptive_rec(d, a, m, left, 0.5 * tol, depth + 1) +
         segment_adaptive_rec(d, m, b, right, 0.5 * tol, depth + 1);
}

double segment_accurate(const Domain& d, const Point& a, const Point& b, double da, double db) {
  const double len = dist(a, b);
  if (len <= 0.0) return 0.0;
  if (exact_segment_form(d)) return linear_clearance_integral(len, da, db);
  return segment_adaptive_rec(d, a, b, gl5(d, a, b, da, db), 1e-9, 0);
}

// Exact interiority certificate built only from the 1-Lipschitz clearance:
// hop along the segment in steps of 0.9 * clearance; reaching the far end
// proves the whole segment is covered by interior balls.
bool march_certify(const Domain& d, const Point& a, const Point& b, double da, double db,
                   bool throw_on_fail) {
  const double len = dist(a, b);
  if (len < da + db) return true;
  const Point u = (1.0 / len) * (b - a);
  double t = 0.0;
  double c = da;
  for (int step = 0; step < 20000; ++step) {
    if (c > len - t) return true;
    if (c <= kMinClearance) {
      if (throw_on_fail)
        throw QuadratureError("cannot certify that a path segment stays interior");
      return false;
    }
    t += 0.9 * c;
    c = d.boundary_distance(a + t * u);
  }
  if (throw_on_fail)
    throw QuadratureError("cannot certify that a path segment stays interior");
  return false;
}

struct Stencil {
  std::vector<std::pair<int, int>> offsets;
  Stencil() {
    for (int i = -3; i <= 3; ++i)
      for (int j = -3; j <= 3; ++j) {
        if (i == 0 && j == 0) continue;
        if (std::gcd(std::abs(i), std::abs(j)) != 1) continue;
        offsets.emplace_back(i, j);
      }
  }
};

const Stencil& stencil() {
  static const Stencil s;
  return s;
}

template <class F>
double golden_min(const F& f, double lo, double hi, int iters, double* best_t) {
  constexpr double invphi = 0.6180339887498949;
  constexpr double invphi2 = 0.3819660112501051;
  double a = lo, b = hi;
  double h = b - a;
  double c = a + invphi2 * h, dd = a + invphi * h;
  double fc = f(c), fd = f(dd);
  for (int k = 0; k < iters; ++k) {
    if (fc < fd) {
      b = dd;
      dd = c;
      fd = fc;
      h *= invphi;
      c = a + invphi2 * h;
      fc = f(c);
    } else {
      a = c;
      c = dd;
      fc = fd;
      h *= invphi;
      dd = a + invphi * h;
      fd = f(dd);
    }
  }
  if (fc < fd) {
    *best_t = c;
    return fc;
  }
  *best_t = dd;
  return fd;
}

bool lexicographic_before(const Point& a, const Point& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

}  // namespace

GridGraph GridGraph::build(const Domain& d, const Rect& window, double resolution, double delta) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");
  GridGraph g;
  g.resolution = resolution;
  g.delta = delta;
  g.window = window;
  g.nx = static_cast<int>(std::floor((window.xmax - window.xmin) / resolution)) + 1;
  g.ny = static_cast<int>(std::floor((window.ymax - window.ymin) / resolution)) + 1;
  if (g.nx < 1 || g.ny < 1 ||
      static_cast<long long>(g.nx) * g.ny > 4'000'000LL)
    throw std::invalid_argument("resolution too fine for the solver window");
  g.node_id.assign(static_cast<std::size_t>(g.nx) * g.ny, -1);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Point p = Point::planar(window.xmin + i * resolution, window.ymin + j * resolution);
      const double c = d.boundary_distance(p);
      if (c < delta || !d.contains(p)) continue;
      g.node_id[static_cast<std::size_t>(j) * g.nx + i] = static_cast<int>(g.nodes.size());
      g.nodes.push_back(p);
      g.clearance.push_back(c);
    }
  }
  return g;
}

double path_length(const Domain& d, const Path& p) {
  if (p.vertices.empty()) throw std::invalid_argument("empty path");
  if (p.vertices.size() == 1) {
    if (!d.contains(p.vertices[0])) throw std::domain_error("path vertex not interior");
    return 0.0;
  }
  const bool certify = !segments_known_interior(d);
  std::vector<double> clearance(p.vertices.size());
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    if (!d.contains(p.vertices[i])) throw std::domain_error("path vertex not interior");
    clearance[i] = d.boundary_distance(p.vertices[i]);
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
    const Point& a = p.vertices[i];
    const Point& b = p.vertices[i + 1];
    if (dist(a, b) <= 0.0) continue;
    if (certify) march_certify(d, a, b, clearance[i], clearance[i + 1], /*throw_on_fail=*/true);
    acc += segment_accurate(d, a, b, clearance[i], clearance[i + 1]);
  }
  return acc;
}

Path refine_path(const Domain& d, const Path& p, const RefineOptions& opt) {
  if (p.vertices.size() < 2) return p;
  std::vector<Point> v = p.vertices;
  std::vector<double> cl(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) cl[i] = d.boundary_distance(v[i]);

  auto seg_len = [&](std::size_t i) { return segment_quick(d, v[i], v[i + 1], cl[i], cl[i + 1]); };

  std::vector<double> seg(v.size() > 1 ? v.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) seg[i] = seg_len(i);

  double total = 0.0;
  for (double s : seg) total += s;

  const bool convex = d.is_convex();
  const double rho_cap = opt.rho > 0.0 ? opt.rho : kInf;
  // Merge strictly below a fifth of the split target: split halves land at
  // half the target or above, so the two passes cannot ping-pong.
  auto merge_threshold = [&](double ca, double cb) {
    return 0.2 * std::min(kSplitClearanceFraction * std::min(ca, cb), rho_cap);
  };

  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    // Merge pass: near-coincident vertices would otherwise deadlock the
    // descent (a zero-length segment contributes nothing but keeps its
    // vertices glued together), so contract anything far below the local
    // split target. Endpoints always survive.
    if (v.size() > 2) {
      std::vector<Point> nv{v.front()};
      std::vector<double> ncl{cl.front()};
      for (std::size_t k = 1; k + 1 < v.size(); ++k) {
        if (dist(nv.back(), v[k]) >= merge_threshold(ncl.back(), cl[k])) {
          nv.push_back(v[k]);
          ncl.push_back(cl[k]);
        }
      }
      if (nv.size() > 1 && dist(nv.back(), v.back()) < merge_threshold(ncl.back(), cl.back())) {
        nv.pop_back();
        ncl.pop_back();
      }
      nv.push_back(v.back());
      ncl.push_back(cl.back());
      if (nv.size() != v.size()) {
        v = std::move(nv);
        cl = std::move(ncl);
        seg.assign(v.size() - 1, 0.0);
        for (std::size_t k = 0; k + 1 < v.size(); ++k) seg[k] = seg_len(k);
      }
    }

    // Split pass: keep vertex spacing below both rho and a fraction of the
    // local clearance, so descent can track curved geodesics near the
    // boundary.
    std::size_t i = 0;
    while (i + 1 < v.size() && v.size() < static_cast<std::size_t>(opt.max_vertices)) {
      const double len = dist(v[i], v[i + 1]);
      double threshold = kSplitClearanceFraction * std::min(cl[i], cl[i + 1]);
      if (opt.rho > 0.0) threshold = std::min(threshold, opt.rho);
      if (len > threshold && len > 1e-13) {
        const Point m = v[i] + 0.5 * (v[i + 1] - v[i]);
        const bool ball_covered = 0.5 * len < std::max(cl[i], cl[i + 1]);
        if (!ball_covered && !d.contains(m)) {
          ++i;
          continue;
        }
        const double cm = d.boundary_distance(m);
        if (cm <= kMinClearance) {
          ++i;
          continue;
        }
        v.insert(v.begin() + i + 1, m);
        cl.insert(cl.begin() + i + 1, cm);
        seg[i] = segment_quick(d, v[i], v[i + 1], cl[i], cl[i + 1]);
        seg.insert(seg.begin() + i + 1, segment_quick(d, v[i + 1], v[i + 2], cl[i + 1], cl[i + 2]));
      } else {
        ++i;
      }
    }

    double before = 0.0;
    total = 0.0;
    for (double s : seg) before += s;

    // Alternate the sweep direction so corrections propagate both ways along
    // the path instead of always trailing one end.
    const bool backward = (sweep & 1) != 0;
    for (std::size_t step = 1; step + 1 < v.size(); ++step) {
      const std::size_t k = backward ? v.size() - 1 - step : step;
      const double reach = 0.45 * cl[k];
      if (reach < 1e-14) continue;

      // Search along the pull toward the neighbor midpoint and across the
      // local chord; these adapt to the path geometry, where fixed axes
      // zig-zag through diagonal valleys.
      Point dirs[2];
      int ndirs = 0;
      const Point chord = v[k + 1] - v[k - 1];
      const double chord_len = std::hypot(chord.x, chord.y);
      const Point pull = v[k - 1] + 0.5 * chord - v[k];
      const double pull_len = std::hypot(pull.x, pull.y);
      if (pull_len > 1e-14 * (1.0 + chord_len))
        dirs[ndirs++] = Point::planar(pull.x / pull_len, pull.y / pull_len);
      if (chord_len > 1e-14)
        dirs[ndirs++] = Point::planar(-chord.y / chord_len, chord.x / chord_len);
      if (ndirs == 0) {
        dirs[0] = Point::planar(1.0, 0.0);
        dirs[1] = Point::planar(0.0, 1.0);
        ndirs = 2;
      }

      for (int di = 0; di < ndirs; ++di) {
        const Point& dir = dirs[di];
        const double f0 = seg[k - 1] + seg[k];
        auto f = [&](double t) {
          const Point q = v[k] + t * dir;
          // |t| < cl[k], so q is interior and cl[k] - |t| is a valid
          // clearance lower bound for the query.
          const double cq = d.boundary_distance(q, std::max(cl[k] - std::abs(t), 0.0));
          if (cq <= kMinClearance) return kInf;
          // Off the convex kinds a candidate segment is admitted only when
          // the endpoint clearance balls cover it outright.
          if (!convex && (dist(v[k - 1], q) >= cl[k - 1] + cq || dist(q, v[k + 1]) >= cq + cl[k + 1]))
            return kInf;
          try {
            return segment_quick(d, v[k - 1], q, cl[k - 1], cq) +
                   segment_quick(d, q, v[k + 1], cq, cl[k + 1]);
          } catch (const QuadratureError&) {
            return kInf;
          }
        };
        double best_t = 0.0;
        const double fbest = golden_min(f, -reach, reach, 12, &best_t);
        if (fbest < f0 - 1e-15) {
          v[k] = v[k] + best_t * dir;
          cl[k] = d.boundary_distance(v[k]);
          seg[k - 1] = seg_len(k - 1);
          seg[k] = seg_len(k);
        }
      }
    }

    total = 0.0;
    for (double s : seg) total += s;
    // The lowest-frequency bend of the path decays a hair per sweep; once a
    // whole sweep buys less than 1e-6 the remaining slack is far below the
    // bracket tolerances and the crawl is not worth its quadrature bill.
    if (before - total < std::max(opt.rel_tol * std::max(total, 1e-300), 1e-6)) break;
  }

  Path out;
  out.vertices = std::move(v);
  return out;
}

Path refine_path(const Domain& d, const Path& p) {
  RefineOptions opt;
  opt.rho = 0.0;
  return refine_path(d, p, opt);
}

QHResult h_num(const Domain& d, const Point& z_in, const Point& w_in, double resolution) {
  if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");

  if (d.kind() == Domain::Kind::interval) {
    if (!d.contains(z_in) || !d.contains(w_in))
      throw std::domain_error("query point not interior");
    QHResult res;
    res.resolution = resolution;
    const double value = h_exact_interval(d, z_in.x, w_in.x);
    res.upper = res.lower = value;
    res.bracket_width = 0.0;
    res.path.vertices = z_in.x == w_in.x ? std::vector<Point>{z_in}
                                         : std::vector<Point>{z_in, w_in};
    return res;
  }

  if (z_in.x == w_in.x && z_in.y == w_in.y) {
    if (!d.contains(z_in)) throw std::domain_error("query point not interior");
    QHResult res;
    res.resolution = resolution;
    res.path.vertices = {z_in};
    return res;
  }

  // Canonical orientation keeps results symmetric in (z, w) bit-for-bit.
  const bool swapped = !lexicographic_before(z_in, w_in);
  const Point z = swapped ? w_in : z_in;
  const Point w = swapped ? z_in : w_in;

  if (!d.contains(z) || !d.contains(w)) throw std::domain_error("query point not interior");
  const double dz = d.boundary_distance(z);
  const double dw = d.boundary_distance(w);
  const double r = dist(z, w);
  const double delta = std::min(dz, dw) / 64.0;

  // Solver window: local box around the query pair. The window only shapes
  // the seed path; continuous refinement is free to leave the lattice, so a
  // modest margin suffices and keeps the node count bounded.
  const double margin = 0.75 * r + 3.0 * resolution;
  Rect win{std::min(z.x, w.x) - margin, std::max(z.x, w.x) + margin,
           std::min(z.y, w.y) - margin, std::max(z.y, w.y) + margin};
  if (auto box = d.bounding_box()) {
    win.xmin = std::max(win.xmin, box->xmin - resolution);
    win.xmax = std::min(win.xmax, box->xmax + resolution);
    win.ymin = std::max(win.ymin, box->ymin - resolution);
    win.ymax = std::min(win.ymax, box->ymax + resolution);
  }

  const GridGraph g = GridGraph::build(d, win, resolution, delta);
  const int n = static_cast<int>(g.nodes.size());
  const int id_z = n, id_w = n + 1;
  const bool certify = !segments_known_interior(d);

  auto edge_weight = [&](const Point& a, const Point& b, double ca, double cb) -> double {
    if (certify && !march_certify(d, a, b, ca, cb, /*throw_on_fail=*/false)) return kInf;
    try {
      return segment_quick(d, a, b, ca, cb);
    } catch (const QuadratureError&) {
      return kInf;
    }
  };

  // Query points connect to nearby lattice nodes (and to each other).
  std::vector<std::vector<std::pair<int, double>>> extra(2);
  auto connect_query = [&](const Point& q, double cq, int self) {
    const int ci = static_cast<int>(std::floor((q.x - g.window.xmin) / g.resolution));
    const int cj = static_cast<int>(std::floor((q.y - g.window.ymin) / g.resolution));
    for (int i = ci - 4; i <= ci + 4; ++i) {
      if (i < 0 || i >= g.nx) continue;
      for (int j = cj - 4; j <= cj + 4; ++j) {
        if (j < 0 || j >= g.ny) continue;
        const int id = g.node_id[static_cast<std::size_t>(j) * g.nx + i];
        if (id < 0) continue;
        const double wgt = edge_weight(q, g.nodes[id], cq, g.clearance[id]);
        if (wgt < kInf) extra[self].emplace_back(id, wgt);
      }
    }
  };
  connect_query(z, dz, 0);
  connect_query(w, dw, 1);
  const double direct = edge_weight(z, w, dz, dw);

  // Dijkstra with lazy deletion; ties broken by node index for determinism.
  std::vector<double> best(n + 2, kInf);
  std::vector<int> parent(n + 2, -1);
  using QEntry = std::pair<double, int>;
  std::priority_queue<QEntry, std::vector<QEntry>, std::greater<>> pq;
  best[id_z] = 0.0;
  pq.emplace(0.0, id_z);

  const auto& offs = stencil().offsets;
  auto relax = [&](int from, int to, double wgt) {
    if (wgt >= kInf) return;
    const double cand = best[from] + wgt;
    // Strict improvement only: exact ties keep the first parent found, which
    // is deterministic because relaxation order is fixed.
    if (cand < best[to]) {
      best[to] = cand;
      parent[to] = from;
      pq.emplace(cand, to);
    }
  };

  while (!pq.empty()) {
    const auto [du, u] = pq.top();
    pq.pop();
    if (du > best[u]) continue;
    if (u == id_w) break;
    if (u == id_z) {
      for (const auto& [id, wgt] : extra[0]) relax(u, id, wgt);
      if (direct < kInf) relax(u, id_w, direct);
      continue;
    }
    // Lattice node: stencil neighbors plus any query node it can see.
    const int i = static_cast<int>(std::llround((g.nodes[u].x - g.window.xmin) / g.resolution));
    const int j = static_cast<int>(std::llround((g.nodes[u].y - g.window.ymin) / g.resolution));
    for (const auto& [di, dj] : offs) {
      const int ni = i + di, nj = j + dj;
      if (ni < 0 || ni >= g.nx || nj < 0 || nj >= g.ny) continue;
      const int vid = g.node_id[static_cast<std::size_t>(nj) * g.nx + ni];
      if (vid < 0) continue;
      relax(u, vid, edge_weight(g.nodes[u], g.nodes[vid], g.clearance[u], g.clearance[vid]));
    }
    for (int q = 0; q < 2; ++q)
      for (const auto& [id, wgt] : extra[q])
        if (id == u) relax(u, q == 0 ? id_z : id_w, wgt);
  }

  if (!std::isfinite(best[id_w]))
    throw std::runtime_error("query points lie in different graph components (resolution too coarse)");

  Path discrete;
  for (int cur = id_w; cur != -1; cur = parent[cur]) {
    if (cur == id_z)
      discrete.vertices.push_back(z);
    else if (cur == id_w)
      discrete.vertices.push_back(w);
    else
      discrete.vertices.push_back(g.nodes[cur]);
  }
  std::reverse(discrete.vertices.begin(), discrete.vertices.end());

  RefineOptions opt;
  opt.rho = resolution;
  Path refined = refine_path(d, discrete, opt);

  QHResult res;
  res.resolution = resolution;
  res.lower = i_dist(dz, dw, r);
  res.upper = std::max(path_length(d, refined), res.lower);
  res.bracket_width = res.upper - res.lower;
  if (swapped) std::reverse(refined.vertices.begin(), refined.vertices.end());
  res.path = std::move(refined);
  return res;
}

std::vector<ConvergenceRow> convergence_study(const Domain& d, const Point& z, const Point& w,
                                              std::vector<double> resolutions) {
  if (resolutions.size() < 3)
    throw std::invalid_argument("convergence_study needs at least 3 resolutions");
  for (std::size_t i = 1; i < resolutions.size(); ++i)
    if (!(resolutions[i] < resolutions[i - 1]))
      throw std::invalid_argument("resolutions must decrease");

  std::vector<ConvergenceRow> rows;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  if (d.kind() == Domain::Kind::interval) {
    const double exact = h_exact_interval(d, z.x, w.x);
    for (double rho : resolutions) rows.push_back({rho, exact, 0.0, nan});
    return rows;
  }

  double best_upper = kInf;
  for (double rho : resolutions) {
    const QHResult res = h_num(d, z, w, rho);
    best_upper = std::min(best_upper, res.upper);  // best admissible path so far
    ConvergenceRow row;
    row.resolution = rho;
    row.upper = best_upper;
    row.bracket_width = best_upper - res.lower;
    row.order = nan;
    const std::size_t k = rows.size();
    if (k >= 2) {
      const double e1 = rows[k - 2].upper - rows[k - 1].upper;
      const double e2 = rows[k - 1].upper - row.upper;
      const double rr = rows[k - 2].resolution / rows[k - 1].resolution;
      if (e1 > 0.0 && e2 > 0.0 && rr > 1.0) row.order = std::log(e1 / e2) / std::log(rr);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace metriclab
