#include "gather/geom.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace gather::geom {

Scalar dist2(const Point& a, const Point& b) {
  Scalar dx = a.x - b.x;
  Scalar dy = a.y - b.y;
  return dx * dx + dy * dy;
}

int orientation(const Point& a, const Point& b, const Point& c) {
  Scalar cross = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  return sgn(cross);
}

bool strictly_between(const Point& a, const Point& p, const Point& b) {
  if (p == a || p == b || a == b) return false;
  if (orientation(a, p, b) != 0) return false;
  Scalar dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
  return dot > 0 && dot < dist2(a, b);
}

bool all_collinear(const std::vector<Point>& pts) {
  if (pts.size() < 3) return true;
  // Pick two distinct anchor points; duplicates are tolerated.
  const Point* p0 = &pts[0];
  const Point* p1 = nullptr;
  for (const auto& p : pts) {
    if (p != *p0) {
      p1 = &p;
      break;
    }
  }
  if (!p1) return true;
  for (const auto& p : pts) {
    if (orientation(*p0, *p1, p) != 0) return false;
  }
  return true;
}

Line Line::through(const Point& p, const Point& q) {
  return with_direction(p, q - p);
}

Line Line::with_direction(const Point& p, const Point& dir) {
  // a*x + b*y + c = 0 with (a,b) normal to dir.
  Scalar a = -dir.y;
  Scalar b = dir.x;
  Scalar c = -(a * p.x + b * p.y);
  // Clear denominators, divide by gcd, fix sign.
  mpz_class da = a.get_den(), db = b.get_den(), dc = c.get_den();
  mpz_class l;
  mpz_lcm(l.get_mpz_t(), da.get_mpz_t(), db.get_mpz_t());
  mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), dc.get_mpz_t());
  mpz_class na = mpz_class(a * l), nb = mpz_class(b * l), nc = mpz_class(c * l);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), na.get_mpz_t(), nb.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), nc.get_mpz_t());
  if (g != 0) {
    na /= g;
    nb /= g;
    nc /= g;
  }
  int lead = sgn(na) != 0 ? sgn(na) : sgn(nb);
  if (lead < 0) {
    na = -na;
    nb = -nb;
    nc = -nc;
  }
  return Line{Scalar(na), Scalar(nb), Scalar(nc)};
}

Scalar Line::dist2_to(const Point& p) const {
  Scalar v = eval(p);
  return (v * v) / (a * a + b * b);
}

bool Hull::contains_vertex(const Point& p) const {
  return std::find(vertices.begin(), vertices.end(), p) != vertices.end();
}

bool Hull::on_boundary(const Point& p) const {
  if (contains_vertex(p)) return true;
  size_t n = vertices.size();
  if (n < 2) return false;
  for (size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    if (a == b) continue;
    if (strictly_between(a, p, b)) return true;
  }
  return false;
}

bool Hull::strictly_inside(const Point& p) const {
  size_t n = vertices.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    if (orientation(vertices[i], vertices[(i + 1) % n], p) <= 0) return false;
  }
  return true;
}

std::pair<Point, Point> Hull::corner_neighbours(const Point& p) const {
  size_t n = vertices.size();
  for (size_t i = 0; i < n; ++i) {
    if (vertices[i] == p) {
      return {vertices[(i + n - 1) % n], vertices[(i + 1) % n]};
    }
  }
  throw std::logic_error("corner_neighbours: p is not a hull vertex");
}

namespace {

std::vector<Point> sorted_unique(const std::vector<Point>& pts) {
  std::vector<Point> s = pts;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

}  // namespace

Hull convex_hull(const std::vector<Point>& pts) {
  std::vector<Point> s = sorted_unique(pts);
  if (s.empty()) throw std::invalid_argument("convex_hull: empty input");
  Hull h;
  if (s.size() == 1) {
    h.vertices = s;
    return h;
  }
  if (all_collinear(s)) {
    // Segment: endpoints are the lexicographic extremes of the sorted order.
    h.vertices = {s.front(), s.back()};
    for (size_t i = 1; i + 1 < s.size(); ++i) h.boundary_points.push_back(s[i]);
    return h;
  }
  // Andrew monotone chain, keeping strict turns only.
  auto build = [&](bool upper) {
    std::vector<Point> chain;
    auto scan = [&](const Point& p) {
      while (chain.size() >= 2) {
        // Both chains scan so that kept turns are strict left turns; the
        // upper chain achieves this by scanning in reverse order.
        int o = orientation(chain[chain.size() - 2], chain.back(), p);
        if (o <= 0) {
          chain.pop_back();
        } else {
          break;
        }
      }
      chain.push_back(p);
    };
    if (upper) {
      for (auto it = s.rbegin(); it != s.rend(); ++it) scan(*it);
    } else {
      for (const auto& p : s) scan(p);
    }
    return chain;
  };
  std::vector<Point> lower = build(false), upper = build(true);
  h.vertices = lower;
  h.vertices.insert(h.vertices.end(), upper.begin() + 1, upper.end() - 1);
  // Collinear inputs lying on edges.
  std::set<std::pair<Scalar, Scalar>> corner_set;
  for (const auto& v : h.vertices) corner_set.insert({v.x, v.y});
  for (const auto& p : s) {
    if (corner_set.count({p.x, p.y})) continue;
    size_t n = h.vertices.size();
    for (size_t i = 0; i < n; ++i) {
      if (strictly_between(h.vertices[i], p, h.vertices[(i + 1) % n])) {
        h.boundary_points.push_back(p);
        break;
      }
    }
  }
  std::sort(h.boundary_points.begin(), h.boundary_points.end());
  return h;
}

LayerDecomposition convex_layers(const std::vector<Point>& pts) {
  LayerDecomposition d;
  std::vector<Point> remaining = sorted_unique(pts);
  if (remaining.empty()) throw std::invalid_argument("convex_layers: empty input");
  while (!remaining.empty()) {
    Hull h = convex_hull(remaining);
    std::set<std::pair<Scalar, Scalar>> on_layer;
    for (const auto& v : h.vertices) on_layer.insert({v.x, v.y});
    for (const auto& b : h.boundary_points) on_layer.insert({b.x, b.y});
    std::vector<Point> next;
    for (const auto& p : remaining) {
      if (!on_layer.count({p.x, p.y})) next.push_back(p);
    }
    d.layers.push_back(std::move(h));
    remaining = std::move(next);
  }
  return d;
}

Classification classify(const Point& p, const std::vector<Point>& visible) {
  Hull h = convex_hull(visible);
  if (h.contains_vertex(p)) return {Kind::Corner};
  if (h.on_boundary(p)) return {Kind::Boundary};
  return {Kind::Interior};
}

std::vector<Point> visible_set(const Point& observer,
                               const std::vector<Point>& occupied) {
  std::vector<Point> distinct = sorted_unique(occupied);
  std::vector<Point> out;
  for (const auto& q : distinct) {
    if (q == observer) {
      out.push_back(q);
      continue;
    }
    bool blocked = false;
    for (const auto& w : distinct) {
      if (strictly_between(observer, w, q)) {
        blocked = true;
        break;
      }
    }
    if (!blocked) out.push_back(q);
  }
  return out;
}

Point center_of_gravity(const std::vector<Point>& pts) {
  Hull h = convex_hull(pts);
  Scalar sx = 0, sy = 0;
  for (const auto& v : h.vertices) {
    sx += v.x;
    sy += v.y;
  }
  Scalar n(static_cast<unsigned long>(h.vertices.size()));
  return {sx / n, sy / n};
}

namespace {

// Minimum of d(r, L)^2 over the blocking-line sets S^2 (lines through pairs
// of occupied points) and S^3 (lines through each occupied point parallel to
// any line of S^1 or S^2), skipping lines that pass through r.
Scalar min_clearance2(const Point& r, const std::vector<Point>& occupied) {
  std::vector<Point> pts = sorted_unique(occupied);
  // Distinct directions of S^1 u S^2 as canonical lines through origin.
  std::set<std::pair<Scalar, Scalar>> dirs;
  Point origin{0, 0};
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      Line l = Line::with_direction(origin, pts[j] - pts[i]);
      dirs.insert({l.a, l.b});
    }
  }
  std::optional<Scalar> best;
  auto consider = [&](const Line& l) {
    if (l.contains(r)) return;
    Scalar d2 = l.dist2_to(r);
    if (!best || d2 < *best) best = d2;
  };
  // S^2 lines.
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size(); ++j) {
      consider(Line::through(pts[i], pts[j]));
    }
  }
  // S^3: for each direction, lines through each occupied point.
  for (const auto& [a, b] : dirs) {
    for (const auto& p : pts) {
      Scalar c = -(a * p.x + b * p.y);
      consider(Line{a, b, c});
    }
  }
  if (!best) {
    // Fewer than two distinct points; any positive clearance works.
    return Scalar(1);
  }
  return *best;
}

// Largest s = (1/2)^k with s^2 * seg2 <= bound2 / 4, s <= 1/2.
Scalar half_power_scale(const Scalar& seg2, const Scalar& bound2) {
  Scalar s(1, 2);
  while (s * s * seg2 > bound2 / 4) s /= 2;
  return s;
}

// True iff from t every point of `others` is visible with all of them
// stationary (no point of `others` strictly between t and another).
bool sees_all(const Point& t, const std::vector<Point>& others) {
  for (const auto& q : others) {
    if (q == t) continue;
    for (const auto& w : others) {
      if (strictly_between(t, w, q)) return false;
    }
  }
  return true;
}

bool corner_after_move(const Point& t, const std::vector<Point>& others) {
  std::vector<Point> cfg = others;
  cfg.push_back(t);
  return classify(t, cfg).kind == Kind::Corner;
}

}  // namespace

Point int_visible_area(const Point& r, const Hull& hull,
                       const std::vector<Point>& occupied) {
  return int_visible_area(r, hull, occupied, occupied);
}

Point int_visible_area(const Point& r, const Hull& hull,
                       const std::vector<Point>& occupied,
                       const std::vector<Point>& hull_members) {
  if (hull.vertices.size() < 3) {
    throw DegenerateHull("int_visible_area: hull has fewer than 3 vertices");
  }
  auto [n1, n2] = hull.corner_neighbours(r);
  Point mid1 = Scalar(1, 2) * (r + n1);
  Point mid2 = Scalar(1, 2) * (r + n2);
  std::vector<Point> others;
  for (const auto& p : sorted_unique(occupied)) {
    if (p != r) others.push_back(p);
  }
  std::vector<Point> member_others;
  for (const auto& p : sorted_unique(hull_members)) {
    if (p != r) member_others.push_back(p);
  }
  Scalar clear2 = min_clearance2(r, occupied);
  // Interior points of the triangle (r, mid1, mid2), tried in order; the
  // centroid direction can lie inside a blocking line, in which case the next
  // candidate escapes it.
  const std::pair<Scalar, Scalar> weights[] = {
      {Scalar(1, 3), Scalar(1, 3)}, {Scalar(1, 2), Scalar(1, 4)},
      {Scalar(1, 4), Scalar(1, 2)}, {Scalar(1, 5), Scalar(3, 5)},
      {Scalar(3, 5), Scalar(1, 5)}, {Scalar(2, 7), Scalar(3, 7)}};
  for (const auto& [wa, wb] : weights) {
    Point c = r + wa * (mid1 - r) + wb * (mid2 - r);
    if (c == r) continue;
    Scalar seg2 = dist2(r, c);
    Scalar s = half_power_scale(seg2, clear2);
    for (int k = 0; k < 32; ++k, s /= 2) {
      Point t = r + s * (c - r);
      if (std::find(others.begin(), others.end(), t) != others.end()) continue;
      if (!sees_all(t, others)) continue;
      if (!corner_after_move(t, member_others)) continue;
      return t;
    }
  }
  throw std::logic_error("int_visible_area: no safe point found");
}

Point boundary_visible_area(const Point& r, const Hull& hull,
                            const std::vector<Point>& occupied,
                            const Point& chosen_mid) {
  Scalar clear2 = min_clearance2(r, occupied);
  Point towards = chosen_mid;
  if (hull.vertices.size() == 1) {
    // No neighbours: head toward the nearest other occupied point.
    std::optional<Point> nearest;
    for (const auto& p : sorted_unique(occupied)) {
      if (p == r) continue;
      if (!nearest || dist2(r, p) < dist2(r, *nearest) ||
          (dist2(r, p) == dist2(r, *nearest) && p < *nearest)) {
        nearest = p;
      }
    }
    if (!nearest) return r;  // alone on the plane, nothing to reach
    towards = Scalar(1, 2) * (r + *nearest);
  }
  if (towards == r) return r;
  Scalar seg2 = dist2(r, towards);
  Scalar s = half_power_scale(seg2, clear2);
  Point t = r + s * (towards - r);
  // Never land exactly on another robot.
  std::vector<Point> distinct = sorted_unique(occupied);
  while (std::find(distinct.begin(), distinct.end(), t) != distinct.end()) {
    s /= 2;
    t = r + s * (towards - r);
  }
  return t;
}

Point ext_visible_area(const Point& r, const Hull& hull,
                       const std::vector<Point>& occupied) {
  if (hull.vertices.size() < 3) {
    throw DegenerateHull("ext_visible_area: hull has fewer than 3 vertices");
  }
  auto [n1, n2] = hull.corner_neighbours(r);
  Point mid1 = Scalar(1, 2) * (r + n1);
  Point mid2 = Scalar(1, 2) * (r + n2);
  Point axis_dir = mid2 - mid1;
  std::vector<Point> others;
  for (const auto& p : sorted_unique(occupied)) {
    if (p != r) others.push_back(p);
  }
  // The mover cannot tell whether a same-colored robot stays behind at its
  // own position, so treat that position as a potential blocker too.
  std::vector<Point> blockers = others;
  blockers.push_back(r);
  Scalar clear2 = min_clearance2(r, occupied);
  // Reflect candidate interior directions across the line through r parallel
  // to mid1--mid2, then shrink until the target is safe and outside the hull.
  auto reflect = [&](const Point& p) {
    // Reflection of p across line through r with direction axis_dir.
    Point v = p - r;
    Scalar dd = axis_dir.x * axis_dir.x + axis_dir.y * axis_dir.y;
    Scalar dot = v.x * axis_dir.x + v.y * axis_dir.y;
    Point proj = (dot / dd) * axis_dir;
    Point refl = Scalar(2) * proj - v;
    return r + refl;
  };
  const std::pair<Scalar, Scalar> weights[] = {
      {Scalar(1, 3), Scalar(1, 3)}, {Scalar(1, 2), Scalar(1, 4)},
      {Scalar(1, 4), Scalar(1, 2)}, {Scalar(1, 5), Scalar(3, 5)},
      {Scalar(3, 5), Scalar(1, 5)}, {Scalar(2, 7), Scalar(3, 7)}};
  for (const auto& [wa, wb] : weights) {
    Point c_int = r + wa * (mid1 - r) + wb * (mid2 - r);
    Point c = reflect(c_int);
    if (c == r) continue;
    Scalar seg2 = dist2(r, c);
    Scalar s = half_power_scale(seg2, clear2);
    for (int k = 0; k < 32; ++k, s /= 2) {
      Point t = r + s * (c - r);
      if (std::find(others.begin(), others.end(), t) != others.end()) continue;
      if (hull.strictly_inside(t) || hull.on_boundary(t)) continue;
      if (!sees_all(t, blockers)) continue;
      if (!corner_after_move(t, blockers)) continue;
      return t;
    }
  }
  throw std::logic_error("ext_visible_area: no safe point found");
}

}  // namespace gather::geom
