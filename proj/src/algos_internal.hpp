#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "gather/algos.hpp"
#include "gather/geom.hpp"

// Shared geometric helpers for the algorithm implementations. Everything here
// works on snapshot-local coordinates.
namespace gather::algos::detail {

using geom::Hull;
using geom::Kind;
using model::SnapshotEntry;

inline std::vector<Point> all_positions(const Snapshot& snap) {
  return snap.positions();
}

inline bool view_linear(const Snapshot& snap) {
  return geom::all_collinear(snap.positions());
}

inline Kind self_kind(const Snapshot& snap) {
  return geom::classify(snap.self().position, snap.positions()).kind;
}

// True iff the entry would disappear when the given colors are ignored.
inline bool entry_ignored(const SnapshotEntry& e, const std::set<Color>& ignore) {
  for (Color c : e.colors) {
    if (!ignore.count(c)) return false;
  }
  return true;
}

// Positions of CH_r^*: self plus every entry not wholly colored from `ignore`.
inline std::vector<Point> star_positions(const Snapshot& snap,
                                         const std::set<Color>& ignore) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < snap.entries.size(); ++i) {
    if (i == snap.self_index || !entry_ignored(snap.entries[i], ignore)) {
      out.push_back(snap.entries[i].position);
    }
  }
  return out;
}

inline std::vector<Point> positions_with_color(const Snapshot& snap, Color c) {
  std::vector<Point> out;
  for (const auto& e : snap.entries) {
    if (e.colors.count(c)) out.push_back(e.position);
  }
  return out;
}

inline const SnapshotEntry* entry_at(const Snapshot& snap, const Point& p) {
  for (const auto& e : snap.entries) {
    if (e.position == p) return &e;
  }
  return nullptr;
}

inline bool has_color_at(const Snapshot& snap, const Point& p, Color c) {
  const SnapshotEntry* e = entry_at(snap, p);
  return e && e->colors.count(c);
}

// Whether the self entry is collocated with a robot of color c (c appears at
// the self position and is not only the robot's own color).
inline bool collocated_with(const Snapshot& snap, Color own, Color c) {
  const auto& colors = snap.self().colors;
  if (!colors.count(c)) return false;
  if (c != own) return true;
  // Own color: another robot of the same color is indistinguishable here;
  // callers needing that distinction must use entry counts instead.
  return true;
}

// Polar-angle-then-lexicographic comparator for directions from a common
// origin; angles measured CCW from the positive x-axis of the local frame.
inline bool angle_less(const Point& d1, const Point& d2) {
  auto half = [](const Point& d) {
    // 0: upper half [0, pi) including +x axis; 1: lower half.
    if (d.y > 0) return 0;
    if (d.y == 0 && d.x > 0) return 0;
    return 1;
  };
  int h1 = half(d1), h2 = half(d2);
  if (h1 != h2) return h1 < h2;
  Scalar cross = d1.x * d2.y - d1.y * d2.x;
  if (cross != 0) return cross > 0;
  return false;  // same ray
}

// Nearest of `candidates` to r: smallest distance, then smallest polar angle,
// then lexicographic.
inline std::optional<Point> nearest_point(const Point& r,
                                          const std::vector<Point>& candidates) {
  std::optional<Point> best;
  for (const auto& p : candidates) {
    if (p == r) continue;
    if (!best) {
      best = p;
      continue;
    }
    Scalar dp = geom::dist2(r, p), db = geom::dist2(r, *best);
    if (dp != db) {
      if (dp < db) best = p;
      continue;
    }
    Point vp = p - r, vb = *best - r;
    if (angle_less(vp, vb)) {
      best = p;
    } else if (!angle_less(vb, vp) && p < *best) {
      best = p;
    }
  }
  return best;
}

// Occupied neighbours of p along the boundary of the hull of pts (p must lie
// on the boundary). Corners of a non-linear hull and endpoints of a linear
// hull have up to two and one neighbours respectively.
inline std::vector<Point> hull_neighbours(const Point& p,
                                          const std::vector<Point>& pts) {
  std::vector<Point> distinct = pts;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  // Nearest occupied point on the closed segment p..q, excluding p.
  auto toward = [&](const Point& q) -> std::optional<Point> {
    if (q == p) return std::nullopt;
    std::optional<Point> best;
    for (const auto& w : distinct) {
      if (w == p) continue;
      if (w == q || geom::strictly_between(p, w, q)) {
        if (!best || geom::dist2(p, w) < geom::dist2(p, *best)) best = w;
      }
    }
    return best;
  };
  Hull h = geom::convex_hull(distinct);
  std::vector<Point> out;
  auto add = [&](const std::optional<Point>& q) {
    if (q && std::find(out.begin(), out.end(), *q) == out.end()) out.push_back(*q);
  };
  if (h.vertices.size() == 1) return out;
  if (h.vertices.size() == 2) {
    add(toward(h.vertices[0]));
    add(toward(h.vertices[1]));
    return out;
  }
  if (h.contains_vertex(p)) {
    auto [a, b] = h.corner_neighbours(p);
    add(toward(a));
    add(toward(b));
    return out;
  }
  // Boundary point: find the edge containing it.
  std::size_t n = h.vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = h.vertices[i];
    const Point& b = h.vertices[(i + 1) % n];
    if (geom::strictly_between(a, p, b)) {
      add(toward(a));
      add(toward(b));
      return out;
    }
  }
  return out;  // p not on the boundary: no neighbours
}

// True iff the segment from the self position to t is unobstructed by any
// other snapshot position.
inline bool point_unobstructed(const Snapshot& snap, const Point& t) {
  const Point& r = snap.self().position;
  for (const auto& e : snap.entries) {
    if (geom::strictly_between(r, e.position, t)) return false;
  }
  return true;
}

}  // namespace gather::algos::detail
