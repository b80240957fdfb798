#include "algos_internal.hpp"
#include "gather/algos.hpp"

// The O(N)-epoch gathering algorithm in the 7-color palette
// {OFF, INNER, OUTER, MOVE1, MOVE2, FAULT, FAULT-FINISH}. Case 1 handles
// non-linear views in five stages (Robot-Classification, Inner-To-Outer,
// Confirmation-Signal-To-Outers, Boundary-To-Corner, Gathering); Case 2 runs
// the linear wave. Colors are reused across stages, so each handler orders
// its rules from the latest stage to the earliest.
namespace gather::algos {

namespace {

using detail::all_positions;
using detail::angle_less;
using detail::entry_at;
using detail::has_color_at;
using detail::hull_neighbours;
using detail::nearest_point;
using detail::point_unobstructed;
using detail::positions_with_color;
using detail::self_kind;
using detail::star_positions;
using detail::view_linear;
using geom::Hull;
using geom::Kind;
using model::SnapshotEntry;

// Inner-To-Outer eligibility ignores the robots that are already on the
// outermost layer or stuck: OUTER, FAULT and (during re-ascent) FAULT-FINISH.
const std::set<Color> kStarIgnore = {Color::Outer, Color::Fault,
                                     Color::FaultFinish};
// The linear wave ignores finished and signalling faulty robots.
const std::set<Color> kLinearIgnore = {Color::Fault, Color::FaultFinish};

bool any_visible(const Snapshot& snap, Color c) { return snap.any_color(c); }

bool entry_colors_within(const SnapshotEntry& e, const std::set<Color>& set) {
  for (Color c : e.colors) {
    if (!set.count(c)) return false;
  }
  return true;
}

bool all_colors_within(const Snapshot& snap, const std::set<Color>& set) {
  for (const auto& e : snap.entries) {
    if (!entry_colors_within(e, set)) return false;
  }
  return true;
}

bool neighbour_has(const Snapshot& snap, const std::vector<Point>& nbrs,
                   Color c) {
  for (const auto& n : nbrs) {
    if (has_color_at(snap, n, c)) return true;
  }
  return false;
}

// Nearest other position carrying one of the given colors.
std::optional<Point> nearest_with_any(const Snapshot& snap,
                                      const std::set<Color>& colors) {
  std::vector<Point> candidates;
  for (std::size_t i = 0; i < snap.entries.size(); ++i) {
    if (i == snap.self_index) continue;
    for (Color c : colors) {
      if (snap.entries[i].colors.count(c)) {
        candidates.push_back(snap.entries[i].position);
        break;
      }
    }
  }
  return nearest_point(snap.self().position, candidates);
}

// CG of the convex hull spanned by the FAULT-FINISH-colored robots.
std::optional<Point> fault_finish_cg(const Snapshot& snap) {
  std::vector<Point> pts = positions_with_color(snap, Color::FaultFinish);
  if (pts.empty()) return std::nullopt;
  return geom::center_of_gravity(pts);
}

// Boundary-To-Corner t_r: r is a boundary robot; r1 and r2 are the nearest
// robots on the two sides adjacent to r's boundary segment; t_r is the
// midpoint of r and the foot of the perpendicular from r onto line r1r2.
std::optional<Point> perpendicular_target(const Snapshot& snap) {
  const Point& r = snap.self().position;
  std::vector<Point> pts = all_positions(snap);
  Hull h = geom::convex_hull(pts);
  if (h.vertices.size() < 3) return std::nullopt;
  std::size_t n = h.vertices.size();
  std::size_t edge = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (geom::strictly_between(h.vertices[i], r, h.vertices[(i + 1) % n])) {
      edge = i;
      break;
    }
  }
  if (edge == n) return std::nullopt;
  auto nearest_on_side = [&](const Point& a, const Point& b) {
    std::vector<Point> on_side;
    for (const auto& p : pts) {
      if (p == a || p == b || geom::strictly_between(a, p, b)) {
        on_side.push_back(p);
      }
    }
    return nearest_point(r, on_side);
  };
  const Point& ea = h.vertices[edge];
  const Point& eb = h.vertices[(edge + 1) % n];
  auto r1 = nearest_on_side(h.vertices[(edge + n - 1) % n], ea);
  auto r2 = nearest_on_side(eb, h.vertices[(edge + 2) % n]);
  if (!r1 || !r2 || *r1 == *r2) return std::nullopt;
  geom::Line l = geom::Line::through(*r1, *r2);
  if (l.contains(r)) return std::nullopt;
  // Foot of the perpendicular from r onto l.
  Scalar k = l.eval(r) / (l.a * l.a + l.b * l.b);
  Point foot{r.x - k * l.a, r.y - k * l.b};
  return Scalar(1, 2) * (r + foot);
}

// ---------------------------------------------------------------------------

Action act_off(const Snapshot& snap) {
  const Point& self = snap.self().position;
  std::vector<Point> pts = all_positions(snap);
  bool linear = view_linear(snap);
  Kind kind = self_kind(snap);

  // Gathering: a corner that sees FAULT-FINISH robots heads for their CG.
  // The CG is stable (robots only finish at the CG or frozen in place), so
  // corners may converge concurrently.
  if (kind == Kind::Corner && any_visible(snap, Color::FaultFinish)) {
    return Action::move_to(Color::Inner, *fault_finish_cg(snap));
  }

  // Boundary-To-Corner: boundary robot next to a FAULT signals with MOVE2.
  if (kind == Kind::Boundary && !linear) {
    std::vector<Point> nbrs = hull_neighbours(self, pts);
    if (neighbour_has(snap, nbrs, Color::Fault)) {
      return Action::stay(Color::Move2);
    }
  }

  // Boundary-To-Corner: an interior robot joins a signalled corner.
  if (kind == Kind::Interior) {
    Hull h = geom::convex_hull(pts);
    std::vector<Point> candidates;
    for (const auto& v : h.vertices) {
      if (!has_color_at(snap, v, Color::Move1)) continue;
      if (neighbour_has(snap, hull_neighbours(v, pts), Color::Fault)) {
        candidates.push_back(v);
      }
    }
    if (auto t = nearest_point(self, candidates)) {
      return Action::move_to(Color::Move2, *t);
    }
    // Mid-stage interior OFF (e.g. parked at t_r): hold until a corner signals.
    if (any_visible(snap, Color::Fault) ||
        any_visible(snap, Color::FaultFinish)) {
      return Action::stay(Color::Off);
    }
  }

  // Gathering anchor: OFF at the CG of an all-MOVE1 corner set. The anchor
  // stays put while the remaining corners converge onto it; initial
  // classification never sees MOVE1 or MOVE2, so this cannot misfire. With a
  // FAULT visible the anchor protocol is not in play (the fault route must
  // re-establish a gathering point), so fall through to reclassification.
  if ((any_visible(snap, Color::Move1) || any_visible(snap, Color::Move2)) &&
      !any_visible(snap, Color::Fault) &&
      !any_visible(snap, Color::FaultFinish)) {
    return Action::stay(Color::Off);
  }

  // Robot-Classification.
  if (linear) {
    std::vector<Point> star = star_positions(snap, kLinearIgnore);
    bool terminal = hull_neighbours(self, star).size() <= 1;
    return Action::stay(terminal ? Color::Outer : Color::Inner);
  }
  return Action::stay(kind == Kind::Interior ? Color::Inner : Color::Outer);
}

Action act_outer(const Snapshot& snap) {
  const Point& self = snap.self().position;
  std::vector<Point> pts = all_positions(snap);

  if (snap.entries.size() == 1) {
    // Everyone visible is collocated with us.
    if (entry_colors_within(snap.self(),
                            {Color::Outer, Color::FaultFinish})) {
      return Action::stay(Color::FaultFinish, /*term=*/true);
    }
    return Action::stay(Color::Outer);
  }

  if (view_linear(snap)) {
    // Case 2: the terminal robot drives the wave.
    if (any_visible(snap, Color::Off)) return Action::stay(Color::Outer);
    std::vector<Point> star = star_positions(snap, kLinearIgnore);
    std::vector<Point> nbrs = hull_neighbours(self, star);
    if (nbrs.empty()) {
      // No live wave partners remain. An adjacent FAULT-FINISH robot marks
      // the meeting point (midpoint mover or frozen neighbour); otherwise all
      // non-faulty robots are already collocated with us.
      std::vector<Point> raw = hull_neighbours(self, pts);
      std::vector<Point> ff_nbrs;
      for (const auto& n : raw) {
        if (has_color_at(snap, n, Color::FaultFinish)) ff_nbrs.push_back(n);
      }
      if (auto t = nearest_point(self, ff_nbrs)) {
        return Action::move_to(Color::FaultFinish, *t, /*term=*/true);
      }
      if (any_visible(snap, Color::Fault)) {
        return Action::stay(Color::FaultFinish, /*term=*/true);
      }
      return Action::stay(Color::Outer);
    }
    if (nbrs.size() != 1) return Action::stay(Color::Outer);
    const Point& nbr = nbrs[0];
    const SnapshotEntry* e = entry_at(snap, nbr);
    if (e->colors.count(Color::Move2)) return Action::stay(Color::Outer);
    if (e->colors.count(Color::Inner)) {
      return Action::move_to(Color::Move1, nbr);
    }
    if (e->colors.count(Color::Outer)) {
      return Action::move_to(Color::Move2, Scalar(1, 2) * (self + nbr));
    }
    return Action::stay(Color::Outer);
  }

  Kind kind = self_kind(snap);

  if (kind == Kind::Boundary) {
    std::vector<Point> nbrs = hull_neighbours(self, pts);
    // A signalled corner pulls its adjacent boundary robots in.
    std::vector<Point> move1_nbrs;
    for (const auto& n : nbrs) {
      if (has_color_at(snap, n, Color::Move1)) move1_nbrs.push_back(n);
    }
    if (auto t = nearest_point(self, move1_nbrs)) {
      return Action::move_to(Color::Move2, *t);
    }
    if (neighbour_has(snap, nbrs, Color::Fault)) {
      std::vector<Point> ff = positions_with_color(snap, Color::FaultFinish);
      if (!ff.empty()) {
        Hull fh = geom::convex_hull(ff);
        if (auto t = nearest_point(self, fh.vertices)) {
          return Action::move_to(Color::Off, *t);
        }
      }
      if (auto t = perpendicular_target(snap)) {
        return Action::move_to(Color::Off, *t);
      }
    }
    return Action::stay(Color::Outer);
  }

  if (kind == Kind::Corner) {
    // Stage gate: Boundary-To-Corner starts once no OFF/INNER robot is
    // visible and everything strictly inside the hull has finished
    // (FAULT-FINISH only).
    if (any_visible(snap, Color::Off) || any_visible(snap, Color::Inner)) {
      return Action::stay(Color::Outer);
    }
    Hull h = geom::convex_hull(pts);
    for (const auto& e : snap.entries) {
      if (h.strictly_inside(e.position) &&
          !entry_colors_within(e, {Color::FaultFinish})) {
        return Action::stay(Color::Outer);
      }
    }
    return Action::stay(Color::Move1);
  }

  return Action::stay(Color::Outer);
}

Action act_inner(const Snapshot& snap) {
  const Point& self = snap.self().position;
  std::vector<Point> pts = all_positions(snap);
  bool linear = view_linear(snap);

  if (snap.entries.size() == 1) {
    // All visible robots share our point: we are a corner of a singleton
    // hull, so the FAULT endgame takes over.
    return Action::stay(Color::Fault);
  }

  // Collocated with a finished faulty robot: we are at the gathering point;
  // join the FAULT endgame so the others can converge on us.
  if (snap.self().colors.count(Color::FaultFinish)) {
    return Action::stay(Color::Fault);
  }

  if (linear) {
    if (any_visible(snap, Color::Off)) return Action::stay(Color::Inner);
    std::vector<Point> star = star_positions(snap, kLinearIgnore);
    std::vector<Point> snbrs = hull_neighbours(self, star);
    if (snbrs.empty()) {
      // Only signalling/finished faulty robots remain around us: every live
      // robot is collocated with us (an interior robot can never flank a
      // Case 2 midpoint finisher), so finish here.
      if (any_visible(snap, Color::Fault) ||
          any_visible(snap, Color::FaultFinish)) {
        return Action::stay(Color::FaultFinish, /*term=*/true);
      }
      return Action::stay(Color::Inner);
    }
    // Wave handover: a terminal INNER next to an INNER becomes the endpoint.
    // While a robot is merging into our own point (MOVE1/OUTER collocated
    // with us) we are the receiving pile: stay passive, or two piles could
    // chase each other forever.
    if (snbrs.size() == 1 && !snap.self().colors.count(Color::Move1) &&
        !snap.self().colors.count(Color::Outer)) {
      const SnapshotEntry* e = entry_at(snap, snbrs[0]);
      if (e->colors.count(Color::Inner)) return Action::stay(Color::Outer);
    }
    return Action::stay(Color::Inner);
  }

  Kind kind = self_kind(snap);
  if (kind != Kind::Interior) {
    // A non-interior INNER arises when the CG move degenerated the hull. It
    // anchors the gathering point while the remaining corners converge onto
    // it; with FAULT-FINISH or stale OUTER robots around it joins the fault
    // flow instead.
    if (any_visible(snap, Color::FaultFinish) ||
        any_visible(snap, Color::Outer)) {
      return Action::stay(Color::Fault);
    }
    return Action::stay(Color::Inner);
  }

  // Inner-To-Outer (also the re-ascent of stranded INNER robots).
  if (any_visible(snap, Color::Off) || any_visible(snap, Color::Move1) ||
      any_visible(snap, Color::Move2)) {
    return Action::stay(Color::Inner);
  }
  std::vector<Point> star = star_positions(snap, kStarIgnore);
  if (star.size() == 1 && !any_visible(snap, Color::Outer) &&
      any_visible(snap, Color::FaultFinish)) {
    // The whole pile has gathered at the CG of the finished faulty robots;
    // switch to the fault endgame to terminate.
    return Action::stay(Color::Fault);
  }
  if (star.size() == 1 || geom::all_collinear(star)) {
    // Degenerate CH_r^*: eligibility is immediate; the MOVE1 handler moves
    // straight to the nearest OUTER.
    Hull sh = geom::convex_hull(star);
    if (star.size() == 1 || sh.contains_vertex(self)) {
      return Action::stay(Color::Move1);
    }
    return Action::stay(Color::Inner);
  }
  Hull sh = geom::convex_hull(star);
  if (!sh.contains_vertex(self)) return Action::stay(Color::Inner);
  Point t = geom::int_visible_area(self, sh, pts, star);
  return Action::move_to(Color::Move1, t);
}

Action act_move1(const Snapshot& snap) {
  const Point& self = snap.self().position;
  std::vector<Point> pts = all_positions(snap);

  // Successful Case 2 endpoint merge.
  if (snap.self().colors.count(Color::Inner)) {
    return Action::stay(Color::Inner);
  }

  // A visible OFF is the gathering anchor (the first corner already moved to
  // the CG and landed); converge onto it. Robots travel as MOVE2 and turn OFF
  // only on landing, so OFF positions are always stationary; wait while any
  // convergence move (MOVE2) is in flight. Case 2 and the fault route never
  // pair MOVE1 with OFF, so this is unambiguous.
  if (!any_visible(snap, Color::FaultFinish) &&
      !any_visible(snap, Color::Fault) && any_visible(snap, Color::Off)) {
    if (any_visible(snap, Color::Move2)) return Action::stay(Color::Move1);
    std::vector<Point> offs = positions_with_color(snap, Color::Off);
    if (offs.size() == 1) return Action::move_to(Color::Move2, offs[0]);
    return Action::stay(Color::Move1);
  }

  bool linear = view_linear(snap);
  if (linear) {
    // Another robot shares our point: the merge actually completed, so join
    // the pile instead of signalling a failed move.
    if (snap.self().colors.count(Color::Outer)) {
      return Action::stay(Color::Inner);
    }
    // Case 2: the endpoint failed to reach its neighbour.
    return Action::stay(Color::Fault);
  }
  Kind kind = self_kind(snap);
  bool ff_visible = any_visible(snap, Color::FaultFinish);

  if (kind == Kind::Corner && ff_visible) {
    std::vector<Point> nbrs = hull_neighbours(self, pts);
    // A neighbour already in the gathering flow (hopped, parked, converging
    // or signalling) counts as ready.
    const std::set<Color> ready = {Color::FaultFinish, Color::Move1,
                                   Color::Move2, Color::Off, Color::Fault};
    bool nbrs_done = !nbrs.empty();
    for (const auto& n : nbrs) {
      bool ok = false;
      for (Color c : ready) {
        if (has_color_at(snap, n, c)) ok = true;
      }
      if (!ok) nbrs_done = false;
    }
    if (nbrs_done) {
      try {
        Hull h = geom::convex_hull(pts);
        Point t = geom::ext_visible_area(self, h, pts);
        return Action::move_to(Color::Move2, t);
      } catch (const geom::DegenerateHull&) {
        return Action::stay(Color::Move2);
      }
    }
  }

  if (kind == Kind::Corner && !ff_visible) {
    if (all_colors_within(snap, {Color::Move1})) {
      return Action::move_to(Color::Move2, geom::center_of_gravity(pts));
    }
  }

  if (!linear && kind == Kind::Interior) {
    // Inner-To-Outer: hop to the nearest OUTER in the outward half-plane.
    if (any_visible(snap, Color::Move2)) return Action::stay(Color::Move1);
    std::vector<Point> outers = positions_with_color(snap, Color::Outer);
    if (outers.empty()) {
      // With the fault flow running, our interior view is transient (corners
      // hopped outside); wait instead of misreporting a fault.
      if (ff_visible || any_visible(snap, Color::Fault)) {
        return Action::stay(Color::Move1);
      }
      return Action::stay(Color::Fault);
    }
    std::vector<Point> star = star_positions(snap, kStarIgnore);
    std::vector<Point> nbrs = hull_neighbours(self, star);
    std::vector<Point> candidates;
    if (nbrs.empty()) {
      candidates = outers;
    } else {
      geom::Line l = nbrs.size() == 2
                         ? geom::Line::with_direction(self, nbrs[1] - nbrs[0])
                         : geom::Line::with_direction(
                               self, Point{-(nbrs[0].y - self.y),
                                           nbrs[0].x - self.x});
      int away = -sgn(l.eval(nbrs[0]));
      if (away == 0 && nbrs.size() == 2) away = -sgn(l.eval(nbrs[1]));
      for (const auto& o : outers) {
        if (away != 0 && sgn(l.eval(o)) == away) candidates.push_back(o);
      }
      if (candidates.empty()) candidates = outers;
    }
    Point t = *nearest_point(self, candidates);
    return Action::move_to(Color::Move2, t);
  }

  return Action::stay(Color::Move1);
}

Action act_move2(const Snapshot& snap) {
  std::vector<Point> pts = all_positions(snap);

  if (snap.self().colors.count(Color::Outer)) return Action::stay(Color::Outer);
  if (snap.self().colors.count(Color::Move1)) return Action::stay(Color::Move1);

  // Landing of a gathering-anchor move: become the (or join the) stationary
  // OFF anchor at the CG. A genuine lander sits on the pile or strictly
  // inside the remaining corners; a MOVE2 robot still occupying a hull corner
  // never moved (it froze), and must anchor the fault route instead so the
  // others do not chase a second OFF pile.
  if (!any_visible(snap, Color::FaultFinish) &&
      !any_visible(snap, Color::Fault) &&
      (any_visible(snap, Color::Move1) || any_visible(snap, Color::Off)) &&
      all_colors_within(snap, {Color::Move1, Color::Move2, Color::Off})) {
    if (snap.self().colors.count(Color::Off)) return Action::stay(Color::Off);
    bool corner = view_linear(snap)
                      ? hull_neighbours(snap.self().position, pts).size() <= 1
                      : self_kind(snap) == Kind::Corner;
    if (!corner) return Action::stay(Color::Off);
    return Action::stay(Color::Fault);
  }

  if (view_linear(snap)) {
    // A Case 2 midpoint finisher always has its OUTER partner in view. With
    // fault signals visible but no OUTER, this is the fault-route gathering
    // instead: park and converge through it.
    if (!any_visible(snap, Color::Outer) &&
        (any_visible(snap, Color::Fault) ||
         any_visible(snap, Color::FaultFinish))) {
      return Action::stay(Color::Off);
    }
    // Case 2: the midpoint move has ended; signal completion.
    return Action::stay(Color::FaultFinish);
  }

  Kind kind = self_kind(snap);

  if (kind == Kind::Corner && any_visible(snap, Color::FaultFinish)) {
    Point cg = *fault_finish_cg(snap);
    if (point_unobstructed(snap, cg)) return Action::stay(Color::Off);
    try {
      Hull h = geom::convex_hull(pts);
      Point t = geom::ext_visible_area(snap.self().position, h, pts);
      return Action::move_to(Color::Off, t);
    } catch (const geom::DegenerateHull&) {
      return Action::stay(Color::Off);
    }
  }

  if (kind == Kind::Boundary) {
    std::vector<Point> nbrs = hull_neighbours(snap.self().position, pts);
    if (neighbour_has(snap, nbrs, Color::Off)) return Action::stay(Color::Move2);
    bool all_done = !nbrs.empty();
    for (const auto& n : nbrs) {
      const SnapshotEntry* e = entry_at(snap, n);
      if (!e->colors.count(Color::Move1) && !e->colors.count(Color::Move2) &&
          !e->colors.count(Color::Fault)) {
        all_done = false;
      }
    }
    if (all_done && !any_visible(snap, Color::Outer)) {
      return Action::stay(Color::FaultFinish);
    }
    return Action::stay(Color::Fault);
  }

  // A hopped corner that cannot see any FAULT-FINISH yet (an old collocated
  // position may still obstruct the view): wait for the scene to clear.
  if (kind == Kind::Corner) return Action::stay(Color::Move2);

  return Action::stay(Color::Fault);
}

Action act_fault(const Snapshot& snap) {
  if (any_visible(snap, Color::Off) || any_visible(snap, Color::Inner)) {
    return Action::stay(Color::Fault);
  }
  // Inner-To-Outer movers (strictly inside the hull) must finish before the
  // confirmation signal; MOVE1/MOVE2 on the hull are Gathering-stage corners
  // and do not block it.
  {
    std::vector<Point> pts = all_positions(snap);
    geom::Hull h = geom::convex_hull(pts);
    for (const auto& e : snap.entries) {
      if ((e.colors.count(Color::Move1) || e.colors.count(Color::Move2)) &&
          h.strictly_inside(e.position)) {
        return Action::stay(Color::Fault);
      }
    }
  }

  // Standing on a finished faulty robot's position: this is the gathering
  // point, finish here.
  if (snap.self().colors.count(Color::FaultFinish)) {
    return Action::stay(Color::FaultFinish, /*term=*/true);
  }

  // Gathering endgame: only FAULT / FAULT-FINISH remain. Travel to the
  // nearest finished faulty robot keeping FAULT as the transit color, so
  // robots in flight never corrupt another robot's target selection; the
  // landing is detected (and terminated) by the rule above. A frozen robot
  // simply retries, which is harmless.
  if (all_colors_within(snap, {Color::Fault, Color::FaultFinish}) &&
      any_visible(snap, Color::FaultFinish)) {
    std::vector<Point> ffs = positions_with_color(snap, Color::FaultFinish);
    if (auto t = nearest_point(snap.self().position, ffs)) {
      return Action::move_to(Color::Fault, *t);
    }
  }

  std::vector<Point> pts = all_positions(snap);

  // Confirmation-Signal-To-Outers: the innermost unfinished faulty robots
  // turn FAULT-FINISH first, layer by layer.
  geom::LayerDecomposition layers = geom::convex_layers(pts);
  for (const auto& layer : layers.layers) {
    if (!layer.on_boundary(snap.self().position)) continue;
    bool interior_done = true;
    for (const auto& e : snap.entries) {
      if (layer.strictly_inside(e.position) &&
          !entry_colors_within(e, {Color::FaultFinish})) {
        interior_done = false;
      }
    }
    if (interior_done) return Action::stay(Color::FaultFinish);
    break;
  }
  return Action::stay(Color::Fault);
}

Action act_fault_finish(const Snapshot& snap) {
  if (snap.entries.size() == 1) {
    if (entry_colors_within(snap.self(), {Color::FaultFinish})) {
      return Action::stay(Color::FaultFinish, /*term=*/true);
    }
    return Action::stay(Color::FaultFinish);
  }
  // Endgame: once only FAULT / FAULT-FINISH remain, the signal has served
  // its purpose; finish in place (FAULT-FINISH robots never move, so the
  // stragglers' targets stay stable).
  if (all_colors_within(snap, {Color::Fault, Color::FaultFinish})) {
    return Action::stay(Color::FaultFinish, /*term=*/true);
  }
  return Action::stay(Color::FaultFinish);
}

}  // namespace

Action step_7color(Color own, const Snapshot& snap) {
  if (!model::palette_contains(PaletteId::Seven, own)) {
    throw PaletteMismatch("own color " + model::color_name(own) +
                          " is not in the 7-color palette");
  }
  switch (own) {
    case Color::Off:
      return act_off(snap);
    case Color::Outer:
      return act_outer(snap);
    case Color::Inner:
      return act_inner(snap);
    case Color::Move1:
      return act_move1(snap);
    case Color::Move2:
      return act_move2(snap);
    case Color::Fault:
      return act_fault(snap);
    default:
      return act_fault_finish(snap);
  }
}

}  // namespace gather::algos
