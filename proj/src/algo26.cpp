#include "algos_internal.hpp"
#include "gather/algos.hpp"

// The O(max{l,f})-epoch gathering algorithm in the 26-color palette.
// Case 1 (interior robots exist) runs the eight stages Robot-Categorisation,
// Boundary-To-Interior, Detecting-Eligible-Layer, Interior-To-Corners,
// Confirmation-Signal-To-Corners, Corners-To-CG, Finding-Gathering-Point and
// Move-To-GatheringPoint&Terminate; Case 2 (no interior robots) expands the
// hull until interiors appear or moves straight to the CG; Case 3 breaks an
// initial linear configuration with perpendicular escapes. FAULT1-colored
// robots are disregarded in every computation.
namespace gather::algos {

namespace {

using detail::all_positions;
using detail::entry_at;
using detail::has_color_at;
using detail::hull_neighbours;
using detail::nearest_point;
using detail::point_unobstructed;
using detail::positions_with_color;
using detail::star_positions;
using geom::Hull;
using geom::Kind;
using model::SnapshotEntry;

const std::set<Color> kIgnoreFault1 = {Color::Fault1};

// Positions that participate in geometry: everything except robots whose only
// color is FAULT1 ("always disregard it in all future computations").
std::vector<Point> effective_positions(const Snapshot& snap) {
  return star_positions(snap, kIgnoreFault1);
}

bool entry_colors_within(const SnapshotEntry& e, const std::set<Color>& set) {
  for (Color c : e.colors) {
    if (!set.count(c)) return false;
  }
  return true;
}

bool any_visible(const Snapshot& snap, std::initializer_list<Color> colors) {
  for (Color c : colors) {
    if (snap.any_color(c)) return true;
  }
  return false;
}

bool neighbour_has(const Snapshot& snap, const std::vector<Point>& nbrs,
                   Color c) {
  for (const auto& n : nbrs) {
    if (has_color_at(snap, n, c)) return true;
  }
  return false;
}

std::vector<Point> positions_with_any(const Snapshot& snap,
                                      std::initializer_list<Color> colors) {
  std::vector<Point> out;
  for (const auto& e : snap.entries) {
    for (Color c : colors) {
      if (e.colors.count(c)) {
        out.push_back(e.position);
        break;
      }
    }
  }
  return out;
}

bool self_collocated_with(const Snapshot& snap, Color c) {
  return snap.self().colors.count(c) != 0;
}

// Gathering-point priority: any robot outside the fault-signal colors that
// sees a GATHER robot heads for it before anything else.
std::optional<Action> gather_priority(const Snapshot& snap) {
  if (!snap.any_color(Color::Gather)) return std::nullopt;
  if (self_collocated_with(snap, Color::Gather)) {
    return Action::stay(Color::Gather);
  }
  auto t = snap.nearest_with_color(Color::Gather);
  if (!t) return std::nullopt;
  return Action::move_to(Color::MoveToGather, *t);
}

// Kind of the self position within the effective positions.
Kind self_kind_eff(const Snapshot& snap, const std::vector<Point>& pts) {
  return geom::classify(snap.self().position, pts).kind;
}

// Finished robots act as immovable gathering beacons. TERMINATE is included
// because a finished faulty robot may be relabelled by a robot that reaches
// it, which must not make the beacon disappear.
bool beacon_visible(const Snapshot& snap) {
  return any_visible(snap, {Color::FaultFinish, Color::FaultTerminate,
                            Color::Terminate});
}

std::vector<Point> beacon_positions(const Snapshot& snap) {
  return positions_with_any(snap, {Color::FaultFinish, Color::FaultTerminate,
                                   Color::Terminate});
}

// CG of the hull of the finished robots.
std::optional<Point> fault_cg(const Snapshot& snap) {
  std::vector<Point> pts = beacon_positions(snap);
  if (pts.empty()) return std::nullopt;
  return geom::center_of_gravity(pts);
}

// The layer of the local onion decomposition that contains p.
const Hull* own_layer(const geom::LayerDecomposition& layers, const Point& p) {
  for (const auto& layer : layers.layers) {
    if (layer.on_boundary(p)) return &layer;
  }
  return nullptr;
}

std::vector<Point> layer_members(const Hull& layer) {
  std::vector<Point> out = layer.vertices;
  out.insert(out.end(), layer.boundary_points.begin(),
             layer.boundary_points.end());
  return out;
}

// ---------------------------------------------------------------------------

Action act_off(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  std::vector<Point> pts = effective_positions(snap);

  // Corners-To-CG re-hop: an OFF corner that sees finished robots has
  // already visited its exterior visible area twice and now heads for the CG.
  if (beacon_visible(snap)) {
    if (self_kind_eff(snap, pts) == Kind::Corner) {
      if (any_visible(snap, {Color::Move4, Color::MoveEnded, Color::Move5,
                             Color::MoveToCorner})) {
        return Action::stay(Color::Corner);
      }
      return Action::move_to(Color::Move4, *fault_cg(snap));
    }
    return Action::stay(Color::Off);
  }

  // Robot-Categorisation.
  if (geom::all_collinear(pts)) {
    bool terminal =
        hull_neighbours(snap.self().position, pts).size() <= 1;
    return Action::stay(terminal ? Color::Corner : Color::NonCorner);
  }
  switch (self_kind_eff(snap, pts)) {
    case Kind::Corner:
      return Action::stay(Color::Corner);
    case Kind::Boundary:
      return Action::stay(Color::Boundary);
    default:
      return Action::stay(Color::Interior);
  }
}

Action act_corner(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (snap.any_color(Color::Off)) return Action::stay(Color::Corner);
  // Robots heading for the CG or for a gathering corner rely on the corners
  // staying put; hold position until they have resolved.
  if (any_visible(snap, {Color::Move4, Color::Move5, Color::MoveToCorner})) {
    return Action::stay(Color::Corner);
  }
  const Point& self = snap.self().position;
  std::vector<Point> pts = effective_positions(snap);

  if (geom::all_collinear(pts)) {
    // Case 3: a terminal robot of the line drives the escape.
    std::vector<Point> nbrs = hull_neighbours(self, pts);
    if (nbrs.empty()) {
      // Everyone visible is collocated with us: fall through to Case 2, which
      // funnels a lone multiplicity into MOVE4 / MOVE-ENDED / TERMINATE.
      return Action::stay(Color::Intermediate);
    }
    if (nbrs.size() == 2 &&
        has_color_at(snap, nbrs[0], Color::ExpandingL) &&
        has_color_at(snap, nbrs[1], Color::ExpandingL)) {
      // Both escapes landed back on a common line through us: we are the
      // designated meeting point.
      return Action::stay(Color::Gather);
    }
    // A neighbour that already finished (gathered or frozen-and-confirmed)
    // marks the gathering point; join it.
    std::vector<Point> done;
    for (const auto& n : nbrs) {
      const SnapshotEntry* e = entry_at(snap, n);
      if (e->colors.count(Color::Terminate) ||
          e->colors.count(Color::FaultTerminate) ||
          e->colors.count(Color::FaultFinish)) {
        done.push_back(n);
      }
    }
    if (auto t = nearest_point(self, done)) {
      return Action::move_to(Color::MoveToGather, *t);
    }
    if (nbrs.size() != 1) return Action::stay(Color::Corner);
    const Point& nbr = nbrs[0];
    const SnapshotEntry* e = entry_at(snap, nbr);
    if (e->colors.count(Color::NonCorner)) {
      // Escape perpendicularly, by the distance to the neighbour.
      Point d = nbr - self;
      Point t{self.x - d.y, self.y + d.x};
      return Action::move_to(Color::ExpandingL, t);
    }
    if (e->colors.count(Color::Corner)) {
      return Action::move_to(Color::Move1, Scalar(1, 2) * (self + nbr));
    }
    if (e->colors.count(Color::Move1)) return Action::stay(Color::Corner);
    if (e->colors.count(Color::MoveEnded)) {
      return Action::move_to(Color::Move1, nbr);
    }
    return Action::stay(Color::Corner);
  }

  // Case 1 in progress: wait while any robot is still working its way to the
  // corners or the confirmation signal is incomplete.
  if (any_visible(snap, {Color::Interior, Color::MoveToInterior, Color::Next,
                         Color::NotNext, Color::Eligible, Color::Move1,
                         Color::Move2, Color::Fault})) {
    return Action::stay(Color::Corner);
  }

  // Case 2: hold the hull steady while the boundary robots step inward.
  if (snap.any_color(Color::Boundary)) return Action::stay(Color::Corner);

  // Wait for any remaining activity outside {CORNER, FAULT-FINISH,
  // FAULT-TERMINATE, TERMINATE}; then start toward the CG.
  for (const auto& e : snap.entries) {
    if (!entry_colors_within(e, {Color::Corner, Color::FaultFinish,
                                 Color::FaultTerminate, Color::Terminate,
                                 Color::Fault1})) {
      return Action::stay(Color::Corner);
    }
  }
  return Action::stay(Color::Intermediate);
}

Action act_boundary(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (snap.any_color(Color::Off)) return Action::stay(Color::Boundary);
  const Point& self = snap.self().position;
  std::vector<Point> pts = effective_positions(snap);

  if (geom::all_collinear(pts)) {
    // Case 3: the robot next to a failed escape becomes the new terminal.
    if (hull_neighbours(self, pts).size() <= 1) {
      return Action::stay(Color::Corner);
    }
    return Action::stay(Color::Boundary);
  }

  std::vector<Point> nbrs = hull_neighbours(self, pts);
  if (neighbour_has(snap, nbrs, Color::Expanding) ||
      neighbour_has(snap, nbrs, Color::ExpandingL)) {
    return Action::stay(Color::Boundary);
  }

  // Case 1: move onto the nearest interior robot.
  if (auto t = snap.nearest_with_color(Color::Interior)) {
    return Action::move_to(Color::MoveToInterior, *t);
  }

  // Case 2: no interior robot is visible. Step halfway toward the CG to
  // become interior ourselves; a frozen robot stays on the hull edge and
  // self-diagnoses at the landing check.
  switch (self_kind_eff(snap, pts)) {
    case Kind::Corner:
      return Action::stay(Color::Corner);
    case Kind::Interior:
      return Action::stay(Color::Interior);
    default: {
      Point cg = geom::center_of_gravity(pts);
      Point t = self + Scalar(1, 2) * (cg - self);
      return Action::move_to(Color::MoveToInterior, t);
    }
  }
}

Action act_move_to_interior(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (self_collocated_with(snap, Color::Interior)) {
    return Action::stay(Color::Interior);
  }
  // Landing check: strictly inside the visible hull means the move happened;
  // still on the hull boundary means we are frozen.
  std::vector<Point> pts = effective_positions(snap);
  if (!geom::all_collinear(pts) &&
      self_kind_eff(snap, pts) == Kind::Interior) {
    return Action::stay(Color::Interior);
  }
  return Action::stay(Color::Fault);
}

Action act_interior(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (any_visible(snap, {Color::Off, Color::Boundary, Color::MoveToInterior,
                         Color::Eligible, Color::Move1, Color::Move2})) {
    return Action::stay(Color::Interior);
  }
  if (snap.entries.size() == 1) return Action::stay(Color::Interior);

  // Detecting-Eligible-Layer: on the boundary of CH_r^* (which ignores the
  // corner and fault colors) means eligible.
  std::vector<Point> star = star_positions(
      snap, {Color::Corner, Color::Fault, Color::Fault1, Color::FaultFinish,
             Color::FaultTerminate});
  Hull h = geom::convex_hull(star);
  bool eligible = h.on_boundary(snap.self().position);
  return Action::stay(eligible ? Color::Next : Color::NotNext);
}

Action act_next(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (any_visible(snap, {Color::Interior, Color::Off, Color::Boundary,
                         Color::MoveToInterior})) {
    return Action::stay(Color::Next);
  }
  return Action::stay(Color::Eligible);
}

Action act_not_next(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (any_visible(snap, {Color::Interior, Color::Next})) {
    return Action::stay(Color::NotNext);
  }
  return Action::stay(Color::Interior);
}

// CH_r^* of the Interior-To-Corners stage: ignore CORNER, FAULT and MOVE2
// robots (and the permanently disregarded / finished fault colors).
std::vector<Point> interior_to_corner_star(const Snapshot& snap) {
  return star_positions(snap, {Color::Corner, Color::Fault, Color::Move2,
                               Color::Fault1, Color::FaultFinish,
                               Color::FaultTerminate});
}

Action act_eligible(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  const Point& self = snap.self().position;
  std::vector<Point> pts = effective_positions(snap);
  std::vector<Point> star = interior_to_corner_star(snap);
  std::vector<Point> nbrs = hull_neighbours(self, star);
  if (nbrs.empty()) {
    // CH_r^* is just ourselves; the MOVE1 rules pick a corner directly.
    return Action::stay(Color::Move1);
  }
  // Move within BoundaryVisibleArea toward the (deterministically) chosen
  // midpoint so that the corners in the outward half-plane become visible.
  Point chosen = *nearest_point(self, nbrs);
  Point mid = Scalar(1, 2) * (self + chosen);
  Hull h = geom::convex_hull(star);
  Point t = geom::boundary_visible_area(self, h, pts, mid);
  return Action::move_to(Color::Move1, t);
}

Action act_move1(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  const Point& self = snap.self().position;
  std::vector<Point> pts = effective_positions(snap);

  if (geom::all_collinear(pts)) {
    // Case 3: the midpoint move of the two-robot endgame has finished.
    return Action::stay(Color::MoveEnded);
  }

  std::vector<Point> corners = positions_with_color(snap, Color::Corner);
  if (corners.empty()) {
    if (snap.any_color(Color::Move2)) return Action::stay(Color::Eligible);
    return Action::stay(Color::Fault);
  }

  // Pick the nearest CORNER in a half-plane free of ELIGIBLE, MOVE1 and
  // INTERIOR robots.
  std::vector<Point> bad =
      positions_with_any(snap, {Color::Eligible, Color::Move1, Color::Interior});
  bad.erase(std::remove(bad.begin(), bad.end(), self), bad.end());
  std::vector<Point> star = interior_to_corner_star(snap);
  std::vector<Point> nbrs = hull_neighbours(self, star);

  std::vector<geom::Line> lines;
  Hull sh = geom::convex_hull(star);
  if (nbrs.size() == 2 && sh.contains_vertex(self)) {
    lines.push_back(geom::Line::through(self, nbrs[0]));
    lines.push_back(geom::Line::through(self, nbrs[1]));
  } else if (nbrs.size() == 2) {
    lines.push_back(geom::Line::through(nbrs[0], nbrs[1]));
  } else if (nbrs.size() == 1) {
    lines.push_back(geom::Line::through(self, nbrs[0]));
  }
  for (const auto& l : lines) {
    std::vector<Point> candidates;
    for (const auto& c : corners) {
      int s = sgn(l.eval(c));
      if (s == 0) continue;
      bool blocked = false;
      for (const auto& b : bad) {
        if (sgn(l.eval(b)) == s) blocked = true;
      }
      if (!blocked) candidates.push_back(c);
    }
    if (auto t = nearest_point(self, candidates)) {
      return Action::move_to(Color::Move2, *t);
    }
  }
  // No corner in a clean half-plane: take the nearest one outright.
  return Action::move_to(Color::Move2, *nearest_point(self, corners));
}

Action act_move2(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (self_collocated_with(snap, Color::Corner)) {
    return Action::stay(Color::Corner);
  }
  return Action::stay(Color::Fault);
}

Action act_fault(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (any_visible(snap, {Color::Interior, Color::Move1, Color::Move2,
                         Color::Boundary, Color::MoveToInterior, Color::Next,
                         Color::NotNext, Color::Eligible})) {
    return Action::stay(Color::Fault);
  }
  // Confirmation-Signal-To-Corners: signal once the interior of our own local
  // layer holds nothing but finished faulty robots.
  std::vector<Point> pts = effective_positions(snap);
  geom::LayerDecomposition layers = geom::convex_layers(pts);
  const Hull* layer = own_layer(layers, snap.self().position);
  if (layer) {
    bool done = true;
    for (const auto& e : snap.entries) {
      if (layer->strictly_inside(e.position) &&
          !entry_colors_within(e, {Color::FaultFinish, Color::FaultTerminate,
                                   Color::Terminate, Color::Fault1})) {
        done = false;
      }
    }
    if (done) return Action::stay(Color::FaultFinish);
  }
  return Action::stay(Color::Fault);
}

Action act_fault_finish(const Snapshot& snap) {
  // Proceed to FAULT-TERMINATE only when no robot is still working; the
  // gathered robots (GATHER/TERMINATE) and disregarded ones do not block.
  const std::set<Color> passive = {Color::FaultFinish, Color::FaultTerminate,
                                   Color::Gather, Color::Terminate,
                                   Color::Fault1};
  for (const auto& e : snap.entries) {
    if (!entry_colors_within(e, passive)) return Action::stay(Color::FaultFinish);
  }
  const Point& self = snap.self().position;
  std::vector<Point> pts = effective_positions(snap);

  auto finish = [&]() -> Action {
    std::vector<Point> targets = beacon_positions(snap);
    targets.erase(std::remove(targets.begin(), targets.end(), self),
                  targets.end());
    if (auto t = nearest_point(self, targets)) {
      return Action::move_to(Color::FaultTerminate, *t, /*term=*/true);
    }
    return Action::stay(Color::FaultTerminate, /*term=*/true);
  };

  geom::LayerDecomposition layers = geom::convex_layers(pts);
  const Hull* layer = own_layer(layers, self);
  if (!layer) return Action::stay(Color::FaultFinish);
  std::vector<Point> members = layer_members(*layer);
  if (members.size() <= 2) return finish();
  std::vector<Point> nbrs = hull_neighbours(self, members);
  if (nbrs.size() < 2) return finish();
  geom::Line l = geom::Line::through(nbrs[0], nbrs[1]);
  for (int side : {+1, -1}) {
    bool ok = true;
    for (const auto& e : snap.entries) {
      if (sgn(l.eval(e.position)) == side &&
          !entry_colors_within(e, {Color::FaultTerminate, Color::Gather,
                                   Color::Terminate, Color::Fault1})) {
        ok = false;
      }
    }
    if (ok) return finish();
  }
  return Action::stay(Color::FaultFinish);
}

Action act_intermediate(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (any_visible(snap, {Color::Move4, Color::MoveEnded, Color::Move5,
                         Color::MoveToCorner})) {
    return Action::stay(Color::Corner);
  }
  if (snap.any_color(Color::Move3)) return Action::stay(Color::Intermediate);

  std::vector<Point> pts = effective_positions(snap);
  if (beacon_visible(snap)) {
    // Case 1: hop outward so every finished robot becomes visible.
    try {
      Hull h = geom::convex_hull(pts);
      if (!h.contains_vertex(snap.self().position)) {
        return Action::stay(Color::Move3);
      }
      Point t = geom::ext_visible_area(snap.self().position, h, pts);
      return Action::move_to(Color::Move3, t);
    } catch (const geom::DegenerateHull&) {
      return Action::stay(Color::Move3);
    }
  }
  // Case 2: no faulty robots inside; meet at the CG of the corners.
  std::vector<Point> cpts =
      positions_with_any(snap, {Color::Corner, Color::Intermediate});
  if (cpts.empty()) return Action::stay(Color::Intermediate);
  return Action::move_to(Color::Move4, geom::center_of_gravity(cpts));
}

Action act_move3(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (any_visible(snap, {Color::Move4, Color::MoveEnded, Color::Move5,
                         Color::MoveToCorner})) {
    return Action::stay(Color::Corner);
  }
  auto cg = fault_cg(snap);
  if (!cg) return Action::stay(Color::Corner);
  if (point_unobstructed(snap, *cg)) {
    return Action::move_to(Color::Move4, *cg);
  }
  std::vector<Point> pts = effective_positions(snap);
  try {
    Hull h = geom::convex_hull(pts);
    if (!h.contains_vertex(snap.self().position)) {
      return Action::stay(Color::Off);
    }
    Point t = geom::ext_visible_area(snap.self().position, h, pts);
    return Action::move_to(Color::Off, t);
  } catch (const geom::DegenerateHull&) {
    return Action::stay(Color::Off);
  }
}

Action act_move4(const Snapshot& snap) {
  if (self_collocated_with(snap, Color::FaultFinish) ||
      self_collocated_with(snap, Color::FaultTerminate) ||
      self_collocated_with(snap, Color::Terminate)) {
    return Action::stay(Color::Terminate, /*term=*/true);
  }
  return Action::stay(Color::MoveEnded);
}

Action act_move_ended(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (snap.any_color(Color::Move4)) return Action::stay(Color::MoveEnded);
  const Point& self = snap.self().position;
  std::vector<Point> pts = effective_positions(snap);

  if (geom::all_collinear(pts) &&
      !any_visible(snap, {Color::FaultFinish, Color::FaultTerminate})) {
    // Case 3 endgame: meet the other MOVE-ENDED robot, or finish at a faulty
    // one.
    if (any_visible(snap, {Color::Move1, Color::Corner})) {
      return Action::stay(Color::MoveEnded);
    }
    std::vector<Point> others =
        positions_with_any(snap, {Color::MoveEnded, Color::Terminate});
    others.erase(std::remove(others.begin(), others.end(), self), others.end());
    if (auto t = nearest_point(self, others)) {
      return Action::move_to(Color::Terminate, *t, /*term=*/true);
    }
    bool all_fault1 = true;
    for (const auto& e : snap.entries) {
      if (e.position != self &&
          !entry_colors_within(e, {Color::Fault1, Color::FaultTerminate})) {
        all_fault1 = false;
      }
    }
    if (all_fault1) return Action::stay(Color::Terminate, /*term=*/true);
    return Action::stay(Color::MoveEnded);
  }

  // Finding-Gathering-Point: hop into the visible area of our own singleton
  // hull to spot any idle CORNER robot.
  Hull own = geom::convex_hull({self});
  Point t = geom::boundary_visible_area(self, own, pts, self);
  return Action::move_to(Color::Move5, t);
}

Action act_move5(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (any_visible(snap, {Color::Move3, Color::Intermediate})) {
    return Action::stay(Color::Move5);
  }
  if (auto t = snap.nearest_with_color(Color::Corner)) {
    return Action::move_to(Color::MoveToCorner, *t);
  }
  if (auto t = snap.nearest_with_color(Color::FaultFinish)) {
    return Action::move_to(Color::MoveToCorner, *t);
  }
  if (auto t = snap.nearest_with_color(Color::FaultTerminate)) {
    return Action::move_to(Color::MoveToCorner, *t);
  }
  if (auto t = snap.nearest_with_color(Color::Terminate)) {
    return Action::move_to(Color::MoveToCorner, *t);
  }
  if (self_collocated_with(snap, Color::Corner) ||
      self_collocated_with(snap, Color::FaultFinish)) {
    return Action::stay(Color::MoveToCorner);
  }
  return Action::stay(Color::FaultFinish);
}

Action act_move_to_corner(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (self_collocated_with(snap, Color::Corner)) {
    return Action::stay(Color::Gather);
  }
  if (self_collocated_with(snap, Color::FaultFinish) ||
      self_collocated_with(snap, Color::FaultTerminate) ||
      self_collocated_with(snap, Color::Terminate)) {
    return Action::stay(Color::Terminate, /*term=*/true);
  }
  return Action::stay(Color::FaultFinish);
}

Action act_gather(const Snapshot& snap) {
  const Point& self = snap.self().position;
  if (snap.entries.size() == 1) {
    return Action::stay(Color::Terminate, /*term=*/true);
  }
  for (const auto& e : snap.entries) {
    if (e.position != self &&
        !entry_colors_within(e, {Color::FaultTerminate, Color::Terminate,
                                 Color::Fault1})) {
      return Action::stay(Color::Gather);
    }
  }
  // Everyone still moving has arrived. If robots already terminated at
  // another point, that point is the gathering point (they cannot move);
  // otherwise finish here.
  std::vector<Point> done =
      positions_with_any(snap, {Color::Terminate, Color::FaultTerminate});
  done.erase(std::remove(done.begin(), done.end(), self), done.end());
  if (auto t = nearest_point(self, done)) {
    return Action::move_to(Color::Terminate, *t, /*term=*/true);
  }
  return Action::stay(Color::Terminate, /*term=*/true);
}

Action act_move_to_gather(const Snapshot& snap) {
  if (self_collocated_with(snap, Color::Gather) ||
      self_collocated_with(snap, Color::Terminate) ||
      self_collocated_with(snap, Color::FaultTerminate) ||
      self_collocated_with(snap, Color::FaultFinish)) {
    return Action::stay(Color::Gather);
  }
  if (geom::all_collinear(effective_positions(snap))) {
    return Action::stay(Color::Fault1);
  }
  return Action::stay(Color::FaultFinish);
}

Action act_expanding(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  std::vector<Point> pts = effective_positions(snap);
  std::vector<Point> nbrs = hull_neighbours(snap.self().position, pts);
  if (neighbour_has(snap, nbrs, Color::Boundary)) {
    return Action::stay(Color::Fault1);
  }
  return Action::stay(Color::Corner);
}

Action act_fault1(const Snapshot&) { return Action::stay(Color::Fault1); }

Action act_non_corner(const Snapshot& snap) {
  if (auto a = gather_priority(snap)) return *a;
  if (snap.any_color(Color::Off)) return Action::stay(Color::NonCorner);
  const Point& self = snap.self().position;
  std::vector<Point> pts = effective_positions(snap);

  if (!geom::all_collinear(pts)) {
    switch (self_kind_eff(snap, pts)) {
      case Kind::Corner:
        return Action::stay(Color::Corner);
      case Kind::Boundary:
        return Action::stay(Color::Boundary);
      default:
        return Action::stay(Color::Interior);
    }
  }

  if (snap.any_color(Color::ExpandingL)) {
    std::vector<Point> nbrs = hull_neighbours(self, pts);
    int expanding = 0;
    for (const auto& n : nbrs) {
      if (has_color_at(snap, n, Color::ExpandingL)) ++expanding;
    }
    if (nbrs.size() == 2 && expanding == 2) return Action::stay(Color::Gather);
    if (expanding == 1) return Action::stay(Color::Boundary);
  }
  return Action::stay(Color::NonCorner);
}

Action act_expanding_l(const Snapshot& snap) {
  const Point& self = snap.self().position;
  std::vector<Point> pts = effective_positions(snap);

  if (geom::all_collinear(pts)) {
    // Still on the line: the escape failed (or was symmetric); wait for the
    // neighbour's signal.
    std::vector<Point> nbrs = hull_neighbours(self, pts);
    for (const auto& n : nbrs) {
      const SnapshotEntry* e = entry_at(snap, n);
      if (e->colors.count(Color::Gather)) {
        return Action::move_to(Color::MoveToGather, n);
      }
      if (e->colors.count(Color::Boundary)) {
        return Action::stay(Color::Fault1);
      }
    }
    return Action::stay(Color::ExpandingL);
  }
  if (!any_visible(snap, {Color::Off, Color::NonCorner})) {
    return Action::stay(Color::Corner);
  }
  return Action::stay(Color::ExpandingL);
}

}  // namespace

Action step_26color(Color own, const Snapshot& snap) {
  if (!model::palette_contains(PaletteId::TwentySix, own)) {
    throw PaletteMismatch("own color " + model::color_name(own) +
                          " is not in the 26-color palette");
  }
  switch (own) {
    case Color::Off:
      return act_off(snap);
    case Color::Corner:
      return act_corner(snap);
    case Color::Boundary:
      return act_boundary(snap);
    case Color::Interior:
      return act_interior(snap);
    case Color::MoveToInterior:
      return act_move_to_interior(snap);
    case Color::Next:
      return act_next(snap);
    case Color::NotNext:
      return act_not_next(snap);
    case Color::Eligible:
      return act_eligible(snap);
    case Color::Move1:
      return act_move1(snap);
    case Color::Move2:
      return act_move2(snap);
    case Color::Fault:
      return act_fault(snap);
    case Color::FaultFinish:
      return act_fault_finish(snap);
    case Color::Intermediate:
      return act_intermediate(snap);
    case Color::Move3:
      return act_move3(snap);
    case Color::Move4:
      return act_move4(snap);
    case Color::MoveEnded:
      return act_move_ended(snap);
    case Color::Move5:
      return act_move5(snap);
    case Color::MoveToCorner:
      return act_move_to_corner(snap);
    case Color::Gather:
      return act_gather(snap);
    case Color::MoveToGather:
      return act_move_to_gather(snap);
    case Color::Terminate:
      return Action::stay(Color::Terminate, /*term=*/true);
    case Color::FaultTerminate:
      return Action::stay(Color::FaultTerminate, /*term=*/true);
    case Color::Expanding:
      return act_expanding(snap);
    case Color::Fault1:
      return act_fault1(snap);
    case Color::NonCorner:
      return act_non_corner(snap);
    default:
      return act_expanding_l(snap);
  }
}

}  // namespace gather::algos
