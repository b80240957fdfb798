#include "gather/verify.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

#include "gather/algos.hpp"

namespace gather::verify {

namespace {

using model::palette_contains;
using sched::EventKind;
using sched::TraceEvent;

std::string point_str(const Point& p) {
  std::ostringstream os;
  os << "(" << p.x.get_str() << "," << p.y.get_str() << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// Per-robot state reconstruction from the event stream
// ---------------------------------------------------------------------------

// Piecewise-linear position history. Breakpoints come from the robot's own
// events; between a MoveStart and the event that ends the motion (MoveEnd or
// a mid-move FaultHalt) the engine moves at constant velocity, so linear
// interpolation between event positions reproduces it exactly.
struct Timeline {
  std::vector<Scalar> times;
  std::vector<Point> points;
  std::vector<std::pair<Scalar, Scalar>> moving;  // open motion intervals
  std::vector<Scalar> color_times;
  std::vector<Color> colors;

  void append(const Scalar& t, const Point& p) {
    if (!times.empty() && times.back() == t) {
      points.back() = p;
      return;
    }
    times.push_back(t);
    points.push_back(p);
  }

  Point position_at(const Scalar& t) const {
    std::size_t n = times.size();
    std::size_t i = 0;
    while (i + 1 < n && times[i + 1] <= t) ++i;
    if (i + 1 == n || t <= times[i]) return points[i];
    const Scalar& t0 = times[i];
    const Scalar& t1 = times[i + 1];
    Scalar a = (t - t0) / (t1 - t0);
    return points[i] + a * (points[i + 1] - points[i]);
  }

  bool moving_at(const Scalar& t) const {
    for (const auto& [t0, t1] : moving) {
      if (t0 < t && t < t1) return true;
    }
    return false;
  }

  Color color_at(const Scalar& t) const {
    Color c = colors.front();
    for (std::size_t i = 1; i < colors.size(); ++i) {
      if (color_times[i] <= t) c = colors[i];
    }
    return c;
  }
};

struct MoveSeg {
  std::uint32_t robot = 0;
  Scalar t0, t1;
  Point a, b;
  Color color;  // color announced at the move's start
};

// Colors present at each visible position, as the activation's snapshot saw
// them (mid-move robots appear at interpolated positions; all robots are
// included, terminated ones too).
struct ReconView {
  Point self;
  std::vector<Point> visible;  // distinct, includes self
  std::map<Point, std::set<Color>> colors;
  std::vector<Point> stationary_others;  // visible, hosts a stationary robot
};

bool entry_within(const std::set<Color>& entry, const std::set<Color>& set) {
  for (Color c : entry) {
    if (!set.count(c)) return false;
  }
  return true;
}

bool entry_has_any(const std::set<Color>& entry, const std::set<Color>& set) {
  for (Color c : entry) {
    if (set.count(c)) return true;
  }
  return false;
}

// Strict transversal crossing: the segments intersect at a point interior to
// both. Shared endpoints and collinear overlaps do not count.
bool proper_cross(const Point& a1, const Point& b1, const Point& a2,
                  const Point& b2) {
  int d1 = geom::orientation(a2, b2, a1);
  int d2 = geom::orientation(a2, b2, b1);
  int d3 = geom::orientation(a1, b1, a2);
  int d4 = geom::orientation(a1, b1, b2);
  return d1 * d2 < 0 && d3 * d4 < 0;
}

class Monitor {
 public:
  Monitor(const Configuration& initial, const sched::ExecutionTrace& trace,
          PaletteId palette)
      : trace_(trace), palette_(palette) {
    for (const auto& r : initial.robots) {
      Timeline tl;
      tl.append(initial.time, r.position);
      tl.color_times.push_back(initial.time);
      tl.colors.push_back(r.color);
      timelines_.emplace(r.id, std::move(tl));
      allowed_.push_back(r.position);
    }
    allowed_hull_ = geom::convex_hull(allowed_);
  }

  MonitorReport run() {
    prepass();
    for (const TraceEvent& ev : trace_.events) {
      switch (ev.kind) {
        case EventKind::LookStart:
          on_look(ev);
          break;
        case EventKind::ComputeEnd:
          on_compute_end(ev);
          break;
        case EventKind::MoveStart:
          on_move_start(ev);
          break;
        case EventKind::Terminate:
          on_terminate(ev);
          break;
        case EventKind::MoveEnd:
        case EventKind::FaultHalt:
          break;
      }
    }
    check_crossings();
    return std::move(report_);
  }

 private:
  using GroupKey = std::tuple<Scalar, Scalar, Scalar>;  // time, x, y

  void flag(const TraceEvent& ev, std::string rule, std::string detail) {
    report_.violations.push_back(
        {ev.time, ev.robot, std::move(rule), std::move(detail)});
  }

  // Builds position/color timelines, joint-look groups, move segments and the
  // set of (robot, time) termination marks, all in one sweep.
  void prepass() {
    std::map<std::uint32_t, std::size_t> open_seg;
    for (const TraceEvent& ev : trace_.events) {
      auto it = timelines_.find(ev.robot);
      if (it == timelines_.end()) continue;  // unknown id; flagged later
      Timeline& tl = it->second;
      tl.append(ev.time, ev.position);
      switch (ev.kind) {
        case EventKind::LookStart: {
          GroupKey key{ev.time, ev.position.x, ev.position.y};
          auto [git, fresh] = groups_.try_emplace(key, ev.robot, ev.color);
          if (!fresh && ev.robot < git->second.first) {
            git->second = {ev.robot, ev.color};
          }
          break;
        }
        case EventKind::ComputeEnd:
          tl.color_times.push_back(ev.time);
          tl.colors.push_back(ev.color);
          break;
        case EventKind::MoveStart:
          if (ev.target) {
            open_seg[ev.robot] = segs_.size();
            segs_.push_back(
                {ev.robot, ev.time, ev.time, ev.position, *ev.target, ev.color});
          }
          break;
        case EventKind::MoveEnd:
        case EventKind::FaultHalt: {
          auto oit = open_seg.find(ev.robot);
          if (oit != open_seg.end()) {
            MoveSeg& s = segs_[oit->second];
            s.t1 = ev.time;
            s.b = ev.position;  // frozen short of the target on a fault
            if (s.t1 > s.t0) tl.moving.push_back({s.t0, s.t1});
            open_seg.erase(oit);
          }
          break;
        }
        case EventKind::Terminate:
          terminated_at_.insert({ev.robot, ev.time});
          break;
      }
    }
    // A trace cut off by the budget can leave a move open; close it at its
    // recorded end so interpolation stays defined.
    for (const auto& [robot, idx] : open_seg) {
      MoveSeg& s = segs_[idx];
      s.t1 = s.t0;
      s.b = s.a;
    }
  }

  ReconView reconstruct(const Scalar& t, const Point& observer) const {
    ReconView v;
    v.self = observer;
    std::vector<Point> occupied;
    std::vector<std::uint32_t> ids;
    for (const auto& [id, tl] : timelines_) {
      occupied.push_back(tl.position_at(t));
      ids.push_back(id);
    }
    std::vector<Point> vis = geom::visible_set(observer, occupied);
    std::set<Point> vis_set(vis.begin(), vis.end());
    std::set<Point> stationary;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (!vis_set.count(occupied[i])) continue;
      const Timeline& tl = timelines_.at(ids[i]);
      v.colors[occupied[i]].insert(tl.color_at(t));
      if (!tl.moving_at(t)) stationary.insert(occupied[i]);
    }
    for (const auto& [p, colors] : v.colors) {
      v.visible.push_back(p);
      if (p != observer && stationary.count(p)) v.stationary_others.push_back(p);
    }
    return v;
  }

  struct Cycle {
    Scalar look_time;
    Point look_pos;
    Color rep_old;
  };

  void on_look(const TraceEvent& ev) {
    auto git = groups_.find({ev.time, ev.position.x, ev.position.y});
    Color rep_old = git != groups_.end() ? git->second.second : ev.color;
    cycles_[ev.robot] = Cycle{ev.time, ev.position, rep_old};
  }

  const Cycle* cycle_of(const TraceEvent& ev) {
    auto it = cycles_.find(ev.robot);
    if (it == cycles_.end()) {
      flag(ev, "orphan-event", "event without a preceding look");
      return nullptr;
    }
    return &it->second;
  }

  void on_compute_end(const TraceEvent& ev) {
    const Cycle* c = cycle_of(ev);
    if (!c) return;
    Color nc = ev.color;
    if (!palette_contains(palette_, c->rep_old) ||
        !palette_contains(palette_, nc)) {
      flag(ev, "palette",
           "color " + model::color_name(nc) + " after " +
               model::color_name(c->rep_old) + " outside the palette");
      return;
    }
    const algos::PermittedActions& perm =
        algos::permitted_actions(palette_, c->rep_old);
    if (!perm.next_colors.count(nc)) {
      flag(ev, "permitted-color",
           model::color_name(c->rep_old) + " -> " + model::color_name(nc) +
               " not in the permitted table");
    }
    if (c->rep_old == Color::Fault && nc == Color::FaultFinish &&
        !terminated_at_.count({ev.robot, ev.time})) {
      check_fault_finish_signal(ev, *c);
    }
  }

  void on_move_start(const TraceEvent& ev) {
    const Cycle* c = cycle_of(ev);
    if (!c) return;
    if (palette_contains(palette_, c->rep_old) &&
        !algos::permitted_actions(palette_, c->rep_old).may_move) {
      flag(ev, "permitted-move",
           "move announced from " + model::color_name(c->rep_old));
    }
    if (!ev.target) {
      flag(ev, "orphan-event", "move start without a target");
      return;
    }
    const Point& target = *ev.target;
    std::optional<ReconView> view;
    auto look_view = [&]() -> const ReconView& {
      if (!view) view = reconstruct(c->look_time, c->look_pos);
      return *view;
    };

    // (a) interior visible-area relocation: after the move the robot must
    // still see every robot that was stationary and visible at its look.
    if (palette_ == PaletteId::Seven && ev.color == Color::Move1 &&
        !geom::all_collinear(look_view().visible)) {
      check_full_visibility(ev, look_view(), target, "int-visible-area");
    }

    // (e) hull monotonicity with the exterior visible-area escape hatch.
    if (!allowed_hull_.on_boundary(target) &&
        !allowed_hull_.strictly_inside(target)) {
      const ReconView& v = look_view();
      std::vector<Point> base = v.stationary_others;
      base.push_back(c->look_pos);
      geom::Hull seen = geom::convex_hull(base);
      bool ok = !seen.on_boundary(target) && !seen.strictly_inside(target);
      if (ok) {
        std::vector<Point> with = v.stationary_others;
        with.push_back(target);
        ok = geom::convex_hull(with).contains_vertex(target);
      }
      if (ok) ok = full_visibility(v, target);
      if (ok) {
        allowed_.push_back(target);
        allowed_hull_ = geom::convex_hull(allowed_);
      } else {
        flag(ev, "hull-monotonicity",
             "target " + point_str(target) +
                 " leaves the hull without exterior post-conditions");
      }
    }
  }

  void on_terminate(const TraceEvent& ev) {
    const Cycle* c = cycle_of(ev);
    if (!c) return;
    if (palette_contains(palette_, c->rep_old) &&
        !algos::permitted_actions(palette_, c->rep_old).may_terminate) {
      flag(ev, "permitted-terminate",
           "terminate from " + model::color_name(c->rep_old));
    }
  }

  bool full_visibility(const ReconView& v, const Point& from) const {
    std::vector<Point> occupied = v.stationary_others;
    occupied.push_back(from);
    std::vector<Point> vis = geom::visible_set(from, occupied);
    std::set<Point> vis_set(vis.begin(), vis.end());
    for (const Point& q : v.stationary_others) {
      if (!vis_set.count(q)) return false;
    }
    return true;
  }

  void check_full_visibility(const TraceEvent& ev, const ReconView& v,
                             const Point& from, const std::string& rule) {
    for (const Point& q : v.stationary_others) {
      std::vector<Point> occupied = v.stationary_others;
      occupied.push_back(from);
      std::vector<Point> vis = geom::visible_set(from, occupied);
      if (std::find(vis.begin(), vis.end(), q) == vis.end()) {
        flag(ev, rule,
             "stationary robot at " + point_str(q) + " not visible from " +
                 point_str(from));
        return;
      }
    }
  }

  // (d) the FAULT -> FAULT-FINISH confirmation signal requires the local
  // interior condition at the signalling robot's look.
  void check_fault_finish_signal(const TraceEvent& ev, const Cycle& c) {
    ReconView v = reconstruct(c.look_time, c.look_pos);
    if (palette_ == PaletteId::Seven) {
      for (const auto& [p, cols] : v.colors) {
        if (cols.count(Color::Off) || cols.count(Color::Inner)) {
          flag(ev, "fault-finish-signal",
               "signal with OFF/INNER visible at " + point_str(p));
          return;
        }
      }
      geom::Hull h = geom::convex_hull(v.visible);
      for (const auto& [p, cols] : v.colors) {
        if ((cols.count(Color::Move1) || cols.count(Color::Move2)) &&
            h.strictly_inside(p)) {
          flag(ev, "fault-finish-signal",
               "signal with a mover strictly inside the hull at " +
                   point_str(p));
          return;
        }
      }
      geom::LayerDecomposition layers = geom::convex_layers(v.visible);
      for (const auto& layer : layers.layers) {
        if (!layer.on_boundary(c.look_pos)) continue;
        for (const auto& [p, cols] : v.colors) {
          if (layer.strictly_inside(p) &&
              !entry_within(cols, {Color::FaultFinish})) {
            flag(ev, "fault-finish-signal",
                 "unfinished robot strictly inside the local layer at " +
                     point_str(p));
          }
        }
        return;
      }
      flag(ev, "fault-finish-signal", "signaller not on any local layer");
      return;
    }
    if (palette_ == PaletteId::TwentySix) {
      const std::set<Color> blockers = {
          Color::Interior, Color::Move1,         Color::Move2,
          Color::Boundary, Color::MoveToInterior, Color::Next,
          Color::NotNext,  Color::Eligible};
      for (const auto& [p, cols] : v.colors) {
        if (entry_has_any(cols, blockers)) {
          flag(ev, "fault-finish-signal",
               "signal with a working robot visible at " + point_str(p));
          return;
        }
      }
      // Disregarded robots (FAULT1 only at their point) do not shape the
      // local onion decomposition.
      std::vector<Point> effective;
      for (const auto& [p, cols] : v.colors) {
        if (p == c.look_pos || !entry_within(cols, {Color::Fault1})) {
          effective.push_back(p);
        }
      }
      geom::LayerDecomposition layers = geom::convex_layers(effective);
      for (const auto& layer : layers.layers) {
        if (!layer.on_boundary(c.look_pos)) continue;
        for (const auto& [p, cols] : v.colors) {
          if (layer.strictly_inside(p) &&
              !entry_within(cols, {Color::FaultFinish, Color::FaultTerminate,
                                   Color::Terminate, Color::Fault1})) {
            flag(ev, "fault-finish-signal",
                 "unfinished robot strictly inside the local layer at " +
                     point_str(p));
          }
        }
        return;
      }
      flag(ev, "fault-finish-signal", "signaller not on any local layer");
    }
  }

  // (b) Boundary-To-Interior relocations never cross transversally.
  void check_crossings() {
    if (palette_ != PaletteId::TwentySix) return;
    for (std::size_t i = 0; i < segs_.size(); ++i) {
      if (segs_[i].color != Color::MoveToInterior) continue;
      for (std::size_t j = i + 1; j < segs_.size(); ++j) {
        if (segs_[j].color != Color::MoveToInterior) continue;
        if (segs_[i].robot == segs_[j].robot) continue;
        if (!(segs_[i].t0 < segs_[j].t1 && segs_[j].t0 < segs_[i].t1)) continue;
        if (proper_cross(segs_[i].a, segs_[i].b, segs_[j].a, segs_[j].b)) {
          report_.violations.push_back(
              {std::max(segs_[i].t0, segs_[j].t0), segs_[j].robot,
               "move-crossing",
               "concurrent interior relocations of robots " +
                   std::to_string(segs_[i].robot) + " and " +
                   std::to_string(segs_[j].robot) + " cross"});
        }
      }
    }
  }

  const sched::ExecutionTrace& trace_;
  PaletteId palette_;
  std::map<std::uint32_t, Timeline> timelines_;
  std::map<GroupKey, std::pair<std::uint32_t, Color>> groups_;
  std::map<std::uint32_t, Cycle> cycles_;
  std::set<std::pair<std::uint32_t, Scalar>> terminated_at_;
  std::vector<MoveSeg> segs_;
  std::vector<Point> allowed_;
  geom::Hull allowed_hull_;
  MonitorReport report_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Outcome oracles
// ---------------------------------------------------------------------------

GatherReport gathered(const Configuration& final_cfg) {
  GatherReport rep;
  const Point* meet = nullptr;
  for (const auto& r : final_cfg.robots) {
    if (r.faulty) continue;
    if (!meet) {
      meet = &r.position;
    } else if (!(r.position == *meet)) {
      return rep;  // two distinct non-faulty positions
    }
  }
  rep.gathered = true;
  if (meet) {
    rep.point = *meet;
  } else {
    rep.vacuous = true;
  }
  return rep;
}

RunMetrics measure(const Configuration& initial, const sched::RunResult& run) {
  RunMetrics m;
  m.epochs = run.epochs;
  GatherReport g = gathered(run.final);
  m.gathered = g.gathered;
  m.vacuous = g.vacuous;
  m.gather_point = g.point;
  m.all_terminated = run.outcome == sched::Outcome::AllTerminated;
  m.robot_count = static_cast<long>(initial.robots.size());
  for (const auto& r : run.final.robots) {
    if (r.faulty) ++m.faulty_count;
  }
  if (initial.robots.empty()) return m;
  std::vector<Point> pts;
  for (const auto& r : initial.robots) pts.push_back(r.position);
  geom::Hull hull = geom::convex_hull(pts);
  for (const auto& r : initial.robots) {
    if (hull.contains_vertex(r.position)) continue;
    if (hull.on_boundary(r.position)) {
      ++m.boundary_count;
    } else {
      ++m.interior_count;
    }
  }
  m.initial_layers =
      static_cast<long>(geom::convex_layers(pts).layers.size());
  return m;
}

MonitorReport monitor_trace(const Configuration& initial,
                            const sched::ExecutionTrace& trace,
                            PaletteId algorithm) {
  Monitor mon(initial, trace, algorithm);
  return mon.run();
}

// Constants frozen from the pinned calibration corpus (data/calibration/).
namespace {
constexpr long kThreeBound = 4;
constexpr long kSevenC = 8;
constexpr long kTwentySixC = 14;
constexpr long kTwentySixC0 = 28;
}  // namespace

EpochBound epoch_bound_check(const RunMetrics& metrics, PaletteId algorithm) {
  EpochBound out;
  switch (algorithm) {
    case PaletteId::Three:
      out.bound = kThreeBound;
      break;
    case PaletteId::Seven:
      out.bound = kSevenC * metrics.robot_count;
      break;
    case PaletteId::TwentySix:
      out.bound = kTwentySixC *
                      std::max(metrics.initial_layers, metrics.faulty_count) +
                  kTwentySixC0;
      break;
    case PaletteId::TwoCandidate:
      out.bound = 0;  // no gathering bound exists for two colors
      break;
  }
  out.pass = metrics.epochs <= out.bound;
  return out;
}

// ---------------------------------------------------------------------------
// Brute-force onion peeling oracle
// ---------------------------------------------------------------------------

namespace {

// p lies on the hull of `rem` iff some line through p and another remaining
// point keeps every remaining point on one closed side (or p stands alone).
bool on_hull_brute(const Point& p, const std::vector<Point>& rem) {
  if (rem.size() == 1) return true;
  for (const Point& q : rem) {
    if (q == p) continue;
    bool pos = false, neg = false;
    for (const Point& r : rem) {
      int s = geom::orientation(p, q, r);
      if (s > 0) pos = true;
      if (s < 0) neg = true;
    }
    if (!pos || !neg) return true;
  }
  return false;
}

}  // namespace

geom::LayerDecomposition oracle_layers(const std::vector<Point>& pts) {
  std::vector<Point> rem = pts;
  std::sort(rem.begin(), rem.end());
  rem.erase(std::unique(rem.begin(), rem.end()), rem.end());
  if (rem.size() > 12) {
    throw InstanceTooLarge("oracle_layers handles at most 12 distinct points");
  }
  geom::LayerDecomposition out;
  while (!rem.empty()) {
    std::vector<Point> on, rest;
    for (const Point& p : rem) {
      (on_hull_brute(p, rem) ? on : rest).push_back(p);
    }
    out.layers.push_back(geom::convex_hull(on));
    rem = std::move(rest);
  }
  return out;
}

}  // namespace gather::verify
