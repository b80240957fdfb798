#include "gather/model.hpp"

#include <algorithm>
#include <map>

namespace gather::model {

namespace {

const std::vector<Color> kThree = {Color::Off, Color::Move, Color::End};

const std::vector<Color> kSeven = {Color::Off,   Color::Inner, Color::Outer,
                                   Color::Move1, Color::Move2, Color::Fault,
                                   Color::FaultFinish};

const std::vector<Color> kTwentySix = {
    Color::Off,          Color::Corner,      Color::Boundary,
    Color::Interior,     Color::MoveToInterior, Color::Fault,
    Color::Next,         Color::NotNext,     Color::Eligible,
    Color::Move1,        Color::Move2,       Color::FaultFinish,
    Color::Intermediate, Color::Move3,       Color::Move4,
    Color::MoveEnded,    Color::Move5,       Color::MoveToCorner,
    Color::Gather,       Color::MoveToGather, Color::Terminate,
    Color::FaultTerminate, Color::Expanding, Color::Fault1,
    Color::NonCorner,    Color::ExpandingL};

const std::vector<Color> kTwo = {Color::Black, Color::White};

const std::map<Color, std::string> kNames = {
    {Color::Off, "OFF"},
    {Color::Move, "MOVE"},
    {Color::End, "END"},
    {Color::Inner, "INNER"},
    {Color::Outer, "OUTER"},
    {Color::Move1, "MOVE1"},
    {Color::Move2, "MOVE2"},
    {Color::Fault, "FAULT"},
    {Color::FaultFinish, "FAULT-FINISH"},
    {Color::Corner, "CORNER"},
    {Color::Boundary, "BOUNDARY"},
    {Color::Interior, "INTERIOR"},
    {Color::MoveToInterior, "MoveTo-INTERIOR"},
    {Color::Next, "NEXT"},
    {Color::NotNext, "NOT-NEXT"},
    {Color::Eligible, "ELIGIBLE"},
    {Color::Intermediate, "INTERMEDIATE"},
    {Color::Move3, "MOVE3"},
    {Color::Move4, "MOVE4"},
    {Color::MoveEnded, "MOVE-ENDED"},
    {Color::Move5, "MOVE5"},
    {Color::MoveToCorner, "MoveTo-CORNER"},
    {Color::Gather, "GATHER"},
    {Color::MoveToGather, "MoveTo-GATHER"},
    {Color::Terminate, "TERMINATE"},
    {Color::FaultTerminate, "FAULT-TERMINATE"},
    {Color::Expanding, "EXPANDING"},
    {Color::Fault1, "FAULT1"},
    {Color::NonCorner, "NON-CORNER"},
    {Color::ExpandingL, "EXPANDING-L"},
    {Color::Black, "BLACK"},
    {Color::White, "WHITE"},
};

}  // namespace

const std::vector<Color>& palette_colors(PaletteId id) {
  switch (id) {
    case PaletteId::Three:
      return kThree;
    case PaletteId::Seven:
      return kSeven;
    case PaletteId::TwentySix:
      return kTwentySix;
    case PaletteId::TwoCandidate:
      return kTwo;
  }
  throw std::logic_error("unknown palette");
}

bool palette_contains(PaletteId id, Color c) {
  const auto& cs = palette_colors(id);
  return std::find(cs.begin(), cs.end(), c) != cs.end();
}

Color palette_start_color(PaletteId id) {
  return id == PaletteId::TwoCandidate ? Color::White : Color::Off;
}

std::string color_name(Color c) { return kNames.at(c); }

std::optional<Color> color_from_name(const std::string& name) {
  for (const auto& [c, n] : kNames) {
    if (n == name) return c;
  }
  return std::nullopt;
}

Point Frame::to_local(const Point& global) const {
  Point d = global - origin;
  return {m00 * d.x + m01 * d.y, m10 * d.x + m11 * d.y};
}

Point Frame::to_global(const Point& local) const {
  Scalar det = m00 * m11 - m01 * m10;
  Scalar x = (m11 * local.x - m01 * local.y) / det;
  Scalar y = (-m10 * local.x + m00 * local.y) / det;
  return origin + Point{x, y};
}

Frame Frame::from_seed(std::uint64_t seed) {
  // splitmix64 steps give the rational parameters.
  auto next = [&seed]() {
    seed += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = seed;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  // Rational rotation from tangent half-angle t = p/q:
  // cos = (q^2-p^2)/(q^2+p^2), sin = 2pq/(q^2+p^2).
  long p = static_cast<long>(next() % 17) - 8;
  long q = static_cast<long>(next() % 7) + 1;
  Scalar c = geom::frac(q * q - p * p, q * q + p * p);
  Scalar s = geom::frac(2 * p * q, q * q + p * p);
  Scalar scale = geom::frac(static_cast<long>(next() % 5) + 1,
                            static_cast<long>(next() % 5) + 1);
  bool reflect = (next() & 1) != 0;
  Frame f;
  f.origin = Point{Scalar(static_cast<long>(next() % 9) - 4),
                   Scalar(static_cast<long>(next() % 9) - 4)};
  f.m00 = scale * c;
  f.m01 = -scale * s;
  f.m10 = scale * s;
  f.m11 = scale * c;
  if (reflect) {
    f.m10 = -f.m10;
    f.m11 = -f.m11;
  }
  return f;
}

Point RobotState::position_at(const Scalar& t) const {
  if (!pending) return position;
  const PendingMove& m = *pending;
  if (t <= m.start_time) return m.departure;
  if (t >= m.end_time) return m.target;
  Scalar lambda = (t - m.start_time) / (m.end_time - m.start_time);
  return m.departure + lambda * (m.target - m.departure);
}

const RobotState* Configuration::find(std::uint32_t id) const {
  for (const auto& r : robots) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

RobotState* Configuration::find(std::uint32_t id) {
  for (auto& r : robots) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

std::vector<Point> Snapshot::positions() const {
  std::vector<Point> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.position);
  return out;
}

std::vector<Point> Snapshot::positions_except_self() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i != self_index) out.push_back(entries[i].position);
  }
  return out;
}

bool Snapshot::any_color(Color c) const {
  for (const auto& e : entries) {
    if (e.colors.count(c)) return true;
  }
  return false;
}

bool Snapshot::any_color_other_than_self(Color c) const {
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == self_index) continue;
    if (entries[i].colors.count(c)) return true;
  }
  return false;
}

std::optional<Point> Snapshot::nearest_with_color(Color c) const {
  std::optional<Point> best;
  const Point& self_pos = self().position;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i == self_index) continue;
    if (!entries[i].colors.count(c)) continue;
    const Point& p = entries[i].position;
    if (!best || geom::dist2(self_pos, p) < geom::dist2(self_pos, *best) ||
        (geom::dist2(self_pos, p) == geom::dist2(self_pos, *best) && p < *best)) {
      best = p;
    }
  }
  return best;
}

Snapshot take_snapshot(const Configuration& cfg, const RobotState& robot) {
  const Scalar& t = cfg.time;
  Point obs = robot.position_at(t);
  // Global positions and colors of everyone right now.
  std::vector<Point> occupied;
  occupied.reserve(cfg.robots.size());
  for (const auto& r : cfg.robots) occupied.push_back(r.position_at(t));
  std::vector<Point> vis = geom::visible_set(obs, occupied);

  std::map<std::pair<Scalar, Scalar>, std::set<Color>> by_pos;
  for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
    const Point& p = occupied[i];
    bool visible = std::find(vis.begin(), vis.end(), p) != vis.end();
    if (!visible) continue;
    by_pos[{p.x, p.y}].insert(cfg.robots[i].color);
  }

  Snapshot snap;
  Point self_local = robot.frame.to_local(obs);
  for (const auto& [key, colors] : by_pos) {
    SnapshotEntry e;
    e.position = robot.frame.to_local(Point{key.first, key.second});
    e.colors = colors;
    snap.entries.push_back(std::move(e));
  }
  std::sort(snap.entries.begin(), snap.entries.end(),
            [](const SnapshotEntry& a, const SnapshotEntry& b) {
              return a.position < b.position;
            });
  for (std::size_t i = 0; i < snap.entries.size(); ++i) {
    if (snap.entries[i].position == self_local) {
      snap.self_index = i;
      break;
    }
  }
  return snap;
}

std::vector<std::vector<std::uint32_t>> collocated_groups(
    const Configuration& cfg) {
  std::map<std::pair<Scalar, Scalar>, std::vector<std::uint32_t>> groups;
  for (const auto& r : cfg.robots) {
    Point p = r.position_at(cfg.time);
    groups[{p.x, p.y}].push_back(r.id);
  }
  std::vector<std::vector<std::uint32_t>> out;
  for (auto& [key, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    out.push_back(std::move(ids));
  }
  return out;
}

void apply_action(Configuration& cfg, RobotState& robot, const Action& action,
                  const Scalar& move_duration) {
  robot.color = action.new_color;
  Point target_global = robot.frame.to_global(action.target);
  bool stays = action.move == MoveKind::Stay || target_global == robot.position;
  if (stays || robot.faulty) {
    robot.phase = Phase::Idle;
    robot.pending.reset();
  } else {
    if (move_duration <= 0) throw InvalidTarget("non-positive move duration");
    robot.phase = Phase::Moving;
    robot.pending = PendingMove{target_global, robot.position, cfg.time,
                                cfg.time + move_duration};
  }
  if (action.terminate) {
    // Termination takes effect when the cycle completes; a terminating Stay
    // finishes immediately.
    if (stays || robot.faulty) robot.terminated = true;
  }
}

}  // namespace gather::model
