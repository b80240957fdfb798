#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gather/geom.hpp"

namespace gather::model {

using geom::Point;
using geom::Scalar;

// Union of the light colors across all palettes.
enum class Color {
  // 3-color palette
  Off,
  Move,
  End,
  // 7-color palette (Off reused)
  Inner,
  Outer,
  Move1,
  Move2,
  Fault,
  FaultFinish,
  // 26-color palette (Off, Fault, Move1, Move2, FaultFinish reused)
  Corner,
  Boundary,
  Interior,
  MoveToInterior,
  Next,
  NotNext,
  Eligible,
  Intermediate,
  Move3,
  Move4,
  MoveEnded,
  Move5,
  MoveToCorner,
  Gather,
  MoveToGather,
  Terminate,
  FaultTerminate,
  Expanding,
  Fault1,
  NonCorner,
  ExpandingL,
  // 2-color candidate palette
  Black,
  White,
};

enum class PaletteId { Three, Seven, TwentySix, TwoCandidate };

const std::vector<Color>& palette_colors(PaletteId id);
bool palette_contains(PaletteId id, Color c);
Color palette_start_color(PaletteId id);

std::string color_name(Color c);
std::optional<Color> color_from_name(const std::string& name);

// Local coordinate frame: local = M * (global - origin) with M an invertible
// rational similarity (rotation/scale from a rational tangent half-angle,
// optional reflection). Identity by default.
struct Frame {
  Point origin{Scalar(0), Scalar(0)};
  Scalar m00{1}, m01{0}, m10{0}, m11{1};

  Point to_local(const Point& global) const;
  Point to_global(const Point& local) const;

  static Frame identity() { return {}; }
  // Deterministic pseudo-random rational similarity from a seed word.
  static Frame from_seed(std::uint64_t seed);
};

enum class Phase { Idle, Looking, Computing, Moving };

struct PendingMove {
  Point target;
  Point departure;
  Scalar start_time;
  Scalar end_time;
};

struct RobotState {
  std::uint32_t id = 0;  // simulator-only; never exposed to algorithms
  Point position;
  Color color = Color::Off;
  Phase phase = Phase::Idle;
  std::optional<PendingMove> pending;
  bool faulty = false;
  bool terminated = false;
  Frame frame;

  // Position at time t, interpolating linearly during a pending move.
  Point position_at(const Scalar& t) const;
};

struct Configuration {
  Scalar time{0};
  std::vector<RobotState> robots;

  const RobotState* find(std::uint32_t id) const;
  RobotState* find(std::uint32_t id);
};

// The local, disoriented, obstruction-filtered view an algorithm computes
// from. Entries are distinct positions with the set of colors present there;
// counts are never exposed.
struct SnapshotEntry {
  Point position;  // in the observer's local frame
  std::set<Color> colors;
};

struct Snapshot {
  std::vector<SnapshotEntry> entries;  // sorted by local position
  std::size_t self_index = 0;

  const SnapshotEntry& self() const { return entries[self_index]; }
  std::vector<Point> positions() const;
  std::vector<Point> positions_except_self() const;
  bool any_color(Color c) const;
  bool any_color_other_than_self(Color c) const;
  std::optional<Point> nearest_with_color(Color c) const;  // excludes self pos
};

enum class MoveKind { Stay, MoveTo };

struct Action {
  Color new_color;
  MoveKind move = MoveKind::Stay;
  Point target;  // local frame; meaningful when move == MoveTo
  bool terminate = false;

  static Action stay(Color c, bool term = false) {
    return Action{c, MoveKind::Stay, Point{}, term};
  }
  static Action move_to(Color c, Point t, bool term = false) {
    return Action{c, MoveKind::MoveTo, std::move(t), term};
  }
};

// Snapshot of `cfg` as seen by `robot` at cfg.time: visibility filtering on
// the (possibly mid-move interpolated) global positions, multiplicity
// grouping, then mapping into the robot's local frame.
Snapshot take_snapshot(const Configuration& cfg, const RobotState& robot);

// Partition of robot ids by exact current position; groups must be activated
// jointly with one shared snapshot and one computed action.
std::vector<std::vector<std::uint32_t>> collocated_groups(const Configuration& cfg);

struct InvalidTarget : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Applies an action computed by `robot`: the color is set immediately (move
// start), a MoveTo installs a pending move over [cfg.time, cfg.time +
// move_duration], Stay completes the cycle at once. MoveTo onto the robot's
// own position is treated as Stay.
void apply_action(Configuration& cfg, RobotState& robot, const Action& action,
                  const Scalar& move_duration);

}  // namespace gather::model
