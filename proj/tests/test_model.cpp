#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gather/model.hpp"

using namespace gather::model;
using gather::geom::dist2;

namespace {

RobotState make_robot(std::uint32_t id, Point pos, Color c = Color::Off) {
  RobotState r;
  r.id = id;
  r.position = std::move(pos);
  r.color = c;
  return r;
}

}  // namespace

TEST_CASE("palettes have the documented sizes and names round-trip") {
  CHECK(palette_colors(PaletteId::Three).size() == 3);
  CHECK(palette_colors(PaletteId::Seven).size() == 7);
  CHECK(palette_colors(PaletteId::TwentySix).size() == 26);
  CHECK(palette_colors(PaletteId::TwoCandidate).size() == 2);
  for (auto id : {PaletteId::Three, PaletteId::Seven, PaletteId::TwentySix,
                  PaletteId::TwoCandidate}) {
    for (Color c : palette_colors(id)) {
      auto back = color_from_name(color_name(c));
      REQUIRE(back.has_value());
      CHECK(*back == c);
    }
    CHECK(palette_contains(id, palette_start_color(id)));
  }
  CHECK(color_name(Color::FaultFinish) == "FAULT-FINISH");
  CHECK(color_name(Color::MoveToCorner) == "MoveTo-CORNER");
  CHECK_FALSE(palette_contains(PaletteId::Three, Color::Inner));
}

TEST_CASE("frames are invertible rational similarities") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    Frame f = Frame::from_seed(seed);
    Point p{Scalar(7, 3), Scalar(-2, 5)};
    CHECK(f.to_global(f.to_local(p)) == p);
    CHECK(f.to_local(f.to_global(p)) == p);
    // Similarity: distances scale by a common factor.
    Point a{0, 0}, b{1, 0}, c{0, 1};
    Scalar ab = dist2(f.to_local(a), f.to_local(b));
    Scalar ac = dist2(f.to_local(a), f.to_local(c));
    CHECK(ab == ac);  // unit vectors keep equal length
    CHECK(ab > 0);
  }
  Frame id = Frame::identity();
  Point p{3, 4};
  CHECK(id.to_local(p) == p);
}

TEST_CASE("position interpolates during a pending move") {
  RobotState r = make_robot(0, {0, 0});
  r.pending = PendingMove{{4, 0}, {0, 0}, Scalar(1), Scalar(3)};
  CHECK(r.position_at(Scalar(0)) == Point{0, 0});
  CHECK(r.position_at(Scalar(1)) == Point{0, 0});
  CHECK(r.position_at(Scalar(2)) == Point{2, 0});
  CHECK(r.position_at(Scalar(5, 2)) == Point{3, 0});
  CHECK(r.position_at(Scalar(3)) == Point{4, 0});
  CHECK(r.position_at(Scalar(7)) == Point{4, 0});
}

TEST_CASE("snapshot applies obstruction, multiplicity and the local frame") {
  Configuration cfg;
  cfg.robots.push_back(make_robot(0, {0, 0}, Color::Off));
  cfg.robots.push_back(make_robot(1, {1, 0}, Color::Move));
  cfg.robots.push_back(make_robot(2, {2, 0}, Color::End));   // blocked by 1
  cfg.robots.push_back(make_robot(3, {1, 0}, Color::End));   // collocated with 1
  cfg.robots.push_back(make_robot(4, {0, 1}, Color::Move));

  Snapshot snap = take_snapshot(cfg, cfg.robots[0]);
  // Sees itself, the multiplicity at (1,0), and (0,1); not (2,0).
  REQUIRE(snap.entries.size() == 3);
  CHECK(snap.self().position == Point{0, 0});
  CHECK(snap.self().colors == std::set<Color>{Color::Off});
  bool found_multiplicity = false;
  for (const auto& e : snap.entries) {
    if (e.position == Point{1, 0}) {
      found_multiplicity = true;
      CHECK(e.colors == std::set<Color>{Color::Move, Color::End});
    }
    CHECK(e.position != Point{2, 0});
  }
  CHECK(found_multiplicity);
  CHECK(snap.any_color(Color::Move));
  CHECK(snap.any_color(Color::Off));  // self counts
  CHECK_FALSE(snap.any_color_other_than_self(Color::Off));

  // A scaled/rotated frame maps positions but preserves the structure.
  cfg.robots[0].frame = Frame::from_seed(5);
  Snapshot local = take_snapshot(cfg, cfg.robots[0]);
  REQUIRE(local.entries.size() == 3);
  CHECK(local.self().position ==
        cfg.robots[0].frame.to_local(Point{0, 0}));
  // Entries remain sorted by local position.
  for (std::size_t i = 1; i < local.entries.size(); ++i) {
    CHECK(local.entries[i - 1].position < local.entries[i].position);
  }
}

TEST_CASE("snapshot never exposes counts at a multiplicity") {
  Configuration cfg;
  cfg.robots.push_back(make_robot(0, {0, 0}));
  cfg.robots.push_back(make_robot(1, {1, 1}, Color::Move));
  cfg.robots.push_back(make_robot(2, {1, 1}, Color::Move));
  cfg.robots.push_back(make_robot(3, {1, 1}, Color::Move));
  Snapshot snap = take_snapshot(cfg, cfg.robots[0]);
  REQUIRE(snap.entries.size() == 2);
  for (const auto& e : snap.entries) {
    if (e.position == Point{1, 1}) {
      CHECK(e.colors == std::set<Color>{Color::Move});
    }
  }
}

TEST_CASE("nearest_with_color breaks ties by distance then lexicographic") {
  Configuration cfg;
  cfg.robots.push_back(make_robot(0, {0, 0}));
  cfg.robots.push_back(make_robot(1, {2, 0}, Color::Move));
  cfg.robots.push_back(make_robot(2, {0, 2}, Color::Move));
  cfg.robots.push_back(make_robot(3, {5, 5}, Color::Move));
  Snapshot snap = take_snapshot(cfg, cfg.robots[0]);
  auto nearest = snap.nearest_with_color(Color::Move);
  REQUIRE(nearest.has_value());
  CHECK(*nearest == Point{0, 2});  // same distance as (2,0), lexicographically first
  CHECK_FALSE(snap.nearest_with_color(Color::End).has_value());
}

TEST_CASE("collocated robots group together") {
  Configuration cfg;
  cfg.robots.push_back(make_robot(3, {1, 1}));
  cfg.robots.push_back(make_robot(1, {0, 0}));
  cfg.robots.push_back(make_robot(2, {1, 1}));
  auto groups = collocated_groups(cfg);
  REQUIRE(groups.size() == 2);
  CHECK(groups[0] == std::vector<std::uint32_t>{1});
  CHECK(groups[1] == std::vector<std::uint32_t>{2, 3});
}

TEST_CASE("apply_action sets colors at move start and freezes faulty robots") {
  Configuration cfg;
  cfg.time = Scalar(10);
  cfg.robots.push_back(make_robot(0, {0, 0}));
  RobotState& r = cfg.robots[0];

  apply_action(cfg, r, Action::move_to(Color::Move, {3, 0}), Scalar(2));
  CHECK(r.color == Color::Move);
  REQUIRE(r.pending.has_value());
  CHECK(r.pending->target == Point{3, 0});
  CHECK(r.pending->start_time == Scalar(10));
  CHECK(r.pending->end_time == Scalar(12));
  CHECK(r.phase == Phase::Moving);

  // A faulty robot changes color but never moves.
  r.pending.reset();
  r.faulty = true;
  apply_action(cfg, r, Action::move_to(Color::End, {5, 5}), Scalar(2));
  CHECK(r.color == Color::End);
  CHECK_FALSE(r.pending.has_value());
  CHECK(r.phase == Phase::Idle);

  // MoveTo onto the current position is a Stay.
  r.faulty = false;
  apply_action(cfg, r, Action::move_to(Color::Off, {0, 0}), Scalar(2));
  CHECK_FALSE(r.pending.has_value());

  // Terminating stay takes effect immediately.
  apply_action(cfg, r, Action::stay(Color::End, true), Scalar(2));
  CHECK(r.terminated);
}
