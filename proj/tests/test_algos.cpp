#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>

#include "gather/algos.hpp"

using namespace gather::algos;
using gather::geom::Scalar;
using gather::model::Configuration;
using gather::model::RobotState;
using gather::model::SnapshotEntry;
using gather::sched::FaultPlan;
using gather::sched::FaultTrigger;
using gather::sched::Outcome;
using gather::sched::PolicyKind;
using gather::sched::PolicySpec;
using gather::sched::RunResult;

namespace {

Scalar frac(long n, long d) { return gather::geom::frac(n, d); }

// Builds a snapshot from (position, colors) pairs; self is identified by
// index into the argument list before sorting.
Snapshot make_snap(std::vector<SnapshotEntry> entries, std::size_t self) {
  Point self_pos = entries[self].position;
  std::sort(entries.begin(), entries.end(),
            [](const SnapshotEntry& a, const SnapshotEntry& b) {
              return a.position < b.position;
            });
  Snapshot snap;
  snap.entries = std::move(entries);
  for (std::size_t i = 0; i < snap.entries.size(); ++i) {
    if (snap.entries[i].position == self_pos) snap.self_index = i;
  }
  return snap;
}

Configuration config_at(const std::vector<Point>& pts) {
  Configuration cfg;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    RobotState r;
    r.id = static_cast<std::uint32_t>(i);
    r.position = pts[i];
    cfg.robots.push_back(r);
  }
  return cfg;
}

// All non-faulty robots terminated at one common point.
bool gathered(const Configuration& cfg) {
  const Point* meet = nullptr;
  for (const auto& r : cfg.robots) {
    if (r.faulty) continue;
    if (!r.terminated) return false;
    if (!meet) {
      meet = &r.position;
    } else if (!(r.position == *meet)) {
      return false;
    }
  }
  return true;
}

RunResult simulate(PaletteId pal, const std::vector<Point>& pts,
                   const PolicySpec& ps, const FaultPlan& faults, long budget) {
  auto policy = gather::sched::make_policy(ps);
  return gather::sched::run(config_at(pts), make_algorithm(pal), *policy,
                            faults, budget);
}

std::string describe(PolicyKind k, std::uint64_t seed) {
  std::ostringstream os;
  os << "policy=" << static_cast<int>(k) << " seed=" << seed;
  return os.str();
}

void check_gathers(PaletteId pal, const std::vector<Point>& pts,
                   const FaultPlan& faults, long budget) {
  struct Sched {
    PolicyKind kind;
    std::uint64_t seed;
  };
  std::vector<Sched> scheds = {{PolicyKind::FullySync, 0},
                               {PolicyKind::SequentialAdversary, 0},
                               {PolicyKind::RandomFair, 1},
                               {PolicyKind::RandomFair, 7},
                               {PolicyKind::RandomFair, 1234567}};
  for (const auto& s : scheds) {
    CAPTURE(describe(s.kind, s.seed));
    RunResult res = simulate(pal, pts, {s.kind, s.seed, {}}, faults, budget);
    CHECK(res.outcome == Outcome::AllTerminated);
    CHECK(gathered(res.final));
  }
}

const std::vector<Color>& palette(PaletteId id) {
  return gather::model::palette_colors(id);
}

}  // namespace

// ---------------------------------------------------------------------------
// 3-color algorithm
// ---------------------------------------------------------------------------

TEST_CASE("3-color table matches the published three-case behavior") {
  // own OFF, other OFF at (2,0) -> MOVE to the midpoint.
  Snapshot s = make_snap({{{0, 0}, {Color::Off}}, {{2, 0}, {Color::Off}}}, 0);
  Action a = step_3color(Color::Off, s);
  CHECK(a.new_color == Color::Move);
  CHECK(a.move == gather::model::MoveKind::MoveTo);
  CHECK(a.target == Point{1, 0});

  // own OFF, other MOVE -> wait.
  s = make_snap({{{0, 0}, {Color::Off}}, {{2, 0}, {Color::Move}}}, 0);
  a = step_3color(Color::Off, s);
  CHECK(a.new_color == Color::Off);
  CHECK(a.move == gather::model::MoveKind::Stay);

  // own OFF, other END apart -> END and move to it.
  s = make_snap({{{0, 0}, {Color::Off}}, {{2, 0}, {Color::End}}}, 0);
  a = step_3color(Color::Off, s);
  CHECK(a.new_color == Color::End);
  CHECK(a.target == Point{2, 0});

  // own MOVE, any view -> END, stay.
  s = make_snap({{{1, 0}, {Color::Move}}, {{2, 0}, {Color::Off}}}, 0);
  a = step_3color(Color::Move, s);
  CHECK(a.new_color == Color::End);
  CHECK(a.move == gather::model::MoveKind::Stay);

  // own END, collocated {END} -> terminate.
  s = make_snap({{{1, 0}, {Color::End}}}, 0);
  a = step_3color(Color::End, s);
  CHECK(a.new_color == Color::End);
  CHECK(a.terminate);

  // own END, other END apart -> move to it.
  s = make_snap({{{0, 0}, {Color::End}}, {{2, 0}, {Color::End}}}, 0);
  a = step_3color(Color::End, s);
  CHECK(a.target == Point{2, 0});
  CHECK_FALSE(a.terminate);

  CHECK_THROWS_AS(step_3color(Color::Inner, s), PaletteMismatch);
}

TEST_CASE("3-color gathers two robots under every policy and single fault") {
  std::vector<Point> pts = {{0, 0}, {3, 0}};
  SUBCASE("fault-free") { check_gathers(PaletteId::Three, pts, {}, 50); }
  SUBCASE("robot 0 faulty from the start") {
    FaultPlan fp;
    fp.entries.push_back({0, FaultTrigger{}});
    check_gathers(PaletteId::Three, pts, fp, 50);
  }
  SUBCASE("robot 1 faulty mid-first-move") {
    FaultTrigger t;
    t.kind = FaultTrigger::Kind::MidMove;
    t.move_index = 1;
    t.lambda = frac(1, 2);
    FaultPlan fp;
    fp.entries.push_back({1, t});
    check_gathers(PaletteId::Three, pts, fp, 50);
  }
  SUBCASE("round robin, fault-free") {
    RunResult res =
        simulate(PaletteId::Three, pts, {PolicyKind::RoundRobin, 0, {}}, {}, 50);
    CHECK(res.outcome == Outcome::AllTerminated);
    CHECK(gathered(res.final));
  }
}

// ---------------------------------------------------------------------------
// 2-color candidates
// ---------------------------------------------------------------------------

TEST_CASE("lift_candidate realizes abstract tables geometrically") {
  TwoColorCandidate c;
  for (Color own : {Color::Black, Color::White}) {
    for (Color other : {Color::Black, Color::White}) {
      for (bool coll : {false, true}) {
        c.table[{own, other, coll}] = AbstractAction{};  // NoMove, Keep
      }
    }
  }
  // (W, W, apart) -> MoveToOther; synchronized robots would swap.
  c.table[{Color::White, Color::White, false}] =
      AbstractAction{AbstractMoveKind::MoveToOther, Scalar(0), false};
  TransitionFunction f = lift_candidate(c);
  Snapshot s =
      make_snap({{{0, 0}, {Color::White}}, {{4, 0}, {Color::White}}}, 0);
  Action a = f.step(Color::White, s);
  CHECK(a.move == gather::model::MoveKind::MoveTo);
  CHECK(a.target == Point{4, 0});

  // MoveToParam lambda = 1/3.
  c.table[{Color::Black, Color::White, false}] =
      AbstractAction{AbstractMoveKind::MoveToParam, frac(1, 3), true};
  f = lift_candidate(c);
  s = make_snap({{{0, 0}, {Color::Black}}, {{6, 0}, {Color::White}}}, 0);
  a = f.step(Color::Black, s);
  CHECK(a.new_color == Color::White);  // flipped
  CHECK(a.target == Point{2, 0});

  TwoColorCandidate incomplete;
  CHECK_THROWS_AS(lift_candidate(incomplete), IncompleteTable);
}

TEST_CASE("all-NoMove candidate never gathers") {
  TwoColorCandidate c;
  for (Color own : {Color::Black, Color::White}) {
    for (Color other : {Color::Black, Color::White}) {
      for (bool coll : {false, true}) {
        c.table[{own, other, coll}] = AbstractAction{};
      }
    }
  }
  auto policy = gather::sched::make_policy({PolicyKind::FullySync, 0, {}});
  Configuration init = config_at({{0, 0}, {5, 0}});
  for (auto& r : init.robots) r.color = Color::Black;
  RunResult res =
      gather::sched::run(init, lift_candidate(c), *policy, {}, 10);
  CHECK(res.outcome == Outcome::BudgetExhausted);
  CHECK_FALSE(gathered(res.final));
  CHECK(res.final.find(0)->position == Point{0, 0});
  CHECK(res.final.find(1)->position == Point{5, 0});
}

// ---------------------------------------------------------------------------
// 7-color algorithm: published examples
// ---------------------------------------------------------------------------

TEST_CASE("7-color classification and fault self-detection examples") {
  // own OFF, self strictly inside the hull -> (INNER, Stay).
  Snapshot s = make_snap({{{0, 0}, {Color::Off}},
                          {{6, 0}, {Color::Off}},
                          {{3, 5}, {Color::Off}},
                          {{3, 2}, {Color::Off}}},
                         3);
  Action a = step_7color(Color::Off, s);
  CHECK(a.new_color == Color::Inner);
  CHECK(a.move == gather::model::MoveKind::Stay);

  // own OFF, self a hull corner -> (OUTER, Stay).
  a = step_7color(Color::Off, make_snap({{{0, 0}, {Color::Off}},
                                         {{6, 0}, {Color::Off}},
                                         {{3, 5}, {Color::Off}}},
                                        0));
  CHECK(a.new_color == Color::Outer);

  // own MOVE2, collocated entry contains OUTER -> (OUTER, Stay).
  s = make_snap({{{0, 0}, {Color::Move2, Color::Outer}},
                 {{6, 0}, {Color::Outer}},
                 {{3, 5}, {Color::Outer}}},
                0);
  a = step_7color(Color::Move2, s);
  CHECK(a.new_color == Color::Outer);
  CHECK(a.move == gather::model::MoveKind::Stay);

  // own MOVE2, not collocated with OUTER (non-linear view) -> (FAULT, Stay).
  s = make_snap({{{2, 2}, {Color::Move2}},
                 {{6, 0}, {Color::Outer}},
                 {{0, 0}, {Color::Outer}},
                 {{3, 5}, {Color::Outer}}},
                0);
  a = step_7color(Color::Move2, s);
  CHECK(a.new_color == Color::Fault);
  CHECK(a.move == gather::model::MoveKind::Stay);

  CHECK_THROWS_AS(step_7color(Color::Gather, s), PaletteMismatch);
}

// ---------------------------------------------------------------------------
// 26-color algorithm: published examples
// ---------------------------------------------------------------------------

TEST_CASE("26-color categorisation and gathering-point examples") {
  // own OFF, self a hull corner -> (CORNER, Stay).
  Snapshot s = make_snap({{{0, 0}, {Color::Off}},
                          {{6, 0}, {Color::Off}},
                          {{3, 5}, {Color::Off}}},
                         0);
  Action a = step_26color(Color::Off, s);
  CHECK(a.new_color == Color::Corner);
  CHECK(a.move == gather::model::MoveKind::Stay);

  // own OFF, self strictly between two corners -> (BOUNDARY, Stay).
  s = make_snap({{{0, 0}, {Color::Off}},
                 {{3, 0}, {Color::Off}},
                 {{6, 0}, {Color::Off}},
                 {{3, 5}, {Color::Off}}},
                1);
  a = step_26color(Color::Off, s);
  CHECK(a.new_color == Color::Boundary);

  // own MoveTo-CORNER, collocated colors include CORNER -> (GATHER, Stay).
  s = make_snap({{{0, 0}, {Color::MoveToCorner, Color::Corner}},
                 {{6, 0}, {Color::Corner}},
                 {{3, 5}, {Color::Corner}}},
                0);
  a = step_26color(Color::MoveToCorner, s);
  CHECK(a.new_color == Color::Gather);
  CHECK(a.move == gather::model::MoveKind::Stay);

  // own EXPANDING-L, non-linear view, no OFF / NON-CORNER -> (CORNER, Stay).
  s = make_snap({{{0, 2}, {Color::ExpandingL}},
                 {{0, 0}, {Color::Boundary}},
                 {{4, 0}, {Color::Corner}},
                 {{2, 0}, {Color::Boundary}}},
                0);
  a = step_26color(Color::ExpandingL, s);
  CHECK(a.new_color == Color::Corner);
  CHECK(a.move == gather::model::MoveKind::Stay);

  CHECK_THROWS_AS(step_26color(Color::Black, s), PaletteMismatch);
}

// ---------------------------------------------------------------------------
// Totality and palette closure (fuzz)
// ---------------------------------------------------------------------------

namespace {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  long pick(long lo, long hi) {
    return lo + static_cast<long>(g() % static_cast<std::uint64_t>(hi - lo + 1));
  }
};

Snapshot random_snapshot(Rng& rng, PaletteId pal, Color own) {
  const auto& colors = palette(pal);
  int n = static_cast<int>(rng.pick(1, 6));
  std::vector<SnapshotEntry> entries;
  std::vector<Point> used;
  for (int i = 0; i < n; ++i) {
    Point p{Scalar(rng.pick(-4, 4)), Scalar(rng.pick(-4, 4))};
    if (std::find(used.begin(), used.end(), p) != used.end()) {
      --i;
      continue;
    }
    used.push_back(p);
    SnapshotEntry e;
    e.position = p;
    int k = static_cast<int>(rng.pick(1, 3));
    for (int j = 0; j < k; ++j) {
      e.colors.insert(colors[static_cast<std::size_t>(
          rng.pick(0, static_cast<long>(colors.size()) - 1))]);
    }
    entries.push_back(e);
  }
  std::size_t self = static_cast<std::size_t>(rng.pick(0, n - 1));
  entries[self].colors.insert(own);
  return make_snap(entries, self);
}

void fuzz_totality(PaletteId pal,
                   Action (*step)(Color, const Snapshot&), int iters) {
  Rng rng(0x26071234u + static_cast<unsigned>(pal));
  const auto& colors = palette(pal);
  for (int it = 0; it < iters; ++it) {
    for (Color own : colors) {
      Snapshot snap = random_snapshot(rng, pal, own);
      Action a = step(own, snap);  // must not throw
      const PermittedActions& ok = permitted_actions(pal, own);
      CAPTURE(gather::model::color_name(own));
      CAPTURE(gather::model::color_name(a.new_color));
      CHECK(ok.next_colors.count(a.new_color) == 1);
      if (a.move == gather::model::MoveKind::MoveTo) CHECK(ok.may_move);
      if (a.terminate) CHECK(ok.may_terminate);
    }
  }
}

}  // namespace

TEST_CASE("7-color steps are total and stay inside the permitted tables") {
  fuzz_totality(PaletteId::Seven, step_7color, 150);
}

TEST_CASE("26-color steps are total and stay inside the permitted tables") {
  fuzz_totality(PaletteId::TwentySix, step_26color, 150);
}

// ---------------------------------------------------------------------------
// 7-color end-to-end gathering
// ---------------------------------------------------------------------------

TEST_CASE("7-color gathers small fault-free configurations") {
  SUBCASE("single robot") { check_gathers(PaletteId::Seven, {{2, 3}}, {}, 50); }
  SUBCASE("two robots") {
    check_gathers(PaletteId::Seven, {{0, 0}, {4, 0}}, {}, 80);
  }
  SUBCASE("all collocated") {
    check_gathers(PaletteId::Seven, {{1, 1}, {1, 1}, {1, 1}}, {}, 50);
  }
  SUBCASE("triangle") {
    check_gathers(PaletteId::Seven, {{0, 0}, {6, 0}, {3, 5}}, {}, 200);
  }
  SUBCASE("square with two interior robots") {
    check_gathers(PaletteId::Seven,
                  {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}}, {}, 400);
  }
}

TEST_CASE("7-color gathers under faults") {
  SUBCASE("interior robot faulty from the start") {
    FaultPlan fp;
    fp.entries.push_back({4, FaultTrigger{}});
    check_gathers(PaletteId::Seven,
                  {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}}, fp, 400);
  }
  SUBCASE("linear pair, one endpoint faulty") {
    FaultPlan fp;
    fp.entries.push_back({0, FaultTrigger{}});
    check_gathers(PaletteId::Seven, {{0, 0}, {4, 0}}, fp, 100);
  }
  SUBCASE("line of five, both endpoints faulty") {
    FaultPlan fp;
    fp.entries.push_back({0, FaultTrigger{}});
    fp.entries.push_back({4, FaultTrigger{}});
    check_gathers(PaletteId::Seven,
                  {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, fp, 400);
  }
}

// ---------------------------------------------------------------------------
// 26-color end-to-end gathering
// ---------------------------------------------------------------------------

TEST_CASE("26-color gathers small fault-free configurations") {
  SUBCASE("single robot") {
    check_gathers(PaletteId::TwentySix, {{2, 3}}, {}, 50);
  }
  SUBCASE("two robots") {
    check_gathers(PaletteId::TwentySix, {{0, 0}, {4, 0}}, {}, 80);
  }
  SUBCASE("all collocated") {
    check_gathers(PaletteId::TwentySix, {{1, 1}, {1, 1}, {1, 1}}, {}, 50);
  }
  SUBCASE("triangle") {
    check_gathers(PaletteId::TwentySix, {{0, 0}, {6, 0}, {3, 5}}, {}, 200);
  }
  SUBCASE("square with two interior robots") {
    check_gathers(PaletteId::TwentySix,
                  {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}}, {}, 400);
  }
  SUBCASE("line of four") {
    check_gathers(PaletteId::TwentySix, {{0, 0}, {1, 0}, {2, 0}, {3, 0}}, {},
                  400);
  }
}

TEST_CASE("26-color gathers under faults") {
  SUBCASE("interior robot faulty from the start") {
    FaultPlan fp;
    fp.entries.push_back({4, FaultTrigger{}});
    check_gathers(PaletteId::TwentySix,
                  {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}}, fp, 400);
  }
  SUBCASE("linear pair, one endpoint faulty") {
    FaultPlan fp;
    fp.entries.push_back({0, FaultTrigger{}});
    check_gathers(PaletteId::TwentySix, {{0, 0}, {4, 0}}, fp, 100);
  }
  SUBCASE("line of five, both endpoints faulty") {
    FaultPlan fp;
    fp.entries.push_back({0, FaultTrigger{}});
    fp.entries.push_back({4, FaultTrigger{}});
    check_gathers(PaletteId::TwentySix,
                  {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, fp, 400);
  }
}
