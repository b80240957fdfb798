#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gather/sched.hpp"

using namespace gather::sched;
using gather::model::Action;
using gather::model::Color;
using gather::model::PaletteId;
using gather::model::RobotState;
using gather::model::Snapshot;

namespace {

Configuration two_robots() {
  Configuration cfg;
  RobotState a;
  a.id = 0;
  a.position = {0, 0};
  RobotState b;
  b.id = 1;
  b.position = {5, 0};
  cfg.robots = {a, b};
  return cfg;
}

// Walk one unit in +x, then terminate. Exercises the full cycle machinery
// without any geometry.
TransitionFunction walk_once() {
  return {PaletteId::Three, [](Color c, const Snapshot& snap) -> Action {
            if (c == Color::Off) {
              Point t = snap.self().position + Point{1, 0};
              return Action::move_to(Color::Move, t);
            }
            return Action::stay(Color::End, true);
          }};
}

// Never moves, never terminates; used for budget/epoch accounting tests.
TransitionFunction idle_forever() {
  return {PaletteId::Three,
          [](Color, const Snapshot&) { return Action::stay(Color::Off); }};
}

// Chases the nearest visible robot at any other position.
TransitionFunction chase_other() {
  return {PaletteId::Three, [](Color c, const Snapshot& snap) -> Action {
            if (c != Color::Off) return Action::stay(Color::End, true);
            for (Color other : {Color::Off, Color::Move, Color::End}) {
              if (auto t = snap.nearest_with_color(other)) {
                return Action::move_to(Color::Move, *t);
              }
            }
            return Action::stay(Color::Move);
          }};
}

bool traces_equal(const ExecutionTrace& a, const ExecutionTrace& b) {
  if (a.events.size() != b.events.size()) return false;
  if (a.epoch_marks != b.epoch_marks) return false;
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    const TraceEvent& x = a.events[i];
    const TraceEvent& y = b.events[i];
    if (x.time != y.time || x.robot != y.robot || x.kind != y.kind ||
        !(x.position == y.position) || x.color != y.color ||
        x.target.has_value() != y.target.has_value()) {
      return false;
    }
    if (x.target && !(*x.target == *y.target)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("fully synchronous rounds run look-compute-move in lockstep") {
  auto policy = make_policy({PolicyKind::FullySync});
  TransitionFunction algo = walk_once();
  RunResult res = run(two_robots(), algo, *policy, {}, 100);
  CHECK(res.outcome == Outcome::AllTerminated);
  CHECK(res.final.find(0)->position == Point{1, 0});
  CHECK(res.final.find(1)->position == Point{6, 0});
  CHECK(res.final.find(0)->color == Color::End);
  CHECK(res.epochs == 2);
  CHECK(res.trace.events.size() == 14);
  CHECK(count_epochs(res.trace) == res.epochs);
  // Events come out in nondecreasing time order.
  for (std::size_t i = 1; i < res.trace.events.size(); ++i) {
    CHECK(res.trace.events[i - 1].time <= res.trace.events[i].time);
  }
}

TEST_CASE("runs are deterministic for every policy kind") {
  for (PolicyKind kind : {PolicyKind::FullySync, PolicyKind::RoundRobin,
                          PolicyKind::RandomFair, PolicyKind::SequentialAdversary}) {
    PolicySpec spec{kind, 42, {}};
    TransitionFunction algo = walk_once();
    auto p1 = make_policy(spec);
    auto p2 = make_policy(spec);
    RunResult r1 = run(two_robots(), algo, *p1, {}, 100);
    RunResult r2 = run(two_robots(), algo, *p2, {}, 100);
    CHECK(r1.outcome == Outcome::AllTerminated);
    CHECK(traces_equal(r1.trace, r2.trace));
    CHECK(count_epochs(r1.trace) == r1.epochs);
  }
}

TEST_CASE("random fair seeds differ but both gather every robot each superround") {
  TransitionFunction algo = idle_forever();
  auto p1 = make_policy({PolicyKind::RandomFair, 1, {}});
  auto p2 = make_policy({PolicyKind::RandomFair, 2, {}});
  RunResult r1 = run(two_robots(), algo, *p1, {}, 5);
  RunResult r2 = run(two_robots(), algo, *p2, {}, 5);
  CHECK(r1.outcome == Outcome::BudgetExhausted);
  CHECK(r1.epochs == 5);
  CHECK(r2.epochs == 5);
  // Same-seed determinism, cross-seed divergence (in general).
  auto p1b = make_policy({PolicyKind::RandomFair, 1, {}});
  RunResult r1b = run(two_robots(), algo, *p1b, {}, 5);
  CHECK(traces_equal(r1.trace, r1b.trace));
}

TEST_CASE("budget zero produces an empty run") {
  auto policy = make_policy({PolicyKind::FullySync});
  TransitionFunction algo = walk_once();
  RunResult res = run(two_robots(), algo, *policy, {}, 0);
  CHECK(res.outcome == Outcome::BudgetExhausted);
  CHECK(res.trace.events.empty());
  CHECK(res.epochs == 0);
}

TEST_CASE("round robin epochs need one cycle from every robot") {
  auto policy = make_policy({PolicyKind::RoundRobin});
  TransitionFunction algo = idle_forever();
  RunResult res = run(two_robots(), algo, *policy, {}, 3);
  CHECK(res.outcome == Outcome::BudgetExhausted);
  CHECK(res.epochs == 3);
  CHECK(res.trace.epoch_marks.size() == 3);
  CHECK(count_epochs(res.trace) == 3);
}

TEST_CASE("a fault at first activation freezes position but not the light") {
  auto policy = make_policy({PolicyKind::FullySync});
  TransitionFunction algo = walk_once();
  FaultPlan faults;
  FaultTrigger trig;
  trig.kind = FaultTrigger::Kind::AtActivation;
  trig.activation_index = 1;
  faults.entries.push_back({0, trig});
  RunResult res = run(two_robots(), algo, *policy, faults, 100);
  CHECK(res.outcome == Outcome::AllTerminated);
  const RobotState* r0 = res.final.find(0);
  CHECK(r0->faulty);
  CHECK(r0->position == Point{0, 0});   // never moved
  CHECK(r0->color == Color::End);       // light still works
  CHECK(r0->terminated);
  CHECK(res.final.find(1)->position == Point{6, 0});
  bool saw_halt = false;
  for (const auto& ev : res.trace.events) {
    if (ev.kind == EventKind::FaultHalt) {
      saw_halt = true;
      CHECK(ev.robot == 0);
      CHECK(ev.time == 0);
    }
  }
  CHECK(saw_halt);
}

TEST_CASE("a mid-move fault freezes the robot partway along its segment") {
  auto policy = make_policy({PolicyKind::FullySync});
  TransitionFunction algo = walk_once();
  FaultPlan faults;
  FaultTrigger trig;
  trig.kind = FaultTrigger::Kind::MidMove;
  trig.move_index = 1;
  trig.lambda = Scalar(1, 2);
  faults.entries.push_back({0, trig});
  RunResult res = run(two_robots(), algo, *policy, faults, 100);
  CHECK(res.outcome == Outcome::AllTerminated);
  CHECK(res.final.find(0)->position == Point{Scalar(1, 2), 0});
  CHECK(res.final.find(0)->faulty);
  CHECK(res.final.find(1)->position == Point{6, 0});
}

TEST_CASE("a timed fault interrupts a move in flight") {
  auto policy = make_policy({PolicyKind::FullySync});
  TransitionFunction algo = walk_once();
  FaultPlan faults;
  FaultTrigger trig;
  trig.kind = FaultTrigger::Kind::AtTime;
  // FullySync moves over [1/4, 3/4]; freeze at t=1/2 (halfway).
  trig.at_time = Scalar(1, 2);
  faults.entries.push_back({1, trig});
  RunResult res = run(two_robots(), algo, *policy, faults, 100);
  CHECK(res.outcome == Outcome::AllTerminated);
  CHECK(res.final.find(1)->position == Point{Scalar(11, 2), 0});
  CHECK(res.final.find(0)->position == Point{1, 0});
}

TEST_CASE("collocated robots act jointly and stay together") {
  Configuration cfg;
  RobotState a;
  a.id = 0;
  a.position = {0, 0};
  RobotState b = a;
  b.id = 1;
  cfg.robots = {a, b};
  auto policy = make_policy({PolicyKind::FullySync});
  TransitionFunction algo = walk_once();
  RunResult res = run(cfg, algo, *policy, {}, 100);
  CHECK(res.outcome == Outcome::AllTerminated);
  CHECK(res.final.find(0)->position == Point{1, 0});
  CHECK(res.final.find(1)->position == Point{1, 0});
}

TEST_CASE("scripted overlap shows mid-move interpolated positions") {
  // Robot 0 starts moving toward robot 1 at t=1/4 (arriving at t=5/4);
  // robot 1 looks at t=3/4 and must see robot 0 halfway, at (5/2, 0).
  PolicySpec spec;
  spec.kind = PolicyKind::Scripted;
  spec.script = {
      {0, PhasePlan{Scalar(0), Scalar(1, 4), Scalar(1)}},
      {1, PhasePlan{Scalar(3, 4), Scalar(1, 4), Scalar(1)}},
  };
  auto policy = make_policy(spec);
  TransitionFunction algo = chase_other();
  RunResult res = run(two_robots(), algo, *policy, {}, 100);
  CHECK(res.final.find(0)->position == Point{5, 0});
  CHECK(res.final.find(1)->position == Point{Scalar(5, 2), 0});
}

TEST_CASE("inject_fault refuses double faults and freezes in place") {
  Configuration cfg = two_robots();
  FaultTrigger trig;
  trig.kind = FaultTrigger::Kind::AtTime;
  trig.at_time = Scalar(0);
  inject_fault(cfg, 0, trig);
  CHECK(cfg.find(0)->faulty);
  CHECK_THROWS_AS(inject_fault(cfg, 0, trig), AlreadyFaulty);
}
