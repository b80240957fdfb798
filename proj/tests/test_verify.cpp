#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <sstream>
#include <vector>

#include "gather/algos.hpp"
#include "gather/verify.hpp"

using namespace gather;
using namespace gather::verify;
using model::Color;
using model::Configuration;
using model::PaletteId;
using model::RobotState;
using sched::FaultPlan;
using sched::FaultTrigger;
using sched::Outcome;
using sched::PolicyKind;
using sched::PolicySpec;
using sched::RunResult;

namespace {

// Deterministic test RNG (splitmix64).
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  long range(long lo, long hi) {  // inclusive
    return lo +
           static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  Scalar rational(long lo, long hi, long max_den) {
    return geom::frac(range(lo, hi), range(1, max_den));
  }
  Point point() { return {rational(-8, 8, 4), rational(-8, 8, 4)}; }
};

Configuration config_at(const std::vector<Point>& pts,
                        Color start = Color::Off) {
  Configuration cfg;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    RobotState r;
    r.id = static_cast<std::uint32_t>(i);
    r.position = pts[i];
    r.color = start;
    cfg.robots.push_back(r);
  }
  return cfg;
}

RunResult simulate(PaletteId pal, const Configuration& initial,
                   const PolicySpec& ps, const FaultPlan& faults, long budget) {
  auto policy = sched::make_policy(ps);
  return sched::run(initial, algos::make_algorithm(pal), *policy, faults,
                    budget);
}

std::string show_violations(const MonitorReport& rep) {
  std::ostringstream os;
  for (const auto& v : rep.violations) {
    os << v.rule << " robot=" << v.robot << " t=" << v.time.get_str() << " "
       << v.detail << "\n";
  }
  return os.str();
}

bool has_rule(const MonitorReport& rep, const std::string& rule) {
  for (const auto& v : rep.violations) {
    if (v.rule == rule) return true;
  }
  return false;
}

// Full pipeline on one run: terminated, gathered, clean monitor, epoch bound.
void check_run_verifies(PaletteId pal, const std::vector<Point>& pts,
                        const FaultPlan& faults, long budget) {
  struct Sched {
    PolicyKind kind;
    std::uint64_t seed;
  };
  std::vector<Sched> scheds = {{PolicyKind::FullySync, 0},
                               {PolicyKind::RoundRobin, 0},
                               {PolicyKind::SequentialAdversary, 0},
                               {PolicyKind::RandomFair, 3},
                               {PolicyKind::RandomFair, 424242}};
  for (const auto& s : scheds) {
    Configuration initial = config_at(pts);
    RunResult res = simulate(pal, initial, {s.kind, s.seed, {}}, faults, budget);
    CAPTURE(static_cast<int>(s.kind));
    CAPTURE(s.seed);
    REQUIRE(res.outcome == Outcome::AllTerminated);
    RunMetrics m = measure(initial, res);
    CHECK(m.gathered);
    CHECK(!m.vacuous);
    MonitorReport rep = monitor_trace(initial, res.trace, pal);
    INFO(show_violations(rep));
    CHECK(rep.clean());
    EpochBound eb = epoch_bound_check(m, pal);
    INFO("epochs=" << m.epochs << " bound=" << eb.bound);
    CHECK(eb.pass);
  }
}

std::vector<Point> layer_points(const geom::Hull& h) {
  std::vector<Point> out = h.vertices;
  out.insert(out.end(), h.boundary_points.begin(), h.boundary_points.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// gathered / measure
// ---------------------------------------------------------------------------

TEST_CASE("gathered predicate") {
  Configuration cfg = config_at({{3, 4}, {3, 4}, {7, 7}});
  cfg.robots[2].faulty = true;
  GatherReport g = gathered(cfg);
  CHECK(g.gathered);
  CHECK(!g.vacuous);
  CHECK(*g.point == Point{3, 4});

  cfg.robots[1].position = Point{0, 0};
  g = gathered(cfg);
  CHECK(!g.gathered);

  Configuration all_faulty = config_at({{0, 0}, {1, 0}});
  all_faulty.robots[0].faulty = true;
  all_faulty.robots[1].faulty = true;
  g = gathered(all_faulty);
  CHECK(g.gathered);
  CHECK(g.vacuous);
  CHECK(!g.point);
}

TEST_CASE("measure reports the structural parameters") {
  std::vector<Point> pts = {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2},
                            {3, 2}, {3, 0}};
  Configuration initial = config_at(pts);
  FaultPlan fp;
  fp.entries.push_back({4, FaultTrigger{}});
  RunResult res = simulate(PaletteId::Seven, initial,
                           {PolicyKind::FullySync, 0, {}}, fp, 400);
  RunMetrics m = measure(initial, res);
  CHECK(m.robot_count == 7);
  CHECK(m.faulty_count == 1);
  CHECK(m.interior_count == 2);   // (2,2) and (3,2)
  CHECK(m.boundary_count == 1);   // (3,0) on the bottom edge
  CHECK(m.initial_layers == 2);
  CHECK(m.epochs == sched::count_epochs(res.trace));
  CHECK(m.all_terminated);
  CHECK(m.gathered);
}

// ---------------------------------------------------------------------------
// Monitor: clean on correct runs
// ---------------------------------------------------------------------------

TEST_CASE("monitor is clean on correct 3-color runs") {
  check_run_verifies(PaletteId::Three, {{0, 0}, {4, 0}}, {}, 50);
  FaultPlan fp;
  fp.entries.push_back({0, FaultTrigger{}});
  check_run_verifies(PaletteId::Three, {{0, 0}, {4, 0}}, fp, 50);
}

TEST_CASE("monitor is clean on correct 7-color runs") {
  SUBCASE("triangle") {
    check_run_verifies(PaletteId::Seven, {{0, 0}, {6, 0}, {3, 5}}, {}, 200);
  }
  SUBCASE("square with two interior robots") {
    check_run_verifies(PaletteId::Seven,
                       {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}}, {},
                       400);
  }
  SUBCASE("square with interior fault") {
    FaultPlan fp;
    fp.entries.push_back({4, FaultTrigger{}});
    check_run_verifies(PaletteId::Seven,
                       {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}}, fp,
                       400);
  }
  SUBCASE("line of five, both endpoints faulty") {
    FaultPlan fp;
    fp.entries.push_back({0, FaultTrigger{}});
    fp.entries.push_back({4, FaultTrigger{}});
    check_run_verifies(PaletteId::Seven,
                       {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, fp, 400);
  }
}

TEST_CASE("monitor is clean on correct 26-color runs") {
  SUBCASE("triangle") {
    check_run_verifies(PaletteId::TwentySix, {{0, 0}, {6, 0}, {3, 5}}, {}, 200);
  }
  SUBCASE("square with two interior robots") {
    check_run_verifies(PaletteId::TwentySix,
                       {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}}, {},
                       400);
  }
  SUBCASE("square with interior fault") {
    FaultPlan fp;
    fp.entries.push_back({4, FaultTrigger{}});
    check_run_verifies(PaletteId::TwentySix,
                       {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}}, fp,
                       400);
  }
  SUBCASE("line of five, both endpoints faulty") {
    FaultPlan fp;
    fp.entries.push_back({0, FaultTrigger{}});
    fp.entries.push_back({4, FaultTrigger{}});
    check_run_verifies(PaletteId::TwentySix,
                       {{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}}, fp, 400);
  }
  SUBCASE("mid-move fault") {
    FaultPlan fp;
    FaultTrigger trig;
    trig.kind = FaultTrigger::Kind::MidMove;
    trig.move_index = 1;
    trig.lambda = geom::frac(1, 2);
    fp.entries.push_back({2, trig});
    check_run_verifies(PaletteId::TwentySix,
                       {{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}}, fp, 400);
  }
}

// ---------------------------------------------------------------------------
// Monitor: violations on wrong palettes and tampered traces
// ---------------------------------------------------------------------------

TEST_CASE("monitor flags a trace checked against the wrong palette") {
  Configuration initial = config_at({{0, 0}, {6, 0}, {3, 5}});
  RunResult res = simulate(PaletteId::Seven, initial,
                           {PolicyKind::FullySync, 0, {}}, {}, 200);
  MonitorReport rep = monitor_trace(initial, res.trace, PaletteId::Three);
  CHECK(!rep.clean());
  CHECK(has_rule(rep, "palette"));
}

TEST_CASE("monitor flags tampered traces") {
  Configuration initial = config_at({{0, 0}, {6, 0}, {3, 5}});
  RunResult res = simulate(PaletteId::Seven, initial,
                           {PolicyKind::FullySync, 0, {}}, {}, 200);
  REQUIRE(monitor_trace(initial, res.trace, PaletteId::Seven).clean());

  SUBCASE("illegal color transition") {
    sched::ExecutionTrace t = res.trace;
    for (auto& ev : t.events) {
      if (ev.kind == sched::EventKind::ComputeEnd) {
        ev.color = Color::FaultFinish;  // never permitted from OFF
        break;
      }
    }
    MonitorReport rep = monitor_trace(initial, t, PaletteId::Seven);
    CHECK(has_rule(rep, "permitted-color"));
  }
  SUBCASE("move target escaping the hull without the post-conditions") {
    // Redirect the first move beyond one stationary robot, collinear with the
    // other: the target leaves the hull but cannot see the occluded robot.
    sched::ExecutionTrace t = res.trace;
    for (auto& ev : t.events) {
      if (ev.kind == sched::EventKind::MoveStart) {
        std::vector<Point> others;
        for (const auto& r : initial.robots) {
          if (r.id != ev.robot) others.push_back(r.position);
        }
        REQUIRE(others.size() == 2);
        ev.target = others[0] + (others[0] - others[1]);
        break;
      }
    }
    MonitorReport rep = monitor_trace(initial, t, PaletteId::Seven);
    CHECK(has_rule(rep, "hull-monotonicity"));
  }
  SUBCASE("premature fault-finish signal") {
    // Forge a FAULT -> FAULT-FINISH signal before anyone has classified:
    // OFF robots are still visible, so the signal condition cannot hold.
    Configuration init2 =
        config_at({{0, 0}, {6, 0}, {6, 6}, {0, 6}, {2, 2}, {3, 2}});
    FaultPlan fp;
    fp.entries.push_back({4, FaultTrigger{}});
    RunResult r2 = simulate(PaletteId::Seven, init2,
                            {PolicyKind::FullySync, 0, {}}, fp, 400);
    sched::ExecutionTrace t = r2.trace;
    auto pos = std::find_if(t.events.begin(), t.events.end(),
                            [](const sched::TraceEvent& ev) {
                              return ev.time > Scalar(0);
                            });
    sched::TraceEvent look{geom::frac(1, 8), 4, sched::EventKind::LookStart,
                           Point{2, 2}, Color::Fault, std::nullopt};
    sched::TraceEvent signal{geom::frac(1, 8), 4, sched::EventKind::ComputeEnd,
                             Point{2, 2}, Color::FaultFinish, std::nullopt};
    pos = t.events.insert(pos, look) + 1;
    t.events.insert(pos, signal);
    MonitorReport rep = monitor_trace(init2, t, PaletteId::Seven);
    CHECK(has_rule(rep, "fault-finish-signal"));
  }
}

// ---------------------------------------------------------------------------
// Epoch bounds
// ---------------------------------------------------------------------------

TEST_CASE("epoch bound formulas") {
  RunMetrics m;
  m.robot_count = 10;
  m.faulty_count = 2;
  m.initial_layers = 3;

  m.epochs = 4;
  CHECK(epoch_bound_check(m, PaletteId::Three).pass);
  m.epochs = 5;
  CHECK(!epoch_bound_check(m, PaletteId::Three).pass);

  EpochBound seven = epoch_bound_check(m, PaletteId::Seven);
  CHECK(seven.bound % m.robot_count == 0);  // linear in N
  m.epochs = seven.bound;
  CHECK(epoch_bound_check(m, PaletteId::Seven).pass);
  m.epochs = seven.bound + 1;
  CHECK(!epoch_bound_check(m, PaletteId::Seven).pass);

  // The 26-color bound depends on max{ell, f}, not on N.
  RunMetrics big = m;
  big.robot_count = 1000;
  CHECK(epoch_bound_check(big, PaletteId::TwentySix).bound ==
        epoch_bound_check(m, PaletteId::TwentySix).bound);
}

// ---------------------------------------------------------------------------
// Layer oracle
// ---------------------------------------------------------------------------

TEST_CASE("oracle_layers basics") {
  CHECK(oracle_layers({}).layers.empty());

  geom::LayerDecomposition lin =
      oracle_layers({{0, 0}, {1, 0}, {2, 0}, {5, 0}});
  CHECK(lin.layers.size() == 1);
  CHECK(layer_points(lin.layers[0]).size() == 4);

  // A point on an interior chord is its own inner layer even though no
  // triangle of the outer points strictly contains it.
  geom::LayerDecomposition d =
      oracle_layers({{0, 0}, {2, 0}, {1, 1}, {1, -1}, {1, 0}});
  CHECK(d.layers.size() == 2);
  CHECK(layer_points(d.layers[1]) == std::vector<Point>{{1, 0}});

  std::vector<Point> many;
  for (long i = 0; i < 13; ++i) many.push_back({i, i * i});
  CHECK_THROWS_AS(oracle_layers(many), InstanceTooLarge);
}

TEST_CASE("oracle_layers matches convex_layers on random sets") {
  Rng rng(20260824);
  for (int it = 0; it < 1000; ++it) {
    int n = 1 + static_cast<int>(rng.next() % 12);
    std::set<Point> s;
    while (static_cast<int>(s.size()) < n) s.insert(rng.point());
    std::vector<Point> pts(s.begin(), s.end());

    geom::LayerDecomposition got = geom::convex_layers(pts);
    geom::LayerDecomposition want = oracle_layers(pts);
    REQUIRE(got.layers.size() == want.layers.size());
    for (std::size_t i = 0; i < got.layers.size(); ++i) {
      REQUIRE(layer_points(got.layers[i]) == layer_points(want.layers[i]));
      CHECK(!layer_points(got.layers[i]).empty());
    }
  }
}
