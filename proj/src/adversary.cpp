#include "gather/adversary.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>

namespace gather::adversary {

namespace {

using algos::AbstractAction;
using algos::AbstractMoveKind;
using algos::AbstractView;
using model::Point;

// Colors as indices: 0 = Black, 1 = White.
Color color_of(int c) { return c == 0 ? Color::Black : Color::White; }

// ---------------------------------------------------------------------------
// Abstract strategy core
// ---------------------------------------------------------------------------
//
// Against two robots the execution never needs to collocate them, so the
// strategy only consults the four apart views. Actions are canonicalized:
// MoveToParam(0) is NoMove and MoveToParam(1) is MoveToOther.

AbstractAction canonical(AbstractAction a) {
  if (a.move == AbstractMoveKind::MoveToParam) {
    if (a.lambda == 0) {
      a.move = AbstractMoveKind::NoMove;
      a.lambda = 0;
    } else if (a.lambda == 1) {
      a.move = AbstractMoveKind::MoveToOther;
      a.lambda = 0;
    }
  } else {
    a.lambda = 0;
  }
  return a;
}

struct Core {
  // Indexed by own * 2 + other.
  std::array<AbstractAction, 4> apart;

  const AbstractAction& at(int own, int other) const {
    return apart[own * 2 + other];
  }
};

Core core_of(const TwoColorCandidate& cand) {
  Core core;
  for (int own = 0; own < 2; ++own) {
    for (int other = 0; other < 2; ++other) {
      core.apart[own * 2 + other] =
          canonical(cand.at({color_of(own), color_of(other), false}));
    }
  }
  return core;
}

// Quiescent abstract state: colors and fault flags; robots always apart.
constexpr int kStates = 16;
int pack(int c0, int c1, int f0, int f1) {
  return c0 | (c1 << 1) | (f0 << 2) | (f1 << 3);
}

struct Edge {
  AdversaryMove mv;
  int next = 0;
  unsigned fair = 0;  // bit i: robot i completes an LCM cycle, and is non-faulty
};

bool is_no(const AbstractAction& a) { return a.move == AbstractMoveKind::NoMove; }
bool is_other(const AbstractAction& a) {
  return a.move == AbstractMoveKind::MoveToOther;
}
bool is_param(const AbstractAction& a) {
  return a.move == AbstractMoveKind::MoveToParam;
}

// Sound countermoves from an apart quiescent state. Every edge is guaranteed
// to end in an apart quiescent state for arbitrary distinct positions:
//  - ActivateBoth: both act on the pre-state; excluded when exactly one robot
//    moves onto the other's standing position (one MoveToOther, the other
//    NoMove) or when both MoveToParam targets coincide (lambda sum 1), or
//    when a MoveToOther would land on a frozen robot.
//  - ActivateOne: excluded when the move is MoveToOther (would land on the
//    other robot); a faulty robot may always be activated (light only).
//  - InterleaveLookDuringMove: the observer looks while the mover is mid-move
//    at an adversary-chosen interpolation point, so it sees the mover's new
//    color at a stale position; excluded when the mover does not move, when
//    the mover's MoveToOther would land on the observer while the stale view
//    keeps the observer in place, or (observer frozen) when the mover's
//    target is the observer's pinned position.
//  - Fault: freezes the robot at its activation; at most one per execution.
std::vector<Edge> successors(const Core& core, int sid, bool fault_allowed) {
  int c0 = sid & 1, c1 = (sid >> 1) & 1;
  int f0 = (sid >> 2) & 1, f1 = (sid >> 3) & 1;
  const AbstractAction& a0 = core.at(c0, c1);
  const AbstractAction& a1 = core.at(c1, c0);
  int n0 = a0.flip ? 1 - c0 : c0;
  int n1 = a1.flip ? 1 - c1 : c1;
  unsigned live0 = f0 ? 0u : 1u, live1 = f1 ? 0u : 2u;
  std::vector<Edge> out;

  AdversaryMove both{AdversaryMove::Kind::ActivateBoth, 0, 0, 0};
  bool sync_ok;
  if (!f0 && !f1) {
    sync_ok = !((is_other(a0) && is_no(a1)) || (is_no(a0) && is_other(a1)) ||
                (is_param(a0) && is_param(a1) && a0.lambda + a1.lambda == 1));
  } else if (f0) {
    sync_ok = !is_other(a1);
  } else {
    sync_ok = !is_other(a0);
  }
  if (sync_ok) out.push_back({both, pack(n0, n1, f0, f1), live0 | live1});

  if (f0 || !is_other(a0)) {
    out.push_back({{AdversaryMove::Kind::ActivateOne, 0, 0, 0},
                   pack(n0, c1, f0, f1), live0});
  }
  if (f1 || !is_other(a1)) {
    out.push_back({{AdversaryMove::Kind::ActivateOne, 1, 0, 0},
                   pack(c0, n1, f0, f1), live1});
  }

  // Interleave with mover i, observer j. The stale view shows the mover's
  // new color; the observer's stale action decides its own color and move.
  auto interleave = [&](int mover) {
    int obs = 1 - mover;
    int fm = mover == 0 ? f0 : f1;
    int fo = mover == 0 ? f1 : f0;
    const AbstractAction& am = mover == 0 ? a0 : a1;
    int nm = mover == 0 ? n0 : n1;
    int co = mover == 0 ? c1 : c0;
    if (fm || is_no(am)) return;  // mover must actually move
    const AbstractAction& b = core.at(co, nm);
    if (fo) {
      // Frozen observer cannot vacate its point; a MoveToOther mover would
      // land on it.
      if (!is_param(am)) return;
    } else if (is_other(am) && is_no(b)) {
      return;  // mover lands on the observer, which stays put
    }
    int no = b.flip ? 1 - co : co;
    int nc0 = mover == 0 ? nm : no;
    int nc1 = mover == 0 ? no : nm;
    unsigned fair = (fm ? 0u : (mover == 0 ? 1u : 2u)) |
                    (fo ? 0u : (obs == 0 ? 1u : 2u));
    out.push_back({{AdversaryMove::Kind::InterleaveLookDuringMove, 0,
                    static_cast<std::uint32_t>(obs),
                    static_cast<std::uint32_t>(mover)},
                   pack(nc0, nc1, f0, f1), fair});
  };
  interleave(0);
  interleave(1);

  if (fault_allowed && !f0 && !f1) {
    out.push_back({{AdversaryMove::Kind::Fault, 0, 0, 0},
                   pack(n0, c1, 1, f1), 0u});
    out.push_back({{AdversaryMove::Kind::Fault, 1, 0, 0},
                   pack(c0, n1, f0, 1), 0u});
  }
  return out;
}

struct Lasso {
  std::vector<Edge> prefix;
  std::vector<Edge> cycle;
};

// Finds a reachable state admitting a fair cycle back to itself: every
// non-faulty robot completes at least one LCM cycle along the loop. The loop
// cannot contain a Fault edge (fault flags only ever grow), so the single
// permitted fault always lies in the prefix.
std::optional<Lasso> find_lasso(const Core& core, int start) {
  // BFS over quiescent states for the prefix.
  std::array<int, kStates> dist;
  dist.fill(-1);
  std::array<std::pair<int, Edge>, kStates> parent;
  std::vector<int> order;
  dist[start] = 0;
  order.push_back(start);
  for (std::size_t head = 0; head < order.size(); ++head) {
    int s = order[head];
    for (const Edge& e : successors(core, s, /*fault_allowed=*/true)) {
      if (dist[e.next] < 0) {
        dist[e.next] = dist[s] + 1;
        parent[e.next] = {s, e};
        order.push_back(e.next);
      }
    }
  }

  for (int s : order) {
    unsigned need = (((s >> 2) & 1) ? 0u : 1u) | (((s >> 3) & 1) ? 0u : 2u);
    if (need == 0) continue;  // both faulty: never produced
    // BFS over (state, fairness-collected) for a cycle s -> s.
    struct Node {
      int state;
      unsigned mask;
    };
    std::array<int, kStates * 4> pd;
    pd.fill(-1);
    std::array<std::pair<int, Edge>, kStates * 4> pp;
    auto idx = [](int st, unsigned m) { return st * 4 + static_cast<int>(m); };
    std::deque<Node> q;
    pd[idx(s, 0)] = 0;
    q.push_back({s, 0});
    int goal = -1;
    while (!q.empty() && goal < 0) {
      Node n = q.front();
      q.pop_front();
      for (const Edge& e : successors(core, n.state, /*fault_allowed=*/false)) {
        unsigned m = (n.mask | e.fair) & need;
        int i = idx(e.next, m);
        if (pd[i] >= 0) continue;
        pd[i] = pd[idx(n.state, n.mask)] + 1;
        pp[i] = {idx(n.state, n.mask), e};
        if (e.next == s && m == need) {
          goal = i;
          break;
        }
        q.push_back({e.next, m});
      }
    }
    if (goal < 0) continue;

    Lasso lasso;
    for (int i = goal; pd[i] > 0; i = pp[i].first) {
      lasso.cycle.push_back(pp[i].second);
    }
    std::reverse(lasso.cycle.begin(), lasso.cycle.end());
    for (int t = s; t != start; t = parent[t].first) {
      lasso.prefix.push_back(parent[t].second);
    }
    std::reverse(lasso.prefix.begin(), lasso.prefix.end());
    return lasso;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Concretization: exact two-robot execution on a line plus script emission
// ---------------------------------------------------------------------------

// Mirrors the event engine's semantics for two robots so the emitted script
// replays to the same configuration; discrepancies are internal errors.
struct MiniSim {
  const Core& core;
  std::array<Scalar, 2> x{Scalar(0), Scalar(1)};
  std::array<int, 2> c{1, 1};  // White, White
  std::array<bool, 2> f{false, false};
  std::array<int, 2> activations{0, 0};
  Scalar now{0};
  std::vector<sched::Activation> script;
  sched::FaultPlan faults;

  explicit MiniSim(const Core& core_) : core(core_) {}

  int sid() const { return pack(c[0], c[1], f[0] ? 1 : 0, f[1] ? 1 : 0); }

  AbstractState abstract() const {
    AbstractState s;
    s.colors = {color_of(c[0]), color_of(c[1])};
    s.faulty = {f[0], f[1]};
    s.geometry = x[0] == x[1] ? GeometryClass::Collocated : GeometryClass::Apart;
    s.gathered = x[0] == x[1];
    return s;
  }

  // Target of robot i acting on `other` under its current apart view.
  std::optional<Scalar> target_of(const AbstractAction& a, const Scalar& self,
                                  const Scalar& other) const {
    switch (a.move) {
      case AbstractMoveKind::NoMove:
        return std::nullopt;
      case AbstractMoveKind::MoveToOther:
        return other;
      case AbstractMoveKind::MoveToParam:
        return self + a.lambda * (other - self);
    }
    return std::nullopt;
  }

  void activate_cycle(int i, const Scalar& look_at, const Scalar& dc,
                      const Scalar& dm) {
    script.push_back({static_cast<std::uint32_t>(i), {look_at, dc, dm}});
    ++activations[i];
  }

  void check_apart() {
    if (x[0] == x[1]) {
      throw std::logic_error("adversary invariant broken: robots collocated");
    }
  }

  void apply(const AdversaryMove& mv) {
    const Scalar dc = geom::frac(1, 4);
    const Scalar dm = geom::frac(1, 2);
    switch (mv.kind) {
      case AdversaryMove::Kind::ActivateBoth: {
        const AbstractAction& a0 = core.at(c[0], c[1]);
        const AbstractAction& a1 = core.at(c[1], c[0]);
        auto t0 = target_of(a0, x[0], x[1]);
        auto t1 = target_of(a1, x[1], x[0]);
        activate_cycle(0, now, dc, dm);
        activate_cycle(1, now, dc, dm);
        if (a0.flip) c[0] = 1 - c[0];
        if (a1.flip) c[1] = 1 - c[1];
        if (t0 && !f[0]) x[0] = *t0;
        if (t1 && !f[1]) x[1] = *t1;
        now += 1;
        break;
      }
      case AdversaryMove::Kind::ActivateOne: {
        int i = static_cast<int>(mv.robot);
        const AbstractAction& a = core.at(c[i], c[1 - i]);
        auto t = target_of(a, x[i], x[1 - i]);
        activate_cycle(i, now, dc, dm);
        if (a.flip) c[i] = 1 - c[i];
        if (t && !f[i]) x[i] = *t;
        now += 1;
        break;
      }
      case AdversaryMove::Kind::Fault: {
        int i = static_cast<int>(mv.robot);
        const AbstractAction& a = core.at(c[i], c[1 - i]);
        activate_cycle(i, now, dc, dm);
        sched::FaultTrigger trig;
        trig.kind = sched::FaultTrigger::Kind::AtActivation;
        trig.activation_index = activations[i];
        faults.entries.push_back({static_cast<std::uint32_t>(i), trig});
        if (a.flip) c[i] = 1 - c[i];
        f[i] = true;
        now += 1;
        break;
      }
      case AdversaryMove::Kind::InterleaveLookDuringMove: {
        int i = static_cast<int>(mv.mover);
        int j = static_cast<int>(mv.observer);
        const AbstractAction& a = core.at(c[i], c[j]);
        auto ti = target_of(a, x[i], x[j]);
        if (!ti || f[i]) throw std::logic_error("interleave mover must move");
        int ni = a.flip ? 1 - c[i] : c[i];
        const AbstractAction& b = core.at(c[j], ni);
        // Mover: look now, compute 1/4, move over [now + 1/4, now + 5/4].
        activate_cycle(i, now, dc, Scalar(1));
        // Observer looks mid-move at interpolation theta; choose theta so the
        // stale point is off the observer and the end positions differ.
        static const std::array<std::pair<long, long>, 9> thetas{
            {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4}, {1, 5}, {2, 5}, {3, 5},
             {4, 5}}};
        std::optional<Scalar> chosen;
        std::optional<Scalar> tj;
        for (const auto& [tn, td] : thetas) {
          Scalar theta = geom::frac(tn, td);
          Scalar q = x[i] + theta * (*ti - x[i]);
          if (q == x[j]) continue;
          std::optional<Scalar> cand_tj;
          if (!f[j] && !is_no(b)) {
            cand_tj = is_other(b) ? q : x[j] + b.lambda * (q - x[j]);
            if (*cand_tj == *ti) continue;
          }
          chosen = theta;
          tj = cand_tj;
          break;
        }
        if (!chosen) throw std::logic_error("no valid interleave instant");
        activate_cycle(j, now + dc + *chosen, dc, dm);
        c[i] = ni;
        if (b.flip) c[j] = 1 - c[j];
        x[i] = *ti;
        if (tj && !f[j]) x[j] = *tj;
        now += 2;
        break;
      }
    }
    check_apart();
  }
};

sched::RunResult replay_run(const TwoColorCandidate& cand, const MiniSim& sim) {
  model::Configuration init;
  for (std::uint32_t id = 0; id < 2; ++id) {
    model::RobotState r;
    r.id = id;
    r.position = Point{Scalar(static_cast<long>(id)), Scalar(0)};
    r.color = Color::White;
    init.robots.push_back(r);
  }
  sched::PolicySpec spec;
  spec.kind = sched::PolicyKind::Scripted;
  spec.script = sim.script;
  auto policy = sched::make_policy(spec);
  sched::TransitionFunction algo = algos::lift_candidate(cand);
  long budget = static_cast<long>(sim.script.size()) + 8;
  return sched::run(init, algo, *policy, sim.faults, budget);
}

// Checks the scheduler run against the mini-simulation's prediction.
std::string check_replay(const sched::RunResult& rr, const MiniSim& sim) {
  if (rr.outcome != sched::Outcome::BudgetExhausted) {
    return "run terminated instead of exhausting the script";
  }
  for (const auto& ev : rr.trace.events) {
    if (ev.kind == sched::EventKind::Terminate) return "unexpected termination";
  }
  for (int i = 0; i < 2; ++i) {
    const model::RobotState* r = rr.final.find(static_cast<std::uint32_t>(i));
    if (!r) return "robot missing from final configuration";
    if (r->faulty != sim.f[static_cast<std::size_t>(i)]) {
      return "fault flags diverge from the planned execution";
    }
    Point want{sim.x[static_cast<std::size_t>(i)], Scalar(0)};
    if (r->position != want) {
      return "final position diverges from the planned execution";
    }
  }
  if (rr.final.robots[0].position == rr.final.robots[1].position) {
    return "robots gathered";
  }
  return {};
}

void run_moves(MiniSim& sim, const std::vector<Edge>& edges,
               std::vector<AdversaryMove>* moves_out,
               std::vector<AbstractState>* states_out) {
  for (const Edge& e : edges) {
    sim.apply(e.mv);
    if (sim.sid() != e.next) {
      throw std::logic_error("abstract prediction diverged from execution");
    }
    if (moves_out) moves_out->push_back(e.mv);
    if (states_out) states_out->push_back(sim.abstract());
  }
}

}  // namespace

NonGatheringCertificate refute(const TwoColorCandidate& candidate) {
  if (!candidate.total()) {
    throw algos::IncompleteTable("candidate table is not total");
  }
  Core core = core_of(candidate);
  auto lasso = find_lasso(core, pack(1, 1, 0, 0));
  if (!lasso) {
    throw StrategyGap("no fair non-gathering lasso from the all-White start");
  }
  // The enumeration is deduplicated by the Black<->White relabelling, so the
  // mirrored start must be refutable too for the representative to cover it.
  if (!find_lasso(core, pack(0, 0, 0, 0))) {
    throw StrategyGap("no fair non-gathering lasso from the all-Black start");
  }

  NonGatheringCertificate cert;
  cert.candidate = candidate;
  MiniSim sim(core);
  cert.states.push_back(sim.abstract());
  run_moves(sim, lasso->prefix, &cert.prefix_moves, &cert.states);
  Scalar loop_start = sim.now;
  run_moves(sim, lasso->cycle, &cert.loop_moves, &cert.states);
  cert.uses_fault = !sim.faults.entries.empty();

  sched::RunResult rr = replay_run(candidate, sim);
  std::string err = check_replay(rr, sim);
  if (!err.empty()) {
    throw std::logic_error("certificate replay diverged: " + err);
  }
  std::size_t first = rr.trace.events.size();
  for (std::size_t i = 0; i < rr.trace.events.size(); ++i) {
    if (rr.trace.events[i].time >= loop_start) {
      first = i;
      break;
    }
  }
  cert.trace = std::move(rr.trace);
  cert.loop = {first, cert.trace.events.size()};
  return cert;
}

ReplayReport replay_certificate(const NonGatheringCertificate& cert,
                                int loop_iterations) {
  ReplayReport rep;
  if (loop_iterations < 1 || cert.loop_moves.empty()) {
    rep.detail = "certificate has no pumpable loop";
    return rep;
  }
  Core core = core_of(cert.candidate);
  MiniSim sim(core);
  try {
    for (const auto& mv : cert.prefix_moves) sim.apply(mv);
    int loop_entry = sim.sid();
    for (int it = 0; it < loop_iterations; ++it) {
      for (const auto& mv : cert.loop_moves) sim.apply(mv);
      if (sim.sid() != loop_entry) {
        rep.detail = "loop does not return to its entry state";
        return rep;
      }
    }
  } catch (const std::logic_error& e) {
    rep.detail = e.what();
    return rep;
  }
  if (sim.faults.entries.size() > 1) {
    rep.detail = "more than one fault injected";
    return rep;
  }

  sched::RunResult rr = replay_run(cert.candidate, sim);
  rep.gathered = rr.final.robots[0].position == rr.final.robots[1].position;
  std::string err = check_replay(rr, sim);
  if (!err.empty()) {
    rep.detail = err;
    return rep;
  }
  for (const auto& ev : rr.trace.events) {
    if (ev.kind == sched::EventKind::LookStart) {
      ++rep.cycles[ev.robot];
    }
  }
  for (int i = 0; i < 2; ++i) {
    if (!sim.f[static_cast<std::size_t>(i)] &&
        rep.cycles[static_cast<std::size_t>(i)] < loop_iterations) {
      rep.detail = "non-faulty robot starved across the pumped loop";
      return rep;
    }
  }
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Candidate enumeration
// ---------------------------------------------------------------------------

std::vector<Scalar> lambda_grid(int denominator_bound) {
  if (denominator_bound < 1) {
    throw std::invalid_argument("denominator bound must be positive");
  }
  std::set<Scalar> grid{geom::frac(1, 2), Scalar(2)};
  for (long d = 1; d <= denominator_bound; ++d) {
    for (long n = 1; n < 2 * d; ++n) {
      if (n == d || std::gcd(n, d) != 1) continue;
      grid.insert(geom::frac(n, d));
    }
  }
  return {grid.begin(), grid.end()};
}

namespace {

constexpr std::uint64_t kTableCount = 1679616;  // 6^8

void decode_table(std::uint64_t t, std::array<std::uint8_t, 8>& digits) {
  for (int v = 0; v < 8; ++v) {
    digits[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(t % 6);
    t /= 6;
  }
}

// The Black<->White mirror flips both colors in every view (view index XOR
// 0b110); actions are color-symmetric, so only the views permute.
bool is_canonical(const std::array<std::uint8_t, 8>& digits) {
  for (int v = 0; v < 8; ++v) {
    std::uint8_t a = digits[static_cast<std::size_t>(v)];
    std::uint8_t b = digits[static_cast<std::size_t>(v ^ 6)];
    if (a != b) return a < b;
  }
  return true;  // self-mirrored
}

bool table_has_param(const std::array<std::uint8_t, 8>& digits) {
  for (std::uint8_t d : digits) {
    if (d / 2 == 2) return true;
  }
  return false;
}

}  // namespace

CandidateStream::CandidateStream(int denominator_bound)
    : lambdas_(lambda_grid(denominator_bound)) {}

bool CandidateStream::next_encoded(std::array<std::uint8_t, 8>& digits,
                                   int& lambda_index) {
  while (true) {
    if (lambda_i_ == -2) {
      while (table_ < kTableCount) {
        decode_table(table_, digits_);
        if (is_canonical(digits_)) break;
        ++table_;
      }
      if (table_ >= kTableCount) return false;
      has_param_ = table_has_param(digits_);
      if (!has_param_) {
        digits = digits_;
        lambda_index = -1;
        ++table_;
        return true;
      }
      lambda_i_ = 0;
    }
    digits = digits_;
    lambda_index = lambda_i_;
    ++lambda_i_;
    if (lambda_i_ >= static_cast<int>(lambdas_.size())) {
      lambda_i_ = -2;
      ++table_;
    }
    return true;
  }
}

TwoColorCandidate CandidateStream::materialize(
    const std::array<std::uint8_t, 8>& digits, int lambda_index) const {
  TwoColorCandidate cand;
  for (int v = 0; v < 8; ++v) {
    AbstractView view{color_of((v >> 2) & 1), color_of((v >> 1) & 1),
                      (v & 1) != 0};
    std::uint8_t code = digits[static_cast<std::size_t>(v)];
    AbstractAction act;
    switch (code / 2) {
      case 0:
        act.move = AbstractMoveKind::NoMove;
        break;
      case 1:
        act.move = AbstractMoveKind::MoveToOther;
        break;
      default:
        act.move = AbstractMoveKind::MoveToParam;
        act.lambda = lambdas_.at(static_cast<std::size_t>(lambda_index));
        break;
    }
    act.flip = code % 2 == 1;
    cand.table[view] = act;
  }
  return cand;
}

bool CandidateStream::next(TwoColorCandidate& out) {
  std::array<std::uint8_t, 8> digits;
  int li;
  if (!next_encoded(digits, li)) return false;
  out = materialize(digits, li);
  return true;
}

CandidateStream enumerate_candidates(int denominator_bound) {
  return CandidateStream(denominator_bound);
}

SweepStats refute_sweep(int denominator_bound, int pump_iterations) {
  SweepStats stats;
  CandidateStream stream(denominator_bound);
  std::array<std::uint8_t, 8> digits;
  int li;
  // Key: the four apart-view codes plus the lambda index, 16 bits per view.
  std::unordered_map<std::uint64_t, bool> seen;
  while (stream.next_encoded(digits, li)) {
    ++stats.candidates;
    std::uint64_t key = 0;
    for (int k = 0; k < 4; ++k) {
      std::uint8_t code = digits[static_cast<std::size_t>(2 * k)];
      std::uint64_t slot = code;
      if (code / 2 == 2) slot |= static_cast<std::uint64_t>(li + 1) << 3;
      key |= slot << (16 * k);
    }
    auto it = seen.find(key);
    if (it == seen.end()) {
      ++stats.distinct_cores;
      bool ok = false;
      try {
        TwoColorCandidate cand = stream.materialize(digits, li);
        NonGatheringCertificate cert = refute(cand);
        ReplayReport rep = replay_certificate(cert, pump_iterations);
        ++stats.replayed;
        if (cert.uses_fault) ++stats.cores_using_fault;
        stats.max_loop_moves = std::max(
            stats.max_loop_moves, static_cast<long>(cert.loop_moves.size()));
        ok = rep.ok && !rep.gathered;
        if (!ok && stats.detail.empty()) {
          stats.detail = "replay failed: " + rep.detail;
        }
      } catch (const StrategyGap& e) {
        if (stats.detail.empty()) {
          stats.detail = std::string("strategy gap: ") + e.what();
        }
      } catch (const std::logic_error& e) {
        if (stats.detail.empty()) stats.detail = e.what();
      }
      it = seen.emplace(key, ok).first;
    }
    if (!it->second && stats.detail.empty()) {
      stats.detail = "unrefuted candidate";
    }
  }
  stats.ok = stats.detail.empty();
  return stats;
}

}  // namespace gather::adversary
