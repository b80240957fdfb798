#include "gather/sched.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>

namespace gather::sched {

namespace {

using model::Action;
using model::MoveKind;
using model::Phase;
using model::RobotState;
using model::Snapshot;

// ---------------------------------------------------------------------------
// Activation policies
// ---------------------------------------------------------------------------

// Shared unit-cycle shape used by the sequential policies.
PhasePlan unit_cycle(const Scalar& look_at) {
  return PhasePlan{look_at, Scalar(1, 4), Scalar(1, 2)};
}

class FullySyncPolicy : public ActivationPolicy {
 public:
  std::vector<Activation> next_batch(const SimView& view) override {
    std::vector<Activation> out;
    for (std::uint32_t id : view.alive) out.push_back({id, unit_cycle(round_)});
    round_ += 1;
    return out;
  }

 private:
  Scalar round_{0};
};

class RoundRobinPolicy : public ActivationPolicy {
 public:
  std::vector<Activation> next_batch(const SimView& view) override {
    if (view.alive.empty()) return {};
    // Smallest alive id strictly above the last one, wrapping around.
    std::optional<std::uint32_t> pick;
    for (std::uint32_t id : view.alive) {
      if (static_cast<long>(id) > last_ && (!pick || id < *pick)) pick = id;
    }
    std::uint32_t id =
        pick ? *pick : *std::min_element(view.alive.begin(), view.alive.end());
    last_ = static_cast<long>(id);
    std::vector<Activation> out{{id, unit_cycle(clock_)}};
    clock_ += 1;
    return out;
  }

 private:
  long last_ = -1;
  Scalar clock_{0};
};

class RandomFairPolicy : public ActivationPolicy {
 public:
  explicit RandomFairPolicy(std::uint64_t seed) : rng_(seed) {}

  std::vector<Activation> next_batch(const SimView& view) override {
    std::vector<std::uint32_t> order(view.alive);
    // Portable Fisher-Yates (std::shuffle is not stable across stdlibs).
    for (std::size_t i = order.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(rng_() % i);
      std::swap(order[i - 1], order[j]);
    }
    std::vector<Activation> out;
    Scalar look = base_;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i > 0 && rng_() % 4 != 0) look += 1;  // 1/4 chance of a shared look
      Scalar dc = geom::frac(static_cast<long>(rng_() % 3) + 1, 4);  // 1/4..3/4
      Scalar dm = geom::frac(static_cast<long>(rng_() % 7) + 1, 4);  // 1/4..7/4
      out.push_back({order[i], PhasePlan{look, dc, dm}});
    }
    // Next superround starts after every cycle of this one has ended.
    base_ += static_cast<long>(order.size()) + 3;
    return out;
  }

 private:
  std::mt19937_64 rng_;
  Scalar base_{0};
};

// One robot per batch; each round activates robots with untriggered fault-plan
// entries first so faults land as early as possible.
class SequentialAdversaryPolicy : public ActivationPolicy {
 public:
  std::vector<Activation> next_batch(const SimView& view) override {
    if (view.alive.empty()) return {};
    if (round_.empty()) {
      std::set<std::uint32_t> alive(view.alive.begin(), view.alive.end());
      std::set<std::uint32_t> taken;
      for (std::uint32_t id : view.fault_queue) {
        if (alive.count(id) && taken.insert(id).second) round_.push_back(id);
      }
      for (std::uint32_t id : view.alive) {
        if (taken.insert(id).second) round_.push_back(id);
      }
    }
    std::uint32_t id = round_.front();
    round_.pop_front();
    std::vector<Activation> out{{id, unit_cycle(clock_)}};
    clock_ += 1;
    return out;
  }

 private:
  std::deque<std::uint32_t> round_;
  Scalar clock_{0};
};

class ScriptedPolicy : public ActivationPolicy {
 public:
  explicit ScriptedPolicy(std::vector<Activation> script)
      : script_(std::move(script)) {}

  std::vector<Activation> next_batch(const SimView&) override {
    if (done_) return {};
    done_ = true;
    return script_;
  }

 private:
  std::vector<Activation> script_;
  bool done_ = false;
};

// ---------------------------------------------------------------------------
// Event engine
// ---------------------------------------------------------------------------

enum class EvKind { TimeFault, MidFault, MoveEnd, MoveStart, Look };

int ev_priority(EvKind k) {
  switch (k) {
    case EvKind::TimeFault:
    case EvKind::MidFault:
      return 0;
    case EvKind::MoveEnd:
      return 1;
    case EvKind::MoveStart:
      return 2;
    case EvKind::Look:
      return 3;
  }
  return 4;
}

struct Ev {
  Scalar time;
  EvKind kind;
  std::uint32_t robot;
  std::uint64_t seq;
};

struct EvCmp {
  bool operator()(const Ev& a, const Ev& b) const {
    if (a.time != b.time) return a.time < b.time;
    int pa = ev_priority(a.kind), pb = ev_priority(b.kind);
    if (pa != pb) return pa < pb;
    if (a.robot != b.robot) return a.robot < b.robot;
    return a.seq < b.seq;
  }
};

// The computed action held between look and move start, in global terms.
struct StoredAction {
  Color color = Color::Off;
  bool has_move = false;
  Point target;
  bool terminate = false;
  Scalar move_duration{0};
};

struct RobotAux {
  long activations = 0;
  long moves = 0;
  std::vector<FaultTrigger> pending_faults;  // AtActivation / MidMove, in order
  StoredAction action;
};

class Engine {
 public:
  Engine(const Configuration& initial, const TransitionFunction& algorithm,
         ActivationPolicy& policy, const FaultPlan& faults, long budget)
      : cfg_(initial), algo_(algorithm), policy_(policy), budget_(budget) {
    for (const auto& r : cfg_.robots) aux_[r.id];
    for (const auto& [id, trig] : faults.entries) {
      if (trig.kind == FaultTrigger::Kind::AtTime) {
        push({trig.at_time, EvKind::TimeFault, id, seq_++});
      } else {
        aux_[id].pending_faults.push_back(trig);
      }
    }
    for (const auto& r : cfg_.robots) {
      if (!r.terminated) epoch_pending_.insert(r.id);
    }
  }

  RunResult run() {
    RunResult out;
    if (budget_ <= 0) {
      out.final = cfg_;
      out.outcome = Outcome::BudgetExhausted;
      return out;
    }
    // Safety cap: a fair policy reaches an epoch within O(N) batches.
    long batch_cap =
        budget_ * (static_cast<long>(cfg_.robots.size()) + 1) * 8 + 64;
    long batches = 0;
    bool scripted_ended = false;
    while (true) {
      if (all_done()) {
        out.outcome = Outcome::AllTerminated;
        break;
      }
      if (epochs_ >= budget_ || scripted_ended || batches > batch_cap) {
        out.outcome = Outcome::BudgetExhausted;
        break;
      }
      if (only_time_faults_pending()) {
        std::vector<std::uint32_t> alive = alive_ids();
        std::vector<std::uint32_t> fault_queue;
        for (std::uint32_t id : alive) {
          if (!aux_[id].pending_faults.empty()) fault_queue.push_back(id);
        }
        SimView view{cfg_, alive, fault_queue};
        std::vector<Activation> batch = policy_.next_batch(view);
        ++batches;
        if (batch.empty()) {
          scripted_ended = true;
          continue;
        }
        for (const auto& act : batch) {
          const RobotState* r = cfg_.find(act.robot);
          if (!r || r->terminated) continue;
          if (act.plan.look_at < cfg_.time) {
            throw std::logic_error("activation scheduled in the past");
          }
          plans_[act.robot].emplace(act.plan.look_at, act.plan);
          push({act.plan.look_at, EvKind::Look, act.robot, seq_++});
        }
        continue;
      }
      Ev ev = pop();
      cfg_.time = ev.time;
      dispatch(ev);
    }
    out.final = cfg_;
    out.trace = std::move(trace_);
    out.epochs = epochs_;
    return out;
  }

 private:
  void push(Ev ev) { queue_.insert(std::move(ev)); }

  Ev pop() {
    Ev ev = *queue_.begin();
    queue_.erase(queue_.begin());
    return ev;
  }

  bool only_time_faults_pending() const {
    for (const auto& ev : queue_) {
      if (ev.kind != EvKind::TimeFault) return false;
    }
    return true;
  }

  bool all_done() const {
    for (const auto& r : cfg_.robots) {
      if (!r.faulty && !r.terminated) return false;
    }
    return true;
  }

  std::vector<std::uint32_t> alive_ids() const {
    std::vector<std::uint32_t> out;
    for (const auto& r : cfg_.robots) {
      if (!r.terminated) out.push_back(r.id);
    }
    return out;
  }

  void emit(EventKind kind, const RobotState& r,
            std::optional<Point> target = std::nullopt) {
    trace_.events.push_back(TraceEvent{cfg_.time, r.id, kind,
                                       r.position_at(cfg_.time), r.color,
                                       std::move(target)});
  }

  void cycle_complete(std::uint32_t id) {
    epoch_pending_.erase(id);
    if (epoch_pending_.empty()) {
      ++epochs_;
      trace_.epoch_marks.push_back(cfg_.time);
      for (const auto& r : cfg_.robots) {
        if (!r.terminated) epoch_pending_.insert(r.id);
      }
    }
  }

  void trigger_fault(RobotState& r) {
    r.position = r.position_at(cfg_.time);
    r.pending.reset();
    r.faulty = true;
    emit(EventKind::FaultHalt, r);
  }

  void dispatch(const Ev& ev) {
    RobotState* r = cfg_.find(ev.robot);
    switch (ev.kind) {
      case EvKind::TimeFault:
        if (!r->faulty && !r->terminated) trigger_fault(*r);
        break;
      case EvKind::MidFault:
        if (!r->faulty) trigger_fault(*r);
        break;
      case EvKind::Look:
        handle_look(ev);
        break;
      case EvKind::MoveStart:
        handle_move_start(*r);
        break;
      case EvKind::MoveEnd:
        handle_move_end(*r);
        break;
    }
  }

  void handle_look(const Ev& first) {
    // Robots looking at the same instant from the same point form one group:
    // they share the representative's snapshot and computed action.
    std::vector<std::uint32_t> group{first.robot};
    Point at = cfg_.find(first.robot)->position_at(cfg_.time);
    for (auto it = queue_.begin(); it != queue_.end();) {
      if (it->time != cfg_.time || it->kind != EvKind::Look) break;
      if (cfg_.find(it->robot)->position_at(cfg_.time) == at) {
        group.push_back(it->robot);
        it = queue_.erase(it);
      } else {
        ++it;
      }
    }
    std::sort(group.begin(), group.end());

    for (std::uint32_t id : group) {
      RobotState& m = *cfg_.find(id);
      RobotAux& aux = aux_[id];
      ++aux.activations;
      for (auto it = aux.pending_faults.begin();
           it != aux.pending_faults.end(); ++it) {
        if (it->kind == FaultTrigger::Kind::AtActivation &&
            it->activation_index == aux.activations) {
          if (!m.faulty) trigger_fault(m);
          aux.pending_faults.erase(it);
          break;
        }
      }
      m.phase = Phase::Looking;
      emit(EventKind::LookStart, m);
    }

    RobotState& rep = *cfg_.find(group.front());
    Snapshot snap = model::take_snapshot(cfg_, rep);
    Action action = algo_.step(rep.color, snap);
    if (!model::palette_contains(algo_.palette, action.new_color)) {
      throw std::logic_error("action color outside palette");
    }
    Point target_global = rep.frame.to_global(action.target);
    for (std::uint32_t id : group) {
      RobotState& m = *cfg_.find(id);
      RobotAux& aux = aux_[id];
      // Consume this look's plan; a robot may have several activations queued
      // (overlapping scripted batches), keyed by their look instants.
      auto& pending_plans = plans_[id];
      auto plan_it = pending_plans.find(cfg_.time);
      if (plan_it == pending_plans.end()) {
        throw std::logic_error("look event without a matching plan");
      }
      PhasePlan plan = plan_it->second;
      pending_plans.erase(plan_it);
      aux.action.color = action.new_color;
      aux.action.has_move =
          action.move == MoveKind::MoveTo && target_global != m.position;
      aux.action.target = target_global;
      aux.action.terminate = action.terminate;
      aux.action.move_duration = plan.move_duration;
      m.phase = Phase::Computing;
      push({cfg_.time + plan.compute_duration, EvKind::MoveStart, id, seq_++});
    }
  }

  void handle_move_start(RobotState& r) {
    RobotAux& aux = aux_[r.id];
    r.color = aux.action.color;
    emit(EventKind::ComputeEnd, r);
    bool moves = aux.action.has_move && !r.faulty;
    if (!moves) {
      r.phase = Phase::Idle;
      if (aux.action.terminate) {
        r.terminated = true;
        emit(EventKind::Terminate, r);
      }
      cycle_complete(r.id);
      return;
    }
    r.phase = Phase::Moving;
    r.pending = model::PendingMove{aux.action.target, r.position, cfg_.time,
                                   cfg_.time + aux.action.move_duration};
    emit(EventKind::MoveStart, r, aux.action.target);
    ++aux.moves;
    for (auto it = aux.pending_faults.begin(); it != aux.pending_faults.end();
         ++it) {
      if (it->kind == FaultTrigger::Kind::MidMove &&
          it->move_index == aux.moves) {
        push({cfg_.time + it->lambda * aux.action.move_duration,
              EvKind::MidFault, r.id, seq_++});
        aux.pending_faults.erase(it);
        break;
      }
    }
    push({cfg_.time + aux.action.move_duration, EvKind::MoveEnd, r.id, seq_++});
  }

  void handle_move_end(RobotState& r) {
    RobotAux& aux = aux_[r.id];
    if (r.pending) {
      r.position = r.pending->target;
      r.pending.reset();
    }
    r.phase = Phase::Idle;
    emit(EventKind::MoveEnd, r);
    if (aux.action.terminate && !r.faulty) {
      r.terminated = true;
      emit(EventKind::Terminate, r);
    }
    cycle_complete(r.id);
  }

  Configuration cfg_;
  const TransitionFunction& algo_;
  ActivationPolicy& policy_;
  long budget_;
  std::set<Ev, EvCmp> queue_;
  std::uint64_t seq_ = 0;
  std::map<std::uint32_t, RobotAux> aux_;
  std::map<std::uint32_t, std::multimap<Scalar, PhasePlan>> plans_;
  std::set<std::uint32_t> epoch_pending_;
  long epochs_ = 0;
  ExecutionTrace trace_;
};

}  // namespace

std::unique_ptr<ActivationPolicy> make_policy(const PolicySpec& spec) {
  switch (spec.kind) {
    case PolicyKind::FullySync:
      return std::make_unique<FullySyncPolicy>();
    case PolicyKind::RoundRobin:
      return std::make_unique<RoundRobinPolicy>();
    case PolicyKind::RandomFair:
      return std::make_unique<RandomFairPolicy>(spec.seed);
    case PolicyKind::SequentialAdversary:
      return std::make_unique<SequentialAdversaryPolicy>();
    case PolicyKind::Scripted:
      return std::make_unique<ScriptedPolicy>(spec.script);
  }
  throw std::logic_error("unknown policy kind");
}

void inject_fault(Configuration& cfg, std::uint32_t robot,
                  const FaultTrigger& trigger) {
  model::RobotState* r = cfg.find(robot);
  if (!r) throw std::invalid_argument("no such robot");
  if (r->faulty) throw AlreadyFaulty("robot is already faulty");
  if (trigger.kind != FaultTrigger::Kind::AtTime) {
    throw std::invalid_argument(
        "only AtTime faults can be injected outside a run");
  }
  if (trigger.at_time < cfg.time) {
    throw std::invalid_argument("fault time is in the past");
  }
  r->position = r->position_at(trigger.at_time);
  r->pending.reset();
  r->faulty = true;
}

RunResult run(const Configuration& initial, const TransitionFunction& algorithm,
              ActivationPolicy& policy, const FaultPlan& faults,
              long budget_epochs) {
  Engine engine(initial, algorithm, policy, faults, budget_epochs);
  return engine.run();
}

long count_epochs(const ExecutionTrace& trace) {
  // Roster = every robot id mentioned by the trace.
  std::set<std::uint32_t> roster;
  for (const auto& ev : trace.events) roster.insert(ev.robot);
  std::set<std::uint32_t> terminated;
  std::set<std::uint32_t> pending(roster);
  long epochs = 0;

  auto complete = [&](std::uint32_t id) {
    pending.erase(id);
    if (pending.empty() && !roster.empty()) {
      ++epochs;
      for (std::uint32_t r : roster) {
        if (!terminated.count(r)) pending.insert(r);
      }
    }
  };

  const auto& evs = trace.events;
  auto followed_by = [&](std::size_t i, EventKind kind) {
    return i + 1 < evs.size() && evs[i + 1].kind == kind &&
           evs[i + 1].robot == evs[i].robot && evs[i + 1].time == evs[i].time;
  };
  for (std::size_t i = 0; i < evs.size(); ++i) {
    const TraceEvent& ev = evs[i];
    switch (ev.kind) {
      case EventKind::LookStart:
      case EventKind::MoveStart:
        break;
      case EventKind::ComputeEnd:
        // A stay-cycle ends here; a move-cycle ends at its MoveEnd. The
        // MoveStart, if any, directly follows at the same timestamp. A robot
        // terminating at cycle end leaves the roster before the epoch check.
        if (!followed_by(i, EventKind::MoveStart)) {
          if (followed_by(i, EventKind::Terminate)) terminated.insert(ev.robot);
          complete(ev.robot);
        }
        break;
      case EventKind::MoveEnd:
        if (followed_by(i, EventKind::Terminate)) terminated.insert(ev.robot);
        complete(ev.robot);
        break;
      case EventKind::Terminate:
      case EventKind::FaultHalt:
        break;
    }
  }
  return epochs;
}

}  // namespace gather::sched
