#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "gather/model.hpp"

namespace gather::sched {

using model::Color;
using model::Configuration;
using model::PaletteId;
using model::Point;
using model::Scalar;

// One LCM cycle window: the look instant plus the phase durations.
struct PhasePlan {
  Scalar look_at;
  Scalar compute_duration;
  Scalar move_duration;
};

struct Activation {
  std::uint32_t robot;
  PhasePlan plan;
};

// Read-only view the policies use to choose activations.
struct SimView {
  const Configuration& cfg;
  const std::vector<std::uint32_t>& alive;     // non-terminated robot ids
  const std::vector<std::uint32_t>& fault_queue;  // untriggered fault-plan ids
};

// A policy emits batches of activations; activations within a batch may
// overlap in time, batches are processed in sequence. Every policy must be
// fair: each non-terminated robot appears in every bounded window of batches.
class ActivationPolicy {
 public:
  virtual ~ActivationPolicy() = default;
  // Empty result ends the run (only Scripted does this before termination).
  virtual std::vector<Activation> next_batch(const SimView& view) = 0;
};

enum class PolicyKind { FullySync, RoundRobin, RandomFair, SequentialAdversary, Scripted };

struct PolicySpec {
  PolicyKind kind = PolicyKind::FullySync;
  std::uint64_t seed = 0;                 // RandomFair
  std::vector<Activation> script;         // Scripted
};

std::unique_ptr<ActivationPolicy> make_policy(const PolicySpec& spec);

struct FaultTrigger {
  enum class Kind { AtActivation, AtTime, MidMove };
  Kind kind = Kind::AtActivation;
  int activation_index = 1;  // AtActivation: 1-based cycle index
  Scalar at_time{0};         // AtTime
  int move_index = 1;        // MidMove: 1-based index of actual moves
  Scalar lambda{0};          // MidMove: fraction in [0, 1)
};

struct FaultPlan {
  std::vector<std::pair<std::uint32_t, FaultTrigger>> entries;
};

enum class EventKind {
  LookStart,
  ComputeEnd,  // color set
  MoveStart,
  MoveEnd,
  FaultHalt,
  Terminate,
};

struct TraceEvent {
  Scalar time;
  std::uint32_t robot;
  EventKind kind;
  Point position;  // global position at event time
  Color color;
  std::optional<Point> target;  // MoveStart: global move target
};

struct ExecutionTrace {
  std::vector<TraceEvent> events;
  std::vector<Scalar> epoch_marks;
};

enum class Outcome { AllTerminated, BudgetExhausted };

struct RunResult {
  Configuration final;
  ExecutionTrace trace;
  Outcome outcome;
  long epochs = 0;
};

// Deterministic pure transition function of one of the paper's algorithms.
struct TransitionFunction {
  PaletteId palette;
  std::function<model::Action(Color, const model::Snapshot&)> step;
};

struct AlreadyFaulty : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Freezes the robot's position per the trigger; the light keeps working.
void inject_fault(Configuration& cfg, std::uint32_t robot,
                  const FaultTrigger& trigger);

// Event-driven ASYNC execution: deterministic given (initial, policy spec,
// faults). The run ends when every non-faulty robot has terminated or the
// epoch budget is exhausted.
RunResult run(const Configuration& initial, const TransitionFunction& algorithm,
              ActivationPolicy& policy, const FaultPlan& faults,
              long budget_epochs);

// Greedy minimal-interval epoch count recomputed from a trace.
long count_epochs(const ExecutionTrace& trace);

}  // namespace gather::sched
