#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gather/algos.hpp"
#include "gather/sched.hpp"

namespace gather::adversary {

using algos::TwoColorCandidate;
using model::Color;
using model::Scalar;

// One adversarial scheduling decision against a two-robot candidate. The
// robots are 0 and 1; `InterleaveLookDuringMove` lets the observer take its
// snapshot while the mover is mid-move, `Fault` freezes the robot's position
// forever (its light keeps working). A refutation uses at most one fault.
struct AdversaryMove {
  enum class Kind { ActivateBoth, ActivateOne, InterleaveLookDuringMove, Fault };
  Kind kind = Kind::ActivateBoth;
  std::uint32_t robot = 0;     // ActivateOne / Fault
  std::uint32_t observer = 0;  // InterleaveLookDuringMove
  std::uint32_t mover = 0;     // InterleaveLookDuringMove

  friend bool operator==(const AdversaryMove& a, const AdversaryMove& b) {
    return a.kind == b.kind && a.robot == b.robot &&
           a.observer == b.observer && a.mover == b.mover;
  }
};

enum class GeometryClass { Apart, Collocated };

// Scale-free summary of a quiescent two-robot configuration. Two executions
// reaching equal abstract states admit identical continuations of adversary
// moves, which is what makes a detected loop pumpable.
struct AbstractState {
  std::array<Color, 2> colors{Color::White, Color::White};
  std::array<bool, 2> faulty{false, false};
  std::array<model::Phase, 2> pending_phase{model::Phase::Idle,
                                            model::Phase::Idle};
  GeometryClass geometry = GeometryClass::Apart;
  bool mid_move = false;
  bool gathered = false;

  friend bool operator==(const AbstractState& a, const AbstractState& b) {
    return a.colors == b.colors && a.faulty == b.faulty &&
           a.pending_phase == b.pending_phase && a.geometry == b.geometry &&
           a.mid_move == b.mid_move && a.gathered == b.gathered;
  }
};

// Thrown when the strategy has no sound countermove; unreachable for total
// candidate tables.
struct StrategyGap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A finite prefix plus a pumpable loop of adversary moves witnessing a fair
// non-gathering execution. `trace` is the scheduler replay of the prefix
// followed by one loop iteration; `loop` is the event index range [first,
// one-past-last) of that iteration. `states` holds the abstract state before
// any move and after each prefix and loop move; every state has gathered ==
// false, and the last state equals the state at the loop's start.
struct NonGatheringCertificate {
  TwoColorCandidate candidate;
  std::vector<AdversaryMove> prefix_moves;
  std::vector<AdversaryMove> loop_moves;
  std::vector<AbstractState> states;
  sched::ExecutionTrace trace;
  std::pair<std::size_t, std::size_t> loop{0, 0};
  bool uses_fault = false;
};

// Plays the impossibility strategy against a total candidate, starting from
// two robots apart with both lights White, and returns a certificate. Throws
// IncompleteTable for partial tables and StrategyGap if no countermove
// applies (which would falsify the strategy, not the candidate).
NonGatheringCertificate refute(const TwoColorCandidate& candidate);

struct ReplayReport {
  bool ok = false;
  bool gathered = false;            // robots collocated at the end of the run
  std::array<long, 2> cycles{0, 0};  // completed LCM cycles per robot
  std::string detail;                // first failed check; empty when ok
};

// Independently re-executes the certificate through the event scheduler with
// the loop pumped `loop_iterations` times. Checks that the run never gathers,
// that at most one robot faults, and that every non-faulty robot completes at
// least one LCM cycle per pumped iteration (fairness).
ReplayReport replay_certificate(const NonGatheringCertificate& cert,
                                int loop_iterations);

// Move-to-parameter grid: {1/2, 2} plus every reduced fraction n/d with
// 1 <= d <= denominator_bound and 0 < n/d < 2, excluding 0 and 1 (those are
// NoMove and MoveToOther already). Sorted ascending.
std::vector<Scalar> lambda_grid(int denominator_bound);

// Deterministic stream of all total candidate tables over the 8 abstract
// views, each entry one of {NoMove, MoveToOther, MoveToParam(lambda)} x
// {Keep, Flip} with a single lambda per candidate drawn from lambda_grid.
// Tables without a MoveToParam entry are emitted once. Deduplicated by the
// Black<->White relabelling symmetry (only the lexicographically smaller of a
// table and its mirror is emitted).
class CandidateStream {
 public:
  explicit CandidateStream(int denominator_bound);

  // Materialized form; returns false when the stream is exhausted.
  bool next(TwoColorCandidate& out);

  // Fast form: action codes per view index (own*4 + other*2 + collocated,
  // Black = 0), code = move * 2 + flip with move 0 = NoMove, 1 = MoveToOther,
  // 2 = MoveToParam. lambda_index indexes lambda_grid, -1 when unused.
  bool next_encoded(std::array<std::uint8_t, 8>& digits, int& lambda_index);

  const std::vector<Scalar>& lambdas() const { return lambdas_; }

  TwoColorCandidate materialize(const std::array<std::uint8_t, 8>& digits,
                                int lambda_index) const;

 private:
  std::vector<Scalar> lambdas_;
  std::uint64_t table_ = 0;  // base-6 counter over the 8 view digits
  int lambda_i_ = -2;        // -2: advance to the next canonical table
  std::array<std::uint8_t, 8> digits_{};
  bool has_param_ = false;
};

CandidateStream enumerate_candidates(int denominator_bound);

struct SweepStats {
  long candidates = 0;        // stream length
  long distinct_cores = 0;    // distinct (apart-view actions, lambda) projections
  long replayed = 0;          // certificates replayed through the scheduler
  long cores_using_fault = 0;
  long max_loop_moves = 0;
  bool ok = false;
  std::string detail;  // first failure; empty when ok
};

// Refutes every candidate in the stream. The refutation depends only on the
// four apart-view entries and lambda (the execution never collocates the
// robots), so each distinct projection is refuted and replayed once and the
// result is shared across candidates differing only in collocated entries.
SweepStats refute_sweep(int denominator_bound, int pump_iterations = 10);

}  // namespace gather::adversary
