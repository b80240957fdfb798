#pragma once

#include <map>
#include <set>
#include <stdexcept>

#include "gather/model.hpp"
#include "gather/sched.hpp"

namespace gather::algos {

using model::Action;
using model::Color;
using model::PaletteId;
using model::Point;
using model::Scalar;
using model::Snapshot;
using sched::TransitionFunction;

struct PaletteMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The three published algorithms as pure transition functions.
Action step_3color(Color own, const Snapshot& snap);
Action step_7color(Color own, const Snapshot& snap);
Action step_26color(Color own, const Snapshot& snap);

TransitionFunction make_algorithm(PaletteId palette);

// ---------------------------------------------------------------------------
// Abstract 2-color two-robot candidates (consumed by the adversary module).
// ---------------------------------------------------------------------------

struct AbstractView {
  Color own;    // Black or White
  Color other;  // Black or White
  bool collocated;

  friend bool operator<(const AbstractView& a, const AbstractView& b) {
    if (a.own != b.own) return a.own < b.own;
    if (a.other != b.other) return a.other < b.other;
    return a.collocated < b.collocated;
  }
  friend bool operator==(const AbstractView& a, const AbstractView& b) {
    return a.own == b.own && a.other == b.other && a.collocated == b.collocated;
  }
};

enum class AbstractMoveKind { NoMove, MoveToOther, MoveToParam };

struct AbstractAction {
  AbstractMoveKind move = AbstractMoveKind::NoMove;
  Scalar lambda{0};  // MoveToParam: target = self + lambda * (other - self)
  bool flip = false;  // color: Keep or Flip

  friend bool operator==(const AbstractAction& a, const AbstractAction& b) {
    return a.move == b.move && a.lambda == b.lambda && a.flip == b.flip;
  }
};

struct IncompleteTable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TwoColorCandidate {
  std::map<AbstractView, AbstractAction> table;

  const AbstractAction& at(const AbstractView& v) const;
  bool total() const;  // all 8 views present
};

// Concrete two-robot transition function realizing the abstract table.
TransitionFunction lift_candidate(const TwoColorCandidate& c);

// ---------------------------------------------------------------------------
// Permitted-action sets, used by verify to check trace conformance.
// ---------------------------------------------------------------------------

struct PermittedActions {
  std::set<Color> next_colors;
  bool may_move = false;
  bool may_terminate = false;
};

const PermittedActions& permitted_actions(PaletteId palette, Color own);

}  // namespace gather::algos
