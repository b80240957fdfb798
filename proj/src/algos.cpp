#include "gather/algos.hpp"

#include "algos_internal.hpp"

namespace gather::algos {

namespace {

void require_palette(PaletteId id, Color own) {
  if (!model::palette_contains(id, own)) {
    throw PaletteMismatch("own color " + model::color_name(own) +
                          " is not in the algorithm's palette");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// 3-color algorithm for the (2,1)-mobility system
// ---------------------------------------------------------------------------

Action step_3color(Color own, const Snapshot& snap) {
  require_palette(PaletteId::Three, own);
  const Point& self = snap.self().position;
  bool collocated = snap.entries.size() == 1;
  // The colors at the other robot's position; when collocated this is the
  // self entry's color set (which also contains our own color).
  const std::set<Color>* other = nullptr;
  Point other_pos = self;
  if (collocated) {
    other = &snap.self().colors;
  } else {
    for (std::size_t i = 0; i < snap.entries.size(); ++i) {
      if (i != snap.self_index) {
        other = &snap.entries[i].colors;
        other_pos = snap.entries[i].position;
        break;
      }
    }
  }

  switch (own) {
    case Color::Off:
      if (!collocated) {
        if (other->count(Color::Off)) {
          Point mid = Scalar(1, 2) * (self + other_pos);
          return Action::move_to(Color::Move, mid);
        }
        if (other->count(Color::Move)) return Action::stay(Color::Off);
        if (other->count(Color::End)) {
          return Action::move_to(Color::End, other_pos);
        }
      }
      return Action::stay(Color::Off);
    case Color::Move:
      return Action::stay(Color::End);
    case Color::End:
      if (other->count(Color::Off) || other->count(Color::Move)) {
        return Action::stay(Color::End);
      }
      if (collocated && other->count(Color::End)) {
        return Action::stay(Color::End, /*term=*/true);
      }
      if (!collocated && other->count(Color::End)) {
        return Action::move_to(Color::End, other_pos);
      }
      return Action::stay(Color::End);
    default:
      return Action::stay(own);  // unreachable after the palette check
  }
}

// ---------------------------------------------------------------------------
// 2-color candidate lifting
// ---------------------------------------------------------------------------

const AbstractAction& TwoColorCandidate::at(const AbstractView& v) const {
  auto it = table.find(v);
  if (it == table.end()) throw IncompleteTable("missing view in candidate table");
  return it->second;
}

bool TwoColorCandidate::total() const {
  for (Color own : {Color::Black, Color::White}) {
    for (Color other : {Color::Black, Color::White}) {
      for (bool coll : {false, true}) {
        if (!table.count(AbstractView{own, other, coll})) return false;
      }
    }
  }
  return true;
}

TransitionFunction lift_candidate(const TwoColorCandidate& c) {
  if (!c.total()) throw IncompleteTable("candidate table is not total");
  TwoColorCandidate table = c;
  auto step = [table](Color own, const Snapshot& snap) -> Action {
    require_palette(PaletteId::TwoCandidate, own);
    const Point& self = snap.self().position;
    bool collocated = snap.entries.size() == 1;
    Color flipped = own == Color::Black ? Color::White : Color::Black;
    Color other_color;
    Point other_pos = self;
    if (collocated) {
      // The other robot shares our point; its color is the set element that
      // is not ours, or ours if the set is a singleton.
      other_color = snap.self().colors.count(flipped) ? flipped : own;
    } else {
      const model::SnapshotEntry& e =
          snap.entries[snap.self_index == 0 ? 1 : 0];
      other_color = *e.colors.begin();
      other_pos = e.position;
    }
    const AbstractAction& act = table.at({own, other_color, collocated});
    Color next = act.flip ? flipped : own;
    switch (act.move) {
      case AbstractMoveKind::NoMove:
        return Action::stay(next);
      case AbstractMoveKind::MoveToOther:
        return Action::move_to(next, other_pos);
      case AbstractMoveKind::MoveToParam: {
        Point t = self + act.lambda * (other_pos - self);
        return Action::move_to(next, t);
      }
    }
    return Action::stay(next);
  };
  return TransitionFunction{PaletteId::TwoCandidate, step};
}

// ---------------------------------------------------------------------------
// Permitted-action sets per color
// ---------------------------------------------------------------------------

namespace {

std::map<Color, PermittedActions> make_three() {
  std::map<Color, PermittedActions> t;
  t[Color::Off] = {{Color::Off, Color::Move, Color::End}, true, false};
  t[Color::Move] = {{Color::End}, false, false};
  t[Color::End] = {{Color::End}, true, true};
  return t;
}

std::map<Color, PermittedActions> make_seven() {
  std::map<Color, PermittedActions> t;
  t[Color::Off] = {{Color::Off, Color::Inner, Color::Outer, Color::Move2},
                   true, false};
  t[Color::Inner] = {{Color::Inner, Color::Outer, Color::Move1, Color::Fault,
                      Color::FaultFinish},
                     true, true};
  t[Color::Outer] = {{Color::Outer, Color::Move1, Color::Move2, Color::Off,
                      Color::FaultFinish},
                     true, true};
  t[Color::Move1] = {{Color::Move1, Color::Inner, Color::Outer, Color::Move2,
                      Color::Fault},
                     true, false};
  t[Color::Move2] = {{Color::Move2, Color::Outer, Color::Move1, Color::Off,
                      Color::Fault, Color::FaultFinish},
                     true, false};
  t[Color::Fault] = {{Color::Fault, Color::FaultFinish}, true, true};
  t[Color::FaultFinish] = {{Color::FaultFinish}, true, true};
  return t;
}

std::map<Color, PermittedActions> make_twenty_six() {
  std::map<Color, PermittedActions> t;
  t[Color::Off] = {{Color::Off, Color::Corner, Color::Boundary, Color::Interior,
                    Color::NonCorner, Color::Move4, Color::MoveToGather,
                    Color::Gather},
                   true, false};
  t[Color::Corner] = {{Color::Corner, Color::Intermediate, Color::ExpandingL,
                       Color::Move1, Color::Expanding, Color::MoveToGather,
                       Color::Gather},
                      true, false};
  t[Color::Boundary] = {{Color::Boundary, Color::Corner, Color::Interior,
                         Color::MoveToInterior, Color::MoveToGather,
                         Color::Gather},
                        true, false};
  t[Color::Interior] = {{Color::Interior, Color::Next, Color::NotNext,
                         Color::MoveToGather, Color::Gather},
                        true, false};
  t[Color::MoveToInterior] = {{Color::Interior, Color::Fault,
                               Color::MoveToGather, Color::Gather},
                              true, false};
  t[Color::Next] = {{Color::Next, Color::Eligible, Color::MoveToGather,
                     Color::Gather},
                    true, false};
  t[Color::NotNext] = {{Color::NotNext, Color::Interior, Color::MoveToGather,
                        Color::Gather},
                       true, false};
  t[Color::Eligible] = {{Color::Move1, Color::MoveToGather, Color::Gather},
                        true, false};
  t[Color::Move1] = {{Color::MoveEnded, Color::Eligible, Color::Fault,
                      Color::Move2, Color::MoveToGather, Color::Gather},
                     true, false};
  t[Color::Move2] = {{Color::Corner, Color::Fault, Color::MoveToGather,
                      Color::Gather},
                     true, false};
  t[Color::Fault] = {{Color::Fault, Color::FaultFinish, Color::MoveToGather,
                      Color::Gather},
                     true, false};
  t[Color::FaultFinish] = {{Color::FaultFinish, Color::FaultTerminate}, true,
                           true};
  t[Color::Intermediate] = {{Color::Intermediate, Color::Corner, Color::Move3,
                             Color::Move4, Color::MoveToGather, Color::Gather},
                            true, false};
  t[Color::Move3] = {{Color::Corner, Color::Move4, Color::Off,
                      Color::MoveToGather, Color::Gather},
                     true, false};
  t[Color::Move4] = {{Color::Terminate, Color::MoveEnded}, false, true};
  t[Color::MoveEnded] = {{Color::MoveEnded, Color::Terminate, Color::Move5,
                          Color::MoveToGather, Color::Gather},
                         true, true};
  t[Color::Move5] = {{Color::Move5, Color::MoveToCorner, Color::FaultFinish,
                      Color::MoveToGather, Color::Gather},
                     true, false};
  t[Color::MoveToCorner] = {{Color::Gather, Color::Terminate,
                             Color::FaultFinish, Color::MoveToGather},
                            true, true};
  t[Color::Gather] = {{Color::Gather, Color::Terminate}, true, true};
  t[Color::MoveToGather] = {{Color::Gather, Color::Fault1, Color::FaultFinish},
                            false, false};
  t[Color::Terminate] = {{Color::Terminate}, false, true};
  t[Color::FaultTerminate] = {{Color::FaultTerminate}, false, true};
  t[Color::Expanding] = {{Color::Corner, Color::Fault1, Color::MoveToGather,
                          Color::Gather},
                         true, false};
  t[Color::Fault1] = {{Color::Fault1}, false, false};
  t[Color::NonCorner] = {{Color::NonCorner, Color::Corner, Color::Boundary,
                          Color::Interior, Color::Gather, Color::MoveToGather},
                         true, false};
  t[Color::ExpandingL] = {{Color::ExpandingL, Color::Corner, Color::Fault1,
                           Color::MoveToGather},
                          true, false};
  return t;
}

std::map<Color, PermittedActions> make_two() {
  std::map<Color, PermittedActions> t;
  t[Color::Black] = {{Color::Black, Color::White}, true, false};
  t[Color::White] = {{Color::Black, Color::White}, true, false};
  return t;
}

}  // namespace

const PermittedActions& permitted_actions(PaletteId palette, Color own) {
  static const std::map<Color, PermittedActions> three = make_three();
  static const std::map<Color, PermittedActions> seven = make_seven();
  static const std::map<Color, PermittedActions> twenty_six = make_twenty_six();
  static const std::map<Color, PermittedActions> two = make_two();
  require_palette(palette, own);
  switch (palette) {
    case PaletteId::Three:
      return three.at(own);
    case PaletteId::Seven:
      return seven.at(own);
    case PaletteId::TwentySix:
      return twenty_six.at(own);
    case PaletteId::TwoCandidate:
      return two.at(own);
  }
  throw std::logic_error("unknown palette");
}

TransitionFunction make_algorithm(PaletteId palette) {
  switch (palette) {
    case PaletteId::Three:
      return {PaletteId::Three, step_3color};
    case PaletteId::Seven:
      return {PaletteId::Seven, step_7color};
    case PaletteId::TwentySix:
      return {PaletteId::TwentySix, step_26color};
    case PaletteId::TwoCandidate:
      throw std::invalid_argument(
          "two-color candidates need a table; use lift_candidate");
  }
  throw std::logic_error("unknown palette");
}

}  // namespace gather::algos
