#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gather/geom.hpp"
#include "gather/model.hpp"
#include "gather/sched.hpp"

namespace gather::verify {

using geom::Point;
using geom::Scalar;
using model::Color;
using model::Configuration;
using model::PaletteId;

// Outcome of the gathering predicate on a final configuration.
struct GatherReport {
  bool gathered = false;  // all non-faulty robots share one exact position
  bool vacuous = false;   // zero non-faulty robots: vacuously true, flagged
  std::optional<Point> point;  // the common position when gathered
};

GatherReport gathered(const Configuration& final_cfg);

// Run-level metrics: epochs plus the structural parameters of the initial
// configuration that the epoch bounds are stated in (N robots, f faults,
// N1 interior robots, N2 non-corner boundary robots, ell convex layers).
struct RunMetrics {
  long epochs = 0;
  bool gathered = false;
  bool vacuous = false;
  std::optional<Point> gather_point;
  bool all_terminated = false;
  long robot_count = 0;     // N
  long faulty_count = 0;    // f, from the final configuration
  long interior_count = 0;  // N1: robots strictly inside the initial hull
  long boundary_count = 0;  // N2: robots on initial hull edges, not corners
  long initial_layers = 0;  // ell: convex layers of the initial positions
};

RunMetrics measure(const Configuration& initial, const sched::RunResult& run);

struct Violation {
  Scalar time{0};
  std::uint32_t robot = 0;
  std::string rule;  // "palette", "permitted-color", "permitted-move",
                     // "permitted-terminate", "move-crossing",
                     // "int-visible-area", "hull-monotonicity",
                     // "fault-finish-signal", "orphan-event"
  std::string detail;
};

struct MonitorReport {
  std::vector<Violation> violations;
  bool clean() const { return violations.empty(); }
};

// Replays the trace symbolically against the named algorithm's permitted
// behaviour. The initial configuration supplies the roster, start positions
// and start colors; everything else is reconstructed from the events.
// Checks per event:
//   (a) interior visible-area post-conditions on nonlinear MOVE1 relocations
//       (7-color Inner-To-Outer): the target still sees every robot that was
//       stationary and visible at the look instant;
//   (b) concurrent Boundary-To-Interior move segments (26-color) never cross
//       transversally (shared targets and endpoint touches are allowed);
//   (c) every color change / move / terminate conforms to the permitted-action
//       table of the joint-activation representative's previous color;
//   (d) a FAULT -> FAULT-FINISH signal (without termination) only fires when
//       the signalling robot's local-interior condition held at its look;
//   (e) hull monotonicity: move targets stay within the convex hull of the
//       initial positions and previously accepted exterior targets, unless
//       the move satisfies the exterior visible-area post-conditions
//       (strictly outside the visible hull, corner afterwards, full
//       visibility of stationary robots), in which case the target is
//       admitted into the hull.
MonitorReport monitor_trace(const Configuration& initial,
                            const sched::ExecutionTrace& trace,
                            PaletteId algorithm);

struct EpochBound {
  long bound = 0;
  bool pass = false;
};

// Frozen-constant epoch bounds: 4 (3-color, two robots), C*N (7-color),
// C*max{ell, f} + C0 (26-color). The constants were fitted once on the
// pinned calibration corpus in data/calibration/ and are frozen here.
EpochBound epoch_bound_check(const RunMetrics& metrics, PaletteId algorithm);

struct InstanceTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Brute-force onion peeling for up to 12 distinct points, independent of the
// production convex-layer code: a point lies on the current layer iff it is
// the only one left or some line through it and another remaining point has
// all remaining points on one closed side.
geom::LayerDecomposition oracle_layers(const std::vector<Point>& pts);

}  // namespace gather::verify
