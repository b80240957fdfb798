#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gather/sched.hpp"
#include "gather/verify.hpp"

namespace gather::cli {

using geom::Point;
using geom::Scalar;
using model::PaletteId;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One simulation job: algorithm, exact initial positions, activation policy,
// fault plan and epoch budget. Text format documented in docs/formats.md.
struct RunConfig {
  PaletteId algorithm = PaletteId::Three;
  std::vector<Point> initial;
  sched::PolicyKind policy = sched::PolicyKind::FullySync;
  std::uint64_t seed = 0;
  sched::FaultPlan faults;
  long budget = 400;
};

// Exact rational from "n", "n/d" or a finite decimal such as "-1.25"; every
// such string is representable exactly. Anything else (exponents, hex floats,
// empty) is rejected.
Scalar parse_scalar(const std::string& text);
std::string scalar_str(const Scalar& s);

RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_file(const std::string& path);
std::string serialize_run_config(const RunConfig& cfg);

model::Configuration initial_configuration(const RunConfig& cfg);

// Line-oriented trace file: a versioned header echoing the RunConfig, one
// event per line, epoch marks, and a footer with the RunMetrics and the
// monitor summary. Serialization is a deterministic function of its inputs.
struct TraceFile {
  RunConfig config;
  sched::ExecutionTrace trace;
  sched::Outcome outcome = sched::Outcome::BudgetExhausted;
  verify::RunMetrics metrics;
  std::size_t violation_count = 0;
};

std::string serialize_trace(const TraceFile& tf);
TraceFile parse_trace(std::istream& in);
TraceFile parse_trace_file(const std::string& path);

// Executes the config and assembles the full trace file (metrics + monitor).
TraceFile execute(const RunConfig& cfg);

// One static SVG per epoch mark: robot positions at that instant, color
// labels and the convex layers of the occupied points.
std::string render_svg(const TraceFile& tf, std::size_t epoch_index);

struct SweepRow {
  long n = 0;
  long f = 0;
  std::uint64_t seed = 0;
  long ell = 0;
  long epochs = 0;
  bool gathered = false;
  std::size_t violations = 0;
  bool terminated = false;
  bool bound_pass = false;
};

// Deterministic sweep family: for each (size, fault count, seed) generates a
// pseudo-random rational configuration, faults the first f robots mid-move,
// runs and verifies. Rows come back in specification order regardless of
// the number of worker threads.
struct SweepSpec {
  PaletteId algorithm = PaletteId::Seven;
  sched::PolicyKind policy = sched::PolicyKind::RandomFair;
  std::vector<long> sizes;
  std::vector<long> fault_counts;
  std::vector<std::uint64_t> seeds;
  long budget = 4000;
  bool collinear = false;  // generate collinear configurations instead
};

SweepSpec parse_sweep_spec(std::istream& in);

std::vector<Point> sweep_points(std::uint64_t seed, long n, bool collinear);
sched::FaultPlan sweep_faults(std::uint64_t seed, long n, long f);

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs = 1);
std::string sweep_table(const std::vector<SweepRow>& rows);

// Entry point used by the binary; returns the process exit code
// (0 success, 1 verification failure, 2 usage or parse error).
int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace gather::cli
