#include "gather/cli.hpp"

#include <atomic>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "gather/adversary.hpp"
#include "gather/algos.hpp"

namespace gather::cli {

namespace {

using model::Color;
using sched::EventKind;
using sched::FaultTrigger;
using sched::PolicyKind;
using sched::TraceEvent;

[[noreturn]] void fail(const std::string& msg) { throw ParseError(msg); }

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

const std::map<std::string, PaletteId> kAlgoNames = {
    {"three", PaletteId::Three},
    {"seven", PaletteId::Seven},
    {"twentysix", PaletteId::TwentySix},
};

const std::map<std::string, PolicyKind> kPolicyNames = {
    {"fullysync", PolicyKind::FullySync},
    {"roundrobin", PolicyKind::RoundRobin},
    {"randomfair", PolicyKind::RandomFair},
    {"sequential", PolicyKind::SequentialAdversary},
};

template <typename T>
std::string name_of(const std::map<std::string, T>& names, T v) {
  for (const auto& [k, x] : names) {
    if (x == v) return k;
  }
  return "?";
}

long parse_long(const std::string& s) {
  std::size_t used = 0;
  long v = std::stol(s, &used);
  if (used != s.size()) fail("bad integer: " + s);
  return v;
}

std::uint64_t parse_u64(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = std::stoull(s, &used);
  if (used != s.size() || (!s.empty() && s[0] == '-')) fail("bad seed: " + s);
  return v;
}

// splitmix64, the project's deterministic generator for sweep families.
std::uint64_t mix(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

// ---------------------------------------------------------------------------
// Exact scalar strings
// ---------------------------------------------------------------------------

Scalar parse_scalar(const std::string& text) {
  if (text.empty()) fail("empty number");
  std::string s = text;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s = s.substr(1);
  }
  if (s.empty()) fail("bad number: " + text);
  auto all_digits = [](const std::string& d) {
    if (d.empty()) return false;
    for (char c : d) {
      if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
  };
  Scalar value;
  std::size_t slash = s.find('/');
  std::size_t dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den) || den == "0") {
      fail("bad fraction: " + text);
    }
    value = Scalar(mpz_class(num), mpz_class(den));
    value.canonicalize();
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || !all_digits(frac)) fail("bad decimal: " + text);
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    value = Scalar(mpz_class(whole) * scale + mpz_class(frac), scale);
    value.canonicalize();
  } else {
    if (!all_digits(s)) fail("bad number: " + text);
    value = Scalar(mpz_class(s));
  }
  return neg ? Scalar(-value) : value;
}

std::string scalar_str(const Scalar& s) { return s.get_str(); }

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

namespace {

void apply_config_line(RunConfig& cfg, const std::vector<std::string>& tok) {
  const std::string& key = tok[0];
  auto need = [&](std::size_t n) {
    if (tok.size() != n) fail("wrong arity for '" + key + "'");
  };
  if (key == "algorithm") {
    need(2);
    auto it = kAlgoNames.find(tok[1]);
    if (it == kAlgoNames.end()) fail("unknown algorithm: " + tok[1]);
    cfg.algorithm = it->second;
  } else if (key == "policy") {
    need(2);
    auto it = kPolicyNames.find(tok[1]);
    if (it == kPolicyNames.end()) fail("unknown policy: " + tok[1]);
    cfg.policy = it->second;
  } else if (key == "seed") {
    need(2);
    cfg.seed = parse_u64(tok[1]);
  } else if (key == "budget") {
    need(2);
    cfg.budget = parse_long(tok[1]);
    if (cfg.budget <= 0) fail("budget must be positive");
  } else if (key == "robot") {
    need(3);
    cfg.initial.push_back({parse_scalar(tok[1]), parse_scalar(tok[2])});
  } else if (key == "fault") {
    if (tok.size() < 4) fail("wrong arity for 'fault'");
    std::uint32_t id = static_cast<std::uint32_t>(parse_long(tok[1]));
    FaultTrigger trig;
    if (tok[2] == "at-activation") {
      need(4);
      trig.kind = FaultTrigger::Kind::AtActivation;
      trig.activation_index = static_cast<int>(parse_long(tok[3]));
    } else if (tok[2] == "at-time") {
      need(4);
      trig.kind = FaultTrigger::Kind::AtTime;
      trig.at_time = parse_scalar(tok[3]);
    } else if (tok[2] == "mid-move") {
      need(5);
      trig.kind = FaultTrigger::Kind::MidMove;
      trig.move_index = static_cast<int>(parse_long(tok[3]));
      trig.lambda = parse_scalar(tok[4]);
      if (trig.lambda < 0 || trig.lambda >= 1) fail("mid-move lambda not in [0,1)");
    } else {
      fail("unknown fault trigger: " + tok[2]);
    }
    cfg.faults.entries.push_back({id, trig});
  } else {
    fail("unknown config key: " + key);
  }
}

void validate(const RunConfig& cfg) {
  if (cfg.initial.empty()) fail("config has no robots");
  std::set<std::uint32_t> faulted;
  for (const auto& [id, trig] : cfg.faults.entries) {
    if (id >= cfg.initial.size()) fail("fault names an unknown robot");
    faulted.insert(id);
  }
  if (faulted.size() >= cfg.initial.size()) {
    fail("fault plan leaves no non-faulty robot (requires f < N)");
  }
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "gather-config" || tok[1] != "1") {
        fail("expected 'gather-config 1' header");
      }
      header = true;
      continue;
    }
    apply_config_line(cfg, tok);
  }
  if (!header) fail("empty config");
  validate(cfg);
  return cfg;
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config: " + path);
  return parse_run_config(in);
}

std::string serialize_run_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "gather-config 1\n";
  os << "algorithm " << name_of(kAlgoNames, cfg.algorithm) << "\n";
  os << "policy " << name_of(kPolicyNames, cfg.policy) << "\n";
  os << "seed " << cfg.seed << "\n";
  os << "budget " << cfg.budget << "\n";
  for (const auto& p : cfg.initial) {
    os << "robot " << scalar_str(p.x) << " " << scalar_str(p.y) << "\n";
  }
  for (const auto& [id, trig] : cfg.faults.entries) {
    os << "fault " << id << " ";
    switch (trig.kind) {
      case FaultTrigger::Kind::AtActivation:
        os << "at-activation " << trig.activation_index;
        break;
      case FaultTrigger::Kind::AtTime:
        os << "at-time " << scalar_str(trig.at_time);
        break;
      case FaultTrigger::Kind::MidMove:
        os << "mid-move " << trig.move_index << " " << scalar_str(trig.lambda);
        break;
    }
    os << "\n";
  }
  return os.str();
}

model::Configuration initial_configuration(const RunConfig& cfg) {
  model::Configuration out;
  for (std::size_t i = 0; i < cfg.initial.size(); ++i) {
    model::RobotState r;
    r.id = static_cast<std::uint32_t>(i);
    r.position = cfg.initial[i];
    r.color = model::palette_start_color(cfg.algorithm);
    out.robots.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trace files
// ---------------------------------------------------------------------------

namespace {

const std::map<std::string, EventKind> kKindNames = {
    {"look", EventKind::LookStart},       {"compute", EventKind::ComputeEnd},
    {"move-start", EventKind::MoveStart}, {"move-end", EventKind::MoveEnd},
    {"fault-halt", EventKind::FaultHalt}, {"terminate", EventKind::Terminate},
};

}  // namespace

std::string serialize_trace(const TraceFile& tf) {
  std::ostringstream os;
  os << "gather-trace 1\n";
  std::istringstream cfg(serialize_run_config(tf.config));
  std::string line;
  while (std::getline(cfg, line)) os << "c " << line << "\n";
  for (const TraceEvent& ev : tf.trace.events) {
    os << "e " << scalar_str(ev.time) << " " << ev.robot << " "
       << name_of(kKindNames, ev.kind) << " " << scalar_str(ev.position.x)
       << " " << scalar_str(ev.position.y) << " "
       << model::color_name(ev.color);
    if (ev.target) {
      os << " " << scalar_str(ev.target->x) << " " << scalar_str(ev.target->y);
    }
    os << "\n";
  }
  for (const Scalar& t : tf.trace.epoch_marks) {
    os << "k " << scalar_str(t) << "\n";
  }
  os << "f outcome "
     << (tf.outcome == sched::Outcome::AllTerminated ? "all-terminated"
                                                     : "budget-exhausted")
     << "\n";
  os << "f epochs " << tf.metrics.epochs << "\n";
  os << "f gathered " << (tf.metrics.gathered ? 1 : 0) << "\n";
  os << "f vacuous " << (tf.metrics.vacuous ? 1 : 0) << "\n";
  if (tf.metrics.gather_point) {
    os << "f gather-point " << scalar_str(tf.metrics.gather_point->x) << " "
       << scalar_str(tf.metrics.gather_point->y) << "\n";
  }
  os << "f robots " << tf.metrics.robot_count << "\n";
  os << "f faulty " << tf.metrics.faulty_count << "\n";
  os << "f interior " << tf.metrics.interior_count << "\n";
  os << "f boundary " << tf.metrics.boundary_count << "\n";
  os << "f layers " << tf.metrics.initial_layers << "\n";
  os << "f violations " << tf.violation_count << "\n";
  os << "end\n";
  return os.str();
}

TraceFile parse_trace(std::istream& in) {
  TraceFile tf;
  std::string line;
  bool header = false, ended = false;
  std::ostringstream cfg_text;
  while (std::getline(in, line)) {
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "gather-trace" || tok[1] != "1") {
        fail("expected 'gather-trace 1' header");
      }
      header = true;
      continue;
    }
    if (ended) fail("content after 'end'");
    const std::string& tag = tok[0];
    if (tag == "c") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        cfg_text << tok[i] << (i + 1 < tok.size() ? " " : "");
      }
      cfg_text << "\n";
    } else if (tag == "e") {
      if (tok.size() != 7 && tok.size() != 9) fail("bad event line: " + line);
      TraceEvent ev;
      ev.time = parse_scalar(tok[1]);
      ev.robot = static_cast<std::uint32_t>(parse_long(tok[2]));
      auto kit = kKindNames.find(tok[3]);
      if (kit == kKindNames.end()) fail("bad event kind: " + tok[3]);
      ev.kind = kit->second;
      ev.position = {parse_scalar(tok[4]), parse_scalar(tok[5])};
      auto col = model::color_from_name(tok[6]);
      if (!col) fail("bad color: " + tok[6]);
      ev.color = *col;
      if (tok.size() == 9) {
        ev.target = Point{parse_scalar(tok[7]), parse_scalar(tok[8])};
      }
      tf.trace.events.push_back(std::move(ev));
    } else if (tag == "k") {
      if (tok.size() != 2) fail("bad epoch mark: " + line);
      tf.trace.epoch_marks.push_back(parse_scalar(tok[1]));
    } else if (tag == "f") {
      if (tok.size() < 3) fail("bad footer line: " + line);
      const std::string& key = tok[1];
      if (key == "outcome") {
        tf.outcome = tok[2] == "all-terminated"
                         ? sched::Outcome::AllTerminated
                         : sched::Outcome::BudgetExhausted;
      } else if (key == "epochs") {
        tf.metrics.epochs = parse_long(tok[2]);
      } else if (key == "gathered") {
        tf.metrics.gathered = parse_long(tok[2]) != 0;
      } else if (key == "vacuous") {
        tf.metrics.vacuous = parse_long(tok[2]) != 0;
      } else if (key == "gather-point") {
        if (tok.size() != 4) fail("bad gather-point line");
        tf.metrics.gather_point = Point{parse_scalar(tok[2]), parse_scalar(tok[3])};
      } else if (key == "robots") {
        tf.metrics.robot_count = parse_long(tok[2]);
      } else if (key == "faulty") {
        tf.metrics.faulty_count = parse_long(tok[2]);
      } else if (key == "interior") {
        tf.metrics.interior_count = parse_long(tok[2]);
      } else if (key == "boundary") {
        tf.metrics.boundary_count = parse_long(tok[2]);
      } else if (key == "layers") {
        tf.metrics.initial_layers = parse_long(tok[2]);
      } else if (key == "violations") {
        tf.violation_count = static_cast<std::size_t>(parse_long(tok[2]));
      } else {
        fail("unknown footer key: " + key);
      }
    } else if (tag == "end") {
      ended = true;
    } else {
      fail("unknown trace line: " + line);
    }
  }
  if (!header || !ended) fail("truncated trace file");
  std::istringstream cfg_in(cfg_text.str());
  tf.config = parse_run_config(cfg_in);
  tf.metrics.all_terminated = tf.outcome == sched::Outcome::AllTerminated;
  return tf;
}

TraceFile parse_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open trace: " + path);
  return parse_trace(in);
}

TraceFile execute(const RunConfig& cfg) {
  model::Configuration initial = initial_configuration(cfg);
  auto policy = sched::make_policy({cfg.policy, cfg.seed, {}});
  sched::RunResult res =
      sched::run(initial, algos::make_algorithm(cfg.algorithm), *policy,
                 cfg.faults, cfg.budget);
  TraceFile tf;
  tf.config = cfg;
  tf.trace = std::move(res.trace);
  tf.outcome = res.outcome;
  sched::RunResult for_measure;
  for_measure.final = std::move(res.final);
  for_measure.outcome = tf.outcome;
  for_measure.epochs = res.epochs;
  for_measure.trace = tf.trace;
  tf.metrics = verify::measure(initial, for_measure);
  tf.violation_count =
      verify::monitor_trace(initial, tf.trace, cfg.algorithm).violations.size();
  return tf;
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

namespace {

// Positions of every robot at time t, replayed from the event stream with
// linear interpolation inside move intervals.
std::vector<std::pair<Point, Color>> positions_at(const TraceFile& tf,
                                                  const Scalar& t) {
  struct State {
    Point pos;
    Color color;
    std::optional<Scalar> t0;
    std::optional<Point> from;
  };
  std::map<std::uint32_t, State> st;
  model::Configuration initial = initial_configuration(tf.config);
  for (const auto& r : initial.robots) {
    st[r.id] = {r.position, r.color, std::nullopt, std::nullopt};
  }
  for (const TraceEvent& ev : tf.trace.events) {
    auto it = st.find(ev.robot);
    if (it == st.end()) continue;
    State& s = it->second;
    if (ev.time > t) {
      // A move in flight at t: interpolate between its start and this event.
      if (s.t0 && (ev.kind == EventKind::MoveEnd ||
                   ev.kind == EventKind::FaultHalt)) {
        Scalar a = (t - *s.t0) / (ev.time - *s.t0);
        s.pos = *s.from + a * (ev.position - *s.from);
        s.t0.reset();
      }
      continue;
    }
    s.pos = ev.position;
    if (ev.kind == EventKind::ComputeEnd) s.color = ev.color;
    if (ev.kind == EventKind::MoveStart) {
      s.t0 = ev.time;
      s.from = ev.position;
    }
    if (ev.kind == EventKind::MoveEnd || ev.kind == EventKind::FaultHalt) {
      s.t0.reset();
    }
  }
  std::vector<std::pair<Point, Color>> out;
  for (const auto& [id, s] : st) out.push_back({s.pos, s.color});
  return out;
}

double approx(const Scalar& s) { return s.get_d(); }

}  // namespace

std::string render_svg(const TraceFile& tf, std::size_t epoch_index) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" "
        "height=\"560\" viewBox=\"0 0 560 560\">\n";
  if (tf.trace.epoch_marks.empty() || epoch_index >= tf.trace.epoch_marks.size()) {
    os << "<!-- no epoch marks -->\n</svg>\n";
    return os.str();
  }
  const Scalar& t = tf.trace.epoch_marks[epoch_index];
  os << "<!-- epoch " << epoch_index << " at t=" << scalar_str(t) << " -->\n";
  std::vector<std::pair<Point, Color>> robots = positions_at(tf, t);

  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (const auto& [p, c] : robots) {
    minx = std::min(minx, approx(p.x));
    maxx = std::max(maxx, approx(p.x));
    miny = std::min(miny, approx(p.y));
    maxy = std::max(maxy, approx(p.y));
  }
  double span = std::max({maxx - minx, maxy - miny, 1e-9});
  auto X = [&](const Scalar& v) {
    return 30.0 + (approx(v) - minx) / span * 500.0;
  };
  auto Y = [&](const Scalar& v) {
    return 530.0 - (approx(v) - miny) / span * 500.0;
  };

  std::vector<Point> pts;
  for (const auto& [p, c] : robots) pts.push_back(p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  geom::LayerDecomposition layers = geom::convex_layers(pts);
  for (const auto& layer : layers.layers) {
    os << "<polygon points=\"";
    for (const auto& v : layer.vertices) {
      os << X(v.x) << "," << Y(v.y) << " ";
    }
    os << "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  }
  for (const auto& [p, c] : robots) {
    os << "<circle cx=\"" << X(p.x) << "\" cy=\"" << Y(p.y)
       << "\" r=\"5\" fill=\"#225\"/>\n";
    os << "<text x=\"" << X(p.x) + 7 << "\" y=\"" << Y(p.y) - 7
       << "\" font-size=\"11\">" << model::color_name(c) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

SweepSpec parse_sweep_spec(std::istream& in) {
  SweepSpec spec;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    std::vector<std::string> tok = split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (!header) {
      if (tok.size() != 2 || tok[0] != "gather-sweep" || tok[1] != "1") {
        fail("expected 'gather-sweep 1' header");
      }
      header = true;
      continue;
    }
    const std::string& key = tok[0];
    if (key == "algorithm") {
      auto it = kAlgoNames.find(tok.at(1));
      if (it == kAlgoNames.end()) fail("unknown algorithm: " + tok[1]);
      spec.algorithm = it->second;
    } else if (key == "policy") {
      auto it = kPolicyNames.find(tok.at(1));
      if (it == kPolicyNames.end()) fail("unknown policy: " + tok[1]);
      spec.policy = it->second;
    } else if (key == "budget") {
      spec.budget = parse_long(tok.at(1));
    } else if (key == "collinear") {
      spec.collinear = parse_long(tok.at(1)) != 0;
    } else if (key == "sizes" || key == "faults" || key == "seeds") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (key == "sizes") spec.sizes.push_back(parse_long(tok[i]));
        if (key == "faults") spec.fault_counts.push_back(parse_long(tok[i]));
        if (key == "seeds") spec.seeds.push_back(parse_u64(tok[i]));
      }
    } else {
      fail("unknown sweep key: " + key);
    }
  }
  if (!header) fail("empty sweep spec");
  if (spec.fault_counts.empty()) spec.fault_counts.push_back(0);
  if (spec.seeds.empty()) spec.seeds.push_back(1);
  return spec;
}

std::vector<Point> sweep_points(std::uint64_t seed, long n, bool collinear) {
  std::uint64_t state = seed * 0x100000001b3ULL + static_cast<std::uint64_t>(n);
  std::set<Point> s;
  while (static_cast<long>(s.size()) < n) {
    if (collinear) {
      Scalar x = geom::frac(static_cast<long>(mix(state) % 97) - 48,
                            1 + static_cast<long>(mix(state) % 3));
      s.insert({x, Scalar(0)});
    } else {
      Scalar x = geom::frac(static_cast<long>(mix(state) % 49) - 24,
                            1 + static_cast<long>(mix(state) % 4));
      Scalar y = geom::frac(static_cast<long>(mix(state) % 49) - 24,
                            1 + static_cast<long>(mix(state) % 4));
      s.insert({x, y});
    }
  }
  return {s.begin(), s.end()};
}

sched::FaultPlan sweep_faults(std::uint64_t seed, long n, long f) {
  sched::FaultPlan plan;
  std::uint64_t state = seed ^ 0x5bf03635ULL;
  for (long i = 0; i < f && i < n; ++i) {
    // Spread the faults over the roster and alternate adversarial triggers:
    // freezes at a later activation and mid-move freezes at varying fractions.
    std::uint32_t id = static_cast<std::uint32_t>((i * 2) % n);
    FaultTrigger trig;
    if (mix(state) % 2 == 0) {
      trig.kind = FaultTrigger::Kind::AtActivation;
      trig.activation_index = 1 + static_cast<int>(mix(state) % 3);
    } else {
      trig.kind = FaultTrigger::Kind::MidMove;
      trig.move_index = 1 + static_cast<int>(mix(state) % 2);
      trig.lambda = geom::frac(static_cast<long>(mix(state) % 4), 4);
    }
    bool dup = false;
    for (const auto& [other, t] : plan.entries) {
      if (other == id) dup = true;
    }
    if (dup) id = static_cast<std::uint32_t>(i);
    plan.entries.push_back({id, trig});
  }
  return plan;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int jobs) {
  struct Job {
    long n, f;
    std::uint64_t seed;
  };
  std::vector<Job> todo;
  for (long n : spec.sizes) {
    for (long f : spec.fault_counts) {
      if (f >= n) continue;
      for (std::uint64_t seed : spec.seeds) todo.push_back({n, f, seed});
    }
  }
  std::vector<SweepRow> rows(todo.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= todo.size()) return;
      const Job& job = todo[i];
      RunConfig cfg;
      cfg.algorithm = spec.algorithm;
      cfg.policy = spec.policy;
      cfg.seed = job.seed;
      cfg.budget = spec.budget;
      cfg.initial = sweep_points(job.seed, job.n, spec.collinear);
      cfg.faults = sweep_faults(job.seed, job.n, job.f);
      TraceFile tf = execute(cfg);
      SweepRow row;
      row.n = job.n;
      row.f = job.f;
      row.seed = job.seed;
      row.ell = tf.metrics.initial_layers;
      row.epochs = tf.metrics.epochs;
      row.gathered = tf.metrics.gathered;
      row.violations = tf.violation_count;
      row.terminated = tf.metrics.all_terminated;
      row.bound_pass =
          verify::epoch_bound_check(tf.metrics, spec.algorithm).pass;
      rows[i] = row;
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "n f seed ell epochs gathered violations terminated bound\n";
  for (const auto& r : rows) {
    os << r.n << " " << r.f << " " << r.seed << " " << r.ell << " " << r.epochs
       << " " << (r.gathered ? 1 : 0) << " " << r.violations << " "
       << (r.terminated ? 1 : 0) << " " << (r.bound_pass ? 1 : 0) << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Command dispatch
// ---------------------------------------------------------------------------

namespace {

struct Options {
  std::string command;
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<long> budget;
  std::optional<PolicyKind> policy;
  int jobs = 1;
  std::optional<int> bound;
};

Options parse_args(int argc, const char* const* argv) {
  Options opt;
  if (argc < 2) fail("usage: gather <run|sweep|refute|render|verify> ...");
  opt.command = argv[1];
  for (int i = 2; i < argc; ++i) {
    std::string a = argv[i];
    auto value = [&]() -> std::string {
      if (i + 1 >= argc) fail("missing value for " + a);
      return argv[++i];
    };
    if (a == "--config") {
      opt.config = value();
    } else if (a == "--out") {
      opt.out = value();
    } else if (a == "--seed") {
      opt.seed = parse_u64(value());
    } else if (a == "--budget") {
      opt.budget = parse_long(value());
    } else if (a == "--policy") {
      std::string v = value();
      auto it = kPolicyNames.find(v);
      if (it == kPolicyNames.end()) fail("unknown policy: " + v);
      opt.policy = it->second;
    } else if (a == "--jobs") {
      opt.jobs = static_cast<int>(parse_long(value()));
    } else if (a == "--bound") {
      opt.bound = static_cast<int>(parse_long(value()));
    } else if (!a.empty() && a[0] != '-' && opt.command == "refute" &&
               !opt.bound) {
      opt.bound = static_cast<int>(parse_long(a));
    } else {
      fail("unknown option: " + a);
    }
  }
  return opt;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write: " + path);
  out << content;
}

int cmd_run(const Options& opt, std::ostream& out) {
  RunConfig cfg = parse_run_config_file(opt.config);
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.budget) cfg.budget = *opt.budget;
  if (opt.policy) cfg.policy = *opt.policy;
  TraceFile tf = execute(cfg);
  std::string text = serialize_trace(tf);
  if (!opt.out.empty()) {
    write_file(opt.out, text);
  } else {
    out << text;
  }
  out << "epochs " << tf.metrics.epochs << " gathered "
      << (tf.metrics.gathered ? 1 : 0) << " violations " << tf.violation_count
      << "\n";
  bool ok = tf.outcome == sched::Outcome::AllTerminated &&
            tf.metrics.gathered && tf.violation_count == 0;
  return ok ? 0 : 1;
}

int cmd_sweep(const Options& opt, std::ostream& out) {
  std::ifstream in(opt.config);
  if (!in) fail("cannot open sweep spec: " + opt.config);
  SweepSpec spec = parse_sweep_spec(in);
  std::vector<SweepRow> rows = run_sweep(spec, opt.jobs);
  std::string table = sweep_table(rows);
  out << table;
  if (!opt.out.empty()) write_file(opt.out, table);
  for (const auto& r : rows) {
    if (!r.terminated || !r.gathered || r.violations != 0 || !r.bound_pass) {
      return 1;
    }
  }
  return 0;
}

int cmd_refute(const Options& opt, std::ostream& out) {
  if (!opt.bound || *opt.bound < 1) fail("refute needs a bound >= 1");
  namespace adv = gather::adversary;
  adv::CandidateStream stream = adv::enumerate_candidates(*opt.bound);
  std::array<std::uint8_t, 8> digits;
  int li;
  std::map<std::array<int, 5>, std::pair<std::size_t, std::size_t>> cores;
  long candidates = 0;
  std::ostringstream report;
  report << "core prefix loop fault\n";
  while (stream.next_encoded(digits, li)) {
    ++candidates;
    // The refutation depends only on the four apart-view entries, plus lambda
    // when one of them is a move-to-parameter.
    std::array<int, 5> key{};
    bool has_param = false;
    for (int v = 0; v < 8; v += 2) {
      int d = digits[static_cast<std::size_t>(v)];
      key[static_cast<std::size_t>(v / 2)] = d;
      if (d >= 4) has_param = true;
    }
    key[4] = has_param ? li : -1;
    auto [it, fresh] = cores.try_emplace(key, 0, 0);
    if (!fresh) continue;
    algos::TwoColorCandidate cand = stream.materialize(digits, li);
    adv::NonGatheringCertificate cert = adv::refute(cand);
    adv::ReplayReport rep = adv::replay_certificate(cert, 10);
    if (!rep.ok || rep.gathered) {
      out << "replay failure: " << rep.detail << "\n";
      return 1;
    }
    it->second = {cert.prefix_moves.size(), cert.loop_moves.size()};
    report << cores.size() - 1 << " " << cert.prefix_moves.size() << " "
           << cert.loop_moves.size() << " " << (cert.uses_fault ? 1 : 0)
           << "\n";
  }
  report << "candidates " << candidates << " cores " << cores.size()
         << " gaps 0\n";
  out << report.str();
  if (!opt.out.empty()) write_file(opt.out, report.str());
  return 0;
}

int cmd_render(const Options& opt, std::ostream& out) {
  TraceFile tf = parse_trace_file(opt.config);
  std::string prefix = opt.out.empty() ? "frame" : opt.out;
  if (tf.trace.epoch_marks.empty()) {
    write_file(prefix + "-header.svg", render_svg(tf, 0));
    out << "wrote " << prefix << "-header.svg\n";
    return 0;
  }
  for (std::size_t i = 0; i < tf.trace.epoch_marks.size(); ++i) {
    std::ostringstream name;
    name << prefix << "-" << i << ".svg";
    write_file(name.str(), render_svg(tf, i));
  }
  out << "wrote " << tf.trace.epoch_marks.size() << " frames\n";
  return 0;
}

int cmd_verify(const Options& opt, std::ostream& out) {
  TraceFile stored = parse_trace_file(opt.config);
  TraceFile fresh = execute(stored.config);
  std::string got = serialize_trace(fresh);
  std::string want = serialize_trace(stored);
  if (got != want) {
    out << "trace does not replay identically\n";
    return 1;
  }
  bool ok = fresh.outcome == sched::Outcome::AllTerminated &&
            fresh.metrics.gathered && fresh.violation_count == 0;
  out << "replay ok; epochs " << fresh.metrics.epochs << " gathered "
      << (fresh.metrics.gathered ? 1 : 0) << " violations "
      << fresh.violation_count << "\n";
  return ok ? 0 : 1;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  try {
    Options opt = parse_args(argc, argv);
    if (opt.command != "refute" && opt.config.empty()) {
      fail("missing --config");
    }
    if (opt.command == "run") return cmd_run(opt, out);
    if (opt.command == "sweep") return cmd_sweep(opt, out);
    if (opt.command == "refute") return cmd_refute(opt, out);
    if (opt.command == "render") return cmd_render(opt, out);
    if (opt.command == "verify") return cmd_verify(opt, out);
    fail("unknown command: " + opt.command);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace gather::cli
