#include "mcf/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mcf/catalog.hpp"
#include "mcf/graph.hpp"
#include "mcf/induction.hpp"
#include "mcf/io.hpp"
#include "mcf/numeric.hpp"
#include "mcf/parallel.hpp"
#include "mcf/stochastic.hpp"
#include "mcf/thermo.hpp"

namespace mcf {

using nlohmann::json;

namespace {

// Raised for user-facing failures; carries the exit status.
struct CliFailure {
  int code;
  std::string message;
};

[[noreturn]] void domain_error(const std::string& msg) { throw CliFailure{kExitDomain, msg}; }

struct SourceOpts {
  std::string graph;
  std::string catalog;
  int dim = 0;
  bool unfolded = false;
  bool experimental = false;
};

void add_source(CLI::App* app, SourceOpts& s) {
  app->add_option("--graph", s.graph, "JSON graph file");
  app->add_option("--catalog", s.catalog, "catalog system name");
  app->add_option("--dim", s.dim, "catalog dimension");
  app->add_flag("--unfolded", s.unfolded, "brun(3) without the bullet identification");
  app->add_flag("--experimental", s.experimental, "allow experimental catalog dimensions");
}

struct Source {
  std::optional<SimplicialSystem> system;
  std::optional<NamedSystem> named;
  json echo;

  const SimplicialSystem& sys() const { return named ? named->system : *system; }
};

int default_dim(const std::string& name) {
  if (name == "gauss") return 2;
  if (name == "arnoux-rauzy") return 2;
  return 3;
}

Source load_source(const SourceOpts& s) {
  Source src;
  if (!s.graph.empty() == !s.catalog.empty()) domain_error("exactly one of --graph or --catalog is required");
  if (!s.graph.empty()) {
    src.system.emplace(validate_system(read_graph_file(s.graph)).system);
    src.echo = {{"graph", s.graph}};
  } else {
    const int dim = s.dim > 0 ? s.dim : default_dim(s.catalog);
    BuildOptions opts;
    opts.unfolded = s.unfolded;
    opts.experimental = s.experimental;
    src.named.emplace(build(s.catalog, dim, opts));
    src.echo = {{"catalog", s.catalog}, {"dim", dim}};
    if (s.unfolded) src.echo["unfolded"] = true;
    if (src.named->experimental) src.echo["experimental"] = true;
  }
  return src;
}

Vertex pick_vertex(const Source& src, const std::string& name) {
  const auto& sys = src.sys();
  if (!name.empty()) {
    Vertex v = sys.vertex_index(name);
    if (v < 0) domain_error("unknown vertex '" + name + "'");
    return v;
  }
  if (src.named)
    for (Vertex v = 0; v < sys.num_vertices(); ++v)
      if (src.named->section[static_cast<size_t>(v)]) return v;
  return 0;
}

std::vector<Label> parse_labels(const SimplicialSystem& sys, const std::string& list) {
  std::vector<Label> out;
  if (list.empty()) return out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    Label a = sys.label_index(tok);
    if (a < 0) domain_error("unknown label '" + tok + "'");
    out.push_back(a);
  }
  return out;
}

json label_names(const SimplicialSystem& sys, const std::vector<EdgeId>& path) {
  json a = json::array();
  for (EdgeId e : path) a.push_back(sys.label_name(sys.edge(e).label));
  return a;
}

json rationals(const std::vector<mpq_class>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

std::vector<mpq_class> parse_q(const SimplicialSystem& sys, const std::string& text) {
  if (text.empty()) return std::vector<mpq_class>(static_cast<size_t>(sys.num_labels()), mpq_class(1));
  auto q = parse_rational_list(text);
  if (static_cast<int>(q.size()) != sys.num_labels()) domain_error("--q needs one entry per label");
  for (const auto& x : q)
    if (x <= 0) domain_error("--q entries must be positive");
  return q;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct Output {
  std::string path;
  std::string format = "json";
  bool timing = false;
};

void add_output(CLI::App* app, Output& o, const std::vector<std::string>& formats = {"json"}) {
  app->add_option("--out", o.path, "write the result to a file");
  app->add_option("--format", o.format, "output format")->check(CLI::IsMember(formats));
  app->add_flag("--timing", o.timing, "include wall-clock runtime (output no longer byte-stable)");
}

void write_text(const Output& o, std::ostream& out, const std::string& text) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path);
  if (!f) domain_error("cannot write '" + o.path + "'");
  f << text;
}

json envelope(const std::string& command, json params, json result) {
  return json{{"tool", "mcf"}, {"version", kVersion}, {"command", command}, {"params", std::move(params)},
              {"result", std::move(result)}};
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// ---- subcommands ----

int cmd_validate(const SourceOpts& so, const Output& o, std::ostream& out) {
  json params = {{"source", nullptr}};
  json result;
  int code = kExitOk;
  try {
    Source src = load_source(so);
    params["source"] = src.echo;
    const auto& sys = src.sys();
    if (o.format == "dot") {
      std::ostringstream ss;
      write_dot(ss, sys);
      write_text(o, out, ss.str());
      return kExitOk;
    }
    json holes = json::array();
    for (Vertex v : sys.holes()) holes.push_back(sys.vertex_name(v));
    result = {{"valid", true},
              {"labels", sys.num_labels()},
              {"vertices", sys.num_vertices()},
              {"edges", sys.num_edges()},
              {"holes", holes},
              {"strongly_connected", is_strongly_connected(sys)}};
  } catch (const ValidationError& e) {
    result = {{"valid", false}, {"issues", e.issues()}};
    code = kExitDomain;
  }
  write_text(o, out, envelope("validate", params, result).dump(2) + "\n");
  return code;
}

int cmd_criterion(const SourceOpts& so, const Output& o, bool strict, std::ostream& out) {
  Source src = load_source(so);
  const auto& sys = src.sys();
  if (o.format == "dot") {
    std::ostringstream ss;
    write_dot(ss, sys);
    write_text(o, out, ss.str());
    return kExitOk;
  }
  const auto t0 = Clock::now();
  CriterionReport rep = check_non_degenerating(sys);
  json result = criterion_to_json(sys, rep);
  for (const auto& f : rep.scc_failures) result["replayed"].push_back(replay_scc_failure(sys, f));
  if (o.timing) result["runtime_seconds"] = seconds_since(t0);
  json params = {{"source", src.echo}, {"strict", strict}};
  write_text(o, out, envelope("criterion", params, result).dump(2) + "\n");
  return strict && !rep.passes ? kExitStrict : kExitOk;
}

struct WalkOpts {
  std::string start;
  std::string point;
  std::string q;
  std::vector<std::string> stops;
  size_t steps = 20;
  size_t max_steps = 10000;
  std::optional<std::uint64_t> seed;
  bool fast = false;
};

int cmd_walk(const SourceOpts& so, const WalkOpts& w, const Output& o, std::ostream& out) {
  Source src = load_source(so);
  const auto& sys = src.sys();
  const Vertex start = pick_vertex(src, w.start);
  if (!w.point.empty()) {
    // Induction orbit as JSON lines: a provenance header, then one line per step.
    ParamPoint p = make_point(sys, start, parse_rational_list(w.point));
    std::ostringstream ss;
    json params = {{"source", src.echo}, {"start", sys.vertex_name(start)}, {"point", rationals(p.lambda)}, {"steps", w.steps}};
    ss << json{{"tool", "mcf"}, {"version", kVersion}, {"command", "walk"}, {"params", params}}.dump() << "\n";
    std::string stop = to_string(StopReason::None);
    for (size_t k = 1; k <= w.steps; ++k) {
      StepRecord rec;
      try {
        p = step(sys, p, &rec);
      } catch (const InductionError& e) {
        stop = to_string(e.reason());
        break;
      }
      json winners = json::array();
      for (Label a = 0; a < sys.num_labels(); ++a)
        if (has_label(rec.winners, a)) winners.push_back(sys.label_name(a));
      ss << json{{"step", k},
                 {"edge_label", sys.label_name(sys.edge(rec.edge).label)},
                 {"loser", sys.label_name(rec.loser)},
                 {"winners", winners},
                 {"roof", to_string(rec.roof)},
                 {"vertex", sys.vertex_name(p.vertex)},
                 {"lambda", rationals(p.lambda)}}
                .dump()
         << "\n";
    }
    ss << json{{"stop", stop}}.dump() << "\n";
    write_text(o, out, ss.str());
    return kExitOk;
  }
  const auto q0 = parse_q(sys, w.q);
  std::vector<StoppingTime> stops;
  for (const auto& s : w.stops) stops.push_back(parse_stopping_time(s, sys, start));
  const std::uint64_t seed = resolve_seed(w.seed);
  Rng rng(seed);
  WalkOptions opt;
  opt.max_steps = w.max_steps;
  opt.fast = w.fast;
  WalkOutcome res = sample_walk(sys, start, q0, stops, rng, opt);
  json fired = json::object();
  for (size_t i = 0; i < stops.size(); ++i)
    fired[describe(stops[i], sys)] = res.fired_at[i] >= 0 ? json(res.fired_at[i]) : json(nullptr);
  json result = {{"path", label_names(sys, res.path)},
                 {"length", res.path.size()},
                 {"end_vertex", sys.vertex_name(res.path.empty() ? start : sys.edge(res.path.back()).to)},
                 {"fired_at", fired},
                 {"truncated", res.truncated},
                 {"hole", res.hole},
                 {"log_q", res.log_q}};
  if (!w.fast) result["q"] = rationals(res.q);
  json params = {{"source", src.echo}, {"start", sys.vertex_name(start)}, {"q0", rationals(q0)},
                 {"stops", w.stops}, {"max_steps", w.max_steps}, {"seed", seed}, {"fast", w.fast}};
  write_text(o, out, envelope("walk", params, result).dump(2) + "\n");
  return kExitOk;
}

struct SimOpts {
  std::string start;
  std::string q;
  std::string a, b;
  std::uint64_t trials = 10000;
  size_t max_steps = 10000;
  std::optional<std::uint64_t> seed;
  bool strict_order = false;
  bool exact = false;
};

int cmd_simulate(const SourceOpts& so, const SimOpts& s, const Output& o, std::ostream& out) {
  Source src = load_source(so);
  const auto& sys = src.sys();
  const Vertex start = pick_vertex(src, s.start);
  const auto q0 = parse_q(sys, s.q);
  StoppingTime a = parse_stopping_time(s.a, sys, start), b = parse_stopping_time(s.b, sys, start);
  const std::uint64_t seed = resolve_seed(s.seed);
  WalkOptions opt;
  opt.max_steps = s.max_steps;
  opt.fast = !s.exact;
  const auto t0 = Clock::now();
  OrderEstimate est = estimate_order_prob(sys, start, q0, a, b, s.trials, seed, opt, s.strict_order);
  json result = {{"event", describe(a, sys) + (s.strict_order ? " < " : " <= ") + describe(b, sys)},
                 {"trials", est.trials},
                 {"a_first", est.a_first},
                 {"b_first", est.b_first},
                 {"truncated", est.truncated},
                 {"holes", est.holes},
                 {"fired_a", est.fired_a},
                 {"fired_b", est.fired_b},
                 {"frequency", est.frequency},
                 {"stderr", est.stderr_},
                 {"frequency_upper", est.frequency_upper},
                 {"stderr_upper", est.stderr_upper}};
  if (o.timing) result["runtime_seconds"] = seconds_since(t0);
  json params = {{"source", src.echo}, {"start", sys.vertex_name(start)}, {"q0", rationals(q0)},
                 {"a", s.a}, {"b", s.b}, {"trials", s.trials}, {"max_steps", s.max_steps},
                 {"seed", seed}, {"strict_order", s.strict_order}, {"arithmetic", s.exact ? "exact" : "double"}};
  write_text(o, out, envelope("simulate", params, result).dump(2) + "\n");
  return kExitOk;
}

int cmd_measure(const SourceOpts& so, const std::string& start_name, const std::string& path_text,
                const std::string& q_text, const Output& o, std::ostream& out) {
  Source src = load_source(so);
  const auto& sys = src.sys();
  const Vertex start = pick_vertex(src, start_name);
  const auto q = parse_q(sys, q_text);
  std::vector<EdgeId> path;
  try {
    path = sys.path_from_labels(start, parse_labels(sys, path_text));
  } catch (const std::invalid_argument& e) {
    domain_error(e.what());
  }
  const mpq_class nu = cylinder_measure(q, sys, path);
  const mpq_class prob = path_probability(q, sys, path);
  json law = json::object();
  const auto p = edge_law(sys, start, q);
  for (size_t i = 0; i < p.size(); ++i) law[sys.label_name(sys.edge(sys.out_edges(start)[i]).label)] = to_string(p[i]);
  json result = {{"cylinder_measure", to_string(nu)},
                 {"cylinder_measure_value", nu.get_d()},
                 {"path_probability", to_string(prob)},
                 {"path_probability_value", prob.get_d()},
                 {"distortion", rationals(distort(sys, q, path))},
                 {"edge_law_at_start", law}};
  json params = {{"source", src.echo}, {"start", sys.vertex_name(start)}, {"path", label_names(sys, path)}, {"q", rationals(q)}};
  write_text(o, out, envelope("measure", params, result).dump(2) + "\n");
  return kExitOk;
}

int cmd_conjugacy(const SourceOpts& so, int trials, int steps, int bits, const std::optional<std::uint64_t>& seed_opt,
                  bool strict, const Output& o, std::ostream& out) {
  Source src = load_source(so);
  if (!src.named) domain_error("conjugacy needs --catalog");
  const std::uint64_t seed = resolve_seed(seed_opt);
  const auto t0 = Clock::now();
  ConjugacyReport rep = conjugacy_suite(*src.named, trials, steps, seed, bits);
  json per = json::array();
  for (const auto& t : rep.trials) {
    json j = {{"start", rationals(t.start)}, {"verdict", to_string(t.verdict)}, {"steps", t.steps_done}};
    if (t.first_disagreement >= 0) j["first_disagreement"] = t.first_disagreement;
    per.push_back(j);
  }
  json result = {{"agree", rep.agree}, {"disagree", rep.disagree}, {"ties", rep.ties},
                 {"exits", rep.exits}, {"tie_rate", rep.tie_rate}, {"trials", per}};
  if (o.timing) result["runtime_seconds"] = seconds_since(t0);
  json params = {{"source", src.echo}, {"trials", trials}, {"steps", steps}, {"bits", bits}, {"seed", seed}};
  write_text(o, out, envelope("conjugacy", params, result).dump(2) + "\n");
  return strict && rep.disagree > 0 ? kExitStrict : kExitOk;
}

struct PressureOpts {
  std::string base;
  std::string gamma;
  int L = 8;
  int n = 1;
  std::vector<double> bracket;
  double tol = 1e-10;
  bool restricted = false;
  bool standalone = false;
  int max_gamma = 16;
  std::string grid;  // lo:hi:count for csv output
};

struct PressureRun {
  InducedAlphabet alphabet;
  PressureEstimate estimate;
  PeriodicSpectrum spectrum;
  json echo;
};

std::vector<bool> restriction_of(const Source& src) {
  if (src.named && !src.named->restriction.empty()) return src.named->restriction;
  // Graph input: edges that do not enter a hole.
  const auto& sys = src.sys();
  std::vector<bool> keep(static_cast<size_t>(sys.num_edges()), true);
  for (const Edge& e : sys.edges())
    if (sys.is_hole(e.to)) keep[static_cast<size_t>(e.id)] = false;
  return keep;
}

std::vector<EdgeId> choose_gamma(const SimplicialSystem& sys, Vertex base, const PressureOpts& p,
                                 const std::vector<bool>& allowed) {
  if (!p.gamma.empty()) {
    try {
      return sys.path_from_labels(base, parse_labels(sys, p.gamma));
    } catch (const std::invalid_argument& e) {
      domain_error(e.what());
    }
  }
  auto g = find_unbordered_positive_loop(sys, base, p.max_gamma, allowed);
  if (!g) domain_error("no positive unbordered loop of length <= " + std::to_string(p.max_gamma) + " at the base vertex");
  return *g;
}

PressureRun run_pressure(const SimplicialSystem& sys, Vertex base, const std::vector<EdgeId>& gamma,
                         const PressureOpts& p, const std::vector<bool>& allowed) {
  PressureRun run;
  const MatrixSource source = p.standalone ? MatrixSource::Standalone : MatrixSource::Ambient;
  run.alphabet = build_induced_alphabet(sys, base, gamma, p.L, allowed, source);
  run.spectrum = periodic_spectrum(run.alphabet, p.n);
  const double lo = p.bracket.size() == 2 ? p.bracket[0] : 0.01;
  const double hi = p.bracket.size() == 2 ? p.bracket[1] : 2.0 * sys.num_labels();
  run.estimate = solve_kappa(run.spectrum, lo, hi, p.tol);
  run.estimate.max_length = p.L;
  return run;
}

json estimate_json(const PressureEstimate& e) {
  return json{{"kappa", e.kappa},
              {"letters", e.letters},
              {"n", e.n},
              {"L", e.max_length},
              {"bracket", {e.bracket_lo, e.bracket_hi}},
              {"pressure_at_bracket", {e.pressure_lo, e.pressure_hi}},
              {"pressure_at_root", e.pressure_at_root},
              {"tolerance", e.tolerance},
              {"iterations", e.iterations}};
}

int cmd_pressure(const SourceOpts& so, const PressureOpts& p, const Output& o, bool strict, std::ostream& out) {
  Source src = load_source(so);
  const auto& sys = src.sys();
  const Vertex base = pick_vertex(src, p.base);
  const std::vector<bool> allowed = p.restricted ? restriction_of(src) : std::vector<bool>{};
  const auto gamma = choose_gamma(sys, base, p, allowed);
  json params = {{"source", src.echo}, {"base", sys.vertex_name(base)}, {"gamma_star", label_names(sys, gamma)},
                 {"L", p.L}, {"n", p.n}, {"tolerance", p.tol}, {"restricted", p.restricted},
                 {"potential", p.standalone ? "different potential (standalone subgraph)" : "ambient roof"}};
  const auto t0 = Clock::now();
  if (o.format == "csv") {
    const MatrixSource source = p.standalone ? MatrixSource::Standalone : MatrixSource::Ambient;
    auto alphabet = build_induced_alphabet(sys, base, gamma, p.L, allowed, source);
    auto spec = periodic_spectrum(alphabet, p.n);
    double lo = 0, hi = 2.0 * sys.num_labels();
    int count = 41;
    if (!p.grid.empty()) {
      char c1, c2;
      std::istringstream gs(p.grid);
      if (!(gs >> lo >> c1 >> hi >> c2 >> count) || c1 != ':' || c2 != ':' || count < 2)
        domain_error("--grid expects lo:hi:count");
    }
    std::ostringstream ss;
    ss << "# mcf " << kVersion << " pressure " << params.dump() << "\n";
    ss << "kappa,log_Z,pressure\n";
    ss.precision(17);
    for (int i = 0; i < count; ++i) {
      const double k = lo + (hi - lo) * i / (count - 1);
      const double lz = partition_sum(spec, k);
      ss << k << "," << lz << "," << lz / p.n << "\n";
    }
    write_text(o, out, ss.str());
    return kExitOk;
  }
  json result;
  int code = kExitOk;
  try {
    PressureRun run = run_pressure(sys, base, gamma, p, allowed);
    result = estimate_json(run.estimate);
    if (run.estimate.kappa <= sys.num_labels()) result["hausdorff_bound"] = hausdorff_bound(run.estimate.kappa, sys.num_labels());
  } catch (const ThermoError& e) {
    result = {{"error", e.what()}};
    code = strict ? kExitStrict : kExitDomain;
  }
  if (o.timing) result["runtime_seconds"] = seconds_since(t0);
  write_text(o, out, envelope("pressure", params, result).dump(2) + "\n");
  return code;
}

int cmd_dimension(const SourceOpts& so, const PressureOpts& p, bool compare, const Output& o, bool strict,
                  std::ostream& out) {
  if (so.catalog != "arnoux-rauzy") domain_error("dimension supports --catalog arnoux-rauzy");
  Source src = load_source(so);
  const NamedSystem& ns = *src.named;
  const auto& sys = ns.system;
  const int d = ns.dim;
  const Vertex base = pick_vertex(src, p.base);
  const auto gamma = choose_gamma(sys, base, p, ns.restriction);
  std::vector<std::string> gamma_labels;
  for (EdgeId e : gamma) gamma_labels.push_back(sys.label_name(sys.edge(e).label));
  json params = {{"source", src.echo}, {"base", sys.vertex_name(base)}, {"gamma_star", gamma_labels},
                 {"L", p.L}, {"n", p.n}, {"tolerance", p.tol}, {"potential", "ambient roof"}};
  const auto t0 = Clock::now();
  json result;
  int code = kExitOk;
  try {
    PressureRun gasket = run_pressure(sys, base, gamma, p, ns.restriction);
    const double kappa = gasket.estimate.kappa;
    const double bound = hausdorff_bound(std::min(kappa, static_cast<double>(d + 1)), d + 1);
    result = estimate_json(gasket.estimate);
    result["dimension_bound"] = bound;
    result["ambient_dimension"] = d;
    result["strictly_below_ambient"] = bound < d;
    result["asymptotic_leading_term"] = asymptotic_gasket_bound(d);
    if (d == 2 || d == 3) {
      const double ref = d == 2 ? 1.825 : 2.7;
      result["reference_bound"] = ref;
      result["gap_to_reference"] = bound - ref;
    }
    if (compare) {
      NamedSystem amb = build_gasket_ambient(d);
      const Vertex abase = amb.system.vertex_index(sys.vertex_name(base));
      std::vector<Label> labels;
      for (EdgeId e : gamma) labels.push_back(sys.edge(e).label);
      PressureOpts ap = p;
      PressureRun full = run_pressure(amb.system, abase, amb.system.path_from_labels(abase, labels), ap, {});
      result["ambient_kappa"] = full.estimate.kappa;
      result["ambient_letters"] = full.estimate.letters;
      result["below_ambient_kappa"] = kappa < full.estimate.kappa;
      if (amb.experimental) result["ambient_experimental"] = true;
    }
    if (strict && !(bound < d)) code = kExitStrict;
  } catch (const ThermoError& e) {
    result = {{"error", e.what()}};
    code = strict ? kExitStrict : kExitDomain;
  }
  if (o.timing) result["runtime_seconds"] = seconds_since(t0);
  write_text(o, out, envelope("dimension", params, result).dump(2) + "\n");
  return code;
}

int cmd_catalog_list(const Output& o, std::ostream& out) {
  json list = json::array();
  for (const auto& e : catalog_entries())
    list.push_back({{"name", e.name}, {"min_dim", e.min_dim}, {"max_dim", e.max_dim}, {"note", e.note}});
  write_text(o, out, envelope("catalog list", json::object(), list).dump(2) + "\n");
  return kExitOk;
}

int cmd_catalog_emit(const std::string& name, int dim, const SourceOpts& so, const Output& o, std::ostream& out) {
  BuildOptions opts;
  opts.unfolded = so.unfolded;
  opts.experimental = so.experimental;
  NamedSystem ns = build(name, dim, opts);
  if (o.format == "dot") {
    std::ostringstream ss;
    write_dot(ss, ns.system, name);
    write_text(o, out, ss.str());
    return kExitOk;
  }
  json g = system_to_json(ns.system);
  json section = json::array();
  for (Vertex v = 0; v < ns.system.num_vertices(); ++v)
    if (ns.section[static_cast<size_t>(v)]) section.push_back(ns.system.vertex_name(v));
  g["section"] = section;
  g["generator"] = {{"tool", "mcf"}, {"version", kVersion}, {"catalog", name}, {"dim", dim}};
  write_text(o, out, g.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simplicial systems: criterion, walks, measures, pressure and catalog tools", "mcf"};
  app.set_version_flag("--version", std::string("mcf ") + kVersion);
  app.require_subcommand(1);
  bool strict = false;

  SourceOpts src;
  Output o;

  auto* validate = app.add_subcommand("validate", "check a graph file or catalog system");
  add_source(validate, src);
  add_output(validate, o, {"json", "dot"});

  auto* criterion = app.add_subcommand("criterion", "non-degeneracy criterion");
  add_source(criterion, src);
  add_output(criterion, o, {"json", "dot"});
  criterion->add_flag("--strict", strict, "exit 3 when the criterion fails");

  WalkOpts w;
  auto* walk = app.add_subcommand("walk", "induction orbit (--point) or one distortion walk");
  add_source(walk, src);
  add_output(walk, o);
  walk->add_option("--start", w.start, "start vertex name");
  walk->add_option("--point", w.point, "lambda at the start vertex, e.g. 1/2,1/3,1/6");
  walk->add_option("--steps", w.steps, "induction steps");
  walk->add_option("--q", w.q, "initial distortion (default all ones)");
  walk->add_option("--stop", w.stops, "stopping time, repeatable (win:1, jumpcoord:1:4, steps:10, ...)");
  walk->add_option("--max-steps", w.max_steps, "walk truncation");
  walk->add_option("--seed", w.seed, "RNG seed");
  walk->add_flag("--fast", w.fast, "double-precision distortion");

  SimOpts sim;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo frequency of {A <= B}");
  add_source(simulate, src);
  add_output(simulate, o);
  simulate->add_option("--start", sim.start, "start vertex name");
  simulate->add_option("--q", sim.q, "initial distortion");
  simulate->add_option("--a", sim.a, "stopping time A")->required();
  simulate->add_option("--b", sim.b, "stopping time B")->required();
  simulate->add_option("--trials", sim.trials, "number of walks");
  simulate->add_option("--max-steps", sim.max_steps, "walk truncation");
  simulate->add_option("--seed", sim.seed, "RNG seed");
  simulate->add_flag("--strict-order", sim.strict_order, "estimate {A < B} instead of {A <= B}");
  simulate->add_flag("--exact", sim.exact, "exact rational distortion (slow)");

  std::string m_start, m_path, m_q;
  auto* measure = app.add_subcommand("measure", "cylinder measure of a path");
  add_source(measure, src);
  add_output(measure, o);
  measure->add_option("--start", m_start, "start vertex name");
  measure->add_option("--path", m_path, "comma-separated labels");
  measure->add_option("--q", m_q, "distortion (default all ones)");

  int c_trials = 1000, c_steps = 50, c_bits = 256;
  std::optional<std::uint64_t> c_seed;
  auto* conj = app.add_subcommand("conjugacy", "compare first returns with the classical map");
  add_source(conj, src);
  add_output(conj, o);
  conj->add_option("--trials", c_trials, "random points");
  conj->add_option("--steps", c_steps, "reference steps per point");
  conj->add_option("--bits", c_bits, "dyadic precision")->check(CLI::Range(32, 4096));
  conj->add_option("--seed", c_seed, "RNG seed");
  conj->add_flag("--strict", strict, "exit 3 on any disagreement");

  PressureOpts p;
  auto add_pressure = [&](CLI::App* sub) {
    add_source(sub, src);
    sub->add_option("--base", p.base, "base vertex name");
    sub->add_option("--gamma", p.gamma, "gamma* as labels from the base vertex");
    sub->add_option("--L", p.L, "truncation length")->check(CLI::Range(0, 200));
    sub->add_option("--n", p.n, "period")->check(CLI::Range(1, 6));
    sub->add_option("--bracket", p.bracket, "kappa bracket lo hi")->expected(2)->delimiter(',');
    sub->add_option("--tol", p.tol, "bisection tolerance");
    sub->add_option("--max-gamma", p.max_gamma, "search bound for gamma*");
    sub->add_flag("--strict", strict, "exit 3 on bracket failure");
  };
  auto* pressure = app.add_subcommand("pressure", "solve the pressure equation for kappa");
  add_pressure(pressure);
  add_output(pressure, o, {"json", "csv"});
  pressure->add_flag("--restricted", p.restricted, "confine loops to the hole-free subgraph");
  pressure->add_flag("--standalone", p.standalone, "matrices from the subgraph's own out-labels");
  pressure->add_option("--grid", p.grid, "kappa grid lo:hi:count for csv output");

  bool compare = false;
  auto* dimension = app.add_subcommand("dimension", "Hausdorff dimension bound of the gasket");
  add_pressure(dimension);
  add_output(dimension, o);
  dimension->add_flag("--compare-ambient", compare, "also solve the hole-free ambient system");

  auto* catalog = app.add_subcommand("catalog", "list or emit catalog systems");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "names and dimensions");
  add_output(list, o);
  std::string e_name;
  int e_dim = 0;
  auto* emit = catalog->add_subcommand("emit", "write a catalog graph");
  emit->add_option("name", e_name, "system name")->required();
  emit->add_option("dim", e_dim, "dimension")->required();
  emit->add_flag("--unfolded", src.unfolded, "brun(3) without the bullet identification");
  emit->add_flag("--experimental", src.experimental, "allow experimental dimensions");
  add_output(emit, o, {"json", "dot"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitDomain;
  }

  try {
    if (*validate) return cmd_validate(src, o, out);
    if (*criterion) return cmd_criterion(src, o, strict, out);
    if (*walk) return cmd_walk(src, w, o, out);
    if (*simulate) return cmd_simulate(src, sim, o, out);
    if (*measure) return cmd_measure(src, m_start, m_path, m_q, o, out);
    if (*conj) return cmd_conjugacy(src, c_trials, c_steps, c_bits, c_seed, strict, o, out);
    if (*pressure) return cmd_pressure(src, p, o, strict, out);
    if (*dimension) return cmd_dimension(src, p, compare, o, strict, out);
    if (*list) return cmd_catalog_list(o, out);
    if (*emit) return cmd_catalog_emit(e_name, e_dim, src, o, out);
  } catch (const CliFailure& f) {
    err << "mcf: " << f.message << "\n";
    return f.code;
  } catch (const ValidationError& e) {
    err << "mcf: invalid system\n";
    for (const auto& i : e.issues()) err << "  " << i << "\n";
    return kExitDomain;
  } catch (const CatalogError& e) {
    err << "mcf: " << e.what() << " (see `mcf catalog list`)\n";
    return kExitDomain;
  } catch (const ThermoError& e) {
    err << "mcf: " << e.what() << "\n";
    return strict ? kExitStrict : kExitDomain;
  } catch (const std::exception& e) {
    err << "mcf: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitDomain;
}

}  // namespace mcf
