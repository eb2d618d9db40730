#include "mcf/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mcf/numeric.hpp"
#include "mcf/parallel.hpp"

namespace mcf {

std::vector<mpq_class> edge_law(const SimplicialSystem& system, Vertex v, const std::vector<mpq_class>& q) {
  const auto& outs = system.out_edges(v);
  mpq_class total = 0;
  for (EdgeId e : outs) total += q[static_cast<size_t>(system.edge(e).label)];
  std::vector<mpq_class> p;
  p.reserve(outs.size());
  for (EdgeId e : outs) p.push_back(q[static_cast<size_t>(system.edge(e).label)] / total);
  return p;
}

std::vector<double> edge_law(const SimplicialSystem& system, Vertex v, const std::vector<double>& q) {
  const auto& outs = system.out_edges(v);
  double total = 0;
  for (EdgeId e : outs) total += q[static_cast<size_t>(system.edge(e).label)];
  std::vector<double> p;
  p.reserve(outs.size());
  for (EdgeId e : outs) p.push_back(q[static_cast<size_t>(system.edge(e).label)] / total);
  return p;
}

std::vector<mpq_class> distort(const SimplicialSystem& system, std::vector<mpq_class> q, const std::vector<EdgeId>& path) {
  system.check_path(path);
  for (EdgeId e : path) {
    const Edge& ed = system.edge(e);
    mpq_class add = 0;
    for (EdgeId o : system.out_edges(ed.from)) {
      Label w = system.edge(o).label;
      if (w != ed.label) add += q[static_cast<size_t>(w)];
    }
    q[static_cast<size_t>(ed.label)] += add;
  }
  return q;
}

mpq_class cylinder_measure(const std::vector<mpq_class>& q, const SimplicialSystem& system,
                           const std::vector<EdgeId>& path) {
  if (static_cast<int>(q.size()) != system.num_labels()) throw std::invalid_argument("distortion size mismatch");
  auto qm = distort(system, q, path);
  mpq_class denom = 1;
  for (int k = 2; k <= system.num_labels(); ++k) denom *= k;
  for (const auto& x : qm) {
    if (x <= 0) throw std::invalid_argument("distortion must be positive");
    denom *= x;
  }
  return 1 / denom;
}

mpq_class path_probability(const std::vector<mpq_class>& q, const SimplicialSystem& system,
                           const std::vector<EdgeId>& path) {
  return cylinder_measure(q, system, path) / cylinder_measure(q, system, {});
}

bool is_balanced(const std::vector<mpq_class>& q, LabelMask lambda, const mpq_class& K) {
  if (lambda == 0) throw std::invalid_argument("empty label subset");
  mpq_class mx = *std::max_element(q.begin(), q.end());
  bool first = true;
  mpq_class mn;
  for (size_t a = 0; a < q.size(); ++a)
    if (has_label(lambda, static_cast<Label>(a)) && (first || q[a] < mn)) {
      mn = q[a];
      first = false;
    }
  return mx < K * mn;
}

std::vector<std::int64_t> sample_simplex_integers(Rng& rng, int n, int bits) {
  if (bits < 32 || bits > 62) throw std::invalid_argument("precision must be between 32 and 62 bits");
  if (n < 2) throw std::invalid_argument("simplex dimension too small");
  const std::int64_t total = std::int64_t{1} << bits;
  std::vector<std::int64_t> cuts(static_cast<size_t>(n + 1)), out(static_cast<size_t>(n));
  while (true) {
    cuts[0] = 0;
    cuts[static_cast<size_t>(n)] = total;
    for (int i = 1; i < n; ++i) cuts[static_cast<size_t>(i)] = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total) + 1));
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      out[static_cast<size_t>(i)] = cuts[static_cast<size_t>(i + 1)] - cuts[static_cast<size_t>(i)];
      if (out[static_cast<size_t>(i)] == 0) ok = false;
    }
    if (ok) {
      auto sorted = out;
      std::sort(sorted.begin(), sorted.end());
      ok = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    }
    if (ok) return out;
  }
}

std::vector<mpq_class> sample_simplex_point(Rng& rng, int n, int bits) {
  if (bits <= 62) {
    auto ints = sample_simplex_integers(rng, n, bits);
    mpz_class den = 1;
    den <<= bits;
    std::vector<mpq_class> out;
    out.reserve(ints.size());
    for (auto x : ints) {
      mpq_class q{mpz_class(static_cast<signed long>(x)), den};
      q.canonicalize();
      out.push_back(q);
    }
    return out;
  }
  if (bits > 4096) throw std::invalid_argument("precision must be at most 4096 bits");
  if (n < 2) throw std::invalid_argument("simplex dimension too small");
  // Same spacing construction with big cut points drawn from 64-bit words.
  mpz_class total = 1;
  total <<= bits;
  const int words = (bits + 63) / 64;
  auto draw = [&] {
    mpz_class z = 0;
    for (int w = 0; w < words; ++w) {
      z <<= 64;
      const std::uint64_t u = rng.next_u64();
      z += mpz_class(static_cast<unsigned long>(u >> 32)) * mpz_class(4294967296ul) + mpz_class(static_cast<unsigned long>(u & 0xffffffffu));
    }
    mpz_fdiv_r_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    return z;
  };
  std::vector<mpz_class> cuts(static_cast<size_t>(n + 1)), gaps(static_cast<size_t>(n));
  while (true) {
    cuts[0] = 0;
    cuts[static_cast<size_t>(n)] = total;
    for (int i = 1; i < n; ++i) cuts[static_cast<size_t>(i)] = draw();
    std::sort(cuts.begin() + 1, cuts.end() - 1);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      gaps[static_cast<size_t>(i)] = cuts[static_cast<size_t>(i + 1)] - cuts[static_cast<size_t>(i)];
      if (gaps[static_cast<size_t>(i)] == 0) ok = false;
    }
    auto sorted = gaps;
    std::sort(sorted.begin(), sorted.end());
    if (ok && std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end()) break;
  }
  std::vector<mpq_class> out;
  for (const auto& g : gaps) {
    mpq_class q{g, total};
    q.canonicalize();
    out.push_back(q);
  }
  return out;
}

// ---- stopping times ----

StoppingTime StoppingTime::win(Label a) {
  StoppingTime s;
  s.kind = Kind::Win;
  s.label = a;
  return s;
}
StoppingTime StoppingTime::lose(Label a) {
  StoppingTime s;
  s.kind = Kind::Lose;
  s.label = a;
  return s;
}
StoppingTime StoppingTime::jump(const mpq_class& tau) {
  StoppingTime s;
  s.kind = Kind::Jump;
  s.tau = tau;
  return s;
}
StoppingTime StoppingTime::jump_coord(Label a, const mpq_class& tau) {
  StoppingTime s;
  s.kind = Kind::JumpCoord;
  s.label = a;
  s.tau = tau;
  return s;
}
StoppingTime StoppingTime::escape(LabelMask lambda, bool prose_variant) {
  StoppingTime s;
  s.kind = Kind::Escape;
  s.set = lambda;
  s.prose_variant = prose_variant;
  return s;
}
StoppingTime StoppingTime::min_max(LabelMask lambda) {
  StoppingTime s;
  s.kind = Kind::MinMax;
  s.set = lambda;
  return s;
}
StoppingTime StoppingTime::suffix(std::vector<EdgeId> pattern) {
  StoppingTime s;
  s.kind = Kind::SuffixPattern;
  s.pattern = std::move(pattern);
  return s;
}
StoppingTime StoppingTime::leave(std::vector<bool> subgraph_edges) {
  StoppingTime s;
  s.kind = Kind::LeaveSubgraph;
  s.subgraph = std::move(subgraph_edges);
  return s;
}
StoppingTime StoppingTime::step_count(size_t n) {
  StoppingTime s;
  s.kind = Kind::StepCount;
  s.steps = n;
  return s;
}

namespace {

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

Label need_label(const SimplicialSystem& sys, const std::string& name) {
  Label a = sys.label_index(name);
  if (a < 0) throw std::invalid_argument("unknown label '" + name + "'");
  return a;
}

LabelMask need_set(const SimplicialSystem& sys, const std::string& list) {
  LabelMask m = 0;
  for (const auto& n : split(list, ',')) m |= 1u << need_label(sys, n);
  return m;
}

}  // namespace

StoppingTime parse_stopping_time(std::string_view text, const SimplicialSystem& system, Vertex start) {
  auto parts = split(text, ':');
  const std::string& k = parts[0];
  auto arity = [&](size_t n) {
    if (parts.size() != n) throw std::invalid_argument("malformed stopping time '" + std::string(text) + "'");
  };
  if (k == "win") return arity(2), StoppingTime::win(need_label(system, parts[1]));
  if (k == "lose") return arity(2), StoppingTime::lose(need_label(system, parts[1]));
  if (k == "jump") return arity(2), StoppingTime::jump(parse_rational(parts[1]));
  if (k == "jumpcoord") return arity(3), StoppingTime::jump_coord(need_label(system, parts[1]), parse_rational(parts[2]));
  if (k == "escape") {
    if (parts.size() == 3 && parts[2] == "prose") return StoppingTime::escape(need_set(system, parts[1]), true);
    return arity(2), StoppingTime::escape(need_set(system, parts[1]));
  }
  if (k == "minmax") return arity(2), StoppingTime::min_max(need_set(system, parts[1]));
  if (k == "suffix") {
    arity(2);
    std::vector<Label> labels;
    for (const auto& n : split(parts[1], ',')) labels.push_back(need_label(system, n));
    return StoppingTime::suffix(system.path_from_labels(start, labels));
  }
  if (k == "steps") return arity(2), StoppingTime::step_count(static_cast<size_t>(std::stoull(parts[1])));
  throw std::invalid_argument("unknown stopping time '" + std::string(text) + "'");
}

std::string describe(const StoppingTime& s, const SimplicialSystem& system) {
  using K = StoppingTime::Kind;
  auto set_str = [&](LabelMask m) {
    std::string out;
    for (Label a = 0; a < system.num_labels(); ++a)
      if (has_label(m, a)) out += (out.empty() ? "" : ",") + system.label_name(a);
    return out;
  };
  switch (s.kind) {
    case K::Win: return "win:" + system.label_name(s.label);
    case K::Lose: return "lose:" + system.label_name(s.label);
    case K::Jump: return "jump:" + s.tau.get_str();
    case K::JumpCoord: return "jumpcoord:" + system.label_name(s.label) + ":" + s.tau.get_str();
    case K::Escape: return "escape:" + set_str(s.set) + (s.prose_variant ? ":prose" : "");
    case K::MinMax: return "minmax:" + set_str(s.set);
    case K::SuffixPattern: {
      std::string out = "suffix:";
      for (size_t i = 0; i < s.pattern.size(); ++i)
        out += (i ? "," : "") + system.label_name(system.edge(s.pattern[i]).label);
      return out;
    }
    case K::LeaveSubgraph: return "leave-subgraph";
    case K::StepCount: return "steps:" + std::to_string(s.steps);
  }
  return "?";
}

namespace {

// Exact running distortion.
struct ExactQ {
  using Value = mpq_class;
  std::vector<mpq_class> q, q0;

  explicit ExactQ(const std::vector<mpq_class>& init) : q(init), q0(init) {}
  void apply(const SimplicialSystem& sys, const Edge& e) {
    mpq_class add = 0;
    for (EdgeId o : sys.out_edges(e.from)) {
      Label w = sys.edge(o).label;
      if (w != e.label) add += q[static_cast<size_t>(w)];
    }
    q[static_cast<size_t>(e.label)] += add;
  }
  EdgeId sample(const SimplicialSystem& sys, Vertex v, Rng& rng) const {
    const auto& outs = sys.out_edges(v);
    if (outs.size() == 1) return outs[0];
    auto p = edge_law(sys, v, q);
    const double u = rng.uniform();
    double cum = 0;
    for (size_t i = 0; i + 1 < outs.size(); ++i) {
      cum += p[i].get_d();
      if (u < cum) return outs[i];
    }
    return outs.back();
  }
  Value cur(Label a) const { return q[static_cast<size_t>(a)]; }
  Value init(Label a) const { return q0[static_cast<size_t>(a)]; }
  static Value scaled(const Value& v, const mpq_class& tau) { return v * tau; }
  std::vector<double> logs() const {
    std::vector<double> out;
    for (const auto& x : q) out.push_back(log_of(x));
    return out;
  }
};

// Double-precision distortion; values are natural logs so growth never overflows.
struct FastQ {
  using Value = double;
  std::vector<double> q;       // current / exp(shift)
  double shift = 0;
  std::vector<double> log_q0;

  explicit FastQ(const std::vector<mpq_class>& init) {
    double mx = -std::numeric_limits<double>::infinity();
    for (const auto& x : init) {
      log_q0.push_back(log_of(x));
      mx = std::max(mx, log_q0.back());
    }
    shift = mx;
    for (double l : log_q0) q.push_back(std::exp(l - shift));
  }
  void apply(const SimplicialSystem& sys, const Edge& e) {
    double add = 0;
    for (EdgeId o : sys.out_edges(e.from)) {
      Label w = sys.edge(o).label;
      if (w != e.label) add += q[static_cast<size_t>(w)];
    }
    double& t = q[static_cast<size_t>(e.label)];
    t += add;
    if (t > 1e150) {
      const double d = t;  // t aliases an entry of q
      for (auto& x : q) x /= d;
      shift += std::log(d);
    }
  }
  EdgeId sample(const SimplicialSystem& sys, Vertex v, Rng& rng) const {
    const auto& outs = sys.out_edges(v);
    if (outs.size() == 1) return outs[0];
    double total = 0;
    for (EdgeId e : outs) total += q[static_cast<size_t>(sys.edge(e).label)];
    const double u = rng.uniform() * total;
    double cum = 0;
    for (size_t i = 0; i + 1 < outs.size(); ++i) {
      cum += q[static_cast<size_t>(sys.edge(outs[i]).label)];
      if (u < cum) return outs[i];
    }
    return outs.back();
  }
  Value cur(Label a) const { return std::log(q[static_cast<size_t>(a)]) + shift; }
  Value init(Label a) const { return log_q0[static_cast<size_t>(a)]; }
  static Value scaled(const Value& v, const mpq_class& tau) { return v + log_of(tau); }
  std::vector<double> logs() const {
    std::vector<double> out;
    for (double x : q) out.push_back(std::log(x) + shift);
    return out;
  }
};

template <class Q, class Get>
typename Q::Value extremum(const Q& q, Get get, LabelMask mask, int n, bool want_max, bool* empty) {
  typename Q::Value best{};
  bool first = true;
  for (Label a = 0; a < n; ++a) {
    if (!has_label(mask, a)) continue;
    auto v = (q.*get)(a);
    if (first || (want_max ? v > best : v < best)) best = v;
    first = false;
  }
  *empty = first;
  return best;
}

template <class Q>
bool holds(const StoppingTime& s, const SimplicialSystem& sys, const std::vector<EdgeId>& path, const Q& q) {
  using K = StoppingTime::Kind;
  const int n = sys.num_labels();
  const LabelMask all = sys.full_mask();
  bool e1 = false, e2 = false;
  switch (s.kind) {
    case K::StepCount: return path.size() == s.steps;
    case K::Win:
    case K::Lose: {
      if (path.empty()) return false;
      const Edge& e = sys.edge(path.back());
      if (sys.out_degree(e.from) < 2) return false;
      if (s.kind == K::Lose) return e.label == s.label;
      return e.label != s.label && has_label(sys.out_labels(e.from), s.label);
    }
    case K::Jump: {
      auto cur = extremum(q, &Q::cur, all, n, true, &e1);
      auto ini = extremum(q, &Q::init, all, n, true, &e2);
      return cur >= Q::scaled(ini, s.tau);
    }
    case K::JumpCoord: return q.cur(s.label) >= Q::scaled(q.init(s.label), s.tau);
    case K::Escape: {
      auto out = extremum(q, &Q::cur, all & ~s.set, n, true, &e1);
      if (e1) return false;
      auto in = s.prose_variant ? extremum(q, &Q::init, s.set, n, false, &e2) : extremum(q, &Q::cur, s.set, n, false, &e2);
      return out >= in;
    }
    case K::MinMax: {
      auto in = extremum(q, &Q::cur, s.set, n, false, &e1);
      auto ini = extremum(q, &Q::init, all, n, true, &e2);
      return in >= ini;
    }
    case K::SuffixPattern:
      return !s.pattern.empty() && path.size() >= s.pattern.size() &&
             std::equal(s.pattern.begin(), s.pattern.end(), path.end() - static_cast<long>(s.pattern.size()));
    case K::LeaveSubgraph:
      return !path.empty() && !s.subgraph.at(static_cast<size_t>(path.back()));
  }
  return false;
}

template <class Q>
WalkOutcome run_walk(const SimplicialSystem& sys, Vertex start, const std::vector<mpq_class>& q0,
                     const std::vector<StoppingTime>& stops, Rng& rng, const WalkOptions& opt) {
  Q q(q0);
  WalkOutcome out;
  out.fired_at.assign(stops.size(), -1);
  auto check = [&](long idx) {
    bool halt = false;
    for (size_t i = 0; i < stops.size(); ++i) {
      if (out.fired_at[i] >= 0) continue;
      if (holds(stops[i], sys, out.path, q)) {
        out.fired_at[i] = idx;
        if (opt.halt_on.empty() || opt.halt_on[i]) halt = true;
      }
    }
    return halt;
  };
  Vertex v = start;
  bool halted = check(0);
  while (!halted) {
    if (out.path.size() >= opt.max_steps) {
      out.truncated = true;
      break;
    }
    if (sys.is_hole(v)) {
      out.hole = true;
      break;
    }
    EdgeId e = q.sample(sys, v, rng);
    const Edge& ed = sys.edge(e);
    q.apply(sys, ed);
    out.path.push_back(e);
    v = ed.to;
    halted = check(static_cast<long>(out.path.size()));
  }
  out.log_q = q.logs();
  if constexpr (std::is_same_v<Q, ExactQ>) out.q = q.q;
  return out;
}

void check_q0(const SimplicialSystem& sys, const std::vector<mpq_class>& q0) {
  if (static_cast<int>(q0.size()) != sys.num_labels()) throw std::invalid_argument("distortion size mismatch");
  for (const auto& x : q0)
    if (x <= 0) throw std::invalid_argument("distortion must be positive");
}

}  // namespace

WalkOutcome sample_walk(const SimplicialSystem& system, Vertex start, const std::vector<mpq_class>& q0,
                        const std::vector<StoppingTime>& stops, Rng& rng, const WalkOptions& options) {
  check_q0(system, q0);
  if (!options.halt_on.empty() && options.halt_on.size() != stops.size())
    throw std::invalid_argument("halt mask size mismatch");
  return options.fast ? run_walk<FastQ>(system, start, q0, stops, rng, options)
                      : run_walk<ExactQ>(system, start, q0, stops, rng, options);
}

std::vector<long> evaluate_stops(const SimplicialSystem& system, Vertex start, const std::vector<mpq_class>& q0,
                                 const std::vector<StoppingTime>& stops, const std::vector<EdgeId>& path) {
  check_q0(system, q0);
  system.check_path(path);
  if (!path.empty() && system.edge(path.front()).from != start) throw std::invalid_argument("path does not start at start");
  ExactQ q(q0);
  std::vector<long> fired(stops.size(), -1);
  std::vector<EdgeId> prefix;
  for (size_t k = 0; k <= path.size(); ++k) {
    if (k > 0) {
      q.apply(system, system.edge(path[k - 1]));
      prefix.push_back(path[k - 1]);
    }
    for (size_t i = 0; i < stops.size(); ++i)
      if (fired[i] < 0 && holds(stops[i], system, prefix, q)) fired[i] = static_cast<long>(k);
  }
  return fired;
}

OrderEstimate estimate_order_prob(const SimplicialSystem& system, Vertex start, const std::vector<mpq_class>& q0,
                                  const StoppingTime& a, const StoppingTime& b, std::uint64_t trials,
                                  std::uint64_t seed, const WalkOptions& options, bool strict) {
  check_q0(system, q0);
  if (trials == 0) throw std::invalid_argument("at least one trial required");
  // Outcome codes: bit0 A first, bit1 B first, bit2 truncated, bit3 hole, bit4 A fired, bit5 B fired.
  std::vector<std::uint8_t> code(static_cast<size_t>(trials), 0);
  const std::vector<StoppingTime> stops{a, b};
  WalkOptions opt = options;
  opt.halt_on.clear();
  const Rng base(seed);
  parallel_for(static_cast<size_t>(trials), [&](size_t i) {
    Rng rng = base.substream(i);
    WalkOutcome w = sample_walk(system, start, q0, stops, rng, opt);
    std::uint8_t c = 0;
    const long fa = w.fired_at[0], fb = w.fired_at[1];
    if (fa >= 0) c |= 16;
    if (fb >= 0) c |= 32;
    if (fa >= 0 && (fb < 0 || fa < fb || (!strict && fa == fb)))
      c |= 1;
    else if (fb >= 0)
      c |= 2;
    else if (w.hole)
      c |= 8;
    else
      c |= 4;
    code[i] = c;
  });
  OrderEstimate est;
  est.trials = trials;
  est.seed = seed;
  for (auto c : code) {
    est.a_first += c & 1;
    est.b_first += (c >> 1) & 1;
    est.truncated += (c >> 2) & 1;
    est.holes += (c >> 3) & 1;
    est.fired_a += (c >> 4) & 1;
    est.fired_b += (c >> 5) & 1;
  }
  const double t = static_cast<double>(trials);
  est.frequency = static_cast<double>(est.a_first) / t;
  est.frequency_upper = static_cast<double>(est.a_first + est.truncated + est.holes) / t;
  est.stderr_ = std::sqrt(est.frequency * (1 - est.frequency) / t);
  est.stderr_upper = std::sqrt(est.frequency_upper * (1 - est.frequency_upper) / t);
  return est;
}

double golden_trap_constant() {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  return (phi + 1.0 / phi) / (1.0 - 1.0 / phi);
}

SimplicialSystem stable_trap_fixture() {
  return SimplicialSystem({"1", "2", "3"}, {"u", "exit"},
                          {Edge{-1, 0, 0, 0}, Edge{-1, 0, 0, 1}, Edge{-1, 0, 1, 2}});
}

}  // namespace mcf
