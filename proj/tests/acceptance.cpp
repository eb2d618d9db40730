// Acceptance run: one PASS/FAIL line per criterion, details indented below it.
// Exit status is nonzero when any criterion fails.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cstdarg>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mcf/catalog.hpp"
#include "mcf/graph.hpp"
#include "mcf/induction.hpp"
#include "mcf/io.hpp"
#include "mcf/numeric.hpp"
#include "mcf/parallel.hpp"
#include "mcf/rng.hpp"
#include "mcf/stochastic.hpp"
#include "mcf/thermo.hpp"

using namespace mcf;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  std::string headline;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

Vertex first_section(const NamedSystem& ns) {
  for (Vertex v = 0; v < ns.system.num_vertices(); ++v)
    if (ns.section[static_cast<size_t>(v)]) return v;
  return 0;
}

// ---- 1 ----
Outcome classification() {
  Outcome o;
  struct Row {
    const char* name;
    int dim;
    bool expect;
  };
  const std::vector<Row> rows{{"gauss", 2, true},
                              {"brun", 3, true},
                              {"brun", 4, true},
                              {"brun", 5, true},
                              {"selmer-restricted", 3, true},
                              {"selmer-restricted", 4, true},
                              {"selmer-restricted", 5, true},
                              {"cassaigne", 3, true},
                              {"arp", 3, true},
                              {"fully-subtractive", 3, false},
                              {"fully-subtractive", 4, false},
                              {"poincare", 3, false},
                              {"poincare", 4, false}};
  for (const auto& r : rows) {
    auto ns = build(r.name, r.dim);
    auto rep = check_non_degenerating(ns.system);
    bool replayed = true;
    for (const auto& f : rep.scc_failures) replayed = replayed && replay_scc_failure(ns.system, f);
    std::string witness = rep.scc_failures.empty() ? "-" : label_set_string(ns.system, rep.scc_failures[0].lambda);
    bool ok = rep.passes == r.expect && (r.expect || (!rep.scc_failures.empty() && replayed));
    o.require(ok, fmt("%s(%d): %s, witness %s%s", r.name, r.dim, rep.passes ? "passes" : "fails", witness.c_str(),
                      r.expect ? "" : (replayed ? ", replayed" : ", replay FAILED")));
  }
  return o;
}

// ---- 2 ----
Outcome conjugacy() {
  Outcome o;
  const std::vector<std::pair<const char*, int>> systems{
      {"brun", 3}, {"brun", 4}, {"selmer-restricted", 3}, {"cassaigne", 3}, {"arp", 3}};
  for (auto [name, dim] : systems) {
    auto rep = conjugacy_suite(build(name, dim), 1000, 50, 20240611, 256);
    const size_t non_tie = rep.trials.size() - rep.ties;
    o.require(rep.disagree == 0 && rep.agree == non_tie && rep.tie_rate < 0.01,
              fmt("%s(%d): agree %zu, disagree %zu, ties %zu, exits %zu, tie rate %.4f", name, dim, rep.agree,
                  rep.disagree, rep.ties, rep.exits, rep.tie_rate));
  }
  o.note("1000 dyadic points on the 2^-256 grid, 50 reference steps each");
  return o;
}

// ---- 3 ----
Outcome euclid() {
  Outcome o;
  auto s = build("gauss", 2).system;
  Rng rng(31415);
  int tested = 0, matched = 0;
  while (tested < 1000) {
    long p = 1 + static_cast<long>(rng.below(999999));
    long q = 1 + static_cast<long>(rng.below(999999));
    if (std::gcd(p, q) != 1 || p == q) continue;
    ++tested;
    auto c = code_point(s, make_point(s, 0, {mpq_class(p), mpq_class(q)}), 100000000);
    std::vector<long> runs;
    for (size_t i = 0; i < c.edges.size(); ++i) {
      if (i == 0 || c.edges[i] != c.edges[i - 1]) runs.push_back(0);
      ++runs.back();
    }
    // Quotients of max/min; the final quotient is cut short by the terminal tie (1, 1).
    std::vector<long> qs;
    for (long a = std::max(p, q), b = std::min(p, q); b != 0;) {
      qs.push_back(a / b);
      long r = a % b;
      a = b;
      b = r;
    }
    qs.back() -= 1;
    if (qs.back() == 0) qs.pop_back();
    if (c.stop == StopReason::BoundaryTie && runs == qs) ++matched;
  }
  o.require(matched == tested, fmt("%d of %d reduced rationals p/q < 10^6 coded to their partial quotients", matched,
                                   tested));
  return o;
}

// ---- 4 ----
Outcome kerckhoff() {
  Outcome o;
  auto ns = build("brun", 3);
  const auto& s = ns.system;
  const Vertex v = first_section(ns);
  std::vector<std::vector<mpq_class>> qs{{1, 1, 1}};
  Rng rng(2718);
  while (qs.size() < 21) {
    std::vector<mpq_class> q;
    for (int i = 0; i < 3; ++i) q.emplace_back(static_cast<long>(1 + rng.below(1000)), static_cast<long>(1 + rng.below(1000)));
    for (auto& x : q) x.canonicalize();
    qs.push_back(q);
  }
  WalkOptions opt;
  opt.fast = true;
  opt.max_steps = 10000;
  double worst = -1;
  std::string worst_desc;
  int checks = 0, failures = 0;
  std::uint64_t seed = 1000;
  for (size_t qi = 0; qi < qs.size(); ++qi)
    for (Label a = 0; a < 3; ++a)
      for (int tau : {2, 4, 8}) {
        auto est = estimate_order_prob(s, v, qs[qi], StoppingTime::jump_coord(a, tau), StoppingTime::win(a), 100000,
                                       seed++, opt, true);
        const double limit = 1.0 / tau + 3 * est.stderr_upper;
        const double margin = est.frequency_upper - 1.0 / tau;
        ++checks;
        if (est.frequency_upper > limit) {
          ++failures;
          o.require(false, fmt("q0 #%zu, alpha %d, tau %d: %.5f > %.5f", qi, a + 1, tau, est.frequency_upper, limit));
        }
        if (margin > worst) {
          worst = margin;
          worst_desc = fmt("q0 #%zu, alpha %d, tau %d: frequency %.5f (stderr %.5f, truncated %llu)", qi, a + 1, tau,
                           est.frequency_upper, est.stderr_upper, static_cast<unsigned long long>(est.truncated));
        }
      }
  o.require(failures == 0, fmt("%d checks (21 q0 x 3 labels x 3 tau, 10^5 walks each) within 1/tau + 3 stderr", checks));
  o.note("closest to the bound: " + worst_desc);
  return o;
}

// ---- 5 ----
Outcome trap() {
  Outcome o;
  auto s = stable_trap_fixture();
  const double C = golden_trap_constant();
  WalkOptions opt;
  opt.fast = true;
  opt.max_steps = 10001;
  const Label delta = s.label_index("3");
  for (const char* eps_text : {"1/100", "1/1000"}) {
    mpq_class eps = parse_rational(eps_text);
    std::vector<mpq_class> q{1, 1, eps};
    auto est = estimate_order_prob(s, s.vertex_index("u"), q, StoppingTime::lose(delta), StoppingTime::step_count(10000), 20000, 99, opt);
    const double bound = C * eps.get_d() + 3 * est.stderr_upper;
    o.require(est.frequency_upper <= bound,
              fmt("eps %s: P(lose delta within 10^4 steps) = %.5f (stderr %.5f) <= %.5f", eps_text, est.frequency_upper,
                  est.stderr_upper, bound));
  }
  return o;
}

// ---- 6 ----
std::vector<std::vector<EdgeId>> random_paths(const SimplicialSystem& s, Vertex v0, int count, Rng& rng) {
  std::vector<std::vector<EdgeId>> out;
  while (static_cast<int>(out.size()) < count) {
    const int len = 1 + static_cast<int>(rng.below(4));
    std::vector<EdgeId> p;
    Vertex v = v0;
    for (int k = 0; k < len; ++k) {
      const auto& outs = s.out_edges(v);
      p.push_back(outs[rng.below(outs.size())]);
      v = s.edge(p.back()).to;
    }
    out.push_back(p);
  }
  return out;
}

// Lebesgue-uniform points at v0 coded four steps, in exact integer arithmetic.
std::vector<std::vector<EdgeId>> lambda_codings(const SimplicialSystem& s, Vertex v0, size_t samples, std::uint64_t seed,
                                                size_t len) {
  std::vector<std::vector<EdgeId>> out(samples);
  parallel_for(samples, [&](size_t i) {
    Rng r(seed, i);
    auto x = sample_simplex_integers(r, s.num_labels(), 48);
    out[i] = code_projective<std::int64_t>(s, v0, x, len).edges;
  });
  return out;
}

Outcome measure_check() {
  Outcome o;
  const size_t N = 1000000;
  int chain_ok = 0, chain_total = 0, within = 0, total = 0;
  double worst_z = 0;
  for (auto [name, dim] : std::vector<std::pair<const char*, int>>{{"gauss", 2}, {"brun", 3}}) {
    auto ns = build(name, dim);
    const auto& s = ns.system;
    const Vertex v0 = first_section(ns);
    Rng prng(606);
    auto paths = random_paths(s, v0, 20, prng);
    auto codes = lambda_codings(s, v0, N, 6060, 4);
    const std::vector<mpq_class> one(static_cast<size_t>(s.num_labels()), mpq_class(1));
    for (const auto& p : paths) {
      const mpq_class exact = cylinder_measure(one, s, p) / cylinder_measure(one, s, {});
      size_t hits = 0;
      for (const auto& c : codes)
        if (c.size() >= p.size() && std::equal(p.begin(), p.end(), c.begin())) ++hits;
      const double f = static_cast<double>(hits) / static_cast<double>(N);
      const double pe = exact.get_d();
      const double se = std::sqrt(pe * (1 - pe) / static_cast<double>(N));
      const double z = std::abs(f - pe) / se;
      worst_z = std::max(worst_z, z);
      ++total;
      if (z <= 3) ++within;
      else o.require(false, fmt("%s path of length %zu: exact %.6f, Monte Carlo %.6f, z %.2f", name, p.size(), pe, f, z));
      for (size_t cut = 1; cut < p.size(); ++cut) {
        std::vector<EdgeId> g1(p.begin(), p.begin() + static_cast<long>(cut)), g2(p.begin() + static_cast<long>(cut), p.end());
        std::vector<mpq_class> q{};
        for (int i = 0; i < s.num_labels(); ++i) q.emplace_back(i + 2, 3);
        ++chain_total;
        if (path_probability(q, s, p) == path_probability(q, s, g1) * path_probability(distort(s, q, g1), s, g2))
          ++chain_ok;
      }
    }
  }
  o.require(within == total, fmt("%d of %d cylinder probabilities within 3 stderr of 10^6 uniform samples (max z %.2f)",
                                 within, total, worst_z));
  o.require(chain_ok == chain_total, fmt("chain rule exact on %d of %d splits", chain_ok, chain_total));
  return o;
}

// ---- 7 ----
Outcome duality() {
  Outcome o;
  const size_t N = 100000;
  for (auto [name, dim] : std::vector<std::pair<const char*, int>>{{"gauss", 2}, {"brun", 3}}) {
    auto ns = build(name, dim);
    const auto& s = ns.system;
    const Vertex v0 = first_section(ns);
    auto lam = lambda_codings(s, v0, N, 7070, 4);
    std::vector<std::vector<EdgeId>> walk(N);
    const std::vector<mpq_class> one(static_cast<size_t>(s.num_labels()), mpq_class(1));
    parallel_for(N, [&](size_t i) {
      Rng r(7171, i);
      WalkOptions opt;
      opt.fast = true;
      walk[i] = sample_walk(s, v0, one, {StoppingTime::step_count(4)}, r, opt).path;
    });
    std::map<std::vector<EdgeId>, std::pair<long, long>> bins;
    for (auto& c : lam) ++bins[c].first;
    for (auto& c : walk) ++bins[c].second;
    // Pool sparse cells so every cell holds at least 10 observations.
    std::vector<std::pair<long, long>> cells;
    std::pair<long, long> pooled{0, 0};
    for (auto& [k, v] : bins) {
      if (v.first + v.second >= 10) cells.push_back(v);
      else {
        pooled.first += v.first;
        pooled.second += v.second;
      }
    }
    if (pooled.first + pooled.second > 0) cells.push_back(pooled);
    double chi2 = 0;
    for (auto [a, b] : cells) chi2 += static_cast<double>((a - b) * (a - b)) / static_cast<double>(a + b);
    const double df = static_cast<double>(cells.size() - 1);
    const double crit = boost::math::quantile(boost::math::chi_squared(df), 0.999);
    o.require(chi2 < crit, fmt("%s(%d): chi2 %.2f < %.2f (df %.0f, %zu observed paths)", name, dim, chi2, crit, df,
                               bins.size()));
  }
  return o;
}

// ---- 8 ----
double solve(const InducedAlphabet& a, int n, int labels) {
  auto sp = periodic_spectrum(a, n);
  return solve_kappa(sp, 0.01, 2.0 * labels, 1e-10).kappa;
}

// Largest L (searched upward from `from`) whose alphabet keeps letters^n within the tuple guard.
int largest_L(const std::function<size_t(int)>& letters, int n, int from) {
  int best = from;
  for (int L = from;; ++L) {
    double count = std::pow(static_cast<double>(letters(L)), n);
    if (count > static_cast<double>(kMaxTuples)) break;
    best = L;
  }
  return best;
}

Outcome pressure() {
  Outcome o;
  auto gauss = build("gauss", 2).system;
  std::vector<EdgeId> gs{0, 1};
  std::map<std::pair<int, int>, double> k;
  for (int L : {4, 8, 12}) {
    auto a = build_induced_alphabet(gauss, 0, gs, L);
    for (int n : {1, 2, 3}) k[{L, n}] = solve(a, n, 2);
    o.note(fmt("gauss L=%-2d letters %-4zu kappa n=1 %.4f  n=2 %.4f  n=3 %.4f", L, a.letters.size(), k[{L, 1}],
               k[{L, 2}], k[{L, 3}]));
  }
  const double k123 = k[{12, 3}];
  o.require(k123 >= 1.7 && k123 <= 2.3, fmt("gauss n=3, L=12: kappa %.4f in [1.7, 2.3]", k123));
  bool mono_L = true;
  for (int n : {1, 2, 3}) mono_L = mono_L && k[{4, n}] <= k[{8, n}] && k[{8, n}] <= k[{12, n}];
  o.require(mono_L, "gauss kappa non-decreasing in L at every n");
  bool toward = true;
  for (int L : {4, 8, 12})
    toward = toward && std::abs(k[{L, 2}] - 2) <= std::abs(k[{L, 1}] - 2) && std::abs(k[{L, 3}] - 2) <= std::abs(k[{L, 2}] - 2);
  o.require(toward, fmt("gauss kappa moves toward 2 as n grows (L=12: %.4f, %.4f, %.4f)", k[{12, 1}], k[{12, 2}], k123));

  auto ns = build("brun", 3);
  const Vertex base = first_section(ns);
  auto g = find_unbordered_positive_loop(ns.system, base, 16);
  if (!g) {
    o.require(false, "brun(3): no positive unbordered loop");
    return o;
  }
  const int L = largest_L([&](int l) { return build_induced_alphabet(ns.system, base, *g, l).letters.size(); }, 2, 4);
  auto a = build_induced_alphabet(ns.system, base, *g, L);
  const double kb = solve(a, 2, 3);
  o.require(kb >= 2.5 && kb <= 3.5, fmt("brun(3) n=2, L=%d (%zu letters, largest within the tuple guard): kappa %.4f "
                                        "in [2.5, 3.5]",
                                        L, a.letters.size(), kb));
  return o;
}

// ---- 9 ----
Outcome gasket() {
  Outcome o;
  auto ns = build("arnoux-rauzy", 2);
  const auto& s = ns.system;
  const Vertex base = first_section(ns);
  auto g = find_unbordered_positive_loop(s, base, 16, ns.restriction);
  if (!g) {
    o.require(false, "no positive unbordered loop inside the gasket subgraph");
    return o;
  }
  std::string gname;
  for (EdgeId e : *g) gname += s.label_name(s.edge(e).label);
  const int n = 2;
  const int L = largest_L(
      [&](int l) { return build_induced_alphabet(s, base, *g, l, ns.restriction).letters.size(); }, n, 6);
  auto a = build_induced_alphabet(s, base, *g, L, ns.restriction);
  const double kf = solve(a, n, 3);
  const double bound = hausdorff_bound(kf, 3);
  o.require(kf < 2.9, fmt("restricted gasket, gamma* %s, n=%d, L=%d (%zu letters): kappa %.4f < 2.9", gname.c_str(), n,
                          L, a.letters.size(), kf));
  o.require(bound < 2.0, fmt("dimension bound 1 + kappa/3 = %.4f < 2 (reference 1.825, gap %+.4f)", bound,
                             bound - 1.825));
  if (kf >= 2.1 && kf <= 2.9) o.note("PASS+: kappa inside [2.1, 2.9]");
  else o.note("convergence warning: kappa outside [2.1, 2.9]; the truncated estimate is still far below its limit");

  // Shared (gamma*, L, n) against the hole-free ambient completion.
  auto amb = build_gasket_ambient(2);
  const Vertex abase = amb.system.vertex_index(s.vertex_name(base));
  std::vector<Label> labels;
  for (EdgeId e : *g) labels.push_back(s.edge(e).label);
  const auto ag = amb.system.path_from_labels(abase, labels);
  const int Ls = largest_L([&](int l) { return build_induced_alphabet(amb.system, abase, ag, l).letters.size(); }, n, 6);
  auto fa = build_induced_alphabet(s, base, *g, Ls, ns.restriction);
  auto aa = build_induced_alphabet(amb.system, abase, ag, Ls);
  const double kfs = solve(fa, n, 3), kas = solve(aa, n, 3);
  o.require(kfs < kas, fmt("monotonicity at L=%d, n=%d: gasket %.4f (%zu letters) < ambient %.4f (%zu letters)", Ls, n,
                           kfs, fa.letters.size(), kas, aa.letters.size()));
  return o;
}

// ---- 10 ----
Outcome losing_letters() {
  Outcome o;
  auto ns = build("brun", 3);
  const auto& s = ns.system;
  const Vertex v0 = first_section(ns);
  const size_t N = 10000;
  std::vector<char> all_lost(N, 0);
  parallel_for(N, [&](size_t i) {
    Rng r(1010, i);
    WalkOptions opt;
    opt.fast = true;
    opt.halt_on = {false, false, false, true};
    auto out = sample_walk(s, v0, {1, 1, 1},
                           {StoppingTime::lose(0), StoppingTime::lose(1), StoppingTime::lose(2), StoppingTime::step_count(200)},
                           r, opt);
    all_lost[i] = out.fired_at[0] >= 0 && out.fired_at[1] >= 0 && out.fired_at[2] >= 0;
  });
  const double frac = static_cast<double>(std::count(all_lost.begin(), all_lost.end(), 1)) / static_cast<double>(N);
  o.require(frac >= 0.99, fmt("brun(3): %.4f of 10^4 walks of length 200 saw every letter lose", frac));
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double budget;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "criterion classification", 5, classification},
      {2, "conjugacy suite", 120, conjugacy},
      {3, "euclid oracle", 10, euclid},
      {4, "kerckhoff bound", 60, kerckhoff},
      {5, "stable-subgraph trap", 60, trap},
      {6, "measure formula", 60, measure_check},
      {7, "sampler duality", 60, duality},
      {8, "pressure calibration", 300, pressure},
      {9, "gasket dimension", 600, gasket},
      {10, "losing letters", 30, losing_letters},
  };
  std::printf("threads: %d\n", thread_count());
  int failed = 0;
  for (const auto& c : all) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    o.require(secs <= c.budget, fmt("runtime %.1f s (budget %.0f s)", secs, c.budget));
    if (!o.pass) ++failed;
    std::printf("criterion %2d %-26s %s\n", c.id, c.title, o.pass ? "PASS" : "FAIL");
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
