#include "mcf/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "mcf/graph.hpp"
#include "mcf/numeric.hpp"
#include "mcf/parallel.hpp"

namespace mcf {

namespace {

bool in_allowed(const std::vector<bool>& allowed, EdgeId e) {
  return allowed.empty() || allowed[static_cast<size_t>(e)];
}

// KMP failure table over edge ids.
std::vector<int> failure_table(const std::vector<EdgeId>& p) {
  std::vector<int> f(p.size() + 1, 0);
  f[0] = -1;
  for (size_t i = 1; i <= p.size(); ++i) {
    int k = f[i - 1];
    while (k >= 0 && p[static_cast<size_t>(k)] != p[i - 1]) k = f[static_cast<size_t>(k)];
    f[i] = k + 1;
  }
  return f;
}

int advance(const std::vector<EdgeId>& p, const std::vector<int>& f, int state, EdgeId e) {
  if (state == static_cast<int>(p.size())) state = f[static_cast<size_t>(state)];
  while (state >= 0 && p[static_cast<size_t>(state)] != e) state = f[static_cast<size_t>(state)];
  return state + 1;
}

// Right-multiply by M_e in place: column l(e) receives the winner columns.
void apply_edge(WinLoseMatrix& m, const SimplicialSystem& sys, EdgeId e) {
  const Edge& ed = sys.edge(e);
  const int n = m.dim();
  for (EdgeId o : sys.out_edges(ed.from)) {
    Label w = sys.edge(o).label;
    if (w == ed.label) continue;
    for (int i = 0; i < n; ++i) m(i, ed.label) += m(i, w);
  }
}

// Double matrix with max entry 1 plus the log of the factor removed.
struct Scaled {
  std::vector<double> a;
  double log_scale = 0;
};

Scaled scaled_copy(const WinLoseMatrix& m) {
  Scaled s;
  long shift = m.to_scaled_double(s.a);
  double mx = *std::max_element(s.a.begin(), s.a.end());
  for (auto& x : s.a) x /= mx;
  s.log_scale = static_cast<double>(shift) * std::log(2.0) + std::log(mx);
  return s;
}

void multiply_into(const std::vector<double>& a, const std::vector<double>& b, std::vector<double>& out, int n,
                   double& log_scale) {
  double mx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += a[static_cast<size_t>(i * n + k)] * b[static_cast<size_t>(k * n + j)];
      out[static_cast<size_t>(i * n + j)] = s;
      mx = std::max(mx, s);
    }
  for (auto& x : out) x /= mx;
  log_scale += std::log(mx);
}

}  // namespace

InducedAlphabet build_induced_alphabet(const SimplicialSystem& system, Vertex base,
                                       const std::vector<EdgeId>& gamma_star, int max_length,
                                       const std::vector<bool>& allowed, MatrixSource source) {
  if (max_length < 0) throw std::invalid_argument("truncation length must be non-negative");
  if (gamma_star.empty()) throw ThermoError("gamma* must be non-empty");
  system.check_path(gamma_star);
  if (system.edge(gamma_star.front()).from != base || system.edge(gamma_star.back()).to != base)
    throw ThermoError("gamma* must be a loop at the base vertex");
  if (!allowed.empty()) {
    if (static_cast<int>(allowed.size()) != system.num_edges()) throw std::invalid_argument("subgraph mask size mismatch");
    LabelMask labels = 0;
    for (const Edge& e : system.edges())
      if (allowed[static_cast<size_t>(e.id)]) labels |= 1u << e.label;
    if (labels != system.full_mask()) throw ThermoError("subgraph must carry every label");
    for (EdgeId e : gamma_star)
      if (!allowed[static_cast<size_t>(e)]) throw ThermoError("gamma* leaves the subgraph");
  }

  // Standalone mode: matrices from F's own out-label sets.
  std::vector<EdgeId> kept;
  SimplicialSystem standalone = system;
  std::vector<EdgeId> to_sub(static_cast<size_t>(system.num_edges()), -1);
  const bool use_sub = !allowed.empty() && source == MatrixSource::Standalone;
  if (use_sub) {
    standalone = system.restrict_edges(allowed, &kept);
    for (size_t i = 0; i < kept.size(); ++i) to_sub[static_cast<size_t>(kept[i])] = static_cast<EdgeId>(i);
  }
  const SimplicialSystem& msys = use_sub ? standalone : system;
  auto mid = [&](EdgeId e) { return use_sub ? to_sub[static_cast<size_t>(e)] : e; };

  WinLoseMatrix start = WinLoseMatrix::identity(system.num_labels());
  for (EdgeId e : gamma_star) apply_edge(start, msys, mid(e));
  if (!start.is_positive()) throw ThermoError("gamma* is not a positive path");
  if (!is_unbordered(gamma_star)) throw ThermoError("gamma* must be unbordered so letters code first returns");

  InducedAlphabet out;
  out.base = base;
  out.gamma_star = gamma_star;
  out.max_length = max_length;
  out.restricted = !allowed.empty();
  out.source = source;

  const auto fail = failure_table(gamma_star);
  std::vector<EdgeId> word;
  std::vector<WinLoseMatrix> stack{start};
  std::function<void(Vertex, int)> dfs = [&](Vertex v, int state) {
    if (v == base) out.letters.push_back(Letter{word, stack.back()});
    if (static_cast<int>(word.size()) == max_length) return;
    for (EdgeId e : system.out_edges(v)) {
      if (!in_allowed(allowed, e)) continue;
      int next = advance(gamma_star, fail, state, e);
      if (next == static_cast<int>(gamma_star.size())) continue;  // contains gamma*
      word.push_back(e);
      stack.push_back(stack.back());
      apply_edge(stack.back(), msys, mid(e));
      dfs(system.edge(e).to, next);
      stack.pop_back();
      word.pop_back();
    }
  };
  dfs(base, 0);
  return out;
}

double perron_value_double(std::vector<double> m, int n, int max_iterations) {
  std::vector<double> v(static_cast<size_t>(n), 1.0), w(static_cast<size_t>(n));
  double lo = 0, hi = 0;
  for (int it = 0; it < max_iterations; ++it) {
    double mx = 0;
    lo = INFINITY;
    hi = 0;
    for (int i = 0; i < n; ++i) {
      double s = 0;
      for (int k = 0; k < n; ++k) s += m[static_cast<size_t>(i * n + k)] * v[static_cast<size_t>(k)];
      w[static_cast<size_t>(i)] = s;
      const double r = s / v[static_cast<size_t>(i)];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      mx = std::max(mx, s);
    }
    if (!(mx > 0)) throw ThermoError("power iteration reached the zero vector");
    if (hi - lo <= 1e-12 * lo) return std::log(0.5 * (lo + hi));
    for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = w[static_cast<size_t>(i)] / mx;
  }
  throw ThermoError("power iteration did not converge (relative gap " + std::to_string((hi - lo) / lo) + ")");
}

double perron_value(const WinLoseMatrix& m) {
  Scaled s = scaled_copy(m);
  return s.log_scale + perron_value_double(std::move(s.a), m.dim());
}

PeriodicSpectrum periodic_spectrum(const InducedAlphabet& alphabet, int n) {
  if (n < 1) throw std::invalid_argument("period must be at least 1");
  const size_t k = alphabet.letters.size();
  if (k == 0) throw ThermoError("empty induced alphabet");
  double total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<double>(k);
  if (total > static_cast<double>(kMaxTuples))
    throw ThermoError(std::to_string(k) + "^" + std::to_string(n) + " tuples exceed the memory guard; lower L or n");

  const int dim = alphabet.letters[0].matrix.dim();
  std::vector<Scaled> mats;
  mats.reserve(k);
  for (const auto& l : alphabet.letters) mats.push_back(scaled_copy(l.matrix));

  PeriodicSpectrum spec;
  spec.n = n;
  spec.letters = k;
  size_t count = 1;
  for (int i = 0; i < n; ++i) count *= k;
  spec.log_lambda.assign(count, 0.0);
  const size_t block = count / k;  // tuples sharing a first letter

  parallel_for(k, [&](size_t first) {
    // Prefix products: prefix[j] = M_{w1} ... M_{w(j+1)} (scaled).
    std::vector<std::vector<double>> prefix(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(dim * dim)));
    std::vector<double> logs(static_cast<size_t>(n), 0.0);
    std::vector<size_t> idx(static_cast<size_t>(n), 0);
    idx[0] = first;
    prefix[0] = mats[first].a;
    logs[0] = mats[first].log_scale;
    int valid = 1;  // prefix[0..valid-1] are current
    for (size_t t = 0; t < block; ++t) {
      for (int j = valid; j < n; ++j) {
        const Scaled& m = mats[idx[static_cast<size_t>(j)]];
        logs[static_cast<size_t>(j)] = logs[static_cast<size_t>(j - 1)] + m.log_scale;
        multiply_into(prefix[static_cast<size_t>(j - 1)], m.a, prefix[static_cast<size_t>(j)], dim, logs[static_cast<size_t>(j)]);
      }
      spec.log_lambda[first * block + t] =
          logs[static_cast<size_t>(n - 1)] + perron_value_double(prefix[static_cast<size_t>(n - 1)], dim);
      // Odometer over positions 1..n-1.
      int j = n - 1;
      while (j >= 1 && ++idx[static_cast<size_t>(j)] == k) idx[static_cast<size_t>(j--)] = 0;
      valid = std::max(j, 1);
    }
  });
  return spec;
}

double partition_sum(const PeriodicSpectrum& spectrum, double kappa) {
  // Fixed-order two-level reduction: blocks of 4096 terms, then the block results.
  const auto& l = spectrum.log_lambda;
  constexpr size_t kBlock = 4096;
  std::vector<double> partial;
  partial.reserve(l.size() / kBlock + 1);
  std::vector<double> terms;
  for (size_t s = 0; s < l.size(); s += kBlock) {
    const size_t e = std::min(l.size(), s + kBlock);
    terms.assign(l.begin() + static_cast<long>(s), l.begin() + static_cast<long>(e));
    for (auto& x : terms) x *= -kappa;
    partial.push_back(log_sum_exp(terms));
  }
  return log_sum_exp(partial);
}

double partition_sum(const InducedAlphabet& alphabet, int n, double kappa) {
  return partition_sum(periodic_spectrum(alphabet, n), kappa);
}

PressureEstimate solve_kappa(const PeriodicSpectrum& spectrum, double lo, double hi, double tolerance) {
  if (!(lo < hi)) throw std::invalid_argument("bracket must satisfy lo < hi");
  if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be positive");
  const double n = spectrum.n;
  auto p = [&](double k) { return partition_sum(spectrum, k) / n; };
  PressureEstimate est;
  est.n = spectrum.n;
  est.letters = spectrum.letters;
  est.bracket_lo = lo;
  est.bracket_hi = hi;
  est.tolerance = tolerance;
  est.pressure_lo = p(lo);
  est.pressure_hi = p(hi);
  if (!(est.pressure_lo > 0 && est.pressure_hi < 0))
    throw ThermoError("pressure does not change sign on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "]; widen the bracket or increase L");
  double a = lo, b = hi;
  double mid = 0.5 * (a + b), pm = p(mid);
  int it = 1;
  // Stop once the bracket is at the double resolution or both the width and the pressure are small.
  while (it < 200) {
    if ((b - a) < tolerance && std::fabs(std::expm1(pm)) <= tolerance) break;
    if (pm > 0)
      a = mid;
    else
      b = mid;
    const double next = 0.5 * (a + b);
    if (next == mid) break;
    mid = next;
    pm = p(mid);
    ++it;
  }
  est.kappa = mid;
  est.pressure_at_root = pm;
  est.iterations = it;
  return est;
}

double hausdorff_bound(double kappa, int num_labels) {
  if (num_labels < 2) throw std::invalid_argument("at least two labels required");
  if (!(kappa > 0) || kappa > num_labels) throw std::invalid_argument("kappa must lie in (0, |A|]");
  return num_labels - 2 + kappa / num_labels;
}

double asymptotic_gasket_bound(int d) {
  if (d < 2) throw std::invalid_argument("gasket dimension must be at least 2");
  return d - 1 + std::log(static_cast<double>(d)) / (std::log(2.0) * (d + 1));
}

}  // namespace mcf
