#include "mcf/catalog.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "mcf/numeric.hpp"
#include "mcf/parallel.hpp"
#include "mcf/stochastic.hpp"

namespace mcf {

namespace {

using Perm = std::vector<int>;

struct Builder {
  std::vector<std::string> names;
  std::map<std::string, Vertex> index;
  std::vector<Edge> edges;

  Vertex vertex(const std::string& name) {
    auto it = index.find(name);
    if (it != index.end()) return it->second;
    names.push_back(name);
    return index[name] = static_cast<Vertex>(names.size() - 1);
  }
  void edge(const std::string& from, const std::string& to, Label label) {
    const Vertex f = vertex(from), t = vertex(to);
    for (const Edge& e : edges)
      if (e.from == f && e.label == label) {
        if (e.to != t) throw std::logic_error("conflicting edge at " + from);
        return;  // identified vertices re-add the same edge
      }
    edges.push_back(Edge{-1, f, t, label});
  }
};

std::vector<std::string> numeric_alphabet(int n) {
  std::vector<std::string> a;
  for (int i = 1; i <= n; ++i) a.push_back(std::to_string(i));
  return a;
}

std::string perm_name(const Perm& s) {
  std::string out;
  for (int x : s) out += std::to_string(x + 1);
  return out;
}

std::vector<Perm> all_perms(int n) {
  Perm s(static_cast<size_t>(n));
  std::iota(s.begin(), s.end(), 0);
  std::vector<Perm> out;
  do out.push_back(s);
  while (std::next_permutation(s.begin(), s.end()));
  return out;
}

// Moves s[0] to 1-based position k.
Perm move_first(Perm s, int k) {
  int f = s.front();
  s.erase(s.begin());
  s.insert(s.begin() + (k - 1), f);
  return s;
}

std::string I(const Perm& s) { return "I_" + perm_name(s); }
std::string Itilde(const Perm& s) { return "I~_" + perm_name(s); }

// Brun coordinates at I_sigma: column of label s_1 is e_{s1}, column of s_k (k >= 2) is e_{s2} + ... + e_{sk}.
WinLoseMatrix brun_projection(const Perm& s) {
  const int n = static_cast<int>(s.size());
  WinLoseMatrix p(n);
  p(s[0], s[0]) = 1;
  for (int k = 1; k < n; ++k)
    for (int j = 1; j <= k; ++j) p(s[static_cast<size_t>(j)], s[static_cast<size_t>(k)]) = 1;
  return p;
}

// Selmer coordinates at I_sigma: columns v_{s1}, w_1 = c, w_2, ..., w_{n-2}, v_{sn}.
WinLoseMatrix selmer_projection(const Perm& s) {
  const int n = static_cast<int>(s.size());
  WinLoseMatrix p(n);
  for (int i = 0; i < n; ++i) {
    p(i, s[0]) = i == s[0] ? 0 : 1;
    p(i, s[static_cast<size_t>(n - 1)]) = i == s[static_cast<size_t>(n - 1)] ? 0 : 1;
  }
  for (int k = 1; k <= n - 2; ++k) {
    const Label col = s[static_cast<size_t>(k)];
    for (int i = 0; i < n; ++i) p(i, col) = 1;
    for (int j = 1; j < k; ++j) p(s[static_cast<size_t>(j)], col) = 2;
  }
  return p;
}

NamedSystem finish(Family fam, std::string name, int dim, int n, Builder& b,
                   const std::vector<std::pair<std::string, WinLoseMatrix>>& section) {
  NamedSystem ns{fam, std::move(name), dim, n, SimplicialSystem(numeric_alphabet(n), b.names, b.edges), {}, {}, false, {}, false};
  ns.section.assign(static_cast<size_t>(ns.system.num_vertices()), false);
  ns.projection.assign(static_cast<size_t>(ns.system.num_vertices()), WinLoseMatrix());
  for (const auto& [vname, p] : section) {
    const Vertex v = ns.system.vertex_index(vname);
    ns.section[static_cast<size_t>(v)] = true;
    ns.projection[static_cast<size_t>(v)] = p;
  }
  return ns;
}

NamedSystem build_single(Family fam, const std::string& name, int n) {
  Builder b;
  for (int a = 0; a < n; ++a) b.edge("o", "o", a);
  return finish(fam, name, n, n, b, {{"o", WinLoseMatrix::identity(n)}});
}

NamedSystem build_poincare(int n) {
  Builder b;
  b.vertex("root");
  // Tree of ordered label sequences; one remaining label folds back to the root.
  std::function<void(const std::string&, std::vector<int>)> grow = [&](const std::string& v, std::vector<int> used) {
    for (int a = 0; a < n; ++a) {
      if (std::find(used.begin(), used.end(), a) != used.end()) continue;
      auto next = used;
      next.push_back(a);
      if (static_cast<int>(next.size()) == n - 1) {
        b.edge(v, "root", a);
        continue;
      }
      std::string child = "p_";
      for (int x : next) child += std::to_string(x + 1);
      b.edge(v, child, a);
      grow(child, next);
    }
  };
  grow("root", {});
  return finish(Family::Poincare, "poincare", n, n, b, {{"root", WinLoseMatrix::identity(n)}});
}

NamedSystem build_brun(int n, bool unfolded) {
  Builder b;
  std::vector<std::pair<std::string, WinLoseMatrix>> section;
  for (const Perm& s : all_perms(n)) {
    section.emplace_back(I(s), brun_projection(s));
    b.vertex(I(s));
  }
  for (const Perm& s : all_perms(n)) {
    std::vector<std::string> chain{I(s)};
    for (int j = 1; j <= n - 2; ++j) {
      if (n == 3 && !unfolded)
        chain.push_back("b_" + std::to_string(s[2] + 1));  // paired bullets share an identity
      else
        chain.push_back("b_" + perm_name(s) + "_" + std::to_string(j));
    }
    chain.push_back(I(s));
    for (int j = 0; j < n - 1; ++j) {
      b.edge(chain[static_cast<size_t>(j)], chain[static_cast<size_t>(j + 1)], s[static_cast<size_t>(n - 1 - j)]);
      b.edge(chain[static_cast<size_t>(j)], I(move_first(s, n - j)), s[0]);
    }
  }
  return finish(Family::Brun, "brun", n, n, b, section);
}

NamedSystem build_selmer(int n) {
  Builder b;
  std::vector<std::pair<std::string, WinLoseMatrix>> section;
  for (const Perm& s : all_perms(n)) {
    section.emplace_back(I(s), selmer_projection(s));
    b.edge(I(s), I(move_first(s, n)), s[static_cast<size_t>(n - 1)]);
    b.edge(I(s), I(move_first(s, n - 1)), s[0]);
  }
  return finish(Family::Selmer, "selmer-restricted", n, n, b, section);
}

NamedSystem build_cassaigne() {
  Builder b;
  const char* names[] = {"a", "b", "c"};
  // The vertex with middle label m carries the other two labels; label l leads to middle l.
  for (int m = 0; m < 3; ++m)
    for (int l = 0; l < 3; ++l)
      if (l != m) b.edge(names[m], names[l], l);
  std::vector<std::pair<std::string, WinLoseMatrix>> section;
  for (auto* v : names) section.emplace_back(v, WinLoseMatrix());
  NamedSystem ns = finish(Family::Cassaigne, "cassaigne", 3, 3, b, section);
  ns.framed = true;
  return ns;
}

// Gasket graph on n labels. With `complete`, the edges into the hole are sent to I_{move_first(s, n)}.
NamedSystem build_gasket(int n, bool complete, Family fam, const std::string& name, int dim) {
  Builder b;
  std::vector<std::pair<std::string, WinLoseMatrix>> section;
  for (const Perm& s : all_perms(n)) {
    section.emplace_back(I(s), brun_projection(s));
    b.vertex(I(s));
  }
  for (const Perm& s : all_perms(n)) {
    std::vector<std::string> chain{I(s)};
    for (int j = 1; j <= n - 2; ++j) chain.push_back("b_" + perm_name(s) + "_" + std::to_string(j));
    chain.push_back(Itilde(s));
    for (int j = 0; j < n - 1; ++j) {
      b.edge(chain[static_cast<size_t>(j)], chain[static_cast<size_t>(j + 1)], s[static_cast<size_t>(n - 1 - j)]);
      b.edge(chain[static_cast<size_t>(j)], Itilde(move_first(s, n - j)), s[0]);
    }
    // Exit chain: s3 once, s4 twice, ..., sn (n-2) times, back to I_s; s1 leaves at every vertex.
    std::vector<Label> seq;
    for (int k = 2; k < n; ++k)
      for (int r = 0; r < k - 1; ++r) seq.push_back(s[static_cast<size_t>(k)]);
    for (size_t i = 0; i < seq.size(); ++i) {
      const std::string from = i == 0 ? Itilde(s) : Itilde(s) + "_" + std::to_string(i);
      const std::string to = i + 1 == seq.size() ? I(s) : Itilde(s) + "_" + std::to_string(i + 1);
      b.edge(from, to, seq[i]);
      b.edge(from, complete ? I(move_first(s, n)) : "hole", s[0]);
    }
  }
  NamedSystem ns = finish(fam, name, dim, n, b, section);
  if (!complete) {
    const Vertex hole = ns.system.vertex_index("hole");
    ns.restriction.assign(static_cast<size_t>(ns.system.num_edges()), true);
    for (const Edge& e : ns.system.edges())
      if (e.to == hole) ns.restriction[static_cast<size_t>(e.id)] = false;
  }
  return ns;
}

void check_dim(std::string_view name, int dim, int lo, int hi) {
  if (dim < lo || dim > hi)
    throw CatalogError(std::string(name) + " supports dimensions " + std::to_string(lo) + ".." + std::to_string(hi) +
                       ", got " + std::to_string(dim));
}

// Indices sorted by decreasing value; throws on ties.
Perm decreasing_order(const std::vector<mpq_class>& x) {
  Perm s(x.size());
  std::iota(s.begin(), s.end(), 0);
  std::stable_sort(s.begin(), s.end(), [&](int a, int b) { return x[static_cast<size_t>(a)] > x[static_cast<size_t>(b)]; });
  for (size_t i = 1; i < s.size(); ++i)
    if (x[static_cast<size_t>(s[i])] == x[static_cast<size_t>(s[i - 1])])
      throw ReferenceError(ReferenceError::Kind::Tie, "coordinates tie");
  return s;
}

std::vector<mpq_class> renormalize(std::vector<mpq_class> x) {
  mpq_class t = 0;
  for (const auto& v : x) t += v;
  for (auto& v : x) v /= t;
  return x;
}

// Solve P lambda = x exactly by Gauss-Jordan elimination.
std::vector<mpq_class> solve(const WinLoseMatrix& p, const std::vector<mpq_class>& x) {
  const int n = p.dim();
  std::vector<std::vector<mpq_class>> a(static_cast<size_t>(n), std::vector<mpq_class>(static_cast<size_t>(n + 1)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[static_cast<size_t>(i)][static_cast<size_t>(j)] = p(i, j);
    a[static_cast<size_t>(i)][static_cast<size_t>(n)] = x[static_cast<size_t>(i)];
  }
  for (int c = 0; c < n; ++c) {
    int piv = c;
    while (piv < n && a[static_cast<size_t>(piv)][static_cast<size_t>(c)] == 0) ++piv;
    if (piv == n) throw std::logic_error("singular projection");
    std::swap(a[static_cast<size_t>(c)], a[static_cast<size_t>(piv)]);
    for (int r = 0; r < n; ++r) {
      if (r == c || a[static_cast<size_t>(r)][static_cast<size_t>(c)] == 0) continue;
      const mpq_class f = a[static_cast<size_t>(r)][static_cast<size_t>(c)] / a[static_cast<size_t>(c)][static_cast<size_t>(c)];
      for (int j = c; j <= n; ++j) a[static_cast<size_t>(r)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(c)][static_cast<size_t>(j)];
    }
  }
  std::vector<mpq_class> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = a[static_cast<size_t>(i)][static_cast<size_t>(n)] / a[static_cast<size_t>(i)][static_cast<size_t>(i)];
  return out;
}

std::vector<mpq_class> subtract_min(std::vector<mpq_class> x) {
  size_t m = 0;
  bool tie = false;
  for (size_t i = 1; i < x.size(); ++i) {
    if (x[i] < x[m]) {
      m = i;
      tie = false;
    } else if (x[i] == x[m]) {
      tie = true;
    }
  }
  if (tie) throw ReferenceError(ReferenceError::Kind::Tie, "smallest coordinates tie");
  for (size_t i = 0; i < x.size(); ++i)
    if (i != m) x[i] -= x[m];
  return renormalize(std::move(x));
}

std::vector<mpq_class> arnoux_rauzy_step(std::vector<mpq_class> x) {
  const Perm s = decreasing_order(x);
  mpq_class others = 0;
  for (size_t i = 1; i < s.size(); ++i) others += x[static_cast<size_t>(s[i])];
  const mpq_class& top = x[static_cast<size_t>(s[0])];
  if (top == others) throw ReferenceError(ReferenceError::Kind::Tie, "largest coordinate equals the sum of the others");
  if (top < others) throw ReferenceError(ReferenceError::Kind::Domain, "point lies in C (largest below the sum of the others)");
  x[static_cast<size_t>(s[0])] -= others;
  return renormalize(std::move(x));
}

}  // namespace

const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries{
      {"gauss", 2, 2, "two labels, one vertex"},
      {"fully-subtractive", 3, 8, "one vertex, n loops"},
      {"poincare", 3, 6, "tree folded onto its root"},
      {"brun", 3, 6, "dimension 3 folds paired bullets (--unfolded keeps them)"},
      {"selmer-restricted", 3, 6, "restricted to the absorbing domain"},
      {"cassaigne", 3, 3, "three vertices, tracked frame"},
      {"arnoux-rauzy", 2, 5, "gasket dimension d, d+1 labels, has a hole"},
      {"arp", 3, 3, "higher dimensions behind --experimental"},
  };
  return entries;
}

NamedSystem build(std::string_view name, int dim, const BuildOptions& options) {
  if (name == "gauss") {
    check_dim(name, dim, 2, 2);
    return build_single(Family::Gauss, "gauss", 2);
  }
  if (name == "fully-subtractive") {
    check_dim(name, dim, 3, 8);
    return build_single(Family::FullySubtractive, "fully-subtractive", dim);
  }
  if (name == "poincare") {
    check_dim(name, dim, 3, 6);
    return build_poincare(dim);
  }
  if (name == "brun") {
    check_dim(name, dim, 3, 6);
    return build_brun(dim, options.unfolded);
  }
  if (name == "selmer-restricted" || name == "selmer") {
    check_dim(name, dim, 3, 6);
    return build_selmer(dim);
  }
  if (name == "cassaigne") {
    check_dim(name, dim, 3, 3);
    return build_cassaigne();
  }
  if (name == "arnoux-rauzy") {
    check_dim(name, dim, 2, 5);
    return build_gasket(dim + 1, false, Family::ArnouxRauzy, "arnoux-rauzy", dim);
  }
  if (name == "arp") {
    check_dim(name, dim, 3, options.experimental ? 6 : 3);
    NamedSystem ns = build_gasket(dim, true, Family::Arp, "arp", dim);
    ns.experimental = dim > 3;
    return ns;
  }
  throw CatalogError("unknown catalog system '" + std::string(name) + "'");
}

NamedSystem build_gasket_ambient(int d) {
  check_dim("arnoux-rauzy", d, 2, 5);
  NamedSystem ns = build_gasket(d + 1, true, Family::Arp, "arp", d + 1);
  ns.experimental = d + 1 > 3;
  return ns;
}

bool in_domain(const NamedSystem& ns, const std::vector<mpq_class>& x) {
  if (static_cast<int>(x.size()) != ns.coords) return false;
  for (const auto& v : x)
    if (v <= 0) return false;
  if (ns.family == Family::Selmer) {
    auto s = x;
    std::sort(s.begin(), s.end());
    return s.back() < s[0] + s[1];
  }
  return true;
}

SectionState embed(const NamedSystem& ns, const std::vector<mpq_class>& x_in) {
  if (static_cast<int>(x_in.size()) != ns.coords)
    throw std::invalid_argument(ns.name + " expects " + std::to_string(ns.coords) + " coordinates");
  const auto x = normalized(x_in);
  if (!in_domain(ns, x)) throw ReferenceError(ReferenceError::Kind::Domain, "point outside the domain of " + ns.name);
  SectionState st;
  switch (ns.family) {
    case Family::Gauss:
    case Family::FullySubtractive:
      st.point = make_point(ns.system, ns.system.vertex_index("o"), x);
      return st;
    case Family::Poincare:
      st.point = make_point(ns.system, ns.system.vertex_index("root"), x);
      return st;
    case Family::Cassaigne:
      st.frame = {0, 1, 2};
      st.point = make_point(ns.system, ns.system.vertex_index("b"), x);
      return st;
    case Family::Selmer: {
      const Perm r = decreasing_order(x);
      Perm s{r.back()};
      s.insert(s.end(), r.begin(), r.end() - 1);
      const Vertex v = ns.system.vertex_index(I(s));
      st.point = make_point(ns.system, v, solve(ns.projection[static_cast<size_t>(v)], x));
      return st;
    }
    case Family::Brun:
    case Family::ArnouxRauzy:
    case Family::Arp: {
      const Vertex v = ns.system.vertex_index(I(decreasing_order(x)));
      st.point = make_point(ns.system, v, solve(ns.projection[static_cast<size_t>(v)], x));
      return st;
    }
  }
  throw std::logic_error("unreachable");
}

std::vector<mpq_class> project(const NamedSystem& ns, const SectionState& st) {
  const Vertex v = st.point.vertex;
  if (!ns.section.at(static_cast<size_t>(v))) throw std::invalid_argument("not at a section vertex");
  std::vector<mpq_class> x(static_cast<size_t>(ns.coords));
  if (ns.framed) {
    for (int i = 0; i < ns.coords; ++i) x[static_cast<size_t>(i)] = st.point.lambda[static_cast<size_t>(st.frame[static_cast<size_t>(i)])];
  } else {
    const WinLoseMatrix& p = ns.projection[static_cast<size_t>(v)];
    for (int i = 0; i < ns.coords; ++i)
      for (int j = 0; j < ns.coords; ++j)
        if (p(i, j) != 0) x[static_cast<size_t>(i)] += p(i, j) * st.point.lambda[static_cast<size_t>(j)];
  }
  return renormalize(std::move(x));
}

SectionState next_return(const NamedSystem& ns, const SectionState& state, size_t max_steps) {
  SectionState st = state;
  for (size_t k = 0; k < max_steps; ++k) {
    StepRecord rec;
    st.point = step(ns.system, st.point, &rec);
    if (ns.framed) {
      auto& p = st.frame;
      if (rec.loser == p[2])
        p = {p[0], p[2], p[1]};
      else
        p = {p[1], p[0], p[2]};
    }
    if (ns.section[static_cast<size_t>(st.point.vertex)]) return st;
  }
  throw InductionError(StopReason::MaxStepsExceeded, "no return to the section");
}

std::vector<mpq_class> reference_step(const NamedSystem& ns, const std::vector<mpq_class>& x_in) {
  if (static_cast<int>(x_in.size()) != ns.coords)
    throw std::invalid_argument(ns.name + " expects " + std::to_string(ns.coords) + " coordinates");
  auto x = normalized(x_in);
  if (!in_domain(ns, x)) throw ReferenceError(ReferenceError::Kind::Domain, "point outside the domain of " + ns.name);
  switch (ns.family) {
    case Family::Gauss:
    case Family::FullySubtractive:
      return subtract_min(std::move(x));
    case Family::Poincare: {
      const Perm s = decreasing_order(x);
      auto y = x;
      for (size_t i = 0; i + 1 < s.size(); ++i) y[static_cast<size_t>(s[i])] = x[static_cast<size_t>(s[i])] - x[static_cast<size_t>(s[i + 1])];
      return renormalize(std::move(y));
    }
    case Family::Brun: {
      const Perm s = decreasing_order(x);
      x[static_cast<size_t>(s[0])] -= x[static_cast<size_t>(s[1])];
      return renormalize(std::move(x));
    }
    case Family::Selmer: {
      const Perm s = decreasing_order(x);
      x[static_cast<size_t>(s[0])] -= x[static_cast<size_t>(s.back())];
      return renormalize(std::move(x));
    }
    case Family::Cassaigne: {
      if (x[0] == x[2]) throw ReferenceError(ReferenceError::Kind::Tie, "x1 equals x3");
      if (x[0] > x[2]) return renormalize({x[0] - x[2], x[2], x[1]});
      return renormalize({x[1], x[0], x[2] - x[0]});
    }
    case Family::ArnouxRauzy:
      return arnoux_rauzy_step(std::move(x));
    case Family::Arp: {
      if (ns.coords != 3) throw CatalogError("no reference map for arp beyond three coordinates");
      const Perm s = decreasing_order(x);
      const auto &a = x[static_cast<size_t>(s[0])], &b = x[static_cast<size_t>(s[1])], &c = x[static_cast<size_t>(s[2])];
      if (a == b + c) throw ReferenceError(ReferenceError::Kind::Tie, "largest coordinate equals the sum of the others");
      auto y = x;
      if (a > b + c) {
        y[static_cast<size_t>(s[0])] = a - b - c;
      } else {
        y[static_cast<size_t>(s[0])] = a - b;
        y[static_cast<size_t>(s[1])] = b - c;
      }
      return renormalize(std::move(y));
    }
  }
  throw std::logic_error("unreachable");
}

const char* to_string(ConjugacyTrial::Verdict v) {
  switch (v) {
    case ConjugacyTrial::Verdict::Agree: return "agree";
    case ConjugacyTrial::Verdict::Disagree: return "disagree";
    case ConjugacyTrial::Verdict::Tie: return "tie";
    case ConjugacyTrial::Verdict::Exit: return "exit";
  }
  return "?";
}

ConjugacyTrial conjugacy_check(const NamedSystem& ns, const std::vector<mpq_class>& x0, int steps) {
  using V = ConjugacyTrial::Verdict;
  ConjugacyTrial t;
  t.start = x0;
  std::vector<mpq_class> x;
  SectionState st;
  try {
    x = normalized(x0);
    st = embed(ns, x);
  } catch (const ReferenceError&) {
    t.verdict = V::Tie;
    return t;
  }
  for (int k = 1; k <= steps; ++k) {
    std::vector<mpq_class> ref;
    bool left_domain = false;
    try {
      ref = reference_step(ns, x);
    } catch (const ReferenceError& e) {
      if (e.kind() == ReferenceError::Kind::Tie || ns.family != Family::ArnouxRauzy) {
        t.verdict = V::Tie;
        return t;
      }
      left_domain = true;
    }
    try {
      st = next_return(ns, st);
    } catch (const InductionError& e) {
      if (e.reason() == StopReason::HoleReached && left_domain) {
        t.verdict = V::Exit;
      } else if (e.reason() == StopReason::BoundaryTie) {
        t.verdict = V::Tie;
      } else {
        t.verdict = V::Disagree;
        t.first_disagreement = k;
      }
      return t;
    }
    if (left_domain || project(ns, st) != ref) {
      t.verdict = V::Disagree;
      t.first_disagreement = k;
      return t;
    }
    x = std::move(ref);
    t.steps_done = k;
  }
  return t;
}

ConjugacyReport conjugacy_suite(const NamedSystem& ns, int trials, int steps, std::uint64_t seed, int bits) {
  ConjugacyReport rep;
  rep.trials.resize(static_cast<size_t>(trials));
  const Rng base(seed);
  parallel_for(static_cast<size_t>(trials), [&](size_t i) {
    Rng rng = base.substream(i);
    std::vector<mpq_class> x;
    do x = sample_simplex_point(rng, ns.coords, bits);
    while (!in_domain(ns, x));
    rep.trials[i] = conjugacy_check(ns, x, steps);
  });
  for (const auto& t : rep.trials) {
    switch (t.verdict) {
      case ConjugacyTrial::Verdict::Agree: ++rep.agree; break;
      case ConjugacyTrial::Verdict::Disagree: ++rep.disagree; break;
      case ConjugacyTrial::Verdict::Tie: ++rep.ties; break;
      case ConjugacyTrial::Verdict::Exit: ++rep.exits; break;
    }
  }
  rep.tie_rate = trials > 0 ? static_cast<double>(rep.ties) / trials : 0.0;
  return rep;
}

GasketSurvival gasket_survival(int d, const std::vector<mpq_class>& x0, int max_steps) {
  if (static_cast<int>(x0.size()) != d + 1)
    throw std::invalid_argument("gasket dimension " + std::to_string(d) + " needs " + std::to_string(d + 1) + " coordinates");
  GasketSurvival g;
  auto x = normalized(x0);
  for (int k = 0; k < max_steps; ++k) {
    try {
      x = arnoux_rauzy_step(std::move(x));
    } catch (const ReferenceError&) {
      return g;
    }
    g.steps = k + 1;
  }
  g.survived = true;
  return g;
}

}  // namespace mcf
