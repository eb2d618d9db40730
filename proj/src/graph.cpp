#include "mcf/graph.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <stdexcept>
#include <unordered_set>

namespace mcf {

SimplicialSystem degenerate_subgraph(const SimplicialSystem& system, LabelMask lambda,
                                     std::vector<EdgeId>* kept_ids) {
  if ((lambda & system.full_mask()) == 0) throw std::invalid_argument("empty label subset");
  std::vector<bool> keep(static_cast<size_t>(system.num_edges()), false);
  for (Vertex v = 0; v < system.num_vertices(); ++v) {
    const bool restricted = (system.out_labels(v) & lambda) != 0;
    for (EdgeId e : system.out_edges(v))
      keep[static_cast<size_t>(e)] = !restricted || has_label(lambda, system.edge(e).label);
  }
  return system.restrict_edges(keep, kept_ids);
}

SccDecomposition strongly_connected_components(const SimplicialSystem& system) {
  const int n = system.num_vertices();
  std::vector<int> index(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<Vertex> stack;
  std::vector<std::vector<Vertex>> comps;
  int counter = 0;

  // Iterative Tarjan: frames hold (vertex, next out-edge position).
  std::vector<std::pair<Vertex, size_t>> frames;
  for (Vertex root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] >= 0) continue;
    frames.push_back({root, 0});
    index[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = true;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& outs = system.out_edges(v);
      if (pos < outs.size()) {
        Vertex w = system.edge(outs[pos++]).to;
        if (index[static_cast<size_t>(w)] < 0) {
          index[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = counter++;
          stack.push_back(w);
          on_stack[static_cast<size_t>(w)] = true;
          frames.push_back({w, 0});
        } else if (on_stack[static_cast<size_t>(w)]) {
          low[static_cast<size_t>(v)] = std::min(low[static_cast<size_t>(v)], index[static_cast<size_t>(w)]);
        }
        continue;
      }
      const Vertex done = v;
      frames.pop_back();
      if (!frames.empty()) {
        Vertex parent = frames.back().first;
        low[static_cast<size_t>(parent)] = std::min(low[static_cast<size_t>(parent)], low[static_cast<size_t>(done)]);
      }
      if (low[static_cast<size_t>(done)] == index[static_cast<size_t>(done)]) {
        std::vector<Vertex> comp;
        Vertex w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<size_t>(w)] = false;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }

  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  SccDecomposition d;
  d.components = std::move(comps);
  const size_t nc = d.components.size();
  d.component_of.assign(static_cast<size_t>(n), -1);
  for (size_t c = 0; c < nc; ++c)
    for (Vertex v : d.components[c]) d.component_of[static_cast<size_t>(v)] = static_cast<int>(c);
  d.edge_bearing.assign(nc, false);
  std::vector<std::vector<int>> succ(nc);
  for (const Edge& e : system.edges()) {
    int a = d.component_of[static_cast<size_t>(e.from)], b = d.component_of[static_cast<size_t>(e.to)];
    if (a == b)
      d.edge_bearing[static_cast<size_t>(a)] = true;
    else
      succ[static_cast<size_t>(a)].push_back(b);
  }
  d.height.assign(nc, -1);
  std::function<int(int)> height = [&](int c) -> int {
    int& h = d.height[static_cast<size_t>(c)];
    if (h >= 0) return h;
    int best = 0;
    for (int s : succ[static_cast<size_t>(c)]) best = std::max(best, 1 + height(s));
    h = best;
    return h;
  };
  for (size_t c = 0; c < nc; ++c) height(static_cast<int>(c));
  return d;
}

bool is_strongly_connected(const SimplicialSystem& system) {
  if (system.num_vertices() == 0) return false;
  return strongly_connected_components(system).components.size() == 1;
}

std::vector<bool> covers_all_labels(const SimplicialSystem& system) {
  // Backward search over (vertex, collected labels): (v, m) is good when the full set is
  // reachable from it.
  const int nl = system.num_labels();
  if (nl > kCriterionMaxLabels) throw std::invalid_argument("criterion search limited to 16 labels");
  const size_t states = static_cast<size_t>(1) << nl;
  const LabelMask full = system.full_mask();
  const int nv = system.num_vertices();
  std::vector<std::vector<EdgeId>> in(static_cast<size_t>(nv));
  for (const Edge& e : system.edges()) in[static_cast<size_t>(e.to)].push_back(e.id);
  std::vector<bool> good(static_cast<size_t>(nv) * states, false);
  auto id = [&](Vertex v, LabelMask m) { return static_cast<size_t>(v) * states + m; };
  std::deque<std::pair<Vertex, LabelMask>> queue;
  for (Vertex v = 0; v < nv; ++v) {
    good[id(v, full)] = true;
    queue.push_back({v, full});
  }
  while (!queue.empty()) {
    auto [w, m2] = queue.front();
    queue.pop_front();
    for (EdgeId e : in[static_cast<size_t>(w)]) {
      const Edge& ed = system.edge(e);
      if (!has_label(m2, ed.label)) continue;
      for (LabelMask m : {m2, static_cast<LabelMask>(m2 & ~(1u << ed.label))}) {
        if (!good[id(ed.from, m)]) {
          good[id(ed.from, m)] = true;
          queue.push_back({ed.from, m});
        }
      }
    }
  }
  std::vector<bool> out(static_cast<size_t>(nv));
  for (Vertex v = 0; v < nv; ++v) out[static_cast<size_t>(v)] = good[id(v, 0)];
  return out;
}

namespace {

// Vertices of comp that reach a vertex outside comp along Lambda-labeled edges of G.
std::vector<bool> lambda_escape(const SimplicialSystem& g, LabelMask lambda, const std::vector<bool>& in_comp) {
  const int nv = g.num_vertices();
  std::vector<bool> escapes(static_cast<size_t>(nv), false);
  std::deque<Vertex> queue;
  std::vector<std::vector<Vertex>> pred(static_cast<size_t>(nv));
  for (const Edge& e : g.edges()) {
    if (!has_label(lambda, e.label) || !in_comp[static_cast<size_t>(e.from)]) continue;
    if (!in_comp[static_cast<size_t>(e.to)]) {
      if (!escapes[static_cast<size_t>(e.from)]) {
        escapes[static_cast<size_t>(e.from)] = true;
        queue.push_back(e.from);
      }
    } else {
      pred[static_cast<size_t>(e.to)].push_back(e.from);
    }
  }
  while (!queue.empty()) {
    Vertex w = queue.front();
    queue.pop_front();
    for (Vertex u : pred[static_cast<size_t>(w)])
      if (!escapes[static_cast<size_t>(u)]) {
        escapes[static_cast<size_t>(u)] = true;
        queue.push_back(u);
      }
  }
  return escapes;
}

// Clause (a) and (b) witnesses for one component; returns true when the component is fine.
bool examine_component(const SimplicialSystem& g, LabelMask lambda, const std::vector<Vertex>& comp,
                       SccFailure* failure) {
  Vertex multi = -1;
  for (Vertex v : comp)
    if (popcount(g.out_labels(v) & lambda) >= 2) {
      multi = v;
      break;
    }
  if (multi < 0) return true;
  std::vector<bool> in_comp(static_cast<size_t>(g.num_vertices()), false);
  for (Vertex v : comp) in_comp[static_cast<size_t>(v)] = true;
  auto esc = lambda_escape(g, lambda, in_comp);
  Vertex trapped = -1;
  for (Vertex v : comp)
    if (!esc[static_cast<size_t>(v)]) {
      trapped = v;
      break;
    }
  if (trapped < 0) return true;
  if (failure) *failure = SccFailure{lambda, comp, multi, trapped};
  return false;
}

}  // namespace

CriterionReport check_non_degenerating(const SimplicialSystem& system) {
  const int nl = system.num_labels();
  if (nl > kCriterionMaxLabels)
    throw std::invalid_argument("criterion search over label subsets is limited to 16 labels");
  CriterionReport rep;
  rep.holes = system.holes();
  rep.strongly_connected = is_strongly_connected(system);
  auto cover = covers_all_labels(system);
  for (Vertex v = 0; v < system.num_vertices(); ++v)
    if (!cover[static_cast<size_t>(v)]) rep.reachability_failures.push_back(v);

  // Subsets by size, then by numeric value, so the first witness is a smallest one.
  std::vector<LabelMask> subsets;
  const LabelMask full = system.full_mask();
  for (LabelMask m = 1; m < full; ++m) subsets.push_back(m);
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](LabelMask a, LabelMask b) { return popcount(a) < popcount(b); });
  for (LabelMask lambda : subsets) {
    SimplicialSystem gl = degenerate_subgraph(system, lambda);
    SccDecomposition d = strongly_connected_components(gl);
    for (size_t c = 0; c < d.components.size(); ++c) {
      if (!d.edge_bearing[c]) continue;
      SccFailure f;
      if (!examine_component(system, lambda, d.components[c], &f)) rep.scc_failures.push_back(std::move(f));
    }
  }
  rep.passes = rep.holes.empty() && rep.reachability_failures.empty() && rep.scc_failures.empty();
  return rep;
}

bool replay_scc_failure(const SimplicialSystem& system, const SccFailure& failure) {
  // Only proper nonempty subsets are witnesses.
  if (failure.component.empty() || failure.lambda == 0 || (failure.lambda & ~system.full_mask()) != 0 ||
      failure.lambda == system.full_mask())
    return false;
  SimplicialSystem gl = degenerate_subgraph(system, failure.lambda);
  SccDecomposition d = strongly_connected_components(gl);
  int c = d.component_of[static_cast<size_t>(failure.component.front())];
  if (d.components[static_cast<size_t>(c)] != failure.component || !d.edge_bearing[static_cast<size_t>(c)]) return false;
  if (popcount(system.out_labels(failure.multi_label_vertex) & failure.lambda) < 2) return false;
  std::vector<bool> in_comp(static_cast<size_t>(system.num_vertices()), false);
  for (Vertex v : failure.component) in_comp[static_cast<size_t>(v)] = true;
  if (!in_comp[static_cast<size_t>(failure.multi_label_vertex)] || !in_comp[static_cast<size_t>(failure.trapped_vertex)]) return false;
  return !lambda_escape(system, failure.lambda, in_comp)[static_cast<size_t>(failure.trapped_vertex)];
}

namespace {

std::uint64_t bool_product(std::uint64_t a, std::uint64_t b, int n) {
  std::uint64_t out = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (!((a >> (i * n + k)) & 1u)) continue;
      std::uint64_t row = (b >> (k * n)) & ((std::uint64_t{1} << n) - 1);
      out |= row << (i * n);
    }
  return out;
}

bool allowed_edge(const std::vector<bool>& allowed, EdgeId e) {
  return allowed.empty() || allowed[static_cast<size_t>(e)];
}

}  // namespace

std::optional<std::vector<EdgeId>> find_positive_path(const SimplicialSystem& system, Vertex base,
                                                      int max_length, const std::vector<bool>& allowed) {
  const int n = system.num_labels();
  if (n > 8) throw std::invalid_argument("positive path search limited to 8 labels");
  if (max_length < 1) return std::nullopt;
  std::vector<std::uint64_t> pattern(static_cast<size_t>(system.num_edges()));
  for (const Edge& e : system.edges()) pattern[static_cast<size_t>(e.id)] = support_pattern(elementary_matrix(system, e.id));
  const std::uint64_t all = n * n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (n * n)) - 1);
  const std::uint64_t id = support_pattern(WinLoseMatrix::identity(n));

  struct Node {
    Vertex v;
    std::uint64_t p;
    int parent;
    EdgeId via;
    int depth;
  };
  std::vector<Node> nodes{{base, id, -1, -1, 0}};
  struct StateHash {
    size_t operator()(const std::pair<Vertex, std::uint64_t>& s) const {
      return std::hash<std::uint64_t>()(s.second * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint64_t>(s.first));
    }
  };
  std::unordered_set<std::pair<Vertex, std::uint64_t>, StateHash> seen;
  auto visited = [&](Vertex v, std::uint64_t p) { return !seen.insert({v, p}).second; };
  visited(base, id);
  for (size_t head = 0; head < nodes.size(); ++head) {
    const Node cur = nodes[head];
    if (cur.depth >= max_length) continue;
    for (EdgeId e : system.out_edges(cur.v)) {
      if (!allowed_edge(allowed, e)) continue;
      const Edge& ed = system.edge(e);
      std::uint64_t p = bool_product(cur.p, pattern[static_cast<size_t>(e)], n);
      if (ed.to == base && p == all) {
        std::vector<EdgeId> path{e};
        for (int i = static_cast<int>(head); nodes[static_cast<size_t>(i)].parent >= 0; i = nodes[static_cast<size_t>(i)].parent)
          path.push_back(nodes[static_cast<size_t>(i)].via);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (visited(ed.to, p)) continue;
      nodes.push_back({ed.to, p, static_cast<int>(head), e, cur.depth + 1});
    }
  }
  return std::nullopt;
}

bool is_unbordered(const std::vector<EdgeId>& word) {
  for (size_t k = 1; k < word.size(); ++k)
    if (std::equal(word.begin(), word.begin() + static_cast<long>(k), word.end() - static_cast<long>(k))) return false;
  return true;
}

std::optional<std::vector<EdgeId>> find_unbordered_positive_loop(const SimplicialSystem& system, Vertex base,
                                                                 int max_length, const std::vector<bool>& allowed) {
  auto bfs = find_positive_path(system, base, max_length, allowed);
  if (!bfs) return std::nullopt;
  if (is_unbordered(*bfs)) return bfs;
  // Enumerate loops by increasing length; the first positive unbordered one wins.
  const int n = system.num_labels();
  const std::uint64_t all = (std::uint64_t{1} << (n * n)) - 1;
  std::vector<std::uint64_t> pattern(static_cast<size_t>(system.num_edges()));
  for (const Edge& e : system.edges()) pattern[static_cast<size_t>(e.id)] = support_pattern(elementary_matrix(system, e.id));
  std::vector<EdgeId> path;
  std::optional<std::vector<EdgeId>> found;
  std::function<void(Vertex, std::uint64_t, int)> dfs = [&](Vertex v, std::uint64_t p, int remaining) {
    if (found) return;
    if (remaining == 0) {
      if (v == base && p == all && is_unbordered(path)) found = path;
      return;
    }
    for (EdgeId e : system.out_edges(v)) {
      if (!allowed_edge(allowed, e)) continue;
      path.push_back(e);
      dfs(system.edge(e).to, bool_product(p, pattern[static_cast<size_t>(e)], n), remaining - 1);
      path.pop_back();
      if (found) return;
    }
  };
  for (int len = static_cast<int>(bfs->size()); len <= max_length && !found; ++len)
    dfs(base, support_pattern(WinLoseMatrix::identity(n)), len);
  return found;
}

}  // namespace mcf
