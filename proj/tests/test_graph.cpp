#include "doctest.h"

#include <set>

#include "mcf/catalog.hpp"
#include "mcf/graph.hpp"
#include "mcf/rng.hpp"
#include "mcf/system.hpp"

using namespace mcf;

namespace {

SimplicialSystem make(std::vector<std::string> labels, std::vector<std::string> verts,
                      std::vector<RawSystem::RawEdge> edges) {
  RawSystem r{std::move(labels), std::move(verts), std::move(edges)};
  return validate_system(r).system;
}

// Label coverage by exhaustive walk over (vertex, labels seen) states.
std::vector<bool> naive_cover(const SimplicialSystem& s) {
  const int nv = s.num_vertices();
  const LabelMask full = s.full_mask();
  std::vector<bool> out(static_cast<size_t>(nv), false);
  for (Vertex v0 = 0; v0 < nv; ++v0) {
    std::set<std::pair<Vertex, LabelMask>> seen;
    std::vector<std::pair<Vertex, LabelMask>> stack{{v0, 0}};
    while (!stack.empty()) {
      auto [v, m] = stack.back();
      stack.pop_back();
      if (m == full) {
        out[static_cast<size_t>(v0)] = true;
        break;
      }
      if (!seen.insert({v, m}).second) continue;
      for (EdgeId e : s.out_edges(v)) stack.push_back({s.edge(e).to, m | (1u << s.edge(e).label)});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("tarjan components and heights") {
  auto s = make({"1", "2"}, {"a", "b", "c", "d"},
                {{"a", "b", "1"}, {"b", "a", "1"}, {"b", "c", "2"}, {"c", "d", "1"}, {"d", "d", "1"}});
  auto d = strongly_connected_components(s);
  REQUIRE(d.components.size() == 3);
  CHECK(d.components[0] == std::vector<Vertex>{0, 1});
  CHECK(d.components[1] == std::vector<Vertex>{2});
  CHECK(d.components[2] == std::vector<Vertex>{3});
  CHECK(d.edge_bearing[0]);
  CHECK_FALSE(d.edge_bearing[1]);
  CHECK(d.edge_bearing[2]);
  CHECK(d.height[0] == 2);
  CHECK(d.height[2] == 0);
  CHECK_FALSE(is_strongly_connected(s));
}

TEST_CASE("degenerate subgraph keeps lambda edges where present") {
  auto s = make({"1", "2", "3"}, {"a", "b"},
                {{"a", "a", "1"}, {"a", "b", "3"}, {"b", "a", "2"}, {"b", "b", "3"}});
  std::vector<EdgeId> ids;
  auto g = degenerate_subgraph(s, 0b001u, &ids);
  // a keeps only its 1-edge; b has no 1-edge and keeps both.
  CHECK(g.num_edges() == 3);
  CHECK(ids == std::vector<EdgeId>{0, 2, 3});
}

TEST_CASE("fully subtractive fails with witness {1,2}") {
  auto ns = build("fully-subtractive", 3);
  auto rep = check_non_degenerating(ns.system);
  CHECK_FALSE(rep.passes);
  REQUIRE_FALSE(rep.scc_failures.empty());
  CHECK(rep.scc_failures[0].lambda == 0b011u);
  for (const auto& f : rep.scc_failures) CHECK(replay_scc_failure(ns.system, f));
}

TEST_CASE("gauss and brun pass") {
  CHECK(check_non_degenerating(build("gauss", 2).system).passes);
  CHECK(check_non_degenerating(build("brun", 3).system).passes);
  CHECK(check_non_degenerating(build("brun", 3, {true, false}).system).passes);
}

TEST_CASE("a hole fails the criterion") {
  auto s = make({"1", "2"}, {"a", "h"}, {{"a", "a", "1"}, {"a", "h", "2"}});
  auto rep = check_non_degenerating(s);
  CHECK_FALSE(rep.passes);
  CHECK(rep.holes.size() == 1);
}

TEST_CASE("missing label makes every vertex a reachability failure") {
  auto s = make({"1", "2", "3"}, {"a"}, {{"a", "a", "1"}, {"a", "a", "2"}});
  auto rep = check_non_degenerating(s);
  CHECK(rep.reachability_failures.size() == 1);
  CHECK_FALSE(rep.passes);
}

TEST_CASE("tampered witness does not replay") {
  auto ns = build("fully-subtractive", 3);
  auto f = check_non_degenerating(ns.system).scc_failures.at(0);
  f.lambda = ns.system.full_mask();
  CHECK_FALSE(replay_scc_failure(ns.system, f));
}

TEST_CASE("label coverage agrees with exhaustive search on random small systems") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int nl = 2 + static_cast<int>(rng.below(2));
    const int nv = 1 + static_cast<int>(rng.below(6));
    RawSystem r;
    for (int a = 0; a < nl; ++a) r.alphabet.push_back(std::to_string(a + 1));
    for (int v = 0; v < nv; ++v) r.vertices.push_back("v" + std::to_string(v));
    for (int v = 0; v < nv; ++v)
      for (int a = 0; a < nl; ++a)
        if (rng.below(3) != 0)
          r.edges.push_back({r.vertices[static_cast<size_t>(v)], r.vertices[rng.below(static_cast<std::uint64_t>(nv))],
                             r.alphabet[static_cast<size_t>(a)]});
    auto s = validate_system(r).system;
    CHECK(covers_all_labels(s) == naive_cover(s));
    ++checked;
  }
  CHECK(checked == 400);
}

TEST_CASE("criterion refuses huge alphabets") {
  RawSystem r;
  for (int a = 0; a < 17; ++a) r.alphabet.push_back(std::to_string(a));
  r.vertices = {"o"};
  for (const auto& a : r.alphabet) r.edges.push_back({"o", "o", a});
  auto s = validate_system(r).system;
  CHECK_THROWS_AS(check_non_degenerating(s), std::invalid_argument);
}

TEST_CASE("borders") {
  CHECK(is_unbordered({0, 1}));
  CHECK(is_unbordered({0}));
  CHECK_FALSE(is_unbordered({0, 1, 0}));
  CHECK_FALSE(is_unbordered({0, 0}));
  CHECK(is_unbordered({0, 0, 1}));
}

TEST_CASE("positive loops on gauss") {
  auto s = build("gauss", 2).system;
  auto p = find_positive_path(s, 0, 4);
  REQUIRE(p);
  CHECK(p->size() == 2);
  auto u = find_unbordered_positive_loop(s, 0, 6);
  REQUIRE(u);
  CHECK(is_unbordered(*u));
  // Only label-1 edges allowed: no positive loop exists.
  std::vector<bool> allowed{true, false};
  CHECK_FALSE(find_positive_path(s, 0, 8, allowed));
}
