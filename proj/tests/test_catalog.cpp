#include "doctest.h"

#include <algorithm>

#include "mcf/catalog.hpp"
#include "mcf/graph.hpp"
#include "mcf/numeric.hpp"
#include "mcf/stochastic.hpp"

using namespace mcf;

namespace {

std::vector<mpq_class> Q(std::initializer_list<const char*> xs) {
  std::vector<mpq_class> v;
  for (auto x : xs) v.push_back(parse_rational(x));
  return v;
}

}  // namespace

TEST_CASE("catalog sizes") {
  auto g = build("gauss", 2);
  CHECK(g.system.num_vertices() == 1);
  CHECK(g.system.num_edges() == 2);
  auto b3 = build("brun", 3);
  CHECK(b3.system.num_vertices() == 9);
  CHECK(is_strongly_connected(b3.system));
  CHECK(b3.system.holes().empty());
  CHECK(build("poincare", 3).system.num_vertices() == 4);
  CHECK(build("poincare", 4).system.num_vertices() == 17);
  auto ar = build("arnoux-rauzy", 3);
  CHECK(ar.system.num_labels() == 4);
  CHECK_FALSE(ar.system.holes().empty());
}

TEST_CASE("unknown names and dimensions") {
  CHECK_THROWS_AS(build("jacobi-perron", 3), CatalogError);
  CHECK_THROWS_AS(build("brun", 2), CatalogError);
  CHECK_THROWS_AS(build("arp", 4), CatalogError);
  CHECK_NOTHROW(build("arp", 4, {false, true}));
}

TEST_CASE("every entry validates and classifies as expected") {
  for (const auto& e : catalog_entries()) {
    for (int d = e.min_dim; d <= std::min(e.max_dim, 5); ++d) {
      auto ns = build(e.name, d);
      CHECK_NOTHROW(validate_system(to_raw(ns.system)));
      auto rep = check_non_degenerating(ns.system);
      const bool expect = e.name != "fully-subtractive" && e.name != "poincare" && e.name != "arnoux-rauzy";
      CHECK_MESSAGE(rep.passes == expect, e.name << " " << d);
    }
  }
}

TEST_CASE("gasket restriction") {
  for (int d = 2; d <= 4; ++d) {
    auto ns = build("arnoux-rauzy", d);
    std::vector<EdgeId> ids;
    auto f = ns.system.restrict_edges(ns.restriction, &ids);
    // Isolated hole vertices aside, F is strongly connected and carries every label.
    LabelMask labels = 0;
    for (const auto& e : f.edges()) labels |= 1u << e.label;
    CHECK(labels == f.full_mask());
    auto scc = strongly_connected_components(f);
    int bearing = 0;
    for (bool b : scc.edge_bearing) bearing += b;
    CHECK(bearing == 1);
    auto amb = build_gasket_ambient(d);
    CHECK(amb.system.holes().empty());
    CHECK(amb.system.num_edges() > static_cast<int>(ids.size()));
  }
}

TEST_CASE("reference steps") {
  auto brun = build("brun", 3);
  CHECK(reference_step(brun, Q({"5/10", "3/10", "2/10"})) == Q({"2/7", "3/7", "2/7"}));
  auto cas = build("cassaigne", 3);
  CHECK(reference_step(cas, Q({"3/6", "2/6", "1/6"})) == Q({"2/5", "1/5", "2/5"}));
  auto ar = build("arnoux-rauzy", 2);
  try {
    reference_step(ar, Q({"1/2", "1/4", "1/4"}));
    FAIL("expected a reference error");
  } catch (const ReferenceError& e) {
    CHECK(e.kind() != ReferenceError::Kind::Domain);  // equality is the boundary of C
  }
  try {
    reference_step(ar, Q({"2/5", "7/20", "1/4"}));
    FAIL("expected a reference error");
  } catch (const ReferenceError& e) {
    CHECK(e.kind() == ReferenceError::Kind::Domain);
  }
  CHECK_THROWS_AS(reference_step(brun, Q({"2/5", "2/5", "1/5"})), ReferenceError);
}

TEST_CASE("gasket survival") {
  CHECK(gasket_survival(2, Q({"1/2", "1/4", "1/4"}), 10).steps == 0);
  auto s = gasket_survival(2, Q({"7/10", "2/10", "1/10"}), 10);
  CHECK_FALSE(s.survived);
  CHECK(s.steps == 2);
  // Tribonacci-like points survive long.
  auto t = gasket_survival(2, Q({"927/1705", "504/1705", "274/1705"}), 5);
  CHECK(t.survived);
}

TEST_CASE("selmer domain") {
  auto sel = build("selmer-restricted", 3);
  CHECK(in_domain(sel, Q({"4/10", "3/10", "3/10"})));
  CHECK_FALSE(in_domain(sel, Q({"5/9", "3/9", "1/9"})));
  CHECK(in_domain(sel, Q({"4/10", "35/100", "25/100"})));
  CHECK_FALSE(in_domain(sel, Q({"7/10", "2/10", "1/10"})));
  CHECK_THROWS_AS(embed(sel, Q({"7/10", "2/10", "1/10"})), ReferenceError);
}

TEST_CASE("embed and project are inverse") {
  Rng rng(12);
  for (const char* name : {"brun", "selmer-restricted", "cassaigne", "arp", "gauss", "poincare"}) {
    const int d = std::string(name) == "gauss" ? 2 : 3;
    auto ns = build(name, d);
    int done = 0;
    for (int i = 0; i < 1000 && done < 200; ++i) {
      auto x = sample_simplex_point(rng, ns.coords, 64);
      if (!in_domain(ns, x)) continue;
      auto st = embed(ns, x);
      CHECK(ns.section[static_cast<size_t>(st.point.vertex)]);
      CHECK(project(ns, st) == x);
      ++done;
    }
    CHECK(done > 0);
  }
}

TEST_CASE("first return agrees with the classical map") {
  for (auto [name, d] : std::vector<std::pair<const char*, int>>{
           {"brun", 3}, {"brun", 4}, {"selmer-restricted", 3}, {"cassaigne", 3}, {"arp", 3}, {"gauss", 2}}) {
    auto rep = conjugacy_suite(build(name, d), 40, 30, 1234);
    CHECK_MESSAGE(rep.disagree == 0, name);
    CHECK_MESSAGE(rep.agree == 40, name);
  }
  auto unfolded = conjugacy_suite(build("brun", 3, {true, false}), 40, 30, 1234);
  CHECK(unfolded.agree == 40);
}

TEST_CASE("gasket points exit through C") {
  auto rep = conjugacy_suite(build("arnoux-rauzy", 2), 20, 50, 3);
  CHECK(rep.exits == 20);
  CHECK(rep.disagree == 0);
}

TEST_CASE("selmer orientation: the decreased coordinate never loses") {
  // Selmer subtracts the smallest coordinate from the largest one, yet the first
  // win-lose step at the section vertex is lost by the second smallest coordinate.
  for (int n : {3, 4, 5}) {
    auto ns = build("selmer-restricted", n);
    Rng rng(4);
    int seen = 0;
    while (seen < 100) {
      auto x = sample_simplex_point(rng, n, 64);
      if (!in_domain(ns, x)) continue;
      std::vector<int> rho(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) rho[static_cast<size_t>(i)] = i;
      std::sort(rho.begin(), rho.end(), [&](int a, int b) { return x[static_cast<size_t>(a)] > x[static_cast<size_t>(b)]; });
      auto st = embed(ns, x);
      StepRecord rec;
      step(ns.system, st.point, &rec);
      CHECK(rec.loser == rho[static_cast<size_t>(n - 2)]);
      CHECK(rec.loser != rho[0]);
      ++seen;
    }
  }
}
