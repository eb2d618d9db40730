#include "doctest.h"

#include <cmath>
#include <set>

#include "mcf/catalog.hpp"
#include "mcf/graph.hpp"
#include "mcf/thermo.hpp"

using namespace mcf;

namespace {

WinLoseMatrix mat2(int a, int b, int c, int d) {
  WinLoseMatrix m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

std::string word_labels(const SimplicialSystem& s, const std::vector<EdgeId>& w) {
  std::string out;
  for (EdgeId e : w) out += s.label_name(s.edge(e).label);
  return out;
}

}  // namespace

TEST_CASE("perron values") {
  CHECK(perron_value(mat2(1, 1, 1, 2)) == doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2)).epsilon(1e-12));
  CHECK(std::exp(perron_value(mat2(1, 1, 1, 1))) == doctest::Approx(2.0));
  // Conjugating by the swap leaves the spectrum alone.
  CHECK(perron_value(mat2(2, 1, 1, 1)) == doctest::Approx(perron_value(mat2(1, 1, 1, 2))));
  CHECK(perron_value_double({1, 1, 1, 2}, 2) == doctest::Approx(0.962424).epsilon(1e-6));
}

TEST_CASE("gauss alphabet at L = 2") {
  auto s = build("gauss", 2).system;
  auto a = build_induced_alphabet(s, 0, {0, 1}, 2);
  std::set<std::string> words;
  for (const auto& l : a.letters) {
    words.insert(word_labels(s, l.word));
    CHECK(l.matrix.is_positive());
  }
  CHECK(words == std::set<std::string>{"", "1", "2", "11", "21", "22"});
  CHECK(a.letters.front().word.empty());
}

TEST_CASE("letter counts grow with L") {
  auto s = build("gauss", 2).system;
  size_t prev = 0;
  for (int L = 1; L <= 10; ++L) {
    auto n = build_induced_alphabet(s, 0, {0, 1}, L).letters.size();
    CHECK(n >= prev);
    prev = n;
  }
  // Words avoiding "12" are 2^a 1^b: (L+1)(L+2)/2 of them.
  CHECK(prev == 66);
}

TEST_CASE("gamma star must be positive and unbordered") {
  auto s = build("gauss", 2).system;
  CHECK_THROWS_AS(build_induced_alphabet(s, 0, {0}, 3), ThermoError);
  CHECK_THROWS_AS(build_induced_alphabet(s, 0, {0, 1, 0}, 3), ThermoError);
}

TEST_CASE("partition sums") {
  auto s = build("gauss", 2).system;
  auto a = build_induced_alphabet(s, 0, {0, 1}, 4);
  for (int n = 1; n <= 2; ++n)
    CHECK(partition_sum(a, n, 0.0) == doctest::Approx(n * std::log(static_cast<double>(a.letters.size()))));
  auto one = build_induced_alphabet(s, 0, {0, 1}, 0);
  REQUIRE(one.letters.size() == 1);
  CHECK(partition_sum(one, 1, 1.0) == doctest::Approx(-0.962424).epsilon(1e-6));
  auto sp = periodic_spectrum(a, 2);
  double prev = partition_sum(sp, 0.0);
  for (double k = 0.25; k < 4; k += 0.25) {
    double z = partition_sum(sp, k);
    CHECK(z < prev);
    prev = z;
  }
}

TEST_CASE("kappa solve and bracket failure") {
  auto s = build("gauss", 2).system;
  auto a = build_induced_alphabet(s, 0, {0, 1}, 8);
  auto sp = periodic_spectrum(a, 1);
  auto est = solve_kappa(sp, 0.01, 4.0);
  CHECK(est.kappa > 1.5);
  CHECK(est.kappa < 2.3);
  CHECK(est.pressure_lo > 0);
  CHECK(est.pressure_hi < 0);
  CHECK(std::abs(est.pressure_at_root) < 1e-6);
  CHECK_THROWS_AS(solve_kappa(sp, 3.0, 4.0), ThermoError);
}

TEST_CASE("tuple guard") {
  auto s = build("gauss", 2).system;
  auto a = build_induced_alphabet(s, 0, {0, 1}, 40);  // 861 letters
  CHECK_THROWS_AS(periodic_spectrum(a, 3), ThermoError);
}

TEST_CASE("dimension bounds") {
  CHECK(hausdorff_bound(3, 3) == doctest::Approx(2.0));
  CHECK(hausdorff_bound(2.476, 3) == doctest::Approx(1.825).epsilon(1e-3));
  CHECK(hausdorff_bound(2.8, 4) == doctest::Approx(2.7));
  CHECK_THROWS(hausdorff_bound(0, 3));
  CHECK_THROWS(hausdorff_bound(3.5, 3));
  CHECK(asymptotic_gasket_bound(2) == doctest::Approx(1 + std::log(2.0) / (std::log(2.0) * 3)));
  CHECK(asymptotic_gasket_bound(3) == doctest::Approx(2 + std::log(3.0) / (std::log(2.0) * 4)));
  CHECK(asymptotic_gasket_bound(4) == doctest::Approx(3.4));
}

TEST_CASE("restricted gasket alphabet") {
  auto ns = build("arnoux-rauzy", 2);
  const auto& s = ns.system;
  Vertex base = 0;
  auto gs = find_unbordered_positive_loop(s, base, 16, ns.restriction);
  REQUIRE(gs);
  auto a = build_induced_alphabet(s, base, *gs, 12, ns.restriction);
  CHECK(a.restricted);
  for (const auto& l : a.letters)
    for (EdgeId e : l.word) CHECK(ns.restriction[static_cast<size_t>(e)]);
}
