#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mcf/induction.hpp"
#include "mcf/matrix.hpp"
#include "mcf/rng.hpp"
#include "mcf/system.hpp"

namespace mcf {

enum class Family { Gauss, FullySubtractive, Poincare, Brun, Selmer, Cassaigne, ArnouxRauzy, Arp };

struct BuildOptions {
  bool unfolded = false;      // brun(3) without identifying paired bullets
  bool experimental = false;  // allow arp beyond three coordinates
};

// A catalog system with its section and coordinate change.
// For arnoux-rauzy, `dim` is the gasket dimension d and the system has d + 1 labels;
// for every other family `dim` is the number of coordinates.
struct NamedSystem {
  Family family;
  std::string name;
  int dim = 0;
  int coords = 0;
  SimplicialSystem system;
  std::vector<bool> section;               // per vertex
  std::vector<WinLoseMatrix> projection;   // per section vertex: x = P lambda (empty elsewhere)
  bool framed = false;                     // cassaigne: P follows a tracked permutation
  std::vector<bool> restriction;           // arnoux-rauzy: edges of the hole-free subgraph F
  bool experimental = false;
};

class CatalogError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CatalogEntry {
  std::string name;
  int min_dim;
  int max_dim;
  std::string note;
};
const std::vector<CatalogEntry>& catalog_entries();

NamedSystem build(std::string_view name, int dim, const BuildOptions& options = {});

// Hole-free ambient completion of arnoux-rauzy(d): hole edges redirected as in arp.
NamedSystem build_gasket_ambient(int d);

// Induction state at a section vertex; `frame` is used only by framed systems.
struct SectionState {
  ParamPoint point;
  std::vector<int> frame;  // x_i = lambda_{frame[i]}
};

class ReferenceError : public std::runtime_error {
 public:
  enum class Kind { Tie, Domain };
  ReferenceError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Whether x lies in the declared domain (selmer: max < sum of the two smallest).
bool in_domain(const NamedSystem& ns, const std::vector<mpq_class>& x);

// Throws ReferenceError on ties or outside the domain.
SectionState embed(const NamedSystem& ns, const std::vector<mpq_class>& x);
std::vector<mpq_class> project(const NamedSystem& ns, const SectionState& state);

// Win-lose steps until the next section vertex; propagates InductionError.
SectionState next_return(const NamedSystem& ns, const SectionState& state, size_t max_steps = 100000);

// The classical map in original coordinates, renormalized. Throws ReferenceError.
std::vector<mpq_class> reference_step(const NamedSystem& ns, const std::vector<mpq_class>& x);

struct ConjugacyTrial {
  std::vector<mpq_class> start;
  enum class Verdict { Agree, Disagree, Tie, Exit } verdict = Verdict::Agree;
  int steps_done = 0;
  int first_disagreement = -1;  // 1-based reference step index
};
const char* to_string(ConjugacyTrial::Verdict v);

struct ConjugacyReport {
  std::vector<ConjugacyTrial> trials;
  size_t agree = 0, disagree = 0, ties = 0, exits = 0;
  double tie_rate = 0;
};

ConjugacyTrial conjugacy_check(const NamedSystem& ns, const std::vector<mpq_class>& x, int steps);

// Random dyadic points of the domain (2^-bits grid), trial i from substream i.
ConjugacyReport conjugacy_suite(const NamedSystem& ns, int trials, int steps, std::uint64_t seed, int bits = 256);

struct GasketSurvival {
  bool survived = false;
  int steps = 0;
};

// Applies the Arnoux-Rauzy map up to max_steps times on d + 1 coordinates.
GasketSurvival gasket_survival(int d, const std::vector<mpq_class>& x, int max_steps);

}  // namespace mcf
