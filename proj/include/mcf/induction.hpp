#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "mcf/matrix.hpp"
#include "mcf/system.hpp"

namespace mcf {

// (vertex, point of the open simplex); lambda sums to exactly one.
struct ParamPoint {
  Vertex vertex = -1;
  std::vector<mpq_class> lambda;
};

// Normalizes lambda; throws std::invalid_argument on size mismatch or non-positive entries.
ParamPoint make_point(const SimplicialSystem& system, Vertex v, std::vector<mpq_class> lambda);

enum class StopReason { None, HoleReached, BoundaryTie, MaxStepsExceeded };
const char* to_string(StopReason r);

class InductionError : public std::runtime_error {
 public:
  InductionError(StopReason reason, const std::string& what) : std::runtime_error(what), reason_(reason) {}
  StopReason reason() const { return reason_; }

 private:
  StopReason reason_;
};

struct StepRecord {
  EdgeId edge = -1;
  Label loser = -1;
  LabelMask winners = 0;
  mpq_class roof;  // |M_e^{-1} lambda|; the roof increment is minus its log
};

// One win-lose step. Throws InductionError (HoleReached or BoundaryTie).
ParamPoint step(const SimplicialSystem& system, const ParamPoint& point, StepRecord* record = nullptr);

struct Coding {
  std::vector<EdgeId> edges;
  StopReason stop = StopReason::None;
};

Coding code_point(const SimplicialSystem& system, const ParamPoint& point, size_t n);

// Same coding on an unnormalized positive integer vector (projective coordinates).
// Int is any signed integer type closed under subtraction; values only decrease.
template <class Int>
Coding code_projective(const SimplicialSystem& system, Vertex v, std::vector<Int> x, size_t n) {
  Coding c;
  for (size_t k = 0; k < n; ++k) {
    const auto& outs = system.out_edges(v);
    if (outs.empty()) {
      c.stop = StopReason::HoleReached;
      return c;
    }
    EdgeId best = outs[0];
    bool tie = false;
    for (size_t i = 1; i < outs.size(); ++i) {
      const Int& cand = x[static_cast<size_t>(system.edge(outs[i]).label)];
      const Int& cur = x[static_cast<size_t>(system.edge(best).label)];
      if (cand < cur) {
        best = outs[i];
        tie = false;
      } else if (cand == cur) {
        tie = true;
      }
    }
    if (tie) {
      c.stop = StopReason::BoundaryTie;
      return c;
    }
    const Label loser = system.edge(best).label;
    for (EdgeId o : outs) {
      Label w = system.edge(o).label;
      if (w != loser) x[static_cast<size_t>(w)] -= x[static_cast<size_t>(loser)];
    }
    c.edges.push_back(best);
    v = system.edge(best).to;
  }
  return c;
}

// Whether M_gamma^{-1} lambda is strictly positive; gamma must start at point.vertex.
bool in_cylinder(const SimplicialSystem& system, const ParamPoint& point, const std::vector<EdgeId>& gamma);

struct InducedStep {
  ParamPoint point;
  std::vector<EdgeId> path;  // every edge traversed until the return
  std::vector<EdgeId> word;  // path with the leading gamma* removed
  mpq_class roof;            // product of per-step roof rationals
  size_t length = 0;
};

// First return to the cylinder of gamma* at its base vertex.
InducedStep induced_step(const SimplicialSystem& system, const std::vector<EdgeId>& gamma_star,
                         const ParamPoint& point, size_t max_steps = 1000000);

// tanh(D/4) with D the largest Hilbert distance between two columns.
double birkhoff_contraction(const WinLoseMatrix& m);

// Hilbert projective distance between two positive vectors.
double hilbert_distance(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b);

}  // namespace mcf
