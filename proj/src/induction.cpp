#include "mcf/induction.hpp"

#include <algorithm>
#include <cmath>

#include "mcf/numeric.hpp"

namespace mcf {

const char* to_string(StopReason r) {
  switch (r) {
    case StopReason::None: return "none";
    case StopReason::HoleReached: return "hole_reached";
    case StopReason::BoundaryTie: return "boundary_tie";
    case StopReason::MaxStepsExceeded: return "max_steps_exceeded";
  }
  return "unknown";
}

ParamPoint make_point(const SimplicialSystem& system, Vertex v, std::vector<mpq_class> lambda) {
  if (v < 0 || v >= system.num_vertices()) throw std::invalid_argument("unknown vertex");
  if (static_cast<int>(lambda.size()) != system.num_labels())
    throw std::invalid_argument("point has " + std::to_string(lambda.size()) + " coordinates, alphabet has " +
                                std::to_string(system.num_labels()));
  return ParamPoint{v, normalized(std::move(lambda))};
}

namespace {

// Index of the out-edge whose label carries the strictly smallest coordinate.
template <class Vec>
EdgeId losing_edge(const SimplicialSystem& system, Vertex v, const Vec& x) {
  const auto& outs = system.out_edges(v);
  if (outs.empty()) throw InductionError(StopReason::HoleReached, "hole reached at vertex '" + system.vertex_name(v) + "'");
  EdgeId best = outs[0];
  bool tie = false;
  for (size_t i = 1; i < outs.size(); ++i) {
    const auto& cand = x[static_cast<size_t>(system.edge(outs[i]).label)];
    const auto& cur = x[static_cast<size_t>(system.edge(best).label)];
    if (cand < cur) {
      best = outs[i];
      tie = false;
    } else if (cand == cur) {
      tie = true;
    }
  }
  if (tie) throw InductionError(StopReason::BoundaryTie, "minimum attained twice at vertex '" + system.vertex_name(v) + "'");
  return best;
}

}  // namespace

ParamPoint step(const SimplicialSystem& system, const ParamPoint& point, StepRecord* record) {
  const EdgeId e = losing_edge(system, point.vertex, point.lambda);
  const Label loser = system.edge(e).label;
  ParamPoint next{system.edge(e).to, point.lambda};
  LabelMask winners = 0;
  mpq_class total = 1;
  for (EdgeId o : system.out_edges(point.vertex)) {
    Label w = system.edge(o).label;
    if (w == loser) continue;
    next.lambda[static_cast<size_t>(w)] -= point.lambda[static_cast<size_t>(loser)];
    total -= point.lambda[static_cast<size_t>(loser)];
    winners |= 1u << w;
  }
  if (winners != 0)
    for (auto& x : next.lambda) x /= total;
  if (record) {
    record->edge = e;
    record->loser = loser;
    record->winners = winners;
    record->roof = total;
  }
  return next;
}

Coding code_point(const SimplicialSystem& system, const ParamPoint& point, size_t n) {
  // Clear denominators once and code projectively on integers.
  mpz_class common = 1;
  for (const auto& x : point.lambda) mpz_lcm(common.get_mpz_t(), common.get_mpz_t(), x.get_den().get_mpz_t());
  std::vector<mpz_class> ints;
  ints.reserve(point.lambda.size());
  for (const auto& x : point.lambda) ints.push_back(mpz_class(x.get_num() * (common / x.get_den())));
  return code_projective(system, point.vertex, std::move(ints), n);
}

bool in_cylinder(const SimplicialSystem& system, const ParamPoint& point, const std::vector<EdgeId>& gamma) {
  system.check_path(gamma);
  if (!gamma.empty() && system.edge(gamma.front()).from != point.vertex)
    throw std::invalid_argument("path does not start at the point's vertex");
  std::vector<mpq_class> x = point.lambda;
  for (EdgeId e : gamma) {
    const Edge& ed = system.edge(e);
    for (EdgeId o : system.out_edges(ed.from)) {
      Label w = system.edge(o).label;
      if (w != ed.label) x[static_cast<size_t>(w)] -= x[static_cast<size_t>(ed.label)];
    }
  }
  return std::all_of(x.begin(), x.end(), [](const mpq_class& q) { return q > 0; });
}

InducedStep induced_step(const SimplicialSystem& system, const std::vector<EdgeId>& gamma_star,
                         const ParamPoint& point, size_t max_steps) {
  if (gamma_star.empty()) throw std::invalid_argument("empty gamma*");
  system.check_path(gamma_star);
  const Vertex base = system.edge(gamma_star.front()).from;
  if (system.edge(gamma_star.back()).to != base) throw std::invalid_argument("gamma* is not a loop");
  if (point.vertex != base || !in_cylinder(system, point, gamma_star))
    throw std::invalid_argument("point is not in the cylinder of gamma*");

  InducedStep out;
  ParamPoint cur = point;
  mpq_class roof = 1;
  StepRecord rec;
  while (true) {
    if (out.length >= max_steps)
      throw InductionError(StopReason::MaxStepsExceeded, "no return within " + std::to_string(max_steps) + " steps");
    cur = step(system, cur, &rec);
    roof *= rec.roof;
    out.path.push_back(rec.edge);
    ++out.length;
    if (cur.vertex == base && in_cylinder(system, cur, gamma_star)) break;
  }
  out.point = std::move(cur);
  out.roof = roof;
  if (out.path.size() >= gamma_star.size())
    out.word.assign(out.path.begin() + static_cast<long>(gamma_star.size()), out.path.end());
  return out;
}

double hilbert_distance(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("vector size mismatch");
  mpq_class lo, hi;
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k] <= 0 || b[k] <= 0) throw std::invalid_argument("Hilbert distance needs positive vectors");
    mpq_class r = a[k] / b[k];
    if (k == 0 || r < lo) lo = r;
    if (k == 0 || r > hi) hi = r;
  }
  return log_of(mpq_class(hi / lo));
}

double birkhoff_contraction(const WinLoseMatrix& m) {
  if (!m.is_positive()) throw std::invalid_argument("Birkhoff coefficient needs a positive matrix");
  const int n = m.dim();
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::vector<mpq_class> ci, cj;
      for (int k = 0; k < n; ++k) {
        ci.emplace_back(m(k, i));
        cj.emplace_back(m(k, j));
      }
      d = std::max(d, hilbert_distance(ci, cj));
    }
  return std::tanh(d / 4.0);
}

}  // namespace mcf
