#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mcf/rng.hpp"
#include "mcf/system.hpp"

namespace mcf {

// Probability of each out-edge of v (in out_edges order): q_label / sum of q over out-labels.
std::vector<mpq_class> edge_law(const SimplicialSystem& system, Vertex v, const std::vector<mpq_class>& q);
std::vector<double> edge_law(const SimplicialSystem& system, Vertex v, const std::vector<double>& q);

// Row vector q M_gamma.
std::vector<mpq_class> distort(const SimplicialSystem& system, std::vector<mpq_class> q, const std::vector<EdgeId>& path);

// nu_q(Delta^gamma) = 1 / (n! prod_i (q M_gamma)_i).
mpq_class cylinder_measure(const std::vector<mpq_class>& q, const SimplicialSystem& system,
                           const std::vector<EdgeId>& path);

// P_q(gamma) = nu_q(Delta^gamma) / nu_q(Delta).
mpq_class path_probability(const std::vector<mpq_class>& q, const SimplicialSystem& system,
                           const std::vector<EdgeId>& path);

// max_A q < K min_Lambda q.
bool is_balanced(const std::vector<mpq_class>& q, LabelMask lambda, const mpq_class& K);

// Uniform point of the simplex on the grid 2^-bits, as integers summing to 2^bits.
// Resamples when a coordinate is zero or two coordinates coincide. 32 <= bits <= 62.
std::vector<std::int64_t> sample_simplex_integers(Rng& rng, int n, int bits);
// Same law as exact rationals; bits up to 4096 (above 62 the cut points are big integers).
std::vector<mpq_class> sample_simplex_point(Rng& rng, int n, int bits);

struct StoppingTime {
  enum class Kind { Win, Lose, Jump, JumpCoord, Escape, MinMax, SuffixPattern, LeaveSubgraph, StepCount };
  Kind kind = Kind::StepCount;
  Label label = -1;
  mpq_class tau = 1;
  LabelMask set = 0;
  bool prose_variant = false;  // Escape: compare against the initial distortion on Lambda
  std::vector<EdgeId> pattern;
  std::vector<bool> subgraph;  // LeaveSubgraph: edges of F
  size_t steps = 0;

  static StoppingTime win(Label a);
  static StoppingTime lose(Label a);
  static StoppingTime jump(const mpq_class& tau);
  static StoppingTime jump_coord(Label a, const mpq_class& tau);
  static StoppingTime escape(LabelMask lambda, bool prose_variant = false);
  static StoppingTime min_max(LabelMask lambda);
  static StoppingTime suffix(std::vector<EdgeId> pattern);
  static StoppingTime leave(std::vector<bool> subgraph_edges);
  static StoppingTime step_count(size_t n);
};

// Grammar: win:A | lose:A | jump:T | jumpcoord:A:T | escape:A,B[:prose] | minmax:A,B |
// suffix:A,B,.. (labels read from the walk's start vertex) | steps:N
StoppingTime parse_stopping_time(std::string_view text, const SimplicialSystem& system, Vertex start);
std::string describe(const StoppingTime& s, const SimplicialSystem& system);

struct WalkOptions {
  size_t max_steps = 10000;
  bool fast = false;            // double-precision distortion with rescaling
  std::vector<bool> halt_on;    // which stops end the walk; empty means all
};

struct WalkOutcome {
  std::vector<EdgeId> path;
  std::vector<long> fired_at;   // first index at which each stop held, -1 if never
  bool truncated = false;
  bool hole = false;
  std::vector<double> log_q;    // final distortion, natural log
  std::vector<mpq_class> q;     // final distortion, exact mode only
};

WalkOutcome sample_walk(const SimplicialSystem& system, Vertex start, const std::vector<mpq_class>& q0,
                        const std::vector<StoppingTime>& stops, Rng& rng, const WalkOptions& options = {});

// Replays stops along a stored path in exact arithmetic; returns first firing indices.
std::vector<long> evaluate_stops(const SimplicialSystem& system, Vertex start, const std::vector<mpq_class>& q0,
                                 const std::vector<StoppingTime>& stops, const std::vector<EdgeId>& path);

struct OrderEstimate {
  std::uint64_t trials = 0;
  std::uint64_t a_first = 0;     // trials where A came first (ties per `strict`)
  std::uint64_t b_first = 0;
  std::uint64_t truncated = 0;   // neither fired within max_steps
  std::uint64_t holes = 0;       // walk fell into a hole first
  std::uint64_t fired_a = 0;
  std::uint64_t fired_b = 0;
  double frequency = 0;          // a_first / trials
  double frequency_upper = 0;    // counting every truncated or hole trial as A
  double stderr_ = 0;            // binomial standard error of frequency
  double stderr_upper = 0;
  std::uint64_t seed = 0;
};

// Monte Carlo frequency of {A <= B} (or {A < B} when strict); trial i uses substream i.
OrderEstimate estimate_order_prob(const SimplicialSystem& system, Vertex start, const std::vector<mpq_class>& q0,
                                  const StoppingTime& a, const StoppingTime& b, std::uint64_t trials,
                                  std::uint64_t seed, const WalkOptions& options = {}, bool strict = false);

// (phi + 1/phi) / (1 - 1/phi), the constant of the stable-subgraph escape bound.
double golden_trap_constant();

// One vertex with self-loops labeled 1 and 2 and an edge labeled 3 into a hole.
SimplicialSystem stable_trap_fixture();

}  // namespace mcf
