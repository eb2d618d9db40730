#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mcf/matrix.hpp"
#include "mcf/system.hpp"

namespace mcf {

// How branch matrices are formed when the loops are confined to a subgraph F.
enum class MatrixSource {
  Ambient,     // out-label sets of the ambient system (potential r_F + delta)
  Standalone,  // out-label sets of F itself (a different potential)
};

struct Letter {
  std::vector<EdgeId> word;  // ids in the ambient system
  WinLoseMatrix matrix;      // M_{gamma* w}
};

struct InducedAlphabet {
  Vertex base = -1;
  std::vector<EdgeId> gamma_star;
  int max_length = 0;
  bool restricted = false;
  MatrixSource source = MatrixSource::Ambient;
  std::vector<Letter> letters;  // depth-first order, empty word first
};

class ThermoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Loops w at base with |w| <= L avoiding gamma* as a factor. gamma* must be an entrywise
// positive loop at base; it must also be unbordered, otherwise the letters do not code
// first returns. `allowed` (optional) marks the edges of F, which must carry every label.
InducedAlphabet build_induced_alphabet(const SimplicialSystem& system, Vertex base,
                                       const std::vector<EdgeId>& gamma_star, int max_length,
                                       const std::vector<bool>& allowed = {},
                                       MatrixSource source = MatrixSource::Ambient);

// log of the spectral radius, by power iteration from the all-ones vector with
// Collatz-Wielandt stopping at relative gap 1e-12. Throws ThermoError on non-convergence.
double perron_value(const WinLoseMatrix& m);
double perron_value_double(std::vector<double> m, int dim, int max_iterations = 100000);

// log lambda_max of every n-tuple product, tuples in lexicographic index order.
struct PeriodicSpectrum {
  int n = 0;
  size_t letters = 0;
  std::vector<double> log_lambda;
};

inline constexpr size_t kMaxTuples = 60'000'000;

// Throws ThermoError when letters^n exceeds kMaxTuples.
PeriodicSpectrum periodic_spectrum(const InducedAlphabet& alphabet, int n);

// log Z_n(kappa) = log sum over tuples of lambda_max^-kappa.
double partition_sum(const PeriodicSpectrum& spectrum, double kappa);
double partition_sum(const InducedAlphabet& alphabet, int n, double kappa);

struct PressureEstimate {
  int n = 0;
  int max_length = 0;
  size_t letters = 0;
  double kappa = 0;
  double bracket_lo = 0, bracket_hi = 0;
  double pressure_lo = 0, pressure_hi = 0;  // (1/n) log Z_n at the bracket ends
  double pressure_at_root = 0;
  double tolerance = 0;
  int iterations = 0;
};

// Bisection root of (1/n) log Z_n(kappa) = 0. Throws ThermoError when the bracket
// does not change sign.
PressureEstimate solve_kappa(const PeriodicSpectrum& spectrum, double lo, double hi, double tolerance = 1e-10);

// |A| - 2 + kappa/|A|.
double hausdorff_bound(double kappa, int num_labels);

// d - 1 + log d / (log 2 (d + 1)).
double asymptotic_gasket_bound(int d);

}  // namespace mcf
