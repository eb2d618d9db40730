#pragma once

#include <gmpxx.h>

#include <vector>

#include "mcf/system.hpp"

namespace mcf {

// Square matrix of non-negative big integers indexed (label, label).
class WinLoseMatrix {
 public:
  WinLoseMatrix() = default;
  explicit WinLoseMatrix(int dim);  // zero matrix
  static WinLoseMatrix identity(int dim);

  int dim() const { return n_; }
  mpz_class& operator()(int i, int j) { return a_[static_cast<size_t>(i * n_ + j)]; }
  const mpz_class& operator()(int i, int j) const { return a_[static_cast<size_t>(i * n_ + j)]; }

  WinLoseMatrix operator*(const WinLoseMatrix& rhs) const;
  bool operator==(const WinLoseMatrix& rhs) const;

  mpz_class determinant() const;
  bool is_positive() const;
  // Bit length of the largest entry.
  size_t max_bits() const;
  // Entries as doubles, divided by 2^shift so the largest fits comfortably. Returns shift.
  long to_scaled_double(std::vector<double>& out) const;

 private:
  int n_ = 0;
  std::vector<mpz_class> a_;
};

// M_e = Id + sum over winners w of E_{w, l(e)}; the identity at a degree-one vertex.
WinLoseMatrix elementary_matrix(const SimplicialSystem& system, EdgeId e);

// Product M_{e1} ... M_{en}; throws std::invalid_argument on a non-contiguous path.
WinLoseMatrix path_matrix(const SimplicialSystem& system, const std::vector<EdgeId>& path);

// Boolean support pattern, row-major, for dim <= 8.
std::uint64_t support_pattern(const WinLoseMatrix& m);

}  // namespace mcf
