#include "mcf/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace mcf {

WinLoseMatrix::WinLoseMatrix(int dim) : n_(dim), a_(static_cast<size_t>(dim * dim), mpz_class(0)) {}

WinLoseMatrix WinLoseMatrix::identity(int dim) {
  WinLoseMatrix m(dim);
  for (int i = 0; i < dim; ++i) m(i, i) = 1;
  return m;
}

WinLoseMatrix WinLoseMatrix::operator*(const WinLoseMatrix& rhs) const {
  if (n_ != rhs.n_) throw std::invalid_argument("matrix dimension mismatch");
  WinLoseMatrix out(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const mpz_class& aik = (*this)(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < n_; ++j) {
        const mpz_class& bkj = rhs(k, j);
        if (bkj != 0) out(i, j) += aik * bkj;
      }
    }
  return out;
}

bool WinLoseMatrix::operator==(const WinLoseMatrix& rhs) const { return n_ == rhs.n_ && a_ == rhs.a_; }

mpz_class WinLoseMatrix::determinant() const {
  // Fraction-free Bareiss elimination.
  if (n_ == 0) return 1;
  std::vector<mpz_class> m = a_;
  auto at = [&](int i, int j) -> mpz_class& { return m[static_cast<size_t>(i * n_ + j)]; };
  int sign = 1;
  mpz_class prev = 1;
  for (int k = 0; k < n_ - 1; ++k) {
    if (at(k, k) == 0) {
      int p = k + 1;
      while (p < n_ && at(p, k) == 0) ++p;
      if (p == n_) return 0;
      for (int j = 0; j < n_; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n_; ++i) {
      for (int j = k + 1; j < n_; ++j) {
        at(i, j) = at(i, j) * at(k, k) - at(i, k) * at(k, j);
        mpz_divexact(at(i, j).get_mpz_t(), at(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = at(k, k);
  }
  return sign * at(n_ - 1, n_ - 1);
}

bool WinLoseMatrix::is_positive() const {
  for (const auto& x : a_)
    if (x <= 0) return false;
  return !a_.empty();
}

size_t WinLoseMatrix::max_bits() const {
  size_t b = 0;
  for (const auto& x : a_) b = std::max(b, mpz_sizeinbase(x.get_mpz_t(), 2));
  return b;
}

long WinLoseMatrix::to_scaled_double(std::vector<double>& out) const {
  const size_t bits = max_bits();
  const long shift = bits > 900 ? static_cast<long>(bits) - 900 : 0;
  out.resize(a_.size());
  for (size_t i = 0; i < a_.size(); ++i) {
    if (shift == 0) {
      out[i] = a_[i].get_d();
    } else {
      mpz_class t;
      mpz_fdiv_q_2exp(t.get_mpz_t(), a_[i].get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
      out[i] = t.get_d();
    }
  }
  return shift;
}

WinLoseMatrix elementary_matrix(const SimplicialSystem& system, EdgeId e) {
  const Edge& ed = system.edge(e);
  WinLoseMatrix m = WinLoseMatrix::identity(system.num_labels());
  for (EdgeId o : system.out_edges(ed.from)) {
    Label w = system.edge(o).label;
    if (w != ed.label) m(w, ed.label) += 1;
  }
  return m;
}

WinLoseMatrix path_matrix(const SimplicialSystem& system, const std::vector<EdgeId>& path) {
  system.check_path(path);
  const int n = system.num_labels();
  WinLoseMatrix m = WinLoseMatrix::identity(n);
  // Right-multiplying by M_e adds the winner columns into the loser column.
  for (EdgeId e : path) {
    const Edge& ed = system.edge(e);
    for (EdgeId o : system.out_edges(ed.from)) {
      Label w = system.edge(o).label;
      if (w == ed.label) continue;
      for (int i = 0; i < n; ++i) m(i, ed.label) += m(i, w);
    }
  }
  return m;
}

std::uint64_t support_pattern(const WinLoseMatrix& m) {
  if (m.dim() > 8) throw std::invalid_argument("support pattern limited to dimension 8");
  std::uint64_t p = 0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j)
      if (m(i, j) != 0) p |= std::uint64_t{1} << (i * m.dim() + j);
  return p;
}

}  // namespace mcf
