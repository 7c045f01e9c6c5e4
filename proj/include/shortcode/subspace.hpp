#pragma once

// Subspaces of GF(2)^n in canonical reduced-row-echelon form, full bases
// with cached inverses, subspace counting, and uniform samplers.
//
// The RREF representative makes equality and hashing bitwise: two
// generating sets with the same row space produce identical Subspace values.

#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "shortcode/gf2.hpp"
#include "shortcode/prng.hpp"

namespace shortcode {

using BigInt = boost::multiprecision::cpp_int;

class Subspace {
 public:
  Subspace() = default;

  /// Canonical span of the rows of `gens` inside GF(2)^(gens.cols()).
  static Subspace span(GF2Matrix gens) {
    auto [red, pivots] = rref(std::move(gens));
    red.truncate_rows(int(pivots.size()));
    Subspace s;
    s.n_ = red.cols();
    s.basis_ = std::move(red);
    return s;
  }

  /// Wraps a matrix already known to be in reduced row echelon form with no
  /// zero rows; skips re-reduction. Callers own the invariant.
  static Subspace from_rref(GF2Matrix basis) {
    Subspace s;
    s.n_ = basis.cols();
    s.basis_ = std::move(basis);
    return s;
  }

  static Subspace zero(int n) { return span(GF2Matrix(0, n)); }

  static Subspace full(int n) { return span(GF2Matrix::identity(n)); }

  int ambient() const { return n_; }
  int dim() const { return basis_.rows(); }

  /// RREF basis; rows are independent, pivot columns leftmost-first.
  const GF2Matrix& basis() const { return basis_; }

  bool contains(const GF2Vector& v) const {
    GF2Vector residue = v;
    for (int i = 0; i < basis_.rows(); ++i) {
      int p = basis_.row(i).lowest_set();
      if (residue.get(p)) residue ^= basis_.row(i);
    }
    return residue.is_zero();
  }

  bool contains_subspace(const Subspace& other) const {
    for (int i = 0; i < other.basis_.rows(); ++i)
      if (!contains(other.basis_.row(i))) return false;
    return true;
  }

  /// Coefficients x with x * basis = v, when v lies in the subspace.
  std::optional<GF2Vector> coordinates(const GF2Vector& v) const {
    GF2Vector residue = v;
    GF2Vector x(dim());
    for (int i = 0; i < basis_.rows(); ++i) {
      int p = basis_.row(i).lowest_set();
      if (residue.get(p)) {
        residue ^= basis_.row(i);
        x.set(i, true);
      }
    }
    if (!residue.is_zero()) return std::nullopt;
    return x;
  }

  /// Element indexed by the bits of `idx` over the basis rows; idx < 2^dim.
  GF2Vector element(uint64_t idx) const {
    GF2Vector v(n_);
    for (int i = 0; i < dim(); ++i)
      if ((idx >> i) & 1) v ^= basis_.row(i);
    return v;
  }

  std::vector<GF2Vector> elements() const {
    if (dim() > 24) throw resource_error("subspace too large to enumerate: 2^" +
                                         std::to_string(dim()) + " elements");
    std::vector<GF2Vector> out;
    out.reserve(size_t(1) << dim());
    for (uint64_t idx = 0; idx < (uint64_t{1} << dim()); ++idx) out.push_back(element(idx));
    return out;
  }

  friend bool operator==(const Subspace&, const Subspace&) = default;

  size_t hash() const { return basis_.hash() ^ (size_t(n_) << 1); }

 private:
  int n_ = 0;
  GF2Matrix basis_{0, 0};
};

struct SubspaceHash {
  size_t operator()(const Subspace& s) const { return s.hash(); }
};

inline Subspace intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("ambient mismatch");
  int n = a.ambient();
  // Zassenhaus: reduce rows [u|u] for u in a and [w|0] for w in b;
  // rows whose left half vanishes have right halves spanning a * b. The
  // right halves of those rows of the full RREF are themselves in RREF.
  GF2Matrix z(a.dim() + b.dim(), 2 * n);
  for (int i = 0; i < a.dim(); ++i)
    z.row(i) = GF2Vector::concat(a.basis().row(i), a.basis().row(i));
  for (int i = 0; i < b.dim(); ++i)
    z.row(a.dim() + i) = GF2Vector::concat(b.basis().row(i), GF2Vector(n));
  auto [red, pivots] = rref(std::move(z));
  int first = -1, count = 0;
  for (size_t i = 0; i < pivots.size(); ++i)
    if (pivots[i] >= n) {
      if (first < 0) first = int(i);
      ++count;
    }
  GF2Matrix inter(count, n);
  for (int i = 0; i < count; ++i) inter.row(i) = red.row(first + i).slice(n, n);
  return Subspace::from_rref(std::move(inter));
}

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw std::invalid_argument("ambient mismatch");
  std::vector<GF2Vector> rows;
  for (int i = 0; i < a.dim(); ++i) rows.push_back(a.basis().row(i));
  for (int i = 0; i < b.dim(); ++i) rows.push_back(b.basis().row(i));
  GF2Matrix gens = rows.empty() ? GF2Matrix(0, a.ambient())
                                : GF2Matrix::from_rows(std::move(rows));
  return Subspace::span(gens);
}

/// Image of the subspace under selection of the listed coordinates.
inline Subspace project(const Subspace& v, std::span<const int> coords) {
  std::vector<GF2Vector> rows;
  for (int i = 0; i < v.dim(); ++i) rows.push_back(v.basis().row(i).select(coords));
  GF2Matrix gens = rows.empty() ? GF2Matrix(0, int(coords.size()))
                                : GF2Matrix::from_rows(std::move(rows));
  return Subspace::span(gens);
}

/// Projection to the first k coordinates.
inline Subspace project_prefix(const Subspace& v, int k) {
  std::vector<int> coords(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) coords[size_t(j)] = j;
  return project(v, coords);
}

/// The orthogonal complement under the standard bilinear form.
inline Subspace orthogonal_complement(const Subspace& s) {
  if (s.dim() == 0) return Subspace::full(s.ambient());
  auto ker = kernel(s.basis());
  if (ker.empty()) return Subspace::zero(s.ambient());
  return Subspace::span(GF2Matrix::from_rows(std::move(ker)));
}

/// Number of l-dimensional subspaces of GF(2)^n (Gaussian binomial at q=2).
inline BigInt gaussian_binomial(int n, int l) {
  if (l < 0 || l > n) throw std::invalid_argument("gaussian_binomial: need 0 <= l <= n");
  BigInt num = 1, den = 1;
  for (int i = 0; i < l; ++i) {
    num *= (BigInt(1) << (n - i)) - 1;
    den *= (BigInt(1) << (l - i)) - 1;
  }
  return num / den;
}

/// Full basis of GF(2)^n: rows of an invertible matrix, inverse cached.
class Basis {
 public:
  static Basis standard(int n) {
    Basis b;
    b.mat_ = GF2Matrix::identity(n);
    b.inv_ = b.mat_;
    return b;
  }

  static std::optional<Basis> from_matrix(const GF2Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("basis matrix must be square");
    int n = m.rows();
    // Gauss-Jordan on [m | I].
    std::vector<GF2Vector> rows;
    for (int i = 0; i < n; ++i)
      rows.push_back(GF2Vector::concat(m.row(i), GF2Vector::unit(n, i)));
    auto [red, pivots] = rref(GF2Matrix::from_rows(std::move(rows)));
    if (int(pivots.size()) != n || (n > 0 && pivots.back() != n - 1)) return std::nullopt;
    std::vector<GF2Vector> inv_rows;
    for (int i = 0; i < n; ++i) inv_rows.push_back(red.row(i).slice(n, n));
    Basis b;
    b.mat_ = m;
    b.inv_ = GF2Matrix::from_rows(std::move(inv_rows));
    if (!(mul(b.mat_, b.inv_) == GF2Matrix::identity(n)))
      throw std::logic_error("basis inversion failed self-check");
    return b;
  }

  int ambient() const { return mat_.rows(); }
  const GF2Matrix& matrix() const { return mat_; }
  const GF2Matrix& inverse() const { return inv_; }

  /// Coordinates of v with respect to this basis (row convention: v = x B).
  GF2Vector to_coords(const GF2Vector& v) const { return inv_.mul_row(v); }

  /// The vector with the given coordinates: x B.
  GF2Vector from_coords(const GF2Vector& x) const { return mat_.mul_row(x); }

  friend bool operator==(const Basis&, const Basis&) = default;

 private:
  GF2Matrix mat_{0, 0};
  GF2Matrix inv_{0, 0};
};

/// Uniform over l-dimensional subspaces, by rejection on independent rows.
inline Subspace sample_subspace(Prng& prng, int n, int l) {
  if (l < 0 || l > n) throw std::invalid_argument("sample_subspace: need 0 <= l <= n");
  if (l == 0) return Subspace::zero(n);
  for (;;) {
    GF2Matrix m = sample_matrix(prng, l, n);
    Subspace s = Subspace::span(m);
    if (s.dim() == l) return s;
  }
}

/// Uniform over invertible n x n matrices, by rejection.
inline Basis sample_basis(Prng& prng, int n) {
  for (;;) {
    GF2Matrix m = sample_matrix(prng, n, n);
    if (auto b = Basis::from_matrix(m)) return *b;
  }
}

}  // namespace shortcode
