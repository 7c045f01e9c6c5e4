#pragma once

// The three vertex sets and their adjacency structure:
//   GrassmannGraph  - l-dimensional subspaces of GF(2)^n, edges at
//                     intersection dimension l-1;
//   ShortcodeGraph  - l x n matrices, edges at rank-1 difference;
//   TensorGraph     - l x m x n tensors, edges at rank-1 tensor difference.
//
// Test-step samplers follow the hypothesis convention (the update vectors
// b and the matrix direction a are uniform over ALL vectors, zero included,
// except that the degree-3 label direction a is nonzero); graph edges always
// require an exact rank-1 difference. Enumeration is in integer-encoding
// order: packed-bit order for matrices and tensors, and for subspaces the
// rank within the deterministic RREF enumeration.

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "shortcode/subspace.hpp"

namespace shortcode {

inline constexpr uint64_t kDefaultEnumerationCap = uint64_t{1} << 24;

// ---------------------------------------------------------------------------
// Grassmann graph

namespace detail {

/// Deterministic enumeration of l-dimensional subspaces of GF(2)^n:
/// pivot-column sets in lexicographic order, free RREF entries as a binary
/// counter scanned row-major (LSB = first free slot).
struct GrassmannIndexer {
  int l, n;
  std::vector<std::vector<int>> pivot_sets;       // lex order
  std::vector<uint64_t> offsets;                  // cumulative start per pivot set
  std::unordered_map<uint64_t, size_t> combo_of;  // pivot bitmask -> position
  uint64_t total = 0;

  GrassmannIndexer(int l_, int n_) : l(l_), n(n_) {
    std::vector<int> combo(static_cast<size_t>(l));
    for (int i = 0; i < l; ++i) combo[size_t(i)] = i;
    for (;;) {
      uint64_t mask = 0;
      for (int p : combo) mask |= uint64_t{1} << p;
      combo_of.emplace(mask, pivot_sets.size());
      offsets.push_back(total);
      total += uint64_t{1} << free_count(combo);
      pivot_sets.push_back(combo);
      // next combination in lex order
      int i = l - 1;
      while (i >= 0 && combo[size_t(i)] == n - l + i) --i;
      if (i < 0) break;
      ++combo[size_t(i)];
      for (int k = i + 1; k < l; ++k) combo[size_t(k)] = combo[size_t(k - 1)] + 1;
    }
  }

  int free_count(const std::vector<int>& pivots) const {
    uint64_t mask = 0;
    for (int p : pivots) mask |= uint64_t{1} << p;
    int f = 0;
    for (size_t i = 0; i < pivots.size(); ++i)
      for (int j = pivots[i] + 1; j < n; ++j)
        if (!((mask >> j) & 1)) ++f;
    return f;
  }

  Subspace vertex_at(uint64_t idx) const {
    size_t lo = 0, hi = pivot_sets.size();
    while (lo + 1 < hi) {
      size_t mid = (lo + hi) / 2;
      if (offsets[mid] <= idx)
        lo = mid;
      else
        hi = mid;
    }
    const auto& pivots = pivot_sets[lo];
    uint64_t bits = idx - offsets[lo];
    uint64_t mask = 0;
    for (int p : pivots) mask |= uint64_t{1} << p;
    GF2Matrix m(l, n);
    int b = 0;
    for (int i = 0; i < l; ++i) {
      m.set(i, pivots[size_t(i)], true);
      for (int j = pivots[size_t(i)] + 1; j < n; ++j) {
        if ((mask >> j) & 1) continue;
        if ((bits >> b) & 1) m.set(i, j, true);
        ++b;
      }
    }
    // The constructed matrix is already in reduced row echelon form.
    return Subspace::from_rref(std::move(m));
  }

  uint64_t index_of(const Subspace& v) const {
    const GF2Matrix& basis = v.basis();
    uint64_t mask = 0;
    std::vector<int> pivots(static_cast<size_t>(l));
    for (int i = 0; i < l; ++i) {
      pivots[size_t(i)] = basis.row(i).lowest_set();
      mask |= uint64_t{1} << pivots[size_t(i)];
    }
    uint64_t bits = 0;
    int b = 0;
    for (int i = 0; i < l; ++i)
      for (int j = pivots[size_t(i)] + 1; j < n; ++j) {
        if ((mask >> j) & 1) continue;
        if (basis.get(i, j)) bits |= uint64_t{1} << b;
        ++b;
      }
    return offsets[combo_of.at(mask)] + bits;
  }
};

}  // namespace detail

class GrassmannGraph {
 public:
  GrassmannGraph(int l, int n) : l_(l), n_(n) {
    if (l < 1 || l >= n) throw std::invalid_argument("GrassmannGraph: need 1 <= l < n");
    BigInt combos = 1;
    for (int i = 0; i < l; ++i) combos = combos * (n - i) / (i + 1);
    if (gaussian_binomial(n, l) <= BigInt(uint64_t{1} << 62) && combos <= BigInt(1 << 22))
      indexer_ = std::make_shared<const detail::GrassmannIndexer>(l, n);
  }

  int l() const { return l_; }
  int n() const { return n_; }

  BigInt vertex_count() const { return gaussian_binomial(n_, l_); }

  uint64_t vertex_count_u64() const {
    if (!indexer_) throw resource_error("vertex count exceeds 2^62: " + vertex_count().str());
    return indexer_->total;
  }

  Subspace vertex_at(uint64_t idx) const {
    require_indexer();
    return indexer_->vertex_at(idx);
  }

  uint64_t index_of(const Subspace& v) const {
    require_indexer();
    return indexer_->index_of(v);
  }

  friend bool operator==(const GrassmannGraph& a, const GrassmannGraph& b) {
    return a.l_ == b.l_ && a.n_ == b.n_;
  }

 private:
  void require_indexer() const {
    if (!indexer_) throw resource_error("vertex count exceeds 2^62: " + vertex_count().str());
  }

  int l_, n_;
  std::shared_ptr<const detail::GrassmannIndexer> indexer_;
};

inline bool grassmann_adjacent(const Subspace& v, const Subspace& w) {
  if (v.ambient() != w.ambient() || v.dim() != w.dim())
    throw std::invalid_argument("grassmann_adjacent: vertices of different graphs");
  return intersect(v, w).dim() == v.dim() - 1;
}

/// Uniform over the neighbors of v: a uniformly random hyperplane of v
/// (the first l-1 rows of a random ordered basis) extended by a uniform
/// vector outside v.
inline Subspace grassmann_neighbor(Prng& prng, const Subspace& v) {
  int l = v.dim(), n = v.ambient();
  GF2Matrix coeff(l, l);
  for (;;) {
    // Random ordered basis of v via independent coefficient rows.
    for (int i = 0; i < l; ++i) coeff.row(i) = GF2Vector::from_u64(l, prng.bits(l));
    if (rank(coeff) != l) continue;
    GF2Matrix gens(l, n);
    for (int i = 0; i + 1 < l; ++i) gens.row(i) = v.basis().mul_row(coeff.row(i));
    GF2Vector outside = sample_vector(prng, n);
    while (v.contains(outside)) outside = sample_vector(prng, n);
    gens.row(l - 1) = std::move(outside);
    return Subspace::span(std::move(gens));
  }
}

// ---------------------------------------------------------------------------
// Degree-2 shortcode graph

class ShortcodeGraph {
 public:
  ShortcodeGraph(int l, int n) : l_(l), n_(n) {
    if (l < 1 || n < 1) throw std::invalid_argument("ShortcodeGraph: need l, n >= 1");
  }

  int l() const { return l_; }
  int n() const { return n_; }

  BigInt vertex_count() const { return BigInt(1) << (l_ * n_); }

  uint64_t vertex_count_u64() const {
    if (l_ * n_ > 62) throw resource_error("vertex count exceeds 2^62: 2^" +
                                           std::to_string(l_ * n_));
    return uint64_t{1} << (l_ * n_);
  }

  GF2Matrix vertex_at(uint64_t idx) const { return GF2Matrix::from_index(l_, n_, idx); }
  uint64_t index_of(const GF2Matrix& m) const { return m.to_index(); }

  friend bool operator==(const ShortcodeGraph&, const ShortcodeGraph&) = default;

 private:
  int l_, n_;
};

inline bool shortcode_adjacent(const GF2Matrix& m1, const GF2Matrix& m2) {
  if (m1.rows() != m2.rows() || m1.cols() != m2.cols())
    throw std::invalid_argument("shortcode_adjacent: shape mismatch");
  return rank(m1 ^ m2) == 1;
}

struct ShortcodeStep {
  GF2Matrix m2;
  GF2Vector a;  // length l, may be zero
  GF2Vector b;  // length n, may be zero
};

/// One test step from m: a ~ GF(2)^l and b ~ GF(2)^n uniform including
/// zero, m2 = m + a b^T. The step is lazy: m2 == m whenever a or b is zero.
inline ShortcodeStep shortcode_step(Prng& prng, const GF2Matrix& m) {
  GF2Vector a = sample_vector(prng, m.rows());
  GF2Vector b = sample_vector(prng, m.cols());
  GF2Matrix m2 = m;
  if (!a.is_zero() && !b.is_zero()) m2 ^= GF2Matrix::outer(a, b);
  return {std::move(m2), std::move(a), std::move(b)};
}

// ---------------------------------------------------------------------------
// Degree-3 tensor graph

class TensorGraph {
 public:
  TensorGraph(int l, int m, int n) : l_(l), m_(m), n_(n) {
    if (l < 1 || m < 1 || n < 1) throw std::invalid_argument("TensorGraph: need l, m, n >= 1");
  }

  int l() const { return l_; }
  int m() const { return m_; }
  int n() const { return n_; }

  BigInt vertex_count() const { return BigInt(1) << (l_ * m_ * n_); }

  uint64_t vertex_count_u64() const {
    if (l_ * m_ * n_ > 62) throw resource_error("vertex count exceeds 2^62: 2^" +
                                                std::to_string(l_ * m_ * n_));
    return uint64_t{1} << (l_ * m_ * n_);
  }

  GF2Tensor vertex_at(uint64_t idx) const { return GF2Tensor::from_index(l_, m_, n_, idx); }
  uint64_t index_of(const GF2Tensor& t) const { return t.to_index(); }

  friend bool operator==(const TensorGraph&, const TensorGraph&) = default;

 private:
  int l_, m_, n_;
};

/// True iff t1 + t2 = a (x) b (x) c with a, b, c all nonzero: every nonzero
/// mode-0 slice of the difference must equal one common rank-1 matrix.
inline bool tensor_adjacent(const GF2Tensor& t1, const GF2Tensor& t2) {
  if (t1.dim0() != t2.dim0() || t1.dim1() != t2.dim1() || t1.dim2() != t2.dim2())
    throw std::invalid_argument("tensor_adjacent: dim mismatch");
  GF2Tensor d = t1 ^ t2;
  if (d.is_zero()) return false;
  GF2Matrix common;
  bool have = false;
  for (int i = 0; i < d.dim0(); ++i) {
    GF2Matrix s = d.slice(i);
    if (s.is_zero()) continue;
    if (!have) {
      common = s;
      have = true;
    } else if (!(s == common)) {
      return false;
    }
  }
  return rank(common) == 1;
}

struct TensorStep {
  GF2Tensor t2;
  GF2Vector a;  // length l, nonzero
  GF2Vector b;  // length m, may be zero
  GF2Vector c;  // length n, may be zero
};

/// One degree-3 test step: the label direction a is uniform over nonzero
/// vectors; b and c are uniform including zero.
inline TensorStep tensor_step(Prng& prng, const GF2Tensor& t) {
  GF2Vector a = sample_nonzero_vector(prng, t.dim0());
  GF2Vector b = sample_vector(prng, t.dim1());
  GF2Vector c = sample_vector(prng, t.dim2());
  GF2Tensor t2 = t;
  if (!b.is_zero() && !c.is_zero()) t2 ^= GF2Tensor::outer(a, b, c);
  return {std::move(t2), std::move(a), std::move(b), std::move(c)};
}

// ---------------------------------------------------------------------------
// Enumeration

namespace detail {
inline void check_cap(const BigInt& count, uint64_t cap, const char* what) {
  if (count > BigInt(cap))
    throw resource_error(std::string(what) + " count " + count.str() + " exceeds cap " +
                         std::to_string(cap));
}
}  // namespace detail

template <class Graph, class Fn>
void for_each_vertex(const Graph& g, Fn&& fn, uint64_t cap = kDefaultEnumerationCap) {
  detail::check_cap(g.vertex_count(), cap, "vertex");
  uint64_t total = g.vertex_count_u64();
  for (uint64_t idx = 0; idx < total; ++idx) fn(g.vertex_at(idx));
}

inline std::vector<Subspace> all_vertices(const GrassmannGraph& g,
                                          uint64_t cap = kDefaultEnumerationCap) {
  std::vector<Subspace> out;
  for_each_vertex(g, [&](const Subspace& v) { out.push_back(v); }, cap);
  return out;
}

inline std::vector<GF2Matrix> all_vertices(const ShortcodeGraph& g,
                                           uint64_t cap = kDefaultEnumerationCap) {
  std::vector<GF2Matrix> out;
  for_each_vertex(g, [&](const GF2Matrix& m) { out.push_back(m); }, cap);
  return out;
}

inline std::vector<GF2Tensor> all_vertices(const TensorGraph& g,
                                           uint64_t cap = kDefaultEnumerationCap) {
  std::vector<GF2Tensor> out;
  for_each_vertex(g, [&](const GF2Tensor& t) { out.push_back(t); }, cap);
  return out;
}

/// All r-dimensional subspaces of GF(2)^n in enumeration order, 0 <= r <= n.
inline std::vector<Subspace> enumerate_subspaces(int n, int r,
                                                 uint64_t cap = kDefaultEnumerationCap) {
  if (r < 0 || r > n) throw std::invalid_argument("enumerate_subspaces: need 0 <= r <= n");
  detail::check_cap(gaussian_binomial(n, r), cap, "subspace");
  detail::GrassmannIndexer indexer(r, n);
  std::vector<Subspace> out;
  out.reserve(size_t(indexer.total));
  for (uint64_t idx = 0; idx < indexer.total; ++idx) out.push_back(indexer.vertex_at(idx));
  return out;
}

/// Undirected edges, each exactly once, ordered by (smaller endpoint index,
/// then larger). Grassmann edges are found by pairwise adjacency.
template <class Fn>
void for_each_edge(const GrassmannGraph& g, Fn&& fn, uint64_t cap = kDefaultEnumerationCap) {
  auto vertices = all_vertices(g, cap);
  for (size_t i = 0; i < vertices.size(); ++i)
    for (size_t j = i + 1; j < vertices.size(); ++j)
      if (grassmann_adjacent(vertices[i], vertices[j])) fn(vertices[i], vertices[j]);
}

/// Shortcode edges via rank-1 offsets; the pair (a, b) with a, b nonzero is
/// the unique decomposition of each offset over GF(2).
template <class Fn>
void for_each_edge(const ShortcodeGraph& g, Fn&& fn, uint64_t cap = kDefaultEnumerationCap) {
  detail::check_cap(g.vertex_count(), cap, "vertex");
  uint64_t total = g.vertex_count_u64();
  for (uint64_t idx = 0; idx < total; ++idx) {
    GF2Matrix m = g.vertex_at(idx);
    for (uint64_t ai = 1; ai < (uint64_t{1} << g.l()); ++ai)
      for (uint64_t bi = 1; bi < (uint64_t{1} << g.n()); ++bi) {
        GF2Matrix m2 = m ^ GF2Matrix::outer(GF2Vector::from_u64(g.l(), ai),
                                            GF2Vector::from_u64(g.n(), bi));
        if (m2.to_index() > idx) fn(m, m2);
      }
  }
}

}  // namespace shortcode
