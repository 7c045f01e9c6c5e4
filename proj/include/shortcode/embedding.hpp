#pragma once

// The basis-parameterized bijection phi_B between the subspaces whose
// projection to the first l coordinates (written in basis B) has full
// dimension l, and the l x (n-l) matrices. Row i of phi_B(V) is the tail of
// the unique vector of V whose head is e_i. The map is a graph isomorphism
// onto its image: adjacency in the Grassmann graph corresponds exactly to
// rank-1 difference on the matrix side. Nice sets map to nice sets (zoom-out
// directions become right constraints, zoom-in generators become left
// constraints) and strategies transfer in both directions.
//
// All coordinates are rows: x = v * B^{-1} are the B-coordinates of v, so
// constraint vectors transform through the cached inverse columnwise.

#include <unordered_set>

#include "shortcode/strategies.hpp"

namespace shortcode {

struct HomomorphismReport {
  uint64_t domain_size = 0;
  uint64_t pairs_checked = 0;
  uint64_t violations = 0;
  std::vector<std::pair<uint64_t, uint64_t>> first_violations;  // at most 8
  bool bijective = false;

  bool ok() const { return violations == 0 && bijective; }
};

class Embedding {
 public:
  Embedding(int l, int n, Basis basis) : l_(l), n_(n), basis_(std::move(basis)) {
    if (l < 1 || l >= n) throw std::invalid_argument("Embedding: need 1 <= l < n");
    if (basis_.ambient() != n) throw std::invalid_argument("Embedding: basis ambient mismatch");
  }

  static Embedding standard(int l, int n) { return Embedding(l, n, Basis::standard(n)); }

  int l() const { return l_; }
  int n() const { return n_; }
  const Basis& basis() const { return basis_; }

  /// Membership in the domain: the projection of V to the first l
  /// B-coordinates has dimension l.
  bool in_domain(const Subspace& v) const {
    if (v.dim() != l_) return false;
    std::vector<GF2Vector> heads;
    heads.reserve(size_t(l_));
    for (int i = 0; i < l_; ++i)
      heads.push_back(basis_.to_coords(v.basis().row(i)).slice(0, l_));
    return rank(GF2Matrix::from_rows(std::move(heads))) == l_;
  }

  /// The unique vectors v_1..v_l of V with head e_i in B-coordinates,
  /// returned as rows in the original coordinates.
  GF2Matrix canonical_basis(const Subspace& v) const {
    GF2Matrix in_b = coords_matrix(v);
    GF2Matrix head(l_, l_);
    for (int i = 0; i < l_; ++i)
      for (int j = 0; j < l_; ++j) head.set(i, j, in_b.get(i, j));
    auto head_basis = Basis::from_matrix(head);
    if (!head_basis) throw std::domain_error("subspace is outside the embedding domain");
    GF2Matrix canonical_b = mul(head_basis->inverse(), in_b);
    std::vector<GF2Vector> rows;
    rows.reserve(size_t(l_));
    for (int i = 0; i < l_; ++i) rows.push_back(basis_.from_coords(canonical_b.row(i)));
    return GF2Matrix::from_rows(std::move(rows));
  }

  /// phi(V): row i holds the last n-l B-coordinates of v_i.
  GF2Matrix phi(const Subspace& v) const {
    GF2Matrix canon = canonical_basis(v);
    GF2Matrix out(l_, n_ - l_);
    for (int i = 0; i < l_; ++i) {
      GF2Vector tail = basis_.to_coords(canon.row(i)).slice(l_, n_ - l_);
      out.row(i) = std::move(tail);
    }
    return out;
  }

  /// Inverse: the span of (e_i | row_i(M)) read back through B, canonical in
  /// the original coordinates.
  Subspace phi_inverse(const GF2Matrix& m) const {
    if (m.rows() != l_ || m.cols() != n_ - l_)
      throw std::invalid_argument("phi_inverse: expected an l x (n-l) matrix");
    std::vector<GF2Vector> rows;
    rows.reserve(size_t(l_));
    for (int i = 0; i < l_; ++i) {
      GF2Vector x = GF2Vector::concat(GF2Vector::unit(l_, i), m.row(i));
      rows.push_back(basis_.from_coords(x));
    }
    return Subspace::span(GF2Matrix::from_rows(std::move(rows)));
  }

  /// Exhaustive check that phi is a bijection preserving adjacency in both
  /// directions over the whole domain.
  HomomorphismReport verify_homomorphism(uint64_t cap = kDefaultEnumerationCap) const {
    HomomorphismReport rep;
    BigInt domain = BigInt(1) << (l_ * (n_ - l_));
    if (domain > BigInt(cap))
      throw resource_error("embedding domain " + domain.str() + " exceeds cap " +
                           std::to_string(cap));
    uint64_t total = domain.convert_to<uint64_t>();
    rep.domain_size = total;
    std::vector<GF2Matrix> mats;
    std::vector<Subspace> subs;
    mats.reserve(size_t(total));
    subs.reserve(size_t(total));
    std::unordered_set<size_t> seen;
    bool round_trip = true, distinct = true, in_dom = true;
    for (uint64_t idx = 0; idx < total; ++idx) {
      GF2Matrix m = GF2Matrix::from_index(l_, n_ - l_, idx);
      Subspace v = phi_inverse(m);
      if (!in_domain(v)) in_dom = false;
      if (!(phi(v) == m)) round_trip = false;
      if (!seen.insert(v.hash()).second) {
        // hash collision or duplicate; resolve by scanning
        for (const Subspace& prev : subs)
          if (prev == v) distinct = false;
      }
      mats.push_back(std::move(m));
      subs.push_back(std::move(v));
    }
    rep.bijective = round_trip && distinct && in_dom;
    for (size_t i = 0; i < subs.size(); ++i)
      for (size_t j = i + 1; j < subs.size(); ++j) {
        ++rep.pairs_checked;
        bool g = grassmann_adjacent(subs[i], subs[j]);
        bool s = shortcode_adjacent(mats[i], mats[j]);
        if (g != s) {
          ++rep.violations;
          if (rep.first_violations.size() < 8) rep.first_violations.emplace_back(i, j);
        }
      }
    return rep;
  }

  /// Image of a Grassmann nice set: zoom-out directions w (spanning the
  /// orthogonal complement of W) become right constraints M q = t with
  /// q the tail and t the head of w written in B-coordinates; zoom-in
  /// generators become left constraints r^T M = s^T the same way.
  NiceSetShortcode map_nice_set(const NiceSetGrassmann& s) const {
    if (s.ambient() != n_) throw std::invalid_argument("map_nice_set: ambient mismatch");
    NiceSetShortcode out{l_, n_ - l_, {}, {}};
    Subspace w_perp = orthogonal_complement(s.zoom_out);
    for (int i = 0; i < w_perp.dim(); ++i) {
      GF2Vector w_b = basis_.matrix().mul_col(w_perp.basis().row(i));
      out.right.push_back({w_b.slice(l_, n_ - l_), w_b.slice(0, l_)});
    }
    for (int i = 0; i < s.zoom_in.dim(); ++i) {
      GF2Vector y = basis_.to_coords(s.zoom_in.basis().row(i));
      out.left.push_back({y.slice(0, l_), y.slice(l_, n_ - l_)});
    }
    return out;
  }

  /// Preimage direction: right constraints lift to zoom-out directions,
  /// left constraints to zoom-in generators. The returned set satisfies
  /// phi^{-1}(T) = { V in S : V in the domain } when T is consistent.
  NiceSetGrassmann map_nice_set_inverse(const NiceSetShortcode& t) const {
    if (t.l != l_ || t.n != n_ - l_)
      throw std::invalid_argument("map_nice_set_inverse: shape mismatch");
    std::vector<GF2Vector> w_dirs;
    for (const auto& rc : t.right) {
      GF2Vector w_b = GF2Vector::concat(rc.t, rc.q);
      w_dirs.push_back(basis_.inverse().mul_col(w_b));
    }
    std::vector<GF2Vector> q_gens;
    for (const auto& lc : t.left)
      q_gens.push_back(basis_.from_coords(GF2Vector::concat(lc.r, lc.s)));
    Subspace w = w_dirs.empty() ? Subspace::full(n_)
                                : orthogonal_complement(Subspace::span(GF2Matrix::from_rows(w_dirs)));
    Subspace q = q_gens.empty() ? Subspace::zero(n_)
                                : Subspace::span(GF2Matrix::from_rows(q_gens));
    return {std::move(q), std::move(w)};
  }

  /// Strategy transfer onto the matrix side: G(phi(V)) reads F(V) at the
  /// canonical basis. A global functional transfers in closed form to the
  /// affine rule M z + u.
  ShortcodeStrategy transfer_to_shortcode(const GrassmannStrategy& f,
                                          uint64_t cap = kDefaultEnumerationCap) const {
    if (f.l() != l_ || f.n() != n_) throw std::invalid_argument("transfer: parameter mismatch");
    ShortcodeGraph target(l_, n_ - l_);
    if (f.is_global()) {
      GF2Vector c_b = basis_.matrix().mul_col(f.functional().coefficients);
      GF2Vector z = c_b.slice(l_, n_ - l_);
      GF2Vector u = c_b.slice(0, l_);
      if (f.functional().constant)
        for (int i = 0; i < l_; ++i) u.set(i, !u.get(i));
      return ShortcodeStrategy::affine(target, std::move(z), std::move(u));
    }
    BigInt domain = BigInt(1) << (l_ * (n_ - l_));
    if (domain > BigInt(cap))
      throw resource_error("transfer table " + domain.str() + " exceeds cap " +
                           std::to_string(cap));
    std::vector<uint64_t> labels;
    labels.reserve(size_t(domain.convert_to<uint64_t>()));
    for (uint64_t idx = 0; idx < domain.convert_to<uint64_t>(); ++idx) {
      GF2Matrix m = GF2Matrix::from_index(l_, n_ - l_, idx);
      Subspace v = phi_inverse(m);
      GF2Matrix canon = canonical_basis(v);
      uint64_t bits = 0;
      for (int i = 0; i < l_; ++i)
        if (f.eval(v, canon.row(i))) bits |= uint64_t{1} << i;
      labels.push_back(bits);
    }
    return ShortcodeStrategy::table(target, std::move(labels));
  }

  /// The functional forced by an affine rule H(M) = M z + u: in
  /// B-coordinates f takes value <head, u> + <tail, z>, so that reading f
  /// at the canonical basis of any domain subspace reproduces H(phi(V)).
  GrassmannStrategy transfer_affine_to_grassmann(const ShortcodeStrategy& h) const {
    if (!h.is_affine())
      throw std::invalid_argument("transfer_affine_to_grassmann: affine backing required");
    if (h.l() != l_ || h.n() != n_ - l_)
      throw std::invalid_argument("transfer_affine_to_grassmann: shape mismatch");
    GF2Vector w_b = GF2Vector::concat(h.affine_rule().u, h.affine_rule().z);
    GF2Vector coeffs = basis_.inverse().mul_col(w_b);
    return GrassmannStrategy::global(GrassmannGraph(l_, n_),
                                     LinearFunctional{std::move(coeffs), false});
  }

 private:
  GF2Matrix coords_matrix(const Subspace& v) const {
    if (v.dim() != l_ || v.ambient() != n_)
      throw std::invalid_argument("embedding: vertex of the wrong Grassmann graph");
    std::vector<GF2Vector> rows;
    rows.reserve(size_t(l_));
    for (int i = 0; i < l_; ++i) rows.push_back(basis_.to_coords(v.basis().row(i)));
    return GF2Matrix::from_rows(std::move(rows));
  }

  int l_, n_;
  Basis basis_;
};

/// Domain membership for any basis and any l (including l = n).
inline bool in_projection_domain(const Basis& basis, int l, const Subspace& v) {
  if (v.dim() != l) return false;
  std::vector<GF2Vector> heads;
  for (int i = 0; i < l; ++i) heads.push_back(basis.to_coords(v.basis().row(i)).slice(0, l));
  if (heads.empty()) return true;
  return rank(GF2Matrix::from_rows(std::move(heads))) == l;
}

}  // namespace shortcode
