#pragma once

// The canonical non-expanding vertex families of both graphs.
//
// In the Grassmann graph an r-nice set is { V : Q <= V <= W } for a zoom-in
// Q of dimension r1 and a zoom-out W of codimension r2, r = r1 + r2. In the
// shortcode graph it is the solution set of right constraints M q_i = t_i
// and left constraints r_i^T M = s_i^T, r constraints in total - an
// intersection of a left and a right affine subspace of matrices, which is
// enumerable even when the ambient graph is not.

#include <functional>
#include <string>
#include <vector>

#include "shortcode/graphs.hpp"

namespace shortcode {

struct NiceSetGrassmann {
  Subspace zoom_in;   // Q
  Subspace zoom_out;  // W

  static NiceSetGrassmann everything(int n) {
    return {Subspace::zero(n), Subspace::full(n)};
  }

  int ambient() const { return zoom_in.ambient(); }
  int r1() const { return zoom_in.dim(); }
  int r2() const { return zoom_out.ambient() - zoom_out.dim(); }
  int r() const { return r1() + r2(); }

  bool valid() const {
    return zoom_in.ambient() == zoom_out.ambient() && zoom_out.contains_subspace(zoom_in);
  }

  bool contains(const Subspace& v) const {
    return v.contains_subspace(zoom_in) && zoom_out.contains_subspace(v);
  }

  /// Members of dimension l, by filtering the full enumeration.
  std::vector<Subspace> members(int l, uint64_t cap = kDefaultEnumerationCap) const {
    std::vector<Subspace> out;
    for (const Subspace& v : enumerate_subspaces(ambient(), l, cap))
      if (contains(v)) out.push_back(v);
    return out;
  }

  std::string describe() const {
    return "grassmann nice set Q=" + (r1() ? zoom_in.basis().str() : std::string("0")) +
           " W_perp=" + (r2() ? orthogonal_complement(zoom_out).basis().str() : std::string("0"));
  }
};

/// Uniform member of { V : Q <= V <= W } with dim V = l, through the
/// quotient W/Q: a uniform (l - r1)-dimensional subspace of a complement of
/// Q inside W is lifted back and joined with Q.
inline Subspace sample_nice_grassmann(Prng& prng, const NiceSetGrassmann& s, int l) {
  int r1 = s.r1();
  if (l < r1 || l > s.zoom_out.dim())
    throw std::domain_error("nice set has no members of the requested dimension");
  // Complement of Q inside W: extend Q's basis by rows of W's basis.
  std::vector<GF2Vector> comp;
  {
    std::vector<GF2Vector> acc;
    for (int i = 0; i < s.zoom_in.dim(); ++i) acc.push_back(s.zoom_in.basis().row(i));
    for (int i = 0; i < s.zoom_out.dim(); ++i) {
      const GF2Vector& w = s.zoom_out.basis().row(i);
      auto probe = acc;
      probe.push_back(w);
      if (rank(GF2Matrix::from_rows(probe)) > int(acc.size())) {
        acc.push_back(w);
        comp.push_back(w);
      }
    }
  }
  int qdim = int(comp.size());  // dim W - r1
  Subspace x = sample_subspace(prng, qdim, l - r1);
  std::vector<GF2Vector> rows;
  for (int i = 0; i < s.zoom_in.dim(); ++i) rows.push_back(s.zoom_in.basis().row(i));
  for (int i = 0; i < x.dim(); ++i) {
    GF2Vector lifted(s.ambient());
    for (int j = 0; j < qdim; ++j)
      if (x.basis().get(i, j)) lifted ^= comp[size_t(j)];
    rows.push_back(std::move(lifted));
  }
  if (rows.empty()) return Subspace::zero(s.ambient());
  return Subspace::span(GF2Matrix::from_rows(std::move(rows)));
}

struct RightConstraint {
  GF2Vector q;  // length n
  GF2Vector t;  // length l
};

struct LeftConstraint {
  GF2Vector r;  // length l
  GF2Vector s;  // length n
};

/// The affine solution family of a consistent constraint system: a base
/// matrix plus the span of independent direction matrices.
struct AffineMatrixFamily {
  GF2Matrix base;
  std::vector<GF2Matrix> directions;

  uint64_t size() const { return uint64_t{1} << directions.size(); }

  GF2Matrix member(uint64_t idx) const {
    GF2Matrix m = base;
    for (size_t k = 0; k < directions.size(); ++k)
      if ((idx >> k) & 1) m ^= directions[k];
    return m;
  }

  GF2Matrix sample(Prng& prng) const {
    GF2Matrix m = base;
    for (const GF2Matrix& dir : directions)
      if (prng.bit()) m ^= dir;
    return m;
  }
};

struct NiceSetShortcode {
  int l = 0, n = 0;
  std::vector<RightConstraint> right;
  std::vector<LeftConstraint> left;

  static NiceSetShortcode everything(int l, int n) { return {l, n, {}, {}}; }

  int r() const { return int(right.size() + left.size()); }

  bool contains(const GF2Matrix& m) const {
    for (const auto& rc : right)
      if (!(m.mul_col(rc.q) == rc.t)) return false;
    for (const auto& lc : left)
      if (!(m.mul_row(lc.r) == lc.s)) return false;
    return true;
  }

  /// Both constraint lists internally independent, and the cross identity
  /// <r_i, t_j> = <s_i, q_j> that any common solution forces.
  bool compatible() const {
    if (!right.empty()) {
      std::vector<GF2Vector> qs;
      for (const auto& rc : right) qs.push_back(rc.q);
      if (rank(GF2Matrix::from_rows(qs)) != int(right.size())) return false;
    }
    if (!left.empty()) {
      std::vector<GF2Vector> rs;
      for (const auto& lc : left) rs.push_back(lc.r);
      if (rank(GF2Matrix::from_rows(rs)) != int(left.size())) return false;
    }
    for (const auto& lc : left)
      for (const auto& rc : right)
        if (lc.r.dot(rc.t) != lc.s.dot(rc.q)) return false;
    return true;
  }

  /// Solves the linear system over the l*n matrix entries. Empty optional
  /// means the set has no members.
  std::optional<AffineMatrixFamily> solve_family() const {
    int vars = l * n;
    std::vector<GF2Vector> eq_rows;
    GF2Vector rhs(int(right.size()) * l + int(left.size()) * n);
    int e = 0;
    for (const auto& rc : right)
      for (int i = 0; i < l; ++i) {
        GF2Vector row(vars);
        for (int j = 0; j < n; ++j)
          if (rc.q.get(j)) row.set(i * n + j, true);
        eq_rows.push_back(std::move(row));
        rhs.set(e++, rc.t.get(i));
      }
    for (const auto& lc : left)
      for (int j = 0; j < n; ++j) {
        GF2Vector row(vars);
        for (int i = 0; i < l; ++i)
          if (lc.r.get(i)) row.set(i * n + j, true);
        eq_rows.push_back(std::move(row));
        rhs.set(e++, lc.s.get(j));
      }
    GF2Matrix system = eq_rows.empty() ? GF2Matrix(0, vars)
                                       : GF2Matrix::from_rows(std::move(eq_rows));
    auto particular = solve_right(system, rhs);
    if (!particular) return std::nullopt;
    AffineMatrixFamily fam;
    fam.base = unflatten(*particular);
    for (const GF2Vector& dir : kernel(system)) fam.directions.push_back(unflatten(dir));
    return fam;
  }

  bool empty() const { return !solve_family().has_value(); }

  std::vector<GF2Matrix> members(uint64_t cap = kDefaultEnumerationCap) const {
    auto fam = solve_family();
    if (!fam) return {};
    if (fam->directions.size() > 62 || fam->size() > cap)
      throw resource_error("nice set too large to enumerate: 2^" +
                           std::to_string(fam->directions.size()) + " members");
    std::vector<GF2Matrix> out;
    out.reserve(size_t(fam->size()));
    for (uint64_t idx = 0; idx < fam->size(); ++idx) out.push_back(fam->member(idx));
    return out;
  }

  std::string describe() const {
    std::string s = "shortcode nice set";
    for (const auto& rc : right) s += " right(q=" + rc.q.str() + ",t=" + rc.t.str() + ")";
    for (const auto& lc : left) s += " left(r=" + lc.r.str() + ",s=" + lc.s.str() + ")";
    if (right.empty() && left.empty()) s += " (everything)";
    return s;
  }

 private:
  GF2Matrix unflatten(const GF2Vector& flat) const {
    GF2Matrix m(l, n);
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < n; ++j)
        if (flat.get(i * n + j)) m.set(i, j, true);
    return m;
  }
};

/// Canonical enumeration of nonempty nice sets with at most r_max
/// constraints. Right constraint systems are (RREF basis of a subspace of
/// q-space, one t per basis vector); left systems likewise over r-space.
/// Order: total r ascending, then right count descending, then subspace
/// enumeration order, then the attached value tuples as counters.
inline std::vector<NiceSetShortcode> enumerate_nice_sets_shortcode(int l, int n, int r_max) {
  if (r_max * l > 62 || r_max * n > 62)
    throw resource_error("nice-set enumeration: constraint value space exceeds 2^62");
  std::vector<NiceSetShortcode> out;
  for (int r_total = 0; r_total <= r_max; ++r_total) {
    for (int r_right = r_total; r_right >= 0; --r_right) {
      int r_left = r_total - r_right;
      if (r_right > n || r_left > l) continue;
      auto q_spaces = enumerate_subspaces(n, r_right);
      auto r_spaces = enumerate_subspaces(l, r_left);
      for (const Subspace& qs : q_spaces) {
        for (const Subspace& rs : r_spaces) {
          uint64_t t_combos = uint64_t{1} << (r_right * l);
          for (uint64_t tc = 0; tc < t_combos; ++tc) {
            uint64_t s_combos = uint64_t{1} << (r_left * n);
            for (uint64_t sc = 0; sc < s_combos; ++sc) {
              NiceSetShortcode set{l, n, {}, {}};
              for (int i = 0; i < r_right; ++i)
                set.right.push_back({qs.basis().row(i), GF2Vector::from_u64(l, tc >> (i * l))});
              for (int i = 0; i < r_left; ++i)
                set.left.push_back({rs.basis().row(i), GF2Vector::from_u64(n, sc >> (i * n))});
              if (!set.compatible()) continue;
              if (set.r() > 0 && set.empty()) continue;
              out.push_back(std::move(set));
            }
          }
        }
      }
    }
  }
  return out;
}

/// Canonical enumeration of Grassmann nice sets with r1 + r2 <= r_max that
/// have at least one member of dimension l.
inline std::vector<NiceSetGrassmann> enumerate_nice_sets_grassmann(int l, int n, int r_max) {
  std::vector<NiceSetGrassmann> out;
  for (int r_total = 0; r_total <= r_max; ++r_total) {
    for (int r1 = r_total; r1 >= 0; --r1) {
      int r2 = r_total - r1;
      if (r1 > l || r2 > n - l) continue;  // no members of dimension l otherwise
      for (const Subspace& q : enumerate_subspaces(n, r1)) {
        for (const Subspace& w : enumerate_subspaces(n, n - r2)) {
          if (!w.contains_subspace(q)) continue;
          out.push_back({q, w});
        }
      }
    }
  }
  return out;
}

}  // namespace shortcode
