#pragma once

// Bit-packed linear algebra over GF(2): vectors, matrices, tensors,
// row reduction, solving and the text literals used by files and the CLI.
//
// Packing is row-major, LSB first: bit j of row i sits at packed position
// i*cols + j. Coordinate 1 of a vector literal "b1b2...bn" is bit 0.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "shortcode/errors.hpp"

namespace shortcode {

namespace detail {
inline int words_for(int bits) { return (bits + 63) / 64; }
inline uint64_t tail_mask(int bits) {
  int r = bits % 64;
  return r == 0 ? ~uint64_t{0} : (uint64_t{1} << r) - 1;
}
}  // namespace detail

class GF2Vector {
 public:
  GF2Vector() = default;
  explicit GF2Vector(int length) : n_(length), w_(detail::words_for(length), 0) {}

  static GF2Vector unit(int length, int coord) {
    GF2Vector v(length);
    v.set(coord, true);
    return v;
  }

  static GF2Vector from_u64(int length, uint64_t bits) {
    GF2Vector v(length);
    if (length > 0) v.w_[0] = bits & (length >= 64 ? ~uint64_t{0} : detail::tail_mask(length));
    return v;
  }

  int length() const { return n_; }

  bool get(int j) const { return (w_[j >> 6] >> (j & 63)) & 1; }

  void set(int j, bool value) {
    uint64_t mask = uint64_t{1} << (j & 63);
    if (value)
      w_[j >> 6] |= mask;
    else
      w_[j >> 6] &= ~mask;
  }

  bool is_zero() const {
    for (uint64_t w : w_)
      if (w) return false;
    return true;
  }

  int weight() const {
    int c = 0;
    for (uint64_t w : w_) c += __builtin_popcountll(w);
    return c;
  }

  /// Index of the lowest set bit, or -1 when zero.
  int lowest_set() const {
    for (size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return int(k) * 64 + __builtin_ctzll(w_[k]);
    return -1;
  }

  GF2Vector& operator^=(const GF2Vector& o) {
    for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }

  friend GF2Vector operator^(GF2Vector a, const GF2Vector& b) {
    a ^= b;
    return a;
  }

  /// Parity of the coordinatewise product, i.e. the standard bilinear form.
  bool dot(const GF2Vector& o) const {
    uint64_t acc = 0;
    for (size_t k = 0; k < w_.size(); ++k) acc ^= w_[k] & o.w_[k];
    return __builtin_parityll(acc);
  }

  uint64_t as_u64() const { return w_.empty() ? 0 : w_[0]; }

  /// Raw packed word access; writers must respect the tail-bit invariant.
  uint64_t word(int k) const { return w_[size_t(k)]; }
  void set_word(int k, uint64_t bits) {
    w_[size_t(k)] = bits;
    if (k == int(w_.size()) - 1) w_[size_t(k)] &= detail::tail_mask(n_);
  }

  /// Coordinates [begin, begin+count) as a fresh vector.
  GF2Vector slice(int begin, int count) const {
    GF2Vector out(count);
    int src = begin >> 6, shift = begin & 63;
    for (int k = 0; k < int(out.w_.size()); ++k) {
      uint64_t lo = w_[size_t(src + k)] >> shift;
      uint64_t hi = (shift && src + k + 1 < int(w_.size())) ? w_[size_t(src + k + 1)] << (64 - shift)
                                                            : 0;
      out.set_word(k, lo | hi);
    }
    return out;
  }

  static GF2Vector concat(const GF2Vector& a, const GF2Vector& b) {
    GF2Vector out(a.n_ + b.n_);
    for (size_t k = 0; k < a.w_.size(); ++k) out.w_[k] = a.w_[k];
    int dst = a.n_ >> 6, shift = a.n_ & 63;
    for (int k = 0; k < int(b.w_.size()); ++k) {
      out.w_[size_t(dst + k)] |= b.w_[size_t(k)] << shift;
      if (shift && dst + k + 1 < int(out.w_.size()))
        out.w_[size_t(dst + k + 1)] |= b.w_[size_t(k)] >> (64 - shift);
    }
    return out;
  }

  GF2Vector select(std::span<const int> coords) const {
    GF2Vector out(int(coords.size()));
    for (size_t k = 0; k < coords.size(); ++k) out.set(int(k), get(coords[k]));
    return out;
  }

  /// Bitstring literal, coordinate 1 first: "110" has bits 0 and 1 set.
  std::string str() const {
    std::string s(size_t(n_), '0');
    for (int j = 0; j < n_; ++j)
      if (get(j)) s[size_t(j)] = '1';
    return s;
  }

  /// Hex literal "0x...", little-endian packed bytes.
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s = "0x";
    int bytes = (n_ + 7) / 8;
    for (int k = 0; k < bytes; ++k) {
      uint64_t byte = (w_[size_t(k / 8)] >> ((k % 8) * 8)) & 0xff;
      s += digits[(byte >> 4) & 0xf];
      s += digits[byte & 0xf];
    }
    return s;
  }

  /// Parses either a bitstring or a "0x..." hex literal. `expect` fixes the
  /// length when nonnegative (required for hex; optional for bitstrings).
  static GF2Vector parse(std::string_view text, int expect = -1, int line = 0) {
    if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
      if (expect < 0) throw format_error("hex vector literal needs a known length", line);
      GF2Vector v(expect);
      std::string_view hex = text.substr(2);
      int bytes = (expect + 7) / 8;
      if (int(hex.size()) != 2 * bytes)
        throw format_error("hex literal has wrong length for " + std::to_string(expect) + " bits",
                           line);
      for (int k = 0; k < bytes; ++k) {
        int hi = hex_digit(hex[size_t(2 * k)], line);
        int lo = hex_digit(hex[size_t(2 * k + 1)], line);
        uint64_t byte = uint64_t(hi) << 4 | uint64_t(lo);
        for (int b = 0; b < 8; ++b) {
          if (!((byte >> b) & 1)) continue;
          int j = 8 * k + b;
          if (j >= expect)
            throw format_error("hex literal sets bits beyond the vector length", line);
          v.set(j, true);
        }
      }
      return v;
    }
    if (expect >= 0 && int(text.size()) != expect)
      throw format_error("expected " + std::to_string(expect) + " bits, got " +
                             std::to_string(text.size()),
                         line);
    GF2Vector v(int(text.size()));
    for (size_t j = 0; j < text.size(); ++j) {
      if (text[j] == '1')
        v.set(int(j), true);
      else if (text[j] != '0')
        throw format_error("bad character in bitstring literal", line);
    }
    return v;
  }

  friend bool operator==(const GF2Vector&, const GF2Vector&) = default;

  size_t hash() const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ uint64_t(n_);
    for (uint64_t w : w_) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return size_t(h);
  }

 private:
  static int hex_digit(char c, int line) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw format_error("bad hex digit", line);
  }

  int n_ = 0;
  boost::container::small_vector<uint64_t, 2> w_;
};

class GF2Matrix {
 public:
  GF2Matrix() = default;
  GF2Matrix(int rows, int cols) : rows_(rows), cols_(cols), r_(size_t(rows), GF2Vector(cols)) {}

  static GF2Matrix from_rows(std::vector<GF2Vector> rows) {
    GF2Matrix m;
    m.rows_ = int(rows.size());
    m.cols_ = rows.empty() ? 0 : rows[0].length();
    for (auto& r : rows) {
      if (r.length() != m.cols_) throw std::invalid_argument("rows of unequal length");
      m.r_.push_back(std::move(r));
    }
    return m;
  }

  static GF2Matrix identity(int n) {
    GF2Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.r_[size_t(i)].set(i, true);
    return m;
  }

  /// Rank-one outer product a b^T.
  static GF2Matrix outer(const GF2Vector& a, const GF2Vector& b) {
    GF2Matrix m(a.length(), b.length());
    for (int i = 0; i < a.length(); ++i)
      if (a.get(i)) m.r_[size_t(i)] = b;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  const GF2Vector& row(int i) const { return r_[size_t(i)]; }
  GF2Vector& row(int i) { return r_[size_t(i)]; }

  /// Keeps only the first k rows.
  void truncate_rows(int k) {
    r_.resize(size_t(k), GF2Vector(cols_));
    rows_ = k;
  }

  bool get(int i, int j) const { return r_[size_t(i)].get(j); }
  void set(int i, int j, bool v) { r_[size_t(i)].set(j, v); }

  bool is_zero() const {
    for (const auto& r : r_)
      if (!r.is_zero()) return false;
    return true;
  }

  GF2Matrix& operator^=(const GF2Matrix& o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) throw std::invalid_argument("shape mismatch");
    for (size_t i = 0; i < r_.size(); ++i) r_[i] ^= o.r_[i];
    return *this;
  }

  friend GF2Matrix operator^(GF2Matrix a, const GF2Matrix& b) {
    a ^= b;
    return a;
  }

  GF2Matrix transposed() const {
    GF2Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (get(i, j)) t.set(j, i, true);
    return t;
  }

  /// M v, contracting over columns; result has one bit per row.
  GF2Vector mul_col(const GF2Vector& v) const {
    GF2Vector out(rows_);
    for (int i = 0; i < rows_; ++i) out.set(i, r_[size_t(i)].dot(v));
    return out;
  }

  /// x M, a combination of rows; result has one bit per column.
  GF2Vector mul_row(const GF2Vector& x) const {
    GF2Vector out(cols_);
    for (int i = 0; i < rows_; ++i)
      if (x.get(i)) out ^= r_[size_t(i)];
    return out;
  }

  friend GF2Matrix mul(const GF2Matrix& a, const GF2Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("shape mismatch in mul");
    GF2Matrix out(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i) out.r_[size_t(i)] = b.mul_row(a.row(i));
    return out;
  }

  /// Packed integer encoding; bit of entry (i,j) at position i*cols + j.
  uint64_t to_index() const {
    if (rows_ * cols_ > 63) throw resource_error("matrix too large for a 64-bit index");
    uint64_t idx = 0;
    for (int i = 0; i < rows_; ++i) idx |= r_[size_t(i)].as_u64() << (i * cols_);
    return idx;
  }

  static GF2Matrix from_index(int rows, int cols, uint64_t idx) {
    GF2Matrix m(rows, cols);
    uint64_t mask = cols >= 64 ? ~uint64_t{0} : (uint64_t{1} << cols) - 1;
    for (int i = 0; i < rows; ++i)
      m.r_[size_t(i)] = GF2Vector::from_u64(cols, (idx >> (i * cols)) & mask);
    return m;
  }

  /// Matrix literal: row literals joined by ';'.
  std::string str() const {
    std::string s;
    for (int i = 0; i < rows_; ++i) {
      if (i) s += ';';
      s += r_[size_t(i)].str();
    }
    return s;
  }

  static GF2Matrix parse(std::string_view text, int expect_cols = -1, int line = 0) {
    std::vector<GF2Vector> rows;
    size_t start = 0;
    while (start <= text.size()) {
      size_t semi = text.find(';', start);
      std::string_view piece =
          semi == std::string_view::npos ? text.substr(start) : text.substr(start, semi - start);
      rows.push_back(GF2Vector::parse(piece, expect_cols, line));
      if (semi == std::string_view::npos) break;
      start = semi + 1;
    }
    if (!rows.empty() && expect_cols < 0) {
      for (const auto& r : rows)
        if (r.length() != rows[0].length())
          throw format_error("matrix rows of unequal length", line);
    }
    return from_rows(std::move(rows));
  }

  friend bool operator==(const GF2Matrix&, const GF2Matrix&) = default;

  size_t hash() const {
    uint64_t h = 0x517cc1b727220a95ull ^ (uint64_t(rows_) << 32) ^ uint64_t(cols_);
    for (const auto& r : r_) h ^= r.hash() + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return size_t(h);
  }

 private:
  int rows_ = 0, cols_ = 0;
  boost::container::small_vector<GF2Vector, 4> r_;
};

/// Reduced row echelon form and the pivot columns (leftmost-first).
/// The row space is preserved; zero rows are moved to the bottom.
inline std::pair<GF2Matrix, std::vector<int>> rref(GF2Matrix m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int sel = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m.get(i, c)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != r) std::swap(m.row(sel), m.row(r));
    for (int i = 0; i < m.rows(); ++i)
      if (i != r && m.get(i, c)) m.row(i) ^= m.row(r);
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

/// Row rank by in-place forward elimination; no reduced form is built.
inline int rank(GF2Matrix m) {
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int sel = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m.get(i, c)) {
        sel = i;
        break;
      }
    if (sel < 0) continue;
    if (sel != r) std::swap(m.row(sel), m.row(r));
    for (int i = r + 1; i < m.rows(); ++i)
      if (m.get(i, c)) m.row(i) ^= m.row(r);
    ++r;
  }
  return r;
}

/// Left-solve: one x with x m = rhs when rhs lies in the row space of m.
/// rhs has one bit per column of m; the solution has one bit per row.
inline std::optional<GF2Vector> solve(const GF2Matrix& m, const GF2Vector& rhs) {
  if (rhs.length() != m.cols()) throw std::invalid_argument("solve: rhs length != cols");
  // Eliminate rhs against a row-reduced copy while tracking coefficients.
  std::vector<GF2Vector> rows, coeffs;
  for (int i = 0; i < m.rows(); ++i) {
    rows.push_back(m.row(i));
    coeffs.push_back(GF2Vector::unit(m.rows(), i));
  }
  std::vector<int> pivot_of_row;
  size_t r = 0;
  for (int c = 0; c < m.cols() && r < rows.size(); ++c) {
    size_t sel = r;
    while (sel < rows.size() && !rows[sel].get(c)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[sel], rows[r]);
    std::swap(coeffs[sel], coeffs[r]);
    for (size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i].get(c)) {
        rows[i] ^= rows[r];
        coeffs[i] ^= coeffs[r];
      }
    pivot_of_row.push_back(c);
    ++r;
  }
  GF2Vector residue = rhs;
  GF2Vector x(m.rows());
  for (size_t i = 0; i < pivot_of_row.size(); ++i) {
    if (residue.get(pivot_of_row[i])) {
      residue ^= rows[i];
      x ^= coeffs[i];
    }
  }
  if (!residue.is_zero()) return std::nullopt;
  return x;
}

/// Right-solve wrapper: one y with m y = rhs (rhs has one bit per row).
inline std::optional<GF2Vector> solve_right(const GF2Matrix& m, const GF2Vector& rhs) {
  return solve(m.transposed(), rhs);
}

/// Basis of the right kernel {x : m x = 0}.
inline std::vector<GF2Vector> kernel(const GF2Matrix& m) {
  auto [red, pivots] = rref(m);
  std::vector<bool> is_pivot(size_t(m.cols()), false);
  for (int p : pivots) is_pivot[size_t(p)] = true;
  std::vector<GF2Vector> basis;
  for (int j = 0; j < m.cols(); ++j) {
    if (is_pivot[size_t(j)]) continue;
    GF2Vector x(m.cols());
    x.set(j, true);
    for (size_t k = 0; k < pivots.size(); ++k)
      if (red.get(int(k), j)) x.set(pivots[k], true);
    basis.push_back(std::move(x));
  }
  return basis;
}

class GF2Tensor {
 public:
  GF2Tensor() = default;
  GF2Tensor(int l, int m, int n)
      : l_(l), m_(m), n_(n), w_(detail::words_for(l * m * n), 0) {}

  static GF2Tensor outer(const GF2Vector& a, const GF2Vector& b, const GF2Vector& c) {
    GF2Tensor t(a.length(), b.length(), c.length());
    for (int i = 0; i < t.l_; ++i) {
      if (!a.get(i)) continue;
      for (int j = 0; j < t.m_; ++j) {
        if (!b.get(j)) continue;
        for (int k = 0; k < t.n_; ++k)
          if (c.get(k)) t.set(i, j, k, true);
      }
    }
    return t;
  }

  int dim0() const { return l_; }
  int dim1() const { return m_; }
  int dim2() const { return n_; }

  bool get(int i, int j, int k) const {
    int p = pos(i, j, k);
    return (w_[size_t(p >> 6)] >> (p & 63)) & 1;
  }

  void set(int i, int j, int k, bool v) {
    int p = pos(i, j, k);
    uint64_t mask = uint64_t{1} << (p & 63);
    if (v)
      w_[size_t(p >> 6)] |= mask;
    else
      w_[size_t(p >> 6)] &= ~mask;
  }

  bool is_zero() const {
    for (uint64_t w : w_)
      if (w) return false;
    return true;
  }

  GF2Tensor& operator^=(const GF2Tensor& o) {
    if (o.l_ != l_ || o.m_ != m_ || o.n_ != n_) throw std::invalid_argument("dim mismatch");
    for (size_t k = 0; k < w_.size(); ++k) w_[k] ^= o.w_[k];
    return *this;
  }

  friend GF2Tensor operator^(GF2Tensor a, const GF2Tensor& b) {
    a ^= b;
    return a;
  }

  /// Mode-0 slice: the m x n matrix T(i, ., .).
  GF2Matrix slice(int i) const {
    GF2Matrix s(m_, n_);
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < n_; ++k)
        if (get(i, j, k)) s.set(j, k, true);
    return s;
  }

  uint64_t to_index() const {
    if (l_ * m_ * n_ > 63) throw resource_error("tensor too large for a 64-bit index");
    return w_.empty() ? 0 : w_[0];
  }

  static GF2Tensor from_index(int l, int m, int n, uint64_t idx) {
    GF2Tensor t(l, m, n);
    if (!t.w_.empty()) {
      t.w_[0] = idx;
      t.w_[0] &= detail::tail_mask(l * m * n);
    }
    return t;
  }

  friend bool operator==(const GF2Tensor&, const GF2Tensor&) = default;

 private:
  int pos(int i, int j, int k) const { return (i * m_ + j) * n_ + k; }

  int l_ = 0, m_ = 0, n_ = 0;
  boost::container::small_vector<uint64_t, 2> w_;
};

}  // namespace shortcode
