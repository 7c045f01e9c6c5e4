#pragma once

// The assignments under test. A Grassmann strategy attaches a linear
// function on V to every vertex V; a shortcode strategy attaches an l-bit
// label to every matrix; a tensor strategy likewise to every tensor.
// Structured backings (a global functional, an affine rule M z + u, a
// per-row functional, a bilinear form, a planted construction) evaluate in
// closed form; table backings store one label per vertex in enumeration
// order. Structured strategies expand to tables that agree entry by entry.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

#include "shortcode/nice_sets.hpp"

namespace shortcode {

/// f(x) = <coefficients, x> + constant.
struct LinearFunctional {
  GF2Vector coefficients;
  bool constant = false;

  int ambient() const { return coefficients.length(); }
  bool eval(const GF2Vector& x) const { return coefficients.dot(x) ^ constant; }

  friend bool operator==(const LinearFunctional&, const LinearFunctional&) = default;
};

inline LinearFunctional sample_functional(Prng& prng, int n, bool affine = false) {
  GF2Vector c = sample_vector(prng, n);
  bool k = affine && prng.bit();
  return {std::move(c), k};
}

// ---------------------------------------------------------------------------
// Grassmann strategies

class GrassmannStrategy {
 public:
  /// F_f: every vertex receives the restriction of one global functional.
  static GrassmannStrategy global(GrassmannGraph graph, LinearFunctional f) {
    GrassmannStrategy s(std::move(graph));
    s.backing_ = std::move(f);
    return s;
  }

  /// Table of l-bit values; entry bits are the values of F(V) on the rows
  /// of V's canonical RREF basis, keyed by vertex index.
  static GrassmannStrategy table(GrassmannGraph graph, std::vector<uint64_t> labels) {
    GrassmannStrategy s(std::move(graph));
    if (BigInt(labels.size()) != s.graph_.vertex_count())
      throw std::invalid_argument("table does not cover the vertex set");
    s.backing_ = std::move(labels);
    return s;
  }

  /// Planted construction: each part is a nice set with its own linear
  /// functional (values f_i per RREF basis row); other vertices get
  /// independent seeded-random linear functions. First matching part wins.
  struct PlantedPart {
    NiceSetGrassmann set;
    LinearFunctional f;
  };
  static GrassmannStrategy planted(GrassmannGraph graph, std::vector<PlantedPart> parts,
                                   uint64_t fallback_seed) {
    GrassmannStrategy s(std::move(graph));
    s.backing_ = Planted{std::move(parts), fallback_seed};
    return s;
  }

  const GrassmannGraph& graph() const { return graph_; }
  int l() const { return graph_.l(); }
  int n() const { return graph_.n(); }

  bool is_global() const { return std::holds_alternative<LinearFunctional>(backing_); }
  const LinearFunctional& functional() const { return std::get<LinearFunctional>(backing_); }

  /// Value bits of F(V) on the rows of V's RREF basis.
  GF2Vector label(const Subspace& v) const {
    if (const auto* f = std::get_if<LinearFunctional>(&backing_)) {
      GF2Vector bits(v.dim());
      for (int i = 0; i < v.dim(); ++i) bits.set(i, f->eval(v.basis().row(i)));
      return bits;
    }
    if (const auto* tab = std::get_if<std::vector<uint64_t>>(&backing_))
      return GF2Vector::from_u64(v.dim(), (*tab)[size_t(graph_.index_of(v))]);
    const Planted& p = std::get<Planted>(backing_);
    for (const auto& part : p.parts) {
      if (!part.set.contains(v)) continue;
      GF2Vector bits(v.dim());
      for (int i = 0; i < v.dim(); ++i) bits.set(i, part.f.eval(v.basis().row(i)));
      return bits;
    }
    Prng cell(p.fallback_seed, graph_.index_of(v));
    return GF2Vector::from_u64(v.dim(), cell.bits(v.dim()));
  }

  /// Evaluates the linear function F(V) at a point of V.
  bool eval(const Subspace& v, const GF2Vector& point) const {
    if (const auto* f = std::get_if<LinearFunctional>(&backing_)) {
      if (!v.contains(point)) throw std::domain_error("eval: point outside the subspace");
      return f->eval(point);
    }
    auto coords = v.coordinates(point);
    if (!coords) throw std::domain_error("eval: point outside the subspace");
    return coords->dot(label(v));
  }

  GrassmannStrategy to_table(uint64_t cap = kDefaultEnumerationCap) const {
    std::vector<uint64_t> labels;
    labels.reserve(size_t(graph_.vertex_count_u64()));
    for_each_vertex(graph_, [&](const Subspace& v) { labels.push_back(label(v).as_u64()); },
                    cap);
    return table(graph_, std::move(labels));
  }

 private:
  struct Planted {
    std::vector<PlantedPart> parts;
    uint64_t fallback_seed = 0;
  };

  explicit GrassmannStrategy(GrassmannGraph graph) : graph_(std::move(graph)) {}

  GrassmannGraph graph_;
  std::variant<LinearFunctional, std::vector<uint64_t>, Planted> backing_;
};

// ---------------------------------------------------------------------------
// Shortcode strategies

class ShortcodeStrategy {
 public:
  struct Affine {
    GF2Vector z;  // length n
    GF2Vector u;  // length l
  };

  struct PlantedPart {
    NiceSetShortcode set;
    LinearFunctional f;  // applied per row
    GF2Vector u;         // per-part constant label offset, length l
  };

  static ShortcodeStrategy affine(ShortcodeGraph graph, GF2Vector z, GF2Vector u) {
    if (z.length() != graph.n() || u.length() != graph.l())
      throw std::invalid_argument("affine strategy: shape mismatch");
    ShortcodeStrategy s(std::move(graph));
    s.backing_ = Affine{std::move(z), std::move(u)};
    return s;
  }

  /// F(M)_i = f(row i of M).
  static ShortcodeStrategy row_functional(ShortcodeGraph graph, LinearFunctional f) {
    if (f.ambient() != graph.n()) throw std::invalid_argument("row functional: shape mismatch");
    ShortcodeStrategy s(std::move(graph));
    s.backing_ = RowFn{std::move(f)};
    return s;
  }

  static ShortcodeStrategy table(ShortcodeGraph graph, std::vector<uint64_t> labels) {
    ShortcodeStrategy s(std::move(graph));
    if (BigInt(labels.size()) != s.graph_.vertex_count())
      throw std::invalid_argument("table does not cover the vertex set");
    s.backing_ = std::move(labels);
    return s;
  }

  static ShortcodeStrategy planted(ShortcodeGraph graph, std::vector<PlantedPart> parts,
                                   uint64_t fallback_seed) {
    ShortcodeStrategy s(std::move(graph));
    s.backing_ = Planted{std::move(parts), fallback_seed, GF2Vector(s.graph_.n())};
    return s;
  }

  const ShortcodeGraph& graph() const { return graph_; }
  int l() const { return graph_.l(); }
  int n() const { return graph_.n(); }

  bool is_affine() const { return std::holds_alternative<Affine>(backing_); }
  const Affine& affine_rule() const { return std::get<Affine>(backing_); }
  bool is_row_functional() const { return std::holds_alternative<RowFn>(backing_); }
  const LinearFunctional& row_rule() const { return std::get<RowFn>(backing_).f; }

  GF2Vector eval(const GF2Matrix& m) const {
    if (m.rows() != graph_.l() || m.cols() != graph_.n())
      throw std::invalid_argument("eval: matrix shape mismatch");
    if (const auto* a = std::get_if<Affine>(&backing_)) return m.mul_col(a->z) ^ a->u;
    if (const auto* r = std::get_if<RowFn>(&backing_)) {
      GF2Vector out(graph_.l());
      for (int i = 0; i < graph_.l(); ++i) out.set(i, r->f.eval(m.row(i)));
      return out;
    }
    if (const auto* tab = std::get_if<std::vector<uint64_t>>(&backing_))
      return GF2Vector::from_u64(graph_.l(), (*tab)[size_t(m.to_index())]);
    const Planted& p = std::get<Planted>(backing_);
    for (const auto& part : p.parts) {
      if (!part.set.contains(m)) continue;
      GF2Vector out = part.u;
      for (int i = 0; i < graph_.l(); ++i)
        if (part.f.eval(m.row(i))) out.set(i, !out.get(i));
      return out;
    }
    Prng cell(p.fallback_seed, m.to_index());
    GF2Vector out = GF2Vector::from_u64(graph_.l(), cell.bits(graph_.l()));
    if (!p.fallback_offset.is_zero()) out ^= m.mul_col(p.fallback_offset);
    return out;
  }

  ShortcodeStrategy to_table(uint64_t cap = kDefaultEnumerationCap) const {
    std::vector<uint64_t> labels;
    labels.reserve(size_t(graph_.vertex_count_u64()));
    for_each_vertex(graph_, [&](const GF2Matrix& m) { labels.push_back(eval(m).as_u64()); },
                    cap);
    return table(graph_, std::move(labels));
  }

  /// G(M) = F(M) + M h, transformed in closed form per backing.
  ShortcodeStrategy shifted(const GF2Vector& h) const {
    if (h.length() != graph_.n()) throw std::invalid_argument("shift: length mismatch");
    ShortcodeStrategy out = *this;
    if (auto* a = std::get_if<Affine>(&out.backing_)) {
      a->z ^= h;
      return out;
    }
    if (auto* r = std::get_if<RowFn>(&out.backing_)) {
      r->f.coefficients ^= h;
      return out;
    }
    if (auto* tab = std::get_if<std::vector<uint64_t>>(&out.backing_)) {
      for (uint64_t idx = 0; idx < tab->size(); ++idx) {
        GF2Matrix m = graph_.vertex_at(idx);
        (*tab)[size_t(idx)] ^= m.mul_col(h).as_u64();
      }
      return out;
    }
    auto& p = std::get<Planted>(out.backing_);
    for (auto& part : p.parts) part.f.coefficients ^= h;
    p.fallback_offset ^= h;
    return out;
  }

 private:
  struct RowFn {
    LinearFunctional f;
  };
  struct Planted {
    std::vector<PlantedPart> parts;
    uint64_t fallback_seed = 0;
    GF2Vector fallback_offset;  // length n; applied to fallback labels as M * offset
  };

  explicit ShortcodeStrategy(ShortcodeGraph graph) : graph_(std::move(graph)) {}

  ShortcodeGraph graph_;
  std::variant<Affine, RowFn, std::vector<uint64_t>, Planted> backing_;
};

/// Uniquifying shift: h uniform over GF(2)^n and G(M) = F(M) + M h.
inline std::pair<GF2Vector, ShortcodeStrategy> uniquify(Prng& prng, const ShortcodeStrategy& f) {
  GF2Vector h = sample_vector(prng, f.n());
  ShortcodeStrategy g = f.shifted(h);
  return {std::move(h), std::move(g)};
}

/// Planted strategy from nice-set parts: each part gets a uniformly random
/// linear functional applied per row plus a per-part constant label.
inline ShortcodeStrategy make_planted(Prng& prng, const ShortcodeGraph& graph,
                                      const std::vector<NiceSetShortcode>& parts) {
  std::vector<ShortcodeStrategy::PlantedPart> built;
  built.reserve(parts.size());
  for (const auto& set : parts) {
    LinearFunctional f{sample_vector(prng, graph.n()), false};
    GF2Vector u = sample_vector(prng, graph.l());
    built.push_back({set, std::move(f), std::move(u)});
  }
  uint64_t fallback = prng.next_u64();
  return ShortcodeStrategy::planted(graph, std::move(built), fallback);
}

inline GrassmannStrategy make_planted_grassmann(Prng& prng, const GrassmannGraph& graph,
                                                const std::vector<NiceSetGrassmann>& parts) {
  std::vector<GrassmannStrategy::PlantedPart> built;
  built.reserve(parts.size());
  for (const auto& set : parts)
    built.push_back({set, LinearFunctional{sample_vector(prng, graph.n()), false}});
  uint64_t fallback = prng.next_u64();
  return GrassmannStrategy::planted(graph, std::move(built), fallback);
}

// ---------------------------------------------------------------------------
// Tensor strategies

class TensorStrategy {
 public:
  /// F(T)_i = sum_{j,k} T(i,j,k) y_j z_k.
  static TensorStrategy bilinear(TensorGraph graph, GF2Vector y, GF2Vector z) {
    if (y.length() != graph.m() || z.length() != graph.n())
      throw std::invalid_argument("bilinear strategy: shape mismatch");
    TensorStrategy s(std::move(graph));
    s.backing_ = Bilinear{std::move(y), std::move(z)};
    return s;
  }

  static TensorStrategy table(TensorGraph graph, std::vector<uint64_t> labels) {
    TensorStrategy s(std::move(graph));
    if (BigInt(labels.size()) != s.graph_.vertex_count())
      throw std::invalid_argument("table does not cover the vertex set");
    s.backing_ = std::move(labels);
    return s;
  }

  const TensorGraph& graph() const { return graph_; }
  int l() const { return graph_.l(); }

  bool is_bilinear() const { return std::holds_alternative<Bilinear>(backing_); }

  struct Bilinear {
    GF2Vector y, z;
  };
  const Bilinear& bilinear_rule() const { return std::get<Bilinear>(backing_); }

  GF2Vector eval(const GF2Tensor& t) const {
    if (const auto* b = std::get_if<Bilinear>(&backing_)) {
      GF2Vector out(graph_.l());
      for (int i = 0; i < graph_.l(); ++i) {
        bool bit = false;
        for (int j = 0; j < graph_.m(); ++j) {
          if (!b->y.get(j)) continue;
          for (int k = 0; k < graph_.n(); ++k)
            if (b->z.get(k) && t.get(i, j, k)) bit = !bit;
        }
        out.set(i, bit);
      }
      return out;
    }
    const auto& tab = std::get<std::vector<uint64_t>>(backing_);
    return GF2Vector::from_u64(graph_.l(), tab[size_t(t.to_index())]);
  }

  TensorStrategy to_table(uint64_t cap = kDefaultEnumerationCap) const {
    std::vector<uint64_t> labels;
    labels.reserve(size_t(graph_.vertex_count_u64()));
    for_each_vertex(graph_, [&](const GF2Tensor& t) { labels.push_back(eval(t).as_u64()); },
                    cap);
    return table(graph_, std::move(labels));
  }

 private:
  explicit TensorStrategy(TensorGraph graph) : graph_(std::move(graph)) {}

  TensorGraph graph_;
  std::variant<Bilinear, std::vector<uint64_t>> backing_;
};

// ---------------------------------------------------------------------------
// Strategy files
//
// Text format, one header line then backing-specific lines:
//   strategy v1 kind=<grassmann|shortcode|tensor>
//       backing=<table|affine|rowfn|bilinear> l=<l> n=<n> [m=<m>]
//   affine:   z=<bits>  u=<bits>
//   rowfn:    f=<bits>  c=<0|1>     (grassmann: the global functional)
//   bilinear: y=<bits>  z=<bits>
//   table:    one hex label per line, line index = vertex integer encoding.

namespace detail {

struct StrategyHeader {
  std::string kind, backing;
  int l = 0, n = 0, m = -1;
};

inline StrategyHeader parse_strategy_header(const std::string& line) {
  std::istringstream in(line);
  std::string word;
  in >> word;
  if (word != "strategy") throw format_error("expected 'strategy' header", 1);
  in >> word;
  if (word != "v1") throw format_error("unsupported strategy version", 1);
  StrategyHeader h;
  while (in >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw format_error("bad header field '" + word + "'", 1);
    std::string key = word.substr(0, eq), value = word.substr(eq + 1);
    if (key == "kind")
      h.kind = value;
    else if (key == "backing")
      h.backing = value;
    else if (key == "l")
      h.l = std::stoi(value);
    else if (key == "n")
      h.n = std::stoi(value);
    else if (key == "m")
      h.m = std::stoi(value);
    else
      throw format_error("unknown header field '" + key + "'", 1);
  }
  if (h.kind.empty() || h.backing.empty() || h.l <= 0 || h.n <= 0)
    throw format_error("incomplete strategy header", 1);
  return h;
}

inline GF2Vector parse_field_line(const std::string& line, const std::string& key, int length,
                                  int lineno) {
  std::string prefix = key + "=";
  if (line.rfind(prefix, 0) != 0)
    throw format_error("expected '" + key + "=<bits>'", lineno);
  return GF2Vector::parse(std::string_view(line).substr(prefix.size()), length, lineno);
}

inline std::vector<uint64_t> parse_table_lines(std::istream& in, uint64_t expected, int l,
                                               int& lineno) {
  std::vector<uint64_t> labels;
  labels.reserve(size_t(expected));
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), value, 16);
    if (ec != std::errc() || ptr != line.data() + line.size())
      throw format_error("bad hex label", lineno);
    if (l < 64 && value >= (uint64_t{1} << l))
      throw format_error("label wider than " + std::to_string(l) + " bits", lineno);
    labels.push_back(value);
  }
  if (labels.size() != expected)
    throw format_error("table has " + std::to_string(labels.size()) + " entries, expected " +
                           std::to_string(expected),
                       lineno + 1);
  return labels;
}

}  // namespace detail

using AnyStrategy = std::variant<GrassmannStrategy, ShortcodeStrategy, TensorStrategy>;

inline AnyStrategy read_strategy(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw format_error("empty strategy file", 1);
  auto h = detail::parse_strategy_header(line);
  int lineno = 1;
  auto field = [&](const std::string& key, int length) {
    std::string out;
    do {
      if (!std::getline(in, out)) throw format_error("unexpected end of file", lineno + 1);
      ++lineno;
    } while (out.empty());
    return detail::parse_field_line(out, key, length, lineno);
  };

  if (h.kind == "shortcode") {
    ShortcodeGraph graph(h.l, h.n);
    if (h.backing == "affine") {
      GF2Vector z = field("z", h.n);
      GF2Vector u = field("u", h.l);
      return ShortcodeStrategy::affine(graph, std::move(z), std::move(u));
    }
    if (h.backing == "rowfn") {
      GF2Vector f = field("f", h.n);
      GF2Vector c = field("c", 1);
      return ShortcodeStrategy::row_functional(graph, {std::move(f), c.get(0)});
    }
    if (h.backing == "table") {
      auto labels = detail::parse_table_lines(in, graph.vertex_count_u64(), h.l, lineno);
      return ShortcodeStrategy::table(graph, std::move(labels));
    }
    throw format_error("unsupported shortcode backing '" + h.backing + "'", 1);
  }
  if (h.kind == "grassmann") {
    GrassmannGraph graph(h.l, h.n);
    if (h.backing == "rowfn" || h.backing == "affine") {
      GF2Vector f = field("f", h.n);
      GF2Vector c = field("c", 1);
      return GrassmannStrategy::global(graph, {std::move(f), c.get(0)});
    }
    if (h.backing == "table") {
      auto labels = detail::parse_table_lines(in, graph.vertex_count_u64(), h.l, lineno);
      return GrassmannStrategy::table(graph, std::move(labels));
    }
    throw format_error("unsupported grassmann backing '" + h.backing + "'", 1);
  }
  if (h.kind == "tensor") {
    if (h.m <= 0) throw format_error("tensor strategy needs m=<m>", 1);
    TensorGraph graph(h.l, h.m, h.n);
    if (h.backing == "bilinear") {
      GF2Vector y = field("y", h.m);
      GF2Vector z = field("z", h.n);
      return TensorStrategy::bilinear(graph, std::move(y), std::move(z));
    }
    if (h.backing == "table") {
      auto labels = detail::parse_table_lines(in, graph.vertex_count_u64(), h.l, lineno);
      return TensorStrategy::table(graph, std::move(labels));
    }
    throw format_error("unsupported tensor backing '" + h.backing + "'", 1);
  }
  throw format_error("unknown strategy kind '" + h.kind + "'", 1);
}

inline AnyStrategy read_strategy_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open strategy file: " + path);
  return read_strategy(in);
}

namespace detail {
inline std::string hex_label(uint64_t v) {
  char buf[17];
  int len = std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(v));
  return std::string(buf, size_t(len));
}
}  // namespace detail

inline void write_strategy(std::ostream& out, const ShortcodeStrategy& s) {
  if (s.is_affine()) {
    out << "strategy v1 kind=shortcode backing=affine l=" << s.l() << " n=" << s.n() << "\n";
    out << "z=" << s.affine_rule().z.str() << "\n";
    out << "u=" << s.affine_rule().u.str() << "\n";
    return;
  }
  if (s.is_row_functional()) {
    out << "strategy v1 kind=shortcode backing=rowfn l=" << s.l() << " n=" << s.n() << "\n";
    out << "f=" << s.row_rule().coefficients.str() << "\n";
    out << "c=" << (s.row_rule().constant ? "1" : "0") << "\n";
    return;
  }
  // Planted and table strategies serialize as their table expansion.
  out << "strategy v1 kind=shortcode backing=table l=" << s.l() << " n=" << s.n() << "\n";
  for_each_vertex(s.graph(),
                  [&](const GF2Matrix& m) { out << detail::hex_label(s.eval(m).as_u64()) << "\n"; });
}

inline void write_strategy(std::ostream& out, const GrassmannStrategy& s) {
  if (s.is_global()) {
    out << "strategy v1 kind=grassmann backing=rowfn l=" << s.l() << " n=" << s.n() << "\n";
    out << "f=" << s.functional().coefficients.str() << "\n";
    out << "c=" << (s.functional().constant ? "1" : "0") << "\n";
    return;
  }
  out << "strategy v1 kind=grassmann backing=table l=" << s.l() << " n=" << s.n() << "\n";
  for_each_vertex(s.graph(),
                  [&](const Subspace& v) { out << detail::hex_label(s.label(v).as_u64()) << "\n"; });
}

inline void write_strategy(std::ostream& out, const TensorStrategy& s) {
  const TensorGraph& g = s.graph();
  if (s.is_bilinear()) {
    out << "strategy v1 kind=tensor backing=bilinear l=" << g.l() << " n=" << g.n()
        << " m=" << g.m() << "\n";
    out << "y=" << s.bilinear_rule().y.str() << "\n";
    out << "z=" << s.bilinear_rule().z.str() << "\n";
    return;
  }
  out << "strategy v1 kind=tensor backing=table l=" << g.l() << " n=" << g.n()
      << " m=" << g.m() << "\n";
  for_each_vertex(g,
                  [&](const GF2Tensor& t) { out << detail::hex_label(s.eval(t).as_u64()) << "\n"; });
}

}  // namespace shortcode
