#pragma once

// Expansion measurement, nice-set density, brute-force affine decoders, the
// level-set averaging bridge from unique-test success to a non-expanding
// level set, expansion transport through a random embedding basis, and the
// rank spectrum of the shortcode Cayley graph.
//
// Two figures are always reported for a vertex set:
//   stay       - the lazy convention: a step M -> M + a b^T with a and b
//                uniform including zero stays inside (on the Grassmann side
//                this is the neighbor stay probability 1 - Phi);
//   expansion  - Phi conditioned on genuinely moving rank-1 steps, i.e. the
//                random-walk convention.
// Reporting both prevents silent convention mismatches between the lazy
// product form and the walk form.

#include <functional>
#include <map>

#include <json.hpp>

#include "shortcode/embedding.hpp"
#include "shortcode/testers.hpp"

namespace shortcode {

struct Rational {
  uint64_t num = 0;
  uint64_t den = 1;

  double value() const { return den ? double(num) / double(den) : 0.0; }

  bool eq(uint64_t a, uint64_t b) const { return __uint128_t(num) * b == __uint128_t(a) * den; }
  bool ge(const Rational& o) const { return __uint128_t(num) * o.den >= __uint128_t(o.num) * den; }
  bool le(const Rational& o) const { return __uint128_t(num) * o.den <= __uint128_t(o.num) * den; }
  bool gt(const Rational& o) const { return __uint128_t(num) * o.den > __uint128_t(o.num) * den; }

  /// this >= o/2, exactly.
  bool ge_half(const Rational& o) const {
    return __uint128_t(num) * o.den * 2 >= __uint128_t(o.num) * den;
  }

  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

struct ExpansionReport {
  std::string set;
  bool exact = true;
  uint64_t members = 0;
  Rational stay;       // lazy stay probability
  Rational expansion;  // Phi over moving rank-1 steps
  uint64_t trials = 0, seed = 0;

  Rational walk_stay() const { return {expansion.den - expansion.num, expansion.den}; }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["set"] = set;
    j["mode"] = exact ? "exact" : "monte_carlo";
    if (!exact) {
      j["trials"] = trials;
      j["seed"] = seed;
    }
    j["members"] = members;
    j["stay_num"] = stay.num;
    j["stay_den"] = stay.den;
    j["stay"] = stay.value();
    j["phi_num"] = expansion.num;
    j["phi_den"] = expansion.den;
    j["phi"] = expansion.value();
    return j;
  }
};

// ---------------------------------------------------------------------------
// Shortcode-side stay probability

inline ExpansionReport shortcode_stay(const ShortcodeGraph& g,
                                      const std::vector<GF2Matrix>& members,
                                      std::function<bool(const GF2Matrix&)> contains,
                                      std::string descriptor) {
  if (members.empty()) throw std::domain_error("stay probability of an empty set");
  int l = g.l(), n = g.n();
  ExpansionReport rep;
  rep.set = std::move(descriptor);
  rep.exact = true;
  rep.members = members.size();
  uint64_t stay = 0, leave_moving = 0;
  for (const GF2Matrix& m : members) {
    for (uint64_t ai = 0; ai < (uint64_t{1} << l); ++ai) {
      GF2Vector a = GF2Vector::from_u64(l, ai);
      for (uint64_t bi = 0; bi < (uint64_t{1} << n); ++bi) {
        GF2Vector b = GF2Vector::from_u64(n, bi);
        bool inside;
        if (ai && bi) {
          GF2Matrix m2 = m ^ GF2Matrix::outer(a, b);
          inside = contains(m2);
          if (!inside) ++leave_moving;
        } else {
          inside = true;
        }
        if (inside) ++stay;
      }
    }
  }
  uint64_t lazy_den = members.size() << (l + n);
  uint64_t move_den = members.size() * ((uint64_t{1} << l) - 1) * ((uint64_t{1} << n) - 1);
  rep.stay = {stay, lazy_den};
  rep.expansion = {leave_moving, move_den};
  return rep;
}

inline ExpansionReport shortcode_stay(const ShortcodeGraph& g, const NiceSetShortcode& s,
                                      const Mode& mode) {
  auto family = s.solve_family();
  if (!family) throw std::domain_error("stay probability of an empty set");
  if (const auto* exact = std::get_if<ExactMode>(&mode)) {
    auto members = s.members(exact->cap);
    return shortcode_stay(g, members, [&s](const GF2Matrix& m) { return s.contains(m); },
                          s.describe());
  }
  const auto& mc = std::get<MonteCarloMode>(mode);
  ExpansionReport rep;
  rep.set = s.describe();
  rep.exact = false;
  rep.trials = mc.trials;
  rep.seed = mc.seed;
  rep.members = family->directions.size() <= 62 ? family->size() : 0;
  auto [stay, total] = detail::chunked_counts(
      mc.trials, mc.jobs, [&](uint64_t begin, uint64_t end, int worker) {
        Prng prng(mc.seed, uint64_t(worker));
        uint64_t inside = 0;
        for (uint64_t i = begin; i < end; ++i) {
          GF2Matrix m = family->sample(prng);
          ShortcodeStep step = shortcode_step(prng, m);
          if (s.contains(step.m2)) ++inside;
        }
        return std::pair<uint64_t, uint64_t>{inside, end - begin};
      });
  rep.stay = {stay, total};
  auto [leave, total2] = detail::chunked_counts(
      mc.trials, mc.jobs, [&](uint64_t begin, uint64_t end, int worker) {
        Prng prng(mc.seed, uint64_t(worker) + uint64_t(mc.jobs));
        uint64_t out = 0;
        for (uint64_t i = begin; i < end; ++i) {
          GF2Matrix m = family->sample(prng);
          GF2Vector a = sample_nonzero_vector(prng, g.l());
          GF2Vector b = sample_nonzero_vector(prng, g.n());
          if (!s.contains(m ^ GF2Matrix::outer(a, b))) ++out;
        }
        return std::pair<uint64_t, uint64_t>{out, end - begin};
      });
  rep.expansion = {leave, total2};
  return rep;
}

// ---------------------------------------------------------------------------
// Grassmann-side expansion

inline ExpansionReport grassmann_expansion(const GrassmannGraph& g,
                                           const std::vector<Subspace>& members,
                                           std::function<bool(const Subspace&)> contains,
                                           std::string descriptor,
                                           uint64_t cap = kDefaultEnumerationCap) {
  if (members.empty()) throw std::domain_error("expansion of an empty set");
  ExpansionReport rep;
  rep.set = std::move(descriptor);
  rep.exact = true;
  rep.members = members.size();
  auto vertices = all_vertices(g, cap);
  uint64_t leave = 0, edges = 0;
  for (const Subspace& v : members)
    for (const Subspace& w : vertices) {
      if (w == v || !grassmann_adjacent(v, w)) continue;
      ++edges;
      if (!contains(w)) ++leave;
    }
  rep.expansion = {leave, edges};
  rep.stay = {edges - leave, edges};
  return rep;
}

/// Sampled walk from a uniform member of an explicit list.
inline ExpansionReport grassmann_expansion_mc(const GrassmannGraph& g,
                                              const std::vector<Subspace>& members,
                                              std::function<bool(const Subspace&)> contains,
                                              std::string descriptor,
                                              const MonteCarloMode& mc) {
  if (members.empty()) throw std::domain_error("expansion of an empty set");
  ExpansionReport rep;
  rep.set = std::move(descriptor);
  rep.exact = false;
  rep.trials = mc.trials;
  rep.seed = mc.seed;
  rep.members = members.size();
  auto [leave, total] = detail::chunked_counts(
      mc.trials, mc.jobs, [&](uint64_t begin, uint64_t end, int worker) {
        Prng prng(mc.seed, uint64_t(worker));
        uint64_t out = 0;
        for (uint64_t i = begin; i < end; ++i) {
          const Subspace& v = members[size_t(prng.below(members.size()))];
          if (!contains(grassmann_neighbor(prng, v))) ++out;
        }
        return std::pair<uint64_t, uint64_t>{out, end - begin};
      });
  (void)g;
  rep.expansion = {leave, total};
  rep.stay = {total - leave, total};
  return rep;
}

inline ExpansionReport grassmann_expansion(const GrassmannGraph& g, const NiceSetGrassmann& s,
                                           const Mode& mode) {
  if (const auto* exact = std::get_if<ExactMode>(&mode)) {
    auto members = s.members(g.l(), exact->cap);
    return grassmann_expansion(g, members, [&s](const Subspace& v) { return s.contains(v); },
                               s.describe(), exact->cap);
  }
  const auto& mc = std::get<MonteCarloMode>(mode);
  ExpansionReport rep;
  rep.set = s.describe();
  rep.exact = false;
  rep.trials = mc.trials;
  rep.seed = mc.seed;
  auto [leave, total] = detail::chunked_counts(
      mc.trials, mc.jobs, [&](uint64_t begin, uint64_t end, int worker) {
        Prng prng(mc.seed, uint64_t(worker));
        uint64_t out = 0;
        for (uint64_t i = begin; i < end; ++i) {
          Subspace v = sample_nice_grassmann(prng, s, g.l());
          Subspace w = grassmann_neighbor(prng, v);
          if (!s.contains(w)) ++out;
        }
        return std::pair<uint64_t, uint64_t>{out, end - begin};
      });
  rep.expansion = {leave, total};
  rep.stay = {total - leave, total};
  return rep;
}

// ---------------------------------------------------------------------------
// Nice-set density

inline Rational nice_density(const std::function<bool(const GF2Matrix&)>& in_s,
                             const NiceSetShortcode& t, uint64_t cap = kDefaultEnumerationCap) {
  auto members = t.members(cap);
  if (members.empty()) throw std::domain_error("density inside an empty set");
  uint64_t hits = 0;
  for (const GF2Matrix& m : members)
    if (in_s(m)) ++hits;
  return {hits, members.size()};
}

inline Rational nice_density(const std::function<bool(const Subspace&)>& in_s,
                             const NiceSetGrassmann& t, int l,
                             uint64_t cap = kDefaultEnumerationCap) {
  auto members = t.members(l, cap);
  if (members.empty()) throw std::domain_error("density inside an empty set");
  uint64_t hits = 0;
  for (const Subspace& v : members)
    if (in_s(v)) ++hits;
  return {hits, members.size()};
}

// ---------------------------------------------------------------------------
// Decoders

struct ShortcodeDecodeReport {
  NiceSetShortcode best_set;
  GF2Vector z, u;
  Rational density;
  uint64_t sets_searched = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = "shortcode_decode";
    j["set"] = best_set.describe();
    j["r"] = best_set.r();
    j["z"] = z.str();
    j["u"] = u.str();
    j["density_num"] = density.num;
    j["density_den"] = density.den;
    j["density"] = density.value();
    j["sets_searched"] = sets_searched;
    return j;
  }
};

/// Exhaustive search for the nice set (r <= r_max) and affine rule M z + u
/// maximizing conditional agreement with F. Ties resolve to the smaller
/// constraint count, then the earlier canonical set, then the smaller (z, u).
inline ShortcodeDecodeReport decode_shortcode(const ShortcodeStrategy& f, int r_max,
                                              uint64_t cap = kDefaultEnumerationCap) {
  int l = f.l(), n = f.n();
  ShortcodeDecodeReport rep;
  bool have = false;
  for (const NiceSetShortcode& t : enumerate_nice_sets_shortcode(l, n, r_max)) {
    auto members = t.members(cap);
    if (members.empty()) continue;
    ++rep.sets_searched;
    std::vector<GF2Vector> values;
    values.reserve(members.size());
    for (const GF2Matrix& m : members) values.push_back(f.eval(m));
    for (uint64_t zi = 0; zi < (uint64_t{1} << n); ++zi) {
      GF2Vector z = GF2Vector::from_u64(n, zi);
      for (uint64_t ui = 0; ui < (uint64_t{1} << l); ++ui) {
        GF2Vector u = GF2Vector::from_u64(l, ui);
        uint64_t hits = 0;
        for (size_t k = 0; k < members.size(); ++k)
          if ((members[k].mul_col(z) ^ u) == values[k]) ++hits;
        Rational density{hits, members.size()};
        if (!have || density.gt(rep.density)) {
          have = true;
          rep.best_set = t;
          rep.z = z;
          rep.u = u;
          rep.density = density;
        }
      }
    }
  }
  if (!have) throw std::domain_error("decode: no nonempty nice set within r_max");
  return rep;
}

struct GrassmannDecodeReport {
  NiceSetGrassmann best_set;
  LinearFunctional f;
  Rational density;
  uint64_t sets_searched = 0;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = "grassmann_decode";
    j["set"] = best_set.describe();
    j["r"] = best_set.r();
    j["f"] = f.coefficients.str();
    j["c"] = f.constant ? 1 : 0;
    j["density_num"] = density.num;
    j["density_den"] = density.den;
    j["density"] = density.value();
    j["sets_searched"] = sets_searched;
    return j;
  }
};

/// True when F(V) equals the restriction of candidate to V, as functions.
inline bool strategy_matches_functional(const GrassmannStrategy& f, const Subspace& v,
                                        const LinearFunctional& candidate) {
  for (int i = 0; i < v.dim(); ++i)
    if (f.eval(v, v.basis().row(i)) != candidate.eval(v.basis().row(i))) return false;
  GF2Vector zero(v.ambient());
  return f.eval(v, zero) == candidate.constant;
}

inline GrassmannDecodeReport decode_grassmann(const GrassmannStrategy& f, int r_max,
                                              uint64_t cap = kDefaultEnumerationCap) {
  int l = f.l(), n = f.n();
  GrassmannDecodeReport rep;
  bool have = false;
  for (const NiceSetGrassmann& t : enumerate_nice_sets_grassmann(l, n, r_max)) {
    auto members = t.members(l, cap);
    if (members.empty()) continue;
    ++rep.sets_searched;
    for (uint64_t ci = 0; ci < (uint64_t{1} << n); ++ci) {
      for (int k = 0; k < 2; ++k) {
        LinearFunctional candidate{GF2Vector::from_u64(n, ci), k == 1};
        uint64_t hits = 0;
        for (const Subspace& v : members)
          if (strategy_matches_functional(f, v, candidate)) ++hits;
        Rational density{hits, members.size()};
        if (!have || density.gt(rep.density)) {
          have = true;
          rep.best_set = t;
          rep.f = candidate;
          rep.density = density;
        }
      }
    }
  }
  if (!have) throw std::domain_error("decode: no nonempty nice set within r_max");
  return rep;
}

// ---------------------------------------------------------------------------
// Level-set bridge: unique-test success concentrates on a level set

struct LevelSetEntry {
  GF2Vector label;
  uint64_t size = 0;
  Rational stay;
};

struct BridgeReport {
  Rational eta;  // exact unique-test pass probability of F
  std::vector<LevelSetEntry> levels;
  bool averaging_identity = false;  // sum of level stays equals eta exactly
  GF2Vector best_label;
  Rational best_stay;
  NiceSetShortcode witness_set;
  GF2Vector witness_z, witness_u;  // H(M) = M z + u with H = z on the set
  Rational witness_density;

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = "level_set_bridge";
    j["eta_num"] = eta.num;
    j["eta_den"] = eta.den;
    nlohmann::ordered_json ls = nlohmann::ordered_json::array();
    for (const auto& e : levels) {
      nlohmann::ordered_json je;
      je["label"] = e.label.str();
      je["size"] = e.size;
      je["stay_num"] = e.stay.num;
      je["stay_den"] = e.stay.den;
      ls.push_back(je);
    }
    j["levels"] = ls;
    j["averaging_identity"] = averaging_identity;
    j["best_label"] = best_label.str();
    j["witness_set"] = witness_set.describe();
    j["witness_z"] = witness_z.str();
    j["witness_u"] = witness_u.str();
    j["witness_density"] = witness_density.value();
    return j;
  }
};

/// Splits the vertex set into level sets S_z = { M : F(M) = z }, measures
/// each lazy stay probability, checks the exact averaging identity against
/// the unique-test pass probability, and decodes the best level set with the
/// affine witness H(M) = M q + t + z built from one of its constraints.
inline BridgeReport expansion_soundness_bridge(const ShortcodeStrategy& f, int r_max,
                                               uint64_t cap = kDefaultEnumerationCap) {
  const ShortcodeGraph& g = f.graph();
  int l = g.l(), n = g.n();
  BridgeReport rep;
  TestReport unique = pass_probability(f, TestKind::UniqueDeg2Shortcode, ExactMode{cap, 1});
  rep.eta = {unique.passes, unique.outcomes};

  std::map<uint64_t, std::vector<GF2Matrix>> levels;
  for_each_vertex(g, [&](const GF2Matrix& m) { levels[f.eval(m).as_u64()].push_back(m); }, cap);

  __uint128_t weighted_stays = 0;
  bool have_best = false;
  for (auto& [bits, members] : levels) {
    GF2Vector label = GF2Vector::from_u64(l, bits);
    auto in_level = [&](const GF2Matrix& m) { return f.eval(m).as_u64() == bits; };
    ExpansionReport er = shortcode_stay(g, members, in_level, "level " + label.str());
    LevelSetEntry entry{label, members.size(), er.stay};
    rep.levels.push_back(entry);
    weighted_stays += er.stay.num;
    if (!have_best || entry.stay.gt(rep.best_stay)) {
      have_best = true;
      rep.best_label = label;
      rep.best_stay = entry.stay;
    }
  }
  // Every unique-test pass is a stay of exactly one level set.
  uint64_t vertex_total = g.vertex_count_u64();
  rep.averaging_identity =
      weighted_stays == __uint128_t(rep.eta.num) &&
      __uint128_t(vertex_total) << (l + n) == __uint128_t(rep.eta.den);

  // Decode the winning level set: the densest nice set with r <= r_max.
  auto in_best = [&](const GF2Matrix& m) { return f.eval(m).as_u64() == rep.best_label.as_u64(); };
  bool have_set = false;
  Rational best_density{0, 1};
  NiceSetShortcode best_set = NiceSetShortcode::everything(l, n);
  for (const NiceSetShortcode& t : enumerate_nice_sets_shortcode(l, n, r_max)) {
    auto members = t.members(cap);
    if (members.empty()) continue;
    uint64_t hits = 0;
    for (const GF2Matrix& m : members)
      if (in_best(m)) ++hits;
    Rational density{hits, members.size()};
    if (!have_set || density.gt(best_density)) {
      have_set = true;
      best_density = density;
      best_set = t;
    }
  }
  rep.witness_set = best_set;
  rep.witness_density = best_density;
  if (!best_set.right.empty()) {
    rep.witness_z = best_set.right[0].q;
    rep.witness_u = best_set.right[0].t ^ rep.best_label;
  } else {
    rep.witness_z = GF2Vector(n);
    rep.witness_u = rep.best_label;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Expansion transport through a random basis

struct ConverseTrial {
  uint64_t image_size = 0;
  Rational image_walk_stay;  // walk convention; {0, 1} when the image is empty
};

struct ConverseReport {
  uint64_t source_size = 0;
  std::vector<ConverseTrial> trials;
  double mean_image_fraction = 0.0;
  double mean_walk_stay = 0.0;
};

/// Samples uniformly random bases B, maps S through phi_B, and measures the
/// image sizes and walk stay probabilities on the shortcode side.
inline ConverseReport converse_embedding_expansion(const std::vector<Subspace>& s_members,
                                                   int l, int n, int num_bases, Prng& prng,
                                                   uint64_t cap = kDefaultEnumerationCap) {
  if (s_members.empty()) throw std::domain_error("empty source set");
  ConverseReport rep;
  rep.source_size = s_members.size();
  double frac_sum = 0.0, stay_sum = 0.0;
  int stay_count = 0;
  for (int trial = 0; trial < num_bases; ++trial) {
    Embedding emb(l, n, sample_basis(prng, n));
    std::vector<GF2Matrix> image;
    for (const Subspace& v : s_members)
      if (emb.in_domain(v)) image.push_back(emb.phi(v));
    ConverseTrial t;
    t.image_size = image.size();
    if (!image.empty()) {
      std::unordered_set<uint64_t> image_idx;
      for (const GF2Matrix& m : image) image_idx.insert(m.to_index());
      auto contains = [&](const GF2Matrix& m) { return image_idx.count(m.to_index()) > 0; };
      ExpansionReport er =
          shortcode_stay(ShortcodeGraph(l, n - l), image, contains, "phi image");
      t.image_walk_stay = er.walk_stay();
      stay_sum += t.image_walk_stay.value();
      ++stay_count;
    }
    frac_sum += double(t.image_size) / double(s_members.size());
    rep.trials.push_back(t);
    (void)cap;
  }
  rep.mean_image_fraction = num_bases ? frac_sum / num_bases : 0.0;
  rep.mean_walk_stay = stay_count ? stay_sum / stay_count : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Cayley spectrum

/// Eigenvalue of the character indexed by A for the lazy step distribution:
/// lambda(A) = Pr_a[A^T a = 0] = 2^{-rank(A)}.
inline Rational cayley_eigenvalue(const GF2Matrix& a) {
  int r = rank(a);
  return {1, uint64_t{1} << r};
}

/// rank -> eigenvalue table for S_{l,n}, ranks 0..min(l, n).
inline std::vector<std::pair<int, Rational>> spectrum_by_rank(int l, int n) {
  std::vector<std::pair<int, Rational>> table;
  for (int r = 0; r <= std::min(l, n); ++r) table.push_back({r, Rational{1, uint64_t{1} << r}});
  return table;
}

}  // namespace shortcode
