#pragma once

// The four 2-query consistency tests as acceptance predicates, plus exact
// (full enumeration) and seeded Monte Carlo pass-probability estimators.
//
// Exact mode enumerates the full product outcome space with multiplicity:
// every edge once for the Grassmann test, every (M, a, b) triple for the
// degree-2 tests (a and b uniform including zero), and every (T, a, b, c)
// with a nonzero for the degree-3 test. Monte Carlo mode draws through the
// graph samplers; reports carry raw counts and a 3-sigma binomial radius.

#include <cmath>
#include <thread>

#include <json.hpp>

#include "shortcode/strategies.hpp"

namespace shortcode {

enum class TestKind { GrassmannConsistency, Deg2Shortcode, UniqueDeg2Shortcode, UniqueDeg3Shortcode };

inline const char* test_kind_name(TestKind k) {
  switch (k) {
    case TestKind::GrassmannConsistency: return "grassmann";
    case TestKind::Deg2Shortcode: return "deg2";
    case TestKind::UniqueDeg2Shortcode: return "unique_deg2";
    case TestKind::UniqueDeg3Shortcode: return "unique_deg3";
  }
  return "?";
}

struct ExactMode {
  uint64_t cap = kDefaultEnumerationCap;
  int jobs = 1;
};

struct MonteCarloMode {
  uint64_t trials = 100000;
  uint64_t seed = 0;
  int jobs = 1;
};

using Mode = std::variant<ExactMode, MonteCarloMode>;

struct TestReport {
  TestKind kind = TestKind::Deg2Shortcode;
  int l = 0, n = 0, m = -1;
  bool exact = true;
  uint64_t trials = 0, seed = 0;
  uint64_t passes = 0, outcomes = 0;

  double probability() const { return outcomes ? double(passes) / double(outcomes) : 0.0; }

  /// Three binomial standard errors around the estimate (sampled mode).
  double ci3sigma() const {
    if (exact || outcomes == 0) return 0.0;
    double p = probability();
    return 3.0 * std::sqrt(p * (1.0 - p) / double(outcomes));
  }

  /// True when the exact probability equals num/den.
  bool equals(uint64_t num, uint64_t den) const {
    return exact && __uint128_t(passes) * den == __uint128_t(num) * outcomes;
  }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["kind"] = test_kind_name(kind);
    j["l"] = l;
    j["n"] = n;
    if (m >= 0) j["m"] = m;
    j["mode"] = exact ? "exact" : "monte_carlo";
    if (!exact) {
      j["trials"] = trials;
      j["seed"] = seed;
    }
    j["passes"] = passes;
    j["outcomes"] = outcomes;
    j["probability"] = probability();
    if (!exact) j["ci3sigma"] = ci3sigma();
    return j;
  }
};

// ---------------------------------------------------------------------------
// Acceptance predicates

/// Grassmann consistency: the linear functions F(V) and F(V') agree on
/// every vector of V * V' (checked on a basis of the intersection plus the
/// zero vector, which covers affine-backed strategies too).
inline bool accept_grassmann(const GrassmannStrategy& f, const Subspace& v, const Subspace& w) {
  if (v.ambient() != w.ambient() || v.dim() != w.dim())
    throw std::invalid_argument("accept_grassmann: vertices of different graphs");
  Subspace meet = intersect(v, w);
  if (meet.dim() != v.dim() - 1)
    throw std::invalid_argument("accept_grassmann: vertices are not adjacent");
  for (int i = 0; i < meet.dim(); ++i) {
    const GF2Vector& point = meet.basis().row(i);
    if (f.eval(v, point) != f.eval(w, point)) return false;
  }
  GF2Vector zero(v.ambient());
  return f.eval(v, zero) == f.eval(w, zero);
}

/// 2-to-2 acceptance: F(M + a b^T) - F(M) must be 0 or a.
inline bool accept_deg2(const ShortcodeStrategy& f, const GF2Matrix& m, const GF2Vector& a,
                        const GF2Vector& b) {
  GF2Matrix m2 = m;
  if (!a.is_zero() && !b.is_zero()) m2 ^= GF2Matrix::outer(a, b);
  GF2Vector d = f.eval(m2) ^ f.eval(m);
  return d.is_zero() || d == a;
}

inline bool accept_unique_deg2(const ShortcodeStrategy& f, const GF2Matrix& m, const GF2Vector& a,
                               const GF2Vector& b) {
  GF2Matrix m2 = m;
  if (!a.is_zero() && !b.is_zero()) m2 ^= GF2Matrix::outer(a, b);
  return f.eval(m2) == f.eval(m);
}

inline bool accept_unique_deg3(const TensorStrategy& f, const GF2Tensor& t, const GF2Vector& a,
                               const GF2Vector& b, const GF2Vector& c) {
  GF2Tensor t2 = t;
  if (!a.is_zero() && !b.is_zero() && !c.is_zero()) t2 ^= GF2Tensor::outer(a, b, c);
  return f.eval(t2) == f.eval(t);
}

// ---------------------------------------------------------------------------
// Counting helpers

namespace detail {

/// Splits [0, total) into `jobs` chunks, runs `work(begin, end)` on each and
/// sums the (passes, outcomes) pairs. The chunk layout depends only on
/// (total, jobs), so aggregate counts are independent of scheduling.
template <class Work>
std::pair<uint64_t, uint64_t> chunked_counts(uint64_t total, int jobs, Work&& work) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || total < 2) return work(0, total, 0);
  uint64_t chunk = (total + uint64_t(jobs) - 1) / uint64_t(jobs);
  std::vector<std::pair<uint64_t, uint64_t>> parts(size_t(jobs), {0, 0});
  std::vector<std::thread> threads;
  for (int w = 0; w < jobs; ++w) {
    uint64_t begin = std::min(total, uint64_t(w) * chunk);
    uint64_t end = std::min(total, begin + chunk);
    threads.emplace_back([&parts, &work, w, begin, end] { parts[size_t(w)] = work(begin, end, w); });
  }
  for (auto& t : threads) t.join();
  uint64_t passes = 0, outcomes = 0;
  for (auto [p, o] : parts) {
    passes += p;
    outcomes += o;
  }
  return {passes, outcomes};
}

inline uint64_t checked_outcomes(const BigInt& count, uint64_t cap) {
  if (count > BigInt(cap))
    throw resource_error("exact outcome count " + count.str() + " exceeds cap " +
                         std::to_string(cap));
  return count.convert_to<uint64_t>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Pass probabilities

inline TestReport pass_probability(const GrassmannStrategy& f, const Mode& mode) {
  TestReport rep;
  rep.kind = TestKind::GrassmannConsistency;
  rep.l = f.l();
  rep.n = f.n();
  if (const auto* exact = std::get_if<ExactMode>(&mode)) {
    rep.exact = true;
    auto vertices = all_vertices(f.graph(), exact->cap);
    auto [passes, outcomes] = detail::chunked_counts(
        vertices.size(), exact->jobs, [&](uint64_t begin, uint64_t end, int) {
          uint64_t p = 0, o = 0;
          for (uint64_t i = begin; i < end; ++i)
            for (uint64_t j = i + 1; j < vertices.size(); ++j) {
              if (!grassmann_adjacent(vertices[size_t(i)], vertices[size_t(j)])) continue;
              ++o;
              if (accept_grassmann(f, vertices[size_t(i)], vertices[size_t(j)])) ++p;
            }
          return std::pair<uint64_t, uint64_t>{p, o};
        });
    rep.passes = passes;
    rep.outcomes = outcomes;
    return rep;
  }
  const auto& mc = std::get<MonteCarloMode>(mode);
  rep.exact = false;
  rep.trials = mc.trials;
  rep.seed = mc.seed;
  auto [passes, outcomes] = detail::chunked_counts(
      mc.trials, mc.jobs, [&](uint64_t begin, uint64_t end, int worker) {
        Prng prng(mc.seed, uint64_t(worker));
        uint64_t p = 0;
        for (uint64_t i = begin; i < end; ++i) {
          Subspace v = sample_subspace(prng, f.n(), f.l());
          Subspace w = grassmann_neighbor(prng, v);
          if (accept_grassmann(f, v, w)) ++p;
        }
        return std::pair<uint64_t, uint64_t>{p, end - begin};
      });
  rep.passes = passes;
  rep.outcomes = outcomes;
  return rep;
}

inline TestReport pass_probability(const ShortcodeStrategy& f, TestKind kind, const Mode& mode) {
  if (kind != TestKind::Deg2Shortcode && kind != TestKind::UniqueDeg2Shortcode)
    throw std::invalid_argument("shortcode strategies run the degree-2 tests");
  bool unique = kind == TestKind::UniqueDeg2Shortcode;
  TestReport rep;
  rep.kind = kind;
  rep.l = f.l();
  rep.n = f.n();
  int l = f.l(), n = f.n();
  if (const auto* exact = std::get_if<ExactMode>(&mode)) {
    rep.exact = true;
    BigInt total_outcomes = BigInt(1) << (l * n + l + n);
    detail::checked_outcomes(total_outcomes, exact->cap);
    uint64_t vertices = f.graph().vertex_count_u64();
    auto [passes, outcomes] = detail::chunked_counts(
        vertices, exact->jobs, [&](uint64_t begin, uint64_t end, int) {
          uint64_t p = 0, o = 0;
          for (uint64_t idx = begin; idx < end; ++idx) {
            GF2Matrix m = f.graph().vertex_at(idx);
            GF2Vector fm = f.eval(m);
            for (uint64_t ai = 0; ai < (uint64_t{1} << l); ++ai) {
              GF2Vector a = GF2Vector::from_u64(l, ai);
              for (uint64_t bi = 0; bi < (uint64_t{1} << n); ++bi) {
                GF2Vector b = GF2Vector::from_u64(n, bi);
                GF2Matrix m2 = m;
                if (ai && bi) m2 ^= GF2Matrix::outer(a, b);
                GF2Vector d = f.eval(m2) ^ fm;
                ++o;
                if (d.is_zero() || (!unique && d == a)) ++p;
              }
            }
          }
          return std::pair<uint64_t, uint64_t>{p, o};
        });
    rep.passes = passes;
    rep.outcomes = outcomes;
    return rep;
  }
  const auto& mc = std::get<MonteCarloMode>(mode);
  rep.exact = false;
  rep.trials = mc.trials;
  rep.seed = mc.seed;
  auto [passes, outcomes] = detail::chunked_counts(
      mc.trials, mc.jobs, [&](uint64_t begin, uint64_t end, int worker) {
        Prng prng(mc.seed, uint64_t(worker));
        uint64_t p = 0;
        for (uint64_t i = begin; i < end; ++i) {
          GF2Matrix m = sample_matrix(prng, l, n);
          ShortcodeStep step = shortcode_step(prng, m);
          GF2Vector d = f.eval(step.m2) ^ f.eval(m);
          if (d.is_zero() || (!unique && d == step.a)) ++p;
        }
        return std::pair<uint64_t, uint64_t>{p, end - begin};
      });
  rep.passes = passes;
  rep.outcomes = outcomes;
  return rep;
}

inline TestReport pass_probability(const TensorStrategy& f, const Mode& mode) {
  TestReport rep;
  rep.kind = TestKind::UniqueDeg3Shortcode;
  const TensorGraph& g = f.graph();
  rep.l = g.l();
  rep.n = g.n();
  rep.m = g.m();
  int l = g.l(), m = g.m(), n = g.n();
  if (const auto* exact = std::get_if<ExactMode>(&mode)) {
    rep.exact = true;
    BigInt total_outcomes = (BigInt(1) << (l * m * n)) * ((BigInt(1) << l) - 1) * (BigInt(1) << (m + n));
    detail::checked_outcomes(total_outcomes, exact->cap);
    uint64_t vertices = g.vertex_count_u64();
    auto [passes, outcomes] = detail::chunked_counts(
        vertices, exact->jobs, [&](uint64_t begin, uint64_t end, int) {
          uint64_t p = 0, o = 0;
          for (uint64_t idx = begin; idx < end; ++idx) {
            GF2Tensor t = g.vertex_at(idx);
            GF2Vector ft = f.eval(t);
            for (uint64_t ai = 1; ai < (uint64_t{1} << l); ++ai) {
              GF2Vector a = GF2Vector::from_u64(l, ai);
              for (uint64_t bi = 0; bi < (uint64_t{1} << m); ++bi) {
                GF2Vector b = GF2Vector::from_u64(m, bi);
                for (uint64_t ci = 0; ci < (uint64_t{1} << n); ++ci) {
                  GF2Vector c = GF2Vector::from_u64(n, ci);
                  GF2Tensor t2 = t;
                  if (bi && ci) t2 ^= GF2Tensor::outer(a, b, c);
                  ++o;
                  if (f.eval(t2) == ft) ++p;
                }
              }
            }
          }
          return std::pair<uint64_t, uint64_t>{p, o};
        });
    rep.passes = passes;
    rep.outcomes = outcomes;
    return rep;
  }
  const auto& mc = std::get<MonteCarloMode>(mode);
  rep.exact = false;
  rep.trials = mc.trials;
  rep.seed = mc.seed;
  auto [passes, outcomes] = detail::chunked_counts(
      mc.trials, mc.jobs, [&](uint64_t begin, uint64_t end, int worker) {
        Prng prng(mc.seed, uint64_t(worker));
        uint64_t p = 0;
        for (uint64_t i = begin; i < end; ++i) {
          GF2Tensor t = sample_tensor(prng, l, m, n);
          TensorStep step = tensor_step(prng, t);
          if (f.eval(step.t2) == f.eval(t)) ++p;
        }
        return std::pair<uint64_t, uint64_t>{p, end - begin};
      });
  rep.passes = passes;
  rep.outcomes = outcomes;
  return rep;
}

}  // namespace shortcode
