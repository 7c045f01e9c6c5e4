// Acceptance gate: thirteen criteria covering completeness of the three
// consistency tests, the uniquifying shift, the embedding (bijection, edge
// and nice-set preservation, domain fraction), expansion transfer, exact
// expansion values, decoding, the Cayley spectrum, Monte Carlo calibration
// against exact values, and byte-level reproducibility of the CLI suite.
// One line per criterion; exit 0 only if all pass.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "shortcode/suite.hpp"

using namespace shortcode;

namespace {

int failures = 0;

void report(int idx, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%2d] %s  %s  (%s)\n", idx, pass ? "PASS" : "FAIL", what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// --- criterion 1: Grassmann completeness ----------------------------------

std::vector<GrassmannStrategy> grassmann_instances() {
  std::vector<GrassmannStrategy> out;
  Prng prng(101);
  for (int n : {4, 5}) {
    GrassmannGraph g(2, n);
    for (int k = 0; k < 10; ++k)
      out.push_back(GrassmannStrategy::global(g, {sample_vector(prng, n), false}));
  }
  return out;
}

void criterion1() {
  bool pass = true;
  std::string detail = "exact 1 on all 20 instances";
  for (const auto& f : grassmann_instances()) {
    TestReport r = pass_probability(f, ExactMode{});
    if (!r.equals(1, 1)) {
      pass = false;
      detail = std::to_string(r.passes) + "/" + std::to_string(r.outcomes) + " at n=" +
               std::to_string(f.n());
    }
  }
  report(1, pass, "Grassmann completeness on G(2,4) and G(2,5), 10 seeded functionals each",
         detail);
}

// --- criterion 2: shortcode completeness -----------------------------------

std::vector<ShortcodeStrategy> row_affine_instances() {
  std::vector<ShortcodeStrategy> out;
  ShortcodeGraph g(2, 3);
  Prng prng(102);
  for (int k = 0; k < 5; ++k)
    out.push_back(ShortcodeStrategy::row_functional(g, {sample_vector(prng, 3), k % 2 == 1}));
  return out;
}

void criterion2() {
  bool pass = true;
  std::string detail = "exact 1 on all 5 instances";
  for (const auto& f : row_affine_instances()) {
    TestReport r = pass_probability(f, TestKind::Deg2Shortcode, ExactMode{});
    if (!r.equals(1, 1)) {
      pass = false;
      detail = std::to_string(r.passes) + "/" + std::to_string(r.outcomes);
    }
  }
  report(2, pass, "2-to-2 completeness of row-affine strategies on S_{2,3}", detail);
}

// --- criterion 3: degree-3 completeness ------------------------------------

std::pair<TensorStrategy, TensorStrategy> tensor_instances() {
  TensorGraph g(2, 2, 2);
  Prng prng(103);
  GF2Vector y = sample_nonzero_vector(prng, 2);
  GF2Vector z = sample_nonzero_vector(prng, 2);
  return {TensorStrategy::bilinear(g, y, z), TensorStrategy::bilinear(g, GF2Vector(2), z)};
}

void criterion3() {
  auto [nondeg, deg] = tensor_instances();
  TestReport r1 = pass_probability(nondeg, ExactMode{});
  TestReport r2 = pass_probability(deg, ExactMode{});
  bool pass = r1.equals(3, 4) && r2.equals(1, 1);
  report(3, pass, "unique degree-3 completeness on Ten_{2,2,2}: 3/4 nondegenerate, 1 degenerate",
         std::to_string(r1.passes) + "/" + std::to_string(r1.outcomes) + " and " +
             std::to_string(r2.passes) + "/" + std::to_string(r2.outcomes));
}

// --- criterion 4: uniquifying bound ----------------------------------------

void criterion4() {
  SuiteConfig cfg;  // l=2, n=4 -> corpus on S_{2,3}
  ShortcodeGraph g(2, 3);
  auto corpus = suite_detail::strategy_corpus(cfg, g);
  bool pass = corpus.size() >= 20;
  std::string detail = "bound holds for all " + std::to_string(corpus.size()) + " strategies";
  for (const auto& f : corpus) {
    TestReport deg2 = pass_probability(f, TestKind::Deg2Shortcode, ExactMode{});
    __uint128_t unique_sum = 0;
    for (uint64_t hi = 0; hi < 8; ++hi) {
      auto shifted = f.shifted(GF2Vector::from_u64(3, hi));
      unique_sum += pass_probability(shifted, TestKind::UniqueDeg2Shortcode, ExactMode{}).passes;
    }
    if (2 * unique_sum < __uint128_t(8) * deg2.passes) {
      pass = false;
      detail = "bound violated";
    }
  }
  // Worked value: f(x) = x1 + x2 + 1 on S_{1,2} averages to 13/16.
  ShortcodeGraph g12(1, 2);
  auto f = ShortcodeStrategy::row_functional(g12, {GF2Vector::parse("11"), true});
  uint64_t passes = 0, outcomes = 0;
  for (uint64_t hi = 0; hi < 4; ++hi) {
    TestReport r = pass_probability(f.shifted(GF2Vector::from_u64(2, hi)),
                                    TestKind::UniqueDeg2Shortcode, ExactMode{});
    passes += r.passes;
    outcomes += r.outcomes;
  }
  if (__uint128_t(passes) * 16 != __uint128_t(13) * outcomes) {
    pass = false;
    detail += "; worked value " + std::to_string(passes) + "/" + std::to_string(outcomes);
  } else {
    detail += "; worked value 13/16 exact";
  }
  report(4, pass, "uniquifying: avg over shifts of unique pass >= half the 2-to-2 pass (S_{2,3})",
         detail);
}

// --- criteria 5-11 reuse the suite implementations at pinned parameters ----

void from_suite(int idx, const SuiteCheck& c, const std::string& what) {
  report(idx, c.pass, what, c.observed);
}

// --- criterion 12: estimator calibration ------------------------------------

struct Instance {
  std::string name;
  double exact;
  std::function<double(uint64_t seed)> estimate;  // 1e5-trial estimate
};

void criterion12() {
  constexpr uint64_t kTrials = 100000;
  std::vector<Instance> instances;

  for (const auto& f : grassmann_instances()) {
    static int k = 0;
    instances.push_back({"grassmann n=" + std::to_string(f.n()) + " #" + std::to_string(k++), 1.0,
                         [f](uint64_t seed) {
                           return pass_probability(f, MonteCarloMode{kTrials, seed, 1}).probability();
                         }});
  }
  for (const auto& f : row_affine_instances()) {
    static int k = 0;
    instances.push_back({"rowaffine #" + std::to_string(k++), 1.0, [f](uint64_t seed) {
                           return pass_probability(f, TestKind::Deg2Shortcode,
                                                   MonteCarloMode{kTrials, seed, 1})
                               .probability();
                         }});
  }
  {
    auto [nondeg, deg] = tensor_instances();
    instances.push_back({"bilinear", 0.75, [nondeg](uint64_t seed) {
                           return pass_probability(nondeg, MonteCarloMode{kTrials, seed, 1})
                               .probability();
                         }});
    instances.push_back({"bilinear degenerate", 1.0, [deg](uint64_t seed) {
                           return pass_probability(deg, MonteCarloMode{kTrials, seed, 1})
                               .probability();
                         }});
  }
  {
    NiceSetShortcode s{1, 2, {{GF2Vector::parse("10"), GF2Vector::parse("0")}}, {}};
    ShortcodeGraph g(1, 2);
    instances.push_back({"stay 3/4", 0.75, [s, g](uint64_t seed) {
                           return shortcode_stay(g, s, MonteCarloMode{kTrials, seed, 1})
                               .stay.value();
                         }});
    GrassmannGraph gg(1, 2);
    Embedding emb = Embedding::standard(1, 2);
    auto domain = std::make_shared<std::vector<Subspace>>();
    for_each_vertex(gg, [&](const Subspace& v) {
      if (emb.in_domain(v)) domain->push_back(v);
    });
    instances.push_back({"phi(domain) 1/2", 0.5, [gg, domain, emb](uint64_t seed) {
                           return grassmann_expansion_mc(
                                      gg, *domain,
                                      [emb](const Subspace& v) { return emb.in_domain(v); },
                                      "domain", MonteCarloMode{kTrials, seed, 1})
                               .expansion.value();
                         }});
    auto everything = std::make_shared<std::vector<Subspace>>(all_vertices(gg));
    instances.push_back({"phi(everything) 0", 0.0, [gg, everything](uint64_t seed) {
                           return grassmann_expansion_mc(
                                      gg, *everything, [](const Subspace&) { return true; },
                                      "everything", MonteCarloMode{kTrials, seed, 1})
                               .expansion.value();
                         }});
  }

  bool pass = true;
  std::string worst;
  for (const auto& inst : instances) {
    double sigma = std::sqrt(inst.exact * (1 - inst.exact) / double(kTrials));
    int hits = 0;
    for (uint64_t seed = 1; seed <= 40; ++seed)
      if (std::abs(inst.estimate(seed) - inst.exact) <= 3 * sigma) ++hits;
    if (hits < 38) {  // 95% of 40
      pass = false;
      worst = inst.name + " hit only " + std::to_string(hits) + "/40";
    }
  }
  report(12, pass,
         "calibration: 1e5-trial estimates within 3 sigma of exact for >= 95% of 40 seeds on " +
             std::to_string(instances.size()) + " instances",
         pass ? "all instances >= 38/40 seeds in band" : worst);
}

// --- criterion 13: byte-identical suite runs --------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion13() {
#ifdef SHORTCODE_CLI_PATH
  std::string cli = SHORTCODE_CLI_PATH;
  std::string cmd_base = cli + " suite --l 2 --n 4 --m 2 --seed 7 --out ";
  int rc1 = std::system((cmd_base + "acceptance_suite_run1.json > /dev/null 2>&1").c_str());
  int rc2 = std::system((cmd_base + "acceptance_suite_run2.json > /dev/null 2>&1").c_str());
  std::string a = read_file("acceptance_suite_run1.json");
  std::string b = read_file("acceptance_suite_run2.json");
  bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  report(13, pass, "reproducibility: two identical suite invocations emit identical bytes",
         pass ? std::to_string(a.size()) + " bytes identical, both exit 0"
              : "exit codes " + std::to_string(rc1) + "/" + std::to_string(rc2) +
                    ", byte-equal: " + (a == b ? "yes" : "no"));
#else
  report(13, false, "reproducibility", "CLI path not configured");
#endif
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  SuiteConfig cfg;  // l=2, n=4, m=2, seed=7

  criterion1();
  criterion2();
  criterion3();
  criterion4();
  from_suite(5, suite_detail::homomorphism(cfg),
             "homomorphism: adjacency iff rank-1 difference, bijective, at (1,3),(2,4),(2,5)");
  {
    SuiteCheck frac = suite_detail::projection_fraction(cfg);
    SuiteCheck limit = suite_detail::projection_fraction_limit(cfg);
    SuiteCheck half = suite_detail::neighbor_half(cfg);
    report(6, frac.pass && limit.pass && half.pass,
           "projection: domain is 16/35 of G(2,4), tail fractions >= 0.288, neighbor fraction "
           "exactly 1/2",
           frac.observed + "; " + limit.observed + "; " + half.observed);
  }
  from_suite(7, suite_detail::nice_set_roundtrip(cfg),
             "nice-set correspondence with r <= 2 at (2,4), both directions");
  from_suite(8, suite_detail::expansion_transfer(cfg),
             "expansion transfer: preimage walk stay >= half the matrix-side walk stay");
  from_suite(9, suite_detail::expansion_worked_values(cfg),
             "expansion values: 3/4 stay, 1/2 domain expansion, 0 full-set expansion");
  {
    SuiteCheck corrupt = suite_detail::decode_corrupted_affine(cfg);
    SuiteCheck oracle = suite_detail::decode_planted_oracle(cfg);
    report(10, corrupt.pass && oracle.pass,
           "decoding: corrupted affine at density 7/8 with rule recovered; planted matches "
           "oracle",
           corrupt.observed + "; " + oracle.observed);
  }
  from_suite(11, suite_detail::spectrum(cfg),
             "spectrum: lambda = 2^-rank matches all 16 character sums on Mat_{2,2}");
  criterion12();
  criterion13();

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s: %d criterion(s) failed, %.1f s total\n", failures ? "FAIL" : "OK", failures,
              secs);
  return failures ? 1 : 0;
}
