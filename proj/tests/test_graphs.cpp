#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "shortcode/graphs.hpp"

using namespace shortcode;

TEST_CASE("grassmann adjacency worked values") {
  Subspace v = Subspace::span(GF2Matrix::parse("110;011"));
  CHECK_FALSE(grassmann_adjacent(v, v));
  CHECK(grassmann_adjacent(Subspace::span(GF2Matrix::parse("10")),
                           Subspace::span(GF2Matrix::parse("01"))));
  CHECK(grassmann_adjacent(v, Subspace::span(GF2Matrix::parse("101;010"))));
  CHECK_THROWS_AS(grassmann_adjacent(v, Subspace::span(GF2Matrix::parse("10"))),
                  std::invalid_argument);
}

TEST_CASE("shortcode adjacency worked values and outer-product oracle") {
  GF2Matrix zero(2, 3);
  CHECK_FALSE(shortcode_adjacent(zero, zero));
  CHECK(shortcode_adjacent(zero, GF2Matrix::parse("110;110")));
  CHECK_FALSE(shortcode_adjacent(zero, GF2Matrix::parse("110;011")));

  // Oracle: adjacency iff the difference is a nonzero outer product.
  for (int l = 1; l <= 3; ++l)
    for (int n = 1; n <= 3; ++n)
      for (uint64_t d = 0; d < (uint64_t{1} << (l * n)); ++d) {
        GF2Matrix diff = GF2Matrix::from_index(l, n, d);
        bool oracle = false;
        for (uint64_t ai = 1; ai < (uint64_t{1} << l); ++ai)
          for (uint64_t bi = 1; bi < (uint64_t{1} << n); ++bi)
            if (GF2Matrix::outer(GF2Vector::from_u64(l, ai), GF2Vector::from_u64(n, bi)) == diff)
              oracle = true;
        CHECK(shortcode_adjacent(GF2Matrix(l, n), diff) == oracle);
      }
}

TEST_CASE("tensor adjacency worked values and brute-force oracle") {
  GF2Tensor zero(2, 2, 2);
  CHECK_FALSE(tensor_adjacent(zero, zero));
  GF2Tensor e = GF2Tensor::outer(GF2Vector::unit(2, 0), GF2Vector::unit(2, 0),
                                 GF2Vector::unit(2, 0));
  CHECK(tensor_adjacent(zero, e));

  // Two independent nonzero slices cannot be a rank-1 tensor.
  GF2Tensor two_slices(2, 2, 2);
  two_slices.set(0, 0, 0, true);
  two_slices.set(1, 1, 1, true);
  CHECK_FALSE(tensor_adjacent(zero, two_slices));

  for (uint64_t d = 0; d < 256; ++d) {
    GF2Tensor diff = GF2Tensor::from_index(2, 2, 2, d);
    bool oracle = false;
    for (uint64_t ai = 1; ai < 4; ++ai)
      for (uint64_t bi = 1; bi < 4; ++bi)
        for (uint64_t ci = 1; ci < 4; ++ci)
          if (GF2Tensor::outer(GF2Vector::from_u64(2, ai), GF2Vector::from_u64(2, bi),
                               GF2Vector::from_u64(2, ci)) == diff)
            oracle = true;
    CHECK(tensor_adjacent(zero, diff) == oracle);
  }
}

TEST_CASE("adjacency is symmetric and irreflexive") {
  auto vertices = all_vertices(GrassmannGraph(2, 4));
  for (size_t i = 0; i < vertices.size(); ++i) {
    CHECK_FALSE(grassmann_adjacent(vertices[i], vertices[i]));
    for (size_t j = i + 1; j < vertices.size(); ++j)
      CHECK(grassmann_adjacent(vertices[i], vertices[j]) ==
            grassmann_adjacent(vertices[j], vertices[i]));
  }
  ShortcodeGraph sg(2, 2);
  auto mats = all_vertices(sg);
  for (const auto& m1 : mats) {
    CHECK_FALSE(shortcode_adjacent(m1, m1));
    for (const auto& m2 : mats)
      CHECK(shortcode_adjacent(m1, m2) == shortcode_adjacent(m2, m1));
  }
}

TEST_CASE("grassmann graph is regular") {
  auto vertices = all_vertices(GrassmannGraph(2, 4));
  std::set<uint64_t> degrees;
  for (const auto& v : vertices) {
    uint64_t d = 0;
    for (const auto& w : vertices)
      if (!(w == v) && grassmann_adjacent(v, w)) ++d;
    degrees.insert(d);
  }
  CHECK(degrees.size() == 1);
  CHECK(*degrees.begin() == 18);  // 2 (2^l - 1)(2^(n-l) - 1)
}

TEST_CASE("vertex and edge counts") {
  CHECK(GrassmannGraph(1, 2).vertex_count_u64() == 3);
  CHECK(GrassmannGraph(2, 4).vertex_count_u64() == 35);
  CHECK(ShortcodeGraph(1, 2).vertex_count_u64() == 4);

  uint64_t g_edges = 0;
  for_each_edge(GrassmannGraph(1, 2), [&](const Subspace&, const Subspace&) { ++g_edges; });
  CHECK(g_edges == 3);

  uint64_t s_edges = 0;
  std::set<std::pair<uint64_t, uint64_t>> seen;
  for_each_edge(ShortcodeGraph(1, 2), [&](const GF2Matrix& a, const GF2Matrix& b) {
    ++s_edges;
    uint64_t ia = a.to_index(), ib = b.to_index();
    CHECK(seen.insert({std::min(ia, ib), std::max(ia, ib)}).second);
    CHECK(shortcode_adjacent(a, b));
  });
  CHECK(s_edges == 6);  // S_{1,2} is K4
}

TEST_CASE("enumeration respects the cap") {
  CHECK_THROWS_AS(all_vertices(ShortcodeGraph(4, 4), 1000), resource_error);
  CHECK_THROWS_AS(enumerate_subspaces(10, 5, 100), resource_error);
}

TEST_CASE("grassmann indexer round trips") {
  GrassmannGraph g(2, 5);
  for (uint64_t idx = 0; idx < g.vertex_count_u64(); ++idx) {
    Subspace v = g.vertex_at(idx);
    CHECK(v.dim() == 2);
    CHECK(g.index_of(v) == idx);
  }
}

TEST_CASE("grassmann neighbor sampler honors the adjacency contract") {
  Prng prng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Subspace v = sample_subspace(prng, 4, 2);
    Subspace w = grassmann_neighbor(prng, v);
    CHECK(grassmann_adjacent(v, w));
  }
}

TEST_CASE("grassmann neighbor sampler is uniform on G(1,2)") {
  Subspace v = Subspace::span(GF2Matrix::parse("10"));
  Prng prng(23);
  std::map<uint64_t, int> freq;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i)
    freq[grassmann_neighbor(prng, v).basis().row(0).as_u64()]++;
  REQUIRE(freq.size() == 2);  // span{01} and span{11}
  double sigma = std::sqrt(draws * 0.25);
  for (auto& [bits, count] : freq) CHECK(std::abs(count - draws / 2.0) <= 3 * sigma);
}

TEST_CASE("grassmann neighbor sampler matches exhaustive neighbors on G(2,4)") {
  GrassmannGraph g(2, 4);
  auto vertices = all_vertices(g);
  Subspace v = vertices[7];
  std::map<uint64_t, int> freq;
  uint64_t neighbors = 0;
  for (const auto& w : vertices)
    if (!(w == v) && grassmann_adjacent(v, w)) {
      freq[g.index_of(w)] = 0;
      ++neighbors;
    }
  REQUIRE(neighbors == 18);
  Prng prng(29);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    auto it = freq.find(g.index_of(grassmann_neighbor(prng, v)));
    REQUIRE(it != freq.end());
    ++it->second;
  }
  // Chi-square against uniform over the 18 neighbors; 99.9% quantile at
  // 17 degrees of freedom is about 40.8.
  double expect = double(draws) / double(neighbors);
  double chi2 = 0;
  for (auto& [idx, count] : freq) chi2 += (count - expect) * (count - expect) / expect;
  CHECK(chi2 < 40.8);
}

TEST_CASE("shortcode step distribution") {
  ShortcodeGraph g(1, 2);
  Prng prng(37);
  const int draws = 40000;
  int lazy = 0;
  for (int i = 0; i < draws; ++i) {
    GF2Matrix m = sample_matrix(prng, 1, 2);
    ShortcodeStep step = shortcode_step(prng, m);
    if (step.m2 == m)
      ++lazy;
    else
      CHECK(shortcode_adjacent(m, step.m2));
    if (!step.a.is_zero() && !step.b.is_zero()) CHECK(step.m2 == (m ^ GF2Matrix::outer(step.a, step.b)));
  }
  // Pr[M2 = M] = Pr[a=0 or b=0] = 1/2 + 2^{-n}/2 = 5/8 at l=1, n=2.
  double p = 5.0 / 8;
  double sigma = std::sqrt(draws * p * (1 - p));
  CHECK(std::abs(lazy - draws * p) <= 3 * sigma);
}

TEST_CASE("shortcode step (a, b) pairs are uniform at l=n=2") {
  Prng prng(41);
  std::map<std::pair<uint64_t, uint64_t>, int> freq;
  const int draws = 64000;
  GF2Matrix m(2, 2);
  for (int i = 0; i < draws; ++i) {
    ShortcodeStep step = shortcode_step(prng, m);
    freq[{step.a.as_u64(), step.b.as_u64()}]++;
  }
  REQUIRE(freq.size() == 16);
  double expect = draws / 16.0;
  double chi2 = 0;
  for (auto& [key, count] : freq) chi2 += (count - expect) * (count - expect) / expect;
  CHECK(chi2 < 37.7);  // 99.9% quantile, 15 dof
}

TEST_CASE("tensor step draws a nonzero label direction") {
  Prng prng(43);
  for (int i = 0; i < 500; ++i) {
    GF2Tensor t = sample_tensor(prng, 2, 2, 2);
    TensorStep step = tensor_step(prng, t);
    CHECK_FALSE(step.a.is_zero());
    if (!step.b.is_zero() && !step.c.is_zero()) {
      CHECK(tensor_adjacent(t, step.t2));
    } else {
      CHECK(step.t2 == t);
    }
  }
}
