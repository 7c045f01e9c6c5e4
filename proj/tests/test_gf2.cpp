#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "shortcode/graphs.hpp"

using namespace shortcode;

TEST_CASE("rank worked values") {
  CHECK(rank(GF2Matrix(2, 3)) == 0);
  CHECK(rank(GF2Matrix::parse("110;110")) == 1);
  // Oracle: of the four row combinations of {110, 011} only 00 gives zero.
  CHECK(rank(GF2Matrix::parse("110;011")) == 2);
}

TEST_CASE("rref worked values") {
  auto [ident, ipiv] = rref(GF2Matrix::identity(2));
  CHECK(ident == GF2Matrix::identity(2));
  CHECK(ipiv == std::vector<int>{0, 1});

  auto [red, pivots] = rref(GF2Matrix::parse("110;011"));
  CHECK(red == GF2Matrix::parse("101;011"));
  CHECK(pivots == std::vector<int>{0, 1});

  auto [dup, dpiv] = rref(GF2Matrix::parse("111;111"));
  CHECK(dup.row(0) == GF2Vector::parse("111"));
  CHECK(dup.row(1).is_zero());
  CHECK(dpiv == std::vector<int>{0});
}

TEST_CASE("rref preserves the row space") {
  for (uint64_t idx = 0; idx < (1u << 6); ++idx) {
    GF2Matrix m = GF2Matrix::from_index(2, 3, idx);
    auto [red, pivots] = rref(m);
    std::set<uint64_t> before, after;
    for (uint64_t c = 0; c < 4; ++c) {
      before.insert(m.mul_row(GF2Vector::from_u64(2, c)).as_u64());
      after.insert(red.mul_row(GF2Vector::from_u64(2, c)).as_u64());
    }
    CHECK(before == after);
  }
}

TEST_CASE("solve worked values") {
  auto x = solve(GF2Matrix::identity(3), GF2Vector::parse("101"));
  REQUIRE(x);
  CHECK(*x == GF2Vector::parse("101"));

  auto y = solve(GF2Matrix::parse("110;011"), GF2Vector::parse("101"));
  REQUIRE(y);
  CHECK(*y == GF2Vector::parse("11"));

  CHECK_FALSE(solve(GF2Matrix::parse("110"), GF2Vector::parse("001")));
}

TEST_CASE("solve returns actual solutions on random instances") {
  Prng prng(11);
  for (int trial = 0; trial < 200; ++trial) {
    int rows = 1 + int(prng.below(4)), cols = 1 + int(prng.below(5));
    GF2Matrix m = sample_matrix(prng, rows, cols);
    GF2Vector rhs = sample_vector(prng, cols);
    auto x = solve(m, rhs);
    if (x) {
      CHECK(m.mul_row(*x) == rhs);
    } else {
      // Oracle: no combination of rows hits rhs.
      bool found = false;
      for (uint64_t c = 0; c < (uint64_t{1} << rows); ++c)
        if (m.mul_row(GF2Vector::from_u64(rows, c)) == rhs) found = true;
      CHECK_FALSE(found);
    }
  }
}

TEST_CASE("solve_right transposes") {
  GF2Matrix m = GF2Matrix::parse("110;011");
  GF2Vector rhs = GF2Vector::parse("10");
  auto y = solve_right(m, rhs);
  REQUIRE(y);
  CHECK(m.mul_col(*y) == rhs);
}

TEST_CASE("kernel spans the right null space") {
  Prng prng(12);
  for (int trial = 0; trial < 100; ++trial) {
    int rows = 1 + int(prng.below(3)), cols = 1 + int(prng.below(5));
    GF2Matrix m = sample_matrix(prng, rows, cols);
    auto basis = kernel(m);
    CHECK(int(basis.size()) == cols - rank(m));
    for (const auto& x : basis) CHECK(m.mul_col(x).is_zero());
  }
}

TEST_CASE("rank invariants hold exhaustively for small shapes") {
  for (int rows = 1; rows <= 3; ++rows)
    for (int cols = 1; cols <= 3; ++cols)
      for (uint64_t idx = 0; idx < (uint64_t{1} << (rows * cols)); ++idx) {
        GF2Matrix m = GF2Matrix::from_index(rows, cols, idx);
        CHECK(rank(m) == rank(rref(m).first));
        CHECK(rank(m) == rank(m.transposed()));
      }
}

TEST_CASE("subspace canonical form is generator independent") {
  // All 2x4 generator matrices: equal row spaces must give bitwise-equal
  // Subspace values, different row spaces different values.
  std::map<std::set<uint64_t>, Subspace> seen;
  for (uint64_t idx = 0; idx < (uint64_t{1} << 8); ++idx) {
    GF2Matrix m = GF2Matrix::from_index(2, 4, idx);
    std::set<uint64_t> space;
    for (uint64_t c = 0; c < 4; ++c) space.insert(m.mul_row(GF2Vector::from_u64(2, c)).as_u64());
    Subspace s = Subspace::span(m);
    auto it = seen.find(space);
    if (it == seen.end())
      seen.emplace(space, s);
    else
      CHECK(it->second == s);
  }
}

TEST_CASE("intersection worked values") {
  Subspace v = Subspace::span(GF2Matrix::parse("110;011"));
  CHECK(intersect(v, v) == v);

  Subspace w = Subspace::span(GF2Matrix::parse("101;010"));
  CHECK(intersect(v, w) == Subspace::span(GF2Matrix::parse("101")));

  Subspace a = Subspace::span(GF2Matrix::parse("100"));
  Subspace b = Subspace::span(GF2Matrix::parse("010"));
  CHECK(intersect(a, b) == Subspace::zero(3));
}

TEST_CASE("dimension formula dim V + dim W = dim(V^W) + dim(V+W)") {
  auto spaces3 = enumerate_subspaces(3, 1);
  auto more = enumerate_subspaces(3, 2);
  spaces3.insert(spaces3.end(), more.begin(), more.end());
  spaces3.push_back(Subspace::zero(3));
  spaces3.push_back(Subspace::full(3));
  for (const auto& v : spaces3)
    for (const auto& w : spaces3)
      CHECK(v.dim() + w.dim() == intersect(v, w).dim() + subspace_sum(v, w).dim());
}

TEST_CASE("projection worked values") {
  Subspace v = Subspace::span(GF2Matrix::parse("110;011"));
  std::vector<int> all{0, 1, 2};
  CHECK(project(v, all) == v);
  CHECK(project_prefix(v, 2) == Subspace::full(2));
  CHECK(project_prefix(Subspace::span(GF2Matrix::parse("011")), 1) == Subspace::zero(1));
}

TEST_CASE("gaussian binomial worked values and exhaustive counts") {
  CHECK(gaussian_binomial(2, 1) == 3);
  CHECK(gaussian_binomial(4, 2) == 35);
  CHECK(gaussian_binomial(7, 0) == 1);
  for (int n = 0; n <= 5; ++n)
    for (int l = 0; l <= n; ++l)
      CHECK(BigInt(enumerate_subspaces(n, l).size()) == gaussian_binomial(n, l));
}

TEST_CASE("subspace membership and coordinates") {
  Subspace v = Subspace::span(GF2Matrix::parse("110;011"));
  for (const auto& e : v.elements()) {
    CHECK(v.contains(e));
    auto c = v.coordinates(e);
    REQUIRE(c);
    CHECK(v.basis().mul_row(*c) == e);
  }
  CHECK_FALSE(v.contains(GF2Vector::parse("100")));
}

TEST_CASE("orthogonal complement") {
  Subspace v = Subspace::span(GF2Matrix::parse("110;011"));
  Subspace perp = orthogonal_complement(v);
  CHECK(perp.dim() == 1);
  for (int i = 0; i < v.dim(); ++i)
    for (int j = 0; j < perp.dim(); ++j) CHECK_FALSE(v.basis().row(i).dot(perp.basis().row(j)));
  CHECK(orthogonal_complement(Subspace::zero(4)) == Subspace::full(4));
  CHECK(orthogonal_complement(Subspace::full(4)) == Subspace::zero(4));
}

TEST_CASE("basis inversion and coordinate round trip") {
  Prng prng(5);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 1 + int(prng.below(6));
    Basis b = sample_basis(prng, n);
    CHECK(mul(b.matrix(), b.inverse()) == GF2Matrix::identity(n));
    GF2Vector v = sample_vector(prng, n);
    CHECK(b.from_coords(b.to_coords(v)) == v);
  }
  CHECK_FALSE(Basis::from_matrix(GF2Matrix::parse("11;11")));
}

TEST_CASE("samplers replay identical streams from identical seeds") {
  Prng a(42, 3), b(42, 3);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  Prng c(42, 4);
  bool differs = false;
  Prng a2(42, 3);
  for (int i = 0; i < 100; ++i)
    if (a2.next_u64() != c.next_u64()) differs = true;
  CHECK(differs);

  Prng s1(7), s2(7);
  for (int i = 0; i < 20; ++i) {
    CHECK(sample_matrix(s1, 2, 5) == sample_matrix(s2, 2, 5));
    CHECK(sample_subspace(s1, 5, 2) == sample_subspace(s2, 5, 2));
  }
}

TEST_CASE("sample_subspace degenerate dimensions") {
  Prng prng(1);
  CHECK(sample_subspace(prng, 3, 0) == Subspace::zero(3));
  CHECK(sample_subspace(prng, 3, 3) == Subspace::full(3));
}

TEST_CASE("sample_subspace is uniform at (2,1)") {
  Prng prng(2024);
  std::map<uint64_t, int> freq;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) freq[sample_subspace(prng, 2, 1).basis().row(0).as_u64()]++;
  REQUIRE(freq.size() == 3);
  double expect = draws / 3.0;
  double sigma = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (auto& [bits, count] : freq) CHECK(std::abs(count - expect) <= 3 * sigma);
}

TEST_CASE("sample_basis covers GL(2,2) uniformly") {
  Prng prng(99);
  CHECK(sample_basis(prng, 1).matrix() == GF2Matrix::identity(1));
  std::map<uint64_t, int> freq;
  const int draws = 30000;
  for (int i = 0; i < draws; ++i) freq[sample_basis(prng, 2).matrix().to_index()]++;
  REQUIRE(freq.size() == 6);
  double expect = draws / 6.0;
  double sigma = std::sqrt(draws * (1.0 / 6) * (5.0 / 6));
  for (auto& [bits, count] : freq) CHECK(std::abs(count - expect) <= 3 * sigma);
}

TEST_CASE("sample_vector is uniform at n=3") {
  Prng prng(31337);
  std::map<uint64_t, int> freq;
  const int draws = 40000;
  for (int i = 0; i < draws; ++i) freq[sample_vector(prng, 3).as_u64()]++;
  REQUIRE(freq.size() == 8);
  double expect = draws / 8.0;
  double sigma = std::sqrt(draws * (1.0 / 8) * (7.0 / 8));
  for (auto& [bits, count] : freq) CHECK(std::abs(count - expect) <= 3 * sigma);
}

TEST_CASE("vector and matrix literals") {
  GF2Vector v = GF2Vector::parse("110");
  CHECK(v.get(0));
  CHECK(v.get(1));
  CHECK_FALSE(v.get(2));
  CHECK(v.str() == "110");
  CHECK(GF2Vector::parse(v.hex(), 3) == v);

  GF2Matrix m = GF2Matrix::parse("110;011");
  CHECK(m.rows() == 2);
  CHECK(m.str() == "110;011");

  CHECK_THROWS_AS(GF2Vector::parse("10x"), format_error);
  CHECK_THROWS_AS(GF2Vector::parse("0xzz", 8), format_error);
  CHECK_THROWS_AS(GF2Vector::parse("0xff", 3), format_error);
  CHECK_THROWS_AS(GF2Matrix::parse("110;01"), format_error);
}

TEST_CASE("packing is row major LSB first") {
  GF2Matrix m(2, 3);
  m.set(0, 0, true);   // position 0
  m.set(1, 2, true);   // position 1*3+2 = 5
  CHECK(m.to_index() == (1u | (1u << 5)));
  CHECK(GF2Matrix::from_index(2, 3, m.to_index()) == m);
}

TEST_CASE("multi-word vectors behave like single-word ones") {
  Prng prng(8);
  GF2Vector a = sample_vector(prng, 100), b = sample_vector(prng, 100);
  GF2Vector c = a ^ b;
  int expected_weight = 0;
  bool dot = false;
  for (int j = 0; j < 100; ++j) {
    CHECK(c.get(j) == (a.get(j) ^ b.get(j)));
    expected_weight += c.get(j);
    dot ^= a.get(j) && b.get(j);
  }
  CHECK(c.weight() == expected_weight);
  CHECK(a.dot(b) == dot);
  CHECK(GF2Vector::parse(a.str()) == a);
  CHECK(GF2Vector::parse(a.hex(), 100) == a);

  GF2Matrix m = sample_matrix(prng, 3, 70);
  CHECK(rank(m) <= 3);
  Subspace s = Subspace::span(m);
  CHECK(s.ambient() == 70);
}

TEST_CASE("tensor slices and outer products") {
  GF2Vector a = GF2Vector::parse("10"), b = GF2Vector::parse("11"), c = GF2Vector::parse("01");
  GF2Tensor t = GF2Tensor::outer(a, b, c);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        CHECK(t.get(i, j, k) == (a.get(i) && b.get(j) && c.get(k)));
  CHECK(t.slice(0) == GF2Matrix::outer(b, c));
  CHECK(t.slice(1).is_zero());
  CHECK(GF2Tensor::from_index(2, 2, 2, t.to_index()) == t);
}
