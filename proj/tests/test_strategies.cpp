#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "shortcode/strategies.hpp"

using namespace shortcode;

TEST_CASE("grassmann evaluation worked values") {
  GrassmannGraph g(2, 3);
  // f = third coordinate
  auto f = GrassmannStrategy::global(g, {GF2Vector::parse("001"), false});
  Subspace v = Subspace::span(GF2Matrix::parse("110;011"));
  CHECK(f.eval(v, GF2Vector::parse("011")) == 1);
  CHECK(f.eval(v, GF2Vector(3)) == 0);

  // Table value bits (1,0) on the RREF basis {101, 011}: at 110 = 101+011 the
  // evaluation is the parity of selected bits = 1.
  std::vector<uint64_t> labels(35, 0);
  GrassmannGraph g24(2, 4);
  Subspace v4 = Subspace::span(GF2Matrix::parse("1010;0110"));
  labels[size_t(g24.index_of(v4))] = 0b01;  // bit for first basis row only
  auto table = GrassmannStrategy::table(g24, labels);
  GF2Vector sum = v4.basis().row(0) ^ v4.basis().row(1);
  CHECK(table.eval(v4, v4.basis().row(0)) == 1);
  CHECK(table.eval(v4, v4.basis().row(1)) == 0);
  CHECK(table.eval(v4, sum) == 1);

  CHECK_THROWS_AS(f.eval(v, GF2Vector::parse("100")), std::domain_error);
}

TEST_CASE("grassmann evaluation is basis independent for global strategies") {
  GrassmannGraph g(2, 4);
  Prng prng(3);
  for (int trial = 0; trial < 5; ++trial) {
    LinearFunctional fn{sample_vector(prng, 4), false};
    auto f = GrassmannStrategy::global(g, fn);
    for_each_vertex(g, [&](const Subspace& v) {
      for (const GF2Vector& e : v.elements()) CHECK(f.eval(v, e) == fn.eval(e));
    });
  }
}

TEST_CASE("global grassmann strategies equal their table expansions") {
  GrassmannGraph g(2, 4);
  Prng prng(5);
  LinearFunctional fn{sample_vector(prng, 4), false};
  auto f = GrassmannStrategy::global(g, fn);
  auto table = f.to_table();
  for_each_vertex(g, [&](const Subspace& v) {
    CHECK(f.label(v) == table.label(v));
    for (const GF2Vector& e : v.elements()) CHECK(f.eval(v, e) == table.eval(v, e));
  });
}

TEST_CASE("shortcode evaluation worked values") {
  ShortcodeGraph g(2, 2);
  auto constant = ShortcodeStrategy::affine(g, GF2Vector(2), GF2Vector::parse("10"));
  for_each_vertex(g, [&](const GF2Matrix& m) { CHECK(constant.eval(m) == GF2Vector::parse("10")); });

  auto affine = ShortcodeStrategy::affine(g, GF2Vector::parse("10"), GF2Vector(2));
  CHECK(affine.eval(GF2Matrix::parse("11;01")) == GF2Vector::parse("10"));

  auto rowfn = ShortcodeStrategy::row_functional(ShortcodeGraph(1, 2),
                                                 {GF2Vector::parse("11"), true});
  CHECK(rowfn.eval(GF2Matrix::parse("10")) == GF2Vector::parse("0"));

  CHECK_THROWS_AS(affine.eval(GF2Matrix::parse("110;011")), std::invalid_argument);
}

TEST_CASE("structured shortcode backings equal their table expansions") {
  Prng prng(7);
  for (auto [l, n] : {std::pair{2, 3}, {1, 3}, {3, 4}}) {
    ShortcodeGraph g(l, n);
    std::vector<ShortcodeStrategy> strategies;
    strategies.push_back(
        ShortcodeStrategy::affine(g, sample_vector(prng, n), sample_vector(prng, l)));
    strategies.push_back(ShortcodeStrategy::row_functional(g, {sample_vector(prng, n), true}));
    NiceSetShortcode part{l, n, {{GF2Vector::unit(n, 0), sample_vector(prng, l)}}, {}};
    strategies.push_back(make_planted(prng, g, {part}));
    for (const auto& f : strategies) {
      auto table = f.to_table();
      for_each_vertex(g, [&](const GF2Matrix& m) { CHECK(f.eval(m) == table.eval(m)); });
    }
  }
}

TEST_CASE("bilinear tensor strategies equal their table expansions") {
  TensorGraph g(2, 2, 3);
  Prng prng(9);
  auto f = TensorStrategy::bilinear(g, sample_vector(prng, 2), sample_vector(prng, 3));
  auto table = f.to_table();
  for_each_vertex(g, [&](const GF2Tensor& t) { CHECK(f.eval(t) == table.eval(t)); });
}

TEST_CASE("planted strategy degenerate cases") {
  ShortcodeGraph g(1, 3);
  Prng prng(11);
  // A single part covering everything behaves like its structured rule.
  ShortcodeStrategy everything = make_planted(prng, g, {NiceSetShortcode::everything(1, 3)});
  {
    // Per-row functional plus constant is row-affine, so consistent steps
    // inside the part always agree up to the label direction.
    for_each_vertex(g, [&](const GF2Matrix& m) {
      for (uint64_t bi = 0; bi < 8; ++bi) {
        GF2Vector a = GF2Vector::parse("1");
        GF2Vector b = GF2Vector::from_u64(3, bi);
        GF2Matrix m2 = m;
        if (bi) m2 ^= GF2Matrix::outer(a, b);
        GF2Vector d = everything.eval(m2) ^ everything.eval(m);
        CHECK((d.is_zero() || d == a));
      }
    });
  }

  // Zero parts: a fully random but reproducible labeling.
  Prng p1(13), p2(13);
  ShortcodeStrategy r1 = make_planted(p1, g, {});
  ShortcodeStrategy r2 = make_planted(p2, g, {});
  for_each_vertex(g, [&](const GF2Matrix& m) { CHECK(r1.eval(m) == r2.eval(m)); });
}

TEST_CASE("planted parts use first match and stay consistent inside a part") {
  ShortcodeGraph g(1, 2);
  // Two disjoint 1-nice parts of S_{1,2}.
  NiceSetShortcode part_a{1, 2, {{GF2Vector::parse("10"), GF2Vector::parse("0")}}, {}};
  NiceSetShortcode part_b{1, 2, {{GF2Vector::parse("10"), GF2Vector::parse("1")}}, {}};
  Prng prng(17);
  ShortcodeStrategy f = make_planted(prng, g, {part_a, part_b});
  for (const NiceSetShortcode* part : {&part_a, &part_b}) {
    auto members = part->members();
    for (const GF2Matrix& m1 : members)
      for (const GF2Matrix& m2 : members) {
        if (m1 == m2) continue;
        GF2Matrix d = m1 ^ m2;
        GF2Vector diff = f.eval(m1) ^ f.eval(m2);
        // Labels inside a part come from one affine rule, so the two-query
        // agreement always holds along edges inside the part.
        CHECK((diff.is_zero() || diff == GF2Vector::parse("1")));
        (void)d;
      }
  }
}

TEST_CASE("uniquify closed forms") {
  ShortcodeGraph g(2, 3);
  Prng prng(19);
  GF2Vector z = sample_vector(prng, 3), u = sample_vector(prng, 2);
  auto f = ShortcodeStrategy::affine(g, z, u);

  SECTION("zero shift is the identity") {
    auto same = f.shifted(GF2Vector(3));
    for_each_vertex(g, [&](const GF2Matrix& m) { CHECK(same.eval(m) == f.eval(m)); });
  }

  SECTION("affine strategies shift in the rule") {
    GF2Vector h = sample_vector(prng, 3);
    auto shifted = f.shifted(h);
    CHECK(shifted.affine_rule().z == (z ^ h));
    CHECK(shifted.affine_rule().u == u);
  }

  SECTION("shifting commutes with table expansion for every backing") {
    std::vector<ShortcodeStrategy> corpus;
    corpus.push_back(f);
    corpus.push_back(ShortcodeStrategy::row_functional(g, {sample_vector(prng, 3), false}));
    NiceSetShortcode part{2, 3, {{GF2Vector::unit(3, 1), sample_vector(prng, 2)}}, {}};
    corpus.push_back(make_planted(prng, g, {part}));
    corpus.push_back(corpus[0].to_table());
    for (const auto& strat : corpus) {
      GF2Vector h = sample_vector(prng, 3);
      auto a = strat.shifted(h).to_table();
      auto b = strat.to_table().shifted(h);
      for_each_vertex(g, [&](const GF2Matrix& m) {
        CHECK(a.eval(m) == b.eval(m));
        CHECK(a.eval(m) == (strat.eval(m) ^ m.mul_col(h)));
      });
    }
  }
}

TEST_CASE("uniquify draws h uniformly and applies the shift") {
  ShortcodeGraph g(1, 2);
  auto f = ShortcodeStrategy::row_functional(g, {GF2Vector::parse("11"), true});
  Prng prng(23);
  auto [h, shifted] = uniquify(prng, f);
  for_each_vertex(g, [&](const GF2Matrix& m) {
    CHECK(shifted.eval(m) == (f.eval(m) ^ m.mul_col(h)));
  });
}

TEST_CASE("strategy files round trip") {
  std::vector<std::string> texts;
  {
    std::ostringstream out;
    write_strategy(out, ShortcodeStrategy::affine(ShortcodeGraph(2, 3), GF2Vector::parse("101"),
                                                  GF2Vector::parse("10")));
    texts.push_back(out.str());
  }
  {
    std::ostringstream out;
    write_strategy(out, ShortcodeStrategy::row_functional(ShortcodeGraph(2, 3),
                                                          {GF2Vector::parse("110"), true}));
    texts.push_back(out.str());
  }
  {
    std::ostringstream out;
    Prng prng(29);
    std::vector<uint64_t> labels;
    for (uint64_t i = 0; i < 64; ++i) labels.push_back(prng.bits(2));
    write_strategy(out, ShortcodeStrategy::table(ShortcodeGraph(2, 3), std::move(labels)));
    texts.push_back(out.str());
  }
  {
    std::ostringstream out;
    write_strategy(out, GrassmannStrategy::global(GrassmannGraph(2, 4),
                                                  {GF2Vector::parse("1011"), false}));
    texts.push_back(out.str());
  }
  {
    std::ostringstream out;
    write_strategy(out, TensorStrategy::bilinear(TensorGraph(2, 2, 2), GF2Vector::parse("10"),
                                                 GF2Vector::parse("11")));
    texts.push_back(out.str());
  }
  for (const std::string& text : texts) {
    std::istringstream in(text);
    AnyStrategy any = read_strategy(in);
    std::ostringstream out;
    std::visit([&](const auto& s) { write_strategy(out, s); }, any);
    CHECK(out.str() == text);
  }
}

TEST_CASE("grassmann tables serialize by vertex index") {
  GrassmannGraph g(1, 3);
  Prng prng(31);
  std::vector<uint64_t> labels;
  for (uint64_t i = 0; i < g.vertex_count_u64(); ++i) labels.push_back(prng.bits(1));
  auto f = GrassmannStrategy::table(g, labels);
  std::ostringstream out;
  write_strategy(out, f);
  std::istringstream in(out.str());
  auto back = std::get<GrassmannStrategy>(read_strategy(in));
  for_each_vertex(g, [&](const Subspace& v) { CHECK(f.label(v) == back.label(v)); });
}

TEST_CASE("malformed strategy files raise format errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return read_strategy(in);
  };
  CHECK_THROWS_AS(parse(""), format_error);
  CHECK_THROWS_AS(parse("strategy v2 kind=shortcode backing=affine l=1 n=2\n"), format_error);
  CHECK_THROWS_AS(parse("strategy v1 kind=shortcode backing=affine l=1 n=2\nz=10\n"), format_error);
  CHECK_THROWS_AS(parse("strategy v1 kind=shortcode backing=affine l=1 n=2\nz=101\nu=0\n"),
                  format_error);
  // wrong table entry count
  CHECK_THROWS_AS(parse("strategy v1 kind=shortcode backing=table l=1 n=2\n0\n1\n0\n"),
                  format_error);
  // label wider than l bits
  CHECK_THROWS_AS(parse("strategy v1 kind=shortcode backing=table l=1 n=1\n0\n3\n"), format_error);
  CHECK_THROWS_AS(parse("strategy v1 kind=banana backing=table l=1 n=2\n"), format_error);

  try {
    parse("strategy v1 kind=shortcode backing=affine l=1 n=2\nz=10\nu=01\n");
    FAIL("expected format_error");
  } catch (const format_error& e) {
    CHECK(e.line() == 3);
  }
}
