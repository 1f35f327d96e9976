#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pbw/cube.hpp"
#include "pbw/relation.hpp"
#include "pbw/relation_spec.hpp"

using namespace pbw;

namespace {

Relation evens() { return Relation::semilinear("evens", 2, {LinearSet(Point{0, 0}, {Point{2, 0}, Point{0, 1}})}); }

// Random linear set in dimension d with small base and periods.
LinearSet random_linear(oracle::Rng& rng, std::size_t d) {
  std::vector<Nat> base(d);
  for (auto& b : base) b = rng.uniform(0, 4);
  std::vector<Point> periods;
  Nat n = rng.uniform(0, 3);
  for (Nat i = 0; i < n; ++i) {
    std::vector<Nat> q(d);
    for (auto& v : q) v = rng.uniform(0, 3);
    periods.emplace_back(q);
  }
  return LinearSet(Point(base), periods);
}

// Membership by enumerating every combination of period multiples.
bool brute_linear(const LinearSet& ls, const Point& p) {
  const auto& ps = ls.periods();
  std::vector<Nat> coef(ps.size(), 0);
  const Nat cap = 16;
  for (;;) {
    std::vector<Nat> v = ls.base().vec();
    for (std::size_t j = 0; j < ps.size(); ++j)
      for (std::size_t i = 0; i < v.size(); ++i) v[i] += coef[j] * ps[j][i];
    if (Point(v) == p) return true;
    std::size_t j = 0;
    while (j < coef.size() && coef[j] == cap) coef[j++] = 0;
    if (j == coef.size()) return false;
    ++coef[j];
  }
}

}  // namespace

TEST(Relation, ContainsOnBuiltins) {
  auto r0 = builtin("squares_times_N", 2, 200);
  EXPECT_TRUE(r0.contains(Point{0, 5}));
  EXPECT_TRUE(r0.contains(Point{49, 0}));
  EXPECT_FALSE(r0.contains(Point{50, 3}));
  auto r1 = builtin("odd_le_square", 2, 200);
  EXPECT_TRUE(r1.contains(Point{9, 3}));
  EXPECT_FALSE(r1.contains(Point{10, 3}));
  EXPECT_FALSE(r1.contains(Point{0, 4}));
  auto pd = builtin("prime_divides", 2, 200);
  EXPECT_TRUE(pd.contains(Point{2, 10}));
  EXPECT_FALSE(pd.contains(Point{1, 10}));
  auto ps = builtin("prime_divides_shifted", 2, 200);
  // pi_1 = 3: 3 | m + 1 and m > 1.
  EXPECT_TRUE(ps.contains(Point{1, 5}));
  EXPECT_TRUE(ps.contains(Point{1, 2}));
  EXPECT_FALSE(ps.contains(Point{1, 3}));
  EXPECT_FALSE(ps.contains(Point{1, 0}));
}

TEST(Relation, BinaryBuiltinsRejectOtherDimensions) {
  EXPECT_THROW(builtin("odd_le_square", 3, 10), SpecError);
  EXPECT_THROW(builtin("nope", 2, 10), SpecError);
  EXPECT_EQ(builtin("full", 3, 10).dim(), 3u);
}

TEST(Relation, OutOfBoundAndDimension) {
  auto r1 = builtin("odd_le_square", 2, 20);
  EXPECT_THROW(r1.contains(Point{21, 1}), OutOfBound);
  EXPECT_THROW(r1.contains(Point{1, 1, 1}), DimensionMismatch);
  auto t = Relation::table("t", 2, 5, {Point{1, 2}});
  EXPECT_THROW(t.contains(Point{0, 6}), OutOfBound);
  EXPECT_THROW(Relation::table("t", 2, 5, {Point{1, 9}}), OutOfBound);
  EXPECT_FALSE(evens().bound().has_value());
}

TEST(Relation, LinearSetMatchesEnumeration) {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t d = rng.uniform(1, 3);
    auto ls = random_linear(rng, d);
    std::vector<Nat> p(d, 0);
    for (;;) {
      Point q(p);
      EXPECT_EQ(ls.contains(q), brute_linear(ls, q)) << q;
      std::size_t i = 0;
      while (i < d && p[i] == 7) p[i++] = 0;
      if (i == d) break;
      ++p[i];
    }
  }
}

TEST(Relation, SectionExamples) {
  auto r0 = builtin("squares_times_N", 2, 200);
  auto sq = section(r0, 1, 0);
  EXPECT_EQ(sq.dim(), 1u);
  for (Nat n = 0; n <= 50; ++n) EXPECT_EQ(sq.contains(Point{n}), oracle::is_square(n));
  auto row = section(r0, 0, 4);
  for (Nat n = 0; n <= 50; ++n) EXPECT_TRUE(row.contains(Point{n}));
  auto e = section(evens(), 1, 3);
  EXPECT_EQ(e.kind(), RelationKind::Semilinear);
  EXPECT_TRUE(e.contains(Point{4}));
  EXPECT_FALSE(e.contains(Point{5}));
  EXPECT_THROW(section(sq, 0, 0), DimensionTooSmall);
}

// Sectioning commutes with membership for every body kind.
TEST(Relation, SectionCommutesWithMembership) {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t d = rng.uniform(2, 3);
    std::vector<LinearSet> sets;
    for (Nat i = rng.uniform(1, 3); i > 0; --i) sets.push_back(random_linear(rng, d));
    auto sl = Relation::semilinear("s", d, sets);
    std::vector<Point> pts;
    std::vector<Nat> p(d, 0);
    for (;;) {
      if (sl.contains(Point(p))) pts.emplace_back(p);
      std::size_t i = 0;
      while (i < d && p[i] == 8) p[i++] = 0;
      if (i == d) break;
      ++p[i];
    }
    auto table = Relation::table("t", d, 8, pts);
    std::size_t axis = rng.uniform(0, d - 1);
    Nat value = rng.uniform(0, 8);
    auto ss = section(sl, axis, value), ts = section(table, axis, value);
    std::vector<Nat> q(d - 1, 0);
    for (;;) {
      std::vector<Nat> full = q;
      full.insert(full.begin() + static_cast<std::ptrdiff_t>(axis), value);
      bool expect = sl.contains(Point(full));
      EXPECT_EQ(ss.contains(Point(q)), expect);
      EXPECT_EQ(ts.contains(Point(q)), expect);
      EXPECT_EQ(table.contains(Point(full)), expect);
      std::size_t i = 0;
      while (i < d - 1 && q[i] == 8) q[i++] = 0;
      if (i == d - 1) break;
      ++q[i];
    }
  }
}

TEST(Cube, CodeIsABijection) {
  for (std::size_t d = 1; d <= 3; ++d)
    for (Nat k = 0; k <= 3; ++k) {
      Cube c(d, k);
      EXPECT_EQ(c.size(), checked_pow(k + 1, d));
      for (Nat i = 0; i < c.size(); ++i) EXPECT_EQ(c.code(c.decode(i)), i);
    }
  Cube c(2, 1);
  EXPECT_EQ(c.code(Point{0, 1}), 1u);
  EXPECT_EQ(c.code(Point{1, 0}), 2u);
  EXPECT_THROW(c.code(Point{2, 0}), OutOfBound);
}

TEST(Cube, FigureCubes) {
  auto r1 = builtin("odd_le_square", 2, 100);
  EXPECT_EQ(cube_at(r1, Point{0, 0}, 1).str(), "{(0,1),(1,1)}");
  EXPECT_EQ(cube_at(r1, Point{0, 0}, 1).hex(), "a");
  EXPECT_EQ(cube_at(r1, Point{1, 0}, 1).str(), "{(0,1)}");
  EXPECT_EQ(cube_at(r1, Point{9, 2}, 1).str(), "{(0,1)}");
  EXPECT_EQ(cube_at(r1, Point{9, 3}, 1).str(), "{(0,0)}");
  EXPECT_EQ(cube_at(r1, Point{9, 3}, 1).hex(), "1");
  EXPECT_EQ(cube_at(r1, Point{3, 3}, 0).str(), "{(0,0)}");
}

TEST(Cube, RestrictAgreesWithSmallerCube) {
  oracle::Rng rng(3);
  auto r1 = builtin("odd_le_square", 2, 100);
  for (int i = 0; i < 200; ++i) {
    Point x{rng.uniform(0, 60), rng.uniform(0, 60)};
    Nat k = rng.uniform(0, 4), k2 = rng.uniform(0, k);
    EXPECT_EQ(cube_at(r1, x, k).restrict(k2), cube_at(r1, x, k2));
    auto bits = oracle::cube(oracle::r1, x.vec(), k);
    auto cube = cube_at(r1, x, k);
    for (Nat c = 0; c < cube.size(); ++c) EXPECT_EQ(cube.test(c), bits[c]);
  }
}

TEST(Core, PointAndShift) {
  Point p{3, 4};
  EXPECT_EQ(norm(p), 7u);
  EXPECT_EQ(p.min(), 3u);
  EXPECT_EQ(p.max(), 4u);
  EXPECT_LT((Point{1, 9}), (Point{2, 0}));
  EXPECT_EQ(shifted(p, ShiftVector{-3, 1}), (Point{0, 5}));
  EXPECT_THROW(shifted(p, ShiftVector{-4, 0}), NegativeShiftTarget);
  EXPECT_THROW(checked_mul(Nat{1} << 40, Nat{1} << 40), OverflowError);
}

TEST(Spec, ParsesSampleFiles) {
  auto e = load_relation_spec(std::string(PBW_SPECS_DIR) + "/evens.rel");
  EXPECT_EQ(e.name(), "evens");
  EXPECT_TRUE(e.contains(Point{4, 1}));
  EXPECT_FALSE(e.contains(Point{3, 1}));
  auto a = load_relation_spec(std::string(PBW_SPECS_DIR) + "/addition.rel");
  EXPECT_EQ(a.dim(), 3u);
  EXPECT_TRUE(a.contains(Point{2, 3, 5}));
  EXPECT_FALSE(a.contains(Point{2, 3, 6}));
  auto r = load_relation_spec(std::string(PBW_SPECS_DIR) + "/odd_le_square.rel");
  EXPECT_EQ(r.bound(), 2000u);
  auto t = load_relation_spec(std::string(PBW_SPECS_DIR) + "/sparse.rel");
  EXPECT_EQ(t.kind(), RelationKind::FiniteTable);
  EXPECT_TRUE(t.contains(Point{4, 7}));
}

TEST(Spec, RejectsMalformedInput) {
  EXPECT_THROW(parse_relation_spec(""), SpecError);
  EXPECT_THROW(parse_relation_spec("relation x\n"), SpecError);
  EXPECT_THROW(parse_relation_spec("relation x dim 2\nlinear base (1) periods\n"), SpecError);
  EXPECT_THROW(parse_relation_spec("relation x dim 2\ntable bound 3\n(4,0)\n"), SpecError);
  EXPECT_THROW(parse_relation_spec("relation x dim 2\nwhatever\n"), SpecError);
  EXPECT_THROW(load_relation_spec("/nonexistent/file.rel"), SpecError);
}
