#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pbw/formula.hpp"
#include "pbw/formula_eval.hpp"
#include "pbw/schemas.hpp"

using namespace pbw;

namespace {

Relation table1(std::vector<Nat> members, Nat bound = 64) {
  std::vector<Point> pts;
  for (Nat m : members) pts.push_back(Point{m});
  return Relation::table("R", 1, bound, pts);
}

const std::vector<std::string> kVars = {"a", "b", "c"};

TermPtr random_term(oracle::Rng& rng, int depth) {
  switch (depth <= 0 ? rng.uniform(0, 1) : rng.uniform(0, 2)) {
    case 0: return var(kVars[rng.uniform(0, kVars.size() - 1)]);
    case 1: return cst(rng.uniform(0, 5));
    default: return plus(random_term(rng, depth - 1), random_term(rng, depth - 1));
  }
}

// Any formula over R/1 and the variables a, b, c.
FormulaPtr random_formula(oracle::Rng& rng, int depth) {
  Nat pick = depth <= 0 ? rng.uniform(0, 2) : rng.uniform(0, 7);
  switch (pick) {
    case 0: return rel("R", {random_term(rng, 1)});
    case 1: return less(random_term(rng, 1), random_term(rng, 1));
    case 2: return eq(random_term(rng, 1), random_term(rng, 1));
    case 3: return neg(random_formula(rng, depth - 1));
    case 4: return conj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 5: return disj(random_formula(rng, depth - 1), random_formula(rng, depth - 1));
    case 6: return exists(kVars[rng.uniform(0, 2)], random_formula(rng, depth - 1));
    default: return forall(kVars[rng.uniform(0, 2)], random_formula(rng, depth - 1));
  }
}

// Positive existential formulas: no negation and no universal quantifier.
FormulaPtr random_positive(oracle::Rng& rng, int depth) {
  Nat pick = depth <= 0 ? rng.uniform(0, 2) : rng.uniform(0, 5);
  switch (pick) {
    case 0: return rel("R", {random_term(rng, 1)});
    case 1: return less(random_term(rng, 1), random_term(rng, 1));
    case 2: return eq(random_term(rng, 1), random_term(rng, 1));
    case 3: return conj(random_positive(rng, depth - 1), random_positive(rng, depth - 1));
    case 4: return disj(random_positive(rng, depth - 1), random_positive(rng, depth - 1));
    default: return exists(kVars[rng.uniform(0, 2)], random_positive(rng, depth - 1));
  }
}

}  // namespace

TEST(Parse, Examples) {
  auto f = parse_formula("exists y. R(x, y) & x < y + 1");
  EXPECT_EQ(f->kind, Formula::Kind::Exists);
  EXPECT_EQ(f->lhs->kind, Formula::Kind::And);
  EXPECT_EQ(free_vars(f), (std::set<std::string>{"x"}));
  EXPECT_TRUE(equal(parse_formula("x = 1 and not y < 2 or z = 3"), parse_formula("(x = 1 & !y < 2) | z = 3")));
  EXPECT_TRUE(equal(parse_formula("x = 1 implies y = 2"), parse_formula("!x = 1 | y = 2")));
  EXPECT_TRUE(equal(parse_formula("3*x = y"), parse_formula("x + x + x = y")));
  EXPECT_TRUE(equal(parse_formula("x*2 = y"), parse_formula("x + x = y")));
  EXPECT_TRUE(equal(parse_formula("(x + 1) = y"), parse_formula("x + 1 = y")));
  EXPECT_TRUE(equal(parse_formula("((x = 1))"), parse_formula("x = 1")));
  EXPECT_TRUE(equal(parse_formula("exists a, b. a = b"), parse_formula("exists a. exists b. a = b")));
}

TEST(Parse, ImplicationIsRightAssociative) {
  auto f = parse_formula("x = 0 -> y = 0 -> z = 0");
  auto g = parse_formula("x = 0 -> (y = 0 -> z = 0)");
  EXPECT_TRUE(equal(f, g));
  EXPECT_FALSE(equal(f, parse_formula("(x = 0 -> y = 0) -> z = 0")));
}

TEST(Parse, SyntaxErrorsCarryPositions) {
  try {
    parse_formula("x = ");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 4u);
  }
  try {
    parse_formula("x = 1 & $");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 8u);
  }
  EXPECT_THROW(parse_formula("x * y = 1"), SyntaxError);
  EXPECT_THROW(parse_formula("exists . x = 1"), SyntaxError);
  EXPECT_THROW(parse_formula("(x = 1"), SyntaxError);
  EXPECT_THROW(parse_formula("x = 1)"), SyntaxError);
}

TEST(Parse, PrintParseRoundTrip) {
  oracle::Rng rng(21);
  for (int i = 0; i < 500; ++i) {
    auto f = random_formula(rng, 4);
    auto g = parse_formula(to_string(f));
    EXPECT_TRUE(equal(f, g)) << to_string(f) << "  vs  " << to_string(g);
    EXPECT_EQ(to_string(g), to_string(f));
  }
}

TEST(Eval, Examples) {
  BoundedStructure s{table1({0, 1, 2, 5, 6}), 10, "R"};
  EXPECT_TRUE(eval_bounded(parse_formula("R(5)"), s));
  EXPECT_FALSE(eval_bounded(parse_formula("R(3)"), s));
  EXPECT_TRUE(eval_bounded(parse_formula("exists x. R(x) & !R(x + 1) & 4 < x"), s));
  EXPECT_FALSE(eval_bounded(parse_formula("forall x. R(x)"), s));
  EXPECT_TRUE(eval_bounded(parse_formula("x + 2 = y"), s, {{"x", 3}, {"y", 5}}));
  EXPECT_TRUE(eval_bounded(truth(), s));
  EXPECT_FALSE(eval_bounded(falsity(), s));
}

TEST(Eval, NormsOfCornersOnOddLeSquare) {
  auto nu = parse_formula(
      "exists a. exists b. a + b = x & !R(a, b) & R(a, b + 1) & !R(a + 1, b) & !R(a + 1, b + 1)");
  BoundedStructure s{builtin("odd_le_square", 2, 300), 200, "R"};
  EXPECT_TRUE(eval_bounded(nu, s, {{"x", 11}}));
  EXPECT_FALSE(eval_bounded(nu, s, {{"x", 5}}));
  for (Nat x = 0; x <= 60; ++x) {
    bool want = false;
    for (Nat a = 0; a <= x; ++a) {
      Nat b = x - a;
      want = want || (!oracle::r1({a, b}) && oracle::r1({a, b + 1}) && !oracle::r1({a + 1, b}) &&
                      !oracle::r1({a + 1, b + 1}));
    }
    EXPECT_EQ(eval_bounded(nu, s, {{"x", x}}), want) << "x=" << x;
  }
}

TEST(Eval, QuantifiersAreBoundedByQ) {
  BoundedStructure s{std::nullopt, 5, "R"};
  EXPECT_FALSE(eval_bounded(parse_formula("exists x. 5 < x"), s));
  s.qbound = 6;
  EXPECT_TRUE(eval_bounded(parse_formula("exists x. 5 < x"), s));
}

TEST(Eval, Errors) {
  BoundedStructure s{table1({1}, 8), 10, "R"};
  EXPECT_THROW(eval_bounded(parse_formula("x = 1"), s), UnboundVariable);
  EXPECT_THROW(eval_bounded(parse_formula("R(1, 2)"), s), DimensionMismatch);
  EXPECT_THROW(eval_bounded(parse_formula("S(1)"), s), SpecError);
  EXPECT_THROW(eval_bounded(parse_formula("forall x. R(x) -> x = 1"), s), OutOfBound);
  BoundedStructure none{std::nullopt, 3, "R"};
  EXPECT_THROW(eval_bounded(parse_formula("R(1)"), none), SpecError);
}

// Evaluation agrees with a direct recursive interpretation.
TEST(Eval, AgreesWithDirectInterpretation) {
  oracle::Rng rng(8);
  auto r = table1({0, 2, 3, 7}, 40);
  const Nat Q = 4;
  std::function<Nat(const TermPtr&, std::map<std::string, Nat>&)> term = [&](const TermPtr& t, auto& env) -> Nat {
    if (t->kind == Term::Kind::Const) return t->value;
    if (t->kind == Term::Kind::Var) return env.at(t->name);
    return term(t->lhs, env) + term(t->rhs, env);
  };
  std::function<bool(const FormulaPtr&, std::map<std::string, Nat>&)> sat = [&](const FormulaPtr& f, auto& env) {
    using K = Formula::Kind;
    switch (f->kind) {
      case K::Rel: {
        Nat v = term(f->args[0], env);
        return v == 0 || v == 2 || v == 3 || v == 7;
      }
      case K::Less: return term(f->args[0], env) < term(f->args[1], env);
      case K::Eq: return term(f->args[0], env) == term(f->args[1], env);
      case K::Not: return !sat(f->lhs, env);
      case K::And: return sat(f->lhs, env) && sat(f->rhs, env);
      case K::Or: return sat(f->lhs, env) || sat(f->rhs, env);
      default: {
        auto saved = env.find(f->var) == env.end() ? std::optional<Nat>() : std::optional<Nat>(env[f->var]);
        bool any = false, all = true;
        for (Nat v = 0; v <= Q; ++v) {
          env[f->var] = v;
          bool b = sat(f->lhs, env);
          any = any || b;
          all = all && b;
        }
        if (saved) env[f->var] = *saved;
        else env.erase(f->var);
        return f->kind == K::Exists ? any : all;
      }
    }
  };
  for (int i = 0; i < 400; ++i) {
    auto f = random_formula(rng, 4);
    std::map<std::string, Nat> env{{"a", rng.uniform(0, 6)}, {"b", rng.uniform(0, 6)}, {"c", rng.uniform(0, 6)}};
    Assignment a(env.begin(), env.end());
    EXPECT_EQ(eval_bounded(f, {r, Q, "R"}, a), sat(f, env)) << to_string(f);
  }
}

// Raising Q never falsifies a true positive existential formula.
TEST(Eval, ExistentialTruthIsMonotoneInQ) {
  oracle::Rng rng(9);
  auto r = table1({1, 4, 9, 16}, 80);
  for (int i = 0; i < 300; ++i) {
    auto f = random_positive(rng, 4);
    Assignment a{{"a", rng.uniform(0, 5)}, {"b", rng.uniform(0, 5)}, {"c", rng.uniform(0, 5)}};
    bool prev = false;
    for (Nat q = 0; q <= 12; q += 3) {
      bool now = eval_bounded(f, {r, q, "R"}, a);
      if (prev) {
        EXPECT_TRUE(now) << to_string(f) << " Q=" << q;
      }
      prev = now;
    }
  }
}

TEST(Schemas, FreeVariables) {
  EXPECT_EQ(free_vars(build_beta(2)), (std::set<std::string>{"k", "x0", "x1", "y0", "y1"}));
  EXPECT_EQ(free_vars(build_sigma(1)), (std::set<std::string>{"k", "rn0", "rp0", "x0"}));
  EXPECT_EQ(free_vars(build_varsigma(2)), (std::set<std::string>{"k", "s", "x0", "x1"}));
  EXPECT_THROW(build_beta(0), DimensionTooSmall);
}

TEST(Schemas, MinExample) {
  auto r = table1({0, 1, 2, 5, 6});
  auto phi = parse_formula("R(x) & !R(x + 1)");
  auto m = build_min(phi, {"x"});
  std::vector<Nat> hits;
  for (Nat x = 0; x <= 10; ++x)
    if (eval_bounded(m, {r, 10, "R"}, {{"x", x}})) hits.push_back(x);
  EXPECT_EQ(hits, std::vector<Nat>{2});
}

TEST(Schemas, MinIsLexicographic) {
  auto r = Relation::table("R", 2, 12, {Point{3, 1}, Point{2, 5}, Point{2, 4}, Point{4, 0}});
  auto m = build_min(parse_formula("R(x, y)"), {"x", "y"});
  std::vector<std::pair<Nat, Nat>> hits;
  for (Nat x = 0; x <= 6; ++x)
    for (Nat y = 0; y <= 6; ++y)
      if (eval_bounded(m, {r, 6, "R"}, {{"x", x}, {"y", y}})) hits.emplace_back(x, y);
  EXPECT_EQ(hits, (std::vector<std::pair<Nat, Nat>>{{2, 4}}));
}

TEST(Schemas, MinOverFamily) {
  auto fam = build_min(std::vector<FormulaPtr>{parse_formula("x = 3"), parse_formula("x < 5"), parse_formula("x = 9")});
  BoundedStructure s{std::nullopt, 10, "R"};
  EXPECT_TRUE(eval_bounded(fam[0], s, {{"x", 3}}));
  EXPECT_FALSE(eval_bounded(fam[1], s, {{"x", 3}}));
  EXPECT_TRUE(eval_bounded(fam[1], s, {{"x", 4}}));
  EXPECT_TRUE(eval_bounded(fam[2], s, {{"x", 9}}));
}

TEST(Schemas, IteExample) {
  std::vector<IteBranch> branches;
  for (Nat i = 3; i <= 5; ++i)
    branches.push_back({eq(var("x"), cst(i)), exists("z", eq(times(i, var("z")), var("y")))});
  auto f = build_ite(branches, {}, parse_formula("exists z. 2*z + 1 = y"));
  BoundedStructure s{std::nullopt, 20, "R"};
  EXPECT_TRUE(eval_bounded(f, s, {{"x", 4}, {"y", 8}}));
  EXPECT_FALSE(eval_bounded(f, s, {{"x", 4}, {"y", 7}}));
  EXPECT_TRUE(eval_bounded(f, s, {{"x", 1}, {"y", 7}}));
  EXPECT_FALSE(eval_bounded(f, s, {{"x", 1}, {"y", 8}}));
  EXPECT_TRUE(eval_bounded(f, s, {{"x", 5}, {"y", 15}}));
}

TEST(Schemas, SubstituteAvoidsBoundOccurrences) {
  auto f = parse_formula("x = 1 & exists x. x = 2");
  auto g = substitute(f, {{"x", "w"}});
  EXPECT_TRUE(equal(g, parse_formula("w = 1 & exists x. x = 2")));
  std::set<std::string> taken{"x", "x_0"};
  EXPECT_EQ(fresh_name("x", taken), "x_1");
}
