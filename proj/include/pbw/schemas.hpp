#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pbw/formula.hpp"

namespace pbw {

namespace schema {

inline std::string idx(const char* base, std::size_t i) { return base + std::to_string(i); }

inline std::vector<TermPtr> vars(const char* base, std::size_t d) {
  std::vector<TermPtr> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(var(idx(base, i)));
  return out;
}

inline std::vector<std::string> names(const char* base, std::size_t d) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < d; ++i) out.push_back(idx(base, i));
  return out;
}

inline void need_dim(std::size_t d) {
  if (d == 0) throw DimensionTooSmall("schemas need d >= 1");
}

}  // namespace schema

/// beta_d(x, y, k): the cubes of radius k at x and y agree.
/// Free variables x0.., y0.., k.
inline FormulaPtr build_beta(std::size_t d) {
  schema::need_dim(d);
  auto x = schema::vars("x", d), y = schema::vars("y", d), z = schema::vars("z", d);
  std::vector<FormulaPtr> in_box;
  std::vector<TermPtr> xz, yz;
  for (std::size_t i = 0; i < d; ++i) {
    in_box.push_back(less(z[i], plus(var("k"), cst(1))));
    xz.push_back(plus(x[i], z[i]));
    yz.push_back(plus(y[i], z[i]));
  }
  return forall(schema::names("z", d), implies(conj_all(in_box), iff(rel("R", xz), rel("R", yz))));
}

/// sigma_d(r, k, x): the cube at x equals the cube at x + r, with r_i encoded
/// as rp_i - rn_i. Free variables rp0.., rn0.., k, x0...
inline FormulaPtr build_sigma(std::size_t d) {
  schema::need_dim(d);
  FormulaPtr body = build_beta(d);
  // Innermost first, so each y_i is fixed by its equation before the next.
  for (std::size_t i = d; i-- > 0;) {
    std::string y = schema::idx("y", i);
    FormulaPtr link = eq(plus(var(y), var(schema::idx("rn", i))), plus(var(schema::idx("x", i)), var(schema::idx("rp", i))));
    body = exists(y, conj(link, body));
  }
  return body;
}

/// varsigma_d(s, k, x): some nonzero r with max |r_i| <= s shifts the cube.
/// Each r_i is taken in canonical form (one of rp_i, rn_i is zero).
/// Free variables s, k, x0...
inline FormulaPtr build_varsigma(std::size_t d) {
  schema::need_dim(d);
  std::vector<FormulaPtr> nonzero;
  for (std::size_t i = 0; i < d; ++i)
    nonzero.push_back(neg(eq(var(schema::idx("rp", i)), var(schema::idx("rn", i)))));
  FormulaPtr body = conj(disj_all(nonzero), build_sigma(d));
  for (std::size_t i = d; i-- > 0;) {
    auto rp = var(schema::idx("rp", i)), rn = var(schema::idx("rn", i));
    auto bound = plus(var("s"), cst(1));
    body = exists(schema::idx("rp", i),
                  conj(less(rp, bound),
                       exists(schema::idx("rn", i),
                              conj(conj(less(rn, bound), disj(eq(rp, cst(0)), eq(rn, cst(0)))), body))));
  }
  return body;
}

// ------------------------------------------------------------- substitution

inline TermPtr substitute(const TermPtr& t, const std::map<std::string, std::string>& ren) {
  switch (t->kind) {
    case Term::Kind::Var: {
      auto it = ren.find(t->name);
      return it == ren.end() ? t : var(it->second);
    }
    case Term::Kind::Const: return t;
    case Term::Kind::Plus: return plus(substitute(t->lhs, ren), substitute(t->rhs, ren));
  }
  return t;
}

/// Renames free occurrences. Targets must not occur in f, which rules out
/// capture.
inline FormulaPtr substitute(const FormulaPtr& f, std::map<std::string, std::string> ren) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Exists:
    case K::Forall: {
      ren.erase(f->var);
      return make(f->kind, f->var, substitute(f->lhs, ren), nullptr);
    }
    case K::Not: return neg(substitute(f->lhs, ren));
    case K::And:
    case K::Or: return make(f->kind, {}, substitute(f->lhs, ren), substitute(f->rhs, ren));
    default: {
      std::vector<TermPtr> args;
      for (const auto& t : f->args) args.push_back(substitute(t, ren));
      return make(f->kind, f->var, nullptr, nullptr, std::move(args));
    }
  }
}

/// A name of the form base_N not in `taken`; recorded there.
inline std::string fresh_name(const std::string& base, std::set<std::string>& taken) {
  for (std::size_t n = 0;; ++n) {
    std::string c = base + "_" + std::to_string(n);
    if (taken.insert(c).second) return c;
  }
}

/// min_x phi(x): phi holds at x and at no lexicographically smaller tuple.
inline FormulaPtr build_min(const FormulaPtr& phi, const std::vector<std::string>& xs) {
  if (xs.empty()) return phi;
  std::set<std::string> taken;
  all_vars(phi, taken);
  taken.insert(xs.begin(), xs.end());
  std::map<std::string, std::string> ren;
  std::vector<std::string> ys;
  for (const auto& x : xs) {
    ys.push_back(fresh_name(x, taken));
    ren[x] = ys.back();
  }
  // y <lex x: some j with y_i = x_i for i < j and y_j < x_j.
  std::vector<FormulaPtr> cases;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    std::vector<FormulaPtr> parts;
    for (std::size_t i = 0; i < j; ++i) parts.push_back(eq(var(ys[i]), var(xs[i])));
    parts.push_back(less(var(ys[j]), var(xs[j])));
    cases.push_back(conj_all(parts));
  }
  FormulaPtr smaller = exists(ys, conj(disj_all(cases), substitute(phi, ren)));
  return conj(phi, neg(smaller));
}

/// min_i phi_i: phi_i holds and no earlier phi_j does.
inline std::vector<FormulaPtr> build_min(const std::vector<FormulaPtr>& family) {
  std::vector<FormulaPtr> out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    std::vector<FormulaPtr> parts{family[i]};
    for (std::size_t j = 0; j < i; ++j) parts.push_back(neg(family[j]));
    out.push_back(conj_all(parts));
  }
  return out;
}

/// min_{i,x} phi_i(x) = min_i (exists y. phi_i(y)) & min_x phi_i(x).
inline std::vector<FormulaPtr> build_min(const std::vector<FormulaPtr>& family, const std::vector<std::string>& xs) {
  std::vector<FormulaPtr> inhabited;
  for (const auto& phi : family) inhabited.push_back(exists(xs, phi));
  auto first = build_min(inhabited);
  std::vector<FormulaPtr> out;
  for (std::size_t i = 0; i < family.size(); ++i) out.push_back(conj(first[i], build_min(family[i], xs)));
  return out;
}

struct IteBranch {
  FormulaPtr condition;  // phi_i(x)
  FormulaPtr then;       // chi_i(x)
};

/// if (some i, x with phi_i(x)) then chi_i(x) else psi.
inline FormulaPtr build_ite(const std::vector<IteBranch>& branches, const std::vector<std::string>& xs,
                            const FormulaPtr& otherwise) {
  std::vector<FormulaPtr> taken, none;
  for (const auto& b : branches) {
    taken.push_back(exists(xs, conj(b.condition, b.then)));
    none.push_back(forall(xs, neg(b.condition)));
  }
  return disj(disj_all(taken), conj(conj_all(none), otherwise));
}

}  // namespace pbw
