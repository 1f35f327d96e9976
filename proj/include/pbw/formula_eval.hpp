#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbw/formula.hpp"
#include "pbw/relation.hpp"

namespace pbw {

/// (N, +, <, R) with quantifiers cut off at Q.
struct BoundedStructure {
  std::optional<Relation> relation;
  Nat qbound = 0;
  std::string symbol = "R";
};

using Assignment = std::map<std::string, Nat>;

namespace detail {

class Evaluator {
public:
  Evaluator(const BoundedStructure& s, const Assignment& a) : s_(s) {
    for (const auto& [k, v] : a) env_.emplace_back(k, v);
  }

  bool eval(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind) {
      case K::Exists:
      case K::Forall: {
        const bool want = f.kind == K::Exists;
        env_.emplace_back(f.var, 0);
        bool result = !want;
        for (Nat v = 0; v <= s_.qbound; ++v) {
          env_.back().second = v;
          if (eval(*f.lhs) == want) {
            result = want;
            break;
          }
        }
        env_.pop_back();
        return result;
      }
      case K::Not: return !eval(*f.lhs);
      case K::And: return eval(*f.lhs) && eval(*f.rhs);
      case K::Or: return eval(*f.lhs) || eval(*f.rhs);
      case K::Less: return term(*f.args[0]) < term(*f.args[1]);
      case K::Eq: return term(*f.args[0]) == term(*f.args[1]);
      case K::Rel: {
        if (!s_.relation) throw SpecError("formula uses " + f.var + " but the structure has no relation");
        if (f.var != s_.symbol)
          throw SpecError("unknown relation symbol '" + f.var + "', the structure interprets '" + s_.symbol + "'");
        if (f.args.size() != s_.relation->dim()) throw DimensionMismatch(s_.relation->dim(), f.args.size());
        std::vector<Nat> p(f.args.size());
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = term(*f.args[i]);
        return s_.relation->contains(std::span<const Nat>(p));
      }
    }
    return false;
  }

  Nat term(const Term& t) {
    switch (t.kind) {
      case Term::Kind::Const: return t.value;
      case Term::Kind::Plus: return checked_add(term(*t.lhs), term(*t.rhs));
      case Term::Kind::Var:
        for (auto it = env_.rbegin(); it != env_.rend(); ++it)
          if (it->first == t.name) return it->second;
        throw UnboundVariable(t.name);
    }
    return 0;
  }

private:
  const BoundedStructure& s_;
  std::vector<std::pair<std::string, Nat>> env_;
};

}  // namespace detail

/// Tarskian truth with every quantifier restricted to {0..Q}.
inline bool eval_bounded(const FormulaPtr& phi, const BoundedStructure& s, const Assignment& a = {}) {
  for (const auto& v : free_vars(phi))
    if (!a.count(v)) throw UnboundVariable(v);
  return detail::Evaluator(s, a).eval(*phi);
}

}  // namespace pbw
