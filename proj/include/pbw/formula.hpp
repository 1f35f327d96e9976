#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "pbw/core.hpp"

namespace pbw {

struct Term;
struct Formula;
using TermPtr = std::shared_ptr<const Term>;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Term {
  enum class Kind { Var, Const, Plus };
  Kind kind;
  std::string name;  // Var
  Nat value = 0;     // Const
  TermPtr lhs, rhs;  // Plus
};

struct Formula {
  enum class Kind { Exists, Forall, Not, And, Or, Rel, Less, Eq };
  Kind kind;
  std::string var;           // Exists/Forall bound variable, Rel symbol
  FormulaPtr lhs, rhs;       // Not uses lhs; quantifiers use lhs as body
  std::vector<TermPtr> args; // Rel arguments; Less/Eq use args[0], args[1]
};

// Term and formula constructors.
inline TermPtr var(std::string n) { return std::make_shared<const Term>(Term{Term::Kind::Var, std::move(n), 0, {}, {}}); }
inline TermPtr cst(Nat v) { return std::make_shared<const Term>(Term{Term::Kind::Const, {}, v, {}, {}}); }
inline TermPtr plus(TermPtr a, TermPtr b) {
  return std::make_shared<const Term>(Term{Term::Kind::Plus, {}, 0, std::move(a), std::move(b)});
}
/// n*t as repeated addition; 0*t is the constant 0.
inline TermPtr times(Nat n, const TermPtr& t) {
  if (n == 0) return cst(0);
  TermPtr r = t;
  for (Nat i = 1; i < n; ++i) r = plus(r, t);
  return r;
}

inline FormulaPtr make(Formula::Kind k, std::string v, FormulaPtr a, FormulaPtr b, std::vector<TermPtr> args = {}) {
  return std::make_shared<const Formula>(Formula{k, std::move(v), std::move(a), std::move(b), std::move(args)});
}
inline FormulaPtr exists(std::string v, FormulaPtr body) { return make(Formula::Kind::Exists, std::move(v), std::move(body), nullptr); }
inline FormulaPtr forall(std::string v, FormulaPtr body) { return make(Formula::Kind::Forall, std::move(v), std::move(body), nullptr); }
inline FormulaPtr neg(FormulaPtr a) { return make(Formula::Kind::Not, {}, std::move(a), nullptr); }
inline FormulaPtr conj(FormulaPtr a, FormulaPtr b) { return make(Formula::Kind::And, {}, std::move(a), std::move(b)); }
inline FormulaPtr disj(FormulaPtr a, FormulaPtr b) { return make(Formula::Kind::Or, {}, std::move(a), std::move(b)); }
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) { return disj(neg(std::move(a)), std::move(b)); }
inline FormulaPtr iff(const FormulaPtr& a, const FormulaPtr& b) { return conj(implies(a, b), implies(b, a)); }
inline FormulaPtr rel(std::string sym, std::vector<TermPtr> args) {
  return make(Formula::Kind::Rel, std::move(sym), nullptr, nullptr, std::move(args));
}
inline FormulaPtr less(TermPtr a, TermPtr b) { return make(Formula::Kind::Less, {}, nullptr, nullptr, {std::move(a), std::move(b)}); }
inline FormulaPtr eq(TermPtr a, TermPtr b) { return make(Formula::Kind::Eq, {}, nullptr, nullptr, {std::move(a), std::move(b)}); }
inline FormulaPtr truth() { return eq(cst(0), cst(0)); }
inline FormulaPtr falsity() { return less(cst(0), cst(0)); }

inline FormulaPtr exists(const std::vector<std::string>& vs, FormulaPtr body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}
inline FormulaPtr forall(const std::vector<std::string>& vs, FormulaPtr body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}
/// Left-nested conjunction; the empty conjunction is 0 = 0.
inline FormulaPtr conj_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return truth();
  FormulaPtr r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = conj(r, fs[i]);
  return r;
}
/// Left-nested disjunction; the empty disjunction is 0 < 0.
inline FormulaPtr disj_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return falsity();
  FormulaPtr r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = disj(r, fs[i]);
  return r;
}

inline bool equal(const TermPtr& a, const TermPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case Term::Kind::Var: return a->name == b->name;
    case Term::Kind::Const: return a->value == b->value;
    case Term::Kind::Plus: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
  return false;
}

inline bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind || a->var != b->var || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!equal(a->args[i], b->args[i])) return false;
  return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

inline void term_vars(const TermPtr& t, std::set<std::string>& out) {
  if (t->kind == Term::Kind::Var) out.insert(t->name);
  if (t->kind == Term::Kind::Plus) {
    term_vars(t->lhs, out);
    term_vars(t->rhs, out);
  }
}

inline void free_vars(const FormulaPtr& f, std::set<std::string>& out, std::set<std::string>& bound) {
  using K = Formula::Kind;
  switch (f->kind) {
    case K::Exists:
    case K::Forall: {
      bool fresh = bound.insert(f->var).second;
      free_vars(f->lhs, out, bound);
      if (fresh) bound.erase(f->var);
      return;
    }
    case K::Not: free_vars(f->lhs, out, bound); return;
    case K::And:
    case K::Or:
      free_vars(f->lhs, out, bound);
      free_vars(f->rhs, out, bound);
      return;
    default: {
      std::set<std::string> vs;
      for (const auto& t : f->args) term_vars(t, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
    }
  }
}

inline std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> out, bound;
  free_vars(f, out, bound);
  return out;
}

/// Every variable name occurring in f, bound or free.
inline void all_vars(const FormulaPtr& f, std::set<std::string>& out) {
  if (!f->var.empty() && (f->kind == Formula::Kind::Exists || f->kind == Formula::Kind::Forall))
    out.insert(f->var);
  for (const auto& t : f->args) term_vars(t, out);
  if (f->lhs) all_vars(f->lhs, out);
  if (f->rhs) all_vars(f->rhs, out);
}

// ---------------------------------------------------------------- printing

inline std::string to_string(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var: return t->name;
    case Term::Kind::Const: return std::to_string(t->value);
    case Term::Kind::Plus: {
      std::string r = to_string(t->rhs);
      if (t->rhs->kind == Term::Kind::Plus) r = "(" + r + ")";
      return to_string(t->lhs) + " + " + r;
    }
  }
  return {};
}

namespace detail {

inline int precedence(const Formula& f) {
  switch (f.kind) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: return 0;
    case Formula::Kind::Or: return 1;
    case Formula::Kind::And: return 2;
    case Formula::Kind::Not: return 3;
    default: return 4;
  }
}

inline std::string print(const FormulaPtr& f, int ctx) {
  using K = Formula::Kind;
  std::string s;
  switch (f->kind) {
    case K::Exists: s = "exists " + f->var + ". " + print(f->lhs, 0); break;
    case K::Forall: s = "forall " + f->var + ". " + print(f->lhs, 0); break;
    case K::Not: s = "!" + print(f->lhs, 3); break;
    case K::And: s = print(f->lhs, 2) + " & " + print(f->rhs, 3); break;
    case K::Or: s = print(f->lhs, 1) + " | " + print(f->rhs, 2); break;
    case K::Less: s = to_string(f->args[0]) + " < " + to_string(f->args[1]); break;
    case K::Eq: s = to_string(f->args[0]) + " = " + to_string(f->args[1]); break;
    case K::Rel:
      s = f->var + "(";
      for (std::size_t i = 0; i < f->args.size(); ++i) s += (i ? ", " : "") + to_string(f->args[i]);
      s += ")";
      break;
  }
  return precedence(*f) < ctx ? "(" + s + ")" : s;
}

}  // namespace detail

inline std::string to_string(const FormulaPtr& f) { return detail::print(f, 0); }

// ----------------------------------------------------------------- parsing

namespace detail {

struct Token {
  enum class Kind { Ident, Number, Sym, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

inline std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Token::Kind::Ident, s.substr(start, i - start), start});
    } else if (std::isdigit(c)) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({Token::Kind::Number, s.substr(start, i - start), start});
    } else if (s.compare(i, 3, "<->") == 0) {
      out.push_back({Token::Kind::Sym, "<->", start});
      i += 3;
    } else if (s.compare(i, 2, "->") == 0) {
      out.push_back({Token::Kind::Sym, "->", start});
      i += 2;
    } else if (std::string("().,&|!=<+*").find(static_cast<char>(c)) != std::string::npos) {
      out.push_back({Token::Kind::Sym, std::string(1, static_cast<char>(c)), start});
      ++i;
    } else {
      throw SyntaxError(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
  }
  out.push_back({Token::Kind::End, "", s.size()});
  return out;
}

class Parser {
public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  FormulaPtr parse_all() {
    try {
      FormulaPtr f = parse_iff();
      if (peek().kind != Token::Kind::End) fail("unexpected '" + peek().text + "'");
      return f;
    } catch (const SyntaxError&) {
      throw SyntaxError(best_pos_, best_msg_);
    }
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  bool is_sym(const char* s) const { return peek().kind == Token::Kind::Sym && peek().text == s; }
  bool is_word(const char* s) const { return peek().kind == Token::Kind::Ident && peek().text == s; }

  [[noreturn]] void fail(const std::string& msg) {
    std::size_t at = peek().pos;
    if (best_msg_.empty() || at >= best_pos_) {
      best_pos_ = at;
      best_msg_ = msg;
    }
    throw SyntaxError(at, msg);
  }

  void expect(const char* s) {
    if (!is_sym(s)) fail(std::string("expected '") + s + "'");
    ++pos_;
  }

  bool accept_iff() {
    if (is_sym("<->") || is_word("iff")) return ++pos_, true;
    return false;
  }
  bool accept_implies() {
    if (is_sym("->") || is_word("implies")) return ++pos_, true;
    return false;
  }
  bool accept_or() {
    if (is_sym("|") || is_word("or")) return ++pos_, true;
    return false;
  }
  bool accept_and() {
    if (is_sym("&") || is_word("and")) return ++pos_, true;
    return false;
  }

  FormulaPtr parse_iff() {
    FormulaPtr f = parse_implies();
    while (accept_iff()) f = iff(f, parse_implies());
    return f;
  }

  // Right associative.
  FormulaPtr parse_implies() {
    FormulaPtr f = parse_or();
    if (accept_implies()) return implies(f, parse_implies());
    return f;
  }

  FormulaPtr parse_or() {
    FormulaPtr f = parse_and();
    while (accept_or()) f = disj(f, parse_and());
    return f;
  }

  FormulaPtr parse_and() {
    FormulaPtr f = parse_unary();
    while (accept_and()) f = conj(f, parse_unary());
    return f;
  }

  FormulaPtr parse_unary() {
    if (is_sym("!") || is_word("not")) {
      ++pos_;
      return neg(parse_unary());
    }
    if (is_word("exists") || is_word("forall")) {
      bool ex = peek().text == "exists";
      ++pos_;
      std::vector<std::string> vs;
      for (;;) {
        if (peek().kind != Token::Kind::Ident || is_keyword(peek().text)) fail("expected a variable name");
        vs.push_back(peek().text);
        ++pos_;
        if (is_sym(",")) {
          ++pos_;
          continue;
        }
        break;
      }
      expect(".");
      FormulaPtr body = parse_iff();
      return ex ? exists(vs, body) : forall(vs, body);
    }
    return parse_atom();
  }

  FormulaPtr parse_atom() {
    if (is_sym("(")) {
      std::size_t save = pos_;
      try {
        return parse_comparison();
      } catch (const SyntaxError&) {
        pos_ = save;
      }
      ++pos_;
      FormulaPtr f = parse_iff();
      expect(")");
      return f;
    }
    if (peek().kind == Token::Kind::Ident && !is_keyword(peek().text) && toks_[pos_ + 1].kind == Token::Kind::Sym &&
        toks_[pos_ + 1].text == "(") {
      std::string sym = peek().text;
      pos_ += 2;
      std::vector<TermPtr> args;
      if (!is_sym(")")) {
        args.push_back(parse_term());
        while (is_sym(",")) {
          ++pos_;
          args.push_back(parse_term());
        }
      }
      expect(")");
      return rel(sym, std::move(args));
    }
    return parse_comparison();
  }

  FormulaPtr parse_comparison() {
    TermPtr a = parse_term();
    if (is_sym("=")) {
      ++pos_;
      return eq(a, parse_term());
    }
    if (is_sym("<")) {
      ++pos_;
      return less(a, parse_term());
    }
    fail("expected '=' or '<'");
  }

  TermPtr parse_term() {
    TermPtr t = parse_product();
    while (is_sym("+")) {
      ++pos_;
      t = plus(t, parse_product());
    }
    return t;
  }

  // Multiplication only by a literal, on either side.
  TermPtr parse_product() {
    if (peek().kind == Token::Kind::Number && toks_[pos_ + 1].kind == Token::Kind::Sym &&
        toks_[pos_ + 1].text == "*") {
      Nat n = number();
      ++pos_;
      return times(n, parse_product());
    }
    TermPtr t = parse_primary();
    while (is_sym("*")) {
      ++pos_;
      if (peek().kind != Token::Kind::Number) fail("multiplication needs a literal factor");
      t = times(number(), t);
    }
    return t;
  }

  TermPtr parse_primary() {
    if (peek().kind == Token::Kind::Number) return cst(number());
    if (peek().kind == Token::Kind::Ident && !is_keyword(peek().text)) {
      std::string n = peek().text;
      ++pos_;
      return var(n);
    }
    if (is_sym("(")) {
      ++pos_;
      TermPtr t = parse_term();
      expect(")");
      return t;
    }
    fail("expected a term");
  }

  Nat number() {
    const Token& t = peek();
    Nat v = 0;
    for (char c : t.text) v = checked_add(checked_mul(v, 10), static_cast<Nat>(c - '0'));
    ++pos_;
    return v;
  }

  static bool is_keyword(const std::string& s) {
    return s == "exists" || s == "forall" || s == "and" || s == "or" || s == "not" || s == "implies" ||
           s == "iff";
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t best_pos_ = 0;
  std::string best_msg_;
};

}  // namespace detail

/// Parses the ASCII formula syntax documented in the README.
inline FormulaPtr parse_formula(const std::string& text) { return detail::Parser(text).parse_all(); }

}  // namespace pbw
