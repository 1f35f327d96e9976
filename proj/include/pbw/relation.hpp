#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pbw/core.hpp"

namespace pbw {

/// { base + sum m_i * periods_i | m in N^c }.
class LinearSet {
public:
  LinearSet(Point base, std::vector<Point> periods) : base_(std::move(base)) {
    for (auto& p : periods) {
      if (p.dim() != base_.dim()) throw DimensionMismatch(base_.dim(), p.dim());
      if (p.max() != 0) periods_.push_back(std::move(p));
    }
  }

  std::size_t dim() const { return base_.dim(); }
  const Point& base() const { return base_; }
  const std::vector<Point>& periods() const { return periods_; }

  bool contains(const Point& p) const {
    if (p.dim() != dim()) throw DimensionMismatch(dim(), p.dim());
    std::vector<Nat> rest(dim());
    for (std::size_t i = 0; i < dim(); ++i) {
      if (p[i] < base_[i]) return false;
      rest[i] = p[i] - base_[i];
    }
    return solve(rest, 0);
  }

  friend bool operator==(const LinearSet&, const LinearSet&) = default;
  friend auto operator<=>(const LinearSet&, const LinearSet&) = default;

private:
  // Is rest a non-negative combination of periods_[j..]? Every period has a
  // positive coordinate, so each multiplier is bounded by rest.
  bool solve(std::vector<Nat>& rest, std::size_t j) const {
    if (j == periods_.size()) {
      for (Nat r : rest)
        if (r != 0) return false;
      return true;
    }
    const Point& q = periods_[j];
    Nat most = ~Nat{0};
    for (std::size_t i = 0; i < rest.size(); ++i)
      if (q[i] > 0) most = std::min(most, rest[i] / q[i]);
    if (j + 1 == periods_.size()) {
      // Last period: the multiplier is forced by any positive coordinate.
      std::size_t axis = 0;
      while (q[axis] == 0) ++axis;
      if (rest[axis] % q[axis] != 0) return false;
      Nat m = rest[axis] / q[axis];
      if (m > most) return false;
      for (std::size_t i = 0; i < rest.size(); ++i)
        if (rest[i] != m * q[i]) return false;
      return true;
    }
    for (Nat m = 0;; ++m) {
      if (solve(rest, j + 1)) {
        for (std::size_t i = 0; i < rest.size(); ++i) rest[i] += m * q[i];
        return true;
      }
      if (m == most) break;
      for (std::size_t i = 0; i < rest.size(); ++i) rest[i] -= q[i];
    }
    for (std::size_t i = 0; i < rest.size(); ++i) rest[i] += most * q[i];
    return false;
  }

  Point base_;
  std::vector<Point> periods_;
};

using Predicate = std::function<bool(std::span<const Nat>)>;
/// Maps a value v to a horizon H beyond which the quantity the hint is about
/// exceeds v. For a family of rows it bounds the row index past which every
/// row's minimal period is larger than v.
using DivergenceModulus = std::function<Nat(Nat)>;

enum class RelationKind { FiniteTable, Semilinear, Oracle };

/// A relation over N^d behind a uniform membership interface.
///
/// Finite tables and oracles are only meaningful on [0,bound]^d; queries
/// beyond it raise OutOfBound instead of answering false. Semilinear
/// relations are exact everywhere. Instances are immutable and cheap to copy.
class Relation {
public:
  struct FiniteTable {
    Nat bound;
    std::set<Point> points;
  };
  struct Semilinear {
    std::vector<LinearSet> sets;
  };
  struct Oracle {
    Predicate pred;
    Nat bound;
    std::optional<DivergenceModulus> divergence_hint;
  };
  using Body = std::variant<FiniteTable, Semilinear, Oracle>;

  static Relation table(std::string name, std::size_t dim, Nat bound, std::vector<Point> points) {
    check_dim(dim);
    FiniteTable t{bound, {}};
    for (auto& p : points) {
      if (p.dim() != dim) throw DimensionMismatch(dim, p.dim());
      for (std::size_t i = 0; i < dim; ++i)
        if (p[i] > bound) throw OutOfBound(i, p[i], bound);
      t.points.insert(std::move(p));
    }
    return Relation(std::move(name), dim, std::move(t));
  }

  static Relation semilinear(std::string name, std::size_t dim, std::vector<LinearSet> sets) {
    check_dim(dim);
    for (const auto& s : sets)
      if (s.dim() != dim) throw DimensionMismatch(dim, s.dim());
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    return Relation(std::move(name), dim, Semilinear{std::move(sets)});
  }

  static Relation oracle(std::string name, std::size_t dim, Nat bound, Predicate pred,
                         std::optional<DivergenceModulus> hint = std::nullopt) {
    check_dim(dim);
    return Relation(std::move(name), dim, Oracle{std::move(pred), bound, std::move(hint)});
  }

  const std::string& name() const { return state_->name; }
  std::size_t dim() const { return state_->dim; }
  RelationKind kind() const { return static_cast<RelationKind>(state_->body.index()); }
  const Body& body() const { return state_->body; }

  /// Evaluation bound; nullopt for semilinear relations.
  std::optional<Nat> bound() const {
    if (auto* t = std::get_if<FiniteTable>(&state_->body)) return t->bound;
    if (auto* o = std::get_if<Oracle>(&state_->body)) return o->bound;
    return std::nullopt;
  }

  std::optional<DivergenceModulus> divergence_hint() const {
    if (auto* o = std::get_if<Oracle>(&state_->body)) return o->divergence_hint;
    return std::nullopt;
  }

  bool contains(std::span<const Nat> p) const {
    if (p.size() != dim()) throw DimensionMismatch(dim(), p.size());
    if (auto b = bound())
      for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > *b) throw OutOfBound(i, p[i], *b);
    return std::visit(
        [&](const auto& body) -> bool {
          using B = std::decay_t<decltype(body)>;
          if constexpr (std::is_same_v<B, FiniteTable>) {
            return body.points.count(Point(std::vector<Nat>(p.begin(), p.end()))) != 0;
          } else if constexpr (std::is_same_v<B, Semilinear>) {
            Point q(std::vector<Nat>(p.begin(), p.end()));
            for (const auto& s : body.sets)
              if (s.contains(q)) return true;
            return false;
          } else {
            return body.pred(p);
          }
        },
        state_->body);
  }
  bool contains(const Point& p) const { return contains(p.coords()); }

private:
  struct State {
    std::string name;
    std::size_t dim;
    Body body;
  };

  Relation(std::string name, std::size_t dim, Body body)
      : state_(std::make_shared<const State>(State{std::move(name), dim, std::move(body)})) {}

  static void check_dim(std::size_t dim) {
    if (dim == 0) throw DimensionTooSmall("relations have dimension >= 1");
  }

  std::shared_ptr<const State> state_;
};

inline bool contains(const Relation& r, const Point& p) { return r.contains(p); }

namespace detail {

inline Point drop_axis(const Point& p, std::size_t axis) {
  std::vector<Nat> out;
  out.reserve(p.dim() - 1);
  for (std::size_t i = 0; i < p.dim(); ++i)
    if (i != axis) out.push_back(p[i]);
  return Point(std::move(out));
}

inline std::vector<Nat> insert_axis(std::span<const Nat> p, std::size_t axis, Nat value) {
  std::vector<Nat> out;
  out.reserve(p.size() + 1);
  out.insert(out.end(), p.begin(), p.begin() + static_cast<std::ptrdiff_t>(axis));
  out.push_back(value);
  out.insert(out.end(), p.begin() + static_cast<std::ptrdiff_t>(axis), p.end());
  return out;
}

// All ways to write `target` as sum m_j * q_j[axis] over the periods whose
// axis-coordinate is positive; emits the accumulated offset vector.
inline void enumerate_axis_solutions(const std::vector<Point>& movers, std::size_t axis,
                                     std::size_t j, Nat target, Point& offset,
                                     std::vector<Point>& out) {
  if (j == movers.size()) {
    if (target == 0) out.push_back(offset);
    return;
  }
  const Point& q = movers[j];
  Point saved = offset;
  for (Nat m = 0;; ++m) {
    enumerate_axis_solutions(movers, axis, j + 1, target, offset, out);
    if (target < q[axis]) break;
    target -= q[axis];
    offset = offset + q;
  }
  offset = saved;
}

}  // namespace detail

/// The (d-1)-dimensional slice of R with coordinate `axis` fixed to `value`.
inline Relation section(const Relation& r, std::size_t axis, Nat value) {
  if (r.dim() < 2) throw DimensionTooSmall("section needs dimension >= 2, got " + std::to_string(r.dim()));
  if (axis >= r.dim()) throw DimensionMismatch(r.dim(), axis + 1);
  std::string name = r.name() + "|x" + std::to_string(axis) + "=" + std::to_string(value);
  const std::size_t d = r.dim() - 1;

  return std::visit(
      [&](const auto& body) -> Relation {
        using B = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<B, Relation::FiniteTable>) {
          if (value > body.bound) throw OutOfBound(axis, value, body.bound);
          std::vector<Point> pts;
          for (const auto& p : body.points)
            if (p[axis] == value) pts.push_back(detail::drop_axis(p, axis));
          return Relation::table(name, d, body.bound, std::move(pts));
        } else if constexpr (std::is_same_v<B, Relation::Semilinear>) {
          std::vector<LinearSet> sets;
          for (const auto& ls : body.sets) {
            if (ls.base()[axis] > value) continue;
            std::vector<Point> movers, fixed;
            for (const auto& q : ls.periods()) (q[axis] > 0 ? movers : fixed).push_back(q);
            std::vector<Point> offsets;
            Point offset = Point::zero(ls.dim());
            detail::enumerate_axis_solutions(movers, axis, 0, value - ls.base()[axis], offset,
                                             offsets);
            std::vector<Point> kept;
            for (const auto& q : fixed) kept.push_back(detail::drop_axis(q, axis));
            for (const auto& off : offsets)
              sets.emplace_back(detail::drop_axis(ls.base() + off, axis), kept);
          }
          return Relation::semilinear(name, d, std::move(sets));
        } else {
          if (value > body.bound) throw OutOfBound(axis, value, body.bound);
          auto pred = body.pred;
          return Relation::oracle(
              name, d, body.bound,
              [pred, axis, value](std::span<const Nat> p) {
                auto full = detail::insert_axis(p, axis, value);
                return pred(full);
              });
        }
      },
      r.body());
}

/// The first `count` primes, 2 first.
inline std::vector<Nat> first_primes(std::size_t count) {
  std::vector<Nat> primes;
  if (count == 0) return primes;
  double n = static_cast<double>(count) + 1;
  std::size_t limit = count < 6 ? 15 : static_cast<std::size_t>(n * (std::log(n) + std::log(std::log(n)))) + 10;
  for (;;) {
    std::vector<bool> composite(limit + 1, false);
    primes.clear();
    for (std::size_t i = 2; i <= limit && primes.size() < count; ++i) {
      if (composite[i]) continue;
      primes.push_back(i);
      for (std::size_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    if (primes.size() == count) return primes;
    limit *= 2;
  }
}

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {
      "squares_times_N", "odd_le_square", "prime_divides", "prime_divides_shifted", "full", "empty"};
  return names;
}

/// Built-in oracle relations. `dim` is only free for full/empty; the others
/// are binary.
inline Relation builtin(const std::string& name, std::size_t dim, Nat bound) {
  auto need_binary = [&] {
    if (dim != 2) throw SpecError("builtin " + name + " is binary, requested dimension " + std::to_string(dim));
  };
  if (name == "full")
    return Relation::oracle(name, dim, bound, [](std::span<const Nat>) { return true; });
  if (name == "empty")
    return Relation::oracle(name, dim, bound, [](std::span<const Nat>) { return false; });
  if (name == "squares_times_N") {
    need_binary();
    return Relation::oracle(name, 2, bound, [](std::span<const Nat> p) {
      auto r = static_cast<Nat>(std::sqrt(static_cast<long double>(p[0])));
      while (r * r > p[0]) --r;
      while ((r + 1) * (r + 1) <= p[0]) ++r;
      return r * r == p[0];
    });
  }
  if (name == "odd_le_square") {
    need_binary();
    return Relation::oracle(name, 2, bound, [](std::span<const Nat> p) {
      return p[1] % 2 == 1 && p[0] <= checked_mul(p[1], p[1]);
    });
  }
  if (name == "prime_divides" || name == "prime_divides_shifted") {
    need_binary();
    auto primes = std::make_shared<const std::vector<Nat>>(first_primes(bound + 1));
    // Row n has minimal period pi_n > n + 1, so rows past v all have period > v.
    DivergenceModulus hint = [](Nat v) { return v; };
    if (name == "prime_divides")
      return Relation::oracle(
          name, 2, bound, [primes](std::span<const Nat> p) { return p[1] % (*primes)[p[0]] == 0; },
          hint);
    return Relation::oracle(
        name, 2, bound,
        [primes](std::span<const Nat> p) {
          return p[1] > p[0] && checked_add(p[1], checked_mul(p[0], p[0])) % (*primes)[p[0]] == 0;
        },
        hint);
  }
  throw SpecError("unknown builtin relation '" + name + "'");
}

}  // namespace pbw
