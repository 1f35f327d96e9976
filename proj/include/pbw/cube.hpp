#pragma once

#include <string>
#include <vector>

#include "pbw/core.hpp"
#include "pbw/relation.hpp"

namespace pbw {

/// The membership pattern of R on x + {0..k}^d, stored as a bitset indexed by
/// code(y) = sum y_i (k+1)^(d-1-i).
class Cube {
public:
  Cube(std::size_t dim, Nat radius) : dim_(dim), radius_(radius) {
    size_ = checked_pow(radius + 1, dim);
    words_.assign((size_ + 63) / 64, 0);
  }

  std::size_t dim() const { return dim_; }
  Nat radius() const { return radius_; }
  Nat size() const { return size_; }

  Nat code(const Point& y) const {
    if (y.dim() != dim_) throw DimensionMismatch(dim_, y.dim());
    Nat c = 0;
    for (std::size_t i = 0; i < dim_; ++i) {
      if (y[i] > radius_) throw OutOfBound(i, y[i], radius_);
      c = c * (radius_ + 1) + y[i];
    }
    return c;
  }

  Point decode(Nat c) const {
    std::vector<Nat> y(dim_);
    for (std::size_t i = dim_; i-- > 0;) {
      y[i] = c % (radius_ + 1);
      c /= radius_ + 1;
    }
    return Point(std::move(y));
  }

  bool test(Nat c) const { return (words_[c / 64] >> (c % 64)) & 1; }
  void set(Nat c) { words_[c / 64] |= Nat{1} << (c % 64); }
  bool contains(const Point& y) const { return test(code(y)); }

  bool empty() const {
    for (Nat w : words_)
      if (w) return false;
    return true;
  }

  std::vector<Point> members() const {
    std::vector<Point> out;
    for (Nat c = 0; c < size_; ++c)
      if (test(c)) out.push_back(decode(c));
    return out;
  }

  /// The same pattern seen through a smaller box {0..k'}^d.
  Cube restrict(Nat k) const {
    if (k > radius_) throw OutOfBound(0, k, radius_);
    Cube out(dim_, k);
    for (Nat c = 0; c < out.size_; ++c)
      if (contains(out.decode(c))) out.set(c);
    return out;
  }

  /// The bitset read as the number sum 2^code, in lowercase hex.
  std::string hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (Nat nib = 0; nib * 4 < size_; ++nib) {
      Nat v = 0;
      for (Nat b = 0; b < 4; ++b) {
        Nat c = nib * 4 + b;
        if (c < size_ && test(c)) v |= Nat{1} << b;
      }
      s.push_back(digits[v]);
    }
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (s.empty()) s = "0";
    return {s.rbegin(), s.rend()};
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (const auto& p : members()) {
      if (!first) s += ",";
      s += p.str();
      first = false;
    }
    return s + "}";
  }

  friend bool operator==(const Cube&, const Cube&) = default;
  friend auto operator<=>(const Cube&, const Cube&) = default;

private:
  std::size_t dim_;
  Nat radius_;
  Nat size_;
  std::vector<Nat> words_;
};

inline Cube cube_at(const Relation& r, const Point& x, Nat k) {
  if (x.dim() != r.dim()) throw DimensionMismatch(r.dim(), x.dim());
  Cube cube(r.dim(), k);
  std::vector<Nat> p(x.dim());
  for (Nat c = 0; c < cube.size(); ++c) {
    Nat rest = c;
    for (std::size_t i = x.dim(); i-- > 0;) {
      p[i] = checked_add(x[i], rest % (k + 1));
      rest /= k + 1;
    }
    if (r.contains(std::span<const Nat>(p))) cube.set(c);
  }
  return cube;
}

}  // namespace pbw
