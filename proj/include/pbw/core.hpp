#pragma once

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pbw {

using Nat = std::uint64_t;
using Int = std::int64_t;

// Error hierarchy. Every failure mode named by the library is a distinct type
// so callers (and the CLI exit-code mapping) can tell them apart.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class OutOfBound : public Error {
public:
  OutOfBound(std::size_t axis, Nat coordinate, Nat bound)
      : Error("coordinate " + std::to_string(coordinate) + " on axis " + std::to_string(axis) +
              " exceeds evaluation bound " + std::to_string(bound)),
        axis_(axis), coordinate_(coordinate), bound_(bound) {}
  std::size_t axis() const { return axis_; }
  Nat coordinate() const { return coordinate_; }
  Nat bound() const { return bound_; }

private:
  std::size_t axis_;
  Nat coordinate_;
  Nat bound_;
};

class DimensionMismatch : public Error {
public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " +
              std::to_string(got)) {}
};

class DimensionTooSmall : public Error {
public:
  using Error::Error;
};
class NegativeShiftTarget : public Error {
public:
  using Error::Error;
};
class OverflowError : public Error {
public:
  using Error::Error;
};
class SpecError : public Error {
public:
  using Error::Error;
};
class WindowTooSmall : public Error {
public:
  using Error::Error;
};
class EmptyResult : public Error {
public:
  using Error::Error;
};
class DefinableInput : public Error {
public:
  using Error::Error;
};

class SyntaxError : public Error {
public:
  SyntaxError(std::size_t position, const std::string& what)
      : Error("syntax error at " + std::to_string(position) + ": " + what), position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class UnboundVariable : public Error {
public:
  explicit UnboundVariable(const std::string& name)
      : Error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

inline Nat checked_add(Nat a, Nat b) {
  Nat r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("natural overflow in " + std::to_string(a) + " + " + std::to_string(b));
  return r;
}

inline Nat checked_mul(Nat a, Nat b) {
  Nat r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("natural overflow in " + std::to_string(a) + " * " + std::to_string(b));
  return r;
}

inline Nat checked_pow(Nat base, std::size_t exp) {
  Nat r = 1;
  for (std::size_t i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

/// A point of N^d.
class Point {
public:
  Point() = default;
  explicit Point(std::vector<Nat> coords) : coords_(std::move(coords)) {}
  Point(std::initializer_list<Nat> coords) : coords_(coords) {}

  static Point zero(std::size_t dim) { return Point(std::vector<Nat>(dim, 0)); }

  std::size_t dim() const { return coords_.size(); }
  Nat operator[](std::size_t i) const { return coords_[i]; }
  Nat& operator[](std::size_t i) { return coords_[i]; }
  std::span<const Nat> coords() const { return coords_; }
  const std::vector<Nat>& vec() const { return coords_; }

  Nat min() const {
    Nat m = coords_.empty() ? 0 : coords_[0];
    for (Nat c : coords_) m = c < m ? c : m;
    return m;
  }
  Nat max() const {
    Nat m = 0;
    for (Nat c : coords_) m = c > m ? c : m;
    return m;
  }

  /// Componentwise sum.
  Point operator+(const Point& o) const {
    if (o.dim() != dim()) throw DimensionMismatch(dim(), o.dim());
    Point r = *this;
    for (std::size_t i = 0; i < dim(); ++i) r.coords_[i] = checked_add(r.coords_[i], o.coords_[i]);
    return r;
  }

  friend bool operator==(const Point&, const Point&) = default;
  // Lexicographic, coordinate 0 most significant.
  friend auto operator<=>(const Point&, const Point&) = default;

  std::string str() const {
    std::ostringstream os;
    os << *this;
    return os.str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Point& p) {
    os << '(';
    for (std::size_t i = 0; i < p.dim(); ++i) os << (i ? "," : "") << p.coords_[i];
    return os << ')';
  }

private:
  std::vector<Nat> coords_;
};

/// Sum of coordinates, aborting on overflow.
inline Nat norm(const Point& p) {
  Nat s = 0;
  for (Nat c : p.coords()) s = checked_add(s, c);
  return s;
}

/// A translation of Z^d.
class ShiftVector {
public:
  ShiftVector() = default;
  explicit ShiftVector(std::vector<Int> deltas) : deltas_(std::move(deltas)) {}
  ShiftVector(std::initializer_list<Int> deltas) : deltas_(deltas) {}

  std::size_t dim() const { return deltas_.size(); }
  Int operator[](std::size_t i) const { return deltas_[i]; }
  std::span<const Int> deltas() const { return deltas_; }

  bool is_zero() const {
    for (Int d : deltas_)
      if (d != 0) return false;
    return true;
  }
  Nat max_abs() const {
    Nat m = 0;
    for (Int d : deltas_) {
      Nat a = d < 0 ? static_cast<Nat>(-(d + 1)) + 1 : static_cast<Nat>(d);
      m = a > m ? a : m;
    }
    return m;
  }

  friend bool operator==(const ShiftVector&, const ShiftVector&) = default;

  friend std::ostream& operator<<(std::ostream& os, const ShiftVector& r) {
    os << '(';
    for (std::size_t i = 0; i < r.dim(); ++i) os << (i ? "," : "") << r.deltas_[i];
    return os << ')';
  }

private:
  std::vector<Int> deltas_;
};

/// x + r, or NegativeShiftTarget when a coordinate would drop below zero.
inline Point shifted(const Point& x, const ShiftVector& r) {
  if (x.dim() != r.dim()) throw DimensionMismatch(x.dim(), r.dim());
  std::vector<Nat> out(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) {
    if (r[i] < 0) {
      Nat back = static_cast<Nat>(-(r[i] + 1)) + 1;
      if (back > x[i]) {
        std::ostringstream os;
        os << "shift " << r << " moves " << x << " outside N^" << x.dim();
        throw NegativeShiftTarget(os.str());
      }
      out[i] = x[i] - back;
    } else {
      out[i] = checked_add(x[i], static_cast<Nat>(r[i]));
    }
  }
  return Point(std::move(out));
}

}  // namespace pbw
