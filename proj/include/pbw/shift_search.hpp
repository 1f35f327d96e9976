#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

#include "pbw/core.hpp"
#include "pbw/relation.hpp"

namespace pbw {

/// Finds non-s-shiftable corners by scanning prefixes (x0..x_{d-2}) in
/// lexicographic order and testing a whole row of last coordinates at once,
/// 64 corners per machine word.
///
/// Every corner it reports satisfies: all coordinates in [t, corner_bound],
/// and no shift r != 0 with max|r_i| <= s and x + r >= 0 preserves the cube of
/// radius K. corner_bound keeps x + r + z inside the relation's evaluation
/// bound, so table and oracle relations are never queried out of range.
///
/// Results are memoized. An instance is not thread-safe; give each worker its
/// own.
class CornerSearch {
public:
  CornerSearch(Relation r, Nat coord_bound, Nat slack)
      : r_(std::move(r)), coord_bound_(coord_bound) {
    row_max_ = checked_add(coord_bound, slack);
    if (auto b = r_.bound()) row_max_ = std::min(row_max_, *b);
    words_ = row_max_ / 64 + 2;
  }

  const Relation& relation() const { return r_; }

  /// Largest admissible corner coordinate for (s, K); nullopt when even the
  /// origin's shifted cubes leave the evaluation bound.
  std::optional<Nat> corner_bound(Nat s, Nat k) const {
    Nat reach = checked_add(s, k);
    if (reach > row_max_) return std::nullopt;
    return std::min(coord_bound_, row_max_ - reach);
  }

  /// The lexicographically least non-(s,K)-shiftable corner with min >= t.
  std::optional<Point> corner(Nat s, Nat k, Nat t) {
    auto cb = corner_bound(s, k);
    if (!cb || t > *cb) return std::nullopt;
    const std::size_t pd = r_.dim() - 1;
    std::vector<Nat> prefix(pd, t);
    for (;;) {
      const auto& hits = nonshiftable(prefix, s, k);
      auto it = std::lower_bound(hits.begin(), hits.end(), t);
      if (it != hits.end()) {
        std::vector<Nat> c = prefix;
        c.push_back(*it);
        return Point(std::move(c));
      }
      // Odometer, last prefix coordinate fastest.
      std::size_t i = pd;
      while (i > 0 && prefix[i - 1] == *cb) prefix[--i] = t;
      if (i == 0) return std::nullopt;
      ++prefix[i - 1];
    }
  }

  /// Sorted last coordinates j in [0, corner_bound] such that (prefix, j) is
  /// not (s,K)-shiftable.
  const std::vector<Nat>& nonshiftable(const std::vector<Nat>& prefix, Nat s, Nat k) {
    auto& table = masks_[{s, k}];
    auto found = table.find(prefix);
    if (found != table.end()) return found->second;
    return table.emplace(prefix, compute(prefix, s, k)).first->second;
  }

private:
  using Row = std::vector<Nat>;

  const Row& row(const std::vector<Nat>& prefix) {
    auto it = rows_.find(prefix);
    if (it != rows_.end()) return *it->second;
    auto bits = std::make_unique<Row>(words_, 0);
    std::vector<Nat> p = prefix;
    p.push_back(0);
    for (Nat j = 0; j <= row_max_; ++j) {
      p.back() = j;
      if (r_.contains(std::span<const Nat>(p))) (*bits)[j / 64] |= Nat{1} << (j % 64);
    }
    return *rows_.emplace(prefix, std::move(bits)).first->second;
  }

  // 64 bits of the row starting at a possibly negative offset; bits outside
  // the row read as 0.
  Nat window(const Row& row, Int off) const {
    if (off < 0) {
      Nat m = static_cast<Nat>(-off);
      return m >= 64 ? 0 : window(row, 0) << m;
    }
    Nat w = static_cast<Nat>(off) / 64, b = static_cast<Nat>(off) % 64;
    Nat lo = w < row.size() ? row[w] : 0;
    Nat hi = w + 1 < row.size() ? row[w + 1] : 0;
    return b == 0 ? lo : (lo >> b) | (hi << (64 - b));
  }

  struct Shift {
    Int last;  // r_{d-1}
    std::vector<std::pair<const Row*, const Row*>> pairs;  // (x-side, shifted side) per prefix offset
  };

  std::vector<Nat> compute(const std::vector<Nat>& prefix, Nat s, Nat k) {
    const Nat cb = *corner_bound(s, k);
    const std::size_t pd = prefix.size();
    const Int si = static_cast<Int>(s);

    // Prefix offsets z' in [0,K]^(d-1).
    std::vector<std::vector<Nat>> offsets{{}};
    for (std::size_t i = 0; i < pd; ++i) {
      std::vector<std::vector<Nat>> next;
      for (const auto& o : offsets)
        for (Nat z = 0; z <= k; ++z) {
          auto e = o;
          e.push_back(z);
          next.push_back(std::move(e));
        }
      offsets = std::move(next);
    }

    std::vector<Shift> shifts;
    std::vector<Int> rp(pd, -si);
    for (;;) {
      bool valid = true;
      for (std::size_t i = 0; i < pd; ++i)
        if (rp[i] < 0 && static_cast<Nat>(-rp[i]) > prefix[i]) valid = false;
      if (valid) {
        bool prefix_zero = std::all_of(rp.begin(), rp.end(), [](Int v) { return v == 0; });
        for (Int rl = -si; rl <= si; ++rl) {
          if (prefix_zero && rl == 0) continue;
          Shift sh{rl, {}};
          for (const auto& z : offsets) {
            std::vector<Nat> a(pd), b(pd);
            for (std::size_t i = 0; i < pd; ++i) {
              a[i] = prefix[i] + z[i];
              b[i] = static_cast<Nat>(static_cast<Int>(a[i]) + rp[i]);
            }
            const Row* ra = &row(a);
            const Row* rb = &row(b);
            sh.pairs.emplace_back(ra, rb);
          }
          shifts.push_back(std::move(sh));
        }
      }
      std::size_t i = pd;
      while (i > 0 && rp[i - 1] == si) rp[--i] = -si;
      if (i == 0) break;
      ++rp[i - 1];
    }

    std::vector<Nat> out;
    for (Nat w = 0; w * 64 <= cb; ++w) {
      const Nat base = w * 64;
      Nat cand = cb - base >= 63 ? ~Nat{0} : (Nat{1} << (cb - base + 1)) - 1;
      for (const auto& sh : shifts) {
        Nat same = ~Nat{0};
        for (const auto& [ra, rb] : sh.pairs)
          for (Nat z = 0; z <= k && same; ++z)
            same &= ~(window(*ra, static_cast<Int>(base + z)) ^ window(*rb, static_cast<Int>(base + z) + sh.last));
        if (sh.last < 0) {
          Nat m = static_cast<Nat>(-sh.last);
          // Corners j < m would move below zero.
          if (base < m) same &= m - base >= 64 ? 0 : ~((Nat{1} << (m - base)) - 1);
        }
        cand &= ~same;
        if (!cand) break;
      }
      for (Nat b = 0; b < 64; ++b)
        if ((cand >> b) & 1) out.push_back(base + b);
    }
    return out;
  }

  Relation r_;
  Nat coord_bound_;
  Nat row_max_;
  Nat words_;
  std::map<std::vector<Nat>, std::unique_ptr<Row>> rows_;
  std::map<std::pair<Nat, Nat>, std::map<std::vector<Nat>, std::vector<Nat>>> masks_;
};

}  // namespace pbw
