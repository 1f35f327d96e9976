#pragma once

#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "pbw/cube.hpp"
#include "pbw/periodicity.hpp"
#include "pbw/relation.hpp"
#include "pbw/shift_search.hpp"
#include "pbw/verdict.hpp"

namespace pbw {

inline bool cubes_equal(const Relation& r, const Point& x, const Point& y, Nat k) {
  return cube_at(r, x, k) == cube_at(r, y, k);
}

/// Can (x, k) be shifted by r?
inline bool shifted_cube_equal(const Relation& r, const ShiftVector& shift, Nat k, const Point& x) {
  return cubes_equal(r, x, shifted(x, shift), k);
}

/// Some r != 0 with max|r_i| <= s and x + r >= 0 shifts (x, k).
inline bool s_shiftable(const Relation& r, Nat s, Nat k, const Point& x) {
  if (s == 0) throw SpecError("s must be >= 1");
  const std::size_t d = x.dim();
  const Int si = static_cast<Int>(s);
  const Cube here = cube_at(r, x, k);
  std::vector<Int> shift(d, -si);
  for (;;) {
    bool zero = true, valid = true;
    std::vector<Nat> y(d);
    for (std::size_t i = 0; i < d; ++i) {
      zero = zero && shift[i] == 0;
      Int v = static_cast<Int>(x[i]) + shift[i];
      if (v < 0) valid = false;
      else y[i] = static_cast<Nat>(v);
    }
    if (!zero && valid && cube_at(r, Point(y), k) == here) return true;
    std::size_t i = d;
    while (i > 0 && shift[i - 1] == si) shift[--i] = -si;
    if (i == 0) return false;
    ++shift[i - 1];
  }
}

inline CornerSearch make_search(const Relation& r, const Budget& b) {
  return CornerSearch(r, b.coord_bound, checked_add(b.max_s, b.max_k));
}

/// Lexicographically least corner c with min(c) >= t and every coordinate
/// within budget such that (c, K) is not s-shiftable.
inline Verdict3<Point> find_c(CornerSearch& search, Nat s, Nat t, Nat k, const Budget& budget) {
  if (s == 0) throw SpecError("s must be >= 1");
  if (auto c = search.corner(s, k, t)) return Verdict3<Point>::holds(*c);
  return Verdict3<Point>::unknown(budget, "no corner with min >= " + std::to_string(t) + " for s=" +
                                              std::to_string(s) + " K=" + std::to_string(k));
}

inline Verdict3<Point> find_c(const Relation& r, Nat s, Nat t, Nat k, const Budget& budget) {
  auto search = make_search(r, budget);
  return find_c(search, s, t, k, budget);
}

struct KWitness {
  Nat k;
  std::vector<std::pair<Nat, Point>> corners;  // (sampled t, c(R,s,t))
};

/// Least K <= max_k such that every sampled depth t has a non-s-shiftable
/// corner of radius K. Holds is empirical: only the sampled t are checked.
inline Verdict3<KWitness> find_k(CornerSearch& search, Nat s, const Budget& budget) {
  budget.validate();
  for (Nat k = 0; k <= budget.max_k; ++k) {
    KWitness w{k, {}};
    bool all = true;
    for (Nat t : budget.samples()) {
      auto c = search.corner(s, k, t);
      if (!c) {
        all = false;
        break;
      }
      w.corners.emplace_back(t, *c);
    }
    if (all) return Verdict3<KWitness>::holds(std::move(w));
  }
  return Verdict3<KWitness>::unknown(budget, "no K <= " + std::to_string(budget.max_k) + " for s=" + std::to_string(s));
}

inline Verdict3<KWitness> find_k(const Relation& r, Nat s, const Budget& budget) {
  auto search = make_search(r, budget);
  return find_k(search, s, budget);
}

/// find_c at the K chosen by find_k.
inline Verdict3<Point> find_c(const Relation& r, Nat s, Nat t, const Budget& budget) {
  auto search = make_search(r, budget);
  auto k = find_k(search, s, budget);
  if (!k.is_holds()) return Verdict3<Point>::unknown(budget, "find_k: " + k.note());
  return find_c(search, s, t, k.value().k, budget);
}

enum class CriterionProperty { SectionNotDefinable, LocalNonShiftable, Aperiodic };

inline const char* to_string(CriterionProperty p) {
  switch (p) {
    case CriterionProperty::SectionNotDefinable: return "a";
    case CriterionProperty::LocalNonShiftable: return "b";
    case CriterionProperty::Aperiodic: return "aperiodic";
  }
  return "?";
}

struct Evidence {
  CriterionProperty property = CriterionProperty::Aperiodic;
  // property a
  std::size_t axis = 0;
  Nat value = 0;
  std::shared_ptr<const Evidence> inner;
  // property b
  std::vector<std::pair<Nat, KWitness>> per_s;
  // dimension 1
  std::optional<PeriodicityCertificate> certificate;

  std::string report(const std::string& indent = "") const {
    std::ostringstream os;
    os << indent << "property=" << to_string(property) << "\n";
    switch (property) {
      case CriterionProperty::SectionNotDefinable:
        os << indent << "section=(" << axis << "," << value << ")\n";
        if (inner) os << inner->report(indent + "  ");
        break;
      case CriterionProperty::LocalNonShiftable:
        for (const auto& [s, w] : per_s) {
          os << indent << "s=" << s << " K=" << w.k << " corners=";
          for (std::size_t i = 0; i < w.corners.size(); ++i)
            os << (i ? " " : "") << "t" << w.corners[i].first << ":" << w.corners[i].second;
          os << "\n";
        }
        break;
      case CriterionProperty::Aperiodic:
        if (certificate) os << indent << certificate->str() << "\n";
        break;
    }
    return os.str();
  }
};

/// Sections (axis, value) in the order the section search visits them:
/// lexicographic in (axis, value), value <= max_section.
inline std::vector<std::pair<std::size_t, Nat>> section_order(std::size_t d, Nat max_section) {
  std::vector<std::pair<std::size_t, Nat>> out;
  for (std::size_t i = 0; i < d; ++i)
    for (Nat j = 0; j <= max_section; ++j) out.emplace_back(i, j);
  return out;
}

inline Budget reduced(const Budget& b) {
  Budget r = b;
  r.max_section = std::max<Nat>(1, b.max_section / 2);
  return r;
}

/// Three-valued test of non-definability.
///
/// Holds when the budgeted search exhibits a non-definable section
/// (property a) or, for every s <= max_s, a cube radius K with
/// non-shiftable corners at every sampled depth (property b). Only
/// semilinear input yields Fails; exhausted budgets yield Unknown.
inline Verdict3<Evidence> muchnik_test(const Relation& r, const Budget& budget) {
  budget.validate();
  if (r.kind() == RelationKind::Semilinear) return Verdict3<Evidence>::fails("semilinear, hence definable");

  if (r.dim() == 1) {
    Nat w = budget.window;
    if (auto b = r.bound()) w = std::min(w, *b);
    auto cert = minimal_period(windowed(r, w));
    if (cert.verdict == PeriodicityVerdict::NotPeriodic) {
      Evidence e;
      e.property = CriterionProperty::Aperiodic;
      e.certificate = cert;
      return Verdict3<Evidence>::holds(std::move(e));
    }
    return Verdict3<Evidence>::unknown(budget, "empirically periodic: " + cert.str());
  }

  for (auto [i, j] : section_order(r.dim(), budget.max_section)) {
    if (auto b = r.bound(); b && j > *b) continue;
    auto inner = muchnik_test(section(r, i, j), reduced(budget));
    if (inner.is_holds()) {
      Evidence e;
      e.property = CriterionProperty::SectionNotDefinable;
      e.axis = i;
      e.value = j;
      e.inner = std::make_shared<const Evidence>(inner.value());
      return Verdict3<Evidence>::holds(std::move(e));
    }
  }

  auto search = make_search(r, budget);
  Evidence e;
  e.property = CriterionProperty::LocalNonShiftable;
  for (Nat s = 1; s <= budget.max_s; ++s) {
    auto k = find_k(search, s, budget);
    if (!k.is_holds()) return Verdict3<Evidence>::unknown(budget, "property b undecided: " + k.note());
    e.per_s.emplace_back(s, k.value());
  }
  return Verdict3<Evidence>::holds(std::move(e));
}

}  // namespace pbw
