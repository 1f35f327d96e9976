#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "pbw/relation.hpp"
#include "pbw/verdict.hpp"

namespace pbw {

/// {n | n < t and prefix[n]} union {n >= t | residue[(n - t) mod p]}.
struct ExactPeriodic {
  Nat threshold;
  Nat period;
  std::vector<bool> prefix;
  std::vector<bool> residue;

  static ExactPeriodic make(Nat t, Nat p, std::vector<bool> prefix, std::vector<bool> residue) {
    if (p == 0) throw SpecError("period must be >= 1");
    if (prefix.size() != t || residue.size() != p)
      throw SpecError("prefix/residue lengths must equal threshold/period");
    return {t, p, std::move(prefix), std::move(residue)};
  }

  bool contains(Nat n) const { return n < threshold ? prefix[n] : residue[(n - threshold) % period]; }
};

/// The membership bits of a 1-D set on [0,B].
struct Windowed {
  std::vector<bool> bits;
  std::optional<Relation> source;

  Nat window() const { return bits.size() - 1; }
  bool contains(Nat n) const {
    if (n > window()) throw OutOfBound(0, n, window());
    return bits[n];
  }
};

using Set1D = std::variant<ExactPeriodic, Windowed>;

inline Windowed windowed(const Relation& r, Nat window) {
  if (r.dim() != 1) throw DimensionMismatch(1, r.dim());
  Windowed w{std::vector<bool>(window + 1), r};
  for (Nat n = 0; n <= window; ++n) w.bits[n] = r.contains(Point{n});
  return w;
}

/// Members beyond the window are dropped.
inline Windowed windowed(const std::vector<Nat>& values, Nat window) {
  Windowed w{std::vector<bool>(window + 1), std::nullopt};
  for (Nat v : values)
    if (v <= window) w.bits[v] = true;
  return w;
}

inline Windowed windowed(const ExactPeriodic& s, Nat window) {
  Windowed w{std::vector<bool>(window + 1), std::nullopt};
  for (Nat n = 0; n <= window; ++n) w.bits[n] = s.contains(n);
  return w;
}

inline bool set_contains(const Set1D& s, Nat n) {
  return std::visit([n](const auto& x) { return x.contains(n); }, s);
}

inline std::vector<Nat> members(const Set1D& s, Nat upto) {
  std::vector<Nat> out;
  for (Nat n = 0; n <= upto; ++n)
    if (set_contains(s, n)) out.push_back(n);
  return out;
}

enum class PeriodicityVerdict { Proven, Empirical, NotPeriodic };

inline const char* to_string(PeriodicityVerdict v) {
  switch (v) {
    case PeriodicityVerdict::Proven: return "Proven";
    case PeriodicityVerdict::Empirical: return "Empirical";
    case PeriodicityVerdict::NotPeriodic: return "NotPeriodic";
  }
  return "?";
}

struct PeriodicityCertificate {
  std::optional<Nat> threshold;
  std::optional<Nat> period;
  PeriodicityVerdict verdict;
  std::optional<Nat> window;  // nullopt when exact

  std::string str() const {
    std::ostringstream os;
    os << "UP t=";
    threshold ? os << *threshold : os << '-';
    os << " p=";
    period ? os << *period : os << '-';
    os << " verdict=" << to_string(verdict) << " B=";
    window ? os << *window : os << "exact";
    return os.str();
  }

  friend bool operator==(const PeriodicityCertificate&, const PeriodicityCertificate&) = default;
};

namespace detail {

// Smallest t such that bits agree at distance p on [t, B]; nullopt when
// p > B.
inline std::optional<Nat> window_threshold(const std::vector<bool>& bits, Nat p) {
  const Nat B = bits.size() - 1;
  if (p > B) return std::nullopt;
  for (Nat n = B - p + 1; n-- > 0;)
    if (bits[n] != bits[n + p]) return n + 1;
  return 0;
}

// Is the periodic part of s also q-periodic?
inline bool tail_has_period(const ExactPeriodic& s, Nat q) {
  for (Nat i = 0; i < s.period; ++i)
    if (s.residue[i] != s.residue[(i + q) % s.period]) return false;
  return true;
}

inline Nat exact_threshold(const ExactPeriodic& s, Nat q) {
  for (Nat n = s.threshold; n-- > 0;)
    if (s.contains(n) != s.contains(n + q)) return n + 1;
  return 0;
}

}  // namespace detail

/// Minimal (threshold, period). Exact for ExactPeriodic inputs; for windows,
/// the smallest p <= B/3 admitting a threshold t <= B/3, else NotPeriodic.
inline PeriodicityCertificate minimal_period(const Set1D& s) {
  if (auto* e = std::get_if<ExactPeriodic>(&s)) {
    for (Nat q = 1; q <= e->period; ++q)
      if (detail::tail_has_period(*e, q))
        return {detail::exact_threshold(*e, q), q, PeriodicityVerdict::Proven, std::nullopt};
  }
  const auto& w = std::get<Windowed>(s);
  const Nat B = w.window();
  if (B < 9) throw WindowTooSmall("window " + std::to_string(B) + " is below the minimum of 9");
  for (Nat p = 1; p <= B / 3; ++p) {
    auto t = detail::window_threshold(w.bits, p);
    if (t && *t <= B / 3) return {*t, p, PeriodicityVerdict::Empirical, B};
  }
  return {std::nullopt, std::nullopt, PeriodicityVerdict::NotPeriodic, B};
}

/// Is S ultimately p-periodic? Holds carries a threshold.
inline Verdict3<Nat> is_ultimately_p_periodic(const Set1D& s, Nat p, Nat window) {
  if (p == 0) throw SpecError("period must be >= 1");
  if (auto* e = std::get_if<ExactPeriodic>(&s)) {
    if (detail::tail_has_period(*e, p)) return Verdict3<Nat>::holds(detail::exact_threshold(*e, p));
    return Verdict3<Nat>::fails("tail is not " + std::to_string(p) + "-periodic");
  }
  const auto& w = std::get<Windowed>(s);
  const Nat B = std::min(window, w.window());
  std::vector<bool> bits(w.bits.begin(), w.bits.begin() + static_cast<std::ptrdiff_t>(B + 1));
  Budget budget;
  budget.window = B;
  auto t = detail::window_threshold(bits, p);
  if (!t) return Verdict3<Nat>::unknown(budget, "period exceeds the window");
  if (*t <= B / 3) return Verdict3<Nat>::holds(*t);
  if (*t == B - p + 1) return Verdict3<Nat>::fails("violation at the window edge n=" + std::to_string(B - p));
  return Verdict3<Nat>::unknown(budget, "last violation at n=" + std::to_string(*t - 1));
}

/// Row i of a binary relation, {m | (i, m) in F}, on [0,B].
inline Windowed row(const Relation& f, Nat i, Nat window) {
  if (f.dim() != 2) throw DimensionMismatch(2, f.dim());
  Windowed w{std::vector<bool>(window + 1), std::nullopt};
  for (Nat m = 0; m <= window; ++m) w.bits[m] = f.contains(Point{i, m});
  return w;
}

/// The least q such that every row i <= n is ultimately q-periodic on the
/// window. This is a common eventual period, not an lcm of minimal periods,
/// although the two coincide.
inline Verdict3<Nat> rho(const Relation& f, Nat n, Nat window) {
  std::vector<Windowed> rows;
  for (Nat i = 0; i <= n; ++i) rows.push_back(row(f, i, window));
  for (Nat q = 1; q <= window / 3; ++q) {
    bool ok = true;
    for (const auto& r : rows)
      if (!is_ultimately_p_periodic(r, q, window).is_holds()) {
        ok = false;
        break;
      }
    if (ok) return Verdict3<Nat>::holds(q);
  }
  Budget budget;
  budget.window = window;
  return Verdict3<Nat>::unknown(budget, "no common period <= " + std::to_string(window / 3) + " for rows 0.." +
                                            std::to_string(n));
}

enum class Provenance { Relation1D, SectionRecursion, DirectNorms, LcmConstruction, LcmOverS };

inline const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Relation1D: return "Relation1D";
    case Provenance::SectionRecursion: return "SectionRecursion";
    case Provenance::DirectNorms: return "DirectNorms";
    case Provenance::LcmConstruction: return "LcmConstruction";
    case Provenance::LcmOverS: return "LcmOverS";
  }
  return "?";
}

struct WitnessStream {
  std::vector<Nat> values;
  Provenance provenance;
  std::string exhausted_at;  // empty when the requested count was reached

  bool strictly_increasing() const {
    for (std::size_t i = 1; i < values.size(); ++i)
      if (values[i] <= values[i - 1]) return false;
    return true;
  }
};

/// Every strict increase at least doubles the previous value.
inline bool increases_double(const std::vector<Nat>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] != v[i - 1] && (v[i] < v[i - 1] || v[i] - v[i - 1] < v[i - 1])) return false;
  return true;
}

/// Distinct values of rho(0), rho(1), ... in order of appearance.
inline WitnessStream epsilon_witness(const Relation& f, Nat count, Nat window, Nat max_rows = 64) {
  WitnessStream out{{}, Provenance::LcmConstruction, {}};
  if (auto b = f.bound()) max_rows = std::min(max_rows, *b);
  for (Nat n = 0; out.values.size() < count; ++n) {
    if (n > max_rows) {
      out.exhausted_at = "rows exhausted at n=" + std::to_string(max_rows);
      break;
    }
    auto q = rho(f, n, window);
    if (!q.is_holds()) {
      out.exhausted_at = "rho(" + std::to_string(n) + ") Unknown: " + q.note();
      break;
    }
    if (out.values.empty() || q.value() != out.values.back()) out.values.push_back(q.value());
  }
  return out;
}

/// Tunable thresholds for the expanding check.
struct ExpandingParams {
  Nat windows = 3;
  Nat repetitions = 10;
};

/// Gaps are attributed to the dyadic window (B/2^(j+1), B/2^j] holding their
/// right end. Holds if the last `windows` nonempty windows have strictly
/// increasing gap maxima; Fails if the largest gap recurs `repetitions` times
/// and still occurs in the last nonempty window.
inline Verdict3<std::monostate> is_expanding(const Set1D& s, Nat window, ExpandingParams params = {}) {
  if (auto* w = std::get_if<Windowed>(&s)) window = std::min(window, w->window());
  Budget budget;
  budget.window = window;
  auto m = members(s, window);
  if (m.size() < 2) return Verdict3<>::unknown(budget, "fewer than two members");

  std::vector<Nat> maxima;  // one per nonempty window, left to right
  std::vector<Nat> bounds;  // dyadic cut points, increasing
  for (Nat b = window; b > 0; b /= 2) bounds.push_back(b);
  std::reverse(bounds.begin(), bounds.end());
  Nat gmax = 0, gcount = 0;
  std::size_t k = 1;
  for (std::size_t bi = 0; bi < bounds.size(); ++bi) {
    Nat hi = bounds[bi], best = 0;
    bool any = false;
    for (; k < m.size() && m[k] <= hi; ++k) {
      Nat g = m[k] - m[k - 1];
      best = std::max(best, g);
      any = true;
      if (g > gmax) gmax = g, gcount = 0;
      if (g == gmax) ++gcount;
    }
    if (any) maxima.push_back(best);
  }
  if (maxima.size() >= params.windows) {
    bool rising = true;
    for (std::size_t i = maxima.size() - params.windows + 1; i < maxima.size(); ++i)
      if (maxima[i] <= maxima[i - 1]) rising = false;
    if (rising) return Verdict3<>::holds({});
  }
  if (gcount >= params.repetitions && maxima.back() == gmax)
    return Verdict3<>::fails("gaps bounded by " + std::to_string(gmax));
  return Verdict3<>::unknown(budget, "gap growth inconclusive");
}

}  // namespace pbw
