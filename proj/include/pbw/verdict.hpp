#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pbw/core.hpp"

namespace pbw {

/// Finite stand-ins for the unbounded quantifiers of the criterion and the
/// witness construction. Every Unknown verdict carries the budget that
/// produced it.
struct Budget {
  Nat max_k = 4;          // largest cube radius tried by find_k
  Nat max_s = 8;          // shift bounds s = 1..max_s
  Nat max_t = 16;         // depth thresholds sampled by find_k
  Nat coord_bound = 1000; // corners have every coordinate <= coord_bound
  Nat window = 10000;     // 1-D periodicity window [0, window]
  Nat max_section = 16;   // section values j explored per axis
  Nat theta = 3;          // recurrence count standing in for "infinitely often"
  Nat t_window = 30;      // indices t in [0, t_window] explored by the pipeline
  std::vector<Nat> t_samples;  // empty: {0, max_t/4, max_t/2, max_t}

  std::vector<Nat> samples() const {
    std::vector<Nat> out = t_samples;
    if (out.empty()) out = {0, max_t / 4, max_t / 2, max_t};
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void validate() const {
    auto need = [](Nat v, const char* name) {
      if (v < 1) throw SpecError(std::string("budget field ") + name + " must be >= 1");
    };
    need(max_k, "max_k");
    need(max_s, "max_s");
    need(max_t, "max_t");
    need(coord_bound, "coord_bound");
    need(window, "window");
    need(max_section, "max_section");
    need(theta, "theta");
    need(t_window, "t_window");
  }

  std::string str() const {
    std::ostringstream os;
    os << "max_k=" << max_k << " max_s=" << max_s << " max_t=" << max_t
       << " coord_bound=" << coord_bound << " window=" << window << " max_section=" << max_section
       << " theta=" << theta << " t_window=" << t_window << " t_samples=";
    auto s = samples();
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    return os.str();
  }

  friend bool operator==(const Budget&, const Budget&) = default;
};

enum class VerdictKind { Holds, Fails, Unknown };

inline const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Holds: return "Holds";
    case VerdictKind::Fails: return "Fails";
    case VerdictKind::Unknown: return "Unknown";
  }
  return "?";
}

/// Holds(T) / Fails / Unknown(budget): the result of every semi-decidable
/// search in the library.
template <class T = std::monostate>
class Verdict3 {
public:
  static Verdict3 holds(T value) { return Verdict3(VerdictKind::Holds, std::move(value), {}, {}); }
  static Verdict3 fails(std::string note = {}) {
    return Verdict3(VerdictKind::Fails, std::nullopt, {}, std::move(note));
  }
  static Verdict3 unknown(Budget budget, std::string note = {}) {
    return Verdict3(VerdictKind::Unknown, std::nullopt, std::move(budget), std::move(note));
  }

  VerdictKind kind() const { return kind_; }
  bool is_holds() const { return kind_ == VerdictKind::Holds; }
  bool is_fails() const { return kind_ == VerdictKind::Fails; }
  bool is_unknown() const { return kind_ == VerdictKind::Unknown; }

  const T& value() const {
    if (!value_) throw Error(std::string("no value in a ") + to_string(kind_) + " verdict");
    return *value_;
  }
  const std::optional<Budget>& budget() const { return budget_; }
  const std::string& note() const { return note_; }

private:
  Verdict3(VerdictKind k, std::optional<T> v, std::optional<Budget> b, std::string note)
      : kind_(k), value_(std::move(v)), budget_(std::move(b)), note_(std::move(note)) {}

  VerdictKind kind_;
  std::optional<T> value_;
  std::optional<Budget> budget_;
  std::string note_;
};

}  // namespace pbw
