#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pbw/core.hpp"
#include "pbw/relation.hpp"

namespace pbw {

/// f : N -> N with f(t) -> infinity. The modulus maps v to a horizon H such
/// that f(t) > v for every t > H; nullopt when it cannot certify one.
struct DivergentFunction {
  std::function<Nat(Nat)> eval;
  std::function<std::optional<Nat>(Nat)> modulus;  // may be empty
};

enum class Membership { Out, Tentative, In };

inline const char* to_string(Membership m) {
  switch (m) {
    case Membership::Out: return "out";
    case Membership::Tentative: return "tentative";
    case Membership::In: return "in";
  }
  return "?";
}

/// Status of every t in [0,B] in T_0 = N, T_1, ..., T_d, where T_j keeps
/// t in T_{j-1} whose f_{j-1} value is below that of every later element of
/// T_{j-1}. A status is In or Out only when the window (with the modulus)
/// settles every comparison the definition quantifies over.
inline std::vector<std::vector<Membership>> restriction_levels(const std::vector<DivergentFunction>& fs, Nat window) {
  std::vector<std::vector<Membership>> levels;
  levels.emplace_back(window + 1, Membership::In);
  for (const auto& f : fs) {
    const auto& prev = levels.back();
    std::vector<Nat> v(window + 1);
    for (Nat t = 0; t <= window; ++t)
      if (prev[t] != Membership::Out) v[t] = f.eval(t);
    std::vector<Membership> next(window + 1, Membership::Out);
    for (Nat t = 0; t <= window; ++t) {
      if (prev[t] == Membership::Out) continue;
      std::optional<Nat> horizon;
      if (f.modulus) horizon = f.modulus(v[t]);
      Nat limit = horizon ? std::min(*horizon, window) : window;
      bool out = false, doubtful = false;
      for (Nat u = t + 1; u <= limit && !out; ++u) {
        if (prev[u] == Membership::Out || v[u] > v[t]) continue;
        if (prev[u] == Membership::In) out = true;
        else doubtful = true;
      }
      if (out) continue;
      bool settled;
      if (f.modulus) settled = horizon && *horizon <= window;
      else settled = window >= 2 * t;
      next[t] = (doubtful || !settled || prev[t] == Membership::Tentative) ? Membership::Tentative : Membership::In;
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

/// The confirmed members of T on [0,B]; every f is strictly increasing on it.
inline std::vector<Nat> increasing_restriction(const std::vector<DivergentFunction>& fs, Nat window) {
  auto levels = restriction_levels(fs, window);
  std::vector<Nat> out;
  for (Nat t = 0; t <= window; ++t)
    if (levels.back()[t] == Membership::In) out.push_back(t);
  if (out.empty()) throw EmptyResult("no index of [0," + std::to_string(window) + "] is confirmed in T");
  return out;
}

/// n -> m * n with 0 < m <= 10 and n = m mod 10.
inline DivergentFunction residue_times_n() {
  return {[](Nat n) { return (n % 10 == 0 ? 10 : n % 10) * n; }, [](Nat v) -> std::optional<Nat> { return v; }};
}

/// n -> sum of the primes <= n.
inline DivergentFunction prime_sum() {
  auto eval = [](Nat n) {
    Nat sum = 0;
    std::vector<bool> composite(n + 1, false);
    for (Nat i = 2; i <= n; ++i) {
      if (composite[i]) continue;
      sum += i;
      for (Nat j = i * i; j <= n; j += i) composite[j] = true;
    }
    return sum;
  };
  return {eval, [](Nat v) -> std::optional<Nat> { return 2 * v + 2; }};
}

}  // namespace pbw
