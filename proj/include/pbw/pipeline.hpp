#pragma once

#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pbw/cube.hpp"
#include "pbw/increasing.hpp"
#include "pbw/muchnik.hpp"
#include "pbw/periodicity.hpp"
#include "pbw/shift_search.hpp"

namespace pbw {

enum class Branch { Base, SectionRecursion, DirectNorms, LcmOverS, Undecided };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::Base: return "Base";
    case Branch::SectionRecursion: return "SectionRecursion";
    case Branch::DirectNorms: return "DirectNorms";
    case Branch::LcmOverS: return "LcmOverS";
    case Branch::Undecided: return "Unknown";
  }
  return "?";
}

/// Intermediates of the construction for one shift bound s.
struct ShiftRecord {
  Nat s = 0;
  std::optional<Nat> k;
  std::vector<Nat> T;                 // confirmed prefix of T(R,s)
  std::vector<Point> corners;         // c(R,s,t) for t in T
  std::optional<Nat> f_index;         // f(R,s)
  std::optional<Cube> I;              // I(R,s)
  std::vector<Nat> X;                 // X(R,s) prefix
  std::vector<Nat> N;                 // N(R,s) prefix
  std::optional<PeriodicityCertificate> certificate;
  std::string note;
};

inline std::string list(const std::vector<Nat>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

struct PipelineTrace {
  std::string relation;
  std::size_t dim = 0;
  Budget budget;
  Branch branch = Branch::Undecided;
  std::size_t axis = 0;  // SectionRecursion
  Nat value = 0;
  Nat s = 0;             // DirectNorms
  std::vector<ShiftRecord> records;
  std::shared_ptr<const PipelineTrace> inner;
  WitnessStream witness{{}, Provenance::Relation1D, {}};
  std::string note;

  bool decided() const { return branch != Branch::Undecided; }

  /// Machine-readable lines: branch=..., one s=... line per record, witness=...
  std::string lines() const {
    std::ostringstream os;
    os << "branch=" << to_string(branch);
    if (branch == Branch::SectionRecursion) os << " section=(" << axis << "," << value << ")";
    if (branch == Branch::DirectNorms) os << " s=" << s;
    os << "\n";
    for (const auto& r : records) {
      os << "s=" << r.s << " K=" << (r.k ? std::to_string(*r.k) : "-") << " I=" << (r.I ? r.I->hex() : "-")
         << " N=" << list(r.N) << "\n";
    }
    if (inner) {
      std::istringstream in(inner->lines());
      for (std::string l; std::getline(in, l);) os << "  " << l << "\n";
    }
    os << "witness=" << list(witness.values) << "\n";
    return os.str();
  }

  std::string text() const {
    std::ostringstream os;
    os << "relation " << relation << " dim " << dim << "\n";
    os << "branch " << to_string(branch);
    if (branch == Branch::SectionRecursion) os << " at section (" << axis << "," << value << ")";
    if (branch == Branch::DirectNorms) os << " at s=" << s;
    os << "\n";
    if (!note.empty()) os << "note: " << note << "\n";
    for (const auto& r : records) {
      os << "s=" << r.s << "\n";
      os << "  K=" << (r.k ? std::to_string(*r.k) : "-") << "\n";
      os << "  T=" << list(r.T) << "\n";
      os << "  f=" << (r.f_index ? std::to_string(*r.f_index) : "-") << " I=" << (r.I ? r.I->str() : "-") << "\n";
      os << "  X=" << list(r.X) << "\n";
      os << "  N=" << list(r.N) << "\n";
      if (r.certificate) os << "  " << r.certificate->str() << "\n";
      if (!r.note.empty()) os << "  note: " << r.note << "\n";
    }
    if (inner) {
      std::istringstream in(inner->text());
      for (std::string l; std::getline(in, l);) os << "  | " << l << "\n";
    }
    os << "witness provenance=" << to_string(witness.provenance) << " values=" << list(witness.values) << "\n";
    if (!witness.exhausted_at.empty()) os << "witness exhausted: " << witness.exhausted_at << "\n";
    return os.str();
  }
};

/// Consecutive elements differ by more than s.
inline bool gaps_exceed(const std::vector<Nat>& v, Nat s) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (v[i] <= v[i - 1] || v[i] - v[i - 1] <= s) return false;
  return true;
}

/// The per-relation state of the construction: corners, T, I, X and N for
/// each s, with memoized corner searches.
class Pipeline {
public:
  Pipeline(Relation r, Budget budget) : r_(std::move(r)), budget_(std::move(budget)), search_(make_search(r_, budget_)) {
    budget_.validate();
  }

  const Relation& relation() const { return r_; }
  const Budget& budget() const { return budget_; }
  CornerSearch& search() { return search_; }

  std::optional<Point> corner(Nat s, Nat k, Nat t) {
    auto key = std::make_tuple(s, k, t);
    auto it = corners_.find(key);
    if (it != corners_.end()) return it->second;
    return corners_[key] = search_.corner(s, k, t);
  }

  Verdict3<Nat> k_of(Nat s) {
    auto it = ks_.find(s);
    if (it == ks_.end()) {
      auto v = find_k(search_, s, budget_);
      it = ks_.emplace(s, v.is_holds() ? Verdict3<Nat>::holds(v.value().k) : Verdict3<Nat>::unknown(budget_, v.note())).first;
    }
    return it->second;
  }

  /// f_0..f_{d-1} with f_i(t) = c_i(R,s,t). Every c_i(t) >= t; c_0 is also
  /// nondecreasing, which gives it a sharp modulus.
  std::vector<DivergentFunction> corner_functions(Nat s, Nat k) {
    std::vector<DivergentFunction> fs;
    for (std::size_t i = 0; i < r_.dim(); ++i) {
      DivergentFunction f;
      f.eval = [this, s, k, i](Nat t) {
        auto c = corner(s, k, t);
        if (!c) throw EmptyResult("no corner for t=" + std::to_string(t));
        return (*c)[i];
      };
      if (i == 0) {
        f.modulus = [this, s, k](Nat v) -> std::optional<Nat> {
          for (Nat t = 0;; ++t) {
            auto c = corner(s, k, t);
            if (!c) return std::nullopt;
            if ((*c)[0] > v) return t == 0 ? 0 : t - 1;
          }
        };
      } else {
        f.modulus = [](Nat v) -> std::optional<Nat> { return v; };
      }
      fs.push_back(std::move(f));
    }
    return fs;
  }

  /// T, the corners over it, f(R,s) and I(R,s).
  ShiftRecord recurring_cube(Nat s) {
    ShiftRecord rec;
    rec.s = s;
    auto k = k_of(s);
    if (!k.is_holds()) {
      rec.note = "find_k: " + k.note();
      return rec;
    }
    rec.k = k.value();
    for (Nat t = 0; t <= budget_.t_window; ++t)
      if (!corner(s, *rec.k, t)) {
        rec.note = "no corner for t=" + std::to_string(t) + " within coord_bound";
        return rec;
      }
    try {
      rec.T = increasing_restriction(corner_functions(s, *rec.k), budget_.t_window);
    } catch (const EmptyResult& e) {
      rec.note = e.what();
      return rec;
    }
    std::vector<Cube> cubes;
    std::map<Cube, Nat> count;
    for (Nat t : rec.T) {
      rec.corners.push_back(*corner(s, *rec.k, t));
      cubes.push_back(cube_at(r_, rec.corners.back(), *rec.k));
      ++count[cubes.back()];
    }
    for (std::size_t i = 0; i < rec.T.size(); ++i)
      if (count[cubes[i]] >= budget_.theta) {
        rec.f_index = rec.T[i];
        rec.I = cubes[i];
        break;
      }
    if (!rec.I) {
      rec.note = "no cube recurs " + std::to_string(budget_.theta) + " times";
      return rec;
    }
    for (std::size_t i = 0; i < rec.T.size(); ++i)
      if (cubes[i] == *rec.I) {
        rec.X.push_back(rec.T[i]);
        rec.N.push_back(norm(rec.corners[i]));
      }
    return rec;
  }

private:
  Relation r_;
  Budget budget_;
  CornerSearch search_;
  std::map<std::tuple<Nat, Nat, Nat>, std::optional<Point>> corners_;
  std::map<Nat, Verdict3<Nat>> ks_;
};

inline Verdict3<std::pair<Nat, Cube>> recurring_cube(const Relation& r, Nat s, const Budget& budget) {
  Pipeline p(r, budget);
  auto rec = p.recurring_cube(s);
  if (!rec.I) return Verdict3<std::pair<Nat, Cube>>::unknown(budget, rec.note);
  return Verdict3<std::pair<Nat, Cube>>::holds({*rec.f_index, *rec.I});
}

/// N(R,s) on the explored prefix of T.
inline Verdict3<WitnessStream> norm_set(Pipeline& p, Nat s) {
  auto rec = p.recurring_cube(s);
  if (!rec.I) return Verdict3<WitnessStream>::unknown(p.budget(), rec.note);
  return Verdict3<WitnessStream>::holds(WitnessStream{rec.N, Provenance::DirectNorms, {}});
}

inline Verdict3<WitnessStream> norm_set(const Relation& r, Nat s, const Budget& budget) {
  Pipeline p(r, budget);
  return norm_set(p, s);
}

/// The set {(s-1, n) | n in N(R,s)} as a finite table on [0,window].
inline Relation norm_family(const std::vector<ShiftRecord>& records, Nat window) {
  std::vector<Point> pts;
  Nat rows = 0;
  for (const auto& r : records) {
    for (Nat n : r.N)
      if (n <= window) pts.push_back(Point{r.s - 1, n});
    rows = std::max(rows, r.s);
  }
  return Relation::table("N-family", 2, std::max(window, rows), std::move(pts));
}

/// The witness construction: a set of naturals that is not ultimately
/// periodic when R is not definable.
inline PipelineTrace nu_witness(const Relation& r, const Budget& budget) {
  if (r.kind() == RelationKind::Semilinear)
    throw DefinableInput("relation '" + r.name() + "' is semilinear, hence definable; no witness exists");
  budget.validate();
  PipelineTrace trace;
  trace.relation = r.name();
  trace.dim = r.dim();
  trace.budget = budget;

  if (r.dim() == 1) {
    Nat w = budget.window;
    if (auto b = r.bound()) w = std::min(w, *b);
    trace.branch = Branch::Base;
    trace.witness = WitnessStream{members(windowed(r, w), w), Provenance::Relation1D, {}};
    return trace;
  }

  for (auto [i, j] : section_order(r.dim(), budget.max_section)) {
    if (auto b = r.bound(); b && j > *b) continue;
    Relation sec = section(r, i, j);
    if (!muchnik_test(sec, reduced(budget)).is_holds()) continue;
    auto inner = nu_witness(sec, reduced(budget));
    trace.branch = inner.decided() ? Branch::SectionRecursion : Branch::Undecided;
    trace.axis = i;
    trace.value = j;
    trace.witness = inner.witness;
    trace.witness.provenance = Provenance::SectionRecursion;
    trace.inner = std::make_shared<const PipelineTrace>(std::move(inner));
    return trace;
  }

  Pipeline p(r, budget);
  for (Nat s = 1; s <= budget.max_s; ++s) {
    ShiftRecord rec = p.recurring_cube(s);
    if (!rec.I) {
      trace.records.push_back(std::move(rec));
      trace.note = "halted at s=" + std::to_string(s) + ": " + trace.records.back().note;
      return trace;
    }
    if (rec.N.empty() || rec.N.back() < 9) {
      rec.note = "norm prefix too short to judge periodicity";
      trace.records.push_back(std::move(rec));
      trace.note = "halted at s=" + std::to_string(s);
      return trace;
    }
    rec.certificate = minimal_period(windowed(rec.N, rec.N.back()));
    bool aperiodic = rec.certificate->verdict == PeriodicityVerdict::NotPeriodic;
    trace.records.push_back(rec);
    if (aperiodic) {
      trace.branch = Branch::DirectNorms;
      trace.s = s;
      trace.witness = WitnessStream{rec.N, Provenance::DirectNorms, {}};
      return trace;
    }
  }

  // Every N(R,s) looked periodic: combine the periods across s.
  Nat window = budget.window;
  for (const auto& rec : trace.records) window = std::min(window, rec.N.back());
  trace.branch = Branch::LcmOverS;
  trace.witness = epsilon_witness(norm_family(trace.records, window), budget.max_s, window, budget.max_s - 1);
  trace.witness.provenance = Provenance::LcmOverS;
  return trace;
}

/// Every empirically certified N(R,s) has period greater than s.
inline bool check_s_lower_bound(const PipelineTrace& trace) {
  for (const auto& r : trace.records)
    if (r.certificate && r.certificate->verdict == PeriodicityVerdict::Empirical && r.certificate->period &&
        *r.certificate->period <= r.s)
      return false;
  return true;
}

}  // namespace pbw
