#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pbw/cube.hpp"
#include "pbw/formula_eval.hpp"
#include "pbw/muchnik.hpp"
#include "pbw/periodicity.hpp"
#include "pbw/pipeline.hpp"
#include "pbw/relation_spec.hpp"

namespace pbw::cli {

enum Exit : int { Positive = 0, Negative = 1, Usage = 2, Undecided = 3 };

struct RunConfig {
  std::string command;
  std::string builtin;
  std::string spec;
  Nat dim = 2;
  Budget budget;
  Nat qbound = 64;
  Nat count = 10;
  std::string format = "text";
  // command specific
  bool family = false;
  Nat s = 1;
  Nat k = 1;
  std::vector<Nat> extent;
  std::string formula;
  std::vector<std::string> assign;

  /// Oracles are built with a bound covering every query the budget allows.
  Nat builtin_bound() const {
    Nat b = std::max({budget.coord_bound, budget.window, qbound});
    return checked_add(checked_add(b, budget.max_s), checked_add(budget.max_k, 2));
  }

  std::string header() const {
    std::ostringstream os;
    os << "# pbw " << command << " relation=" << (builtin.empty() ? (spec.empty() ? "-" : "spec:" + spec) : "builtin:" + builtin);
    if (!builtin.empty()) os << " dim=" << dim << " bound=" << builtin_bound();
    os << "\n# " << budget.str() << " qbound=" << qbound << " count=" << count << " format=" << format << "\n";
    return os.str();
  }
};

inline std::optional<Relation> load(const RunConfig& c) {
  if (!c.builtin.empty() && !c.spec.empty()) throw SpecError("give either --builtin or --spec, not both");
  if (!c.builtin.empty()) return builtin(c.builtin, c.dim, c.builtin_bound());
  if (!c.spec.empty()) return load_relation_spec(c.spec);
  return std::nullopt;
}

inline Relation need(const RunConfig& c) {
  auto r = load(c);
  if (!r) throw SpecError("a relation is required: --builtin NAME or --spec PATH");
  return *r;
}

// Corners of property b as "s,K,t,x0,...".
inline void corners_csv(const Evidence& e, std::ostream& out) {
  const Evidence* at = &e;
  while (at->property == CriterionProperty::SectionNotDefinable && at->inner) {
    out << "# section=(" << at->axis << "," << at->value << ")\n";
    at = at->inner.get();
  }
  out << "# property=" << to_string(at->property) << "\n";
  std::size_t dim = 0;
  for (const auto& [s, w] : at->per_s)
    for (const auto& [t, x] : w.corners) dim = std::max(dim, x.dim());
  out << "s,K,t";
  for (std::size_t i = 0; i < dim; ++i) out << ",x" << i;
  out << "\n";
  for (const auto& [s, w] : at->per_s)
    for (const auto& [t, x] : w.corners) {
      out << s << "," << w.k << "," << t;
      for (std::size_t i = 0; i < x.dim(); ++i) out << "," << x[i];
      out << "\n";
    }
}

inline void values_csv(const std::vector<Nat>& values, std::ostream& out) {
  out << "index,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) out << i << "," << values[i] << "\n";
}

inline int cmd_check_definable(const RunConfig& c, std::ostream& out) {
  Relation r = need(c);
  auto v = muchnik_test(r, c.budget);
  out << c.header();
  if (v.is_holds() && c.format == "csv") {
    corners_csv(v.value(), out);
    return Positive;
  }
  if (v.is_holds()) {
    const Evidence& e = v.value();
    out << "verdict=NOT-DEFINABLE property=" << to_string(e.property);
    if (e.property == CriterionProperty::SectionNotDefinable) out << " section=(" << e.axis << "," << e.value << ")";
    if (e.property == CriterionProperty::LocalNonShiftable) {
      Nat kmax = 0;
      for (const auto& [s, w] : e.per_s) kmax = std::max(kmax, w.k);
      out << " K=" << kmax;
    }
    out << "\n" << e.report();
    return Positive;
  }
  if (v.is_fails()) {
    out << "verdict=DEFINABLE\nreason: " << v.note() << "\n";
    return Negative;
  }
  out << "verdict=UNKNOWN\nreason: " << v.note() << "\nbudget: " << v.budget()->str() << "\n";
  return Undecided;
}

inline void prefix_report(const std::vector<Nat>& values, std::ostream& out) {
  if (values.empty() || values.back() < 9) {
    out << "periodicity=- (prefix too short)\nexpanding=-\n";
    return;
  }
  Nat w = values.back();
  out << "periodicity=" << minimal_period(windowed(values, w)).str() << "\n";
  auto ex = is_expanding(windowed(values, w), w);
  out << "expanding=" << to_string(ex.kind()) << " B=" << w << "\n";
}

inline int cmd_witness(const RunConfig& c, std::ostream& out) {
  Relation r = need(c);
  if (c.family) {
    auto stream = epsilon_witness(r, c.count, c.budget.window);
    out << c.header();
    if (c.format == "csv") {
      values_csv(stream.values, out);
      return stream.values.size() >= c.count ? Positive : Undecided;
    }
    out << "branch=" << to_string(stream.provenance) << "\n";
    out << "values=" << list(stream.values) << "\n";
    out << "doubling=" << (increases_double(stream.values) ? "yes" : "no") << "\n";
    if (!stream.exhausted_at.empty()) out << "exhausted=" << stream.exhausted_at << "\n";
    return stream.values.size() >= c.count ? Positive : Undecided;
  }
  PipelineTrace trace;
  try {
    trace = nu_witness(r, c.budget);
  } catch (const DefinableInput& e) {
    out << c.header() << "verdict=DEFINABLE\nreason: " << e.what() << "\n";
    return Negative;
  }
  out << c.header();
  if (c.format == "csv") {
    values_csv(trace.witness.values, out);
    return trace.decided() ? Positive : Undecided;
  }
  std::vector<Nat> shown(trace.witness.values.begin(),
                         trace.witness.values.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(c.count, trace.witness.values.size())));
  if (c.format == "lines") out << trace.lines();
  else out << trace.text();
  out << "values=" << list(shown) << "\n";
  prefix_report(trace.witness.values, out);
  return trace.decided() ? Positive : Undecided;
}

inline int cmd_cube_map(const RunConfig& c, std::ostream& out) {
  Relation r = need(c);
  if (r.dim() != 2) throw SpecError("cube-map draws binary relations; got dimension " + std::to_string(r.dim()));
  if (c.s == 0) throw SpecError("--s must be >= 1");
  Cube probe(2, c.k);
  if (probe.size() > 64) throw SpecError("cube_code needs (k+1)^2 <= 64");
  Nat ex0 = c.extent.size() > 0 ? c.extent[0] : 25, ex1 = c.extent.size() > 1 ? c.extent[1] : 5;
  if (auto b = r.bound()) {
    Nat reach = checked_add(c.s, c.k);
    if (reach > *b) throw SpecError("relation bound too small for s + k");
    ex0 = std::min(ex0, *b - reach);
    ex1 = std::min(ex1, *b - reach);
  }
  out << c.header() << "x0,x1,in_R,cube_code,s_shiftable\n";
  for (Nat x0 = 0; x0 <= ex0; ++x0)
    for (Nat x1 = 0; x1 <= ex1; ++x1) {
      Point x{x0, x1};
      Cube cube = cube_at(r, x, c.k);
      Nat code = 0;
      for (Nat i = 0; i < cube.size(); ++i)
        if (cube.test(i)) code |= Nat{1} << i;
      out << x0 << "," << x1 << "," << (r.contains(x) ? 1 : 0) << "," << code << ","
          << (s_shiftable(r, c.s, c.k, x) ? 1 : 0) << "\n";
    }
  return Positive;
}

inline int cmd_eval(const RunConfig& c, std::ostream& out) {
  FormulaPtr phi = parse_formula(c.formula);
  BoundedStructure s{load(c), c.qbound, "R"};
  Assignment a;
  for (const auto& item : c.assign) {
    auto eqpos = item.find('=');
    if (eqpos == std::string::npos || eqpos == 0) throw SpecError("--assign expects name=value, got '" + item + "'");
    a[item.substr(0, eqpos)] = detail::parse_nat(item.substr(eqpos + 1), 0);
  }
  bool v = eval_bounded(phi, s, a);
  out << c.header() << "formula=" << to_string(phi) << "\n" << "value=" << (v ? "true" : "false") << " Q=" << c.qbound << "\n";
  return v ? Positive : Negative;
}

/// Runs one command line (without the program name). Reports go to `out`,
/// diagnostics to `err`; the return value is the process exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Presburger non-definability tests and witness extraction", "pbw"};
  app.require_subcommand(1);

  auto common = [&c](CLI::App* sub) {
    sub->add_option("--builtin", c.builtin, "built-in oracle relation")
        ->check(CLI::IsMember(builtin_names()));
    sub->add_option("--spec", c.spec, "relation spec file");
    sub->add_option("--dim", c.dim, "dimension of the full/empty builtins")->check(CLI::PositiveNumber);
    sub->add_option("--max-k", c.budget.max_k, "largest cube size K")->check(CLI::PositiveNumber);
    sub->add_option("--max-s", c.budget.max_s, "largest shift bound s")->check(CLI::PositiveNumber);
    sub->add_option("--max-t", c.budget.max_t, "largest corner depth t")->check(CLI::PositiveNumber);
    sub->add_option("--coord-bound", c.budget.coord_bound, "largest corner coordinate searched")->check(CLI::PositiveNumber);
    sub->add_option("--window", c.budget.window, "tabulation window for periodicity")->check(CLI::PositiveNumber);
    sub->add_option("--max-section", c.budget.max_section, "largest section value tried")->check(CLI::PositiveNumber);
    sub->add_option("--theta", c.budget.theta, "occurrences needed for a recurring cube")->check(CLI::PositiveNumber);
    sub->add_option("--t-window", c.budget.t_window, "depths tabulated by the norm construction")->check(CLI::PositiveNumber);
    sub->add_option("--qbound", c.qbound, "quantifier bound Q")->check(CLI::PositiveNumber);
    sub->add_option("--count", c.count, "number of values printed")->check(CLI::PositiveNumber);
    sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"text", "csv", "lines"}));
  };

  auto* check = app.add_subcommand("check-definable", "three-valued definability test");
  common(check);
  auto* witness = app.add_subcommand("witness", "extract a non ultimately periodic set");
  common(witness);
  witness->add_flag("--family", c.family, "treat the relation as a family of rows and run the lcm construction");
  auto* cubemap = app.add_subcommand("cube-map", "CSV grid of cubes and shiftability");
  common(cubemap);
  cubemap->add_option("--s", c.s, "shift bound")->check(CLI::PositiveNumber);
  cubemap->add_option("--k", c.k, "cube radius");
  cubemap->add_option("--extent", c.extent, "last corner a,b")->delimiter(',')->expected(2);
  auto* eval = app.add_subcommand("eval", "bounded evaluation of a formula");
  common(eval);
  eval->add_option("--formula", c.formula, "formula text")->required();
  eval->add_option("--assign", c.assign, "name=value")->delimiter(',');

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? Positive : Usage;
  }

  try {
    c.budget.validate();
    if (check->parsed()) return c.command = "check-definable", cmd_check_definable(c, out);
    if (witness->parsed()) return c.command = "witness", cmd_witness(c, out);
    if (cubemap->parsed()) return c.command = "cube-map", cmd_cube_map(c, out);
    if (eval->parsed()) return c.command = "eval", cmd_eval(c, out);
  } catch (const Error& e) {
    err << "pbw: " << e.what() << "\n";
    return Usage;
  }
  return Usage;
}

}  // namespace pbw::cli
