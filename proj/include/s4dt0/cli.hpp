/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

// Command-line front end. Exit codes: 0 holds / success, 1 property fails
// or countermodel found, 2 usage or input error.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "s4dt0/decide.hpp"
#include "s4dt0/io.hpp"
#include "s4dt0/morphism.hpp"
#include "s4dt0/random.hpp"
#include "s4dt0/syntax.hpp"

namespace s4dt0::cli {

using io::json;

struct Options {
  std::vector<std::string> positional;
  std::string file;
  std::size_t bound = 0;
  std::string className;
  bool json = false;
  bool iso = false;
  std::uint64_t seed = 1;
  std::size_t random = 0;
  double timeLimit = 600.0;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

struct Outcome {
  int exit = 0;
  std::string text;  // human-readable output
  json fields = json::object();
};

inline std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// The formula argument: `--file`, else the positional at `at`.
inline Formula formulaArg(const Options& o, std::size_t at) {
  if (!o.file.empty()) return parse(readFile(o.file));
  if (o.positional.size() <= at) throw UsageError("missing formula argument");
  return parse(o.positional[at]);
}

inline io::Document documentArg(const Options& o, std::size_t at = 0) {
  if (o.positional.size() <= at) throw UsageError("missing document argument");
  return io::loadDocument(o.positional[at]);
}

inline KripkeFrame frameArg(const Options& o) {
  io::Document d = documentArg(o);
  if (auto* f = std::get_if<KripkeFrame>(&d)) return *f;
  if (auto* m = std::get_if<KripkeModel>(&d)) return m->frame;
  throw SchemaError("expected a frame or model document, got " + std::string(io::kindName(d)));
}

inline KripkeModel modelArg(const Options& o) {
  io::Document d = documentArg(o);
  if (auto* m = std::get_if<KripkeModel>(&d)) return *m;
  if (auto* f = std::get_if<KripkeFrame>(&d)) return KripkeModel(*f, {});
  throw SchemaError("expected a model document, got " + std::string(io::kindName(d)));
}

inline FrameClass classArg(const Options& o, FrameClass fallback) {
  if (o.className.empty()) return fallback;
  if (auto c = frameClassFromString(o.className)) return *c;
  throw UsageError("unknown class '" + o.className + "' (all, s4, s4dcone, s4dt0cone)");
}

inline SearchBudget budgetArg(const Options& o, std::size_t defaultWorlds) {
  SearchBudget b;
  b.maxWorlds = o.bound ? o.bound : defaultWorlds;
  b.maxSeconds = o.timeLimit;
  return b;
}

inline Outcome cmdParse(const Options& o) {
  Formula f = formulaArg(o, 0);
  return {0, print(f), {{"formula", print(f)}, {"ast", io::toJson(f)}}};
}

inline Outcome cmdPrint(const Options& o) {
  Formula f = formulaArg(o, 0);
  return {0, print(f), {{"formula", print(f)}}};
}

inline Outcome cmdEvalKripke(const Options& o) {
  KripkeModel m = modelArg(o);
  Formula f = formulaArg(o, 1);
  PointSet truth = evalKripke(m, f);
  return {0, truth.toString(), {{"formula", print(f)}, {"truth", io::toJson(truth)}}};
}

inline Outcome cmdEvalTopo(const Options& o) {
  io::Document d = documentArg(o);
  auto* s = std::get_if<io::SpaceDocument>(&d);
  if (!s) throw SchemaError("expected a space document");
  Formula f = formulaArg(o, 1);
  PointSet truth = evalTopo(TopoModel(s->space, s->valuation.value_or(Valuation{})), f);
  return {0, truth.toString(), {{"formula", print(f)}, {"truth", io::toJson(truth)}}};
}

inline Outcome cmdCheckFrame(const Options& o) {
  KripkeFrame f = frameArg(o);
  FrameClass cls = classArg(o, FrameClass::S4DT0Cone);
  auto why = classViolation(f, cls);
  Outcome out{why ? 1 : 0, {}, {{"class", toString(cls)}, {"frameClass", io::toJson(frameClass(f))}}};
  out.text = why ? "not in class " + std::string(toString(cls)) + ": " + *why
                 : "in class " + std::string(toString(cls));
  if (why) out.fields["reason"] = *why;
  return out;
}

inline Outcome cmdCheckTopology(const Options& o) {
  if (o.positional.empty()) throw UsageError("missing document argument");
  json j;
  try {
    j = json::parse(readFile(o.positional[0]));
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  const std::size_t n = io::detail::count(io::detail::field(j, "points"), "points", 1, kMaxPoints);
  const json& opensJ = io::detail::field(j, "opens");
  if (!opensJ.is_array()) throw SchemaError("opens: expected an array");
  std::vector<PointSet> opens;
  for (std::size_t i = 0; i < opensJ.size(); ++i)
    opens.push_back(io::detail::pointSet(opensJ[i], "opens[" + std::to_string(i) + "]", n, "points"));
  const bool topo = isTopology(n, opens);
  const bool t0 = topo && isT0(FiniteSpace(n, opens));
  const bool wantT0 = o.className == "t0";
  if (!o.className.empty() && !wantT0) throw UsageError("check-topology supports only --class t0");
  Outcome out{(!topo || (wantT0 && !t0)) ? 1 : 0, {}, {{"topology", topo}, {"t0", t0}}};
  out.text = !topo ? "not a topology" : (t0 ? "topology, T0" : "topology, not T0");
  return out;
}

inline Outcome documentOutcome(const io::Document& d, const char* key) {
  return {0, io::serialize(d), {{key, io::toJson(d)}}};
}

inline Outcome cmdAlexandroff(const Options& o) {
  FiniteSpace s = alexandroff(frameArg(o));
  return documentOutcome(io::SpaceDocument{SelectedSpace::plain(std::move(s)), std::nullopt}, "space");
}

inline Outcome cmdTopD(const Options& o) {
  return documentOutcome(io::SpaceDocument{topD(frameArg(o)), std::nullopt}, "space");
}

inline Outcome cmdBuildSpace(const Options& o) {
  PMorphismDescription d = buildSpace(frameArg(o));
  return documentOutcome(io::CompositeDocument{d.source, d}, "composite");
}

inline PMorphismDescription descriptionArg(const Options& o) {
  io::Document d = documentArg(o);
  if (auto* c = std::get_if<io::CompositeDocument>(&d)) {
    if (!c->description) throw SchemaError("composite document has no target/ordering");
    return *c->description;
  }
  if (auto* f = std::get_if<KripkeFrame>(&d)) return buildSpace(*f);
  if (auto* m = std::get_if<KripkeModel>(&d)) return buildSpace(m->frame);
  throw SchemaError("expected a frame, model or composite document");
}

inline Outcome cmdVerifyPMorphism(const Options& o) {
  PMorphismDescription d = descriptionArg(o);
  PMorphismReport r = verifyPMorphism(d);
  T0Report t0 = t0Check(d.source, 2 * d.source.maxPeriod() + 2);
  const bool ok = r.ok() && t0.ok;
  Outcome out{ok ? 0 : 1, {}, {}};
  out.fields = {{"wellFormed", r.wellFormed}, {"surjective", r.surjective}, {"continuous", r.continuous},
                {"open", r.open}, {"selectedFibres", r.selectedFibres}, {"t0", t0.ok},
                {"t0PairsChecked", t0.pairsChecked}};
  std::ostringstream text;
  text << std::boolalpha << "surjective " << r.surjective << "\ncontinuous " << r.continuous << "\nopen " << r.open
       << "\nselected-fibres " << r.selectedFibres << "\nT0 " << t0.ok << " (" << t0.pairsChecked << " pairs)";
  if (r.failure) {
    text << "\nfailure: " << *r.failure;
    out.fields["failure"] = *r.failure;
  } else if (t0.failure) {
    text << "\nfailure: " << *t0.failure;
    out.fields["failure"] = *t0.failure;
  }
  out.text = text.str();
  return out;
}

inline Outcome cmdTruthTransfer(const Options& o) {
  KripkeModel m = modelArg(o);
  PMorphismDescription d = buildSpace(m.frame);
  if (o.random > 0) {
    FormulaGenerator gen(o.seed);
    std::size_t failures = 0;
    json failing = json::array();
    for (std::size_t i = 0; i < o.random; ++i) {
      Formula f = gen(5);
      Valuation v = randomValuation(gen.rng(), m.frame.worlds(), {"p", "q"});
      if (!truthTransfer(d, v, f)) {
        ++failures;
        if (failing.size() < 5) failing.push_back(print(f));
      }
    }
    return {failures ? 1 : 0,
            std::to_string(o.random - failures) + "/" + std::to_string(o.random) + " random cases transfer",
            {{"cases", o.random}, {"failures", failures}, {"failing", failing}, {"seed", o.seed}}};
  }
  Formula f = formulaArg(o, 1);
  TransferResult r = truthTransferDetail(d, m.valuation, f);
  return {r.holds() ? 0 : 1, r.holds() ? "holds" : "fails: " + describe(r.composite) + " vs " + describe(r.pulled),
          {{"formula", print(f)}, {"holds", r.holds()}, {"composite", io::toJson(r.composite)},
           {"pulledBack", io::toJson(r.pulled)}}};
}

inline Outcome satOutcome(const SatResult& r, bool success) {
  Outcome out{success ? 0 : 1, {}, {{"status", toString(r.status)}, {"bound", r.searchedBound}}};
  out.text = std::string(toString(r.status)) + " " + std::to_string(r.searchedBound);
  if (r.model) {
    out.fields["model"] = io::toJson(*r.model);
    out.fields["world"] = r.world;
    out.text += "\nworld " + std::to_string(r.world) + "\n" + io::serialize(*r.model);
  }
  if (r.budgetExceeded) {
    out.fields["budgetExceeded"] = r.budgetNote;
    out.text += "\nbudget exceeded: " + r.budgetNote;
  }
  return out;
}

inline Outcome cmdSat(const Options& o) {
  SatResult r = satisfiable(formulaArg(o, 0), budgetArg(o, 4), classArg(o, FrameClass::S4DT0Cone));
  return satOutcome(r, r.status == SatStatus::Satisfiable);
}

inline Outcome cmdValid(const Options& o) {
  SatResult r = validUpTo(formulaArg(o, 0), budgetArg(o, 4), classArg(o, FrameClass::S4DT0Cone));
  return satOutcome(r, r.status == SatStatus::ValidUpToBound);
}

inline Outcome cmdCorrespondence(const Options& o) {
  CorrespondenceReport r = correspondenceSuite(o.bound ? o.bound : 3);
  Outcome out{r.ok() ? 0 : 1, {}, {{"framesPerSize", r.framesPerSize}}};
  json axioms = json::object();
  std::ostringstream text;
  for (const auto& t : r.axioms) {
    axioms[std::string(toString(t.axiom))] = {{"frames", t.frames}, {"mismatches", t.mismatches}, {"examples", t.examples}};
    text << toString(t.axiom) << ": " << t.frames << " frames, " << t.mismatches << " mismatches\n";
  }
  out.fields["axioms"] = axioms;
  out.text = text.str();
  return out;
}

inline Outcome cmdTopoCorrespondence(const Options& o) {
  const std::size_t n = o.bound ? o.bound : 4;
  json sizes = json::array();
  std::ostringstream text;
  bool ok = true;
  for (std::size_t k = 1; k <= n; ++k) {
    TopoCorrespondenceReport r = topoCorrespondence(k);
    ok = ok && r.ok();
    sizes.push_back({{"points", k}, {"families", r.families}, {"topologies", r.topologies}, {"t0", r.t0Spaces},
                     {"at0Valid", r.at0Valid}, {"preorderTopologies", r.preorderTopologies},
                     {"mismatches", r.mismatches}});
    text << k << " points: " << r.topologies << " topologies, " << r.t0Spaces << " T0, " << r.at0Valid
         << " AT0-valid, " << r.mismatches << " mismatches\n";
  }
  return {ok ? 0 : 1, text.str(), {{"sizes", sizes}}};
}

inline Outcome cmdEnumerate(const Options& o) {
  const std::size_t n = o.bound ? o.bound : 2;
  const FrameClass cls = classArg(o, FrameClass::S4DT0Cone);
  std::vector<KripkeFrame> frames = enumerateFrames(n, cls, {o.iso});
  json list = json::array();
  for (const auto& f : frames) list.push_back(io::toJson(f));
  return {0, std::to_string(frames.size()) + " frames",
          {{"worlds", n}, {"class", toString(cls)}, {"isomorphismClasses", o.iso}, {"count", frames.size()},
           {"frames", list}}};
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checking and bounded decision tools for the logic of T0 spaces with the difference modality"};
  app.require_subcommand(1);
  Options o;

  struct Command {
    const char* name;
    const char* help;
    detail::Outcome (*fn)(const Options&);
  };
  const Command commands[] = {
      {"parse", "parse a formula and print it", detail::cmdParse},
      {"print", "print a formula with minimal parentheses", detail::cmdPrint},
      {"eval-kripke", "truth set of a formula in a Kripke model: MODEL FORMULA", detail::cmdEvalKripke},
      {"eval-topo", "truth set of a formula in a topological model: SPACE FORMULA", detail::cmdEvalTopo},
      {"check-frame", "check frame membership in --class (default s4dt0cone)", detail::cmdCheckFrame},
      {"check-topology", "check that a space document is a topology (--class t0 also requires T0)",
       detail::cmdCheckTopology},
      {"alexandroff", "Alexandroff space of a preorder frame", detail::cmdAlexandroff},
      {"topd", "Alexandroff space with selected points of an S4D-cone", detail::cmdTopD},
      {"build-space", "countable T0 space and map onto an S4DT0 cone", detail::cmdBuildSpace},
      {"verify-pmorphism", "verify the constructed map (frame or composite document)", detail::cmdVerifyPMorphism},
      {"truth-transfer", "compare truth along the constructed map: MODEL FORMULA | MODEL --random N",
       detail::cmdTruthTransfer},
      {"sat", "bounded satisfiability search", detail::cmdSat},
      {"valid", "bounded validity search", detail::cmdValid},
      {"correspondence", "axiom / frame-condition correspondence over all small frames", detail::cmdCorrespondence},
      {"topo-correspondence", "AT0 validity versus T0 over all small topologies", detail::cmdTopoCorrespondence},
      {"enumerate", "enumerate frames of --class on --bound worlds", detail::cmdEnumerate},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& s : commands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("args", o.positional, "formula and/or document paths");
    sub->add_option("--file", o.file, "read the formula from a file");
    sub->add_option("--bound", o.bound, "world/point bound");
    sub->add_option("--class", o.className, "frame class: all, s4, s4dcone, s4dt0cone");
    sub->add_flag("--json", o.json, "machine-readable report");
    sub->add_flag("--iso", o.iso, "enumerate up to isomorphism");
    sub->add_option("--seed", o.seed, "seed for randomized checks");
    sub->add_option("--random", o.random, "number of random cases");
    sub->add_option("--time-limit", o.timeLimit, "seconds before a search gives up");
    subs.emplace_back(sub, &s);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const Command* chosen = nullptr;
  for (auto& [sub, cmd] : subs)
    if (sub->parsed()) chosen = cmd;

  detail::Outcome res;
  try {
    res = chosen->fn(o);
  } catch (const std::exception& e) {
    if (o.json) out << json{{"report", chosen->name}, {"exit", 2}, {"error", e.what()}}.dump() << "\n";
    err << chosen->name << ": " << e.what() << "\n";
    return 2;
  }
  if (o.json) {
    json j = res.fields;
    j["report"] = chosen->name;
    j["exit"] = res.exit;
    out << j.dump() << "\n";
  } else {
    out << res.text;
    if (res.text.empty() || res.text.back() != '\n') out << "\n";
  }
  return res.exit;
}

}  // namespace s4dt0::cli
