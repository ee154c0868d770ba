/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

// JSON documents for frames, models, spaces, composite spaces and reports.
//
//   frame      { "worlds": n, "R": [[i,j],...], "RD": [[i,j],...] }
//   model      frame + "valuation": { "p": [0,2], ... }
//   space      { "points": n, "opens": [[...],...], "selected": [...] }
//              (+ optional "valuation")
//   composite  { "clusters": [{"m":2,"infinity":true,"infinityOnly":false},...],
//                "order": [[a,b],...] }
//              (+ optional "target" frame and "ordering" describing the map)
//   report     { "report": name, "exit": code, ... }

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "s4dt0/error.hpp"
#include "s4dt0/kripke.hpp"
#include "s4dt0/morphism.hpp"
#include "s4dt0/omega_space.hpp"
#include "s4dt0/topo.hpp"

namespace s4dt0::io {

using nlohmann::json;

struct SpaceDocument {
  SelectedSpace space;
  std::optional<Valuation> valuation;
  bool operator==(const SpaceDocument&) const = default;
};

struct CompositeDocument {
  CompositeSpace space;
  std::optional<PMorphismDescription> description;
  bool operator==(const CompositeDocument&) const = default;
};

struct ReportDocument {
  json body;
  bool operator==(const ReportDocument&) const = default;
};

using Document = std::variant<KripkeFrame, KripkeModel, SpaceDocument, CompositeDocument, ReportDocument>;

inline std::string_view kindName(const Document& d) {
  static constexpr std::string_view kNames[] = {"frame", "model", "space", "composite", "report"};
  return kNames[d.index()];
}

// ---------------------------------------------------------------------------
// Encoding

inline json toJson(PointSet s) {
  json a = json::array();
  s.forEach([&](std::size_t p) { a.push_back(p); });
  return a;
}

inline json toJson(const Relation& r, bool skipLoops = false) {
  json a = json::array();
  for (auto [x, y] : r.pairs())
    if (!skipLoops || x != y) a.push_back({x, y});
  return a;
}

inline json toJson(const Valuation& v) {
  json o = json::object();
  for (const auto& [name, set] : v) o[name] = toJson(set);
  return o;
}

inline json toJson(const KripkeFrame& f) {
  return {{"worlds", f.worlds()}, {"R", toJson(f.R())}, {"RD", toJson(f.RD())}};
}

inline json toJson(const KripkeModel& m) {
  json j = toJson(m.frame);
  j["valuation"] = toJson(m.valuation);
  return j;
}

inline json toJson(const SpaceDocument& d) {
  json opens = json::array();
  for (PointSet u : d.space.space.opens()) opens.push_back(toJson(u));
  json j = {{"points", d.space.space.points()}, {"opens", opens}, {"selected", toJson(d.space.selected)}};
  if (d.valuation) j["valuation"] = toJson(*d.valuation);
  return j;
}

inline json toJson(const CompositeSpace& x) {
  json clusters = json::array();
  for (const auto& c : x.components())
    clusters.push_back({{"m", c.period}, {"infinity", c.hasInfinity}, {"infinityOnly", c.infinityOnly}});
  return {{"clusters", clusters}, {"order", toJson(x.order(), true)}};
}

inline json toJson(const CompositeDocument& d) {
  json j = toJson(d.space);
  if (d.description) {
    j["target"] = toJson(d.description->target);
    json ordering = json::array();
    for (std::size_t a = 0; a < d.description->ordering.size(); ++a) {
      const auto& o = d.description->ordering[a];
      ordering.push_back({{"cluster", d.description->clusterMap.at(a)},
                          {"cycle", o.cycle},
                          {"selected", o.selected ? json(*o.selected) : json(nullptr)}});
    }
    j["ordering"] = ordering;
  }
  return j;
}

inline json toJson(const Document& d) {
  return std::visit(
      [](const auto& v) -> json {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, ReportDocument>)
          return v.body;
        else
          return toJson(v);
      },
      d);
}

namespace detail {

inline bool flat(const json& j) {
  if (j.is_object()) return false;
  if (!j.is_array()) return true;
  return std::all_of(j.begin(), j.end(), [](const json& e) { return !e.is_structured(); });
}

// Objects one key per line; arrays inline when every element is a scalar or
// a flat array (pairs, point lists).
inline void format(const json& j, std::size_t indent, std::string& out) {
  const std::string pad(indent + 2, ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (auto it = j.begin(); it != j.end(); ++it, ++i) {
      out += pad + json(it.key()).dump() + ": ";
      format(it.value(), indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "}";
  } else if (j.is_array() && !std::all_of(j.begin(), j.end(), flat)) {
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      out += pad;
      format(j[i], indent + 2, out);
      out += i + 1 < j.size() ? ",\n" : "\n";
    }
    out += std::string(indent, ' ') + "]";
  } else {
    out += j.dump();
  }
}

}  // namespace detail

/// Canonical text: sorted keys, one key per line, point lists and pair lists
/// inline, trailing newline.
inline std::string format(const json& j) {
  std::string out;
  detail::format(j, 0, out);
  return out + "\n";
}

inline std::string serialize(const Document& d) { return format(toJson(d)); }

// ---------------------------------------------------------------------------
// Decoding

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& where = "") {
  if (!j.is_object()) throw SchemaError((where.empty() ? std::string("document") : where) + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + key + ": missing");
  return *it;
}

inline std::size_t count(const json& j, const std::string& name, std::size_t lo, std::size_t hi) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw SchemaError(name + ": expected a non-negative integer");
  const auto v = j.get<std::size_t>();
  if (v < lo || v > hi) throw SchemaError(name + ": must be in " + std::to_string(lo) + ".." + std::to_string(hi));
  return v;
}

inline std::size_t index(const json& j, const std::string& name, std::size_t n, const std::string& bound) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw SchemaError(name + ": expected a non-negative integer");
  const auto v = j.get<std::size_t>();
  if (v >= n) throw SchemaError(name + " ≥ " + bound);
  return v;
}

inline PointSet pointSet(const json& j, const std::string& name, std::size_t n, const std::string& bound) {
  if (!j.is_array()) throw SchemaError(name + ": expected an array");
  PointSet s;
  for (std::size_t i = 0; i < j.size(); ++i) s.insert(index(j[i], name + "[" + std::to_string(i) + "]", n, bound));
  return s;
}

inline Relation relation(const json& j, const std::string& name, std::size_t n, const std::string& bound) {
  if (!j.is_array()) throw SchemaError(name + ": expected an array of pairs");
  Relation r(n);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = name + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != 2) throw SchemaError(at + ": expected a pair");
    r.add(index(j[i][0], at + "[0]", n, bound), index(j[i][1], at + "[1]", n, bound));
  }
  return r;
}

inline Valuation valuation(const json& j, std::size_t n, const std::string& bound) {
  if (!j.is_object()) throw SchemaError("valuation: expected an object");
  Valuation v;
  for (const auto& [name, set] : j.items()) v.emplace(name, pointSet(set, "valuation." + name, n, bound));
  return v;
}

inline KripkeFrame frame(const json& j) {
  const std::size_t n = count(field(j, "worlds"), "worlds", 1, kMaxPoints);
  return KripkeFrame(relation(field(j, "R"), "R", n, "worlds"), relation(field(j, "RD"), "RD", n, "worlds"));
}

inline SpaceDocument space(const json& j) {
  const std::size_t n = count(field(j, "points"), "points", 1, kMaxPoints);
  const json& opensJ = field(j, "opens");
  if (!opensJ.is_array()) throw SchemaError("opens: expected an array");
  std::vector<PointSet> opens;
  for (std::size_t i = 0; i < opensJ.size(); ++i)
    opens.push_back(pointSet(opensJ[i], "opens[" + std::to_string(i) + "]", n, "points"));
  if (!isTopology(n, opens)) throw SchemaError("opens: not a topology");
  PointSet selected = j.contains("selected") ? pointSet(j["selected"], "selected", n, "points") : PointSet::full(n);
  SpaceDocument d{SelectedSpace(FiniteSpace(n, std::move(opens)), selected), std::nullopt};
  if (j.contains("valuation")) d.valuation = valuation(j["valuation"], n, "points");
  return d;
}

inline CompositeDocument composite(const json& j) {
  const json& cj = field(j, "clusters");
  if (!cj.is_array() || cj.empty() || cj.size() > kMaxPoints) throw SchemaError("clusters: expected 1..64 entries");
  std::vector<ClusterComponent> comps;
  for (std::size_t i = 0; i < cj.size(); ++i) {
    const std::string at = "clusters[" + std::to_string(i) + "].";
    ClusterComponent c;
    c.period = count(field(cj[i], "m", at), at + "m", 0, 1U << 16);
    const json& inf = field(cj[i], "infinity", at);
    if (!inf.is_boolean()) throw SchemaError(at + "infinity: expected a boolean");
    c.hasInfinity = inf.get<bool>();
    if (cj[i].contains("infinityOnly")) {
      if (!cj[i]["infinityOnly"].is_boolean()) throw SchemaError(at + "infinityOnly: expected a boolean");
      c.infinityOnly = cj[i]["infinityOnly"].get<bool>();
    }
    if (!c.valid()) throw SchemaError(at + "m: inconsistent with infinity flags");
    comps.push_back(c);
  }
  Relation order = relation(field(j, "order"), "order", comps.size(), "clusters").unionWith(Relation::identity(comps.size()));
  if (!order.transitive() || !order.antisymmetric()) throw SchemaError("order: not a partial order");
  CompositeDocument d{CompositeSpace(std::move(comps), std::move(order)), std::nullopt};
  if (j.contains("target") || j.contains("ordering")) {
    KripkeFrame target = frame(field(j, "target"));
    const json& oj = field(j, "ordering");
    if (!oj.is_array() || oj.size() != d.space.size()) throw SchemaError("ordering: expected one entry per cluster");
    std::vector<std::size_t> clusterMap;
    std::vector<ClusterOrdering> ordering;
    for (std::size_t a = 0; a < oj.size(); ++a) {
      const std::string at = "ordering[" + std::to_string(a) + "].";
      clusterMap.push_back(count(field(oj[a], "cluster", at), at + "cluster", 0, kMaxPoints));
      const json& cyc = field(oj[a], "cycle", at);
      if (!cyc.is_array()) throw SchemaError(at + "cycle: expected an array");
      ClusterOrdering o;
      for (std::size_t i = 0; i < cyc.size(); ++i)
        o.cycle.push_back(index(cyc[i], at + "cycle[" + std::to_string(i) + "]", target.worlds(), "worlds"));
      const json& sel = field(oj[a], "selected", at);
      if (!sel.is_null()) o.selected = index(sel, at + "selected", target.worlds(), "worlds");
      ordering.push_back(std::move(o));
    }
    d.description = PMorphismDescription{d.space, std::move(target), std::move(clusterMap), std::move(ordering)};
  }
  return d;
}

}  // namespace detail

/// Report schema: an object with a string "report" and an integer "exit" in 0..2.
inline void validateReport(const json& j) {
  const json& name = detail::field(j, "report");
  if (!name.is_string()) throw SchemaError("report: expected a string");
  const json& code = detail::field(j, "exit");
  if (!code.is_number_integer() || code.get<int>() < 0 || code.get<int>() > 2)
    throw SchemaError("exit: expected 0, 1 or 2");
}

inline Document fromJson(const json& j) {
  if (!j.is_object()) throw SchemaError("document: expected an object");
  if (j.contains("report")) {
    validateReport(j);
    return ReportDocument{j};
  }
  if (j.contains("worlds")) {
    KripkeFrame f = detail::frame(j);
    if (!j.contains("valuation")) return f;
    Valuation v = detail::valuation(j["valuation"], f.worlds(), "worlds");
    return KripkeModel(std::move(f), std::move(v));
  }
  if (j.contains("points")) return detail::space(j);
  if (j.contains("clusters")) return detail::composite(j);
  throw SchemaError("document: unrecognised kind (expected worlds, points, clusters or report)");
}

inline Document parseDocument(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("malformed JSON: ") + e.what());
  }
  return fromJson(j);
}

inline Document loadDocument(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parseDocument(ss.str());
}

inline void saveDocument(const Document& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << serialize(d);
}

// ---------------------------------------------------------------------------
// Formulas and reports

inline json toJson(const Formula& f) {
  switch (f.kind()) {
    case Connective::Var: return {{"var", f.name()}};
    case Connective::Bottom: return {{"op", "Bottom"}};
    case Connective::Top: return {{"op", "Top"}};
    default: break;
  }
  static constexpr std::string_view kNames[] = {"Var", "Bottom", "Top", "Not", "And", "Or", "Implies",
                                                "Iff", "Box", "Diamond", "DiffBox", "DiffDiamond", "ForAll"};
  json args = json::array();
  if (arity(f.kind()) == 1) {
    args.push_back(toJson(f.operand()));
  } else {
    args.push_back(toJson(f.left()));
    args.push_back(toJson(f.right()));
  }
  return {{"op", kNames[static_cast<std::size_t>(f.kind())]}, {"args", args}};
}

inline json toJson(const CompositeSet& s) {
  json parts = json::array();
  for (const auto& p : s.parts())
    parts.push_back({{"prefix", p.prefix()}, {"tail", p.tail()}, {"infinity", p.infinity()}});
  return parts;
}

inline json toJson(const FrameClassReport& r) {
  return {{"reflexiveR", r.reflexiveR},
          {"transitiveR", r.transitiveR},
          {"dBox", r.dBox},
          {"symmetricRD", r.symmetricRD},
          {"pseudoTransitiveRD", r.pseudoTransitiveRD},
          {"at0Cluster", r.at0Cluster},
          {"isCone", r.isCone},
          {"isS4DCone", r.isS4DCone},
          {"isS4DT0Cone", r.isS4DT0Cone}};
}

}  // namespace s4dt0::io
