/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "s4dt0/error.hpp"
#include "s4dt0/kripke.hpp"
#include "s4dt0/omega_space.hpp"
#include "s4dt0/topo.hpp"

namespace s4dt0 {

// ---------------------------------------------------------------------------
// Maps between finite spaces with selected points

struct FiniteMap {
  SelectedSpace domain;
  SelectedSpace codomain;
  std::vector<std::size_t> table;

  FiniteMap(SelectedSpace d, SelectedSpace c, std::vector<std::size_t> t)
      : domain(std::move(d)), codomain(std::move(c)), table(std::move(t)) {
    if (table.size() != domain.space.points()) throw InvalidArgument("map table is not total on the domain");
    for (std::size_t y : table)
      if (y >= codomain.space.points()) throw InvalidArgument("map table leaves the codomain");
  }

  PointSet image(PointSet s) const {
    PointSet out;
    s.forEach([&](std::size_t x) { out.insert(table[x]); });
    return out;
  }
  PointSet preimage(PointSet z) const {
    PointSet out;
    for (std::size_t x = 0; x < table.size(); ++x)
      if (z.contains(table[x])) out.insert(x);
    return out;
  }
};

struct InteriorReport {
  bool continuous = false;
  bool open = false;
  /// f⁻¹(I Z) = I f⁻¹(Z) for every Z ⊆ codomain.
  bool commutesWithInterior = false;
};

inline InteriorReport interiorReport(const FiniteMap& f) {
  const FiniteSpace& dom = f.domain.space;
  const FiniteSpace& cod = f.codomain.space;
  InteriorReport r{true, true, true};
  for (PointSet u : cod.opens())
    if (!dom.isOpen(f.preimage(u))) r.continuous = false;
  for (PointSet u : dom.opens())
    if (!cod.isOpen(f.image(u))) r.open = false;
  if (cod.points() > 20) throw BudgetExceeded("interior cross-check over more than 2^20 subsets");
  for (std::uint64_t b = 0; b <= cod.all().bits(); ++b) {
    PointSet z(b);
    if (f.preimage(cod.interior(z)) != dom.interior(f.preimage(z))) {
      r.commutesWithInterior = false;
      break;
    }
  }
  return r;
}

/// Continuous and open.
inline bool checkInterior(const FiniteMap& f) {
  const InteriorReport r = interiorReport(f);
  return r.continuous && r.open;
}

/// Surjective interior map whose codomain selected points are exactly the
/// images of selected points with a one-point fibre.
inline bool checkPMorphismFinite(const FiniteMap& f) {
  const PointSet all = f.codomain.space.all();
  if (f.image(f.domain.space.all()) != all) return false;
  if (!checkInterior(f)) return false;
  PointSet expected;
  for (std::size_t y = 0; y < f.codomain.space.points(); ++y) {
    PointSet fibre = f.preimage(PointSet::single(y));
    if (fibre.size() == 1 && f.domain.selected.contains(fibre.first())) expected.insert(y);
  }
  return expected == f.codomain.selected;
}

// ---------------------------------------------------------------------------
// The countable T0 space over an S4DT0 cone

/// Target points of one component: finite index i goes to
/// cycle[(i-1) mod m], +inf goes to `selected`.
struct ClusterOrdering {
  std::vector<std::size_t> cycle;
  std::optional<std::size_t> selected;

  bool operator==(const ClusterOrdering&) const = default;
};

struct PMorphismDescription {
  CompositeSpace source;
  KripkeFrame target;
  std::vector<std::size_t> clusterMap;  // component -> index into clusters(target)
  std::vector<ClusterOrdering> ordering;

  std::size_t apply(CompositePoint p) const {
    const auto& o = ordering.at(p.component);
    if (p.isInfinity()) {
      if (!o.selected) throw InvalidArgument("component " + std::to_string(p.component) + " has no +inf point");
      return *o.selected;
    }
    return o.cycle.at((p.index - 1) % o.cycle.size());
  }

  /// f⁻¹(y) for a set of target worlds.
  CompositeSet pullback(PointSet y) const {
    if (!y.subsetOf(target.all())) throw SpaceMismatch("set exceeds the target worlds");
    std::vector<ComponentSet> parts;
    for (std::size_t a = 0; a < source.size(); ++a) {
      const auto& o = ordering[a];
      std::vector<bool> tail(o.cycle.size());
      for (std::size_t r = 0; r < o.cycle.size(); ++r) tail[r] = y.contains(o.cycle[r]);
      const bool inf = source.component(a).hasInfinity && o.selected && y.contains(*o.selected);
      parts.emplace_back(std::vector<bool>{}, std::move(tail), inf);
    }
    return CompositeSet(std::move(parts));
  }

  PointSet image(const CompositeSet& s) const {
    PointSet out;
    for (std::size_t a = 0; a < source.size(); ++a) {
      const auto& part = s.part(a);
      const auto& o = ordering[a];
      for (std::size_t i = 1; i <= part.prefix().size(); ++i)
        if (part.prefix()[i - 1]) out.insert(o.cycle[(i - 1) % o.cycle.size()]);
      for (std::size_t r = 0; r < part.tail().size(); ++r)
        if (part.tail()[r]) out.insert(o.cycle[r]);
      if (part.infinity() && o.selected) out.insert(*o.selected);
    }
    return out;
  }

  bool operator==(const PMorphismDescription&) const = default;
};

/// One component per cluster (ascending by least world). A cluster without
/// selected point cycles through all its worlds; a cluster with selected
/// point w0 cycles through the others and sends +inf to w0; a selected
/// singleton cluster becomes the lone point +inf.
inline PMorphismDescription buildSpace(const KripkeFrame& f) {
  if (auto why = classViolation(f, FrameClass::S4DT0Cone)) throw NotS4DT0Cone("not an S4DT0 cone: " + *why);
  const std::vector<PointSet> cl = clusters(f);
  std::vector<ClusterComponent> components;
  std::vector<ClusterOrdering> ordering;
  std::vector<std::size_t> clusterMap;
  for (std::size_t a = 0; a < cl.size(); ++a) {
    ClusterOrdering o;
    cl[a].forEach([&](std::size_t w) {
      if (f.RD()(w, w)) {
        o.cycle.push_back(w);
      } else {
        if (o.selected) throw NotS4DT0Cone("cluster " + cl[a].toString() + " has two selected points");
        o.selected = w;
      }
    });
    if (!o.selected) {
      components.push_back(ClusterComponent::finite(o.cycle.size()));
    } else if (o.cycle.empty()) {
      components.push_back(ClusterComponent::infinityPoint());
    } else {
      components.push_back(ClusterComponent::withInfinity(o.cycle.size()));
    }
    ordering.push_back(std::move(o));
    clusterMap.push_back(a);
  }
  Relation order(cl.size());
  for (std::size_t a = 0; a < cl.size(); ++a)
    for (std::size_t b = 0; b < cl.size(); ++b)
      if (f.R()(cl[a].first(), cl[b].first())) order.add(a, b);
  return PMorphismDescription{CompositeSpace(std::move(components), std::move(order)), f, std::move(clusterMap),
                              std::move(ordering)};
}

struct PMorphismReport {
  bool wellFormed = false;
  bool surjective = false;
  bool continuous = false;
  bool open = false;
  bool selectedFibres = false;
  std::optional<std::string> failure;  // first failing check with a witness

  bool ok() const { return wellFormed && surjective && continuous && open && selectedFibres; }
};

namespace detail {

inline std::optional<std::string> descriptionShapeError(const PMorphismDescription& d) {
  const std::size_t n = d.target.worlds();
  if (d.ordering.size() != d.source.size() || d.clusterMap.size() != d.source.size())
    return "ordering or cluster map size differs from the component count";
  std::vector<PointSet> cl;
  try {
    cl = clusters(d.target);
  } catch (const NotPreorder& e) {
    return std::string("target: ") + e.what();
  }
  for (std::size_t a = 0; a < d.source.size(); ++a) {
    const auto& c = d.source.component(a);
    const auto& o = d.ordering[a];
    const std::string comp = "component " + std::to_string(a);
    if (o.cycle.size() != c.period) return comp + ": cycle length differs from its period";
    if (o.selected.has_value() != c.hasInfinity) return comp + ": +inf point and selected target disagree";
    if (d.clusterMap[a] >= cl.size()) return comp + ": cluster map out of range";
    for (std::size_t w : o.cycle)
      if (w >= n || !cl[d.clusterMap[a]].contains(w))
        return comp + ": world " + std::to_string(w) + " outside its cluster";
    if (o.selected && (*o.selected >= n || !cl[d.clusterMap[a]].contains(*o.selected)))
      return comp + ": selected world outside its cluster";
  }
  return std::nullopt;
}

/// Union over the up-set of component a of the tails U_n.
inline CompositeSet generatorOpen(const CompositeSpace& x, std::size_t a, std::size_t n) {
  CompositeSet s = CompositeSet::none(x);
  x.order().successors(a).forEach([&](std::size_t b) { s.part(b) = ComponentSet::tailFrom(x.component(b), n); });
  return s;
}

}  // namespace detail

/// Exact checks of the map described by `d` onto Top_D of its target.
/// Continuity is checked on the minimal opens R(w) of the target, openness
/// on the generating opens of the source.
inline PMorphismReport verifyPMorphism(const PMorphismDescription& d) {
  PMorphismReport r;
  auto fail = [&](std::string why) {
    if (!r.failure) r.failure = std::move(why);
  };
  if (auto why = detail::descriptionShapeError(d)) {
    fail("malformed description: " + *why);
    return r;
  }
  r.wellFormed = true;
  const KripkeFrame& f = d.target;

  const PointSet hit = d.image(CompositeSet::all(d.source));
  r.surjective = hit == f.all();
  if (!r.surjective)
    fail("surjectivity: world " + std::to_string((f.all() - hit).first()) + " has no preimage");

  r.continuous = true;
  for (std::size_t w = 0; w < f.worlds(); ++w) {
    const PointSet minimal = f.R().successors(w);
    if (!isOpen(d.source, d.pullback(minimal))) {
      r.continuous = false;
      fail("continuity: preimage of R(" + std::to_string(w) + ") = " + minimal.toString() + " is not open");
      break;
    }
  }

  r.open = true;
  for (std::size_t a = 0; a < d.source.size() && r.open; ++a) {
    const std::size_t m = d.source.component(a).period;
    for (std::size_t n : {std::size_t{1}, m + 1, 2 * m + 1}) {
      const PointSet img = d.image(detail::generatorOpen(d.source, a, n));
      if (!f.R().image(img).subsetOf(img)) {
        r.open = false;
        fail("openness: image " + img.toString() + " of generator (up " + std::to_string(a) + ", U_" +
             std::to_string(n) + ") is not R-up-closed");
        break;
      }
    }
  }

  r.selectedFibres = true;
  for (std::size_t w = 0; w < f.worlds(); ++w) {
    const auto single = isSingleton(d.pullback(PointSet::single(w)));
    const bool selected = !f.RD()(w, w);
    const bool singleInfinity = single && single->isInfinity();
    if (selected != singleInfinity || (single && !single->isInfinity())) {
      r.selectedFibres = false;
      fail("selected fibres: world " + std::to_string(w) + (selected ? " is selected" : " is not selected") +
           " but its fibre " + (single ? "is the single point " + single->toString() : "is not a singleton"));
      break;
    }
  }
  return r;
}

struct TransferResult {
  CompositeSet composite;  // truth set in the countable space
  CompositeSet pulled;     // f⁻¹ of the truth set on the cone
  bool holds() const { return composite == pulled; }
};

inline TransferResult truthTransferDetail(const PMorphismDescription& d, const Valuation& targetValuation,
                                          const Formula& phi) {
  CompositeValuation pulled;
  for (const auto& [name, set] : targetValuation) pulled.emplace(name, d.pullback(set));
  for (const auto& name : variables(phi))
    if (!pulled.count(name)) pulled.emplace(name, CompositeSet::none(d.source));
  const PointSet onCone = evalKripke(KripkeModel(d.target, targetValuation), phi);
  return {evalComposite(d.source, pulled, phi), d.pullback(onCone)};
}

/// f⁻¹(truth set on the cone) equals the truth set of the pulled-back model.
inline bool truthTransfer(const PMorphismDescription& d, const Valuation& targetValuation, const Formula& phi) {
  return truthTransferDetail(d, targetValuation, phi).holds();
}

}  // namespace s4dt0
