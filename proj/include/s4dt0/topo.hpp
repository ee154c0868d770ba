/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "s4dt0/error.hpp"
#include "s4dt0/evaluator.hpp"
#include "s4dt0/kripke.hpp"
#include "s4dt0/point_set.hpp"

namespace s4dt0 {

/// True iff `family` contains ∅ and {0..n-1} and is closed under pairwise
/// union and intersection (enough for finite families).
inline bool isTopology(std::size_t n, std::span<const PointSet> family) {
  if (n == 0 || n > kMaxPoints) return false;
  const PointSet all = PointSet::full(n);
  auto has = [&](PointSet s) { return std::find(family.begin(), family.end(), s) != family.end(); };
  if (!has(PointSet{}) || !has(all)) return false;
  for (PointSet a : family) {
    if (!a.subsetOf(all)) return false;
    for (PointSet b : family)
      if (!has(a | b) || !has(a & b)) return false;
  }
  return true;
}

/// A topology on {0..n-1} given by its open sets (sorted, deduplicated).
class FiniteSpace {
 public:
  FiniteSpace(std::size_t n, std::vector<PointSet> opens) : n_(n), opens_(std::move(opens)) {
    std::sort(opens_.begin(), opens_.end());
    opens_.erase(std::unique(opens_.begin(), opens_.end()), opens_.end());
    if (!isTopology(n_, opens_)) throw InvalidArgument("open family is not a topology");
  }

  static FiniteSpace discrete(std::size_t n) {
    std::vector<PointSet> opens;
    for (std::uint64_t b = 0; b <= PointSet::full(n).bits(); ++b) opens.emplace_back(b);
    return FiniteSpace(n, std::move(opens));
  }
  static FiniteSpace indiscrete(std::size_t n) { return FiniteSpace(n, {PointSet{}, PointSet::full(n)}); }

  std::size_t points() const { return n_; }
  PointSet all() const { return PointSet::full(n_); }
  const std::vector<PointSet>& opens() const { return opens_; }
  bool isOpen(PointSet s) const { return std::binary_search(opens_.begin(), opens_.end(), s); }

  /// Union of the opens contained in z.
  PointSet interior(PointSet z) const {
    PointSet out;
    for (PointSet u : opens_)
      if (u.subsetOf(z)) out |= u;
    return out;
  }

  /// Points all of whose neighbourhoods meet z.
  PointSet closure(PointSet z) const {
    PointSet out;
    for (std::size_t x = 0; x < n_; ++x) {
      bool meetsAll = true;
      for (PointSet u : opens_)
        if (u.contains(x) && !u.intersects(z)) {
          meetsAll = false;
          break;
        }
      if (meetsAll) out.insert(x);
    }
    return out;
  }

  /// Intersection of the opens containing x.
  PointSet minimalNeighbourhood(std::size_t x) const {
    PointSet out = all();
    for (PointSet u : opens_)
      if (u.contains(x)) out &= u;
    return out;
  }

  bool operator==(const FiniteSpace&) const = default;

 private:
  std::size_t n_;
  std::vector<PointSet> opens_;
};

inline PointSet interior(const FiniteSpace& s, PointSet z) { return s.interior(z); }

inline bool isT0(const FiniteSpace& s) {
  for (std::size_t x = 0; x < s.points(); ++x)
    for (std::size_t y = x + 1; y < s.points(); ++y) {
      bool separated = false;
      for (PointSet u : s.opens())
        if (u.contains(x) != u.contains(y)) {
          separated = true;
          break;
        }
      if (!separated) return false;
    }
  return true;
}

/// A space whose selected points are the RD-irreflexive ones; at every
/// other point [d] also quantifies over the point itself.
struct SelectedSpace {
  FiniteSpace space;
  PointSet selected;

  SelectedSpace(FiniteSpace s, PointSet sel) : space(std::move(s)), selected(sel) {
    if (!selected.subsetOf(space.all())) throw InvalidArgument("selected points out of range");
  }
  /// Every point selected: plain difference semantics.
  static SelectedSpace plain(FiniteSpace s) {
    PointSet all = s.all();
    return SelectedSpace(std::move(s), all);
  }
  bool operator==(const SelectedSpace&) const = default;
};

struct TopoModel {
  SelectedSpace space;
  Valuation valuation;

  TopoModel(SelectedSpace s, Valuation v) : space(std::move(s)), valuation(std::move(v)) {
    for (const auto& [name, set] : valuation)
      if (!set.subsetOf(space.space.all())) throw InvalidArgument("valuation of '" + name + "' exceeds the points");
  }
  bool operator==(const TopoModel&) const = default;
};

class TopoAlgebra {
 public:
  using Set = PointSet;

  explicit TopoAlgebra(const SelectedSpace& s) : s_(&s) {}

  Set full() const { return s_->space.all(); }
  Set empty() const { return {}; }
  Set complement(Set s) const { return s.complement(s_->space.points()); }
  Set meet(Set a, Set b) const { return a & b; }
  Set join(Set a, Set b) const { return a | b; }
  Set box(Set s) const { return s_->space.interior(s); }
  Set diamond(Set s) const { return s_->space.closure(s); }

  Set diffBox(Set s) const {
    const Set failing = complement(s);
    if (failing.empty()) return full();
    if (failing.size() == 1 && s_->selected.contains(failing.first())) return failing;
    return {};
  }
  /// x sees s at some other point, or at itself when x is not selected.
  Set diffDiamond(Set s) const {
    Set out;
    for (std::size_t x = 0; x < s_->space.points(); ++x) {
      const bool elsewhere = !(s - PointSet::single(x)).empty();
      const bool here = s.contains(x) && !s_->selected.contains(x);
      if (elsewhere || here) out.insert(x);
    }
    return out;
  }
  Set forAll(Set s) const { return s == full() ? full() : Set{}; }

 private:
  const SelectedSpace* s_;
};

inline PointSet evalTopo(const TopoModel& m, const Formula& f) {
  return evaluate(f, TopoAlgebra(m.space), m.valuation);
}

/// Validity over all valuations of the formula's variables.
inline bool validOnSpace(const SelectedSpace& s, const Formula& f, std::size_t maxBits = kDefaultValuationBits) {
  const Program prog = compile(f);
  const TopoAlgebra alg(s);
  return forEachValuation(s.space.points(), prog.variables.size(), maxBits,
                          [&](std::span<const PointSet> v) { return evaluate(prog, alg, v) == s.space.all(); });
}

/// Up-closed sets of the preorder R.
inline FiniteSpace alexandroff(const KripkeFrame& f) {
  requirePreorder(f.R());
  if (f.worlds() > 20) throw BudgetExceeded("alexandroff: more than 20 worlds");
  std::vector<PointSet> opens;
  for (std::uint64_t b = 0; b <= f.all().bits(); ++b) {
    PointSet u(b);
    if (f.R().image(u).subsetOf(u)) opens.push_back(u);
  }
  return FiniteSpace(f.worlds(), std::move(opens));
}

/// Top_D(F): the Alexandroff space of R with the RD-irreflexive worlds selected.
inline SelectedSpace topD(const KripkeFrame& f) {
  if (!frameClass(f).isS4DCone) throw NotS4DCone("topD requires an S4D-cone");
  PointSet selected;
  for (std::size_t x = 0; x < f.worlds(); ++x)
    if (!f.RD()(x, x)) selected.insert(x);
  return SelectedSpace(alexandroff(f), selected);
}

/// Specialization preorder: x R y iff y lies in every open containing x.
inline Relation specialization(const FiniteSpace& s) {
  Relation r(s.points());
  for (std::size_t x = 0; x < s.points(); ++x) s.minimalNeighbourhood(x).forEach([&](std::size_t y) { r.add(x, y); });
  return r;
}

}  // namespace s4dt0
