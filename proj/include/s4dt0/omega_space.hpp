/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

// Countable spaces built from one component per cluster of a finite cone.
// A component has finite points x_1, x_2, ... and possibly a point +inf;
// its nonempty opens are the tails U_n = {x_m | m >= n} (plus +inf when
// present), or just {+inf} for a component that is a single selected point.
// The whole space is topologised over a partial order of components: a set
// is open iff it is a union, over an up-set of components, of one nonempty
// component open per component of the up-set.
//
// Point sets are represented exactly by a finite prefix of explicit
// memberships followed by a pattern periodic in the component period.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "s4dt0/error.hpp"
#include "s4dt0/evaluator.hpp"
#include "s4dt0/point_set.hpp"

namespace s4dt0 {

struct ClusterComponent {
  std::size_t period = 1;  // number of finite residues; 0 iff infinityOnly
  bool hasInfinity = false;
  bool infinityOnly = false;

  static ClusterComponent finite(std::size_t m) { return {m, false, false}; }
  static ClusterComponent withInfinity(std::size_t m) { return {m, true, false}; }
  static ClusterComponent infinityPoint() { return {0, true, true}; }

  bool valid() const { return infinityOnly ? (hasInfinity && period == 0) : period >= 1; }
  bool operator==(const ClusterComponent&) const = default;
};

/// Index of the +inf point; finite points are numbered from 1.
inline constexpr std::size_t kInfinity = 0;

struct CompositePoint {
  std::size_t component = 0;
  std::size_t index = kInfinity;

  bool isInfinity() const { return index == kInfinity; }
  std::string toString() const {
    return "c" + std::to_string(component) + ":" + (isInfinity() ? std::string("+inf") : "x" + std::to_string(index));
  }
  auto operator<=>(const CompositePoint&) const = default;
};

/// Points of one component: explicit membership for indices 1..k, then
/// membership of index i > k given by tail[(i-1) mod period].
/// Always stored with the shortest possible prefix.
class ComponentSet {
 public:
  ComponentSet() = default;
  ComponentSet(std::vector<bool> prefix, std::vector<bool> tail, bool infinity)
      : prefix_(std::move(prefix)), tail_(std::move(tail)), infinity_(infinity) {
    if (tail_.empty() && std::find(prefix_.begin(), prefix_.end(), true) != prefix_.end())
      throw InvalidArgument("component without finite points has a nonempty prefix");
    if (tail_.empty()) prefix_.clear();
    while (!prefix_.empty() && prefix_.back() == tail_[(prefix_.size() - 1) % tail_.size()]) prefix_.pop_back();
  }

  static ComponentSet none(const ClusterComponent& c) { return {{}, std::vector<bool>(c.period, false), false}; }
  static ComponentSet all(const ClusterComponent& c) { return {{}, std::vector<bool>(c.period, true), c.hasInfinity}; }
  /// U_n (with +inf when present); for an infinity-only component, {+inf}.
  static ComponentSet tailFrom(const ClusterComponent& c, std::size_t n) {
    std::vector<bool> prefix(c.infinityOnly || n == 0 ? 0 : n - 1, false);
    return {std::move(prefix), std::vector<bool>(c.period, true), c.hasInfinity};
  }

  const std::vector<bool>& prefix() const { return prefix_; }
  const std::vector<bool>& tail() const { return tail_; }
  bool infinity() const { return infinity_; }
  std::size_t period() const { return tail_.size(); }

  bool contains(std::size_t index) const {
    if (index == kInfinity) return infinity_;
    if (index <= prefix_.size()) return prefix_[index - 1];
    return !tail_.empty() && tail_[(index - 1) % tail_.size()];
  }
  bool tailAll() const { return std::find(tail_.begin(), tail_.end(), false) == tail_.end(); }
  bool tailNone() const { return std::find(tail_.begin(), tail_.end(), true) == tail_.end(); }

  /// Pointwise combination with another set of the same period.
  template <class Op>
  ComponentSet combine(const ComponentSet& o, Op op) const {
    if (o.period() != period()) throw SpaceMismatch("component periods differ");
    const std::size_t k = std::max(prefix_.size(), o.prefix_.size());
    std::vector<bool> prefix(k);
    for (std::size_t i = 1; i <= k; ++i) prefix[i - 1] = op(contains(i), o.contains(i));
    std::vector<bool> tail(period());
    for (std::size_t r = 0; r < period(); ++r) tail[r] = op(tail_[r], o.tail_[r]);
    return {std::move(prefix), std::move(tail), op(infinity_, o.infinity_)};
  }

  bool operator==(const ComponentSet&) const = default;

 private:
  std::vector<bool> prefix_;
  std::vector<bool> tail_;
  bool infinity_ = false;
};

/// The shortest-prefix property; holds for every constructed ComponentSet.
inline bool isCanonical(const ComponentSet& s) {
  if (s.tail().empty()) return s.prefix().empty();
  if (s.prefix().empty()) return true;
  const std::size_t k = s.prefix().size();
  return s.prefix().back() != s.tail()[(k - 1) % s.period()];
}

inline std::string describe(const ComponentSet& s) {
  auto bits = [](const std::vector<bool>& v) {
    std::string out;
    for (bool b : v) out += b ? '1' : '0';
    return out;
  };
  return "[" + bits(s.prefix()) + "|" + bits(s.tail()) + "]" + (s.infinity() ? "+inf" : "");
}

/// Components over a partial order of cluster ids.
class CompositeSpace {
 public:
  CompositeSpace(std::vector<ClusterComponent> components, Relation order)
      : components_(std::move(components)), order_(std::move(order)) {
    if (components_.empty() || components_.size() > kMaxPoints)
      throw InvalidArgument("composite space needs 1..64 components");
    if (order_.size() != components_.size()) throw InvalidArgument("order size differs from component count");
    for (const auto& c : components_)
      if (!c.valid()) throw InvalidArgument("invalid cluster component");
    if (!order_.reflexive() || !order_.transitive() || !order_.antisymmetric())
      throw InvalidArgument("component order is not a partial order");
  }

  const std::vector<ClusterComponent>& components() const { return components_; }
  const ClusterComponent& component(std::size_t a) const { return components_.at(a); }
  std::size_t size() const { return components_.size(); }
  const Relation& order() const { return order_; }
  std::size_t maxPeriod() const {
    std::size_t m = 0;
    for (const auto& c : components_) m = std::max(m, c.period);
    return m;
  }

  bool operator==(const CompositeSpace&) const = default;

 private:
  std::vector<ClusterComponent> components_;
  Relation order_;
};

class CompositeSet {
 public:
  CompositeSet() = default;
  explicit CompositeSet(std::vector<ComponentSet> parts) : parts_(std::move(parts)) {}

  static CompositeSet none(const CompositeSpace& x) {
    std::vector<ComponentSet> parts;
    for (const auto& c : x.components()) parts.push_back(ComponentSet::none(c));
    return CompositeSet(std::move(parts));
  }
  static CompositeSet all(const CompositeSpace& x) {
    std::vector<ComponentSet> parts;
    for (const auto& c : x.components()) parts.push_back(ComponentSet::all(c));
    return CompositeSet(std::move(parts));
  }
  static CompositeSet point(const CompositeSpace& x, CompositePoint p) {
    CompositeSet s = none(x);
    auto& part = s.parts_.at(p.component);
    if (p.isInfinity()) {
      part = ComponentSet(part.prefix(), part.tail(), true);
    } else {
      std::vector<bool> prefix(p.index, false);
      prefix.back() = true;
      part = ComponentSet(std::move(prefix), part.tail(), false);
    }
    return s;
  }

  std::size_t size() const { return parts_.size(); }
  const ComponentSet& part(std::size_t a) const { return parts_.at(a); }
  ComponentSet& part(std::size_t a) { return parts_.at(a); }
  const std::vector<ComponentSet>& parts() const { return parts_; }
  bool contains(CompositePoint p) const { return parts_.at(p.component).contains(p.index); }

  bool operator==(const CompositeSet&) const = default;

 private:
  std::vector<ComponentSet> parts_;
};

inline std::string describe(const CompositeSet& s) {
  std::string out;
  for (std::size_t a = 0; a < s.size(); ++a) out += (a ? " " : "") + ("c" + std::to_string(a) + describe(s.part(a)));
  return out;
}

/// True iff `s` has the shape of a set over `x` and every part is canonical.
inline bool conformsTo(const CompositeSet& s, const CompositeSpace& x) {
  if (s.size() != x.size()) return false;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto& c = x.component(a);
    const auto& p = s.part(a);
    if (p.period() != c.period || (!c.hasInfinity && p.infinity()) || !isCanonical(p)) return false;
  }
  return true;
}

namespace detail {

template <class Op>
CompositeSet combine(const CompositeSet& a, const CompositeSet& b, Op op) {
  if (a.size() != b.size()) throw SpaceMismatch("composite sets over different spaces");
  std::vector<ComponentSet> parts;
  parts.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) parts.push_back(a.part(i).combine(b.part(i), op));
  return CompositeSet(std::move(parts));
}

inline void requireConforms(const CompositeSet& s, const CompositeSpace& x) {
  if (!conformsTo(s, x)) throw SpaceMismatch("set does not belong to this composite space");
}

}  // namespace detail

inline CompositeSet unite(const CompositeSet& a, const CompositeSet& b) {
  return detail::combine(a, b, [](bool p, bool q) { return p || q; });
}
inline CompositeSet intersect(const CompositeSet& a, const CompositeSet& b) {
  return detail::combine(a, b, [](bool p, bool q) { return p && q; });
}
inline CompositeSet complement(const CompositeSpace& x, const CompositeSet& a) {
  detail::requireConforms(a, x);
  return detail::combine(CompositeSet::all(x), a, [](bool p, bool q) { return p && !q; });
}
inline bool subsetOf(const CompositeSet& a, const CompositeSet& b) { return intersect(a, b) == a; }

inline bool isEmpty(const CompositeSet& a) {
  for (const auto& p : a.parts())
    if (p.infinity() || !p.tailNone() || std::find(p.prefix().begin(), p.prefix().end(), true) != p.prefix().end())
      return false;
  return true;
}

/// The unique member of `a` if it has exactly one.
inline std::optional<CompositePoint> isSingleton(const CompositeSet& a) {
  std::optional<CompositePoint> found;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const auto& p = a.part(c);
    if (!p.tailNone()) return std::nullopt;  // infinitely many
    std::vector<CompositePoint> members;
    for (std::size_t i = 1; i <= p.prefix().size(); ++i)
      if (p.prefix()[i - 1]) members.push_back({c, i});
    if (p.infinity()) members.push_back({c, kInfinity});
    for (const auto& m : members) {
      if (found) return std::nullopt;
      found = m;
    }
  }
  return found;
}

/// True iff the part of `s` in component `c` contains a nonempty component open.
inline bool containsComponentOpen(const ClusterComponent& c, const ComponentSet& s) {
  if (c.infinityOnly) return s.infinity();
  return s.tailAll() && (!c.hasInfinity || s.infinity());
}

inline CompositeSet interiorComposite(const CompositeSpace& x, const CompositeSet& s) {
  detail::requireConforms(s, x);
  std::vector<ComponentSet> parts;
  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto& c = x.component(a);
    const auto& part = s.part(a);
    bool upOk = containsComponentOpen(c, part);
    x.order().successors(a).forEach([&](std::size_t b) {
      if (b != a && !containsComponentOpen(x.component(b), s.part(b))) upOk = false;
    });
    if (!upOk) {
      parts.push_back(ComponentSet::none(c));
      continue;
    }
    // Largest own-component open inside the part: U_j with j past the last gap.
    std::size_t start = 1;
    for (std::size_t i = 1; i <= part.prefix().size(); ++i)
      if (!part.prefix()[i - 1]) start = i + 1;
    parts.push_back(ComponentSet::tailFrom(c, start));
  }
  return CompositeSet(std::move(parts));
}

inline bool isOpen(const CompositeSpace& x, const CompositeSet& s) { return interiorComposite(x, s) == s; }

/// Whole components over the up-set generated by component a.
inline CompositeSet upsetOpen(const CompositeSpace& x, std::size_t a) {
  CompositeSet s = CompositeSet::none(x);
  x.order().successors(a).forEach([&](std::size_t b) { s.part(b) = ComponentSet::all(x.component(b)); });
  return s;
}

class CompositeAlgebra {
 public:
  using Set = CompositeSet;

  explicit CompositeAlgebra(const CompositeSpace& x) : x_(&x) {}

  Set full() const { return CompositeSet::all(*x_); }
  Set empty() const { return CompositeSet::none(*x_); }
  Set complement(const Set& s) const { return s4dt0::complement(*x_, s); }
  Set meet(const Set& a, const Set& b) const { return intersect(a, b); }
  Set join(const Set& a, const Set& b) const { return unite(a, b); }
  Set box(const Set& s) const { return interiorComposite(*x_, s); }
  Set diamond(const Set& s) const { return complement(box(complement(s))); }
  /// Every point of the space uses the plain difference semantics.
  Set diffBox(const Set& s) const {
    const Set failing = complement(s);
    if (isEmpty(failing)) return full();
    if (isSingleton(failing)) return failing;
    return empty();
  }
  Set diffDiamond(const Set& s) const { return complement(diffBox(complement(s))); }
  Set forAll(const Set& s) const { return s == full() ? full() : empty(); }

 private:
  const CompositeSpace* x_;
};

using CompositeValuation = std::map<std::string, CompositeSet>;

inline CompositeSet evalComposite(const CompositeSpace& x, const CompositeValuation& v, const Formula& f) {
  for (const auto& [name, set] : v)
    if (!conformsTo(set, x)) throw SpaceMismatch("valuation of '" + name + "' does not belong to the space");
  return evaluate(f, CompositeAlgebra(x), v);
}

struct SeparationWitness {
  CompositePoint first;
  CompositePoint second;
  std::string open;  // description of an open containing exactly one of them
};

struct T0Report {
  bool ok = true;
  std::size_t pairsChecked = 0;
  std::vector<SeparationWitness> witnesses;
  std::optional<std::string> failure;
};

/// Checks pairwise separation: across components via the order, within a
/// component for all finite indices up to `indexBound` and against +inf.
inline T0Report t0Check(const CompositeSpace& x, std::size_t indexBound) {
  if (indexBound < 2 * x.maxPeriod() + 2)
    throw InvalidArgument("t0Check: index bound must be at least 2 * max period + 2");
  T0Report report;
  auto record = [&](CompositePoint p, CompositePoint q, const CompositeSet& open, std::string name) {
    ++report.pairsChecked;
    const bool separates = isOpen(x, open) && open.contains(p) != open.contains(q);
    if (!separates && report.ok) {
      report.ok = false;
      report.failure = p.toString() + " and " + q.toString() + " not separated by " + name;
    }
    report.witnesses.push_back({p, q, std::move(name)});
  };
  auto representative = [&](std::size_t a) {
    return x.component(a).infinityOnly ? CompositePoint{a, kInfinity} : CompositePoint{a, 1};
  };

  for (std::size_t a = 0; a < x.size(); ++a)
    for (std::size_t b = a + 1; b < x.size(); ++b) {
      std::size_t from = a;
      std::size_t other = b;
      if (x.order()(a, b)) {
        if (x.order()(b, a)) {
          report.ok = false;
          report.failure = "components " + std::to_string(a) + " and " + std::to_string(b) + " are mutually ordered";
          continue;
        }
        std::swap(from, other);
      }
      // Whole components: the open holds all of `from` and none of `other`.
      CompositeSet open = upsetOpen(x, from);
      const bool whole = open.part(from) == ComponentSet::all(x.component(from)) &&
                         open.part(other) == ComponentSet::none(x.component(other));
      if (!whole && report.ok) {
        report.ok = false;
        report.failure = "up-set of component " + std::to_string(from) + " meets component " + std::to_string(other);
      }
      record(representative(from), representative(other), open, "O(up " + std::to_string(from) + ")");
    }

  for (std::size_t a = 0; a < x.size(); ++a) {
    const auto& c = x.component(a);
    if (c.infinityOnly) continue;
    auto replaced = [&](std::size_t n) {
      CompositeSet s = CompositeSet::all(x);
      s.part(a) = ComponentSet::tailFrom(c, n);
      return s;
    };
    for (std::size_t i = 1; i <= indexBound; ++i) {
      for (std::size_t j = i + 1; j <= indexBound; ++j)
        record({a, i}, {a, j}, replaced(j), "X with c" + std::to_string(a) + " replaced by U_" + std::to_string(j));
      if (c.hasInfinity)
        record({a, i}, {a, kInfinity}, replaced(i + 1),
               "X with c" + std::to_string(a) + " replaced by U_" + std::to_string(i + 1) + "+inf");
    }
  }
  return report;
}

}  // namespace s4dt0
