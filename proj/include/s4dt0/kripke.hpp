/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "s4dt0/error.hpp"
#include "s4dt0/evaluator.hpp"
#include "s4dt0/point_set.hpp"
#include "s4dt0/syntax.hpp"

namespace s4dt0 {

using Valuation = std::map<std::string, PointSet>;

/// Finite frame with the interior relation R and the difference relation RD.
/// No frame condition is imposed here; see frameClass().
class KripkeFrame {
 public:
  KripkeFrame(Relation r, Relation rd) : r_(std::move(r)), rd_(std::move(rd)) {
    if (r_.size() == 0 || r_.size() > kMaxPoints) throw InvalidArgument("frame must have 1..64 worlds");
    if (rd_.size() != r_.size()) throw InvalidArgument("R and RD sizes differ");
  }

  std::size_t worlds() const { return r_.size(); }
  const Relation& R() const { return r_; }
  const Relation& RD() const { return rd_; }
  PointSet all() const { return PointSet::full(worlds()); }

  bool operator==(const KripkeFrame&) const = default;

 private:
  Relation r_;
  Relation rd_;
};

struct KripkeModel {
  KripkeFrame frame;
  Valuation valuation;

  KripkeModel(KripkeFrame f, Valuation v) : frame(std::move(f)), valuation(std::move(v)) {
    for (const auto& [name, set] : valuation)
      if (!set.subsetOf(frame.all())) throw InvalidArgument("valuation of '" + name + "' exceeds the worlds");
  }
  bool operator==(const KripkeModel&) const = default;
};

/// Truth-set semantics over a Kripke frame: [] quantifies over R, [d] over RD.
class KripkeAlgebra {
 public:
  using Set = PointSet;

  explicit KripkeAlgebra(const KripkeFrame& f) : frame_(&f) {}

  Set full() const { return frame_->all(); }
  Set empty() const { return {}; }
  Set complement(Set s) const { return s.complement(frame_->worlds()); }
  Set meet(Set a, Set b) const { return a & b; }
  Set join(Set a, Set b) const { return a | b; }
  Set box(Set s) const { return necessity(frame_->R(), s); }
  Set diamond(Set s) const { return possibility(frame_->R(), s); }
  Set diffBox(Set s) const { return necessity(frame_->RD(), s); }
  Set diffDiamond(Set s) const { return possibility(frame_->RD(), s); }
  Set forAll(Set s) const { return diffBox(s) & s; }

 private:
  Set necessity(const Relation& rel, Set s) const {
    Set out;
    for (std::size_t x = 0; x < frame_->worlds(); ++x)
      if (rel.successors(x).subsetOf(s)) out.insert(x);
    return out;
  }
  Set possibility(const Relation& rel, Set s) const {
    Set out;
    for (std::size_t x = 0; x < frame_->worlds(); ++x)
      if (rel.successors(x).intersects(s)) out.insert(x);
    return out;
  }

  const KripkeFrame* frame_;
};

inline PointSet evalKripke(const KripkeModel& m, const Formula& f) {
  return evaluate(f, KripkeAlgebra(m.frame), m.valuation);
}

/// Default cap on n * |vars| for brute-force validity checks.
inline constexpr std::size_t kDefaultValuationBits = 24;

/// Calls `fn(span<const PointSet>)` for every assignment of subsets of
/// {0..n-1} to `vars` variables; stops early when `fn` returns false.
/// Returns false iff stopped early.
template <class Fn>
bool forEachValuation(std::size_t n, std::size_t vars, std::size_t maxBits, Fn&& fn) {
  const std::size_t bits = n * vars;
  if (bits > maxBits || bits >= 64)
    throw BudgetExceeded("valuation space of " + std::to_string(bits) + " bits exceeds the cap of " +
                         std::to_string(maxBits));
  const std::uint64_t mask = PointSet::full(n).bits();
  std::vector<PointSet> vals(vars);
  const std::uint64_t total = std::uint64_t{1} << bits;
  for (std::uint64_t code = 0; code < total; ++code) {
    for (std::size_t v = 0; v < vars; ++v) vals[v] = PointSet((code >> (v * n)) & mask);
    if (!fn(std::span<const PointSet>(vals))) return false;
  }
  return true;
}

/// True iff `f` holds at every world under every valuation.
inline bool validOnFrame(const KripkeFrame& frame, const Formula& f, std::size_t maxBits = kDefaultValuationBits) {
  const Program prog = compile(f);
  const KripkeAlgebra alg(frame);
  return forEachValuation(frame.worlds(), prog.variables.size(), maxBits,
                          [&](std::span<const PointSet> v) { return evaluate(prog, alg, v) == frame.all(); });
}

/// The cone generated by a world, with `worlds[i]` the original index of world i.
struct Cone {
  KripkeFrame frame;
  std::vector<std::size_t> worlds;
};

/// Sub-frame on `keep` (worlds renumbered in ascending order).
inline Cone restrict(const KripkeFrame& f, PointSet keep) {
  std::vector<std::size_t> worlds = keep.toVector();
  Relation r(worlds.size());
  Relation rd(worlds.size());
  for (std::size_t i = 0; i < worlds.size(); ++i)
    for (std::size_t j = 0; j < worlds.size(); ++j) {
      if (f.R()(worlds[i], worlds[j])) r.add(i, j);
      if (f.RD()(worlds[i], worlds[j])) rd.add(i, j);
    }
  return Cone{KripkeFrame(std::move(r), std::move(rd)), std::move(worlds)};
}

/// Worlds reachable from x by the reflexive-transitive closure of R ∪ RD.
inline PointSet reachable(const KripkeFrame& f, std::size_t x) {
  const Relation step = f.R().unionWith(f.RD());
  PointSet seen = PointSet::single(x);
  for (;;) {
    PointSet next = seen | step.image(seen);
    if (next == seen) return seen;
    seen = next;
  }
}

inline Cone cone(const KripkeFrame& f, std::size_t x) {
  if (x >= f.worlds()) throw InvalidArgument("world " + std::to_string(x) + " out of range");
  return restrict(f, reachable(f, x));
}

inline void requirePreorder(const Relation& r) {
  if (!r.reflexive()) throw NotPreorder("R is not reflexive");
  if (!r.transitive()) throw NotPreorder("R is not transitive");
}

/// Classes of mutual R-reachability, ordered by their least world.
inline std::vector<PointSet> clusters(const KripkeFrame& f) {
  requirePreorder(f.R());
  std::vector<PointSet> out;
  PointSet covered;
  for (std::size_t x = 0; x < f.worlds(); ++x) {
    if (covered.contains(x)) continue;
    PointSet c = f.R().successors(x) & f.R().predecessors(x);
    out.push_back(c);
    covered |= c;
  }
  return out;
}

struct FrameClassReport {
  bool reflexiveR = false;          // T_box
  bool transitiveR = false;         // Four_box
  bool dBox = false;                // R ⊆ RD ∪ Id
  bool symmetricRD = false;         // B_D
  bool pseudoTransitiveRD = false;  // RD∘RD ⊆ RD ∪ Id
  bool at0Cluster = false;          // distinct mutually R-related worlds are not both RD-irreflexive
  bool isCone = false;
  bool isS4DCone = false;
  bool isS4DT0Cone = false;

  bool operator==(const FrameClassReport&) const = default;
};

namespace detail {

inline bool dBoxHolds(const KripkeFrame& f) {
  for (std::size_t x = 0; x < f.worlds(); ++x)
    if (!(f.R().successors(x) - PointSet::single(x)).subsetOf(f.RD().successors(x))) return false;
  return true;
}

inline bool pseudoTransitive(const Relation& rd) {
  for (std::size_t x = 0; x < rd.size(); ++x) {
    PointSet twoSteps = rd.image(rd.successors(x)) - PointSet::single(x);
    if (!twoSteps.subsetOf(rd.successors(x))) return false;
  }
  return true;
}

inline std::optional<std::pair<std::size_t, std::size_t>> at0Violation(const KripkeFrame& f) {
  for (std::size_t x = 0; x < f.worlds(); ++x)
    for (std::size_t y = x + 1; y < f.worlds(); ++y)
      if (f.R()(x, y) && f.R()(y, x) && !f.RD()(x, x) && !f.RD()(y, y)) return std::pair{x, y};
  return std::nullopt;
}

}  // namespace detail

inline FrameClassReport frameClass(const KripkeFrame& f) {
  FrameClassReport r;
  r.reflexiveR = f.R().reflexive();
  r.transitiveR = f.R().transitive();
  r.dBox = detail::dBoxHolds(f);
  r.symmetricRD = f.RD().symmetric();
  r.pseudoTransitiveRD = detail::pseudoTransitive(f.RD());
  r.at0Cluster = !detail::at0Violation(f).has_value();
  for (std::size_t x = 0; x < f.worlds() && !r.isCone; ++x) r.isCone = reachable(f, x) == f.all();
  r.isS4DCone = r.reflexiveR && r.transitiveR && r.dBox && r.symmetricRD && r.pseudoTransitiveRD && r.isCone;
  r.isS4DT0Cone = r.isS4DCone && r.at0Cluster;
  return r;
}

enum class FrameClass { All, S4, S4DCone, S4DT0Cone };

inline std::string_view toString(FrameClass c) {
  switch (c) {
    case FrameClass::All: return "all";
    case FrameClass::S4: return "s4";
    case FrameClass::S4DCone: return "s4dcone";
    case FrameClass::S4DT0Cone: return "s4dt0cone";
  }
  return "";
}

inline std::optional<FrameClass> frameClassFromString(std::string_view s) {
  for (FrameClass c : {FrameClass::All, FrameClass::S4, FrameClass::S4DCone, FrameClass::S4DT0Cone})
    if (toString(c) == s) return c;
  return std::nullopt;
}

inline bool inClass(const FrameClassReport& r, FrameClass c) {
  switch (c) {
    case FrameClass::All: return true;
    case FrameClass::S4: return r.reflexiveR && r.transitiveR;
    case FrameClass::S4DCone: return r.isS4DCone;
    case FrameClass::S4DT0Cone: return r.isS4DT0Cone;
  }
  return false;
}

/// Human-readable reason why `f` is outside `c`, or nullopt if it belongs.
inline std::optional<std::string> classViolation(const KripkeFrame& f, FrameClass c) {
  auto pair = [](std::size_t x, std::size_t y) {
    return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  };
  if (c == FrameClass::All) return std::nullopt;
  for (std::size_t x = 0; x < f.worlds(); ++x)
    if (!f.R()(x, x)) return "R not reflexive at " + std::to_string(x);
  for (std::size_t x = 0; x < f.worlds(); ++x)
    for (std::size_t y = 0; y < f.worlds(); ++y)
      for (std::size_t z = 0; z < f.worlds(); ++z)
        if (f.R()(x, y) && f.R()(y, z) && !f.R()(x, z))
          return "R not transitive at " + pair(x, y) + "," + pair(y, z);
  if (c == FrameClass::S4) return std::nullopt;
  for (std::size_t x = 0; x < f.worlds(); ++x)
    for (std::size_t y = 0; y < f.worlds(); ++y) {
      if (x != y && f.R()(x, y) && !f.RD()(x, y)) return "R not contained in RD ∪ Id at " + pair(x, y);
      if (f.RD()(x, y) && !f.RD()(y, x)) return "RD not symmetric at " + pair(x, y);
    }
  for (std::size_t x = 0; x < f.worlds(); ++x)
    for (std::size_t y = 0; y < f.worlds(); ++y)
      for (std::size_t z = 0; z < f.worlds(); ++z)
        if (x != z && f.RD()(x, y) && f.RD()(y, z) && !f.RD()(x, z))
          return "RD not pseudo-transitive at " + pair(x, y) + "," + pair(y, z);
  if (!frameClass(f).isCone) return std::string("frame is not a cone");
  if (c == FrameClass::S4DCone) return std::nullopt;
  if (auto v = detail::at0Violation(f)) return "AT0 cluster condition violated at " + pair(v->first, v->second);
  return std::nullopt;
}

}  // namespace s4dt0
