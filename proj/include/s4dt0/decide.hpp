/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "s4dt0/error.hpp"
#include "s4dt0/kripke.hpp"
#include "s4dt0/syntax.hpp"
#include "s4dt0/topo.hpp"

namespace s4dt0 {

struct SearchBudget {
  std::size_t maxWorlds = 4;
  std::size_t maxValuationBits = kDefaultValuationBits;
  double maxSeconds = 600.0;
};

/// Cap on the raw (R, RD) candidate pairs a single enumeration may scan.
inline constexpr std::uint64_t kMaxFrameCandidates = std::uint64_t{1} << 27;

// ---------------------------------------------------------------------------
// Isomorphism

using FrameCode = std::pair<std::uint64_t, std::uint64_t>;

namespace detail {

inline FrameCode relabel(const KripkeFrame& f, const std::vector<std::size_t>& position) {
  const std::size_t n = f.worlds();
  std::uint64_t r = 0;
  std::uint64_t rd = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y) {
      const std::size_t bit = position[x] * n + position[y];
      if (f.R()(x, y)) r |= std::uint64_t{1} << bit;
      if (f.RD()(x, y)) rd |= std::uint64_t{1} << bit;
    }
  return {r, rd};
}

/// Iterated colour refinement by loops and neighbour colours along R and RD.
inline std::vector<std::size_t> refineColours(const KripkeFrame& f) {
  const std::size_t n = f.worlds();
  std::vector<std::size_t> colour(n, 0);
  std::size_t classes = 1;
  for (;;) {
    using Signature = std::vector<std::size_t>;
    std::vector<Signature> sig(n);
    for (std::size_t x = 0; x < n; ++x) {
      Signature& s = sig[x];
      s = {colour[x], f.R()(x, x) ? 1U : 0U, f.RD()(x, x) ? 1U : 0U};
      for (const PointSet nb : {f.R().successors(x), f.R().predecessors(x), f.RD().successors(x), f.RD().predecessors(x)}) {
        std::vector<std::size_t> cs;
        nb.forEach([&](std::size_t y) { cs.push_back(colour[y]); });
        std::sort(cs.begin(), cs.end());
        s.push_back(n + 1);  // separator
        s.insert(s.end(), cs.begin(), cs.end());
      }
    }
    std::vector<Signature> distinct = sig;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t x = 0; x < n; ++x)
      colour[x] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), sig[x]) - distinct.begin());
    if (distinct.size() == classes) return colour;
    classes = distinct.size();
  }
}

}  // namespace detail

/// Least relabelled (R, RD) code over the labellings compatible with the
/// refined colouring; equal exactly for isomorphic frames.
inline FrameCode canonicalForm(const KripkeFrame& f) {
  const std::size_t n = f.worlds();
  if (n > 8) throw BudgetExceeded("canonical form supports at most 8 worlds");
  const std::vector<std::size_t> colour = detail::refineColours(f);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return colour[a] != colour[b] ? colour[a] < colour[b] : a < b;
  });
  // Cells of equal colour are permuted independently.
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && colour[order[j]] == colour[order[i]]) ++j;
    cells.emplace_back(i, j);
    i = j;
  }
  std::optional<FrameCode> best;
  std::vector<std::size_t> position(n);
  std::function<void(std::size_t)> go = [&](std::size_t cell) {
    if (cell == cells.size()) {
      for (std::size_t i = 0; i < n; ++i) position[order[i]] = i;
      FrameCode c = detail::relabel(f, position);
      if (!best || c < *best) best = c;
      return;
    }
    auto [b, e] = cells[cell];
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(b), order.begin() + static_cast<std::ptrdiff_t>(e));
    do {
      go(cell + 1);
    } while (std::next_permutation(order.begin() + static_cast<std::ptrdiff_t>(b),
                                   order.begin() + static_cast<std::ptrdiff_t>(e)));
  };
  go(0);
  return *best;
}

// ---------------------------------------------------------------------------
// Enumeration

struct EnumerateOptions {
  bool upToIsomorphism = false;
};

namespace detail {

/// Spreads the low bits of `t` over the set bits of `mask`, preserving order.
inline std::uint64_t deposit(std::uint64_t t, std::uint64_t mask) {
  std::uint64_t out = 0;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    if (t & 1U) out |= m & (~m + 1);
    t >>= 1;
  }
  return out;
}

inline std::uint64_t diagonalMask(std::size_t n) {
  std::uint64_t d = 0;
  for (std::size_t x = 0; x < n; ++x) d |= std::uint64_t{1} << (x * n + x);
  return d;
}

inline std::vector<std::uint64_t> preorderCodes(std::size_t n) {
  const std::uint64_t all = n * n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << (n * n)) - 1;
  const std::uint64_t diag = diagonalMask(n);
  const std::uint64_t off = all & ~diag;
  std::vector<std::uint64_t> out;
  const std::uint64_t count = std::uint64_t{1} << (n * n - n);
  for (std::uint64_t t = 0; t < count; ++t) {
    const std::uint64_t code = diag | deposit(t, off);
    if (Relation::fromCode(n, code).transitive()) out.push_back(code);
  }
  return out;
}

inline std::vector<std::uint64_t> symmetricCodes(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = x; y < n; ++y) slots.emplace_back(x, y);
  std::vector<std::uint64_t> out;
  for (std::uint64_t t = 0; t < (std::uint64_t{1} << slots.size()); ++t) {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < slots.size(); ++i)
      if ((t >> i) & 1U) {
        auto [x, y] = slots[i];
        code |= std::uint64_t{1} << (x * n + y);
        code |= std::uint64_t{1} << (y * n + x);
      }
    out.push_back(code);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void requireCandidates(std::uint64_t rs, std::uint64_t rds) {
  if (rds != 0 && rs > kMaxFrameCandidates / rds)
    throw BudgetExceeded("frame enumeration exceeds " + std::to_string(kMaxFrameCandidates) + " candidates");
}

}  // namespace detail

/// Visits every frame on n labelled worlds in `cls`, ordered by R code then
/// RD code (bit x*n+y encodes the pair (x, y)). `visit` returns false to stop.
/// Returns false iff stopped early.
template <class Visitor>
bool forEachFrame(std::size_t n, FrameClass cls, Visitor&& visit, EnumerateOptions opts = {}) {
  if (n == 0 || n > 8) throw BudgetExceeded("frame enumeration supports 1..8 worlds");
  std::set<FrameCode> seen;
  auto emit = [&](std::uint64_t r, std::uint64_t rd) {
    KripkeFrame f(Relation::fromCode(n, r), Relation::fromCode(n, rd));
    if (cls != FrameClass::All && !inClass(frameClass(f), cls)) return true;
    if (opts.upToIsomorphism && !seen.insert(canonicalForm(f)).second) return true;
    return static_cast<bool>(visit(static_cast<const KripkeFrame&>(f)));
  };

  if (cls == FrameClass::All) {
    const std::uint64_t codes = std::uint64_t{1} << (n * n);
    detail::requireCandidates(codes, codes);
    for (std::uint64_t r = 0; r < codes; ++r)
      for (std::uint64_t rd = 0; rd < codes; ++rd)
        if (!emit(r, rd)) return false;
    return true;
  }

  const std::vector<std::uint64_t> preorders = detail::preorderCodes(n);
  if (cls == FrameClass::S4) {
    const std::uint64_t codes = std::uint64_t{1} << (n * n);
    detail::requireCandidates(preorders.size(), codes);
    for (std::uint64_t r : preorders)
      for (std::uint64_t rd = 0; rd < codes; ++rd)
        if (!emit(r, rd)) return false;
    return true;
  }

  // Cone classes need a symmetric RD.
  const std::vector<std::uint64_t> symmetric = detail::symmetricCodes(n);
  detail::requireCandidates(preorders.size(), symmetric.size());
  for (std::uint64_t r : preorders)
    for (std::uint64_t rd : symmetric)
      if (!emit(r, rd)) return false;
  return true;
}

inline std::vector<KripkeFrame> enumerateFrames(std::size_t n, FrameClass cls, EnumerateOptions opts = {}) {
  std::vector<KripkeFrame> out;
  forEachFrame(
      n, cls,
      [&](const KripkeFrame& f) {
        out.push_back(f);
        return true;
      },
      opts);
  return out;
}

// ---------------------------------------------------------------------------
// Bounded satisfiability and validity

enum class SatStatus { Satisfiable, UnknownUpToBound, ValidUpToBound, Countermodel };

inline std::string_view toString(SatStatus s) {
  switch (s) {
    case SatStatus::Satisfiable: return "Satisfiable";
    case SatStatus::UnknownUpToBound: return "UnknownUpToBound";
    case SatStatus::ValidUpToBound: return "ValidUpToBound";
    case SatStatus::Countermodel: return "Countermodel";
  }
  return "";
}

struct SatResult {
  SatStatus status = SatStatus::UnknownUpToBound;
  std::optional<KripkeModel> model;  // witness for Satisfiable / Countermodel
  std::size_t world = 0;             // designated world of the witness
  std::size_t searchedBound = 0;     // largest world count searched completely
  bool budgetExceeded = false;
  std::string budgetNote;
};

namespace detail {

/// Smallest model in `cls` (by world count, frame order, valuation order)
/// where the truth set of `f` (or its complement) is nonempty.
inline SatResult searchWitness(const Formula& f, const SearchBudget& b, FrameClass cls, bool refute) {
  const Program prog = compile(f);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(b.maxSeconds);
  SatResult res;
  auto exceed = [&](std::string why) {
    res.budgetExceeded = true;
    res.budgetNote = std::move(why);
  };
  for (std::size_t n = 1; n <= b.maxWorlds; ++n) {
    bool found = false;
    try {
      forEachFrame(n, cls, [&](const KripkeFrame& frame) {
        if (std::chrono::steady_clock::now() > deadline) throw BudgetExceeded("time limit reached");
        const KripkeAlgebra alg(frame);
        forEachValuation(n, prog.variables.size(), b.maxValuationBits, [&](std::span<const PointSet> v) {
          PointSet truth = evaluate(prog, alg, v);
          if (refute) truth = truth.complement(n);
          if (truth.empty()) return true;
          Valuation val;
          for (std::size_t i = 0; i < prog.variables.size(); ++i) val.emplace(prog.variables[i], v[i]);
          res.model.emplace(frame, std::move(val));
          res.world = truth.first();
          found = true;
          return false;
        });
        return !found;
      });
    } catch (const BudgetExceeded& e) {
      exceed(e.what());
      break;
    }
    if (found) {
      res.status = refute ? SatStatus::Countermodel : SatStatus::Satisfiable;
      res.searchedBound = n;
      return res;
    }
    res.searchedBound = n;
  }
  res.status = refute ? SatStatus::ValidUpToBound : SatStatus::UnknownUpToBound;
  return res;
}

}  // namespace detail

/// Searches cones of `cls` with 1..maxWorlds worlds. Never reports
/// unsatisfiability: without a model the answer is UnknownUpToBound.
inline SatResult satisfiable(const Formula& f, const SearchBudget& b = {}, FrameClass cls = FrameClass::S4DT0Cone) {
  return detail::searchWitness(f, b, cls, false);
}

inline SatResult validUpTo(const Formula& f, const SearchBudget& b = {}, FrameClass cls = FrameClass::S4DT0Cone) {
  return detail::searchWitness(f, b, cls, true);
}

// ---------------------------------------------------------------------------
// Correspondence suites

/// First-order frame condition paired with an axiom; receives the
/// precomputed class report alongside the frame.
using FrameCondition = std::function<bool(const KripkeFrame&, const FrameClassReport&)>;

inline std::map<AxiomName, FrameCondition> defaultConditions() {
  return {
      {AxiomName::T_box, [](const KripkeFrame&, const FrameClassReport& r) { return r.reflexiveR; }},
      {AxiomName::Four_box, [](const KripkeFrame&, const FrameClassReport& r) { return r.transitiveR; }},
      {AxiomName::D_box, [](const KripkeFrame&, const FrameClassReport& r) { return r.dBox; }},
      {AxiomName::B_D, [](const KripkeFrame&, const FrameClassReport& r) { return r.symmetricRD; }},
      {AxiomName::Four_D, [](const KripkeFrame&, const FrameClassReport& r) { return r.pseudoTransitiveRD; }},
      {AxiomName::AT0, [](const KripkeFrame&, const FrameClassReport& r) { return r.at0Cluster; }},
  };
}

struct AxiomTally {
  AxiomName axiom = AxiomName::T_box;
  std::size_t frames = 0;
  std::size_t mismatches = 0;
  std::vector<std::string> examples;  // first few mismatching frames
};

struct CorrespondenceReport {
  std::size_t maxWorlds = 0;
  std::vector<std::size_t> framesPerSize;  // index k: frames on k+1 worlds
  std::vector<AxiomTally> axioms;

  std::size_t mismatches() const {
    std::size_t m = 0;
    for (const auto& a : axioms) m += a.mismatches;
    return m;
  }
  bool ok() const { return mismatches() == 0; }
};

namespace detail {

inline std::string frameSummary(const KripkeFrame& f) {
  std::string s = "n=" + std::to_string(f.worlds()) + " R=";
  for (auto [x, y] : f.R().pairs()) s += "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  s += " RD=";
  for (auto [x, y] : f.RD().pairs()) s += "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  return s;
}

inline void tally(AxiomTally& t, const KripkeFrame& f, bool valid, bool condition) {
  ++t.frames;
  if (valid == condition) return;
  ++t.mismatches;
  if (t.examples.size() < 5)
    t.examples.push_back(frameSummary(f) + (valid ? " valid but condition fails" : " condition holds but invalid"));
}

}  // namespace detail

/// Modal validity of each axiom against its frame condition, over every
/// frame on 1..n worlds; AT0 only over the S4D-cones among them.
inline CorrespondenceReport correspondenceSuite(std::size_t n,
                                                const std::map<AxiomName, FrameCondition>& conditions = defaultConditions()) {
  if (n > 3) throw BudgetExceeded("correspondence suite enumerates all frames only up to 3 worlds");
  CorrespondenceReport rep;
  rep.maxWorlds = n;
  std::map<AxiomName, Program> programs;
  for (AxiomName a : kAllAxioms) {
    programs.emplace(a, compile(axiom(a)));
    rep.axioms.push_back({a, 0, 0, {}});
  }
  for (std::size_t k = 1; k <= n; ++k) {
    std::size_t count = 0;
    forEachFrame(k, FrameClass::All, [&](const KripkeFrame& f) {
      ++count;
      const FrameClassReport cls = frameClass(f);
      const KripkeAlgebra alg(f);
      for (auto& t : rep.axioms) {
        if (t.axiom == AxiomName::AT0 && !cls.isS4DCone) continue;
        const Program& prog = programs.at(t.axiom);
        const bool valid = forEachValuation(k, prog.variables.size(), kDefaultValuationBits,
                                            [&](std::span<const PointSet> v) { return evaluate(prog, alg, v) == f.all(); });
        detail::tally(t, f, valid, conditions.at(t.axiom)(f, cls));
      }
      return true;
    });
    rep.framesPerSize.push_back(count);
  }
  return rep;
}

/// AT0 against the cluster condition over every S4D-cone on 1..n worlds,
/// using the cone generator.
inline AxiomTally at0ConeCorrespondence(std::size_t n) {
  if (n > 5) throw BudgetExceeded("AT0 cone correspondence supports at most 5 worlds");
  AxiomTally t{AxiomName::AT0, 0, 0, {}};
  const Program prog = compile(axiom(AxiomName::AT0));
  for (std::size_t k = 1; k <= n; ++k)
    forEachFrame(k, FrameClass::S4DCone, [&](const KripkeFrame& f) {
      const KripkeAlgebra alg(f);
      const bool valid = forEachValuation(k, prog.variables.size(), kDefaultValuationBits,
                                          [&](std::span<const PointSet> v) { return evaluate(prog, alg, v) == f.all(); });
      detail::tally(t, f, valid, frameClass(f).at0Cluster);
      return true;
    });
  return t;
}

struct TopoCorrespondenceReport {
  std::size_t points = 0;
  std::uint64_t families = 0;
  std::size_t topologies = 0;
  std::size_t t0Spaces = 0;
  std::size_t at0Valid = 0;
  std::size_t preorderTopologies = 0;  // topologies from the Alexandroff route
  bool sameTopologies = false;         // both routes give the same set of topologies
  std::size_t mismatches = 0;
  std::vector<std::string> examples;

  bool ok() const { return mismatches == 0 && sameTopologies && preorderTopologies == topologies; }
};

/// Every family of subsets of n points, filtered to topologies; AT0
/// validity under plain difference semantics against T0.
inline TopoCorrespondenceReport topoCorrespondence(std::size_t n) {
  if (n == 0 || n > 4) throw BudgetExceeded("topological correspondence supports 1..4 points");
  TopoCorrespondenceReport rep;
  rep.points = n;
  const std::size_t subsets = std::size_t{1} << n;
  rep.families = std::uint64_t{1} << subsets;
  const Formula at0 = axiom(AxiomName::AT0);
  const std::uint64_t fullIndex = subsets - 1;
  std::set<std::vector<PointSet>> byFamily;
  for (std::uint64_t fam = 0; fam < rep.families; ++fam) {
    if (!(fam & 1U) || !((fam >> fullIndex) & 1U)) continue;  // needs ∅ and X
    std::vector<PointSet> family;
    for (std::size_t s = 0; s < subsets; ++s)
      if ((fam >> s) & 1U) family.emplace_back(s);
    if (!isTopology(n, family)) continue;
    ++rep.topologies;
    byFamily.insert(family);
    FiniteSpace space(n, family);
    const bool t0 = isT0(space);
    const bool valid = validOnSpace(SelectedSpace::plain(space), at0);
    rep.t0Spaces += t0 ? 1 : 0;
    rep.at0Valid += valid ? 1 : 0;
    if (t0 != valid) {
      ++rep.mismatches;
      if (rep.examples.size() < 5) {
        std::string s = "opens:";
        for (PointSet u : family) s += " " + u.toString();
        rep.examples.push_back(s);
      }
    }
  }
  std::set<std::vector<PointSet>> byPreorder;
  for (std::uint64_t code : detail::preorderCodes(n)) {
    KripkeFrame f(Relation::fromCode(n, code), Relation(n));
    byPreorder.insert(alexandroff(f).opens());
  }
  rep.preorderTopologies = byPreorder.size();
  rep.sameTopologies = byPreorder == byFamily;
  return rep;
}

}  // namespace s4dt0
