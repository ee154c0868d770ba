/* SPDX-License-Identifier: Apache-2.0 */

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "oracle.hpp"
#include "s4dt0/decide.hpp"
#include "s4dt0/error.hpp"
#include "s4dt0/random.hpp"

using namespace s4dt0;

namespace {

const Formula p = var("p");

struct NaiveConditions {
  bool refl = true, trans = true, dbox = true, sym = true, pseudo = true, at0 = true, cone = false;
};

NaiveConditions naive(const KripkeFrame& f) {
  const std::size_t n = f.worlds();
  const Relation& R = f.R();
  const Relation& D = f.RD();
  NaiveConditions c;
  for (std::size_t x = 0; x < n; ++x) {
    c.refl = c.refl && R(x, x);
    for (std::size_t y = 0; y < n; ++y) {
      c.dbox = c.dbox && (!R(x, y) || D(x, y) || x == y);
      c.sym = c.sym && (!D(x, y) || D(y, x));
      if (x != y && R(x, y) && R(y, x)) c.at0 = c.at0 && (D(x, x) || D(y, y));
      for (std::size_t z = 0; z < n; ++z) {
        c.trans = c.trans && (!(R(x, y) && R(y, z)) || R(x, z));
        c.pseudo = c.pseudo && (!(D(x, y) && D(y, z)) || D(x, z) || x == z);
      }
    }
  }
  // Root search by repeated relaxation over R ∪ RD.
  for (std::size_t root = 0; root < n && !c.cone; ++root) {
    std::vector<bool> seen(n, false);
    seen[root] = true;
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (seen[x] && !seen[y] && (R(x, y) || D(x, y))) seen[y] = grew = true;
    }
    c.cone = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
  }
  return c;
}

bool naiveIn(const KripkeFrame& f, FrameClass cls) {
  const NaiveConditions c = naive(f);
  const bool s4 = c.refl && c.trans;
  const bool s4dCone = s4 && c.dbox && c.sym && c.pseudo && c.cone;
  switch (cls) {
    case FrameClass::All: return true;
    case FrameClass::S4: return s4;
    case FrameClass::S4DCone: return s4dCone;
    case FrameClass::S4DT0Cone: return s4dCone && c.at0;
  }
  return false;
}

FrameCode codeOf(const KripkeFrame& f) { return {f.R().code(), f.RD().code()}; }

// Least relabelled code over all n! permutations.
FrameCode bruteCanonical(const KripkeFrame& f) {
  const std::size_t n = f.worlds();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<FrameCode> best;
  do {
    Relation r(n), rd(n);
    for (auto [x, y] : f.R().pairs()) r.add(perm[x], perm[y]);
    for (auto [x, y] : f.RD().pairs()) rd.add(perm[x], perm[y]);
    const FrameCode c{r.code(), rd.code()};
    if (!best || c < *best) best = c;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

}  // namespace

TEST(EnumerateFrames, SingleWorldCounts) {
  EXPECT_EQ(enumerateFrames(1, FrameClass::All).size(), 4u);
  const auto cones = enumerateFrames(1, FrameClass::S4DT0Cone);
  ASSERT_EQ(cones.size(), 2u);
  EXPECT_EQ(cones[0], oracle::frame(1, {{0, 0}}, {}));
  EXPECT_EQ(cones[1], oracle::frame(1, {{0, 0}}, {{0, 0}}));
}

TEST(EnumerateFrames, GeneratorsMatchNaiveFilter) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const std::uint64_t codes = std::uint64_t{1} << (n * n);
    for (FrameClass cls : {FrameClass::All, FrameClass::S4, FrameClass::S4DCone, FrameClass::S4DT0Cone}) {
      std::vector<FrameCode> expected;
      for (std::uint64_t r = 0; r < codes; ++r)
        for (std::uint64_t rd = 0; rd < codes; ++rd) {
          const KripkeFrame f(Relation::fromCode(n, r), Relation::fromCode(n, rd));
          if (naiveIn(f, cls)) expected.push_back(codeOf(f));
        }
      std::vector<FrameCode> got;
      for (const auto& f : enumerateFrames(n, cls)) got.push_back(codeOf(f));
      EXPECT_EQ(got, expected) << "n=" << n << " class " << toString(cls);
    }
  }
}

TEST(EnumerateFrames, TwoWorldS4DConeCount) {
  // Preorders on two worlds: 4 relations R; RD must be universal off the
  // diagonal with free loops, and the frame must be a cone (always, since
  // RD links both worlds).
  EXPECT_EQ(enumerateFrames(2, FrameClass::S4DCone).size(), 4u * 4u);
}

TEST(EnumerateFrames, IsomorphismPruningMatchesBruteForce) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (FrameClass cls : {FrameClass::All, FrameClass::S4, FrameClass::S4DCone, FrameClass::S4DT0Cone}) {
      std::set<FrameCode> classes;
      for (const auto& f : enumerateFrames(n, cls)) classes.insert(bruteCanonical(f));
      const auto pruned = enumerateFrames(n, cls, {.upToIsomorphism = true});
      EXPECT_EQ(pruned.size(), classes.size()) << "n=" << n << " class " << toString(cls);
      std::set<FrameCode> covered;
      for (const auto& f : pruned) covered.insert(bruteCanonical(f));
      EXPECT_EQ(covered, classes);
    }
  std::set<FrameCode> four;
  for (const auto& f : enumerateFrames(4, FrameClass::S4DT0Cone)) four.insert(bruteCanonical(f));
  EXPECT_EQ(enumerateFrames(4, FrameClass::S4DT0Cone, {.upToIsomorphism = true}).size(), four.size());
}

TEST(EnumerateFrames, CanonicalFormIsInvariant) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + rng() % 6;
    const KripkeFrame f(Relation::fromCode(n, rng() & PointSet::full(n * n).bits()),
                        Relation::fromCode(n, rng() & PointSet::full(n * n).bits()));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Relation r(n), rd(n);
    for (auto [x, y] : f.R().pairs()) r.add(perm[x], perm[y]);
    for (auto [x, y] : f.RD().pairs()) rd.add(perm[x], perm[y]);
    EXPECT_EQ(canonicalForm(f), canonicalForm(KripkeFrame(r, rd)));
  }
}

TEST(EnumerateFrames, BudgetIsEnforced) {
  EXPECT_THROW(enumerateFrames(4, FrameClass::All), BudgetExceeded);
  EXPECT_THROW(enumerateFrames(9, FrameClass::S4DT0Cone), BudgetExceeded);
  EXPECT_THROW(enumerateFrames(0, FrameClass::S4DT0Cone), BudgetExceeded);
}

TEST(Satisfiable, Examples) {
  const SatResult a = satisfiable(conj(conj(p, diffBox(neg(p))), diamond(neg(p))));
  ASSERT_EQ(a.status, SatStatus::Satisfiable);
  ASSERT_TRUE(a.model.has_value());
  EXPECT_EQ(a.model->frame.worlds(), 2u);
  EXPECT_TRUE(frameClass(a.model->frame).isS4DT0Cone);
  EXPECT_TRUE(evalKripke(*a.model, conj(conj(p, diffBox(neg(p))), diamond(neg(p)))).contains(a.world));

  const SatResult b = satisfiable(bottom(), {.maxWorlds = 3});
  EXPECT_EQ(b.status, SatStatus::UnknownUpToBound);
  EXPECT_EQ(b.searchedBound, 3u);

  const SatResult c = satisfiable(neg(axiom(AxiomName::AT0)), {.maxWorlds = 3});
  EXPECT_EQ(c.status, SatStatus::UnknownUpToBound);
  EXPECT_FALSE(c.budgetExceeded);
}

TEST(ValidUpTo, Examples) {
  EXPECT_EQ(validUpTo(axiom(AxiomName::AT0)).status, SatStatus::ValidUpToBound);
  EXPECT_EQ(validUpTo(top()).status, SatStatus::ValidUpToBound);

  const SatResult r = validUpTo(axiom(AxiomName::AT0), {}, FrameClass::S4DCone);
  ASSERT_EQ(r.status, SatStatus::Countermodel);
  const KripkeFrame& f = r.model->frame;
  EXPECT_EQ(f.worlds(), 2u);
  EXPECT_EQ(f.R(), Relation::universal(2));
  EXPECT_FALSE(f.RD()(0, 0));
  EXPECT_FALSE(f.RD()(1, 1));
  EXPECT_FALSE(oracle::holdsKripke(f, r.model->valuation, axiom(AxiomName::AT0), r.world));
}

TEST(ValidUpTo, BudgetExceededIsFlagged) {
  const SatResult r = validUpTo(parse("p & q & r & s & t -> p"), {.maxWorlds = 4, .maxValuationBits = 12});
  EXPECT_TRUE(r.budgetExceeded);
  EXPECT_EQ(r.searchedBound, 2u);
  EXPECT_FALSE(r.budgetNote.empty());
}

TEST(ValidUpTo, DualToSatisfiable) {
  FormulaGenerator gen(17);
  for (int i = 0; i < 200; ++i) {
    const Formula phi = gen(3);
    const SearchBudget b{.maxWorlds = 3};
    const SatResult v = validUpTo(phi, b);
    const SatResult s = satisfiable(neg(phi), b);
    ASSERT_EQ(v.status == SatStatus::Countermodel, s.status == SatStatus::Satisfiable) << print(phi);
    if (s.status == SatStatus::Satisfiable) {
      EXPECT_EQ(v.model, s.model);
      EXPECT_EQ(v.world, s.world);
      EXPECT_TRUE(frameClass(s.model->frame).isS4DT0Cone);
      EXPECT_TRUE(oracle::holdsKripke(s.model->frame, s.model->valuation, neg(phi), s.world));
    }
  }
}

TEST(Correspondence, TwoWorlds) {
  const CorrespondenceReport r = correspondenceSuite(2);
  EXPECT_EQ(r.framesPerSize, (std::vector<std::size_t>{4, 256}));
  EXPECT_EQ(r.mismatches(), 0u);
  for (const auto& t : r.axioms)
    if (t.axiom != AxiomName::AT0) {
      EXPECT_EQ(t.frames, 260u);
    }
}

TEST(Correspondence, MutatedConditionIsCaught) {
  auto conditions = defaultConditions();
  conditions[AxiomName::Four_D] = [](const KripkeFrame& f, const FrameClassReport&) {
    const Relation& d = f.RD();
    for (std::size_t x = 0; x < f.worlds(); ++x)
      for (std::size_t y = 0; y < f.worlds(); ++y)
        for (std::size_t z = 0; z < f.worlds(); ++z)
          if (d(x, y) && d(y, z) && !d(x, z)) return false;
    return true;
  };
  const CorrespondenceReport r = correspondenceSuite(2, conditions);
  EXPECT_GT(r.mismatches(), 0u);
  for (const auto& t : r.axioms) {
    if (t.axiom == AxiomName::Four_D) {
      EXPECT_GT(t.mismatches, 0u);
      ASSERT_FALSE(t.examples.empty());
      EXPECT_NE(t.examples.front().find("valid but condition fails"), std::string::npos);
    } else {
      EXPECT_EQ(t.mismatches, 0u);
    }
  }
}

TEST(Correspondence, At0OnSmallCones) {
  const AxiomTally t = at0ConeCorrespondence(3);
  EXPECT_EQ(t.mismatches, 0u);
  std::size_t cones = 0;
  for (std::size_t n = 1; n <= 3; ++n) cones += enumerateFrames(n, FrameClass::S4DCone).size();
  EXPECT_EQ(t.frames, cones);
}

TEST(TopoCorrespondence, SmallSpaces) {
  const TopoCorrespondenceReport one = topoCorrespondence(1);
  EXPECT_EQ(one.topologies, 1u);
  EXPECT_EQ(one.t0Spaces, 1u);
  EXPECT_EQ(one.at0Valid, 1u);
  EXPECT_TRUE(one.ok());

  const TopoCorrespondenceReport two = topoCorrespondence(2);
  EXPECT_EQ(two.topologies, 4u);
  EXPECT_EQ(two.t0Spaces, 3u);
  EXPECT_EQ(two.at0Valid, 3u);
  EXPECT_TRUE(two.ok());

  const TopoCorrespondenceReport three = topoCorrespondence(3);
  EXPECT_EQ(three.topologies, oracle::allTopologies(3).size());
  std::size_t t0 = 0;
  for (const auto& opens : oracle::allTopologies(3)) t0 += oracle::indistinguishablePairExists(3, opens) ? 0 : 1;
  EXPECT_EQ(three.t0Spaces, t0);
  EXPECT_TRUE(three.ok());
}
