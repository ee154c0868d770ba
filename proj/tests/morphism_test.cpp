/* SPDX-License-Identifier: Apache-2.0 */

#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracle.hpp"
#include "s4dt0/decide.hpp"
#include "s4dt0/error.hpp"
#include "s4dt0/morphism.hpp"

using namespace s4dt0;
using oracle::frame;

namespace {

const Formula p = var("p");

FiniteSpace sierpinski() { return FiniteSpace(2, {PointSet{}, PointSet{1}, PointSet({0, 1})}); }

// Cluster {0,1} with 0 selected.
KripkeFrame caseTwo() { return frame(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {{0, 1}, {1, 0}, {1, 1}}); }

// {0} below the cluster {1,2}; no selected points.
KripkeFrame chainOfClusters() {
  return KripkeFrame(frame(3, {{0, 0}, {0, 1}, {0, 2}, {1, 1}, {1, 2}, {2, 1}, {2, 2}}, {}).R(),
                     Relation::universal(3));
}

}  // namespace

TEST(CheckInterior, Examples) {
  const SelectedSpace s = SelectedSpace::plain(sierpinski());
  EXPECT_TRUE(checkInterior(FiniteMap(s, s, {0, 1})));
  EXPECT_TRUE(checkInterior(FiniteMap(SelectedSpace::plain(FiniteSpace::discrete(2)),
                                      SelectedSpace::plain(FiniteSpace::discrete(1)), {0, 0})));
  const FiniteMap toDiscrete(s, SelectedSpace::plain(FiniteSpace::discrete(2)), {0, 1});
  const InteriorReport r = interiorReport(toDiscrete);
  EXPECT_FALSE(checkInterior(toDiscrete));
  EXPECT_FALSE(r.continuous);
  EXPECT_TRUE(r.open);
  EXPECT_THROW(FiniteMap(s, s, {0, 2}), InvalidArgument);
  EXPECT_THROW(FiniteMap(s, s, {0}), InvalidArgument);
}

// Continuity plus openness against the preimage-of-interior equation, over
// every map between every pair of small topologies.
TEST(CheckInterior, AgreesWithInteriorEquationExhaustive) {
  std::vector<FiniteSpace> domains, codomains;
  for (std::size_t n = 1; n <= 4; ++n)
    for (const auto& opens : oracle::allTopologies(n)) {
      if (n <= 3) domains.emplace_back(n, opens);
      codomains.emplace_back(n, opens);
    }
  std::size_t maps = 0, interior = 0;
  for (const auto& d : domains)
    for (const auto& c : codomains) {
      const std::size_t nd = d.points(), nc = c.points();
      std::vector<std::size_t> table(nd, 0);
      for (;;) {
        const FiniteMap f(SelectedSpace::plain(d), SelectedSpace::plain(c), table);
        const InteriorReport r = interiorReport(f);
        ASSERT_EQ(r.continuous && r.open, r.commutesWithInterior);
        ++maps;
        if (r.commutesWithInterior) ++interior;
        std::size_t k = 0;
        while (k < nd && ++table[k] == nc) table[k++] = 0;
        if (k == nd) break;
      }
    }
  EXPECT_GT(interior, 0u);
  EXPECT_LT(interior, maps);
}

TEST(CheckPMorphismFinite, Examples) {
  const SelectedSpace s(sierpinski(), PointSet{0});
  EXPECT_TRUE(checkPMorphismFinite(FiniteMap(s, s, {0, 1})));
  const SelectedSpace two(FiniteSpace::discrete(2), PointSet{});
  EXPECT_TRUE(checkPMorphismFinite(FiniteMap(two, SelectedSpace(FiniteSpace::discrete(1), PointSet{}), {0, 0})));
  EXPECT_FALSE(checkPMorphismFinite(FiniteMap(two, SelectedSpace(FiniteSpace::discrete(1), PointSet{0}), {0, 0})));
  EXPECT_FALSE(checkPMorphismFinite(FiniteMap(two, two, {0, 0})));
}

TEST(CheckPMorphismFinite, SelectedPointNeedsSingletonFibre) {
  const SelectedSpace dom(FiniteSpace::indiscrete(2), PointSet{0});
  EXPECT_TRUE(checkPMorphismFinite(FiniteMap(dom, SelectedSpace(FiniteSpace::indiscrete(1), PointSet{}), {0, 0})));
  const SelectedSpace one(FiniteSpace::indiscrete(1), PointSet{0});
  EXPECT_TRUE(checkPMorphismFinite(FiniteMap(one, one, {0})));
}

TEST(BuildSpace, Examples) {
  const PMorphismDescription a = buildSpace(caseTwo());
  ASSERT_EQ(a.source.size(), 1u);
  EXPECT_EQ(a.source.component(0).period, 1u);
  EXPECT_TRUE(a.source.component(0).hasInfinity);
  EXPECT_FALSE(a.source.component(0).infinityOnly);
  for (std::size_t l = 1; l <= 5; ++l) EXPECT_EQ(a.apply({0, l}), 1u);
  EXPECT_EQ(a.apply({0, kInfinity}), 0u);

  const PMorphismDescription b = buildSpace(frame(1, {{0, 0}}, {{0, 0}}));
  EXPECT_EQ(b.source.component(0).period, 1u);
  EXPECT_FALSE(b.source.component(0).hasInfinity);
  EXPECT_EQ(b.apply({0, 7}), 0u);

  const PMorphismDescription c = buildSpace(chainOfClusters());
  ASSERT_EQ(c.source.size(), 2u);
  EXPECT_EQ(c.source.component(0), ClusterComponent::finite(1));
  EXPECT_EQ(c.source.component(1), ClusterComponent::finite(2));
  Relation chain = Relation::identity(2);
  chain.add(0, 1);
  EXPECT_EQ(c.source.order(), chain);
  EXPECT_EQ(c.ordering[1].cycle, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(c.apply({1, 1}), 1u);
  EXPECT_EQ(c.apply({1, 4}), 2u);

  const PMorphismDescription d = buildSpace(frame(1, {{0, 0}}, {}));
  EXPECT_EQ(d.source.component(0), ClusterComponent::infinityPoint());
  EXPECT_EQ(d.apply({0, kInfinity}), 0u);
}

TEST(BuildSpace, RejectsNonS4DT0Cones) {
  EXPECT_THROW(buildSpace(frame(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {{0, 1}, {1, 0}})), NotS4DT0Cone);
  EXPECT_THROW(buildSpace(frame(2, {{0, 0}, {1, 1}}, {})), NotS4DT0Cone);
}

TEST(BuildSpace, SingleClusterOpensAreTails) {
  std::mt19937_64 rng(8);
  for (std::size_t m = 1; m <= 4; ++m) {
    const PMorphismDescription d = buildSpace(KripkeFrame(Relation::universal(m), Relation::universal(m)));
    const ClusterComponent& c = d.source.component(0);
    ASSERT_EQ(c, ClusterComponent::finite(m));
    for (int i = 0; i < 2000; ++i) {
      const CompositeSet s({gen::randomComponentSet(rng, c)});
      bool isTail = isEmpty(s);
      for (std::size_t n = 1; n <= 8 && !isTail; ++n) isTail = s.part(0) == ComponentSet::tailFrom(c, n);
      ASSERT_EQ(isOpen(d.source, s), isTail) << describe(s);
    }
  }
}

TEST(VerifyPMorphism, AllConesUpToThreeWorlds) {
  for (std::size_t n = 1; n <= 3; ++n)
    for (const KripkeFrame& f : enumerateFrames(n, FrameClass::S4DT0Cone)) {
      const PMorphismDescription d = buildSpace(f);
      const PMorphismReport r = verifyPMorphism(d);
      ASSERT_TRUE(r.ok()) << r.failure.value_or("");
      const T0Report t = t0Check(d.source, 2 * d.source.maxPeriod() + 2);
      ASSERT_TRUE(t.ok) << t.failure.value_or("");
    }
}

TEST(VerifyPMorphism, MissedResidueFailsSurjectivity) {
  PMorphismDescription d = buildSpace(KripkeFrame(Relation::universal(3), Relation::universal(3)));
  d.ordering[0].cycle = {0, 1, 1};
  const PMorphismReport r = verifyPMorphism(d);
  EXPECT_TRUE(r.wellFormed);
  EXPECT_FALSE(r.surjective);
  EXPECT_EQ(r.failure, "surjectivity: world 2 has no preimage");
}

// Dropping an order pair makes the source finer: every open stays open
// after pulling back, but images of the new small opens are no longer
// up-closed.
TEST(VerifyPMorphism, DroppedOrderPairFailsOpenness) {
  PMorphismDescription d = buildSpace(chainOfClusters());
  d.source = CompositeSpace(d.source.components(), Relation::identity(2));
  const PMorphismReport r = verifyPMorphism(d);
  EXPECT_TRUE(r.continuous);
  EXPECT_FALSE(r.open);
  EXPECT_EQ(r.failure, "openness: image {0} of generator (up 0, U_1) is not R-up-closed");
}

TEST(VerifyPMorphism, AddedOrderPairFailsContinuity) {
  const KripkeFrame f = KripkeFrame(frame(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}}, {}).R(), Relation::universal(3));
  PMorphismDescription d = buildSpace(f);
  Relation order = d.source.order();
  order.add(1, 2);
  d.source = CompositeSpace(d.source.components(), order);
  const PMorphismReport r = verifyPMorphism(d);
  EXPECT_FALSE(r.continuous);
  EXPECT_EQ(r.failure, "continuity: preimage of R(1) = {1} is not open");
}

TEST(VerifyPMorphism, SelectedFibreMismatch) {
  PMorphismDescription d = buildSpace(caseTwo());
  d.target = KripkeFrame(d.target.R(), Relation::universal(2));
  const PMorphismReport r = verifyPMorphism(d);
  EXPECT_FALSE(r.selectedFibres);
  EXPECT_EQ(r.failure, "selected fibres: world 0 is not selected but its fibre is the single point c0:+inf");
}

TEST(VerifyPMorphism, MalformedDescription) {
  PMorphismDescription d = buildSpace(caseTwo());
  d.ordering[0].cycle = {1, 1};
  const PMorphismReport r = verifyPMorphism(d);
  EXPECT_FALSE(r.wellFormed);
  EXPECT_EQ(r.failure, "malformed description: component 0: cycle length differs from its period");
}

TEST(TruthTransfer, Examples) {
  const PMorphismDescription d = buildSpace(caseTwo());
  const Valuation v{{"p", PointSet{0}}};
  const TransferResult t = truthTransferDetail(d, v, diffBox(neg(p)));
  EXPECT_TRUE(t.holds());
  EXPECT_EQ(t.composite, CompositeSet::point(d.source, {0, kInfinity}));
  EXPECT_EQ(evalKripke(KripkeModel(d.target, v), diffBox(neg(p))), PointSet{0});
  EXPECT_TRUE(truthTransfer(d, v, top()));
  EXPECT_THROW(truthTransfer(d, {{"p", PointSet{2}}}, p), SpaceMismatch);
}

TEST(TruthTransfer, AxiomsAndRandomFormulasUpToThreeWorlds) {
  FormulaGenerator fgen(77);
  std::mt19937_64& rng = fgen.rng();
  for (std::size_t n = 1; n <= 3; ++n)
    for (const KripkeFrame& f : enumerateFrames(n, FrameClass::S4DT0Cone, {.upToIsomorphism = true})) {
      const PMorphismDescription d = buildSpace(f);
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * n)); ++code) {
        const Valuation v{{"p", PointSet(code & f.all().bits())}, {"q", PointSet(code >> n)}};
        for (AxiomName a : kAllAxioms) ASSERT_TRUE(truthTransfer(d, v, axiom(a))) << toString(a);
      }
      for (int i = 0; i < 50; ++i) {
        const Formula phi = fgen(5);
        ASSERT_TRUE(truthTransfer(d, randomValuation(rng, n, {"p", "q"}), phi)) << print(phi);
      }
    }
}
