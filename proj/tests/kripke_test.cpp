/* SPDX-License-Identifier: Apache-2.0 */

#include <gtest/gtest.h>

#include "oracle.hpp"
#include "s4dt0/error.hpp"
#include "s4dt0/kripke.hpp"
#include "s4dt0/random.hpp"

using namespace s4dt0;
using oracle::frame;

namespace {

const Formula p = var("p");
const Formula q = var("q");

KripkeFrame universalWithRD(std::initializer_list<std::pair<std::size_t, std::size_t>> rd) {
  return frame(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, rd);
}

}  // namespace

TEST(EvalKripke, Examples) {
  const KripkeModel m(universalWithRD({{0, 1}, {1, 0}}), {{"p", PointSet{0}}});
  EXPECT_EQ(evalKripke(m, box(p)), PointSet{});
  EXPECT_EQ(evalKripke(m, diffBox(neg(p))), PointSet{0});
  EXPECT_EQ(evalKripke(m, top()), PointSet({0, 1}));
}

TEST(EvalKripke, MissingVariableIsEmpty) {
  const KripkeModel m(universalWithRD({}), {});
  EXPECT_EQ(evalKripke(m, p), PointSet{});
  EXPECT_EQ(evalKripke(m, neg(p)), PointSet({0, 1}));
}

TEST(EvalKripke, RejectsValuationOutOfRange) {
  EXPECT_THROW(KripkeModel(universalWithRD({}), {{"p", PointSet{2}}}), InvalidArgument);
}

TEST(EvalKripke, AgreesWithPointwiseOracle) {
  std::mt19937_64 rng(5);
  FormulaGenerator gen(6, {"p", "q"});
  for (int i = 0; i < 3000; ++i) {
    const std::size_t n = 1 + rng() % 5;
    const KripkeFrame f(Relation::fromCode(n, rng() & PointSet::full(n * n).bits()),
                        Relation::fromCode(n, rng() & PointSet::full(n * n).bits()));
    const KripkeModel m(f, randomValuation(rng, n, {"p", "q"}));
    const Formula phi = gen(5);
    ASSERT_EQ(evalKripke(m, phi), oracle::truthKripke(f, m.valuation, phi)) << print(phi);
  }
}

TEST(EvalKripke, SugarMatchesPrimitiveExpansion) {
  std::mt19937_64 rng(9);
  FormulaGenerator gen(10, {"p", "q"});
  for (int i = 0; i < 2000; ++i) {
    const std::size_t n = 1 + rng() % 5;
    const KripkeFrame f(Relation::fromCode(n, rng() & PointSet::full(n * n).bits()),
                        Relation::fromCode(n, rng() & PointSet::full(n * n).bits()));
    const KripkeModel m(f, randomValuation(rng, n, {"p", "q"}));
    const Formula phi = gen(4);
    ASSERT_EQ(evalKripke(m, phi), evalKripke(m, expandSugar(phi))) << print(phi);
    ASSERT_EQ(evalKripke(m, neg(phi)), evalKripke(m, phi).complement(n));
    const Formula psi = gen(3);
    ASSERT_EQ(evalKripke(m, conj(phi, psi)), evalKripke(m, phi) & evalKripke(m, psi));
  }
}

TEST(ValidOnFrame, Examples) {
  EXPECT_FALSE(validOnFrame(universalWithRD({{0, 1}, {1, 0}}), axiom(AxiomName::AT0)));
  EXPECT_TRUE(validOnFrame(universalWithRD({{0, 1}, {1, 0}, {1, 1}}), axiom(AxiomName::AT0)));
  EXPECT_TRUE(validOnFrame(frame(3, {{0, 0}, {1, 1}, {2, 2}, {0, 2}}, {{1, 0}}), axiom(AxiomName::T_box)));
}

TEST(ValidOnFrame, At0CountermodelFromExample) {
  const KripkeModel m(universalWithRD({{0, 1}, {1, 0}}), {{"p", PointSet{0}}, {"q", PointSet{1}}});
  EXPECT_NE(evalKripke(m, axiom(AxiomName::AT0)), PointSet({0, 1}));
}

TEST(ValidOnFrame, BudgetIsEnforced) {
  const KripkeFrame f(Relation::universal(13), Relation::universal(13));
  EXPECT_THROW(validOnFrame(f, axiom(AxiomName::AT0)), BudgetExceeded);
  EXPECT_TRUE(validOnFrame(f, axiom(AxiomName::T_box), 13));
}

TEST(Cone, Examples) {
  const KripkeFrame u(Relation::universal(3), Relation::universal(3));
  EXPECT_EQ(cone(u, 1).frame, u);

  const Cone c1 = cone(frame(2, {{0, 0}, {1, 1}}, {}), 0);
  EXPECT_EQ(c1.frame.worlds(), 1u);
  EXPECT_EQ(c1.worlds, std::vector<std::size_t>{0});

  const Cone c2 = cone(frame(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}}, {}), 1);
  EXPECT_EQ(c2.frame, frame(1, {{0, 0}}, {}));
  EXPECT_EQ(c2.worlds, std::vector<std::size_t>{1});

  const Cone c3 = cone(frame(4, {{3, 1}}, {{1, 2}}), 3);
  EXPECT_EQ(c3.worlds, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_EQ(c3.frame, frame(3, {{2, 0}}, {{0, 1}}));
}

TEST(Clusters, Examples) {
  EXPECT_EQ(clusters(frame(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}, {2, 1}}, {})),
            (std::vector<PointSet>{PointSet{0}, PointSet({1, 2})}));
  EXPECT_EQ(clusters(KripkeFrame(Relation::universal(3), Relation(3))), std::vector<PointSet>{PointSet({0, 1, 2})});
  EXPECT_EQ(clusters(KripkeFrame(Relation::identity(3), Relation(3))),
            (std::vector<PointSet>{PointSet{0}, PointSet{1}, PointSet{2}}));
  EXPECT_THROW(clusters(frame(2, {{0, 0}}, {})), NotPreorder);
  EXPECT_THROW(clusters(frame(3, {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {1, 2}}, {})), NotPreorder);
}

TEST(FrameClass, Examples) {
  const FrameClassReport a = frameClass(universalWithRD({{0, 1}, {1, 0}}));
  EXPECT_TRUE(a.isS4DCone);
  EXPECT_FALSE(a.at0Cluster);
  EXPECT_FALSE(a.isS4DT0Cone);

  EXPECT_TRUE(frameClass(frame(1, {{0, 0}}, {})).isS4DT0Cone);

  const FrameClassReport c = frameClass(KripkeFrame(Relation::fromCode(2, 0b1011), Relation::universal(2)));
  EXPECT_EQ(c, (FrameClassReport{true, true, true, true, true, true, true, true, true}));
}

TEST(FrameClass, ViolationMessages) {
  EXPECT_EQ(classViolation(universalWithRD({{0, 1}, {1, 0}}), FrameClass::S4DT0Cone),
            "AT0 cluster condition violated at (0,1)");
  EXPECT_EQ(classViolation(frame(2, {{0, 0}, {1, 1}}, {}), FrameClass::S4DT0Cone),
            "frame is not a cone");
  EXPECT_FALSE(classViolation(universalWithRD({{0, 1}, {1, 0}}), FrameClass::S4DCone).has_value());
}

TEST(FrameClass, S4DConeHasUniversalDifferenceClosure) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20000; ++i) {
    const std::size_t n = 1 + rng() % 3;
    const KripkeFrame f(Relation::fromCode(n, rng() & PointSet::full(n * n).bits()),
                        Relation::fromCode(n, rng() & PointSet::full(n * n).bits()));
    if (!frameClass(f).isS4DCone) continue;
    EXPECT_EQ(f.RD().unionWith(Relation::identity(n)), Relation::universal(n));
  }
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = 1 + rng() % 6;
    const KripkeFrame f = randomS4DCone(rng, n, i % 2 == 0);
    const FrameClassReport rep = frameClass(f);
    EXPECT_TRUE(rep.isS4DCone);
    if (i % 2 == 0) {
      EXPECT_TRUE(rep.isS4DT0Cone);
    }
  }
}

// Frame validity coincides with validity on every generated cone.
TEST(Cone, FrameLogicIsIntersectionOfConeLogics) {
  std::mt19937_64 rng(33);
  FormulaGenerator gen(34, {"p", "q"});
  std::size_t disagreements = 0;
  for (int i = 0; i < 400; ++i) {
    const std::size_t n = 1 + rng() % 4;
    std::uint64_t rm = rng(), dm = rng();
    // Sparse relations so that proper cones actually occur.
    rm &= rng() & rng();
    dm &= rng() & rng();
    const KripkeFrame f(Relation::fromCode(n, rm & PointSet::full(n * n).bits()),
                        Relation::fromCode(n, dm & PointSet::full(n * n).bits()));
    Formula phi = gen(4);
    if (variables(phi).size() * n > 16) continue;
    bool allCones = true;
    for (std::size_t x = 0; x < n; ++x) allCones = allCones && validOnFrame(cone(f, x).frame, phi);
    if (validOnFrame(f, phi) != allCones) ++disagreements;
  }
  EXPECT_EQ(disagreements, 0u);
}

// Each named frame condition, checked against the corresponding axiom on
// every frame with two worlds.
TEST(Correspondence, TwoWorldsExhaustive) {
  const std::size_t n = 2;
  std::size_t frames = 0;
  for (std::uint64_t rc = 0; rc < 16; ++rc)
    for (std::uint64_t dc = 0; dc < 16; ++dc) {
      const KripkeFrame f(Relation::fromCode(n, rc), Relation::fromCode(n, dc));
      const Relation& R = f.R();
      const Relation& D = f.RD();
      bool refl = true, trans = true, dbox = true, sym = true, pseudo = true, at0 = true;
      for (std::size_t x = 0; x < n; ++x) {
        refl = refl && R(x, x);
        for (std::size_t y = 0; y < n; ++y) {
          dbox = dbox && (!R(x, y) || D(x, y) || x == y);
          sym = sym && (!D(x, y) || D(y, x));
          if (x != y && R(x, y) && R(y, x)) at0 = at0 && (D(x, x) || D(y, y));
          for (std::size_t z = 0; z < n; ++z) {
            trans = trans && (!(R(x, y) && R(y, z)) || R(x, z));
            pseudo = pseudo && (!(D(x, y) && D(y, z)) || D(x, z) || x == z);
          }
        }
      }
      ++frames;
      EXPECT_EQ(validOnFrame(f, axiom(AxiomName::T_box)), refl);
      EXPECT_EQ(validOnFrame(f, axiom(AxiomName::Four_box)), trans);
      EXPECT_EQ(validOnFrame(f, axiom(AxiomName::D_box)), dbox);
      EXPECT_EQ(validOnFrame(f, axiom(AxiomName::B_D)), sym);
      EXPECT_EQ(validOnFrame(f, axiom(AxiomName::Four_D)), pseudo);
      const FrameClassReport rep = frameClass(f);
      EXPECT_EQ(rep.reflexiveR, refl);
      EXPECT_EQ(rep.transitiveR, trans);
      EXPECT_EQ(rep.dBox, dbox);
      EXPECT_EQ(rep.symmetricRD, sym);
      EXPECT_EQ(rep.pseudoTransitiveRD, pseudo);
      EXPECT_EQ(rep.at0Cluster, at0);
      if (rep.isS4DCone) {
        EXPECT_EQ(validOnFrame(f, axiom(AxiomName::AT0)), at0);
      }
    }
  EXPECT_EQ(frames, 256u);
}
