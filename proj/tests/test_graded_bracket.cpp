#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qgrade/graded_bracket.hpp"

using namespace qgrade;

TEST(BracketTest, InterpolatesCommutatorAndAnticommutator) {
  const FockSpace s{16};
  const FockOperator a1 = annihilator(QParam::make(1.0), s);
  const FockOperator a1d = adjoint_dag(QParam::make(1.0), s);
  const FockOperator am = annihilator(QParam::make(-1.0), s);
  const FockOperator amd = adjoint_dag(QParam::make(-1.0), s);
  const BracketResult c = bracket_full(a1, a1d);
  EXPECT_EQ(c.G, cplx(1.0, 0.0));
  EXPECT_EQ((c.value.matrix - (a1.matrix * a1d.matrix - a1d.matrix * a1.matrix)).cwiseAbs().maxCoeff(), 0.0);
  const BracketResult ac = bracket_full(am, amd);
  EXPECT_EQ(ac.G, cplx(-1.0, 0.0));
  EXPECT_EQ((ac.value.matrix - (am.matrix * amd.matrix + amd.matrix * am.matrix)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(BracketTest, QCommutatorForElementaryPair) {
  const FockSpace s{16};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(0.1, 1.0);
  std::uniform_real_distribution<double> t(0.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    const QParam q = QParam::from_polar_pi(r(rng), t(rng));
    const FockOperator a = annihilator(q, s);
    const FockOperator an = creator_natural(q, s);
    const Matrix want = a.matrix * an.matrix - q.value() * an.matrix * a.matrix;
    EXPECT_LT((bracket_elementary(a, an).matrix - want).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(BracketTest, ElementaryRejectsComposites) {
  const FockSpace s{8};
  const FockOperator a = annihilator(QParam::make(0.5), s);
  EXPECT_THROW(bracket_elementary(a * a, a), not_elementary);
  EXPECT_NO_THROW(bracket(a * a, a));
}

TEST(BracketTest, GComesFromTagsNotMatrices) {
  const FockSpace s{8};
  FockOperator a = annihilator(QParam::make(1.0), s);
  a.tag = generator_grade(QParam::from_polar_pi(2.0, 0.5));
  const BracketResult r = bracket_full(a, a);
  const cplx want = oracle::grading_factor(std::sqrt(0.5), std::sqrt(0.5), 2.0, 2.0);
  EXPECT_NEAR(std::abs(r.G - want), 0.0, 1e-15);
}

TEST(BracketTest, DimensionMismatch) {
  EXPECT_THROW(bracket(identity(FockSpace{4}), identity(FockSpace{5})), dimension_mismatch);
}

TEST(BracketTest, GradedAntisymmetryWhenGIsUnimodular) {
  // For |G| = 1 with real G^2 = 1 the bracket is graded antisymmetric:
  // [B,A]_G = -G [A,B]_G.
  const FockSpace s{12};
  const FockOperator x = annihilator(QParam::make(-1.0), s) * annihilator(QParam::make(1.0), s);
  const FockOperator y = adjoint_dag(QParam::make(-1.0), s);
  const BracketResult xy = bracket_full(x, y);
  const BracketResult yx = bracket_full(y, x);
  const std::size_t w = std::min(xy.value.safe, yx.value.safe);
  EXPECT_LT(window_residual(yx.value.matrix, (-xy.G * xy.value.matrix).eval(), w), 1e-14);
}

TEST(WorkedExampleTest, SymmetryInstanceVanishes) {
  const CalReport r = worked_example_cal(FockSpace{64});
  EXPECT_EQ(r.G, cplx(1.0, 0.0));
  EXPECT_EQ(r.G, r.G_from_degrees);
  EXPECT_LT(r.max_abs, 1e-12);
  EXPECT_EQ(r.value.safe, 64u);
}

TEST(WorkedExampleTest, GMatchesDegreeFormulaForGenericParameters) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> r(0.3, 1.5);
  std::uniform_real_distribution<double> t(0.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    CalParameters p = cal_symmetry_instance();
    for (auto& x : p) x = QParam::from_polar_pi(r(rng), t(rng));
    const CalReport rep = worked_example_cal(FockSpace{12}, p);
    EXPECT_NEAR(std::abs(rep.G - rep.G_from_degrees), 0.0, 1e-13);
  }
}
