#include "curvlab/error.hpp"
#include "curvlab/inequalities.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace curvlab;

namespace {

std::vector<std::pair<int, int>> admissible_pairs(int max_n) {
  std::vector<std::pair<int, int>> out;
  for (int n = 3; n <= max_n; ++n)
    for (int m = 1; m < n; ++m)
      if (admissible(n, m).admissible) out.emplace_back(n, m);
  return out;
}

Eigen::MatrixXd random_symmetric(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd a(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) a(i, j) = normal(rng);
  return 0.5 * (a + a.transpose());
}

}  // namespace

TEST(Admissible, Examples) {
  const AdmissibilityRecord r62 = admissible(6, 2);
  EXPECT_EQ(r62.ineq2, Rational(0));
  EXPECT_FALSE(r62.admissible);
  const AdmissibilityRecord r75 = admissible(7, 5);
  EXPECT_EQ(r75.ineq1, Rational(2));
  EXPECT_EQ(r75.ineq2, Rational(2));
  EXPECT_TRUE(r75.admissible);
  EXPECT_TRUE(admissible(5, 4).admissible);
}

TEST(Admissible, TheoremRangesForSmallN) {
  const std::map<int, std::vector<int>> expected = {
      {3, {1, 2}}, {4, {1, 2, 3}}, {5, {1, 2, 3, 4}}, {6, {1, 4, 5}}, {7, {1, 5, 6}}};
  for (const auto& [n, set] : expected) {
    std::vector<int> got;
    for (int m = 1; m < n; ++m)
      if (admissible(n, m).admissible) got.push_back(m);
    EXPECT_EQ(got, set) << "n=" << n;
  }
}

TEST(Admissible, RejectsOutOfRange) {
  EXPECT_THROW(admissible(5, 5), ParameterError);
  EXPECT_THROW(admissible(5, 0), ParameterError);
}

TEST(DOf, Examples) {
  const DValue d32 = d_of(3, 2);
  EXPECT_EQ(*d32.first, Rational(1));
  EXPECT_EQ(d32.second, Rational(1));
  EXPECT_EQ(d32.third, Rational(3, 4));
  EXPECT_EQ(d32.value, Rational(3, 4));

  const DValue d76 = d_of(7, 6);
  EXPECT_EQ(*d76.first, Rational(3, 5));
  EXPECT_EQ(d76.second, Rational(1));
  EXPECT_EQ(d76.value, Rational(7, 12));

  const DValue d42 = d_of(4, 2);
  EXPECT_EQ(d42.value, Rational(1, 2));
  EXPECT_EQ(d42.second, d42.third);
}

TEST(DOf, MOneHasNoFirstCandidate) {
  const DValue d = d_of(5, 1);
  EXPECT_FALSE(d.first.has_value());
  EXPECT_EQ(d.value, Rational(1, 4));
}

TEST(DOf, InadmissibleThrows) { EXPECT_THROW(d_of(6, 2), ParameterError); }

TEST(ThirdExpression, SweepHasNoFailures) {
  const ThirdExpressionReport rep = check_d_third_expression();
  EXPECT_TRUE(rep.pass());
  EXPECT_FALSE(rep.rows.empty());
  for (const auto& row : rep.rows) {
    EXPECT_GE(row.m, 2);
    EXPECT_TRUE(row.equals_third);
  }
  const auto it = std::find_if(rep.rows.begin(), rep.rows.end(),
                               [](const ThirdExpressionRow& r) { return r.n == 5 && r.m == 4; });
  ASSERT_NE(it, rep.rows.end());
  EXPECT_EQ(it->d.third, Rational(5, 8));
}

TEST(Recursion, SevenSix) {
  const RecursionReport rep = check_recursion(7, 6);
  EXPECT_TRUE(rep.pass());
  ASSERT_EQ(rep.rows.size(), 5u);
  EXPECT_FALSE(rep.rows[0].rhs.has_value());
  EXPECT_TRUE(rep.rows[0].holds);
  EXPECT_EQ(*rep.rows[1].d, Rational(3, 5));
  EXPECT_EQ(*rep.rows[1].rhs, Rational(0));
  EXPECT_EQ(rep.rows[4].n, 3);
  EXPECT_EQ(*rep.rows[4].d, Rational(3, 4));
  EXPECT_EQ(*rep.rows[4].rhs, Rational(3, 8));
}

TEST(Recursion, AllAdmissiblePairsPass) {
  for (const auto& [n, m] : admissible_pairs(7))
    if (m >= 2) EXPECT_TRUE(check_recursion(n, m).pass()) << n << "," << m;
}

TEST(GammaEquivalence, Examples) {
  EXPECT_TRUE(gamma_equivalence(7, 5).gamma_below);
  EXPECT_TRUE(gamma_equivalence(7, 5).ineq2_positive);
  EXPECT_FALSE(gamma_equivalence(7, 3).gamma_below);
  EXPECT_FALSE(gamma_equivalence(7, 3).ineq2_positive);
  EXPECT_FALSE(gamma_equivalence(6, 2).gamma_below);
  EXPECT_FALSE(gamma_equivalence(6, 2).ineq2_positive);
}

TEST(GammaEquivalence, SweepToTwelve) {
  for (int n = 2; n <= 12; ++n)
    for (int m = 1; m < n; ++m) EXPECT_TRUE(check_gamma_equivalence(n, m)) << n << "," << m;
}

TEST(StabilityIdentity, RationalGrid) {
  for (int q = 1; q <= 20; ++q)
    for (int p = 1; p < 4 * q; ++p) EXPECT_TRUE(stability_coefficient_identity(Rational(p, q)));
  EXPECT_THROW(stability_coefficient_identity(Rational(0)), ParameterError);
  EXPECT_THROW(stability_coefficient_identity(Rational(4)), ParameterError);
}

TEST(ChenFunctional, ThreeTwoByHand) {
  Eigen::MatrixXd a(2, 2);
  a << 0.3, 0.2, 0.2, 0.7;
  // x^2 + y^2 + 2h^2 + (xy - h^2)
  EXPECT_NEAR(chen_functional(3, 2, a), 0.09 + 0.49 + 0.08 + 0.21 - 0.04, 1e-15);
}

TEST(ChenFunctional, ScaleInvariantRatio) {
  std::mt19937_64 rng(4);
  for (const auto& [n, m] : admissible_pairs(7)) {
    const Eigen::MatrixXd a = random_symmetric(n - 1, rng);
    const double r = chen_ratio(n, m, a);
    EXPECT_NEAR(chen_ratio(n, m, -3.0 * a), r, 1e-10 * std::max(1.0, std::abs(r)));
    EXPECT_NEAR(chen_ratio(n, m, 0.5 * a), r, 1e-10 * std::max(1.0, std::abs(r)));
  }
}

TEST(ChenFunctional, BlockPermutationInvariance) {
  std::mt19937_64 rng(5);
  for (const auto& [n, m] : admissible_pairs(7)) {
    const int k = n - 1;
    const Eigen::MatrixXd a = random_symmetric(k, rng);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<int> perm(k);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.begin() + (m - 1), rng);
      std::shuffle(perm.begin() + (m - 1), perm.end(), rng);
      Eigen::MatrixXd b(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) b(i, j) = a(perm[i], perm[j]);
      EXPECT_NEAR(chen_functional(n, m, b), chen_functional(n, m, a), 1e-12) << n << "," << m;
    }
  }
}

TEST(ChenMin, ThreeTwoWitness) {
  const MatrixWitness w = chen_min_ratio(3, 2, 64, 1);
  EXPECT_NEAR(w.ratio, 0.75, 1e-6);
  EXPECT_TRUE(w.holds);
  EXPECT_NEAR(w.trace, 1.0, 1e-12);
  const Eigen::MatrixXd expected = 0.5 * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_LE((w.matrix - expected).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(ChenMin, FourTwoWitness) {
  const MatrixWitness w = chen_min_ratio(4, 2, 64, 1);
  EXPECT_NEAR(w.ratio, 0.5, 1e-6);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(3, 3);
  expected(1, 1) = expected(2, 2) = 0.5;
  EXPECT_LE((w.matrix - expected).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(ChenMin, MatchesKktOracle) {
  for (const auto& [n, m] : admissible_pairs(7)) {
    const MatrixWitness w = chen_min_ratio(n, m, 64, 3);
    EXPECT_NEAR(w.ratio, oracle::chen_kkt_min(n, m), 1e-8) << n << "," << m;
    EXPECT_GE(w.ratio, to_double(d_of(n, m).value) - 1e-9);
    EXPECT_NEAR(w.ratio, chen_ratio(n, m, w.matrix), 1e-10);
  }
}

TEST(ChenMin, KktOracleReproducesHandValues) {
  EXPECT_NEAR(oracle::chen_kkt_min(3, 2), 0.75, 1e-12);
  EXPECT_NEAR(oracle::chen_kkt_min(4, 2), 0.5, 1e-12);
}

TEST(TracelessMin, ThreeTwoIsHalf) {
  const MatrixWitness w = brendle_min(3, 2, 64, 1);
  EXPECT_NEAR(w.ratio, 0.5, 1e-8);
  EXPECT_TRUE(w.holds);
  EXPECT_NEAR(w.matrix.norm(), 1.0, 1e-10);
  EXPECT_NEAR(w.matrix.trace(), 0.0, 1e-10);
  EXPECT_EQ(chen_functional(3, 2, Eigen::MatrixXd::Zero(2, 2)), 0.0);
}

TEST(TracelessMin, MatchesEigenvalueOracle) {
  for (const auto& [n, m] : admissible_pairs(7)) {
    const MatrixWitness w = brendle_min(n, m, 64, 2);
    EXPECT_NEAR(w.ratio, oracle::traceless_min_eigenvalue(n, m), 1e-8) << n << "," << m;
    EXPECT_GT(w.ratio, 1e-3);
  }
}

TEST(TracelessMin, RequiresFirstInequality) {
  // (7,3): ineq1 = 9 - 21 + 12 = 0.
  EXPECT_THROW(brendle_min(7, 3, 8, 1), ParameterError);
}
