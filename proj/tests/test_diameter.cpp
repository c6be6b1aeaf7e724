#include "curvlab/diameter.hpp"
#include "curvlab/error.hpp"
#include "curvlab/inequalities.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace curvlab;

TEST(ShenYe, Examples) {
  EXPECT_NEAR(shen_ye_bound({3, Rational(2), 1.0, {}}), M_PI, 1e-14);
  EXPECT_NEAR(shen_ye_bound({4, Rational(1), 1.0, {}}), 2 * M_PI / std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(shen_ye_bound({4, Rational(1), 1.0 / 3.0, {}}), 2 * M_PI, 1e-13);
}

TEST(ShenYe, GammaZero) {
  EXPECT_NEAR(shen_ye_bound({5, Rational(0), 1.0, {}}), M_PI, 1e-14);
}

TEST(ShenYe, ValidityRange) {
  EXPECT_THROW(shen_ye_bound({3, Rational(5, 2), 1.0, {}}), ParameterError);
  EXPECT_THROW(shen_ye_bound({4, Rational(4, 3), 1.0, {}}), ParameterError);
  EXPECT_THROW(shen_ye_bound({4, Rational(-1), 1.0, {}}), ParameterError);
  EXPECT_THROW(shen_ye_bound({2, Rational(0), 1.0, {}}), ParameterError);
  EXPECT_THROW(shen_ye_bound({4, Rational(1), 0.0, {}}), ParameterError);
}

TEST(ShenYe, MonotoneInGamma) {
  for (int d = 4; d <= 8; ++d) {
    double previous = 0.0;
    for (int i = 0; i < 40; ++i) {
      const Rational gamma = Rational(4 * i, 40 * (d - 1));
      const double b = shen_ye_bound({d, gamma, 1.0, {}});
      EXPECT_GE(b, previous) << "d=" << d << " i=" << i;
      previous = b;
    }
  }
}

TEST(AntonelliXu, Examples) {
  EXPECT_NEAR(antonelli_xu_bound({3, Rational(1), 1.0, 5.0}), M_PI, 1e-14);
  EXPECT_NEAR(antonelli_xu_bound({4, Rational(1), 1.0, 2.0}), M_PI * std::cbrt(2.0), 1e-12);
  EXPECT_NEAR(M_PI * std::cbrt(2.0), 3.9581, 1e-4);
  for (int d = 3; d <= 7; ++d)
    EXPECT_NEAR(antonelli_xu_bound({d, Rational(1, 2), 4.0, 1.0}), M_PI / 2, 1e-14);
}

TEST(AntonelliXu, Errors) {
  EXPECT_THROW(antonelli_xu_bound({4, Rational(1), 1.0, {}}), ParameterError);
  EXPECT_THROW(antonelli_xu_bound({4, Rational(2), 1.0, 1.0}), ParameterError);
  EXPECT_THROW(antonelli_xu_bound({4, Rational(1), 1.0, 0.5}), ParameterError);
}

TEST(C0, Examples) {
  EXPECT_EQ(c0(5, 2).value, Rational(1, 4));
  EXPECT_EQ(c0(7, 6).value, Rational(7, 12));
  for (int n = 3; n <= 7; ++n) EXPECT_EQ(c0(n, n - 2).value, Rational(1, 2)) << n;
  EXPECT_THROW(c0(7, 4), ParameterError);
}

TEST(CmDiameterBound, Examples) {
  EXPECT_NEAR(cm_diameter_bound(5, 2, 1.0), 2 * M_PI, 1e-14);
  EXPECT_NEAR(cm_diameter_bound(7, 6, 1.0), M_PI * std::sqrt(12.0 / 7.0), 1e-14);
  // pi sqrt(12/7) = 4.1133...
  EXPECT_NEAR(cm_diameter_bound(7, 6, 1.0), 4.1133, 1e-4);
  for (int n = 3; n <= 7; ++n)
    for (double lambda : {0.5, 1.0, 3.0})
      EXPECT_NEAR(cm_diameter_bound(n, n - 2, lambda), M_PI * std::sqrt(2.0 / lambda), 1e-13);
}

TEST(CmDiameterBound, ScalesAsInverseRoot) {
  for (int n = 3; n <= 7; ++n)
    for (int m = 1; m < n; ++m) {
      if (!admissible(n, m).admissible) continue;
      EXPECT_NEAR(cm_diameter_bound(n, m, 4.0), cm_diameter_bound(n, m, 1.0) / 2.0, 1e-14);
    }
}

TEST(C0Identity, Examples) {
  const C0Identity a = c0_identity_check(5, 2);
  EXPECT_EQ(a.inverse_c0, Rational(4));
  EXPECT_EQ(a.shen_ye_square, Rational(4));
  EXPECT_TRUE(a.holds);
  const C0Identity b = c0_identity_check(7, 6);
  EXPECT_EQ(b.inverse_c0, Rational(12, 7));
  EXPECT_TRUE(b.holds);
  EXPECT_THROW(c0_identity_check(5, 1), ParameterError);
}

TEST(C0Identity, FullSweep) {
  int checked = 0;
  for (int n = 3; n <= 7; ++n)
    for (int m = 2; m < n; ++m) {
      if (!admissible(n, m).admissible) continue;
      EXPECT_TRUE(c0_identity_check(n, m).holds) << n << "," << m;
      ++checked;
    }
  EXPECT_EQ(checked, 10);
}

TEST(C0Identity, MatchesShenYeBoundNumerically) {
  for (int n = 3; n <= 7; ++n)
    for (int m = 2; m < n; ++m) {
      if (!admissible(n, m).admissible) continue;
      const int d = n - m + 1;
      if (d < 3) continue;  // Shen-Ye needs d >= 3
      const double sy = shen_ye_bound({d, Rational(2 * m - 2, m), 1.0 / (d - 1), {}});
      EXPECT_NEAR(sy, cm_diameter_bound(n, m, 1.0), 1e-12) << n << "," << m;
    }
}

TEST(RotationalDiameter, UnitTwoSphere) {
  const double d = rotational_diameter([](double r) { return std::sin(r); }, {0.0, M_PI}, 1);
  EXPECT_NEAR(d, M_PI, 0.02 * M_PI);
}

TEST(RotationalDiameter, FlatCylinder) {
  const double rho = 0.5;
  const double L = 2.0;
  const double d = rotational_diameter([rho](double) { return rho; }, {0.0, L}, 1);
  const double exact = std::hypot(L, M_PI * rho);
  EXPECT_NEAR(d, exact, 0.02 * exact);
}

TEST(RotationalDiameter, ThreeSphereOfRadiusRootTwo) {
  const double rho = std::sqrt(2.0);
  const double d =
      rotational_diameter([rho](double r) { return rho * std::sin(r / rho); }, {0.0, M_PI * rho}, 2);
  EXPECT_NEAR(d, M_PI * rho, 0.02 * M_PI * rho);
  EXPECT_NEAR(d, cm_diameter_bound(6, 4, 1.0), 0.02 * M_PI * rho);
}

TEST(RotationalDiameter, AtLeastIntervalLength) {
  const auto profiles = std::vector<std::function<double(double)>>{
      [](double r) { return 1.0 + 0.5 * std::sin(3 * r); },
      [](double r) { return std::exp(-r * r); },
      [](double r) { return 0.1 + r * r; }};
  for (const auto& f : profiles) {
    const double d = rotational_diameter(f, {-1.0, 1.5}, 1, {61, 48, 3, 4});
    EXPECT_GE(d, 2.5 * (1.0 - 1e-9));
  }
}

TEST(RotationalDiameter, Errors) {
  EXPECT_THROW(rotational_diameter([](double) { return 1.0; }, {1.0, 1.0}, 1), ParameterError);
  EXPECT_THROW(rotational_diameter([](double r) { return r - 0.5; }, {0.0, 1.0}, 1), ParameterError);
  EXPECT_THROW(rotational_diameter([](double) { return 1.0; }, {0.0, 1.0}, 0), ParameterError);
}
