#include "curvlab/constructions.hpp"
#include "curvlab/error.hpp"
#include "curvlab/frame_opt.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace curvlab;

namespace {

RiemannData s3_times_t3() { return product(constant_curvature(3, 1.0), constant_curvature(3, 0.0)); }

Eigen::MatrixXd random_rotation(int m, std::mt19937_64& rng) {
  return random_frame(m, m, rng).columns();
}

}  // namespace

TEST(Frame, RejectsNonOrthonormalColumns) {
  Eigen::MatrixXd c(3, 2);
  c << 1, 1, 0, 0, 0, 1;
  EXPECT_THROW(Frame{c}, InputError);
  EXPECT_THROW(Frame::coordinate(3, {0, 3}), InputError);
}

TEST(Frame, RandomFrameIsOrthonormal) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Frame f = random_frame(7, 4, rng);
    const Eigen::MatrixXd gram = f.columns().transpose() * f.columns();
    EXPECT_LE((gram - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(CmOfFrame, FlatIsZero) {
  std::mt19937_64 rng(1);
  const RiemannData R = constant_curvature(5, 0.0);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(cm_of_frame(R, random_frame(5, 2, rng)), 0.0);
}

TEST(CmOfFrame, RoundFiveSphereThreeFrames) {
  std::mt19937_64 rng(2);
  const RiemannData R = constant_curvature(5, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Frame f = random_frame(5, 3, rng);
    EXPECT_NEAR(cm_of_frame(R, f), 9.0, 1e-12);
    EXPECT_NEAR(cm_double_sum(R, f), 9.0, 1e-12);
    EXPECT_NEAR(oracle::cm_definition(R, f.columns()), 9.0, 1e-12);
  }
}

TEST(CmOfFrame, CoordinateFrameOf62IsLambda) {
  const WarpedTorusMetric metric = build_counterexample(6, 2, 1.0, 0.1);
  const Frame coord = coordinate_frame(metric);
  for (double r : uniform_grid(-10.0, 10.0, 41))
    EXPECT_NEAR(cm_of_frame(riemann_exact(metric, r), coord), 1.0, 1e-9) << "r=" << r;
}

TEST(CmOfFrame, DimensionMismatchThrows) {
  EXPECT_THROW(cm_of_frame(constant_curvature(4, 1.0), Frame::coordinate(5, {0})), InputError);
}

TEST(CmOfFrame, AgreesWithDefinitionOracleOnRandomTensors) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 5;
    const RiemannData R = oracle::random_curvature_tensor(n, rng);
    const int m = 1 + t % (n - 1);
    const Frame f = random_frame(n, m, rng);
    EXPECT_NEAR(cm_of_frame(R, f), oracle::cm_definition(R, f.columns()), 1e-9);
    EXPECT_NEAR(CmForm(R).value(f.columns()), cm_of_frame(R, f), 1e-9);
  }
}

TEST(CmProperties, SpanInvariance) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    const RiemannData R = oracle::random_curvature_tensor(6, rng);
    const int m = 1 + t % 5;
    const Frame f = random_frame(6, m, rng);
    const Eigen::MatrixXd rotated = f.columns() * random_rotation(m, rng);
    EXPECT_NEAR(cm_of_frame(R, Frame(rotated)), cm_of_frame(R, f), 1e-9);
  }
}

TEST(CmProperties, MEqualsOneIsSmallestRicciEigenvalue) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 5;
    const RiemannData R = oracle::random_curvature_tensor(n, rng);
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(R.ricci()).eigenvalues()[0];
    EXPECT_NEAR(cm_min(R, 1, 200, t).value, lmin, 1e-8) << "trial " << t;
  }
}

TEST(CmProperties, TopIndexIsHalfScalar) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + t % 5;
    const RiemannData R = oracle::random_curvature_tensor(n, rng);
    EXPECT_NEAR(2.0 * cm_of_frame(R, random_frame(n, n - 1, rng)), R.scalar(), 1e-9);
  }
}

TEST(CmForm, GradientMatchesCentralDifferences) {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const RiemannData R = oracle::random_curvature_tensor(6, rng);
    const CmForm form(R);
    const Eigen::MatrixXd F = random_frame(6, 3, rng).columns();
    const Eigen::MatrixXd g = form.gradient(F);
    const double h = 1e-5;
    for (int i = 0; i < F.rows(); ++i)
      for (int j = 0; j < F.cols(); ++j) {
        Eigen::MatrixXd p = F, q = F;
        p(i, j) += h;
        q(i, j) -= h;
        const double fd = (form.value(p) - form.value(q)) / (2 * h);
        EXPECT_NEAR(g(i, j), fd, 1e-6 * std::max(1.0, std::abs(fd)));
      }
  }
}

TEST(CmMin, FlatFourTorus) {
  const CmResult r = cm_min(constant_curvature(4, 0.0), 2, 1000, 1);
  EXPECT_EQ(r.value, 0.0);
}

TEST(CmMin, SphereTimesTorus) {
  const RiemannData R = s3_times_t3();
  const CmResult r = cm_min(R, 4, 100000, 42);
  EXPECT_NEAR(r.value, 2.0, 1e-6);
  EXPECT_EQ(r.method, CmMethod::CoordinateEnumeration);
  // One sphere direction plus all three torus directions; the lexicographic
  // tie-break picks sphere axis 0.
  const Eigen::MatrixXd expected = Frame::coordinate(6, {0, 3, 4, 5}).columns();
  EXPECT_EQ((r.argmin.columns() - expected).cwiseAbs().maxCoeff(), 0.0);
  const double sampled = cm_min_oracle(R, 4, 100000, 42);
  EXPECT_GE(sampled, 2.0 - 1e-6);
  EXPECT_LE(sampled, 3.0);
}

TEST(CmMin, RoundFourSphereIsConstant) {
  EXPECT_NEAR(cm_min(constant_curvature(4, 1.0), 2, 500, 3).value, 5.0, 1e-12);
}

TEST(CmMin, ValueMatchesArgmin) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const RiemannData R = oracle::random_curvature_tensor(6, rng);
    const CmResult r = cm_min(R, 3, 2000, t);
    EXPECT_NEAR(r.value, cm_of_frame(R, r.argmin), 1e-9);
    EXPECT_LE(r.value, r.random_best + 1e-12);
    EXPECT_LE(r.value, r.coordinate_best + 1e-12);
  }
}

TEST(CmMin, NeverWorseThanSamplingOracle) {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 20; ++t) {
    const RiemannData R = oracle::random_curvature_tensor(5, rng);
    const int m = 1 + t % 4;
    EXPECT_LE(cm_min(R, m, 1000, t).value, cm_min_oracle(R, m, 5000, 1000 + t) + 1e-9);
  }
}

TEST(CmMin, Deterministic) {
  std::mt19937_64 rng(12);
  const RiemannData R = oracle::random_curvature_tensor(7, rng);
  const CmResult a = cm_min(R, 3, 5000, 77);
  const CmResult b = cm_min(R, 3, 5000, 77);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_EQ(a.argmin.columns(), b.argmin.columns());
}

TEST(CmMin, RejectsBadArguments) {
  const RiemannData R = constant_curvature(4, 1.0);
  EXPECT_THROW(cm_min(R, 2, 0, 1), ParameterError);
  EXPECT_THROW(cm_min(R, 0, 10, 1), ParameterError);
  EXPECT_THROW(cm_min(R, 5, 10, 1), ParameterError);
  EXPECT_THROW(cm_min_oracle(R, 2, 0, 1), ParameterError);
}

TEST(CmMinOracle, Examples) {
  EXPECT_EQ(cm_min_oracle(constant_curvature(4, 0.0), 2, 100, 1), 0.0);
  EXPECT_NEAR(cm_min_oracle(constant_curvature(5, 1.0), 3, 1000, 1), 9.0, 1e-9);
}

TEST(CmMethod, Names) {
  EXPECT_EQ(to_string(CmMethod::CoordinateEnumeration), "coordinate-enumeration");
  EXPECT_EQ(to_string(CmMethod::RandomSampling), "random-sampling");
  EXPECT_EQ(to_string(CmMethod::ProjectedDescent), "projected-descent");
}
