#pragma once

#include "curvlab/curvature.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace curvlab {

/// Ordered orthonormal m-tuple in R^n, stored as the columns of an n x m matrix.
class Frame {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Throws InputError unless the columns are orthonormal within kTolerance.
  explicit Frame(Eigen::MatrixXd columns);

  /// Frame spanned by the given coordinate axes, in order.
  static Frame coordinate(int dim, const std::vector<int>& axes);

  /// Orthonormalizes the columns of `m` (thin QR) without validation.
  static Frame orthonormalize(const Eigen::MatrixXd& m);

  int dim() const { return static_cast<int>(columns_.rows()); }
  int count() const { return static_cast<int>(columns_.cols()); }
  const Eigen::MatrixXd& columns() const { return columns_; }

 private:
  struct Unchecked {};
  Frame(Eigen::MatrixXd columns, Unchecked) : columns_(std::move(columns)) {}

  Eigen::MatrixXd columns_;
};

/// Uniformly distributed orthonormal frame (QR of a Gaussian matrix).
Frame random_frame(int dim, int count, std::mt19937_64& rng);

/// C_m(e_1..e_m) = sum_p Ric(e_p, e_p) - sum_{p<q<=m} Rm(e_p, e_q, e_p, e_q).
double cm_of_frame(const RiemannData& R, const Frame& F);

/// C_m from its defining double sum sum_{p<=m} sum_{q>p} Rm(e_p, e_q, e_p, e_q),
/// with the frame completed to an orthonormal basis.
double cm_double_sum(const RiemannData& R, const Frame& F);

/// C_m as a function of the projection P = F F^T onto the frame's span:
///   C = tr(Ric P) - 1/2 sum_{abcd} R_abcd P_ac P_bd.
/// Only nonzero curvature components are kept, so evaluation is cheap for
/// the sparse tensors of warped products.
class CmForm {
 public:
  explicit CmForm(const RiemannData& R);

  int dim() const { return dim_; }
  double value(const Eigen::MatrixXd& frame) const;
  /// Euclidean gradient with respect to the frame matrix, 2 (Ric - Q(P)) F.
  Eigen::MatrixXd gradient(const Eigen::MatrixXd& frame) const;

 private:
  struct Entry {
    int a, b, c, d;
    double value;
  };
  int dim_;
  Eigen::MatrixXd ricci_;
  std::vector<Entry> entries_;
};

enum class CmMethod { CoordinateEnumeration, RandomSampling, ProjectedDescent };

std::string to_string(CmMethod method);

struct CmResult {
  double value = 0.0;
  Frame argmin = Frame::coordinate(1, {0});
  long long evaluations = 0;
  CmMethod method = CmMethod::CoordinateEnumeration;
  /// Best value among the coordinate frames and among the random samples,
  /// before descent. The sampling gap is random_best - value.
  double coordinate_best = 0.0;
  double random_best = 0.0;
};

struct DescentOptions {
  int max_iterations = 500;
  double step_tolerance = 1e-10;
  int starts = 8;
};

/// Multi-start minimization of C_m over orthonormal m-frames: all coordinate
/// m-subsets, `budget` seeded random frames, then projected gradient descent
/// with QR retraction from the best starts. The value is an upper bound on
/// the true minimum.
CmResult cm_min(const RiemannData& R, int m, long long budget, std::uint64_t seed,
                const DescentOptions& options = {});

/// Minimum of C_m over `samples` random frames, no descent.
double cm_min_oracle(const RiemannData& R, int m, long long samples, std::uint64_t seed);

}  // namespace curvlab
