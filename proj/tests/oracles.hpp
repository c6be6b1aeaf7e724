#pragma once

// Reference computations that share no code path with the library. Each one
// solves its problem by a different route (KKT system, eigenvalues, Gauss
// equation) so agreement is evidence rather than repetition.

#include "curvlab/curvature.hpp"

#include <Eigen/Dense>

#include <random>

namespace oracle {

/// Diagonal-block quadratic form of Chen's functional in the variables
/// a_22..a_nn; off-diagonal entries decouple with positive weight.
inline Eigen::MatrixXd chen_diagonal_form(int n, int m) {
  const int k = n - 1;
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i <= m - 2; ++i)
    for (int j = i + 1; j < k; ++j) {
      q(i, j) += 0.5;
      q(j, i) += 0.5;
    }
  return q;
}

/// min x^T Q x subject to sum x = 1, from the KKT system [2Q 1; 1^T 0].
/// Returns the minimizer; the minimum is x^T Q x.
inline Eigen::VectorXd chen_kkt_minimizer(int n, int m) {
  const Eigen::MatrixXd q = chen_diagonal_form(n, m);
  const int k = static_cast<int>(q.rows());
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = 2.0 * q;
  kkt.block(0, k, k, 1).setOnes();
  kkt.block(k, 0, 1, k).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  return kkt.fullPivLu().solve(rhs).head(k);
}

inline double chen_kkt_min(int n, int m) {
  const Eigen::VectorXd x = chen_kkt_minimizer(n, m);
  return x.dot(chen_diagonal_form(n, m) * x);
}

/// Smallest eigenvalue of the functional on traceless symmetric matrices of
/// unit Frobenius norm. Off-diagonal pairs (i, j) carry weight 1 - c/2 where c
/// counts whether -a_ij^2 appears in the sum; the diagonal block is restricted
/// to the orthogonal complement of the all-ones vector.
inline double traceless_min_eigenvalue(int n, int m) {
  const int k = n - 1;
  double off_min = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) off_min = std::min(off_min, i <= m - 2 ? 0.5 : 1.0);
  const Eigen::MatrixXd q = chen_diagonal_form(n, m);
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(k, k);
  basis.col(0).setOnes();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
  const Eigen::MatrixXd full_q = qr.householderQ();
  const Eigen::MatrixXd perp = full_q.rightCols(k - 1);
  const Eigen::MatrixXd restricted = perp.transpose() * q * perp;
  const double diag_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(restricted).eigenvalues()[0];
  return std::min(off_min, diag_min);
}

/// Random algebraic curvature tensor sum_k s_k (h_ac h_bd - h_ad h_bc) with
/// random symmetric h_k and signs s_k; Gauss-equation tensors satisfy every
/// symmetry including first Bianchi.
inline curvlab::RiemannData random_curvature_tensor(int dim, std::mt19937_64& rng, int terms = 3) {
  std::normal_distribution<double> normal;
  curvlab::RiemannData R(dim);
  for (int t = 0; t < terms; ++t) {
    Eigen::MatrixXd h(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) h(i, j) = normal(rng);
    h = 0.5 * (h + h.transpose()).eval();
    const double sign = (t % 2 == 0) ? 1.0 : -1.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
        for (int c = 0; c < dim; ++c)
          for (int d = 0; d < dim; ++d)
            R(a, b, c, d) += sign * (h(a, c) * h(b, d) - h(a, d) * h(b, c));
  }
  R.contract();
  return R;
}

/// C_m straight from the defining double sum over an explicit completion of
/// the frame, using Gram-Schmidt against the coordinate axes.
inline double cm_definition(const curvlab::RiemannData& R, const Eigen::MatrixXd& frame) {
  const int n = R.dim();
  const int m = static_cast<int>(frame.cols());
  std::vector<Eigen::VectorXd> basis;
  for (int j = 0; j < m; ++j) basis.push_back(frame.col(j));
  for (int axis = 0; axis < n && static_cast<int>(basis.size()) < n; ++axis) {
    Eigen::VectorXd v = Eigen::VectorXd::Unit(n, axis);
    for (const auto& b : basis) v -= b.dot(v) * b;
    for (const auto& b : basis) v -= b.dot(v) * b;
    if (v.norm() > 1e-6) basis.push_back(v.normalized());
  }
  auto rm = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    double s = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) s += R(a, b, c, d) * x[a] * y[b] * x[c] * y[d];
    return s;
  };
  double sum = 0.0;
  for (int p = 0; p < m; ++p)
    for (int q = p + 1; q < n; ++q) sum += rm(basis[p], basis[q]);
  return sum;
}

}  // namespace oracle
