#include "curvlab/inequalities.hpp"

#include "curvlab/error.hpp"
#include "curvlab/seed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace curvlab {

AdmissibilityRecord admissible(int n, int m) {
  if (m < 1 || m >= n) {
    std::ostringstream msg;
    msg << "admissible: requires 1 <= m < n, got (" << n << ", " << m << ")";
    throw ParameterError(msg.str());
  }
  AdmissibilityRecord rec;
  rec.n = n;
  rec.m = m;
  rec.ineq1 = Rational(m * m - m * n + 2 * n - 2);
  rec.ineq2 = Rational(m * m - m * n + m + n);
  rec.admissible = rec.ineq1 > Rational(0) && rec.ineq2 > Rational(0);
  return rec;
}

DValue d_of(int n, int m) {
  const AdmissibilityRecord rec = admissible(n, m);
  if (!rec.admissible) {
    std::ostringstream msg;
    msg << "d_of: (" << n << ", " << m << ") is not admissible";
    throw ParameterError(msg.str());
  }
  DValue d;
  d.n = n;
  d.m = m;
  if (m > 1) d.first = Rational(m, 2 * m - 2);
  d.second = Rational(1, n - m);
  d.third = rec.ineq2 / (Rational(2) * rec.ineq1);
  d.value = std::min(d.second, d.third);
  if (d.first) d.value = std::min(d.value, *d.first);
  return d;
}

ThirdExpressionReport check_d_third_expression() {
  ThirdExpressionReport report;
  for (int n = 3; n <= 7; ++n)
    for (int m = 2; m <= n - 1; ++m) {
      if (!admissible(n, m).admissible) continue;
      ThirdExpressionRow row{n, m, d_of(n, m), false};
      row.equals_third = row.d.value == row.d.third;
      if (!row.equals_third) ++report.failures;
      report.rows.push_back(row);
    }
  return report;
}

bool RecursionReport::pass() const {
  return std::all_of(rows.begin(), rows.end(), [](const RecursionRow& r) { return r.holds; });
}

RecursionReport check_recursion(int n, int m) {
  if (!admissible(n, m).admissible) throw ParameterError("check_recursion: (n, m) not admissible");
  if (m < 2) throw ParameterError("check_recursion: requires m >= 2");
  RecursionReport report;
  report.n = n;
  report.m = m;
  for (int ell = 0; ell <= m - 2; ++ell) {
    RecursionRow row;
    row.ell = ell;
    row.n = n - ell;
    row.m = m - ell;
    row.admissible = admissible(row.n, row.m).admissible;
    if (row.admissible) row.d = d_of(row.n, row.m).value;
    if (ell == 0) {
      row.holds = true;  // right-hand side is -infinity
    } else {
      row.rhs = Rational(ell - 1, 2 * ell);
      row.holds = row.d && *row.d >= *row.rhs;
    }
    report.rows.push_back(row);
  }
  return report;
}

GammaEquivalence gamma_equivalence(int n, int m) {
  if (m < 1 || m >= n) throw ParameterError("gamma_equivalence: requires 1 <= m < n");
  return {n, m, Rational(2 * m - 2, m) < Rational(4, n - m), m * m - m * n + m + n > 0};
}

bool check_gamma_equivalence(int n, int m) { return gamma_equivalence(n, m).agree(); }

bool stability_coefficient_identity(const Rational& k) {
  if (!(k > Rational(0) && k < Rational(4))) throw ParameterError("stability coefficient identity requires 0 < k < 4");
  const Rational eps = k - k * k / Rational(4);
  return Rational(1) + k * k / (Rational(4) * eps) == Rational(4) / (Rational(4) - k);
}

double chen_functional(int n, int m, const Eigen::MatrixXd& A) {
  const int d = n - 1;
  if (A.rows() != d || A.cols() != d) throw InputError("chen_functional: matrix must be (n-1)x(n-1)");
  double value = A.squaredNorm();
  // Paper indices i = 2..m, j = i+1..n map to rows 0..m-2, columns i+1..n-2.
  for (int i = 0; i <= m - 2; ++i)
    for (int j = i + 1; j < d; ++j) value += A(i, i) * A(j, j) - A(i, j) * A(j, i);
  return value;
}

double chen_ratio(int n, int m, const Eigen::MatrixXd& A) {
  const double h = A.trace();
  return chen_functional(n, m, A) / (h * h);
}

namespace {

// Upper-triangle parameterization of symmetric d x d matrices.
struct SymParams {
  int d;
  int size() const { return d * (d + 1) / 2; }

  Eigen::MatrixXd to_matrix(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd A(d, d);
    int k = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        A(i, j) = x[k];
        A(j, i) = x[k];
        ++k;
      }
    return A;
  }
};

// Gradient of chen_functional with respect to the upper-triangle parameters.
Eigen::VectorXd chen_gradient(int n, int m, const SymParams& sp, const Eigen::VectorXd& x) {
  const Eigen::MatrixXd A = sp.to_matrix(x);
  const int d = sp.d;
  Eigen::VectorXd g(sp.size());
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j, ++k) {
      if (i == j) {
        double v = 2.0 * A(i, i);
        if (i <= m - 2)
          for (int l = i + 1; l < d; ++l) v += A(l, l);
        for (int l = 0; l <= m - 2 && l < i; ++l) v += A(l, l);
        g[k] = v;
      } else {
        g[k] = 4.0 * A(i, j) - (i <= m - 2 ? 2.0 * A(i, j) : 0.0);
      }
    }
  return g;
}

// Projects onto {sum of diagonal parameters = 0}.
void project_trace_free(const SymParams& sp, Eigen::VectorXd& v) {
  double sum = 0.0;
  int k = 0;
  for (int i = 0; i < sp.d; ++i)
    for (int j = i; j < sp.d; ++j, ++k)
      if (i == j) sum += v[k];
  const double mean = sum / sp.d;
  k = 0;
  for (int i = 0; i < sp.d; ++i)
    for (int j = i; j < sp.d; ++j, ++k)
      if (i == j) v[k] -= mean;
}

}  // namespace

MatrixWitness chen_min_ratio(int n, int m, int budget, std::uint64_t seed) {
  const DValue dval = d_of(n, m);
  if (budget < 1) throw ParameterError("chen_min_ratio: budget must be at least 1");
  const SymParams sp{n - 1};
  auto q = [&](const Eigen::VectorXd& x) { return chen_functional(n, m, sp.to_matrix(x)); };

  MatrixWitness best;
  best.ratio = std::numeric_limits<double>::infinity();
  for (int start = 0; start < budget; ++start) {
    std::mt19937_64 rng(task_seed(seed, static_cast<std::uint64_t>(start)));
    std::normal_distribution<double> normal;
    Eigen::MatrixXd A0(sp.d, sp.d);
    for (int i = 0; i < sp.d; ++i)
      for (int j = i; j < sp.d; ++j) A0(i, j) = A0(j, i) = normal(rng);
    A0.diagonal().array() += (1.0 - A0.trace()) / sp.d;
    Eigen::VectorXd x(sp.size());
    {
      int k = 0;
      for (int i = 0; i < sp.d; ++i)
        for (int j = i; j < sp.d; ++j) x[k++] = A0(i, j);
    }

    // Projected conjugate gradients with exact line search on the quadratic.
    Eigen::VectorXd g = chen_gradient(n, m, sp, x);
    project_trace_free(sp, g);
    Eigen::VectorXd dir = -g;
    bool unbounded = false;
    for (int iter = 0; iter < 20 * sp.size() && g.norm() > 1e-14; ++iter) {
      const double curvature = q(dir);
      if (curvature <= 0.0) {
        unbounded = true;
        break;
      }
      const double t = -g.dot(dir) / (2.0 * curvature);
      x += t * dir;
      Eigen::VectorXd g_new = chen_gradient(n, m, sp, x);
      project_trace_free(sp, g_new);
      const double beta = (iter + 1) % sp.size() == 0 ? 0.0 : g_new.squaredNorm() / g.squaredNorm();
      dir = -g_new + beta * dir;
      g = std::move(g_new);
    }
    const Eigen::MatrixXd A = sp.to_matrix(x);
    const double ratio = unbounded ? -std::numeric_limits<double>::infinity() : chen_ratio(n, m, A);
    if (ratio < best.ratio) {
      best.matrix = A;
      best.ratio = ratio;
      best.trace = A.trace();
    }
  }
  best.n = n;
  best.m = m;
  best.bound = to_double(dval.value);
  best.gap = best.ratio - best.bound;
  best.holds = best.ratio >= best.bound - 1e-9;
  best.starts = budget;
  return best;
}

MatrixWitness brendle_min(int n, int m, int budget, std::uint64_t seed) {
  const AdmissibilityRecord rec = admissible(n, m);
  if (!(rec.ineq1 > Rational(0))) throw ParameterError("brendle_min: requires m^2 - mn + 2n - 2 > 0");
  if (budget < 1) throw ParameterError("brendle_min: budget must be at least 1");
  const int d = n - 1;

  // Frobenius-orthonormal basis of traceless symmetric matrices.
  std::vector<Eigen::MatrixXd> basis;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
      B(i, j) = B(j, i) = 1.0 / std::sqrt(2.0);
      basis.push_back(B);
    }
  for (int k = 1; k < d; ++k) {
    // Helmert vectors: (1, ..., 1, -k, 0, ...) / sqrt(k (k+1)).
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < k; ++i) B(i, i) = 1.0;
    B(k, k) = -k;
    basis.push_back(B / std::sqrt(static_cast<double>(k) * (k + 1)));
  }
  const int dim = static_cast<int>(basis.size());
  auto to_matrix = [&](const Eigen::VectorXd& c) {
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < dim; ++k) A += c[k] * basis[k];
    return A;
  };
  // Gram matrix of the quadratic form in this basis, by polarization.
  Eigen::MatrixXd M(dim, dim);
  for (int k = 0; k < dim; ++k)
    for (int l = 0; l < dim; ++l)
      M(k, l) = 0.5 * (chen_functional(n, m, basis[k] + basis[l]) - chen_functional(n, m, basis[k]) -
                       chen_functional(n, m, basis[l]));

  MatrixWitness best;
  best.ratio = std::numeric_limits<double>::infinity();
  for (int start = 0; start < budget; ++start) {
    std::mt19937_64 rng(task_seed(seed, static_cast<std::uint64_t>(start)));
    std::normal_distribution<double> normal;
    Eigen::VectorXd c(dim);
    for (int k = 0; k < dim; ++k) c[k] = normal(rng);
    c.normalize();
    double value = c.dot(M * c);
    double step = 1.0 / std::max(1.0, M.norm());
    for (int iter = 0; iter < 5000; ++iter) {
      const Eigen::VectorXd euclid = 2.0 * M * c;
      const Eigen::VectorXd grad = euclid - c.dot(euclid) * c;
      const double gnorm2 = grad.squaredNorm();
      if (gnorm2 < 1e-26) break;
      bool accepted = false;
      while (step * std::sqrt(gnorm2) > 1e-16) {
        const Eigen::VectorXd trial = (c - step * grad).normalized();
        const double tv = trial.dot(M * trial);
        if (tv <= value - 1e-4 * step * gnorm2) {
          c = trial;
          value = tv;
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;
      step *= 2.0;
    }
    if (value < best.ratio) {
      best.ratio = value;
      best.matrix = to_matrix(c);
    }
  }
  best.n = n;
  best.m = m;
  best.ratio = chen_functional(n, m, best.matrix);
  best.trace = best.matrix.trace();
  best.bound = 0.0;
  best.gap = best.ratio;
  best.holds = best.ratio >= -1e-9 && best.ratio > 1e-3;
  best.starts = budget;
  return best;
}

}  // namespace curvlab
