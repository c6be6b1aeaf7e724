#pragma once

#include "curvlab/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace curvlab {

struct AdmissibilityRecord {
  int n = 0;
  int m = 0;
  Rational ineq1;  // m^2 - mn + 2n - 2
  Rational ineq2;  // m^2 - mn + m + n
  bool admissible = false;
};

/// Requires 1 <= m < n.
AdmissibilityRecord admissible(int n, int m);

struct DValue {
  int n = 0;
  int m = 0;
  /// m/(2m-2); absent for m = 1, where it is +infinity.
  std::optional<Rational> first;
  Rational second;  // 1/(n-m)
  Rational third;   // (m^2-mn+m+n) / (2(m^2-mn+2n-2))
  Rational value;
};

/// D(n, m) = min of the three candidates. Throws ParameterError if (n, m) is
/// not admissible.
DValue d_of(int n, int m);

struct ThirdExpressionRow {
  int n = 0;
  int m = 0;
  DValue d;
  bool equals_third = false;
};

struct ThirdExpressionReport {
  std::vector<ThirdExpressionRow> rows;
  int failures = 0;
  bool pass() const { return failures == 0; }
};

/// D(n, m) == third candidate on every admissible pair with 3 <= n <= 7, 2 <= m <= n-1.
ThirdExpressionReport check_d_third_expression();

struct RecursionRow {
  int ell = 0;
  int n = 0;  // n - ell
  int m = 0;  // m - ell
  bool admissible = false;
  std::optional<Rational> d;    // D(n-ell, m-ell) when admissible
  std::optional<Rational> rhs;  // (ell-1)/(2 ell); absent (-infinity) at ell = 0
  bool holds = false;
};

struct RecursionReport {
  int n = 0;
  int m = 0;
  std::vector<RecursionRow> rows;  // ell = 0..m-2
  bool pass() const;
};

/// D(n-ell, m-ell) >= (ell-1)/(2 ell) for ell = 0..m-2.
RecursionReport check_recursion(int n, int m);

struct GammaEquivalence {
  int n = 0;
  int m = 0;
  bool gamma_below;     // (2m-2)/m < 4/(n-m)
  bool ineq2_positive;  // m^2 - mn + m + n > 0
  bool agree() const { return gamma_below == ineq2_positive; }
};

GammaEquivalence gamma_equivalence(int n, int m);

/// Whether (2m-2)/m < 4/(n-m) and m^2-mn+m+n > 0 agree.
bool check_gamma_equivalence(int n, int m);

/// With eps = k - k^2/4: 1 + k^2/(4 eps) == 4/(4-k). Requires 0 < k < 4.
bool stability_coefficient_identity(const Rational& k);

/// Chen's functional on a symmetric (n-1)x(n-1) matrix A indexed 2..n:
///   |A|^2 + sum_{i=2}^{m} sum_{j=i+1}^{n} (a_ii a_jj - a_ij^2).
double chen_functional(int n, int m, const Eigen::MatrixXd& A);

/// chen_functional / (tr A)^2.
double chen_ratio(int n, int m, const Eigen::MatrixXd& A);

struct MatrixWitness {
  int n = 0;
  int m = 0;
  Eigen::MatrixXd matrix;
  double ratio = 0.0;  // functional / H^2, or functional alone for the traceless problem
  double trace = 0.0;
  double bound = 0.0;  // D(n, m), or 0 for the traceless problem
  double gap = 0.0;    // ratio - bound
  bool holds = false;  // ratio >= bound - 1e-9 (and > 1e-3 for the traceless problem)
  int starts = 0;
};

/// Minimizes chen_ratio over symmetric matrices on the slice tr A = 1 by
/// multi-start projected conjugate gradients. `budget` is the number of starts.
MatrixWitness chen_min_ratio(int n, int m, int budget, std::uint64_t seed);

/// Minimizes chen_functional over traceless symmetric matrices of unit
/// Frobenius norm by multi-start Riemannian gradient descent on the sphere.
/// Requires m^2 - mn + 2n - 2 > 0.
MatrixWitness brendle_min(int n, int m, int budget, std::uint64_t seed);

}  // namespace curvlab
