#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace curvlab {

/// Value and first two derivatives of a scalar function of r.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

using Profile = std::function<Jet(double)>;

/// Profile that is identically `c`.
Profile constant_profile(double c);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Provenance of a metric's profile pair, used for JSON export.
struct ProfileSpec {
  std::string kind;  // "equality", "strict" or "constant"
  double lambda = 0.0;
  std::map<std::string, double> params;
};

/// dr^2 + eps^2 f(r)^2 (unit round S^{n-m}) + u(r)^{4/m} (dx_1^2 + ... + dx_{m-1}^2).
///
/// Orthonormal frame ordering used throughout: the n-m sphere directions
/// first, then e_r, then the m-1 torus directions.
class WarpedTorusMetric {
 public:
  WarpedTorusMetric(int n, int m, double epsilon, Profile f, Profile u, Interval r_domain,
                    ProfileSpec spec = {});

  int n() const { return n_; }
  int m() const { return m_; }
  double epsilon() const { return epsilon_; }
  const Profile& f() const { return f_; }
  const Profile& u() const { return u_; }
  const Interval& r_domain() const { return r_domain_; }
  const ProfileSpec& spec() const { return spec_; }

  int sphere_dim() const { return n_ - m_; }
  int torus_dim() const { return m_ - 1; }
  int r_index() const { return n_ - m_; }
  int torus_index(int i) const { return n_ - m_ + 1 + i; }

  void require_in_domain(double r) const;

 private:
  int n_;
  int m_;
  double epsilon_;
  Profile f_;
  Profile u_;
  Interval r_domain_;
  ProfileSpec spec_;
};

nlohmann::json to_json(const WarpedTorusMetric& metric);

/// Christoffel symbols of a WarpedTorusMetric at one r, in (y_alpha, r, x_i)
/// coordinates. Symbols not stored here vanish, except the sphere-internal
/// ones, which are those of the round chart.
struct ChristoffelTable {
  double sphere_r = 0.0;   // Gamma^beta_{alpha r} = sphere_r * delta
  double torus_r = 0.0;    // Gamma^j_{i r} = torus_r * delta
  double r_torus = 0.0;    // Gamma^r_{ij} = r_torus * delta
  double r_sphere = 0.0;   // Gamma^r_{alpha beta} = r_sphere * h_{alpha beta}

  /// Full coordinate table Gamma[k][i][j] = Gamma^k_{ij}, using the
  /// hyperspherical chart of S^{n-m} at the given angles.
  std::vector<double> full_table(const WarpedTorusMetric& metric,
                                 const Eigen::VectorXd& sphere_angles) const;
};

ChristoffelTable christoffel_exact(const WarpedTorusMetric& metric, double r);

/// Curvature in an orthonormal frame. R(a,b,a,b) is the sectional curvature
/// of the (e_a, e_b) plane; ricci(a,b) = sum_c R(c,a,c,b).
class RiemannData {
 public:
  explicit RiemannData(int dim = 0);

  int dim() const { return dim_; }
  double operator()(int a, int b, int c, int d) const { return components_[index(a, b, c, d)]; }
  double& operator()(int a, int b, int c, int d) { return components_[index(a, b, c, d)]; }
  const std::vector<double>& components() const { return components_; }

  /// Writes K into the four entries an orthonormal sectional value occupies.
  void set_sectional(int a, int b, double k);

  const Eigen::MatrixXd& ricci() const { return ricci_; }
  double scalar() const { return scalar_; }

  /// Refreshes ricci and scalar from the component table.
  void contract();

  /// Largest absolute component.
  double scale() const;

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * dim_ + b) * dim_ + c) * dim_ + d;
  }

  int dim_;
  std::vector<double> components_;
  Eigen::MatrixXd ricci_;
  double scalar_ = 0.0;
};

struct SymmetryViolations {
  double antisymmetry = 0.0;
  double pair_symmetry = 0.0;
  double bianchi = 0.0;
  double max() const;
};

SymmetryViolations symmetry_violations(const RiemannData& R);

RiemannData riemann_exact(const WarpedTorusMetric& metric, double r);

struct RicciScalar {
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

RicciScalar ricci_scalar(const RiemannData& R);

/// A metric given by its coefficient table in one chart.
struct CoordinateMetric {
  int dim = 0;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> g;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;

  bool in_box(const Eigen::VectorXd& x) const;
};

inline constexpr double kDefaultFdStep = 1e-3;

/// Riemann tensor by fourth-order central differences of the metric
/// coefficients (Christoffel symbols, then their derivatives), expressed in
/// the orthonormal frame e = L^{-T} with g = L L^T.
RiemannData riemann_fd(const CoordinateMetric& metric, const Eigen::VectorXd& x,
                       double step = kDefaultFdStep);

/// Christoffel symbols Gamma[k][i][j] by fourth-order central differences.
std::vector<double> christoffel_fd(const CoordinateMetric& metric, const Eigen::VectorXd& x,
                                   double step = kDefaultFdStep);

/// Chart (y_1..y_{n-m}, r, x_1..x_{m-1}) with y the hyperspherical angles of
/// S^{n-m}. Coordinate order matches the orthonormal frame ordering.
CoordinateMetric to_chart(const WarpedTorusMetric& metric);

/// A generic interior chart point over radius r.
Eigen::VectorXd chart_point(const WarpedTorusMetric& metric, double r);

/// Round metric of radius rho on S^k in hyperspherical angles.
CoordinateMetric round_sphere_chart(int k, double rho = 1.0);

/// Constant-curvature tensor K (g_ac g_bd - g_ad g_bc) in dimension dim.
RiemannData constant_curvature(int dim, double k);

/// Orthogonal product of two curvature tensors (block diagonal).
RiemannData product(const RiemannData& a, const RiemannData& b);

}  // namespace curvlab
