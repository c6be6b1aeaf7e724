#include "curvlab/curvature.hpp"

#include "curvlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace curvlab {

Profile constant_profile(double c) {
  return [c](double) { return Jet{c, 0.0, 0.0}; };
}

WarpedTorusMetric::WarpedTorusMetric(int n, int m, double epsilon, Profile f, Profile u,
                                     Interval r_domain, ProfileSpec spec)
    : n_(n),
      m_(m),
      epsilon_(epsilon),
      f_(std::move(f)),
      u_(std::move(u)),
      r_domain_(r_domain),
      spec_(std::move(spec)) {
  if (n_ < 3 || n_ > 7) throw ParameterError("warped torus metric: n must lie in 3..7");
  if (m_ < 1 || m_ > n_ - 1) throw ParameterError("warped torus metric: m must lie in 1..n-1");
  if (!(epsilon_ > 0.0)) throw ParameterError("warped torus metric: epsilon must be positive");
  if (!(r_domain_.lo < r_domain_.hi)) throw ParameterError("warped torus metric: empty r domain");
  if (!f_ || !u_) throw ParameterError("warped torus metric: missing profile");
  constexpr int kSamples = 65;
  for (int k = 0; k < kSamples; ++k) {
    const double r = r_domain_.lo + (r_domain_.hi - r_domain_.lo) * k / (kSamples - 1);
    if (!(f_(r).value > 0.0) || !(u_(r).value > 0.0)) {
      std::ostringstream msg;
      msg << "warped torus metric: profiles must be positive on the r domain (fails at r=" << r
          << ")";
      throw ParameterError(msg.str());
    }
  }
}

void WarpedTorusMetric::require_in_domain(double r) const {
  if (!r_domain_.contains(r)) {
    std::ostringstream msg;
    msg << "r=" << r << " outside [" << r_domain_.lo << ", " << r_domain_.hi << "]";
    throw DomainError(msg.str());
  }
}

nlohmann::json to_json(const WarpedTorusMetric& metric) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : metric.spec().params) params[key] = value;
  return {
      {"n", metric.n()},
      {"m", metric.m()},
      {"epsilon", metric.epsilon()},
      {"profile",
       {{"case", metric.spec().kind}, {"lambda", metric.spec().lambda}, {"params", params}}},
      {"r_domain", {metric.r_domain().lo, metric.r_domain().hi}},
  };
}

namespace {

// Diagonal metric coefficients and their partial derivatives at one point.
struct DiagonalMetric {
  std::vector<double> g;                 // g_ii
  std::vector<std::vector<double>> dg;   // dg[l][i] = d_l g_ii
};

// Christoffel symbols of a diagonal metric, Gamma[k][i][j].
std::vector<double> diagonal_christoffel(const DiagonalMetric& dm) {
  const int n = static_cast<int>(dm.g.size());
  std::vector<double> gamma(static_cast<std::size_t>(n) * n * n, 0.0);
  auto at = [&](int k, int i, int j) -> double& {
    return gamma[(static_cast<std::size_t>(k) * n + i) * n + j];
  };
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      // Gamma^k_{ki} = Gamma^k_{ik} = d_i g_kk / (2 g_kk)
      const double v = dm.dg[i][k] / (2.0 * dm.g[k]);
      at(k, k, i) = v;
      at(k, i, k) = v;
    }
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      at(k, j, j) = -dm.dg[k][j] / (2.0 * dm.g[k]);
    }
  }
  return gamma;
}

// Round metric of radius rho on S^k in hyperspherical angles:
// h_11 = rho^2, h_jj = rho^2 prod_{i<j} sin^2 y_i.
DiagonalMetric round_sphere_diagonal(const Eigen::VectorXd& y, double rho) {
  const int k = static_cast<int>(y.size());
  DiagonalMetric dm;
  dm.g.assign(k, rho * rho);
  dm.dg.assign(k, std::vector<double>(k, 0.0));
  for (int j = 1; j < k; ++j) {
    for (int i = 0; i < j; ++i) dm.g[j] *= std::sin(y[i]) * std::sin(y[i]);
  }
  for (int l = 0; l < k; ++l) {
    const double cot = std::cos(y[l]) / std::sin(y[l]);
    for (int j = l + 1; j < k; ++j) dm.dg[l][j] = 2.0 * cot * dm.g[j];
  }
  return dm;
}

}  // namespace

ChristoffelTable christoffel_exact(const WarpedTorusMetric& metric, double r) {
  metric.require_in_domain(r);
  const Jet f = metric.f()(r);
  const Jet u = metric.u()(r);
  const double m = metric.m();
  const double eps = metric.epsilon();
  ChristoffelTable t;
  t.sphere_r = f.d1 / f.value;
  t.r_sphere = -eps * eps * f.value * f.d1;
  if (metric.torus_dim() > 0) {
    const double log_u_rate = 2.0 * u.d1 / (m * u.value);
    t.torus_r = log_u_rate;
    t.r_torus = -log_u_rate * std::pow(u.value, 4.0 / m);
  }
  return t;
}

std::vector<double> ChristoffelTable::full_table(const WarpedTorusMetric& metric,
                                                 const Eigen::VectorXd& sphere_angles) const {
  const int n = metric.n();
  const int s = metric.sphere_dim();
  if (sphere_angles.size() != s) throw InputError("full_table: wrong number of sphere angles");
  const DiagonalMetric h = round_sphere_diagonal(sphere_angles, 1.0);
  const std::vector<double> gamma_h = diagonal_christoffel(h);

  std::vector<double> gamma(static_cast<std::size_t>(n) * n * n, 0.0);
  auto at = [&](int k, int i, int j) -> double& {
    return gamma[(static_cast<std::size_t>(k) * n + i) * n + j];
  };
  for (int c = 0; c < s; ++c)
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b)
        at(c, a, b) = gamma_h[(static_cast<std::size_t>(c) * s + a) * s + b];

  const int r = metric.r_index();
  for (int a = 0; a < s; ++a) {
    at(a, a, r) = sphere_r;
    at(a, r, a) = sphere_r;
    at(r, a, a) = r_sphere * h.g[a];
  }
  for (int i = 0; i < metric.torus_dim(); ++i) {
    const int ti = metric.torus_index(i);
    at(ti, ti, r) = torus_r;
    at(ti, r, ti) = torus_r;
    at(r, ti, ti) = r_torus;
  }
  return gamma;
}

RiemannData::RiemannData(int dim)
    : dim_(dim),
      components_(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0),
      ricci_(Eigen::MatrixXd::Zero(dim, dim)) {}

void RiemannData::set_sectional(int a, int b, double k) {
  (*this)(a, b, a, b) = k;
  (*this)(b, a, b, a) = k;
  (*this)(a, b, b, a) = -k;
  (*this)(b, a, a, b) = -k;
}

void RiemannData::contract() {
  ricci_.setZero(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b) {
      double sum = 0.0;
      for (int c = 0; c < dim_; ++c) sum += (*this)(c, a, c, b);
      ricci_(a, b) = sum;
    }
  scalar_ = ricci_.trace();
}

double RiemannData::scale() const {
  double s = 0.0;
  for (double v : components_) s = std::max(s, std::abs(v));
  return s;
}

double SymmetryViolations::max() const {
  return std::max({antisymmetry, pair_symmetry, bianchi});
}

SymmetryViolations symmetry_violations(const RiemannData& R) {
  SymmetryViolations v;
  const int n = R.dim();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const double x = R(a, b, c, d);
          v.antisymmetry = std::max({v.antisymmetry, std::abs(x + R(b, a, c, d)),
                                     std::abs(x + R(a, b, d, c))});
          v.pair_symmetry = std::max(v.pair_symmetry, std::abs(x - R(c, d, a, b)));
          v.bianchi = std::max(v.bianchi, std::abs(x + R(b, c, a, d) + R(c, a, b, d)));
        }
  return v;
}

RiemannData riemann_exact(const WarpedTorusMetric& metric, double r) {
  metric.require_in_domain(r);
  const Jet f = metric.f()(r);
  const Jet u = metric.u()(r);
  const double m = metric.m();
  const double eps = metric.epsilon();
  const double lf1 = f.d1 / f.value;
  const double lu1 = u.d1 / u.value;

  const double sphere_sphere = 1.0 / (eps * eps * f.value * f.value) - lf1 * lf1;
  const double sphere_torus = -2.0 * f.d1 * u.d1 / (m * f.value * u.value);
  const double sphere_r = -f.d2 / f.value;
  const double torus_r = -(2.0 / m) * u.d2 / u.value - (2.0 / m) * (2.0 / m - 1.0) * lu1 * lu1;
  const double torus_torus = -(4.0 / (m * m)) * lu1 * lu1;

  RiemannData R(metric.n());
  const int s = metric.sphere_dim();
  const int t = metric.torus_dim();
  const int ri = metric.r_index();
  for (int a = 0; a < s; ++a) {
    for (int b = a + 1; b < s; ++b) R.set_sectional(a, b, sphere_sphere);
    R.set_sectional(a, ri, sphere_r);
    for (int i = 0; i < t; ++i) R.set_sectional(a, metric.torus_index(i), sphere_torus);
  }
  for (int i = 0; i < t; ++i) {
    R.set_sectional(metric.torus_index(i), ri, torus_r);
    for (int j = i + 1; j < t; ++j)
      R.set_sectional(metric.torus_index(i), metric.torus_index(j), torus_torus);
  }
  R.contract();
  return R;
}

RicciScalar ricci_scalar(const RiemannData& R) {
  RiemannData copy = R;
  copy.contract();
  return {copy.ricci(), copy.scalar()};
}

bool CoordinateMetric::in_box(const Eigen::VectorXd& x) const {
  for (int i = 0; i < dim; ++i)
    if (x[i] < box_lo[i] || x[i] > box_hi[i]) return false;
  return true;
}

namespace {

using Table3 = std::vector<double>;

std::size_t idx3(int n, int k, int i, int j) {
  return (static_cast<std::size_t>(k) * n + i) * n + j;
}

// Fourth-order central difference of a vector-valued function along axis l.
template <typename Fn>
auto central_difference(Fn&& fn, const Eigen::VectorXd& x, int l, double h) {
  Eigen::VectorXd p = x;
  p[l] = x[l] + 2 * h;
  auto fp2 = fn(p);
  p[l] = x[l] + h;
  auto fp1 = fn(p);
  p[l] = x[l] - h;
  auto fm1 = fn(p);
  p[l] = x[l] - 2 * h;
  auto fm2 = fn(p);
  auto out = fp2;
  for (std::size_t k = 0; k < static_cast<std::size_t>(out.size()); ++k)
    out[k] = (-fp2[k] + 8.0 * fp1[k] - 8.0 * fm1[k] + fm2[k]) / (12.0 * h);
  return out;
}

Eigen::MatrixXd checked_metric(const CoordinateMetric& metric, const Eigen::VectorXd& x) {
  Eigen::MatrixXd g = metric.g(x);
  if (g.rows() != metric.dim || g.cols() != metric.dim)
    throw InputError("coordinate metric returned a table of the wrong size");
  return g;
}

Table3 christoffel_at(const CoordinateMetric& metric, const Eigen::VectorXd& x, double h) {
  const int n = metric.dim;
  const Eigen::MatrixXd g = checked_metric(metric, x);
  const Eigen::MatrixXd ginv = g.inverse();
  std::vector<Eigen::MatrixXd> dg(n);
  for (int l = 0; l < n; ++l) {
    auto fn = [&](const Eigen::VectorXd& p) { return checked_metric(metric, p).reshaped().eval(); };
    dg[l] = central_difference(fn, x, l, h).reshaped(n, n);
  }
  Table3 gamma(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += ginv(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        gamma[idx3(n, k, i, j)] = 0.5 * sum;
      }
  return gamma;
}

void require_stencil(const CoordinateMetric& metric, const Eigen::VectorXd& x, double reach) {
  if (x.size() != metric.dim) throw InputError("chart point has the wrong dimension");
  for (int i = 0; i < metric.dim; ++i) {
    if (x[i] - reach < metric.box_lo[i] || x[i] + reach > metric.box_hi[i]) {
      std::ostringstream msg;
      msg << "finite-difference stencil leaves the chart box along coordinate " << i;
      throw DomainError(msg.str());
    }
  }
}

}  // namespace

std::vector<double> christoffel_fd(const CoordinateMetric& metric, const Eigen::VectorXd& x,
                                   double step) {
  if (!(step > 0.0)) throw ParameterError("finite-difference step must be positive");
  require_stencil(metric, x, 2.0 * step);
  return christoffel_at(metric, x, step);
}

RiemannData riemann_fd(const CoordinateMetric& metric, const Eigen::VectorXd& x, double step) {
  if (!(step > 0.0)) throw ParameterError("finite-difference step must be positive");
  require_stencil(metric, x, 4.0 * step);
  const int n = metric.dim;
  const Eigen::MatrixXd g = checked_metric(metric, x);
  const Eigen::LLT<Eigen::MatrixXd> llt(g);
  if (llt.info() != Eigen::Success || !g.isApprox(g.transpose(), 1e-12))
    throw InputError("metric coefficients are not symmetric positive definite");

  const Table3 gamma = christoffel_at(metric, x, step);
  std::vector<Table3> dgamma(n);
  for (int l = 0; l < n; ++l) {
    auto fn = [&](const Eigen::VectorXd& p) { return christoffel_at(metric, p, step); };
    dgamma[l] = central_difference(fn, x, l, step);
  }

  // R^p_{s mu nu} = d_mu G^p_{nu s} - d_nu G^p_{mu s} + G^p_{mu l} G^l_{nu s} - G^p_{nu l} G^l_{mu s}
  const std::size_t n4 = static_cast<std::size_t>(n) * n * n * n;
  std::vector<double> upper(n4, 0.0);
  auto at4 = [n](int a, int b, int c, int d) {
    return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
  };
  for (int p = 0; p < n; ++p)
    for (int s = 0; s < n; ++s)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          double v = dgamma[mu][idx3(n, p, nu, s)] - dgamma[nu][idx3(n, p, mu, s)];
          for (int l = 0; l < n; ++l)
            v += gamma[idx3(n, p, mu, l)] * gamma[idx3(n, l, nu, s)] -
                 gamma[idx3(n, p, nu, l)] * gamma[idx3(n, l, mu, s)];
          upper[at4(p, s, mu, nu)] = v;
        }
  std::vector<double> lower(n4, 0.0);
  for (int p = 0; p < n; ++p)
    for (int s = 0; s < n; ++s)
      for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu) {
          double v = 0.0;
          for (int l = 0; l < n; ++l) v += g(p, l) * upper[at4(l, s, mu, nu)];
          lower[at4(p, s, mu, nu)] = v;
        }

  // Orthonormal frame e = L^{-T}: column a holds the coordinates of e_a.
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd E =
      L.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n)).transpose();

  // Contract one index at a time.
  std::vector<double> work = lower;
  std::vector<double> next(n4, 0.0);
  for (int slot = 0; slot < 4; ++slot) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i0 = 0; i0 < n; ++i0)
      for (int i1 = 0; i1 < n; ++i1)
        for (int i2 = 0; i2 < n; ++i2)
          for (int i3 = 0; i3 < n; ++i3) {
            const double v = work[at4(i0, i1, i2, i3)];
            if (v == 0.0) continue;
            int ids[4] = {i0, i1, i2, i3};
            const int coord = ids[slot];
            for (int a = 0; a < n; ++a) {
              ids[slot] = a;
              next[at4(ids[0], ids[1], ids[2], ids[3])] += v * E(coord, a);
            }
          }
    std::swap(work, next);
  }

  RiemannData R(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) R(a, b, c, d) = work[at4(a, b, c, d)];
  R.contract();
  return R;
}

CoordinateMetric to_chart(const WarpedTorusMetric& metric) {
  const int n = metric.n();
  const int s = metric.sphere_dim();
  CoordinateMetric chart;
  chart.dim = n;
  chart.box_lo = Eigen::VectorXd::Constant(n, -10.0);
  chart.box_hi = Eigen::VectorXd::Constant(n, 10.0);
  for (int a = 0; a + 1 < s; ++a) {
    chart.box_lo[a] = 0.05;
    chart.box_hi[a] = M_PI - 0.05;
  }
  chart.box_lo[metric.r_index()] = metric.r_domain().lo;
  chart.box_hi[metric.r_index()] = metric.r_domain().hi;

  chart.g = [metric](const Eigen::VectorXd& x) {
    const int n = metric.n();
    const int s = metric.sphere_dim();
    const double r = x[metric.r_index()];
    const double f = metric.f()(r).value;
    const double u = metric.u()(r).value;
    const double eps = metric.epsilon();
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    double h = 1.0;
    for (int a = 0; a < s; ++a) {
      g(a, a) = eps * eps * f * f * h;
      h *= std::sin(x[a]) * std::sin(x[a]);
    }
    g(metric.r_index(), metric.r_index()) = 1.0;
    const double torus = std::pow(u, 4.0 / metric.m());
    for (int i = 0; i < metric.torus_dim(); ++i) g(metric.torus_index(i), metric.torus_index(i)) = torus;
    return g;
  };
  return chart;
}

Eigen::VectorXd chart_point(const WarpedTorusMetric& metric, double r) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(metric.n());
  for (int a = 0; a < metric.sphere_dim(); ++a) x[a] = 1.0 + 0.1 * a;
  x[metric.r_index()] = r;
  return x;
}

CoordinateMetric round_sphere_chart(int k, double rho) {
  if (k < 1) throw ParameterError("round sphere chart needs k >= 1");
  CoordinateMetric chart;
  chart.dim = k;
  chart.box_lo = Eigen::VectorXd::Constant(k, 0.05);
  chart.box_hi = Eigen::VectorXd::Constant(k, M_PI - 0.05);
  chart.box_lo[k - 1] = -10.0;
  chart.box_hi[k - 1] = 10.0;
  chart.g = [k, rho](const Eigen::VectorXd& y) {
    const DiagonalMetric dm = round_sphere_diagonal(y, rho);
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k, k);
    for (int a = 0; a < k; ++a) g(a, a) = dm.g[a];
    return g;
  };
  return chart;
}

RiemannData constant_curvature(int dim, double k) {
  RiemannData R(dim);
  for (int a = 0; a < dim; ++a)
    for (int b = a + 1; b < dim; ++b) R.set_sectional(a, b, k);
  R.contract();
  return R;
}

RiemannData product(const RiemannData& a, const RiemannData& b) {
  const int na = a.dim();
  RiemannData R(na + b.dim());
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      for (int k = 0; k < na; ++k)
        for (int l = 0; l < na; ++l) R(i, j, k, l) = a(i, j, k, l);
  for (int i = 0; i < b.dim(); ++i)
    for (int j = 0; j < b.dim(); ++j)
      for (int k = 0; k < b.dim(); ++k)
        for (int l = 0; l < b.dim(); ++l) R(na + i, na + j, na + k, na + l) = b(i, j, k, l);
  R.contract();
  return R;
}

}  // namespace curvlab
