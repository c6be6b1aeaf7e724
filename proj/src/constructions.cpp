#include "curvlab/constructions.hpp"

#include "curvlab/error.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/seed.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace curvlab {

std::string to_string(ProfileCase c) { return c == ProfileCase::Equality ? "equality" : "strict"; }

namespace {

// v = exp(c r^2)
Profile gaussian(double c) {
  return [c](double r) {
    const double v = std::exp(c * r * r);
    return Jet{v, 2.0 * c * r * v, (2.0 * c + 4.0 * c * c * r * r) * v};
  };
}

// v = cosh(s r)^e
Profile cosh_power(double s, double e) {
  return [s, e](double r) {
    const double x = s * r;
    const double v = std::exp(e * std::log(std::cosh(x)));
    const double th = std::tanh(x);
    return Jet{v, e * s * th * v, v * (e * s * s * (1.0 - th * th) + e * e * s * s * th * th)};
  };
}

}  // namespace

ProfileSolution solve_profile(int n, int m, double lambda) {
  if (m < 2) throw UnsupportedParameters("solve_profile: requires m >= 2");
  if (n - m < 3) throw UnsupportedParameters("solve_profile: requires n - m >= 3 (n - m - 2 > 0)");
  if (!(lambda > 0.0)) throw ParameterError("solve_profile: lambda must be positive");
  const Rational lhs(4, n - m);
  const Rational rhs(2 * m - 2, m);
  if (lhs > rhs) {
    std::ostringstream msg;
    msg << "solve_profile: requires 4/(n-m) <= (2m-2)/m, got " << to_string(lhs) << " > "
        << to_string(rhs);
    throw UnsupportedParameters(msg.str());
  }

  ProfileSolution sol;
  sol.n = n;
  sol.m = m;
  sol.lambda = lambda;
  const int k = n - m;
  sol.c3 = Rational(-2, k - 2);
  sol.c4 = (Rational(k) - Rational(2 * m, m - 1)) / Rational((k - 2) * (k - 2));
  if (lhs == rhs) {
    sol.kind = ProfileCase::Equality;
    const double a = m * lambda / ((2.0 * m - 2.0) * (k - 2.0));
    const double b = lambda / (2.0 * (k - 2.0));
    sol.u = gaussian(a);
    sol.f = gaussian(-b);
    sol.params = {{"u_rate", a}, {"f_rate", b}};
  } else {
    sol.kind = ProfileCase::Strict;
    const double c3 = to_double(sol.c3);
    const double c4 = to_double(sol.c4);
    const double s = std::sqrt(c4 * lambda);
    const double p = -m * c3 / ((2.0 * m - 2.0) * c4);
    const double q = (c3 - 1.0) / (k * c4);
    sol.u = cosh_power(s, p);
    sol.f = cosh_power(s, q);
    sol.params = {{"C3", c3}, {"C4", c4}, {"rate", s}, {"u_exponent", p}, {"f_exponent", q}};
  }
  return sol;
}

double ode_residual(int n, int m, double lambda, const Profile& u, const Profile& f, double r) {
  const Jet uj = u(r);
  const Jet fj = f(r);
  const double k = n - m;
  const double lhs = (2.0 * m - 2.0) / m * (uj.d2 / uj.value + k * (fj.d1 / fj.value) * (uj.d1 / uj.value));
  const double rhs = -k * fj.d2 / fj.value - lambda;
  return lhs - rhs;
}

double ode_residual(const ProfileSolution& sol, double r) {
  return ode_residual(sol.n, sol.m, sol.lambda, sol.u, sol.f, r);
}

bool LiftChain::all_hold() const {
  return std::all_of(steps.begin(), steps.end(), [](const Step& s) { return s.holds; });
}

LiftChain build_chain(int n, int m) {
  if (m < 1 || m > n - 1) throw ParameterError("build_chain: requires 1 <= m <= n-1");
  LiftChain chain;
  chain.n = n;
  chain.m = m;
  if (m == 1) return chain;
  for (int j = 0; j < m; ++j) {
    chain.k_sequence.emplace_back(2 * m - 2 - 2 * j, m - j);
    chain.function_exponents.emplace_back(m - j, m);
  }
  chain.fiber_exponent = Rational(4, m);
  for (int j = 0; j + 1 < m; ++j) {
    LiftChain::Step step;
    step.j = j;
    step.lift_k = chain.k_sequence[j + 1];
    const Rational four(4);
    step.hypothesis_coeff = four / (four - step.lift_k);
    step.new_exponent = chain.function_exponents[j] * Rational(2) / (four - step.lift_k);
    step.fiber_exponent =
        chain.function_exponents[j] * four * (Rational(2) - step.lift_k) / (four - step.lift_k);
    step.holds = step.hypothesis_coeff == chain.k_sequence[j] &&
                 step.new_exponent == chain.function_exponents[j + 1] &&
                 step.fiber_exponent == chain.fiber_exponent;
    chain.steps.push_back(step);
  }
  return chain;
}

WarpedTorusMetric build_counterexample(int n, int m, double lambda, double epsilon, double r_max) {
  if (n < 6 || n > 7 || m < 2 || m > n - 3) {
    std::ostringstream msg;
    msg << "build_counterexample: (n, m) = (" << n << ", " << m
        << ") outside 6 <= n <= 7, 2 <= m <= n-3";
    throw UnsupportedParameters(msg.str());
  }
  if (!(epsilon > 0.0)) throw ParameterError("build_counterexample: epsilon must be positive");
  if (!(r_max > 0.0)) throw ParameterError("build_counterexample: r_max must be positive");
  ProfileSolution sol = solve_profile(n, m, lambda);
  ProfileSpec spec{to_string(sol.kind), lambda, sol.params};
  return WarpedTorusMetric(n, m, epsilon, sol.f, sol.u, {-r_max, r_max}, std::move(spec));
}

WarpedTorusMetric metric_from_json(const nlohmann::json& j) {
  try {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const double epsilon = j.at("epsilon").get<double>();
    const auto& profile = j.at("profile");
    const std::string kind = profile.at("case").get<std::string>();
    const double lambda = profile.at("lambda").get<double>();
    const auto& dom = j.at("r_domain");
    const Interval domain{dom.at(0).get<double>(), dom.at(1).get<double>()};
    if (kind == "constant") {
      const auto& params = profile.at("params");
      const double f = params.value("f", 1.0);
      const double u = params.value("u", 1.0);
      return WarpedTorusMetric(n, m, epsilon, constant_profile(f), constant_profile(u), domain,
                               {"constant", lambda, {{"f", f}, {"u", u}}});
    }
    ProfileSolution sol = solve_profile(n, m, lambda);
    if (to_string(sol.kind) != kind)
      throw InputError("metric JSON: profile case '" + kind + "' does not match (n, m)");
    return WarpedTorusMetric(n, m, epsilon, sol.f, sol.u, domain, {kind, lambda, sol.params});
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("metric JSON: ") + e.what());
  }
}

std::vector<double> uniform_grid(double lo, double hi, int points) {
  if (points < 1) throw ParameterError("grid needs at least one point");
  if (points == 1) return {0.5 * (lo + hi)};
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
  grid.back() = hi;
  return grid;
}

Frame coordinate_frame(const WarpedTorusMetric& metric) {
  std::vector<int> axes{metric.r_index()};
  for (int i = 0; i < metric.torus_dim(); ++i) axes.push_back(metric.torus_index(i));
  return Frame::coordinate(metric.n(), axes);
}

nlohmann::json to_json(const PositivityReport& report) {
  nlohmann::json frame = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.worst.frame.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < report.worst.frame.cols(); ++j) row.push_back(report.worst.frame(i, j));
    frame.push_back(row);
  }
  return {
      {"pass", report.pass},
      {"lambda", report.lambda},
      {"epsilon", report.epsilon},
      {"grid", {{"R", report.r_max}, {"points", report.points}, {"refinements", report.refinements}}},
      {"grid_minimum", report.grid_minimum},
      {"worst",
       {{"r", report.worst.r},
        {"value", report.worst.value},
        {"frame", frame},
        {"method", report.worst.method}}},
      {"coordinate_frame_value_range", {report.coordinate_min, report.coordinate_max}},
      {"coordinate_frame_max_deviation", report.coordinate_max_deviation},
      {"evaluations", report.evaluations},
      {"tail_unverified", report.tail_unverified},
  };
}

namespace {

struct PointResult {
  double r = 0.0;
  CmResult cm;
  double coordinate_value = 0.0;
};

std::vector<PointResult> evaluate_points(const WarpedTorusMetric& metric,
                                         const std::vector<double>& rs, long long budget,
                                         std::uint64_t seed) {
  const Frame coord = coordinate_frame(metric);
  std::vector<PointResult> out(rs.size());
  parallel_for(rs.size(), [&](std::size_t i) {
    const double r = rs[i];
    const RiemannData R = riemann_exact(metric, r);
    out[i].r = r;
    // Seed keyed by r itself, so refined grids reuse the same per-point streams.
    out[i].cm = cm_min(R, metric.m(), budget, task_seed(seed, std::bit_cast<std::uint64_t>(r)));
    out[i].coordinate_value = cm_of_frame(R, coord);
  });
  return out;
}

double grid_min(const std::vector<PointResult>& pts) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) best = std::min(best, p.cm.value);
  return best;
}

}  // namespace

PositivityReport verify_uniform_positivity(const WarpedTorusMetric& metric, double lambda,
                                           const std::vector<double>& r_grid,
                                           long long frame_budget, std::uint64_t seed,
                                           std::optional<GridPolicy> policy) {
  if (r_grid.empty()) throw ParameterError("verify_uniform_positivity: empty grid");
  std::vector<double> grid = r_grid;
  std::sort(grid.begin(), grid.end());
  std::vector<PointResult> points = evaluate_points(metric, grid, frame_budget, seed);

  PositivityReport report;
  // Refining only adds points, so it cannot rescue a grid that already fails.
  const bool base_fails = grid_min(points) < lambda * (1.0 - 1e-6);
  if (policy && grid.size() > 1 && !base_fails) {
    double previous = grid_min(points);
    for (int depth = 0; depth < policy->max_refinements; ++depth) {
      std::vector<double> mids;
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) mids.push_back(0.5 * (grid[i] + grid[i + 1]));
      std::vector<PointResult> extra = evaluate_points(metric, mids, frame_budget, seed);
      std::vector<PointResult> merged;
      std::vector<double> merged_grid;
      for (std::size_t i = 0; i < points.size(); ++i) {
        merged.push_back(points[i]);
        merged_grid.push_back(grid[i]);
        if (i < extra.size()) {
          merged.push_back(extra[i]);
          merged_grid.push_back(mids[i]);
        }
      }
      points = std::move(merged);
      grid = std::move(merged_grid);
      ++report.refinements;
      const double current = grid_min(points);
      const bool settled = std::abs(current - previous) < policy->tolerance;
      previous = current;
      if (settled) break;
    }
  }

  report.lambda = lambda;
  report.epsilon = metric.epsilon();
  report.r_max = std::max(std::abs(metric.r_domain().lo), std::abs(metric.r_domain().hi));
  report.points = static_cast<int>(points.size());
  report.coordinate_min = std::numeric_limits<double>::infinity();
  report.coordinate_max = -std::numeric_limits<double>::infinity();
  const PointResult* worst = nullptr;
  for (const auto& p : points) {
    report.evaluations += p.cm.evaluations;
    report.coordinate_min = std::min(report.coordinate_min, p.coordinate_value);
    report.coordinate_max = std::max(report.coordinate_max, p.coordinate_value);
    report.coordinate_max_deviation =
        std::max(report.coordinate_max_deviation, std::abs(p.coordinate_value - lambda));
    if (worst == nullptr || p.cm.value < worst->cm.value) worst = &p;
  }
  report.grid_minimum = worst->cm.value;
  report.worst = {worst->r, worst->cm.value, worst->cm.argmin.columns(), to_string(worst->cm.method)};
  report.pass = report.grid_minimum >= lambda * (1.0 - 1e-6);
  return report;
}

EpsilonSearch search_epsilon(int n, int m, double lambda, const std::vector<double>& r_grid,
                             long long frame_budget, std::uint64_t seed, double r_max,
                             std::optional<GridPolicy> policy) {
  EpsilonSearch search;
  std::optional<PositivityReport> best;
  for (int t = 0; t <= 20; ++t) {
    const double eps = std::ldexp(1.0, -t);
    PositivityReport report = verify_uniform_positivity(
        build_counterexample(n, m, lambda, eps, r_max), lambda, r_grid, frame_budget, seed, policy);
    search.trail.emplace_back(eps, report.pass);
    if (report.pass) {
      search.epsilon_star = eps;
      search.report = std::move(report);
      search.report_at_double =
          verify_uniform_positivity(build_counterexample(n, m, lambda, 2.0 * eps, r_max), lambda,
                                    r_grid, frame_budget, seed, policy);
      return search;
    }
    if (!best || report.grid_minimum > best->grid_minimum) best = std::move(report);
  }
  throw SearchFailure("search_epsilon: no epsilon = 2^-t, t <= 20, passes", *best);
}

CoordinateMetric lifted_chart(int sphere_dim, double epsilon, const Profile& f, const Profile& u,
                              double k, Interval r_domain) {
  if (sphere_dim < 1) throw ParameterError("lifted_chart: sphere dimension must be >= 1");
  if (!(k >= 0.0 && k < 4.0)) throw ParameterError("lifted_chart: requires 0 <= k < 4");
  const double delta = (4.0 - 2.0 * k) / (4.0 - k);
  const int dim = sphere_dim + 2;
  CoordinateMetric chart;
  chart.dim = dim;
  chart.box_lo = Eigen::VectorXd::Constant(dim, -10.0);
  chart.box_hi = Eigen::VectorXd::Constant(dim, 10.0);
  for (int a = 0; a + 1 < sphere_dim; ++a) {
    chart.box_lo[a] = 0.05;
    chart.box_hi[a] = M_PI - 0.05;
  }
  chart.box_lo[sphere_dim] = r_domain.lo;
  chart.box_hi[sphere_dim] = r_domain.hi;
  chart.g = [=](const Eigen::VectorXd& x) {
    const double r = x[sphere_dim];
    const double fv = f(r).value;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(dim, dim);
    double h = 1.0;
    for (int a = 0; a < sphere_dim; ++a) {
      g(a, a) = epsilon * epsilon * fv * fv * h;
      h *= std::sin(x[a]) * std::sin(x[a]);
    }
    g(sphere_dim, sphere_dim) = 1.0;
    g(sphere_dim + 1, sphere_dim + 1) = std::pow(u(r).value, 2.0 * delta);
    return g;
  };
  return chart;
}

namespace {

Eigen::VectorXd lifted_point(int sphere_dim, double r) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sphere_dim + 2);
  for (int a = 0; a < sphere_dim; ++a) x[a] = 1.0 + 0.1 * a;
  x[sphere_dim] = r;
  return x;
}

}  // namespace

double circle_lift_ricci_residual(int sphere_dim, double epsilon, const Profile& f,
                                  const Profile& u, double k, double r) {
  const Interval domain{r - 1.0, r + 1.0};
  const CoordinateMetric chart = lifted_chart(sphere_dim, epsilon, f, u, k, domain);
  const RiemannData R = riemann_fd(chart, lifted_point(sphere_dim, r));
  const double fd = R.ricci()(sphere_dim + 1, sphere_dim + 1);

  const double delta = (4.0 - 2.0 * k) / (4.0 - k);
  const Jet uj = u(r);
  const Jet fj = f(r);
  const double lu = uj.d1 / uj.value;
  // phi = u^delta: phi'/phi and phi''/phi
  const double p1 = delta * lu;
  const double p2 = delta * uj.d2 / uj.value + delta * (delta - 1.0) * lu * lu;
  const double laplacian_ratio = p2 + sphere_dim * (fj.d1 / fj.value) * p1;
  return fd - (-laplacian_ratio);
}

double laplacian_decomposition_residual(int sphere_dim, double epsilon, const Profile& f,
                                        const Profile& u, double k, double r) {
  const Interval domain{r - 1.0, r + 1.0};
  const CoordinateMetric chart = lifted_chart(sphere_dim, epsilon, f, u, k, domain);
  const Eigen::VectorXd x = lifted_point(sphere_dim, r);
  // Delta_M phi = phi'' + (log sqrt det g)' phi' for phi = phi(r).
  auto half_log_det = [&](double rr) {
    Eigen::VectorXd p = x;
    p[sphere_dim] = rr;
    return 0.5 * std::log(chart.g(p).determinant());
  };
  const double h = kDefaultFdStep;
  const double dlog = (-half_log_det(r + 2 * h) + 8.0 * half_log_det(r + h) -
                       8.0 * half_log_det(r - h) + half_log_det(r - 2 * h)) /
                      (12.0 * h);
  const Jet uj = u(r);
  const Jet fj = f(r);
  const double lhs = uj.d2 + dlog * uj.d1;

  const double delta = (4.0 - 2.0 * k) / (4.0 - k);
  const double laplacian_sigma = uj.d2 + sphere_dim * (fj.d1 / fj.value) * uj.d1;
  // u^{-delta} <grad u^delta, grad u> = delta u'^2 / u
  const double coupling = delta * uj.d1 * uj.d1 / uj.value;
  return lhs - (laplacian_sigma + coupling);
}

}  // namespace curvlab
