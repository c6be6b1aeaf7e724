#pragma once

#include "curvlab/curvature.hpp"
#include "curvlab/frame_opt.hpp"
#include "curvlab/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curvlab {

enum class ProfileCase { Equality, Strict };

std::string to_string(ProfileCase c);

/// Closed-form solution (u, f) of the bottom spectral ODE
///   (2m-2)/m (u''/u + (n-m) f'/f u'/u) = -(n-m) f''/f - lambda.
struct ProfileSolution {
  int n = 0;
  int m = 0;
  double lambda = 0.0;
  ProfileCase kind = ProfileCase::Equality;
  Rational c3;  // -2/(n-m-2)
  Rational c4;  // ((n-m) - 2m/(m-1)) / (n-m-2)^2, zero in the equality case
  Profile u;
  Profile f;
  /// Closed-form parameters: rates a, b of u = exp(a r^2), f = exp(-b r^2) in
  /// the equality case; rate s and exponents p, q of u = cosh(s r)^p,
  /// f = cosh(s r)^q in the strict case.
  std::map<std::string, double> params;
};

/// Requires 2 <= m, n - m >= 3 and 4/(n-m) <= (2m-2)/m.
ProfileSolution solve_profile(int n, int m, double lambda);

/// LHS - RHS of the bottom spectral ODE at r.
double ode_residual(int n, int m, double lambda, const Profile& u, const Profile& f, double r);
double ode_residual(const ProfileSolution& sol, double r);

/// Exponent bookkeeping of the iterated circle lift Sigma_0 -> Sigma_1 -> ... -> Sigma_{m-1}.
struct LiftChain {
  int n = 0;
  int m = 0;
  std::vector<Rational> k_sequence;          // k_j = (2m-2-2j)/(m-j), j = 0..m-1
  std::vector<Rational> function_exponents;  // (m-j)/m
  Rational fiber_exponent;                   // exponent of u in each lifted fiber coefficient

  struct Step {
    int j = 0;
    Rational lift_k;              // k_{j+1}, the lift's parameter
    Rational hypothesis_coeff;    // 4/(4 - k_{j+1}), must equal k_j
    Rational new_exponent;        // (m-j)/m * 2/(4 - k_{j+1}), must equal (m-j-1)/m
    Rational fiber_exponent;      // (m-j)/m * 4(2 - k_{j+1})/(4 - k_{j+1}), must equal 4/m
    bool holds = false;
  };
  std::vector<Step> steps;  // one per lift, j = 0..m-2

  bool all_hold() const;
};

/// m = 1 yields the empty chain.
LiftChain build_chain(int n, int m);

/// dr^2 + eps^2 f^2 g_{S^{n-m}} + u^{4/m} (dx_1^2 + ... + dx_{m-1}^2) over [-r_max, r_max].
/// Requires 6 <= n <= 7, 2 <= m <= n-3.
WarpedTorusMetric build_counterexample(int n, int m, double lambda, double epsilon,
                                       double r_max = 10.0);

/// Rebuilds a metric from its JSON export.
WarpedTorusMetric metric_from_json(const nlohmann::json& j);

/// Uniform grid of `points` values on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, int points);

struct GridPolicy {
  int max_refinements = 4;
  double tolerance = 1e-4;
};

struct PositivityWitness {
  double r = 0.0;
  double value = 0.0;
  Eigen::MatrixXd frame;
  std::string method;
};

struct PositivityReport {
  bool pass = false;
  double lambda = 0.0;
  double epsilon = 0.0;
  double r_max = 0.0;
  int points = 0;           // grid points evaluated, after refinement
  int refinements = 0;
  double grid_minimum = 0.0;
  PositivityWitness worst;
  double coordinate_min = 0.0;  // range of C_m(d_r, e_x1, ..., e_x{m-1}) over the grid
  double coordinate_max = 0.0;
  double coordinate_max_deviation = 0.0;  // max |coordinate value - lambda|
  long long evaluations = 0;
  bool tail_unverified = true;  // r outside the grid interval is not checked
};

nlohmann::json to_json(const PositivityReport& report);

/// Minimizes C_m over frames at every grid r. Passes iff the grid minimum is
/// at least lambda (1 - 1e-6). With a policy, the grid is refined by inserting
/// midpoints until the minimum moves by less than policy.tolerance; a grid
/// that already fails is not refined.
PositivityReport verify_uniform_positivity(const WarpedTorusMetric& metric, double lambda,
                                           const std::vector<double>& r_grid,
                                           long long frame_budget, std::uint64_t seed,
                                           std::optional<GridPolicy> policy = std::nullopt);

/// Frame (d_r, e_{x_1}, ..., e_{x_{m-1}}) in the orthonormal frame ordering.
Frame coordinate_frame(const WarpedTorusMetric& metric);

class SearchFailure : public std::runtime_error {
 public:
  SearchFailure(const std::string& what, PositivityReport best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const PositivityReport& best() const { return best_; }

 private:
  PositivityReport best_;
};

struct EpsilonSearch {
  double epsilon_star = 0.0;
  PositivityReport report;            // at epsilon_star
  PositivityReport report_at_double;  // at 2 epsilon_star
  std::vector<std::pair<double, bool>> trail;  // (epsilon, pass) in search order
};

/// Tries epsilon = 2^-t, t = 0..20, and returns the first (largest) that passes.
EpsilonSearch search_epsilon(int n, int m, double lambda, const std::vector<double>& r_grid,
                             long long frame_budget, std::uint64_t seed, double r_max = 10.0,
                             std::optional<GridPolicy> policy = std::nullopt);

// Circle lift Sigma x S^1 with g = g_Sigma + u^{2 delta} dtheta^2, delta = (4-2k)/(4-k),
// over the model slice Sigma = dr^2 + eps^2 f^2 g_{S^d}.

/// Chart (y_1..y_d, r, theta) of the lifted metric.
CoordinateMetric lifted_chart(int sphere_dim, double epsilon, const Profile& f, const Profile& u,
                              double k, Interval r_domain);

/// FD Ric(e_theta, e_theta) of the lifted chart minus -Delta_Sigma(u^delta)/u^delta.
double circle_lift_ricci_residual(int sphere_dim, double epsilon, const Profile& f,
                                  const Profile& u, double k, double r);

/// Delta_M phi - (Delta_Sigma phi + u^{-delta} <grad u^delta, grad phi>) for phi = u,
/// with Delta_M taken from the divergence form on the lifted chart.
double laplacian_decomposition_residual(int sphere_dim, double epsilon, const Profile& f,
                                        const Profile& u, double k, double r);

}  // namespace curvlab
