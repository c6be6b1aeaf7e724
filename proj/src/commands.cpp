#include "curvlab/commands.hpp"

#include "curvlab/constructions.hpp"
#include "curvlab/error.hpp"
#include "curvlab/frame_opt.hpp"
#include "curvlab/inequalities.hpp"
#include "curvlab/seed.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>

namespace curvlab {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json witness_json(const MatrixWitness& w) {
  return {{"n", w.n},         {"m", w.m},         {"ratio", w.ratio},
          {"trace", w.trace}, {"bound", w.bound}, {"gap", w.gap},
          {"holds", w.holds}, {"starts", w.starts}, {"matrix", matrix_json(w.matrix)}};
}

std::string rat(const Rational& r) { return to_string(r); }

int finish(const RunConfig& config, VerificationReport& report, Clock::time_point start,
           std::ostream& out, std::ostream& err) {
  report.seconds = seconds_since(start);
  const auto path = report.write(config);
  out << path.string() << "\n";
  err << report.suite << ": " << (report.pass ? "PASS" : "FAIL") << "\n";
  return report.pass ? kExitPass : kExitFail;
}

// Usage problems (bad parameters, unreadable input) map to exit 2.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace

int cmd_verify_examples(const RunConfig& config, int n, int m, double lambda,
                        std::optional<double> epsilon, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const auto start = Clock::now();
    const ProfileSolution sol = solve_profile(n, m, lambda);
    if (epsilon && !(*epsilon > 0.0)) throw ParameterError("epsilon must be positive");

    VerificationReport report;
    report.suite = "verify-examples";
    json& w = report.witnesses;
    w["n"] = n;
    w["m"] = m;
    w["lambda"] = lambda;
    w["profile"] = {{"case", to_string(sol.kind)}, {"C3", rat(sol.c3)}, {"C4", rat(sol.c4)},
                    {"params", sol.params}};

    double ode_max = 0.0;
    double ode_at = 0.0;
    for (double r : uniform_grid(-5.0, 5.0, 101)) {
      const double res = std::abs(ode_residual(sol, r));
      if (res > ode_max) {
        ode_max = res;
        ode_at = r;
      }
    }
    const bool ode_ok = ode_max < 1e-9;
    w["ode_residual"] = {{"max", ode_max}, {"at_r", ode_at}, {"grid", "101 points on [-5, 5]"},
                         {"pass", ode_ok}};

    const auto grid = uniform_grid(-config.r_max, config.r_max, config.grid_points);
    const GridPolicy policy{config.grid_refinements, 1e-4};
    PositivityReport pos;
    if (epsilon) {
      const WarpedTorusMetric metric = build_counterexample(n, m, lambda, *epsilon, config.r_max);
      w["metric"] = to_json(metric);
      pos = verify_uniform_positivity(metric, lambda, grid, config.frame_budget, config.seed, policy);
    } else {
      try {
        const EpsilonSearch search = search_epsilon(n, m, lambda, grid, config.frame_budget,
                                                    config.seed, config.r_max, policy);
        pos = search.report;
        json trail = json::array();
        for (const auto& [eps, ok] : search.trail) trail.push_back({{"epsilon", eps}, {"pass", ok}});
        w["epsilon_search"] = {{"epsilon_star", search.epsilon_star},
                               {"trail", trail},
                               {"at_double_epsilon", to_json(search.report_at_double)}};
        w["metric"] = to_json(build_counterexample(n, m, lambda, search.epsilon_star, config.r_max));
      } catch (const SearchFailure& e) {
        err << "epsilon search failed: " << e.what() << "\n";
        pos = e.best();
        w["epsilon_search"] = {{"epsilon_star", nullptr}};
      }
    }
    w["positivity"] = to_json(pos);
    const bool chain_ok = pos.coordinate_max_deviation <= 1e-9;
    w["coordinate_frame_check"] = {{"tolerance", 1e-9}, {"pass", chain_ok}};
    if (!pos.pass)
      err << "worst grid point r=" << pos.worst.r << " C_m=" << pos.worst.value << " < "
          << lambda << "\n";
    report.pass = ode_ok && pos.pass && chain_ok;
    return finish(config, report, start, out, err);
  });
}

int cmd_scan_algebra(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const auto start = Clock::now();
    VerificationReport report;
    report.suite = "scan-algebra";
    json& w = report.witnesses;
    const auto& dir = config.output_dir;

    CsvTable adm({"n", "m", "ineq1", "ineq2", "admissible"});
    json sets = json::object();
    for (int n = 3; n <= 12; ++n) {
      json set = json::array();
      for (int m = 1; m < n; ++m) {
        const auto rec = admissible(n, m);
        adm.add_row({std::to_string(n), std::to_string(m), rat(rec.ineq1), rat(rec.ineq2),
                     rec.admissible ? "true" : "false"});
        if (rec.admissible) set.push_back(m);
      }
      sets[std::to_string(n)] = set;
    }
    adm.write(dir / "admissibility.csv");
    const json expected = {{"3", {1, 2}}, {"4", {1, 2, 3}}, {"5", {1, 2, 3, 4}},
                           {"6", {1, 4, 5}}, {"7", {1, 5, 6}}};
    bool adm_ok = true;
    for (const auto& [n, set] : expected.items()) adm_ok = adm_ok && sets[n] == set;
    w["admissibility"] = {{"sets", sets}, {"pass", adm_ok}};

    CsvTable dtab({"n", "m", "first", "second", "third", "D", "equals_third"});
    const ThirdExpressionReport third = check_d_third_expression();
    for (int n = 3; n <= 7; ++n)
      for (int m = 1; m < n; ++m) {
        if (!admissible(n, m).admissible) continue;
        const DValue d = d_of(n, m);
        dtab.add_row({std::to_string(n), std::to_string(m), d.first ? rat(*d.first) : "inf",
                      rat(d.second), rat(d.third), rat(d.value),
                      d.value == d.third ? "true" : "false"});
      }
    dtab.write(dir / "d_table.csv");
    w["d_third_expression"] = {{"rows", third.rows.size()}, {"failures", third.failures},
                               {"pass", third.pass()}};

    CsvTable rtab({"n", "m", "ell", "n_minus_ell", "m_minus_ell", "admissible", "D", "rhs", "holds"});
    int rec_failures = 0;
    int rec_rows = 0;
    for (int n = 3; n <= 7; ++n)
      for (int m = 2; m < n; ++m) {
        if (!admissible(n, m).admissible) continue;
        const RecursionReport rr = check_recursion(n, m);
        for (const auto& row : rr.rows) {
          ++rec_rows;
          if (!row.holds) ++rec_failures;
          rtab.add_row({std::to_string(n), std::to_string(m), std::to_string(row.ell),
                        std::to_string(row.n), std::to_string(row.m),
                        row.admissible ? "true" : "false", row.d ? rat(*row.d) : "",
                        row.rhs ? rat(*row.rhs) : "-inf", row.holds ? "true" : "false"});
        }
      }
    rtab.write(dir / "recursion.csv");
    w["recursion"] = {{"rows", rec_rows}, {"failures", rec_failures}, {"pass", rec_failures == 0}};

    CsvTable gtab({"n", "m", "gamma_below", "ineq2_positive", "agree"});
    int gamma_failures = 0;
    for (int n = 2; n <= 12; ++n)
      for (int m = 1; m < n; ++m) {
        const GammaEquivalence g = gamma_equivalence(n, m);
        if (!g.agree()) ++gamma_failures;
        gtab.add_row({std::to_string(n), std::to_string(m), g.gamma_below ? "true" : "false",
                      g.ineq2_positive ? "true" : "false", g.agree() ? "true" : "false"});
      }
    gtab.write(dir / "gamma_equivalence.csv");
    w["gamma_equivalence"] = {{"range", "1 <= m < n <= 12"}, {"failures", gamma_failures},
                              {"pass", gamma_failures == 0}};

    CsvTable ctab({"n", "m", "d", "gamma", "inverse_C0", "shen_ye_square", "holds"});
    int c0_failures = 0;
    for (int n = 3; n <= 7; ++n)
      for (int m = 2; m < n; ++m) {
        if (!admissible(n, m).admissible) continue;
        const C0Identity id = c0_identity_check(n, m);
        if (!id.holds) ++c0_failures;
        ctab.add_row({std::to_string(n), std::to_string(m), std::to_string(id.d), rat(id.gamma),
                      rat(id.inverse_c0), rat(id.shen_ye_square), id.holds ? "true" : "false"});
      }
    ctab.write(dir / "c0_identity.csv");
    w["c0_identity"] = {{"failures", c0_failures}, {"pass", c0_failures == 0}};

    // k = p/q on a rational grid in (0, 4).
    int stab_failures = 0;
    int stab_checked = 0;
    for (int q = 1; q <= 12; ++q)
      for (int p = 1; p < 4 * q; ++p) {
        ++stab_checked;
        if (!stability_coefficient_identity(Rational(p, q))) ++stab_failures;
      }
    w["stability_identity"] = {{"checked", stab_checked}, {"failures", stab_failures},
                               {"pass", stab_failures == 0}};

    report.pass = adm_ok && third.pass() && rec_failures == 0 && gamma_failures == 0 &&
                  c0_failures == 0 && stab_failures == 0;
    return finish(config, report, start, out, err);
  });
}

int cmd_matrix_inequalities(const RunConfig& config, int n, int m, std::ostream& out,
                            std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    if (!admissible(n, m).admissible)
      throw ParameterError("(" + std::to_string(n) + ", " + std::to_string(m) +
                           ") is not admissible");
    const auto start = Clock::now();
    VerificationReport report;
    report.suite = "matrix-inequalities";
    json& w = report.witnesses;
    w["n"] = n;
    w["m"] = m;
    w["D"] = rat(d_of(n, m).value);

    const MatrixWitness chen = chen_min_ratio(n, m, config.matrix_starts, task_seed(config.seed, 1));
    w["chen"] = witness_json(chen);
    w["chen"]["sharp_gap_within_1e-2"] = chen.gap <= 1e-2;
    if (chen.gap > 1e-2) err << "chen: sharpness gap " << chen.gap << " exceeds 1e-2\n";
    bool pass = chen.holds;

    const AdmissibilityRecord rec = admissible(n, m);
    if (rec.ineq1 > Rational(0)) {
      const MatrixWitness br = brendle_min(n, m, config.matrix_starts, task_seed(config.seed, 2));
      w["traceless"] = witness_json(br);
      pass = pass && br.holds;
    } else {
      w["traceless"] = {{"skipped", "m^2 - mn + 2n - 2 <= 0"}};
    }
    report.pass = pass;
    return finish(config, report, start, out, err);
  });
}

int cmd_diameter(const RunConfig& config, int n, int m, double lambda, bool run_model,
                 const GraphResolution& resolution, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    if (!(lambda > 0.0)) throw ParameterError("lambda must be positive");
    if (!admissible(n, m).admissible)
      throw ParameterError("(" + std::to_string(n) + ", " + std::to_string(m) +
                           ") is not admissible");
    const auto start = Clock::now();
    VerificationReport report;
    report.suite = "diameter";
    json& w = report.witnesses;

    const int d = n - m + 1;
    const Rational gamma(2 * m - 2, m);
    const double lambda_ricci = lambda / (d - 1);
    const C0Value c = c0(n, m);
    const double cm_bound = cm_diameter_bound(n, m, lambda);
    w["n"] = n;
    w["m"] = m;
    w["lambda"] = lambda;
    w["C0"] = rat(c.value);
    w["bounds"]["cm_diameter"] = cm_bound;
    err << "C_m diameter bound pi/sqrt(lambda C0) = " << format_double(cm_bound) << "\n";

    CsvTable table({"n", "m", "d", "gamma", "lambda", "formula", "bound"});
    auto add = [&](const std::string& name, double value) {
      table.add_row({std::to_string(n), std::to_string(m), std::to_string(d), rat(gamma),
                     format_double(lambda), name, format_double(value)});
    };
    add("cm_diameter", cm_bound);

    const BoundInput in{d, gamma, lambda_ricci, 1.0};
    try {
      const double sy = shen_ye_bound(in);
      w["bounds"]["shen_ye"] = sy;
      add("shen_ye", sy);
      err << "Shen-Ye bound at slice dimension " << d << " = " << format_double(sy) << "\n";
    } catch (const ParameterError& e) {
      w["bounds"]["shen_ye"] = e.what();
    }
    try {
      const double ax = antonelli_xu_bound(in);
      w["bounds"]["antonelli_xu_ratio_1"] = ax;
      add("antonelli_xu_ratio_1", ax);
      err << "Antonelli-Xu bound (ratio 1) = " << format_double(ax) << "\n";
    } catch (const ParameterError& e) {
      w["bounds"]["antonelli_xu_ratio_1"] = e.what();
    }
    table.write(config.output_dir / "diameter_bounds.csv");

    bool identity_ok = true;
    if (m >= 2) {
      const C0Identity id = c0_identity_check(n, m);
      identity_ok = id.holds;
      w["c0_identity"] = {{"inverse_C0", rat(id.inverse_c0)},
                          {"shen_ye_square", rat(id.shen_ye_square)},
                          {"holds", id.holds}};
    } else {
      w["c0_identity"] = {{"skipped", "gamma = 0 at m = 1"}};
    }

    bool model_ok = true;
    if (run_model && m == n - 2) {
      // Round S^3 of radius rho = sqrt(2/lambda), as a rotation surface over [0, pi rho].
      const double rho = std::sqrt(2.0 / lambda);
      const double diam = rotational_diameter([rho](double r) { return rho * std::sin(r / rho); },
                                              {0.0, M_PI * rho}, 2, resolution);
      const double rel = std::abs(diam - cm_bound) / cm_bound;
      model_ok = rel <= 0.02;
      w["model"] = {{"radius", rho},
                    {"diameter", diam},
                    {"relative_error", rel},
                    {"resolution",
                     {{"radial", resolution.radial},
                      {"angular", resolution.angular},
                      {"stencil", resolution.stencil}}},
                    {"pass", model_ok}};
      err << "model S^3(" << format_double(rho) << ") graph diameter " << format_double(diam)
          << "\n";
    } else {
      w["model"] = {{"skipped", m == n - 2 ? "disabled" : "model exists only for m = n - 2"}};
    }
    report.pass = identity_ok && model_ok;
    return finish(config, report, start, out, err);
  });
}

int cmd_curvature_report(const RunConfig& config, int n, int m, double lambda, double epsilon,
                         const std::optional<std::filesystem::path>& metric_path,
                         std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const auto start = Clock::now();
    std::optional<WarpedTorusMetric> metric;
    if (metric_path) {
      std::ifstream in(*metric_path);
      if (!in) throw InputError("cannot read " + metric_path->string());
      json j;
      try {
        in >> j;
      } catch (const json::exception& e) {
        throw InputError(std::string("metric file: ") + e.what());
      }
      metric.emplace(metric_from_json(j));
    } else {
      if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
      metric.emplace(build_counterexample(n, m, lambda, epsilon, config.r_max));
    }
    const Interval dom = metric->r_domain();
    const double lo = std::max(dom.lo, -config.r_max);
    const double hi = std::min(dom.hi, config.r_max);
    if (!(lo <= hi)) throw ParameterError("r grid does not meet the metric's domain");

    VerificationReport report;
    report.suite = "curvature-report";
    json& w = report.witnesses;
    w["metric"] = to_json(*metric);

    const int s = metric->sphere_dim();
    const int ri = metric->r_index();
    const bool has_torus = metric->torus_dim() > 0;
    const bool two_sphere = s >= 2;
    const bool two_torus = metric->torus_dim() >= 2;
    const Frame coord = coordinate_frame(*metric);

    CsvTable table({"r", "K_sphere_sphere", "K_sphere_r", "K_sphere_torus", "K_torus_r",
                    "K_torus_torus", "Ric_rr", "scalar", "C_m_coordinate_frame",
                    "symmetry_violation"});
    json rows = json::array();
    double worst_violation = 0.0;
    for (double r : uniform_grid(lo, hi, config.grid_points)) {
      const RiemannData R = riemann_exact(*metric, r);
      const double viol = symmetry_violations(R).max() / std::max(1.0, R.scale());
      worst_violation = std::max(worst_violation, viol);
      const double kss = two_sphere ? R(0, 1, 0, 1) : NAN;
      const double ksr = R(0, ri, 0, ri);
      const double kst = has_torus ? R(0, metric->torus_index(0), 0, metric->torus_index(0)) : NAN;
      const double ktr = has_torus ? R(ri, metric->torus_index(0), ri, metric->torus_index(0)) : NAN;
      const double ktt = two_torus ? R(metric->torus_index(0), metric->torus_index(1),
                                       metric->torus_index(0), metric->torus_index(1))
                                   : NAN;
      const double cm = cm_of_frame(R, coord);
      auto cell = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
      table.add_row({format_double(r), cell(kss), cell(ksr), cell(kst), cell(ktr), cell(ktt),
                     format_double(R.ricci()(ri, ri)), format_double(R.scalar()), format_double(cm),
                     format_double(viol)});
      auto jv = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
      rows.push_back({{"r", r},
                      {"sectional",
                       {{"sphere_sphere", jv(kss)},
                        {"sphere_r", ksr},
                        {"sphere_torus", jv(kst)},
                        {"torus_r", jv(ktr)},
                        {"torus_torus", jv(ktt)}}},
                      {"ricci_diagonal", std::vector<double>(R.ricci().diagonal().data(),
                                                             R.ricci().diagonal().data() + R.dim())},
                      {"scalar", R.scalar()},
                      {"cm_coordinate_frame", cm}});
    }
    table.write(config.output_dir / "curvature_table.csv");
    w["rows"] = rows;
    w["symmetry"] = {{"max_relative_violation", worst_violation}, {"tolerance", 1e-12},
                     {"pass", worst_violation <= 1e-12}};
    report.pass = worst_violation <= 1e-12;
    return finish(config, report, start, out, err);
  });
}

}  // namespace curvlab
