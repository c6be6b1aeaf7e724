#include "curvlab/diameter.hpp"

#include "curvlab/error.hpp"
#include "curvlab/inequalities.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>
#include <vector>

namespace curvlab {

namespace {

void require_dimension(int d) {
  if (d < 3) throw ParameterError("diameter bounds require dimension d >= 3");
}

}  // namespace

double shen_ye_bound(const BoundInput& in) {
  require_dimension(in.d);
  if (!(in.lambda > 0.0)) throw ParameterError("shen_ye_bound: lambda must be positive");
  if (in.gamma < Rational(0)) throw ParameterError("shen_ye_bound: gamma must be nonnegative");
  const int d = in.d;
  if (d == 3 ? in.gamma > Rational(2) : !(in.gamma < Rational(4, d - 1))) {
    std::ostringstream msg;
    msg << "shen_ye_bound: gamma=" << to_string(in.gamma) << " outside the validity range for d=" << d;
    throw ParameterError(msg.str());
  }
  // The (d-3)^2 numerator kills the correction at d = 3; gamma = 0 sends 4/gamma to infinity.
  double correction = 0.0;
  if (d != 3 && in.gamma != Rational(0)) {
    const Rational denom = Rational(4) / in.gamma - Rational(d - 1);
    correction = static_cast<double>((d - 3) * (d - 3)) / to_double(denom);
  }
  return std::sqrt(d - 1 + correction) * M_PI / std::sqrt((d - 1) * in.lambda);
}

double antonelli_xu_bound(const BoundInput& in) {
  require_dimension(in.d);
  if (!(in.lambda > 0.0)) throw ParameterError("antonelli_xu_bound: lambda must be positive");
  if (!in.ratio) throw ParameterError("antonelli_xu_bound: u_max/u_min ratio is required");
  if (!(*in.ratio >= 1.0)) throw ParameterError("antonelli_xu_bound: ratio must be >= 1");
  if (in.gamma < Rational(0) || in.gamma > Rational(in.d - 1, in.d - 2))
    throw ParameterError("antonelli_xu_bound: requires 0 <= gamma <= (d-1)/(d-2)");
  const double exponent = to_double(in.gamma) * (in.d - 3) / (in.d - 1);
  return M_PI / std::sqrt(in.lambda) * std::pow(*in.ratio, exponent);
}

C0Value c0(int n, int m) {
  const AdmissibilityRecord rec = admissible(n, m);
  if (!rec.admissible) {
    std::ostringstream msg;
    msg << "C0: (" << n << ", " << m << ") is not admissible";
    throw ParameterError(msg.str());
  }
  return {n, m, rec.ineq2 / (Rational(2) * rec.ineq1)};
}

double cm_diameter_bound(int n, int m, double lambda) {
  if (!(lambda > 0.0)) throw ParameterError("cm_diameter_bound: lambda must be positive");
  return M_PI / std::sqrt(lambda * to_double(c0(n, m).value));
}

C0Identity c0_identity_check(int n, int m) {
  if (m < 2) throw ParameterError("c0_identity_check: requires m >= 2 (gamma = 0 at m = 1)");
  C0Identity id;
  id.n = n;
  id.m = m;
  id.d = n - m + 1;
  id.gamma = Rational(2 * m - 2, m);
  id.inverse_c0 = Rational(1) / c0(n, m).value;
  const Rational denom = Rational(4) / id.gamma - Rational(id.d - 1);
  if (denom == Rational(0)) throw ParameterError("c0_identity_check: 4/gamma = d - 1");
  id.shen_ye_square = Rational(id.d - 1) + Rational((id.d - 3) * (id.d - 3)) / denom;
  id.holds = id.inverse_c0 == id.shen_ye_square;
  return id;
}

double rotational_diameter(const std::function<double(double)>& f, Interval interval, int n_fiber,
                           const GraphResolution& res) {
  if (n_fiber < 1) throw ParameterError("rotational_diameter: fiber dimension must be >= 1");
  if (!(interval.lo < interval.hi)) throw ParameterError("rotational_diameter: degenerate interval");
  if (res.radial < 3 || res.angular < 4 || res.stencil < 1 || res.sources_stride < 1)
    throw ParameterError("rotational_diameter: resolution too small");
  const int nr = res.radial;
  const int na = res.angular;
  const double dr = (interval.hi - interval.lo) / (nr - 1);
  const double dphi = 2.0 * M_PI / na;

  std::vector<double> radius(nr);
  for (int i = 0; i < nr; ++i) {
    radius[i] = f(interval.lo + i * dr);
    const bool end = i == 0 || i == nr - 1;
    if (end ? radius[i] < 0.0 : !(radius[i] > 0.0)) {
      std::ostringstream msg;
      msg << "rotational_diameter: nonpositive profile at r=" << interval.lo + i * dr;
      throw ParameterError(msg.str());
    }
  }

  struct Offset {
    int di, dj;
  };
  std::vector<Offset> offsets;
  for (int di = -res.stencil; di <= res.stencil; ++di)
    for (int dj = -res.stencil; dj <= res.stencil; ++dj)
      if ((di != 0 || dj != 0) && std::gcd(std::abs(di), std::abs(dj)) == 1) offsets.push_back({di, dj});

  // Length of the coordinate-straight segment from row i along an offset,
  // by Simpson's rule on sqrt(dr^2 + f^2 dphi^2).
  std::vector<std::vector<double>> weight(nr, std::vector<double>(offsets.size(), 0.0));
  for (int i = 0; i < nr; ++i)
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      const int ti = i + offsets[k].di;
      if (ti < 0 || ti >= nr) continue;
      const double r0 = interval.lo + i * dr;
      const double rspan = offsets[k].di * dr;
      const double aspan = std::abs(offsets[k].dj) * dphi;
      constexpr int kPanels = 8;
      double sum = 0.0;
      for (int s = 0; s <= kPanels; ++s) {
        const double t = static_cast<double>(s) / kPanels;
        const double fr = (s == 0) ? radius[i] : (s == kPanels ? radius[ti] : f(r0 + t * rspan));
        const double speed = std::sqrt(rspan * rspan + fr * fr * aspan * aspan);
        const double w = (s == 0 || s == kPanels) ? 1.0 : (s % 2 == 1 ? 4.0 : 2.0);
        sum += w * speed;
      }
      weight[i][k] = sum / (3.0 * kPanels);
    }

  const int nodes = nr * na;
  double diameter = 0.0;
  std::vector<double> dist(nodes);
  using Item = std::pair<double, int>;
  // Rotational symmetry: sources on the phi = 0 meridian suffice.
  for (int src = 0; src < nr; src += res.sources_stride) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[src * na] = 0.0;
    heap.push({0.0, src * na});
    while (!heap.empty()) {
      const auto [d, node] = heap.top();
      heap.pop();
      if (d > dist[node]) continue;
      const int i = node / na;
      const int j = node % na;
      for (std::size_t k = 0; k < offsets.size(); ++k) {
        const int ti = i + offsets[k].di;
        if (ti < 0 || ti >= nr) continue;
        const int tj = ((j + offsets[k].dj) % na + na) % na;
        const int target = ti * na + tj;
        const double nd = d + weight[i][k];
        if (nd < dist[target]) {
          dist[target] = nd;
          heap.push({nd, target});
        }
      }
    }
    for (double d : dist) diameter = std::max(diameter, d);
  }
  return diameter;
}

}  // namespace curvlab
