#pragma once

#include "curvlab/curvature.hpp"
#include "curvlab/rational.hpp"

#include <functional>
#include <optional>

namespace curvlab {

/// Hypothesis data for the spectral Ricci diameter bounds,
/// gamma Delta u <= u Ric - (d-1) lambda u.
struct BoundInput {
  int d = 3;
  Rational gamma{0};
  double lambda = 1.0;
  std::optional<double> ratio;  // u_max / u_min
};

/// sqrt(d-1 + (d-3)^2 / (4/gamma - d + 1)) * pi / sqrt((d-1) lambda).
/// Valid for 0 <= gamma < 4/(d-1) when d > 3 and 0 <= gamma <= 2 when d = 3.
double shen_ye_bound(const BoundInput& in);

/// pi / sqrt(lambda) * ratio^{gamma (d-3)/(d-1)}, for 0 <= gamma <= (d-1)/(d-2).
double antonelli_xu_bound(const BoundInput& in);

struct C0Value {
  int n = 0;
  int m = 0;
  Rational value;  // (m^2-mn+m+n) / (2(m^2-mn+2n-2))
};

/// Throws ParameterError for inadmissible (n, m).
C0Value c0(int n, int m);

/// pi / sqrt(lambda C0(n, m)).
double cm_diameter_bound(int n, int m, double lambda);

struct C0Identity {
  int n = 0;
  int m = 0;
  int d = 0;           // n - m + 1
  Rational gamma;      // (2m-2)/m
  Rational inverse_c0;
  Rational shen_ye_square;  // (d-1) + (d-3)^2 / (4/gamma - d + 1)
  bool holds = false;
};

/// 1/C0 == (d-1) + (d-3)^2/(4/gamma - d + 1) in exact arithmetic. Requires m >= 2.
C0Identity c0_identity_check(int n, int m);

struct GraphResolution {
  int radial = 121;     // nodes along r, including both ends
  int angular = 96;     // nodes around the circle
  int stencil = 3;      // neighbor offsets up to this many cells
  int sources_stride = 1;
};

/// Intrinsic diameter of dr^2 + f(r)^2 g_{S^k} on [lo, hi], estimated by
/// shortest paths in a graph on the (r, angle) grid of a totally geodesic
/// meridian surface dr^2 + f(r)^2 dphi^2. f may vanish only at the ends.
double rotational_diameter(const std::function<double(double)>& f, Interval interval, int n_fiber,
                           const GraphResolution& resolution = {});

}  // namespace curvlab
