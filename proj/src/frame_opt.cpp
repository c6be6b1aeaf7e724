#include "curvlab/frame_opt.hpp"

#include "curvlab/error.hpp"
#include "curvlab/seed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace curvlab {

namespace {

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& m) {
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  // Fix the sign ambiguity so that diag(R) >= 0.
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

// Rm(X, Y, X, Y) by full contraction.
double sectional(const RiemannData& R, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const int n = R.dim();
  double sum = 0.0;
  for (int a = 0; a < n; ++a) {
    if (x[a] == 0.0) continue;
    for (int b = 0; b < n; ++b) {
      if (y[b] == 0.0) continue;
      const double xy = x[a] * y[b];
      for (int c = 0; c < n; ++c) {
        if (x[c] == 0.0) continue;
        double inner = 0.0;
        for (int d = 0; d < n; ++d) inner += R(a, b, c, d) * y[d];
        sum += xy * x[c] * inner;
      }
    }
  }
  return sum;
}

void check_frame(const RiemannData& R, const Frame& F) {
  if (R.dim() != F.dim()) {
    std::ostringstream msg;
    msg << "frame dimension " << F.dim() << " does not match curvature dimension " << R.dim();
    throw InputError(msg.str());
  }
}

}  // namespace

Frame::Frame(Eigen::MatrixXd columns) : columns_(std::move(columns)) {
  if (columns_.cols() < 1 || columns_.cols() > columns_.rows())
    throw InputError("frame must have between 1 and dim columns");
  const Eigen::MatrixXd gram = columns_.transpose() * columns_;
  const double err = (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  if (err > kTolerance) {
    std::ostringstream msg;
    msg << "frame columns are not orthonormal (deviation " << err << ")";
    throw InputError(msg.str());
  }
}

Frame Frame::coordinate(int dim, const std::vector<int>& axes) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(axes.size()));
  for (std::size_t j = 0; j < axes.size(); ++j) {
    if (axes[j] < 0 || axes[j] >= dim) throw InputError("coordinate axis out of range");
    c(axes[j], static_cast<Eigen::Index>(j)) = 1.0;
  }
  return Frame(std::move(c));
}

Frame Frame::orthonormalize(const Eigen::MatrixXd& m) { return Frame(thin_q(m), Unchecked{}); }

namespace {

// Gaussian matrix orthonormalized in place by Gram-Schmidt, run twice per
// column. Gram-Schmidt keeps diag(R) > 0, so this is the sign-fixed QR factor.
void sample_frame(Eigen::MatrixXd& g, std::mt19937_64& rng, std::normal_distribution<double>& normal) {
  const Eigen::Index dim = g.rows();
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = normal(rng);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < j; ++k) g.col(j) -= g.col(k).dot(g.col(j)) * g.col(k);
    g.col(j).normalize();
  }
}

}  // namespace

Frame random_frame(int dim, int count, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(dim, count);
  sample_frame(g, rng, normal);
  return Frame(std::move(g));
}

double cm_of_frame(const RiemannData& R, const Frame& F) {
  check_frame(R, F);
  const Eigen::MatrixXd& e = F.columns();
  double value = 0.0;
  for (int p = 0; p < F.count(); ++p) value += e.col(p).dot(R.ricci() * e.col(p));
  for (int p = 0; p < F.count(); ++p)
    for (int q = p + 1; q < F.count(); ++q) value -= sectional(R, e.col(p), e.col(q));
#ifndef NDEBUG
  const double direct = cm_double_sum(R, F);
  if (std::abs(direct - value) > 1e-9 * std::max(1.0, R.scale()))
    throw std::logic_error("cm_of_frame: Ricci decomposition disagrees with the double sum");
#endif
  return value;
}

double cm_double_sum(const RiemannData& R, const Frame& F) {
  check_frame(R, F);
  const int n = F.dim();
  const int m = F.count();
  Eigen::MatrixXd seed(n, m + n);
  seed << F.columns(), Eigen::MatrixXd::Identity(n, n);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(seed);
  const Eigen::MatrixXd basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  double value = 0.0;
  for (int p = 0; p < m; ++p)
    for (int q = p + 1; q < n; ++q) value += sectional(R, basis.col(p), basis.col(q));
  return value;
}

CmForm::CmForm(const RiemannData& R) : dim_(R.dim()), ricci_(R.ricci()) {
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int d = 0; d < dim_; ++d)
          if (const double v = R(a, b, c, d); v != 0.0) entries_.push_back({a, b, c, d, v});
}

double CmForm::value(const Eigen::MatrixXd& frame) const {
  // Stack storage for the projection up to 12 x 12; hot in cm_min sampling.
  using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 12, 12>;
  if (dim_ > 12) {
    const Eigen::MatrixXd P = frame * frame.transpose();
    double quartic = 0.0;
    for (const Entry& e : entries_) quartic += e.value * P(e.a, e.c) * P(e.b, e.d);
    return (ricci_.cwiseProduct(P)).sum() - 0.5 * quartic;
  }
  Small P(dim_, dim_);
  P.noalias() = frame * frame.transpose();
  double quartic = 0.0;
  for (const Entry& e : entries_) quartic += e.value * P(e.a, e.c) * P(e.b, e.d);
  return (ricci_.cwiseProduct(P)).sum() - 0.5 * quartic;
}

Eigen::MatrixXd CmForm::gradient(const Eigen::MatrixXd& frame) const {
  const Eigen::MatrixXd P = frame * frame.transpose();
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const Entry& e : entries_) Q(e.a, e.c) += e.value * P(e.b, e.d);
  return 2.0 * (ricci_ - Q) * frame;
}

std::string to_string(CmMethod method) {
  switch (method) {
    case CmMethod::CoordinateEnumeration:
      return "coordinate-enumeration";
    case CmMethod::RandomSampling:
      return "random-sampling";
    case CmMethod::ProjectedDescent:
      return "projected-descent";
  }
  return "unknown";
}

namespace {

struct Candidate {
  double value;
  Eigen::MatrixXd frame;
  CmMethod method;
  long long order;  // position in the deterministic generation sequence
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value < b.value;
  return a.order < b.order;
}

// Projected gradient descent on the Grassmannian with QR retraction and
// Armijo backtracking.
Candidate descend(const CmForm& form, Candidate start, const DescentOptions& options,
                  long long& evaluations) {
  Eigen::MatrixXd F = start.frame;
  double value = start.value;
  double step = -1.0;
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    const Eigen::MatrixXd G = form.gradient(F);
    const Eigen::MatrixXd grad = G - F * (F.transpose() * G);
    const double gnorm2 = grad.squaredNorm();
    if (gnorm2 == 0.0) break;
    const double gnorm = std::sqrt(gnorm2);
    if (step < 0.0) step = 1.0 / std::max(1.0, gnorm);
    bool accepted = false;
    while (step * gnorm >= options.step_tolerance) {
      const Eigen::MatrixXd trial = thin_q(F - step * grad);
      const double trial_value = form.value(trial);
      ++evaluations;
      if (trial_value <= value - 1e-4 * step * gnorm2) {
        F = trial;
        value = trial_value;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    if (step * gnorm < options.step_tolerance) break;
    step *= 2.0;
  }
  if (value < start.value) return {value, F, CmMethod::ProjectedDescent, start.order};
  return start;
}

void require_cm_args(const RiemannData& R, int m) {
  if (m < 1 || m > R.dim()) {
    std::ostringstream msg;
    msg << "m=" << m << " out of range 1.." << R.dim();
    throw ParameterError(msg.str());
  }
}

}  // namespace

CmResult cm_min(const RiemannData& R, int m, long long budget, std::uint64_t seed,
                const DescentOptions& options) {
  require_cm_args(R, m);
  if (budget < 1) throw ParameterError("cm_min: budget must be at least 1");
  const int n = R.dim();
  const CmForm form(R);
  long long evaluations = 0;
  long long order = 0;

  // Best `starts` candidates, compacted lazily; `threshold` is the value a
  // newcomer must beat once the pool has been compacted at least once.
  std::vector<Candidate> pool;
  double threshold = std::numeric_limits<double>::infinity();
  const auto keep = [&](Candidate c) {
    if (!(c.value < threshold)) return;
    pool.push_back(std::move(c));
    if (static_cast<int>(pool.size()) > 4 * options.starts) {
      std::sort(pool.begin(), pool.end(), better);
      pool.resize(options.starts);
      threshold = pool.back().value;
    }
  };

  // (i) Coordinate m-subsets in lexicographic order.
  Candidate best_coordinate{std::numeric_limits<double>::infinity(), {}, CmMethod::CoordinateEnumeration, 0};
  std::vector<int> axes(m);
  for (int i = 0; i < m; ++i) axes[i] = i;
  while (true) {
    Eigen::MatrixXd frame = Frame::coordinate(n, axes).columns();
    Candidate c{form.value(frame), std::move(frame), CmMethod::CoordinateEnumeration, order++};
    ++evaluations;
    if (c.value < best_coordinate.value) best_coordinate = c;
    keep(c);
    int i = m - 1;
    while (i >= 0 && axes[i] == n - m + i) --i;
    if (i < 0) break;
    ++axes[i];
    for (int j = i + 1; j < m; ++j) axes[j] = axes[j - 1] + 1;
  }

  // (ii) Seeded random frames.
  std::mt19937_64 rng(task_seed(seed, 0));
  double random_best = std::numeric_limits<double>::infinity();
  std::normal_distribution<double> normal;
  Eigen::MatrixXd frame(n, m);
  for (long long s = 0; s < budget; ++s) {
    sample_frame(frame, rng, normal);
    const double v = form.value(frame);
    ++evaluations;
    random_best = std::min(random_best, v);
    if (v < threshold) keep({v, frame, CmMethod::RandomSampling, order});
    ++order;
  }

  // (iii) Descent from the best starts.
  std::sort(pool.begin(), pool.end(), better);
  if (static_cast<int>(pool.size()) > options.starts) pool.resize(options.starts);
  Candidate best = pool.front();
  for (const Candidate& start : pool) {
    Candidate refined = descend(form, start, options, evaluations);
    if (better(refined, best)) best = refined;
  }

  // Prefer the lexicographically first coordinate frame within 1e-9 of the best.
  if (best_coordinate.value <= best.value + 1e-9) best = best_coordinate;

  CmResult result;
  result.value = best.value;
  result.argmin = best.method == CmMethod::CoordinateEnumeration ? Frame(best.frame)
                                                                 : Frame::orthonormalize(best.frame);
  result.evaluations = evaluations;
  result.method = best.method;
  result.coordinate_best = best_coordinate.value;
  result.random_best = random_best;
  return result;
}

double cm_min_oracle(const RiemannData& R, int m, long long samples, std::uint64_t seed) {
  require_cm_args(R, m);
  if (samples < 1) throw ParameterError("cm_min_oracle: samples must be at least 1");
  std::mt19937_64 rng(seed);
  double best = std::numeric_limits<double>::infinity();
  for (long long s = 0; s < samples; ++s) best = std::min(best, cm_of_frame(R, random_frame(R.dim(), m, rng)));
  return best;
}

}  // namespace curvlab
