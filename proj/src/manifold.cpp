#include "lmgeo/manifold.hpp"

#include <cmath>
#include <string>

#include "lmgeo/errors.hpp"

namespace lmgeo {
namespace {

int kron_diff(int a, int b, int c) { return (a == c ? 1 : 0) - (b == c ? 1 : 0); }

void check_indices(const LandmarkConfig& config, std::initializer_list<int> landmarks,
                   std::initializer_list<int> coords) {
  for (int i : landmarks) {
    if (i < 0 || i >= config.count()) throw InvalidInput("landmark index out of range");
  }
  for (int k : coords) {
    if (k < 0 || k >= config.dim()) throw InvalidInput("coordinate index out of range");
  }
}

}  // namespace

LandmarkConfig::LandmarkConfig(Eigen::MatrixXd points) : points_(std::move(points)) {
  if (points_.rows() < 1 || points_.cols() < 1) throw InvalidInput("configuration needs N >= 1 and D >= 1");
  if (!points_.allFinite()) throw InvalidInput("configuration contains non-finite coordinates");
}

double LandmarkConfig::min_separation() const {
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < count(); ++a) {
    for (int b = a + 1; b < count(); ++b) best = std::min(best, (points_.row(a) - points_.row(b)).norm());
  }
  return best;
}

void LandmarkConfig::require_separated(double eps) const {
  const double sep = min_separation();
  if (sep < eps) {
    throw DegenerateConfiguration("landmarks closer than separation guard (" + std::to_string(sep) + " < " +
                                  std::to_string(eps) + ")");
  }
}

SmoothingParam SmoothingParam::finite(double lambda) {
  if (!(lambda > 0.0)) throw InvalidInput("smoothing parameter must be positive");
  return SmoothingParam(lambda);
}

void require_same_shape(const LandmarkConfig& config, const Eigen::MatrixXd& rows, const char* what) {
  if (rows.rows() != config.count() || rows.cols() != config.dim()) {
    throw InvalidInput(std::string(what) + " shape does not match the configuration");
  }
}

Eigen::MatrixXd kernel_matrix(const LandmarkConfig& config, const KernelSpec& kernel, SmoothingParam lambda) {
  const int n = config.count();
  Eigen::MatrixXd k(n, n);
  const double diag = gamma_at_zero(kernel) + lambda.inverse();
  for (int a = 0; a < n; ++a) {
    k(a, a) = diag;
    for (int b = a + 1; b < n; ++b) {
      const double g = gamma_derivs(kernel, config.offset(a, b).norm()).value;
      k(a, b) = g;
      k(b, a) = g;
    }
  }
  return k;
}

GramSolver::GramSolver(const LandmarkConfig& config, const KernelSpec& kernel, SmoothingParam lambda,
                       double min_separation)
    : matrix_(kernel_matrix(config, kernel, lambda)) {
  if (lambda.is_exact()) {
    config.require_separated(min_separation < 0.0 ? default_separation(kernel) : min_separation);
  }
  llt_.compute(matrix_);
  if (llt_.info() != Eigen::Success) throw DegenerateConfiguration("Gram matrix is not positive definite");
  const double rcond = llt_.rcond();
  if (!(rcond * kConditionLimit >= 1.0)) {
    throw DegenerateConfiguration("Gram matrix condition estimate exceeds 1e12");
  }
}

Eigen::MatrixXd gram(const LandmarkConfig& config, const KernelSpec& kernel, SmoothingParam lambda) {
  return GramSolver(config, kernel, lambda).matrix();
}

double cometric_pair(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                     const Covector& beta) {
  require_same_shape(config, alpha.rows(), "alpha");
  require_same_shape(config, beta.rows(), "beta");
  const Eigen::MatrixXd k = kernel_matrix(config, kernel);
  return (alpha.rows().transpose() * k * beta.rows()).trace();
}

Tangent sharp(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha) {
  require_same_shape(config, alpha.rows(), "covector");
  return Tangent(kernel_matrix(config, kernel) * alpha.rows());
}

Covector flat(const LandmarkConfig& config, const KernelSpec& kernel, SmoothingParam lambda, const Tangent& v) {
  require_same_shape(config, v.rows(), "tangent");
  return Covector(GramSolver(config, kernel, lambda).solve(v.rows()));
}

double cometric_d1(const LandmarkConfig& config, const KernelSpec& kernel, int a, int b, int c, int k) {
  check_indices(config, {a, b, c}, {k});
  const int factor = kron_diff(a, b, c);
  if (factor == 0) return 0.0;
  return factor * grad_K(kernel, config.offset(a, b))(k);
}

double cometric_d2(const LandmarkConfig& config, const KernelSpec& kernel, int a, int b, int c, int d, int k,
                   int l) {
  check_indices(config, {a, b, c, d}, {k, l});
  const int factor = kron_diff(a, b, c) * kron_diff(a, b, d);
  if (factor == 0) return 0.0;
  return factor * hess_K(kernel, config.offset(a, b))(k, l);
}

double path_energy(const std::vector<PathSample>& path, const KernelSpec& kernel, SmoothingParam lambda) {
  const std::size_t m = path.size();
  if (m < 2) throw InvalidInput("path energy needs at least two samples");
  for (std::size_t i = 1; i < m; ++i) {
    if (!(path[i].time > path[i - 1].time)) throw InvalidInput("path times must be strictly increasing");
    if (path[i].config.count() != path[0].config.count() || path[i].config.dim() != path[0].config.dim()) {
      throw InvalidInput("path samples have inconsistent shapes");
    }
  }
  std::vector<double> integrand(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t lo = (i == 0) ? 0 : i - 1;
    const std::size_t hi = (i + 1 == m) ? i : i + 1;
    const Eigen::MatrixXd velocity =
        (path[hi].config.points() - path[lo].config.points()) / (path[hi].time - path[lo].time);
    const GramSolver solver(path[i].config, kernel, lambda);
    integrand[i] = (velocity.transpose() * solver.solve(velocity)).trace();
  }
  double energy = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    energy += 0.5 * (path[i].time - path[i - 1].time) * (integrand[i] + integrand[i - 1]);
  }
  return energy;
}

FieldSample horizontal_field(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                             const Eigen::VectorXd& x) {
  require_same_shape(config, alpha.rows(), "covector");
  if (x.size() != config.dim()) throw InvalidInput("field point dimension mismatch");
  FieldSample out{Eigen::VectorXd::Zero(config.dim()), Eigen::MatrixXd::Zero(config.dim(), config.dim())};
  for (int b = 0; b < config.count(); ++b) {
    const Eigen::VectorXd offset = x - config.point(b);
    const Eigen::VectorXd alpha_b = alpha.row(b);
    out.value += kernel_value(kernel, offset) * alpha_b;
    out.jacobian += grad_K(kernel, offset) * alpha_b.transpose();
  }
  return out;
}

}  // namespace lmgeo
