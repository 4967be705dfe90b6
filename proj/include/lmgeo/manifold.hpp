#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "lmgeo/kernels.hpp"

namespace lmgeo {

/// N labeled points in R^D, stored as the rows of an N x D matrix.
class LandmarkConfig {
 public:
  explicit LandmarkConfig(Eigen::MatrixXd points);

  [[nodiscard]] int count() const noexcept { return static_cast<int>(points_.rows()); }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(points_.cols()); }
  [[nodiscard]] const Eigen::MatrixXd& points() const noexcept { return points_; }
  [[nodiscard]] Eigen::VectorXd point(int a) const { return points_.row(a).transpose(); }
  [[nodiscard]] Eigen::VectorXd offset(int a, int b) const {
    return (points_.row(a) - points_.row(b)).transpose();
  }

  /// Smallest pairwise distance; +inf for a single landmark.
  [[nodiscard]] double min_separation() const;
  /// Throws DegenerateConfiguration if two landmarks are closer than eps.
  void require_separated(double eps) const;

 private:
  Eigen::MatrixXd points_;
};

/// An N x D array of per-landmark rows, tagged to keep covectors and tangents apart.
template <class Tag>
class LandmarkArray {
 public:
  explicit LandmarkArray(Eigen::MatrixXd rows) : rows_(std::move(rows)) {}
  static LandmarkArray zero(int count, int dim) { return LandmarkArray(Eigen::MatrixXd::Zero(count, dim)); }

  [[nodiscard]] int count() const noexcept { return static_cast<int>(rows_.rows()); }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(rows_.cols()); }
  [[nodiscard]] const Eigen::MatrixXd& rows() const noexcept { return rows_; }
  [[nodiscard]] Eigen::MatrixXd& rows() noexcept { return rows_; }
  [[nodiscard]] Eigen::VectorXd row(int a) const { return rows_.row(a).transpose(); }

 private:
  Eigen::MatrixXd rows_;
};

struct CovectorTag {};
struct TangentTag {};
using Covector = LandmarkArray<CovectorTag>;
using Tangent = LandmarkArray<TangentTag>;

/// Smoothing parameter lambda in (0, inf]; inf is exact matching.
class SmoothingParam {
 public:
  static SmoothingParam exact() noexcept { return SmoothingParam(std::numeric_limits<double>::infinity()); }
  static SmoothingParam finite(double lambda);

  [[nodiscard]] bool is_exact() const noexcept { return lambda_ == std::numeric_limits<double>::infinity(); }
  [[nodiscard]] double value() const noexcept { return lambda_; }
  /// 1 / lambda, zero for exact matching.
  [[nodiscard]] double inverse() const noexcept { return is_exact() ? 0.0 : 1.0 / lambda_; }

 private:
  explicit SmoothingParam(double lambda) : lambda_(lambda) {}
  double lambda_;
};

inline constexpr double kConditionLimit = 1e12;

/// Default collision guard: 1e-8 * kernel scale.
[[nodiscard]] inline double default_separation(const KernelSpec& kernel) { return 1e-8 * kernel.scale(); }

/// K(q) + I / lambda without any conditioning check.
[[nodiscard]] Eigen::MatrixXd kernel_matrix(const LandmarkConfig& config, const KernelSpec& kernel,
                                            SmoothingParam lambda = SmoothingParam::exact());

/// K(q) + I / lambda; throws DegenerateConfiguration when it cannot be trusted.
[[nodiscard]] Eigen::MatrixXd gram(const LandmarkConfig& config, const KernelSpec& kernel,
                                   SmoothingParam lambda = SmoothingParam::exact());

/// Cholesky factor of the Gram matrix with the separation and condition checks applied.
class GramSolver {
 public:
  GramSolver(const LandmarkConfig& config, const KernelSpec& kernel,
             SmoothingParam lambda = SmoothingParam::exact(), double min_separation = -1.0);

  [[nodiscard]] const Eigen::MatrixXd& matrix() const noexcept { return matrix_; }
  [[nodiscard]] Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const { return llt_.solve(rhs); }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
};

[[nodiscard]] double cometric_pair(const LandmarkConfig& config, const KernelSpec& kernel,
                                   const Covector& alpha, const Covector& beta);
[[nodiscard]] Tangent sharp(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha);
[[nodiscard]] Covector flat(const LandmarkConfig& config, const KernelSpec& kernel, SmoothingParam lambda,
                            const Tangent& v);

/// d/dq^{ck} of K^{ab}: grad_k K(q^a - q^b) (delta^a_c - delta^b_c).
[[nodiscard]] double cometric_d1(const LandmarkConfig& config, const KernelSpec& kernel, int a, int b, int c,
                                 int k);
/// d^2/dq^{ck} dq^{dl} of K^{ab}.
[[nodiscard]] double cometric_d2(const LandmarkConfig& config, const KernelSpec& kernel, int a, int b, int c,
                                 int d, int k, int l);

struct PathSample {
  double time;
  LandmarkConfig config;
};

/// Trapezoid approximation of int qdot^T g(q) qdot dt.
[[nodiscard]] double path_energy(const std::vector<PathSample>& path, const KernelSpec& kernel,
                                 SmoothingParam lambda = SmoothingParam::exact());

struct FieldSample {
  Eigen::VectorXd value;
  /// jacobian(i, j) = d value_j / d x_i
  Eigen::MatrixXd jacobian;
};

/// The lifted velocity field sum_b K(x - q^b) alpha_b and its spatial Jacobian.
[[nodiscard]] FieldSample horizontal_field(const LandmarkConfig& config, const KernelSpec& kernel,
                                           const Covector& alpha, const Eigen::VectorXd& x);

void require_same_shape(const LandmarkConfig& config, const Eigen::MatrixXd& rows, const char* what);

}  // namespace lmgeo
