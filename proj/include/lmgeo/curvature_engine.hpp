#pragma once

#include <Eigen/Dense>
#include <optional>

#include "lmgeo/cometric_model.hpp"

namespace lmgeo {

/// Numerator split into four terms, the denominator, and their ratio when defined.
struct CurvatureReport {
  double r1 = 0.0;
  double r2 = 0.0;
  double r3 = 0.0;
  double r4 = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  std::optional<double> sectional;
};

/// Relative denominator floor below which a section counts as degenerate.
inline constexpr double kDegenerateSectionFloor = 1e-14;

/// numerator / denominator if denominator > floor * norm_scale, else empty.
[[nodiscard]] std::optional<double> sectional_ratio(double numerator, double denominator, double norm_scale);

/// Sectional-curvature numerator from the cometric and its partials (Mario's formula),
/// with the denominator and sectional value filled in.
[[nodiscard]] CurvatureReport mario_numerator(const CometricModel& model, const Eigen::VectorXd& x,
                                              const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta);

/// R_{ijkm} X^i Y^j Y^k X^m with X, Y the raised covectors, built from Christoffel symbols.
[[nodiscard]] double classical_numerator(const CometricModel& model, const Eigen::VectorXd& x,
                                         const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta);

/// |alpha|^2 |beta|^2 - <alpha, beta>^2 in the cometric.
[[nodiscard]] double denominator(const CometricModel& model, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta);

/// Lowered curvature tensor R_{ijkm}, classical route.
[[nodiscard]] Tensor4 riemann_tensor(const CometricModel& model, const Eigen::VectorXd& x);

/// Dual curvature tensor R^{ursv} assembled from cometric data only (plus one metric contraction).
[[nodiscard]] Tensor4 dual_curvature_tensor(const CometricModel& model, const Eigen::VectorXd& x);

/// Metric g = cometric^{-1}; throws DegenerateConfiguration when the cometric is singular.
[[nodiscard]] Eigen::MatrixXd invert_cometric(const Eigen::MatrixXd& cometric);

}  // namespace lmgeo
