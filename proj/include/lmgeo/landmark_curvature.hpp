#pragma once

#include <Eigen/Dense>

#include "lmgeo/curvature_engine.hpp"
#include "lmgeo/manifold.hpp"

namespace lmgeo {

/// Pairwise vectors S^{ab} for all ordered landmark pairs.
class StrainField {
 public:
  StrainField(int count, int dim) : count_(count), data_(Eigen::MatrixXd::Zero(count * count, dim)) {}

  [[nodiscard]] int count() const noexcept { return count_; }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(data_.cols()); }
  [[nodiscard]] Eigen::VectorXd operator()(int a, int b) const { return data_.row(a * count_ + b).transpose(); }
  void set(int a, int b, const Eigen::VectorXd& value) { data_.row(a * count_ + b) = value.transpose(); }

 private:
  int count_;
  Eigen::MatrixXd data_;
};

/// S^{ab}(alpha) = (alpha#)^a - (alpha#)^b.
[[nodiscard]] StrainField strain(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha);

/// C^{ab}(alpha) = <S^{ab}(alpha), grad K(q^a - q^b)>.
[[nodiscard]] Eigen::MatrixXd compression(const LandmarkConfig& config, const KernelSpec& kernel,
                                          const Covector& alpha);

/// F_a(alpha, beta) = 1/2 sum_b grad K^{ab} (<alpha_a, beta_b> + <beta_a, alpha_b>).
[[nodiscard]] Covector mixed_force(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                                   const Covector& beta);

/// D^a(alpha, beta) = sum_b C^{ab}(alpha) beta_b.
[[nodiscard]] Covector landmark_derivative(const LandmarkConfig& config, const KernelSpec& kernel,
                                           const Covector& alpha, const Covector& beta);

struct GeometricAux {
  Covector force;
  StrainField strain;
  Eigen::MatrixXd compression;
  Covector lderiv;
};

/// Force F(alpha, beta), strain and compression of alpha, and D(alpha, beta) in one bundle.
[[nodiscard]] GeometricAux geometric_aux(const LandmarkConfig& config, const KernelSpec& kernel,
                                         const Covector& alpha, const Covector& beta);

/// Four-term numerator, denominator and sectional value on L^N(R^D).
[[nodiscard]] CurvatureReport curvature_terms(const LandmarkConfig& config, const KernelSpec& kernel,
                                              const Covector& alpha, const Covector& beta);

/// R1 by direct Hessian contraction; reference route for the rotationally invariant form.
[[nodiscard]] double r1_hessian_route(const LandmarkConfig& config, const KernelSpec& kernel,
                                      const Covector& alpha, const Covector& beta);

/// |alpha|^2 |beta|^2 - <alpha, beta>^2 in the cometric.
[[nodiscard]] double landmark_denominator(const LandmarkConfig& config, const KernelSpec& kernel,
                                          const Covector& alpha, const Covector& beta);

/// Curvature when both covectors live on landmark 1 only. R1 = R2 = R3 = 0; N = 2 uses the
/// closed forms. Parallel alpha1, beta1 give a zero numerator and no sectional value.
[[nodiscard]] CurvatureReport one_momentum_curvature(const LandmarkConfig& config, const KernelSpec& kernel,
                                                     const Eigen::VectorXd& alpha1, const Eigen::VectorXd& beta1);

}  // namespace lmgeo
