#pragma once

#include <Eigen/Dense>
#include <string>

namespace lmgeo {

enum class KernelFamily {
  gaussian,
  matern,
  cauchy,
  /// Flat on [0, scale], then exp(-(rho - scale)^3). Test kernel only: not
  /// positive definite in general.
  plateau,
};

/// Half-integer Matern smoothness nu = value / 2.
enum class MaternOrder { half = 1, three_halves = 3, five_halves = 5, seven_halves = 7 };

struct GammaDerivs {
  double value;
  double first;
  double second;
};

/// Rotationally invariant scalar kernel K(x) = gamma(|x|).
class KernelSpec {
 public:
  static KernelSpec gaussian(double sigma);
  static KernelSpec matern(MaternOrder order, double scale);
  static KernelSpec cauchy(double scale);
  static KernelSpec plateau(double flat_radius);

  [[nodiscard]] KernelFamily family() const noexcept { return family_; }
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] MaternOrder order() const noexcept { return order_; }

  /// gamma is C^2 on R^D with gamma'(0) = 0. False only for Matern nu = 1/2.
  [[nodiscard]] bool twice_differentiable() const noexcept;
  [[nodiscard]] bool positive_definite() const noexcept { return family_ != KernelFamily::plateau; }

  /// Throws InvalidInput unless twice_differentiable().
  void require_smooth() const;

  [[nodiscard]] std::string describe() const;

 private:
  KernelSpec(KernelFamily family, double scale, MaternOrder order);

  KernelFamily family_;
  double scale_;
  MaternOrder order_;
};

[[nodiscard]] GammaDerivs gamma_derivs(const KernelSpec& kernel, double rho);

/// gamma(0) - gamma(rho), evaluated without cancellation for small rho.
[[nodiscard]] double gamma_deficit(const KernelSpec& kernel, double rho);

[[nodiscard]] inline double gamma_at_zero(const KernelSpec& kernel) {
  return gamma_derivs(kernel, 0.0).value;
}

[[nodiscard]] double kernel_value(const KernelSpec& kernel, const Eigen::VectorXd& x);
[[nodiscard]] Eigen::VectorXd grad_K(const KernelSpec& kernel, const Eigen::VectorXd& x);
[[nodiscard]] Eigen::MatrixXd hess_K(const KernelSpec& kernel, const Eigen::VectorXd& x);

/// Parses "1/2", "3/2", "5/2", "7/2".
[[nodiscard]] MaternOrder parse_matern_order(const std::string& text);
[[nodiscard]] std::string matern_order_text(MaternOrder order);

}  // namespace lmgeo
