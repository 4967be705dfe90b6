#include "lmgeo/kernels.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "lmgeo/errors.hpp"

namespace lmgeo {
namespace {

// Coefficients of P in gamma = P(x) e^{-x}, x = rho / scale, normalized to P(0) = 1.
struct MaternPoly {
  std::array<double, 4> coef{};
  int degree = 0;
};

MaternPoly matern_poly(MaternOrder order) {
  switch (order) {
    case MaternOrder::half:
      return {{1.0, 0.0, 0.0, 0.0}, 0};
    case MaternOrder::three_halves:
      return {{1.0, 1.0, 0.0, 0.0}, 1};
    case MaternOrder::five_halves:
      return {{1.0, 1.0, 1.0 / 3.0, 0.0}, 2};
    case MaternOrder::seven_halves:
      return {{1.0, 1.0, 2.0 / 5.0, 1.0 / 15.0}, 3};
  }
  throw InvalidInput("invalid order for matern family");
}

double poly_eval(const MaternPoly& p, double x, int derivative) {
  double sum = 0.0;
  for (int j = p.degree; j >= derivative; --j) {
    double c = p.coef[static_cast<std::size_t>(j)];
    for (int m = 0; m < derivative; ++m) c *= static_cast<double>(j - m);
    sum = sum * x + c;
  }
  return sum;
}

// 1 - P(x) e^{-x} via its Taylor series; accurate where direct subtraction cancels.
double matern_deficit_series(const MaternPoly& p, double x) {
  double result = 0.0;
  double x_power = 1.0;
  for (int k = 1; k <= 30; ++k) {
    x_power *= x;
    double ck = 0.0;
    for (int j = 0; j <= std::min(k, p.degree); ++j) {
      const int m = k - j;
      double term = p.coef[static_cast<std::size_t>(j)] / std::tgamma(m + 1.0);
      ck += (m % 2 == 0) ? term : -term;
    }
    result -= ck * x_power;
  }
  return result;
}

void check_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("kernel scale must be positive and finite");
}

}  // namespace

KernelSpec::KernelSpec(KernelFamily family, double scale, MaternOrder order)
    : family_(family), scale_(scale), order_(order) {
  check_scale(scale);
}

KernelSpec KernelSpec::gaussian(double sigma) {
  return {KernelFamily::gaussian, sigma, MaternOrder::three_halves};
}

KernelSpec KernelSpec::matern(MaternOrder order, double scale) {
  switch (order) {
    case MaternOrder::half:
    case MaternOrder::three_halves:
    case MaternOrder::five_halves:
    case MaternOrder::seven_halves:
      return {KernelFamily::matern, scale, order};
  }
  throw InvalidInput("invalid order for matern family");
}

KernelSpec KernelSpec::cauchy(double scale) {
  return {KernelFamily::cauchy, scale, MaternOrder::three_halves};
}

KernelSpec KernelSpec::plateau(double flat_radius) {
  return {KernelFamily::plateau, flat_radius, MaternOrder::three_halves};
}

bool KernelSpec::twice_differentiable() const noexcept {
  return !(family_ == KernelFamily::matern && order_ == MaternOrder::half);
}

void KernelSpec::require_smooth() const {
  if (!twice_differentiable()) {
    throw InvalidInput("kernel " + describe() + " is not twice differentiable at the origin");
  }
}

std::string KernelSpec::describe() const {
  std::ostringstream out;
  switch (family_) {
    case KernelFamily::gaussian: out << "gaussian"; break;
    case KernelFamily::matern: out << "matern(" << matern_order_text(order_) << ")"; break;
    case KernelFamily::cauchy: out << "cauchy"; break;
    case KernelFamily::plateau: out << "plateau"; break;
  }
  out << "[scale=" << scale_ << "]";
  return out.str();
}

GammaDerivs gamma_derivs(const KernelSpec& kernel, double rho) {
  if (!(rho >= 0.0)) throw InvalidInput("kernel radius must be non-negative");
  const double a = kernel.scale();
  switch (kernel.family()) {
    case KernelFamily::gaussian: {
      const double s2 = a * a;
      const double g = std::exp(-rho * rho / (2.0 * s2));
      return {g, -rho / s2 * g, (rho * rho / s2 - 1.0) / s2 * g};
    }
    case KernelFamily::matern: {
      const MaternPoly p = matern_poly(kernel.order());
      const double x = rho / a;
      const double e = std::exp(-x);
      const double p0 = poly_eval(p, x, 0);
      const double p1 = poly_eval(p, x, 1);
      const double p2 = poly_eval(p, x, 2);
      return {p0 * e, (p1 - p0) * e / a, (p2 - 2.0 * p1 + p0) * e / (a * a)};
    }
    case KernelFamily::cauchy: {
      const double r2 = rho * rho / (a * a);
      const double inv = 1.0 / (1.0 + r2);
      return {inv, -2.0 * rho / (a * a) * inv * inv, (6.0 * r2 - 2.0) / (a * a) * inv * inv * inv};
    }
    case KernelFamily::plateau: {
      const double s = std::max(0.0, (rho - a) / a);
      const double e = std::exp(-s * s * s);
      return {e, -3.0 * s * s / a * e, (9.0 * s * s * s * s - 6.0 * s) / (a * a) * e};
    }
  }
  throw InvalidInput("unknown kernel family");
}

double gamma_deficit(const KernelSpec& kernel, double rho) {
  if (!(rho >= 0.0)) throw InvalidInput("kernel radius must be non-negative");
  const double a = kernel.scale();
  switch (kernel.family()) {
    case KernelFamily::gaussian:
      return -std::expm1(-rho * rho / (2.0 * a * a));
    case KernelFamily::matern: {
      const double x = rho / a;
      const MaternPoly p = matern_poly(kernel.order());
      if (x < 0.5) return matern_deficit_series(p, x);
      return 1.0 - poly_eval(p, x, 0) * std::exp(-x);
    }
    case KernelFamily::cauchy: {
      const double r2 = rho * rho / (a * a);
      return r2 / (1.0 + r2);
    }
    case KernelFamily::plateau: {
      const double s = std::max(0.0, (rho - a) / a);
      return -std::expm1(-s * s * s);
    }
  }
  throw InvalidInput("unknown kernel family");
}

double kernel_value(const KernelSpec& kernel, const Eigen::VectorXd& x) {
  return gamma_derivs(kernel, x.norm()).value;
}

Eigen::VectorXd grad_K(const KernelSpec& kernel, const Eigen::VectorXd& x) {
  const double r = x.norm();
  if (r == 0.0) return Eigen::VectorXd::Zero(x.size());
  return gamma_derivs(kernel, r).first / r * x;
}

Eigen::MatrixXd hess_K(const KernelSpec& kernel, const Eigen::VectorXd& x) {
  const auto dim = x.size();
  const double r = x.norm();
  if (r == 0.0) {
    return gamma_derivs(kernel, 0.0).second * Eigen::MatrixXd::Identity(dim, dim);
  }
  const GammaDerivs g = gamma_derivs(kernel, r);
  const Eigen::VectorXd u = x / r;
  const Eigen::MatrixXd radial = u * u.transpose();
  return g.second * radial + (g.first / r) * (Eigen::MatrixXd::Identity(dim, dim) - radial);
}

MaternOrder parse_matern_order(const std::string& text) {
  if (text == "1/2") return MaternOrder::half;
  if (text == "3/2") return MaternOrder::three_halves;
  if (text == "5/2") return MaternOrder::five_halves;
  if (text == "7/2") return MaternOrder::seven_halves;
  throw InvalidInput("invalid order for matern family: '" + text + "'");
}

std::string matern_order_text(MaternOrder order) {
  return std::to_string(static_cast<int>(order)) + "/2";
}

}  // namespace lmgeo
