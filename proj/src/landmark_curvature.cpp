#include "lmgeo/landmark_curvature.hpp"

#include <algorithm>
#include <cmath>

#include "lmgeo/errors.hpp"

namespace lmgeo {
namespace {

void check_section(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                   const Covector& beta) {
  kernel.require_smooth();
  require_same_shape(config, alpha.rows(), "alpha");
  require_same_shape(config, beta.rows(), "beta");
}

struct PairGeometry {
  double rho;
  Eigen::VectorXd direction;
  GammaDerivs gamma;
};

PairGeometry pair_geometry(const LandmarkConfig& config, const KernelSpec& kernel, int a, int b) {
  const Eigen::VectorXd offset = config.offset(a, b);
  const double rho = offset.norm();
  return {rho, offset / rho, gamma_derivs(kernel, rho)};
}

StrainField strain_from_sharp(const LandmarkConfig& config, const Eigen::MatrixXd& lifted) {
  StrainField out(config.count(), config.dim());
  for (int a = 0; a < config.count(); ++a) {
    for (int b = 0; b < config.count(); ++b) {
      if (a != b) out.set(a, b, (lifted.row(a) - lifted.row(b)).transpose());
    }
  }
  return out;
}

Eigen::MatrixXd compression_from_strain(const LandmarkConfig& config, const KernelSpec& kernel,
                                        const StrainField& s) {
  const int n = config.count();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      // S^{ba} = -S^{ab} and grad K^{ba} = -grad K^{ab}: the product is symmetric.
      const double value = s(a, b).dot(grad_K(kernel, config.offset(a, b)));
      out(a, b) = value;
      out(b, a) = value;
    }
  }
  return out;
}

Eigen::MatrixXd force_rows(const LandmarkConfig& config, const KernelSpec& kernel, const Eigen::MatrixXd& alpha,
                           const Eigen::MatrixXd& beta) {
  const int n = config.count();
  const Eigen::MatrixXd cross = alpha * beta.transpose();  // (a, b) = <alpha_a, beta_b>
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, config.dim());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const double weight = 0.5 * (cross(a, b) + cross(b, a));
      if (weight != 0.0) out.row(a) += weight * grad_K(kernel, config.offset(a, b)).transpose();
    }
  }
  return out;
}

double r1_rotation_invariant(const LandmarkConfig& config, const KernelSpec& kernel, const Eigen::MatrixXd& alpha,
                             const Eigen::MatrixXd& beta, const StrainField& s_alpha, const StrainField& s_beta) {
  double total = 0.0;
  for (int a = 0; a < config.count(); ++a) {
    for (int b = 0; b < config.count(); ++b) {
      if (a == b) continue;
      const PairGeometry geo = pair_geometry(config, kernel, a, b);
      const Eigen::VectorXd sa = s_alpha(a, b);
      const Eigen::VectorXd sb = s_beta(a, b);
      const double sa_par = sa.dot(geo.direction);
      const double sb_par = sb.dot(geo.direction);
      const Eigen::VectorXd sa_perp = sa - sa_par * geo.direction;
      const Eigen::VectorXd sb_perp = sb - sb_par * geo.direction;

      const Eigen::VectorXd left = sa_par * beta.row(a).transpose() - sb_par * alpha.row(a).transpose();
      const Eigen::VectorXd right = sa_par * beta.row(b).transpose() - sb_par * alpha.row(b).transpose();
      const double parallel = left.dot(right);

      // <v1 w1' - v2 w2', v1 w3' - v2 w4'> with v1 = sa_perp, v2 = sb_perp.
      const double aa = sa_perp.squaredNorm();
      const double ab = sa_perp.dot(sb_perp);
      const double bb = sb_perp.squaredNorm();
      const double perpendicular = aa * beta.row(a).dot(beta.row(b)) - ab * beta.row(a).dot(alpha.row(b)) -
                                   ab * alpha.row(a).dot(beta.row(b)) + bb * alpha.row(a).dot(alpha.row(b));

      total += 0.5 * geo.gamma.second * parallel + 0.5 * geo.gamma.first / geo.rho * perpendicular;
    }
  }
  return total;
}

}  // namespace

StrainField strain(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha) {
  require_same_shape(config, alpha.rows(), "covector");
  return strain_from_sharp(config, kernel_matrix(config, kernel) * alpha.rows());
}

Eigen::MatrixXd compression(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha) {
  return compression_from_strain(config, kernel, strain(config, kernel, alpha));
}

Covector mixed_force(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                     const Covector& beta) {
  require_same_shape(config, alpha.rows(), "alpha");
  require_same_shape(config, beta.rows(), "beta");
  return Covector(force_rows(config, kernel, alpha.rows(), beta.rows()));
}

Covector landmark_derivative(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                             const Covector& beta) {
  require_same_shape(config, beta.rows(), "beta");
  return Covector(compression(config, kernel, alpha) * beta.rows());
}

GeometricAux geometric_aux(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                           const Covector& beta) {
  StrainField s = strain(config, kernel, alpha);
  Eigen::MatrixXd c = compression_from_strain(config, kernel, s);
  Covector d(c * beta.rows());
  return {mixed_force(config, kernel, alpha, beta), std::move(s), std::move(c), std::move(d)};
}

double landmark_denominator(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                            const Covector& beta) {
  require_same_shape(config, alpha.rows(), "alpha");
  require_same_shape(config, beta.rows(), "beta");
  const Eigen::MatrixXd k = kernel_matrix(config, kernel);
  const double aa = (alpha.rows().transpose() * k * alpha.rows()).trace();
  const double bb = (beta.rows().transpose() * k * beta.rows()).trace();
  const double ab = (alpha.rows().transpose() * k * beta.rows()).trace();
  return std::max(0.0, aa * bb - ab * ab);
}

CurvatureReport curvature_terms(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                                const Covector& beta) {
  check_section(config, kernel, alpha, beta);
  const GramSolver solver(config, kernel);
  const Eigen::MatrixXd& k = solver.matrix();
  const Eigen::MatrixXd& a = alpha.rows();
  const Eigen::MatrixXd& b = beta.rows();

  const StrainField s_alpha = strain_from_sharp(config, k * a);
  const StrainField s_beta = strain_from_sharp(config, k * b);
  const Eigen::MatrixXd c_alpha = compression_from_strain(config, kernel, s_alpha);
  const Eigen::MatrixXd c_beta = compression_from_strain(config, kernel, s_beta);

  const Eigen::MatrixXd f_ab = force_rows(config, kernel, a, b);
  const Eigen::MatrixXd f_aa = force_rows(config, kernel, a, a);
  const Eigen::MatrixXd f_bb = force_rows(config, kernel, b, b);

  const Eigen::MatrixXd d_aa = c_alpha * a;
  const Eigen::MatrixXd d_bb = c_beta * b;
  const Eigen::MatrixXd d_ab = c_alpha * b;
  const Eigen::MatrixXd d_ba = c_beta * a;

  CurvatureReport report;
  report.r1 = r1_rotation_invariant(config, kernel, a, b, s_alpha, s_beta);
  report.r2 = (d_aa.cwiseProduct(f_bb)).sum() + (d_bb.cwiseProduct(f_aa)).sum() -
              ((d_ab + d_ba).cwiseProduct(f_ab)).sum();
  report.r3 = (f_ab.transpose() * k * f_ab).trace() - (f_aa.transpose() * k * f_bb).trace();
  const Eigen::MatrixXd bracket = d_ba - d_ab;
  report.r4 = -0.75 * (bracket.transpose() * solver.solve(bracket)).trace();
  report.numerator = report.r1 + report.r2 + report.r3 + report.r4;

  const double aa = (a.transpose() * k * a).trace();
  const double bb = (b.transpose() * k * b).trace();
  const double ab = (a.transpose() * k * b).trace();
  report.denominator = std::max(0.0, aa * bb - ab * ab);
  report.sectional = sectional_ratio(report.numerator, report.denominator, aa * bb);
  return report;
}

double r1_hessian_route(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& alpha,
                        const Covector& beta) {
  check_section(config, kernel, alpha, beta);
  const StrainField s_alpha = strain(config, kernel, alpha);
  const StrainField s_beta = strain(config, kernel, beta);
  const Eigen::MatrixXd& a = alpha.rows();
  const Eigen::MatrixXd& b = beta.rows();
  double total = 0.0;
  for (int i = 0; i < config.count(); ++i) {
    for (int j = 0; j < config.count(); ++j) {
      if (i == j) continue;
      const Eigen::MatrixXd hess = hess_K(kernel, config.offset(i, j));
      const Eigen::VectorXd sa = s_alpha(i, j);
      const Eigen::VectorXd sb = s_beta(i, j);
      total += a.row(i).dot(a.row(j)) * sb.dot(hess * sb) - a.row(i).dot(b.row(j)) * sb.dot(hess * sa) -
               b.row(i).dot(a.row(j)) * sa.dot(hess * sb) + b.row(i).dot(b.row(j)) * sa.dot(hess * sa);
    }
  }
  return 0.5 * total;
}

CurvatureReport one_momentum_curvature(const LandmarkConfig& config, const KernelSpec& kernel,
                                       const Eigen::VectorXd& alpha1, const Eigen::VectorXd& beta1) {
  kernel.require_smooth();
  const int n = config.count();
  if (n < 2) throw InvalidInput("one-momentum curvature needs at least two landmarks");
  if (alpha1.size() != config.dim() || beta1.size() != config.dim()) {
    throw InvalidInput("momentum dimension mismatch");
  }
  const double g0 = gamma_at_zero(kernel);
  CurvatureReport report;

  if (n == 2) {
    const GramSolver guard(config, kernel);
    const PairGeometry geo = pair_geometry(config, kernel, 0, 1);
    const double a_par = alpha1.dot(geo.direction);
    const double b_par = beta1.dot(geo.direction);
    const Eigen::VectorXd a_perp = alpha1 - a_par * geo.direction;
    const Eigen::VectorXd b_perp = beta1 - b_par * geo.direction;
    const double mixed = (b_par * a_perp - a_par * b_perp).squaredNorm();
    const double wedge = 2.0 * (a_perp.squaredNorm() * b_perp.squaredNorm() - std::pow(a_perp.dot(b_perp), 2));
    const double g = geo.gamma.value;
    report.r4 = -0.75 * g0 * ((g0 - g) / (g0 + g)) * geo.gamma.first * geo.gamma.first * mixed;
    report.denominator = g0 * g0 * (mixed + 0.5 * wedge);
  } else {
    const GramSolver solver(config, kernel);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, config.dim());
    for (int a = 1; a < n; ++a) {
      const Eigen::VectorXd grad = grad_K(kernel, config.offset(a, 0));
      const double factor = gamma_derivs(kernel, config.offset(a, 0).norm()).value - g0;
      h.row(a) = (factor * (alpha1.dot(grad) * beta1 - beta1.dot(grad) * alpha1)).transpose();
    }
    report.r4 = -0.75 * (h.transpose() * solver.solve(h)).trace();
    const double ab = alpha1.dot(beta1);
    report.denominator = std::max(0.0, g0 * g0 * (alpha1.squaredNorm() * beta1.squaredNorm() - ab * ab));
  }
  report.numerator = report.r4;
  report.sectional =
      sectional_ratio(report.numerator, report.denominator, g0 * g0 * alpha1.squaredNorm() * beta1.squaredNorm());
  return report;
}

}  // namespace lmgeo
