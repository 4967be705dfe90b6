#include <gtest/gtest.h>

#include <cmath>

#include "lmgeo/curvature_engine.hpp"
#include "lmgeo/errors.hpp"
#include "lmgeo/landmark_curvature.hpp"
#include "test_support.hpp"

using namespace lmgeo;
using lmgeo::testing::Draws;

namespace {

struct Sample {
  LandmarkConfig config;
  Covector alpha;
  Covector beta;
};

Sample random_sample(Draws& draws, int count, int dim) {
  return {LandmarkConfig(draws.separated_points(count, dim, 1.0 + 0.25 * count, 0.3)),
          Covector(draws.matrix(count, dim)), Covector(draws.matrix(count, dim))};
}

KernelSpec alternating_kernel(int trial) {
  switch (trial % 3) {
    case 0:
      return KernelSpec::gaussian(1.0);
    case 1:
      return KernelSpec::matern(MaternOrder::three_halves, 1.0);
    default:
      return KernelSpec::cauchy(0.8);
  }
}

Eigen::MatrixXd rotation(double angle, int dim) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(dim, dim);
  if (dim >= 2) {
    r(0, 0) = std::cos(angle);
    r(0, 1) = -std::sin(angle);
    r(1, 0) = std::sin(angle);
    r(1, 1) = std::cos(angle);
  }
  return r;
}

double term_scale(const CurvatureReport& r) {
  return 1.0 + std::abs(r.r1) + std::abs(r.r2) + std::abs(r.r3) + std::abs(r.r4);
}

}  // namespace

TEST(MixedForce, SingleLandmarkIsZero) {
  const LandmarkConfig config(Eigen::MatrixXd::Constant(1, 2, 0.5));
  const Covector a(Eigen::MatrixXd::Constant(1, 2, 1.0));
  EXPECT_EQ(mixed_force(config, KernelSpec::gaussian(1.0), a, a).rows().norm(), 0.0);
}

TEST(MixedForce, TwoPointClosedForm) {
  Draws draws(401);
  const KernelSpec k = KernelSpec::gaussian(1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Sample s = random_sample(draws, 2, 3);
    const Eigen::VectorXd diff = s.config.offset(0, 1);
    const double rho = diff.norm();
    const Eigen::VectorXd u = diff / rho;
    const double slope = gamma_derivs(k, rho).first;
    const double mixed = s.alpha.row(0).dot(s.beta.row(1)) + s.beta.row(0).dot(s.alpha.row(1));
    const Covector f = mixed_force(s.config, k, s.alpha, s.beta);
    EXPECT_LE((f.row(0) - 0.5 * slope * mixed * u).norm(), 1e-15);
    EXPECT_LE((f.row(0) + f.row(1)).norm(), 1e-15);
  }
}

TEST(MixedForce, HalfGradientOfCometricPairing) {
  Draws draws(402);
  const double h = 1e-6;
  for (int trial = 0; trial < 12; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const int n = draws.between(2, 4);
    const int d = draws.between(1, 3);
    const Sample s = random_sample(draws, n, d);
    const Covector f = mixed_force(s.config, k, s.alpha, s.beta);
    EXPECT_LE((f.rows() - mixed_force(s.config, k, s.beta, s.alpha).rows()).norm(), 1e-15);
    for (int a = 0; a < n; ++a) {
      for (int i = 0; i < d; ++i) {
        Eigen::MatrixXd up = s.config.points();
        Eigen::MatrixXd down = up;
        up(a, i) += h;
        down(a, i) -= h;
        const double fd = (cometric_pair(LandmarkConfig(up), k, s.alpha, s.beta) -
                           cometric_pair(LandmarkConfig(down), k, s.alpha, s.beta)) /
                          (2.0 * h);
        EXPECT_NEAR(f.rows()(a, i), 0.5 * fd, 1e-8);
      }
    }
  }
}

TEST(StrainAndCompression, ZeroCovector) {
  Draws draws(403);
  const Sample s = random_sample(draws, 3, 2);
  const KernelSpec k = KernelSpec::gaussian(1.0);
  const StrainField strain_field = strain(s.config, k, Covector::zero(3, 2));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) EXPECT_EQ(strain_field(a, b).norm(), 0.0);
  }
  EXPECT_EQ(compression(s.config, k, Covector::zero(3, 2)).norm(), 0.0);
}

TEST(StrainAndCompression, TwoPointStrain) {
  Draws draws(404);
  const KernelSpec k = KernelSpec::matern(MaternOrder::five_halves, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Sample s = random_sample(draws, 2, 2);
    const double rho = s.config.offset(0, 1).norm();
    const Eigen::VectorXd half_diff = 0.5 * (s.alpha.row(0) - s.alpha.row(1));
    const Eigen::VectorXd expected = 2.0 * (1.0 - gamma_derivs(k, rho).value) * half_diff;
    EXPECT_LE((strain(s.config, k, s.alpha)(0, 1) - expected).norm(), 1e-15);
  }
}

TEST(StrainAndCompression, Symmetries) {
  Draws draws(405);
  for (int trial = 0; trial < 10; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const int n = draws.between(2, 5);
    const Sample s = random_sample(draws, n, draws.between(1, 3));
    const StrainField strain_field = strain(s.config, k, s.alpha);
    const Eigen::MatrixXd c = compression(s.config, k, s.alpha);
    for (int a = 0; a < n; ++a) {
      EXPECT_EQ(strain_field(a, a).norm(), 0.0);
      EXPECT_EQ(c(a, a), 0.0);
      for (int b = 0; b < n; ++b) {
        EXPECT_LE((strain_field(a, b) + strain_field(b, a)).norm(), 1e-15);
        EXPECT_EQ(c(a, b), c(b, a));
      }
    }
  }
}

TEST(LandmarkDerivative, ZeroSecondArgument) {
  Draws draws(406);
  const Sample s = random_sample(draws, 3, 2);
  EXPECT_EQ(landmark_derivative(s.config, KernelSpec::gaussian(1.0), s.alpha, Covector::zero(3, 2)).rows().norm(),
            0.0);
}

TEST(LandmarkDerivative, TwoPointClosedForm) {
  Draws draws(407);
  const KernelSpec k = KernelSpec::gaussian(1.3);
  for (int trial = 0; trial < 10; ++trial) {
    const Sample s = random_sample(draws, 2, 2);
    const Eigen::VectorXd diff = s.config.offset(0, 1);
    const double rho = diff.norm();
    const GammaDerivs g = gamma_derivs(k, rho);
    const double parallel = 0.5 * (s.alpha.row(0) - s.alpha.row(1)).dot(diff / rho);
    const Eigen::VectorXd expected = 2.0 * (1.0 - g.value) * g.first * parallel * s.beta.row(1);
    EXPECT_LE((landmark_derivative(s.config, k, s.alpha, s.beta).row(0) - expected).norm(), 1e-15);
  }
}

TEST(LandmarkDerivative, AntisymmetricPartIsLieBracket) {
  // With fixed covectors, X(q) = sharp(q, alpha) is a vector field on configuration space and
  // [X, Y] = DY.X - DX.Y should equal D(alpha, beta) - D(beta, alpha).
  Draws draws(408);
  const double h = 1e-6;
  for (int trial = 0; trial < 8; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const int n = draws.between(2, 4);
    const int d = draws.between(1, 3);
    const Sample s = random_sample(draws, n, d);
    auto directional = [&](const Covector& moving, const Covector& direction) {
      const Eigen::MatrixXd step = sharp(s.config, k, direction).rows();
      const Eigen::MatrixXd q = s.config.points();
      return Eigen::MatrixXd((sharp(LandmarkConfig(q + h * step), k, moving).rows() -
                              sharp(LandmarkConfig(q - h * step), k, moving).rows()) /
                             (2.0 * h));
    };
    const Eigen::MatrixXd bracket = directional(s.beta, s.alpha) - directional(s.alpha, s.beta);
    const Eigen::MatrixXd closed = landmark_derivative(s.config, k, s.alpha, s.beta).rows() -
                                   landmark_derivative(s.config, k, s.beta, s.alpha).rows();
    EXPECT_LE((bracket - closed).norm(), 1e-8);
  }
}

TEST(CurvatureTerms, MatchesGenericEngineAndClassicalOracle) {
  Draws draws(409);
  for (int trial = 0; trial < 30; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const int n = trial < 10 ? 3 : draws.between(2, 4);
    const int d = trial < 10 ? 2 : draws.between(1, 3);
    const Sample s = random_sample(draws, n, d);
    const LandmarkModel model(k, n, d);
    const Eigen::VectorXd x = model.flatten(s.config.points());
    const Eigen::VectorXd a = model.flatten(s.alpha.rows());
    const Eigen::VectorXd b = model.flatten(s.beta.rows());
    const CurvatureReport special = curvature_terms(s.config, k, s.alpha, s.beta);
    const CurvatureReport generic = mario_numerator(model, x, a, b);
    const double scale = term_scale(generic);
    EXPECT_NEAR(special.r1, generic.r1, 1e-10 * scale);
    EXPECT_NEAR(special.r2, generic.r2, 1e-10 * scale);
    EXPECT_NEAR(special.r3, generic.r3, 1e-10 * scale);
    EXPECT_NEAR(special.r4, generic.r4, 1e-10 * scale);
    const double classical = classical_numerator(model, x, a, b);
    EXPECT_NEAR(special.numerator, classical, 1e-8 * (1.0 + std::abs(classical)));
    EXPECT_NEAR(special.denominator, denominator(model, x, a, b), 1e-10 * (1.0 + special.denominator));
    EXPECT_LE(special.r4, 0.0);
  }
}

TEST(CurvatureTerms, HessianRouteForFirstTerm) {
  Draws draws(410);
  for (int trial = 0; trial < 15; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const Sample s = random_sample(draws, draws.between(2, 5), draws.between(1, 3));
    const double rotinv = curvature_terms(s.config, k, s.alpha, s.beta).r1;
    EXPECT_NEAR(rotinv, r1_hessian_route(s.config, k, s.alpha, s.beta), 1e-12 * (1.0 + std::abs(rotinv)));
  }
}

TEST(CurvatureTerms, ThirdTermThroughCometricPairing) {
  Draws draws(411);
  for (int trial = 0; trial < 15; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const Sample s = random_sample(draws, draws.between(2, 5), draws.between(1, 3));
    const Covector fab = mixed_force(s.config, k, s.alpha, s.beta);
    const Covector faa = mixed_force(s.config, k, s.alpha, s.alpha);
    const Covector fbb = mixed_force(s.config, k, s.beta, s.beta);
    const double expected = cometric_pair(s.config, k, fab, fab) - cometric_pair(s.config, k, faa, fbb);
    EXPECT_NEAR(curvature_terms(s.config, k, s.alpha, s.beta).r3, expected, 1e-10 * (1.0 + std::abs(expected)));
  }
}

TEST(CurvatureTerms, ParallelSectionIsDegenerate) {
  Draws draws(412);
  const Sample s = random_sample(draws, 3, 2);
  const CurvatureReport report = curvature_terms(s.config, KernelSpec::gaussian(1.0), s.alpha, s.alpha);
  EXPECT_EQ(report.numerator, 0.0);
  EXPECT_NEAR(report.denominator, 0.0, 1e-14);
  EXPECT_FALSE(report.sectional.has_value());
}

TEST(CurvatureTerms, ExchangeSymmetryAndBilinearScaling) {
  Draws draws(413);
  for (int trial = 0; trial < 15; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const Sample s = random_sample(draws, draws.between(2, 4), draws.between(1, 3));
    const CurvatureReport base = curvature_terms(s.config, k, s.alpha, s.beta);
    const CurvatureReport swapped = curvature_terms(s.config, k, s.beta, s.alpha);
    EXPECT_NEAR(base.numerator, swapped.numerator, 1e-12 * term_scale(base));

    const double c = draws.uniform(0.5, 2.0);
    const CurvatureReport scaled = curvature_terms(s.config, k, Covector(c * s.alpha.rows()), s.beta);
    EXPECT_NEAR(scaled.numerator, c * c * base.numerator, 1e-12 * c * c * term_scale(base));

    if (!base.sectional) continue;
    const double d = draws.uniform(-2.0, -0.5);
    const double e = draws.uniform(-1.0, 1.0);
    const CurvatureReport mixed = curvature_terms(s.config, k, Covector(c * s.alpha.rows()),
                                                  Covector(d * s.beta.rows() + e * s.alpha.rows()));
    ASSERT_TRUE(mixed.sectional.has_value());
    EXPECT_NEAR(*mixed.sectional, *base.sectional, 1e-9 * (1.0 + std::abs(*base.sectional)));
  }
}

TEST(CurvatureTerms, RigidMotionInvariance) {
  Draws draws(414);
  for (int trial = 0; trial < 10; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const int n = draws.between(2, 4);
    const int d = draws.between(2, 3);
    const Sample s = random_sample(draws, n, d);
    const Eigen::MatrixXd r = rotation(draws.uniform(0.0, 6.283), d);
    const Eigen::RowVectorXd shift = draws.vector(d, -3.0, 3.0).transpose();
    const LandmarkConfig moved((s.config.points() * r.transpose()).rowwise() + shift);
    const CurvatureReport before = curvature_terms(s.config, k, s.alpha, s.beta);
    const CurvatureReport after =
        curvature_terms(moved, k, Covector(s.alpha.rows() * r.transpose()), Covector(s.beta.rows() * r.transpose()));
    const double scale = term_scale(before);
    EXPECT_NEAR(after.r1, before.r1, 1e-10 * scale);
    EXPECT_NEAR(after.r2, before.r2, 1e-10 * scale);
    EXPECT_NEAR(after.r3, before.r3, 1e-10 * scale);
    EXPECT_NEAR(after.r4, before.r4, 1e-10 * scale);
    EXPECT_NEAR(after.denominator, before.denominator, 1e-10 * (1.0 + before.denominator));
  }
}

TEST(CurvatureTerms, CoincidentLandmarksAreDegenerate) {
  Eigen::MatrixXd q(2, 2);
  q << 0.0, 0.0, 0.0, 0.0;
  const Covector a(Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW((void)curvature_terms(LandmarkConfig(q), KernelSpec::gaussian(1.0), a, a), DegenerateConfiguration);
}

TEST(OneMomentum, OnlyFourthTermAndNonPositive) {
  Draws draws(415);
  for (int trial = 0; trial < 20; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const int n = draws.between(2, 4);
    const int d = draws.between(1, 3);
    const LandmarkConfig config(draws.separated_points(n, d, 1.5, 0.3));
    const Eigen::VectorXd a1 = draws.vector(d);
    const Eigen::VectorXd b1 = draws.vector(d);
    const CurvatureReport closed = one_momentum_curvature(config, k, a1, b1);
    EXPECT_EQ(closed.r1, 0.0);
    EXPECT_EQ(closed.r2, 0.0);
    EXPECT_EQ(closed.r3, 0.0);
    EXPECT_LE(closed.numerator, 0.0);

    Covector alpha = Covector::zero(n, d);
    Covector beta = Covector::zero(n, d);
    alpha.rows().row(0) = a1.transpose();
    beta.rows().row(0) = b1.transpose();
    const CurvatureReport general = curvature_terms(config, k, alpha, beta);
    const double scale = 1.0 + std::abs(general.r4);
    EXPECT_NEAR(general.r1, 0.0, 1e-14 * scale);
    EXPECT_NEAR(general.r2, 0.0, 1e-14 * scale);
    EXPECT_NEAR(general.r3, 0.0, 1e-14 * scale);
    EXPECT_NEAR(closed.numerator, general.numerator, 1e-12 * scale);
    EXPECT_NEAR(closed.denominator, general.denominator, 1e-12 * (1.0 + general.denominator));
  }
}

TEST(OneMomentum, TwoPointClosedForm) {
  // alpha1 along the separation, beta1 perpendicular to it.
  const KernelSpec k = KernelSpec::gaussian(1.0);
  for (double rho : {0.4, 1.0, 1.7, 3.0}) {
    Eigen::MatrixXd q(2, 2);
    q << 0.0, 0.0, rho, 0.0;
    const LandmarkConfig config(q);
    const Eigen::Vector2d a1(0.8, 0.0);
    const Eigen::Vector2d b1(0.0, -1.3);
    const GammaDerivs g = gamma_derivs(k, rho);
    const double expected =
        -0.75 * ((1.0 - g.value) / (1.0 + g.value)) * g.first * g.first * b1.squaredNorm() * a1.squaredNorm();
    EXPECT_NEAR(one_momentum_curvature(config, k, a1, b1).numerator, expected, 1e-14);
    Covector alpha = Covector::zero(2, 2);
    Covector beta = Covector::zero(2, 2);
    alpha.rows().row(0) = a1.transpose();
    beta.rows().row(0) = b1.transpose();
    EXPECT_NEAR(curvature_terms(config, k, alpha, beta).numerator, expected, 1e-13);
  }
}

TEST(OneMomentum, EqualMomentaGiveZero) {
  Eigen::MatrixXd q(3, 2);
  q << 0.0, 0.0, 1.0, 0.0, 0.0, 1.0;
  const Eigen::Vector2d a1(0.3, 0.4);
  const CurvatureReport report = one_momentum_curvature(LandmarkConfig(q), KernelSpec::gaussian(1.0), a1, a1);
  EXPECT_EQ(report.numerator, 0.0);
  EXPECT_FALSE(report.sectional.has_value());
  EXPECT_THROW((void)one_momentum_curvature(LandmarkConfig(q.topRows(1)), KernelSpec::gaussian(1.0), a1, a1),
               InvalidInput);
}

TEST(LandmarkDenominator, MatchesGenericRoute) {
  Draws draws(416);
  for (int trial = 0; trial < 15; ++trial) {
    const KernelSpec k = alternating_kernel(trial);
    const int n = draws.between(1, 4);
    const int d = draws.between(1, 3);
    const Sample s = random_sample(draws, n, d);
    const LandmarkModel model(k, n, d);
    const double generic = denominator(model, model.flatten(s.config.points()), model.flatten(s.alpha.rows()),
                                       model.flatten(s.beta.rows()));
    EXPECT_NEAR(landmark_denominator(s.config, k, s.alpha, s.beta), generic, 1e-10 * (1.0 + generic));
    EXPECT_GE(landmark_denominator(s.config, k, s.alpha, s.beta), 0.0);
  }
}
