#include "lmgeo/oracle_suite.hpp"

#include <algorithm>
#include <cmath>

#include "lmgeo/curvature_engine.hpp"
#include "lmgeo/random.hpp"

namespace lmgeo {
namespace {

void record(OracleSummary& summary, const CometricModel& model, const Eigen::VectorXd& x,
            const Eigen::VectorXd& alpha, const Eigen::VectorXd& beta) {
  const double mario = mario_numerator(model, x, alpha, beta).numerator;
  const double classical = classical_numerator(model, x, alpha, beta);
  summary.max_residual = std::max(summary.max_residual, std::abs(mario - classical) / (1.0 + std::abs(classical)));
  ++summary.sections;
}

}  // namespace

OracleSummary run_oracle_suite(int trials, std::uint64_t seed) {
  if (trials < 0) throw InvalidInput("trial count must be non-negative");
  SeededRng rng(seed);
  OracleSummary summary;

  for (double radius : {0.5, 1.0, 2.0}) {
    const SphereModel sphere(radius);
    record(summary, sphere, rng.matrix(2, 1), rng.matrix(2, 1), rng.matrix(2, 1));
  }
  for (int dim : {2, 3}) {
    const HyperbolicModel hyperbolic(dim);
    Eigen::VectorXd x = rng.matrix(dim, 1);
    x(dim - 1) = rng.uniform(0.5, 2.0);
    record(summary, hyperbolic, x, rng.matrix(dim, 1), rng.matrix(dim, 1));
  }

  for (int trial = 0; trial < trials; ++trial) {
    const int count = rng.integer(2, 4);
    const int dim = rng.integer(1, 3);
    const KernelSpec kernel =
        (trial % 2 == 0) ? KernelSpec::gaussian(1.0) : KernelSpec::matern(MaternOrder::three_halves, 1.0);
    const LandmarkModel model(kernel, count, dim);
    const Eigen::MatrixXd q = random_points(rng, count, dim, 1.0 + 0.25 * count, 0.3);
    record(summary, model, model.flatten(q), model.flatten(rng.matrix(count, dim)),
           model.flatten(rng.matrix(count, dim)));
  }
  return summary;
}

}  // namespace lmgeo
