#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "lmgeo/errors.hpp"

namespace lmgeo {

/// mt19937_64 with a hand-rolled uniform map so draws are identical on every platform.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Uniform on [lo, hi) from the top 53 bits of one engine draw.
  double uniform(double lo = 0.0, double hi = 1.0) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

  /// Uniform integer in [lo, hi].
  int integer(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
  }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, double lo = -1.0, double hi = 1.0) {
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = uniform(lo, hi);
    }
    return out;
  }

 private:
  std::mt19937_64 engine_;
};

/// N points in a box of half-width spread, with every pairwise distance >= min_separation.
inline Eigen::MatrixXd random_points(SeededRng& rng, int count, int dim, double spread, double min_separation) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Eigen::MatrixXd points = rng.matrix(count, dim, -spread, spread);
    bool ok = true;
    for (int a = 0; a < count && ok; ++a) {
      for (int b = a + 1; b < count && ok; ++b) ok = (points.row(a) - points.row(b)).norm() >= min_separation;
    }
    if (ok) return points;
  }
  throw InvalidInput("could not place separated random points");
}

}  // namespace lmgeo
