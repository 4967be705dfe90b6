#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <vector>

#include "lmgeo/curvature_engine.hpp"
#include "lmgeo/manifold.hpp"

namespace lmgeo {

/// Means and semi-differences of a two-landmark phase point.
struct TwoPointState {
  Eigen::VectorXd qbar;
  Eigen::VectorXd dq;
  Eigen::VectorXd pbar;
  Eigen::VectorXd dp;

  [[nodiscard]] double rho() const { return 2.0 * dq.norm(); }
};

struct TwoPointPhase {
  Eigen::VectorXd q1;
  Eigen::VectorXd q2;
  Eigen::VectorXd p1;
  Eigen::VectorXd p2;
};

[[nodiscard]] TwoPointState to_mean_diff(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2,
                                         const Eigen::VectorXd& p1, const Eigen::VectorXd& p2);
[[nodiscard]] TwoPointPhase from_mean_diff(const TwoPointState& state);

struct ConservedSet {
  double energy;
  Eigen::VectorXd pbar;
  /// |dq ^ dp|
  double omega;
};

[[nodiscard]] ConservedSet conserved(const TwoPointState& state, const KernelSpec& kernel);

/// F(x) = H x^2 (g0 - g(x)) - |pbar|^2 x^2 (g0^2 - g(x)^2) - 4 omega^2 (g0 - g(x))^2.
[[nodiscard]] double radial_poly_F(const KernelSpec& kernel, const ConservedSet& invariants, double x);

enum class TrajectoryClass { scattering, capture_forward, capture_backward };

[[nodiscard]] const char* to_string(TrajectoryClass kind);

/// Root analysis of F. capture_forward: the pair converges as t -> +inf; capture_backward: as
/// t -> -inf. Throws NumericalFailure if the scan cannot decide or the orbit is bounded.
[[nodiscard]] TrajectoryClass classify(const TwoPointState& state0, const KernelSpec& kernel);

/// rho(t), theta(t), qbar(t) of a two-point geodesic, sampled on a uniform grid and
/// interpolated by cubic Hermite polynomials.
class TwoPointSolution {
 public:
  [[nodiscard]] double t_end() const noexcept { return times_.back(); }
  [[nodiscard]] const std::vector<double>& times() const noexcept { return times_; }
  [[nodiscard]] const std::vector<double>& turning_times() const noexcept { return turning_times_; }
  /// Distances at which the radial motion turned, located on F to 1e-12.
  [[nodiscard]] const std::vector<double>& turning_radii() const noexcept { return turning_radii_; }

  [[nodiscard]] double rho(double t) const;
  [[nodiscard]] double theta(double t) const;
  [[nodiscard]] Eigen::VectorXd qbar(double t) const;
  /// Landmark positions (q1, q2).
  [[nodiscard]] std::pair<Eigen::VectorXd, Eigen::VectorXd> positions(double t) const;

 private:
  friend TwoPointSolution solve_two_point(const TwoPointState&, const KernelSpec&, double, double);

  struct Node {
    double rho, rho_rate, theta, theta_rate, travel, travel_rate;
  };
  [[nodiscard]] Node interpolate(double t) const;

  std::vector<double> times_;
  std::vector<Node> nodes_;
  std::vector<double> turning_times_;
  std::vector<double> turning_radii_;
  Eigen::VectorXd qbar0_;
  Eigen::VectorXd pbar_;
  Eigen::VectorXd radial_axis_;
  Eigen::VectorXd angular_axis_;
};

/// Reduced solution of the two-point geodesic over [0, t_end]. The grid is refined by step
/// doubling until consecutive solutions agree to tol.
[[nodiscard]] TwoPointSolution solve_two_point(const TwoPointState& state0, const KernelSpec& kernel, double t_end,
                                               double tol = 1e-9);

/// A covector restricted to landmarks 1 and 2.
struct MomentumPair {
  Eigen::VectorXd first;
  Eigen::VectorXd second;
};

struct TDecomposition {
  double t1 = 0.0;
  double t2 = 0.0;
  double t3 = 0.0;
  double t4 = 0.0;
  double t5 = 0.0;
};

/// Five squared norms of the section alpha ^ beta split along direction (unit vector q1 - q2).
[[nodiscard]] TDecomposition t_decomposition(const Eigen::VectorXd& direction, const MomentumPair& alpha,
                                             const MomentumPair& beta);

struct KCoefficients {
  double k1;
  double k2;
  double k3;
  double k4;
};

[[nodiscard]] KCoefficients k_coefficients(const KernelSpec& kernel, double rho);

/// Coefficients of T1..T5 in the two-point numerator.
struct TCoefficients {
  double t1;
  double t2;
  double t3;
  double t4;
  double t5;
};

[[nodiscard]] TCoefficients numerator_coefficients(const KCoefficients& k);

struct TwoPointCurvature {
  /// r4 is the two-landmark value; the numerator uses it.
  CurvatureReport report;
  TDecomposition terms;
  KCoefficients coefficients;
  /// N > 2: the true R4 on L^N is at most report.r4, so report.numerator is an upper bound.
  bool r4_is_upper_bound;
};

/// Closed-form curvature for covectors supported on landmarks 1 and 2.
[[nodiscard]] TwoPointCurvature two_point_curvature(const LandmarkConfig& config, const KernelSpec& kernel,
                                                    const Covector& alpha, const Covector& beta);

/// Sectional curvature of L^2(R^1) at separation rho.
[[nodiscard]] double curvature_L2R1(const KernelSpec& kernel, double rho);

/// Root of g0 - g(2r) + r g'(2r) on [lower, upper], if a sign change is bracketed.
[[nodiscard]] std::optional<double> circular_orbit_radius(const KernelSpec& kernel, double lower, double upper);

/// Header `rho,k1,k2,k3,k4,coefT1,coefT2,coefT3,coefT4,coefT5,K_L2R1`, one row per radius.
void write_coefficient_table(std::ostream& out, const KernelSpec& kernel, const std::vector<double>& radii);

}  // namespace lmgeo
