#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "lmgeo/manifold.hpp"

namespace lmgeo {

/// Time-sampled (q, p) along a Hamiltonian geodesic.
struct GeodesicPath {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> q_samples;
  std::vector<Eigen::MatrixXd> p_samples;
  std::vector<double> hamiltonian_samples;

  [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
  /// max_t |H(t) - H(0)| / |H(0)|; 0 when H(0) = 0.
  [[nodiscard]] double relative_energy_drift() const;
  /// max_t |sum_a p_a(t) - sum_a p_a(0)|.
  [[nodiscard]] double momentum_drift() const;
};

struct PhaseVelocity {
  Tangent qdot;
  Covector pdot;
};

/// H = 1/2 sum_ab K^{ab} <p_a, p_b>.
[[nodiscard]] double hamiltonian(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& p);

/// Hamilton's equations: qdot^a = sum_b K^{ab} p_b, pdot_a = -sum_b grad K^{ab} <p_a, p_b>.
[[nodiscard]] PhaseVelocity ham_rhs(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& p);

struct IntegrationOptions {
  /// Collision guard; negative selects default_separation(kernel).
  double min_separation = -1.0;
};

/// Fixed-step classical RK4 over [0, t_end]. Throws DegenerateConfiguration carrying the
/// failure time if landmarks come closer than the separation guard.
[[nodiscard]] GeodesicPath integrate(const LandmarkConfig& config0, const Covector& p0, const KernelSpec& kernel,
                                     double t_end, int steps, IntegrationOptions options = {});

/// Passive points carried by the flow of the lifted momentum field. Returns one M x D array per
/// path sample.
[[nodiscard]] std::vector<Eigen::MatrixXd> advect(const GeodesicPath& path, const KernelSpec& kernel,
                                                  const Eigen::MatrixXd& passive);

/// Header `t,q_1_1,...,q_N_D,p_1_1,...,p_N_D,H` then one row per sample, 17 significant digits.
void write_path_csv(std::ostream& out, const GeodesicPath& path);

}  // namespace lmgeo
