#include "lmgeo/geodesics.hpp"

#include <cmath>
#include <ostream>

#include "lmgeo/errors.hpp"
#include "lmgeo/format.hpp"

namespace lmgeo {
namespace {

struct Phase {
  Eigen::MatrixXd q;
  Eigen::MatrixXd p;
};

Phase rhs(const KernelSpec& kernel, const Eigen::MatrixXd& q, const Eigen::MatrixXd& p) {
  const LandmarkConfig config(q);
  const int n = config.count();
  const Eigen::MatrixXd inner = p * p.transpose();
  Eigen::MatrixXd pdot = Eigen::MatrixXd::Zero(n, config.dim());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (inner(a, b) == 0.0) continue;
      // grad K^{ba} = -grad K^{ab}
      const Eigen::RowVectorXd push = inner(a, b) * grad_K(kernel, config.offset(a, b)).transpose();
      pdot.row(a) -= push;
      pdot.row(b) += push;
    }
  }
  return {kernel_matrix(config, kernel) * p, pdot};
}

Eigen::MatrixXd passive_velocity(const KernelSpec& kernel, const Eigen::MatrixXd& q, const Eigen::MatrixXd& p,
                                 const Eigen::MatrixXd& x) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x.rows(), x.cols());
  for (Eigen::Index m = 0; m < x.rows(); ++m) {
    for (Eigen::Index b = 0; b < q.rows(); ++b) {
      const double g = gamma_derivs(kernel, (x.row(m) - q.row(b)).norm()).value;
      out.row(m) += g * p.row(b);
    }
  }
  return out;
}

}  // namespace

double GeodesicPath::relative_energy_drift() const {
  if (hamiltonian_samples.empty() || hamiltonian_samples.front() == 0.0) return 0.0;
  const double h0 = hamiltonian_samples.front();
  double worst = 0.0;
  for (double h : hamiltonian_samples) worst = std::max(worst, std::abs(h - h0) / std::abs(h0));
  return worst;
}

double GeodesicPath::momentum_drift() const {
  if (p_samples.empty()) return 0.0;
  const Eigen::RowVectorXd total0 = p_samples.front().colwise().sum();
  double worst = 0.0;
  for (const auto& p : p_samples) worst = std::max(worst, (p.colwise().sum() - total0).norm());
  return worst;
}

double hamiltonian(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& p) {
  return 0.5 * cometric_pair(config, kernel, p, p);
}

PhaseVelocity ham_rhs(const LandmarkConfig& config, const KernelSpec& kernel, const Covector& p) {
  require_same_shape(config, p.rows(), "momentum");
  kernel.require_smooth();
  Phase v = rhs(kernel, config.points(), p.rows());
  return {Tangent(std::move(v.q)), Covector(std::move(v.p))};
}

GeodesicPath integrate(const LandmarkConfig& config0, const Covector& p0, const KernelSpec& kernel, double t_end,
                       int steps, IntegrationOptions options) {
  require_same_shape(config0, p0.rows(), "momentum");
  kernel.require_smooth();
  if (steps < 1) throw InvalidInput("integration needs at least one step");
  if (!std::isfinite(t_end)) throw InvalidInput("integration horizon must be finite");
  const double guard = options.min_separation < 0.0 ? default_separation(kernel) : options.min_separation;
  config0.require_separated(guard);

  const int n = config0.count();
  std::vector<bool> frozen(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) frozen[a] = p0.rows().row(a).isZero(0.0);
  auto mask = [&](Eigen::MatrixXd& pdot) {
    for (int a = 0; a < n; ++a) {
      if (frozen[a]) pdot.row(a).setZero();
    }
  };

  GeodesicPath path;
  path.times.reserve(static_cast<std::size_t>(steps) + 1);
  Eigen::MatrixXd q = config0.points();
  Eigen::MatrixXd p = p0.rows();
  auto record = [&](double t) {
    path.times.push_back(t);
    path.q_samples.push_back(q);
    path.p_samples.push_back(p);
    path.hamiltonian_samples.push_back(hamiltonian(LandmarkConfig(q), kernel, Covector(p)));
  };
  record(0.0);

  const double h = t_end / steps;
  for (int step = 1; step <= steps; ++step) {
    Phase k1 = rhs(kernel, q, p);
    mask(k1.p);
    Phase k2 = rhs(kernel, q + 0.5 * h * k1.q, p + 0.5 * h * k1.p);
    mask(k2.p);
    Phase k3 = rhs(kernel, q + 0.5 * h * k2.q, p + 0.5 * h * k2.p);
    mask(k3.p);
    Phase k4 = rhs(kernel, q + h * k3.q, p + h * k3.p);
    mask(k4.p);
    q += (h / 6.0) * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q);
    p += (h / 6.0) * (k1.p + 2.0 * k2.p + 2.0 * k3.p + k4.p);

    const double t = step * h;
    const LandmarkConfig current(q);
    if (current.min_separation() < guard) {
      throw DegenerateConfiguration("landmark collision during integration at t = " + format_number(t), t);
    }
    record(t);
  }
  return path;
}

std::vector<Eigen::MatrixXd> advect(const GeodesicPath& path, const KernelSpec& kernel,
                                    const Eigen::MatrixXd& passive) {
  if (path.size() == 0) throw InvalidInput("empty geodesic path");
  if (passive.cols() != path.q_samples.front().cols()) throw InvalidInput("passive point dimension mismatch");
  std::vector<Eigen::MatrixXd> out;
  out.reserve(path.size());
  Eigen::MatrixXd x = passive;
  out.push_back(x);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double h = path.times[i + 1] - path.times[i];
    const Eigen::MatrixXd& q0 = path.q_samples[i];
    const Eigen::MatrixXd& p0 = path.p_samples[i];
    const Eigen::MatrixXd& q1 = path.q_samples[i + 1];
    const Eigen::MatrixXd& p1 = path.p_samples[i + 1];
    const Eigen::MatrixXd qm = 0.5 * (q0 + q1);
    const Eigen::MatrixXd pm = 0.5 * (p0 + p1);
    const Eigen::MatrixXd k1 = passive_velocity(kernel, q0, p0, x);
    const Eigen::MatrixXd k2 = passive_velocity(kernel, qm, pm, x + 0.5 * h * k1);
    const Eigen::MatrixXd k3 = passive_velocity(kernel, qm, pm, x + 0.5 * h * k2);
    const Eigen::MatrixXd k4 = passive_velocity(kernel, q1, p1, x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.push_back(x);
  }
  return out;
}

void write_path_csv(std::ostream& out, const GeodesicPath& path) {
  if (path.size() == 0) throw InvalidInput("empty geodesic path");
  const auto n = path.q_samples.front().rows();
  const auto d = path.q_samples.front().cols();
  out << 't';
  for (const char* name : {"q", "p"}) {
    for (Eigen::Index a = 1; a <= n; ++a) {
      for (Eigen::Index i = 1; i <= d; ++i) out << ',' << name << '_' << a << '_' << i;
    }
  }
  out << ",H\n";
  for (std::size_t s = 0; s < path.size(); ++s) {
    out << format_number(path.times[s]);
    for (const auto* rows : {&path.q_samples[s], &path.p_samples[s]}) {
      for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index i = 0; i < d; ++i) out << ',' << format_number((*rows)(a, i));
      }
    }
    out << ',' << format_number(path.hamiltonian_samples[s]) << '\n';
  }
}

}  // namespace lmgeo
