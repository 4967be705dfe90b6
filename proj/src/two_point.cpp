#include "lmgeo/two_point.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "lmgeo/errors.hpp"
#include "lmgeo/format.hpp"

namespace lmgeo {
namespace {

struct RadialProfile {
  double gamma;
  double slope;
  double deficit;  // g0 - gamma, cancellation-free
};

RadialProfile profile(const KernelSpec& kernel, double rho) {
  const GammaDerivs g = gamma_derivs(kernel, rho);
  return {g.value, g.first, gamma_deficit(kernel, rho)};
}

/// d^2 rho / dt^2 = 2 d/drho [F(rho) / rho^2], valid through turning points.
double radial_acceleration(const KernelSpec& kernel, const ConservedSet& c, double rho) {
  const RadialProfile p = profile(kernel, rho);
  const double w2 = c.omega * c.omega;
  const double slope = -c.energy * p.slope + 2.0 * c.pbar.squaredNorm() * p.gamma * p.slope +
                       8.0 * w2 * p.deficit * p.slope / (rho * rho) +
                       8.0 * w2 * p.deficit * p.deficit / (rho * rho * rho);
  return 2.0 * slope;
}

double radial_magnitude(const KernelSpec& kernel, const ConservedSet& c, double x) {
  const double g0 = gamma_at_zero(kernel);
  const double d = gamma_deficit(kernel, x);
  return std::abs(c.energy) * x * x * d + c.pbar.squaredNorm() * x * x * d * (2.0 * g0 - d) +
         4.0 * c.omega * c.omega * d * d;
}

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct ReducedState {
  double rho, rate, theta, travel;
};

struct ReducedRun {
  std::vector<ReducedState> states;
};

ReducedRun run_reduced(const KernelSpec& kernel, const ConservedSet& c, const ReducedState& start, double t_end,
                       int steps) {
  const double g0 = gamma_at_zero(kernel);
  auto derivative = [&](const ReducedState& y) {
    if (!(y.rho > 0.0)) throw NumericalFailure("two-point distance reached zero during quadrature");
    const RadialProfile p = profile(kernel, y.rho);
    return ReducedState{y.rate, radial_acceleration(kernel, c, y.rho),
                        4.0 * c.omega * p.deficit / (y.rho * y.rho), g0 + p.gamma};
  };
  auto axpy = [](const ReducedState& y, double h, const ReducedState& k) {
    return ReducedState{y.rho + h * k.rho, y.rate + h * k.rate, y.theta + h * k.theta, y.travel + h * k.travel};
  };
  ReducedRun run;
  run.states.reserve(static_cast<std::size_t>(steps) + 1);
  ReducedState y = start;
  run.states.push_back(y);
  const double h = t_end / steps;
  for (int i = 0; i < steps; ++i) {
    const ReducedState k1 = derivative(y);
    const ReducedState k2 = derivative(axpy(y, 0.5 * h, k1));
    const ReducedState k3 = derivative(axpy(y, 0.5 * h, k2));
    const ReducedState k4 = derivative(axpy(y, h, k3));
    y.rho += h / 6.0 * (k1.rho + 2.0 * k2.rho + 2.0 * k3.rho + k4.rho);
    y.rate += h / 6.0 * (k1.rate + 2.0 * k2.rate + 2.0 * k3.rate + k4.rate);
    y.theta += h / 6.0 * (k1.theta + 2.0 * k2.theta + 2.0 * k3.theta + k4.theta);
    y.travel += h / 6.0 * (k1.travel + 2.0 * k2.travel + 2.0 * k3.travel + k4.travel);
    run.states.push_back(y);
  }
  return run;
}

double hermite(double y0, double m0, double y1, double m1, double h, double tau) {
  const double t2 = tau * tau;
  const double t3 = t2 * tau;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * y0 + (t3 - 2.0 * t2 + tau) * h * m0 + (-2.0 * t3 + 3.0 * t2) * y1 +
         (t3 - t2) * h * m1;
}

void check_pair_dims(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size() || a.size() < 1) throw InvalidInput("two-point vectors must share a positive dimension");
}

}  // namespace

TwoPointState to_mean_diff(const Eigen::VectorXd& q1, const Eigen::VectorXd& q2, const Eigen::VectorXd& p1,
                           const Eigen::VectorXd& p2) {
  check_pair_dims(q1, q2);
  check_pair_dims(q1, p1);
  check_pair_dims(q1, p2);
  if (q1 == q2) throw DegenerateConfiguration("two-point state has coincident points");
  return {0.5 * (q1 + q2), 0.5 * (q1 - q2), 0.5 * (p1 + p2), 0.5 * (p1 - p2)};
}

TwoPointPhase from_mean_diff(const TwoPointState& s) {
  return {s.qbar + s.dq, s.qbar - s.dq, s.pbar + s.dp, s.pbar - s.dp};
}

ConservedSet conserved(const TwoPointState& state, const KernelSpec& kernel) {
  const double rho = state.rho();
  const double g0 = gamma_at_zero(kernel);
  const double deficit = gamma_deficit(kernel, rho);
  const double energy = (2.0 * g0 - deficit) * state.pbar.squaredNorm() + deficit * state.dp.squaredNorm();
  // |dq ^ dp| from the wedge components; exactly zero for parallel inputs with exact products.
  double wedge2 = 0.0;
  for (Eigen::Index i = 0; i < state.dq.size(); ++i) {
    for (Eigen::Index j = i + 1; j < state.dq.size(); ++j) {
      const double w = state.dq(i) * state.dp(j) - state.dq(j) * state.dp(i);
      wedge2 += w * w;
    }
  }
  return {energy, state.pbar, std::sqrt(wedge2)};
}

double radial_poly_F(const KernelSpec& kernel, const ConservedSet& c, double x) {
  if (!(x > 0.0)) throw InvalidInput("radial polynomial needs a positive distance");
  const double g0 = gamma_at_zero(kernel);
  const double d = gamma_deficit(kernel, x);
  return c.energy * x * x * d - c.pbar.squaredNorm() * x * x * d * (2.0 * g0 - d) - 4.0 * c.omega * c.omega * d * d;
}

const char* to_string(TrajectoryClass kind) {
  switch (kind) {
    case TrajectoryClass::scattering: return "scattering";
    case TrajectoryClass::capture_forward: return "capture_forward";
    case TrajectoryClass::capture_backward: return "capture_backward";
  }
  return "unknown";
}

TrajectoryClass classify(const TwoPointState& state0, const KernelSpec& kernel) {
  kernel.require_smooth();
  const double rho0 = state0.rho();
  if (!(rho0 > 0.0)) throw InvalidInput("two-point state needs distinct points");
  const ConservedSet c = conserved(state0, kernel);

  double direction = gamma_deficit(kernel, rho0) * state0.dp.dot(state0.dq);
  if (direction == 0.0) direction = radial_acceleration(kernel, c, rho0);
  if (direction == 0.0) throw NumericalFailure("classification inconclusive: radial equilibrium");

  const double lo = std::min(1e-3 * kernel.scale(), 0.5 * rho0);
  const double hi = std::max(50.0 * kernel.scale(), 2.0 * rho0);
  constexpr int kGrid = 2000;
  bool inner_root = false;
  bool outer_root = false;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  for (int i = 0; i < kGrid; ++i) {
    const double x = std::exp(log_lo + (log_hi - log_lo) * i / (kGrid - 1));
    if (std::abs(x - rho0) <= 1e-9 * rho0) continue;
    const double f = radial_poly_F(kernel, c, x);
    if (f < 0.0) (x < rho0 ? inner_root : outer_root) = true;
  }
  if (!inner_root) {
    const double f_lo = radial_poly_F(kernel, c, lo);
    if (std::abs(f_lo) <= 1e-10 * radial_magnitude(kernel, c, lo)) {
      throw NumericalFailure("classification inconclusive: F vanishes to rounding near zero distance");
    }
  }
  if (inner_root && outer_root) {
    throw NumericalFailure("bounded two-point orbit is neither scattering nor capture");
  }
  if (inner_root) return TrajectoryClass::scattering;
  if (outer_root) return TrajectoryClass::capture_forward;
  return direction < 0.0 ? TrajectoryClass::capture_forward : TrajectoryClass::capture_backward;
}

TwoPointSolution::Node TwoPointSolution::interpolate(double t) const {
  if (t < 0.0 || t > times_.back() * (1.0 + 1e-12)) throw InvalidInput("time outside the solved interval");
  const std::size_t last = times_.size() - 1;
  const double h = times_[1] - times_[0];
  std::size_t i = std::min(static_cast<std::size_t>(t / h), last - 1);
  const double tau = (t - times_[i]) / h;
  const Node& a = nodes_[i];
  const Node& b = nodes_[i + 1];
  Node out{};
  out.rho = hermite(a.rho, a.rho_rate, b.rho, b.rho_rate, h, tau);
  out.theta = hermite(a.theta, a.theta_rate, b.theta, b.theta_rate, h, tau);
  out.travel = hermite(a.travel, a.travel_rate, b.travel, b.travel_rate, h, tau);
  return out;
}

double TwoPointSolution::rho(double t) const { return interpolate(t).rho; }
double TwoPointSolution::theta(double t) const { return interpolate(t).theta; }
Eigen::VectorXd TwoPointSolution::qbar(double t) const { return qbar0_ + interpolate(t).travel * pbar_; }

std::pair<Eigen::VectorXd, Eigen::VectorXd> TwoPointSolution::positions(double t) const {
  const Node n = interpolate(t);
  const Eigen::VectorXd centre = qbar0_ + n.travel * pbar_;
  const Eigen::VectorXd half =
      0.5 * n.rho * (std::cos(n.theta) * radial_axis_ + std::sin(n.theta) * angular_axis_);
  return {centre + half, centre - half};
}

TwoPointSolution solve_two_point(const TwoPointState& state0, const KernelSpec& kernel, double t_end, double tol) {
  kernel.require_smooth();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw InvalidInput("two-point horizon must be positive");
  if (!(tol > 0.0)) throw InvalidInput("tolerance must be positive");
  const double rho0 = state0.rho();
  if (!(rho0 > 0.0)) throw InvalidInput("two-point state needs distinct points");
  const ConservedSet c = conserved(state0, kernel);
  const double f0 = radial_poly_F(kernel, c, rho0);
  if (f0 < -1e-12 * std::max(1.0, radial_magnitude(kernel, c, rho0))) {
    throw InvalidInput("radial polynomial is negative at the initial distance");
  }

  const double g0 = gamma_at_zero(kernel);
  const ReducedState start{rho0, 4.0 * gamma_deficit(kernel, rho0) * state0.dp.dot(state0.dq) / rho0, 0.0, 0.0};

  int steps = std::max(64, static_cast<int>(std::ceil(t_end * 256.0)));
  ReducedRun coarse = run_reduced(kernel, c, start, t_end, steps);
  ReducedRun fine;
  constexpr int kMaxSteps = 1 << 22;
  while (true) {
    fine = run_reduced(kernel, c, start, t_end, 2 * steps);
    double err = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const ReducedState& a = coarse.states[static_cast<std::size_t>(i)];
      const ReducedState& b = fine.states[static_cast<std::size_t>(2 * i)];
      err = std::max({err, std::abs(a.rho - b.rho), 0.5 * b.rho * std::abs(a.theta - b.theta),
                      std::abs(a.travel - b.travel) * c.pbar.norm()});
    }
    steps *= 2;
    if (err <= tol * std::max(1.0, rho0)) break;
    if (steps > kMaxSteps) throw NumericalFailure("two-point quadrature did not converge");
    coarse = std::move(fine);
  }

  TwoPointSolution sol;
  const double h = t_end / steps;
  for (int i = 0; i <= steps; ++i) {
    const ReducedState& y = fine.states[static_cast<std::size_t>(i)];
    const RadialProfile p = profile(kernel, y.rho);
    sol.times_.push_back(i * h);
    sol.nodes_.push_back({y.rho, y.rate, y.theta, 4.0 * c.omega * p.deficit / (y.rho * y.rho), y.travel,
                          g0 + p.gamma});
  }

  // Turning points: sign changes of the radial rate, polished on F.
  auto radicand = [&](double x) { return radial_poly_F(kernel, c, x); };
  for (int i = 0; i < steps; ++i) {
    const auto& a = sol.nodes_[static_cast<std::size_t>(i)];
    const auto& b = sol.nodes_[static_cast<std::size_t>(i + 1)];
    if (!(a.rho_rate * b.rho_rate < 0.0)) continue;
    const double t_turn = bisect(
        [&](double t) {
          const double tau = (t - sol.times_[i]) / h;
          // derivative of the Hermite interpolant of rho
          const double d00 = 6.0 * tau * tau - 6.0 * tau;
          const double d10 = 3.0 * tau * tau - 4.0 * tau + 1.0;
          const double d11 = 3.0 * tau * tau - 2.0 * tau;
          return (d00 * (a.rho - b.rho)) / h + d10 * a.rho_rate + d11 * b.rho_rate;
        },
        sol.times_[i], sol.times_[i + 1], 1e-14 * std::max(1.0, t_end));
    const double rho_turn = sol.rho(t_turn);
    double width = 1e-9 * rho_turn;
    while (width < rho_turn && (radicand(rho_turn - width) < 0.0) == (radicand(rho_turn + width) < 0.0)) width *= 2;
    double root = rho_turn;
    if (width < rho_turn) {
      root = bisect(radicand, rho_turn - width, rho_turn + width, 1e-12);
      const double step = 1e-6 * root;
      const double slope = (radicand(root + step) - radicand(root - step)) / (2.0 * step);
      if (std::abs(slope) * root <= 1e-9 * std::max(1e-300, radial_magnitude(kernel, c, root))) {
        throw NumericalFailure("turning-point degeneracy: double root of the radial polynomial");
      }
    }
    sol.turning_times_.push_back(t_turn);
    sol.turning_radii_.push_back(root);
  }

  sol.qbar0_ = state0.qbar;
  sol.pbar_ = state0.pbar;
  sol.radial_axis_ = state0.dq / state0.dq.norm();
  const Eigen::VectorXd across = state0.dp - state0.dp.dot(sol.radial_axis_) * sol.radial_axis_;
  const double across_norm = across.norm();
  sol.angular_axis_ = (c.omega > 0.0 && across_norm > 0.0) ? Eigen::VectorXd(across / across_norm)
                                                            : Eigen::VectorXd::Zero(across.size());
  return sol;
}

TDecomposition t_decomposition(const Eigen::VectorXd& direction, const MomentumPair& alpha,
                               const MomentumPair& beta) {
  const auto dim = direction.size();
  if (alpha.first.size() != dim || alpha.second.size() != dim || beta.first.size() != dim ||
      beta.second.size() != dim) {
    throw InvalidInput("two-point covector dimension mismatch");
  }
  const double len = direction.norm();
  if (!(len > 0.0)) throw InvalidInput("decomposition direction must be non-zero");
  const Eigen::VectorXd u = direction / len;

  const Eigen::VectorXd a_mean = 0.5 * (alpha.first + alpha.second);
  const Eigen::VectorXd b_mean = 0.5 * (beta.first + beta.second);
  const Eigen::VectorXd a_half = 0.5 * (alpha.first - alpha.second);
  const Eigen::VectorXd b_half = 0.5 * (beta.first - beta.second);
  const double a_par = a_half.dot(u);
  const double b_par = b_half.dot(u);
  const Eigen::VectorXd a_perp = a_half - a_par * u;
  const Eigen::VectorXd b_perp = b_half - b_par * u;

  // |v (x) w - v' (x) w'|^2 for rank-one tensors.
  auto tensor_gap = [](const Eigen::VectorXd& v, const Eigen::VectorXd& w, const Eigen::VectorXd& v2,
                       const Eigen::VectorXd& w2) {
    return v.squaredNorm() * w.squaredNorm() - 2.0 * v.dot(v2) * w.dot(w2) + v2.squaredNorm() * w2.squaredNorm();
  };

  TDecomposition t;
  t.t1 = (b_par * a_mean - a_par * b_mean).squaredNorm();
  t.t2 = std::max(0.0, tensor_gap(b_perp, a_mean, a_perp, b_mean));
  t.t3 = (b_par * a_perp - a_par * b_perp).squaredNorm();
  t.t4 = std::max(0.0, 2.0 * (a_perp.squaredNorm() * b_perp.squaredNorm() - std::pow(a_perp.dot(b_perp), 2)));
  t.t5 = std::max(0.0, 2.0 * (a_mean.squaredNorm() * b_mean.squaredNorm() - std::pow(a_mean.dot(b_mean), 2)));
  return t;
}

KCoefficients k_coefficients(const KernelSpec& kernel, double rho) {
  if (!(rho > 0.0)) throw InvalidInput("coefficients need a positive distance");
  const GammaDerivs g = gamma_derivs(kernel, rho);
  const double d = gamma_deficit(kernel, rho);
  const double g0 = gamma_at_zero(kernel);
  return {d * d * g.second, d * d * g.first / rho, d * g.first * g.first,
          d * d * g.first * g.first / (2.0 * g0 - d)};
}

TCoefficients numerator_coefficients(const KCoefficients& k) {
  return {2.0 * (2.0 * k.k1 - k.k3 - 3.0 * k.k4), 2.0 * (2.0 * k.k2 + k.k3), 4.0 * (-k.k1 - k.k2 - k.k3),
          -4.0 * k.k2 - k.k3, -k.k3};
}

TwoPointCurvature two_point_curvature(const LandmarkConfig& config, const KernelSpec& kernel,
                                      const Covector& alpha, const Covector& beta) {
  kernel.require_smooth();
  require_same_shape(config, alpha.rows(), "alpha");
  require_same_shape(config, beta.rows(), "beta");
  if (config.count() < 2) throw InvalidInput("two-point curvature needs at least two landmarks");
  for (int a = 2; a < config.count(); ++a) {
    if (!alpha.rows().row(a).isZero(0.0) || !beta.rows().row(a).isZero(0.0)) {
      throw InvalidInput("covector support outside landmarks 1 and 2");
    }
  }
  const GramSolver guard(config, kernel);
  const Eigen::VectorXd offset = config.offset(0, 1);
  const double rho = offset.norm();
  const TDecomposition t = t_decomposition(offset, {alpha.row(0), alpha.row(1)}, {beta.row(0), beta.row(1)});
  const KCoefficients k = k_coefficients(kernel, rho);
  const double g0 = gamma_at_zero(kernel);
  const double d = gamma_deficit(kernel, rho);
  const double g = g0 - d;

  TwoPointCurvature out{{}, t, k, config.count() > 2};
  CurvatureReport& r = out.report;
  r.r1 = 4.0 * k.k1 * (t.t1 - t.t3) + 4.0 * k.k2 * (t.t2 - t.t3 - t.t4);
  r.r2 = -4.0 * k.k3 * (t.t1 - t.t3);
  r.r3 = k.k3 * (2.0 * (t.t1 + t.t2) - 2.0 * t.t3 - t.t4 - t.t5);
  r.r4 = -6.0 * (k.k3 * t.t3 + k.k4 * t.t1);
  const TCoefficients coef = numerator_coefficients(k);
  r.numerator = coef.t1 * t.t1 + coef.t2 * t.t2 + coef.t3 * t.t3 + coef.t4 * t.t4 + coef.t5 * t.t5;
  r.denominator = 4.0 * d * (g0 + g) * (t.t1 + t.t2) + 2.0 * d * d * (2.0 * t.t3 + t.t4) +
                  2.0 * (g0 + g) * (g0 + g) * t.t5;
  const Eigen::MatrixXd kmat = kernel_matrix(config, kernel);
  const double aa = (alpha.rows().transpose() * kmat * alpha.rows()).trace();
  const double bb = (beta.rows().transpose() * kmat * beta.rows()).trace();
  r.sectional = sectional_ratio(r.numerator, r.denominator, aa * bb);
  return out;
}

double curvature_L2R1(const KernelSpec& kernel, double rho) {
  if (!(rho > 0.0)) throw InvalidInput("curvature needs a positive distance");
  const GammaDerivs g = gamma_derivs(kernel, rho);
  const double g0 = gamma_at_zero(kernel);
  const double d = gamma_deficit(kernel, rho);
  const double sum = g0 + g.value;
  return d / sum * g.second - (g0 + d) / (sum * sum) * g.first * g.first;
}

std::optional<double> circular_orbit_radius(const KernelSpec& kernel, double lower, double upper) {
  if (!(lower > 0.0) || !(upper > lower)) throw InvalidInput("search interval needs 0 < lower < upper");
  auto balance = [&](double r) { return gamma_deficit(kernel, 2.0 * r) + r * gamma_derivs(kernel, 2.0 * r).first; };
  constexpr int kGrid = 4000;
  double prev_r = lower;
  double prev_f = balance(lower);
  if (prev_f == 0.0) return lower;
  for (int i = 1; i <= kGrid; ++i) {
    const double r = lower + (upper - lower) * i / kGrid;
    const double f = balance(r);
    if (f == 0.0) return r;
    if ((f < 0.0) != (prev_f < 0.0)) return bisect(balance, prev_r, r, 1e-14 * upper);
    prev_r = r;
    prev_f = f;
  }
  return std::nullopt;
}

void write_coefficient_table(std::ostream& out, const KernelSpec& kernel, const std::vector<double>& radii) {
  out << "rho,k1,k2,k3,k4,coefT1,coefT2,coefT3,coefT4,coefT5,K_L2R1\n";
  for (double rho : radii) {
    const KCoefficients k = k_coefficients(kernel, rho);
    const TCoefficients c = numerator_coefficients(k);
    for (double v : {rho, k.k1, k.k2, k.k3, k.k4, c.t1, c.t2, c.t3, c.t4, c.t5}) out << format_number(v) << ',';
    out << format_number(curvature_L2R1(kernel, rho)) << '\n';
  }
}

}  // namespace lmgeo
