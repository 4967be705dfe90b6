#include "lmgeo/curvature_engine.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

#include "lmgeo/errors.hpp"
#include "lmgeo/manifold.hpp"

namespace lmgeo {
namespace {

using Matrices = std::vector<Eigen::MatrixXd>;

struct ContractedPartials {
  /// raised1[k](i, j) = g^{ij,k} = d_xi g^{ij} g^{xi k}
  Matrices raised1;
  /// raised2[k * n + l](i, j) = g^{ij,kl}
  Matrices raised2;
};

void check_covectors(const CometricModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& alpha,
                     const Eigen::VectorXd& beta) {
  const auto n = model.dim();
  if (x.size() != n || alpha.size() != n || beta.size() != n) {
    throw InvalidInput("point and covectors must match the model dimension");
  }
}

ContractedPartials contract(const Eigen::MatrixXd& cometric, const CometricPartials& partials) {
  const int n = static_cast<int>(cometric.rows());
  ContractedPartials out;
  out.raised1.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int xi = 0; xi < n; ++xi) out.raised1[k] += partials.first[xi] * cometric(xi, k);
  }
  // Contract the second index first: half[xi * n + l] = d_xi d_eta g * g^{eta l}.
  Matrices half(static_cast<std::size_t>(n) * n, Eigen::MatrixXd::Zero(n, n));
  for (int xi = 0; xi < n; ++xi) {
    for (int l = 0; l < n; ++l) {
      for (int eta = 0; eta < n; ++eta) half[xi * n + l] += partials.d2(xi, eta) * cometric(eta, l);
    }
  }
  out.raised2.assign(static_cast<std::size_t>(n) * n, Eigen::MatrixXd::Zero(n, n));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      for (int xi = 0; xi < n; ++xi) out.raised2[k * n + l] += half[xi * n + l] * cometric(xi, k);
    }
  }
  return out;
}

double pair(const Eigen::MatrixXd& m, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(m * b);
}

}  // namespace

std::optional<double> sectional_ratio(double numerator, double denominator, double norm_scale) {
  if (denominator > kDegenerateSectionFloor * norm_scale) return numerator / denominator;
  return std::nullopt;
}

Eigen::MatrixXd invert_cometric(const Eigen::MatrixXd& cometric) {
  Eigen::LLT<Eigen::MatrixXd> llt(cometric);
  if (llt.info() != Eigen::Success) throw DegenerateConfiguration("cometric is not positive definite");
  if (!(llt.rcond() * kConditionLimit >= 1.0)) {
    throw DegenerateConfiguration("cometric condition estimate exceeds 1e12");
  }
  const auto n = cometric.rows();
  Eigen::MatrixXd metric = llt.solve(Eigen::MatrixXd::Identity(n, n));
  return 0.5 * (metric + metric.transpose());
}

double denominator(const CometricModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& alpha,
                   const Eigen::VectorXd& beta) {
  check_covectors(model, x, alpha, beta);
  const Eigen::MatrixXd q = model.cometric(x);
  const double aa = pair(q, alpha, alpha);
  const double bb = pair(q, beta, beta);
  const double ab = pair(q, alpha, beta);
  return std::max(0.0, aa * bb - ab * ab);
}

CurvatureReport mario_numerator(const CometricModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& alpha,
                                 const Eigen::VectorXd& beta) {
  check_covectors(model, x, alpha, beta);
  const int n = model.dim();
  const Eigen::MatrixXd q = model.cometric(x);
  const Eigen::MatrixXd metric = invert_cometric(q);
  const CometricPartials partials = model.partials(x);
  const ContractedPartials c = contract(q, partials);
  const Eigen::MatrixXd w = alpha * beta.transpose() - beta * alpha.transpose();

  CurvatureReport report;

  // R1 = 1/2 W_ur g^{su,rv} W_sv
  double r1 = 0.0;
  for (int r = 0; r < n; ++r) {
    for (int v = 0; v < n; ++v) {
      const Eigen::MatrixXd& g = c.raised2[r * n + v];  // (s, u)
      for (int u = 0; u < n; ++u) {
        if (w(u, r) == 0.0) continue;
        r1 += w(u, r) * g.col(u).dot(w.col(v));
      }
    }
  }
  report.r1 = 0.5 * r1;

  // R2 = 1/2 W_ur d_rho g^{us} g^{rho r,v} W_sv
  double r2 = 0.0;
  for (int rho = 0; rho < n; ++rho) {
    const Eigen::MatrixXd left = partials.first[rho] * w;  // (u, v) = sum_s d_rho g^{us} W_sv
    for (int v = 0; v < n; ++v) {
      // sum_r W_ur g^{rho r, v}
      const Eigen::VectorXd right = w * c.raised1[v].row(rho).transpose();
      r2 += right.dot(left.col(v));
    }
  }
  report.r2 = 0.5 * r2;

  // R3 = -1/8 W_ur d_sigma g^{us} g^{rv,sigma} W_sv
  double r3 = 0.0;
  for (int sigma = 0; sigma < n; ++sigma) {
    r3 += (w * c.raised1[sigma] * w.transpose() * partials.first[sigma]).trace();
  }
  report.r3 = -0.125 * r3;

  // R4 = -3/4 h^T g h with h_lambda = W_ur g^{lambda u, r}
  Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
  for (int r = 0; r < n; ++r) h += c.raised1[r] * w.col(r);
  report.r4 = -0.75 * h.dot(metric * h);

  report.numerator = report.r1 + report.r2 + report.r3 + report.r4;
  const double aa = pair(q, alpha, alpha);
  const double bb = pair(q, beta, beta);
  const double ab = pair(q, alpha, beta);
  report.denominator = std::max(0.0, aa * bb - ab * ab);
  report.sectional = sectional_ratio(report.numerator, report.denominator, aa * bb);
  return report;
}

Tensor4 riemann_tensor(const CometricModel& model, const Eigen::VectorXd& x) {
  const int n = model.dim();
  if (x.size() != n) throw InvalidInput("point dimension does not match the model");
  const Eigen::MatrixXd q = model.cometric(x);
  const Eigen::MatrixXd g = invert_cometric(q);
  const CometricPartials partials = model.partials(x);

  // d_k g = -g (d_k Q) g;  d_k d_m g = g (Q_m g Q_k + Q_k g Q_m - Q_km) g.
  Matrices metric_d1(static_cast<std::size_t>(n));
  Matrices lifted(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    lifted[k] = g * partials.first[k];
    metric_d1[k] = -lifted[k] * g;
  }
  Matrices metric_d2(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    for (int m = 0; m < n; ++m) {
      metric_d2[k * n + m] = (lifted[m] * lifted[k] + lifted[k] * lifted[m]) * g - g * partials.d2(k, m) * g;
    }
  }
  auto dg = [&](int i, int j, int k) { return metric_d1[k](i, j); };
  auto ddg = [&](int i, int j, int k, int m) { return metric_d2[k * n + m](i, j); };

  // first_kind(i, j, l) = 1/2 (g_il,j + g_jl,i - g_ij,l); second_kind(k, i, j) = g^{kl} first_kind(i, j, l)
  std::vector<double> first_kind(static_cast<std::size_t>(n) * n * n);
  std::vector<double> second_kind(static_cast<std::size_t>(n) * n * n, 0.0);
  auto fk = [&](int i, int j, int l) -> double& { return first_kind[(static_cast<std::size_t>(i) * n + j) * n + l]; };
  auto sk = [&](int k, int i, int j) -> double& { return second_kind[(static_cast<std::size_t>(k) * n + i) * n + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l < n; ++l) fk(i, j, l) = 0.5 * (dg(i, l, j) + dg(j, l, i) - dg(i, j, l));
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l) sum += q(k, l) * fk(i, j, l);
        sk(k, i, j) = sum;
      }
    }
  }

  // 2 R_ijkm = g_ik,jm + g_jm,ik - g_jk,im - g_im,jk + 2 G^a_ik G^b_jm g_ab - 2 G^a_jk G^b_im g_ab,
  // with G^a_ik g_ab = first_kind(i, k, b).
  Tensor4 out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) {
          double quad = 0.0;
          for (int b = 0; b < n; ++b) quad += fk(i, k, b) * sk(b, j, m) - fk(j, k, b) * sk(b, i, m);
          out(i, j, k, m) = 0.5 * (ddg(i, k, j, m) + ddg(j, m, i, k) - ddg(j, k, i, m) - ddg(i, m, j, k)) + quad;
        }
      }
    }
  }
  return out;
}

double classical_numerator(const CometricModel& model, const Eigen::VectorXd& x, const Eigen::VectorXd& alpha,
                           const Eigen::VectorXd& beta) {
  check_covectors(model, x, alpha, beta);
  const int n = model.dim();
  const Eigen::MatrixXd q = model.cometric(x);
  const Eigen::VectorXd vx = q * alpha;
  const Eigen::VectorXd vy = q * beta;
  const Tensor4 r = riemann_tensor(model, x);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double xy = vx(i) * vy(j);
      if (xy == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        for (int m = 0; m < n; ++m) sum += r(i, j, k, m) * xy * vy(k) * vx(m);
      }
    }
  }
  return sum;
}

Tensor4 dual_curvature_tensor(const CometricModel& model, const Eigen::VectorXd& x) {
  const int n = model.dim();
  if (x.size() != n) throw InvalidInput("point dimension does not match the model");
  const Eigen::MatrixXd q = model.cometric(x);
  const Eigen::MatrixXd g = invert_cometric(q);
  const CometricPartials partials = model.partials(x);
  const ContractedPartials c = contract(q, partials);
  auto d1 = [&](int i, int j, int k) { return c.raised1[k](i, j); };
  auto d2 = [&](int i, int j, int k, int l) { return c.raised2[k * n + l](i, j); };

  // Dual Christoffel symbols chris(u, r, s) = -1/2 g_{u phi} (g^{s phi,r} + g^{r phi,s} - g^{rs,phi}).
  std::vector<double> chris(static_cast<std::size_t>(n) * n * n, 0.0);
  auto ch = [&](int u, int r, int s) -> double& { return chris[(static_cast<std::size_t>(u) * n + r) * n + s]; };
  for (int r = 0; r < n; ++r) {
    for (int s = 0; s < n; ++s) {
      Eigen::VectorXd bracket(n);
      for (int phi = 0; phi < n; ++phi) bracket(phi) = d1(s, phi, r) + d1(r, phi, s) - d1(r, s, phi);
      const Eigen::VectorXd lowered = -0.5 * g * bracket;
      for (int u = 0; u < n; ++u) ch(u, r, s) = lowered(u);
    }
  }
  // chris_raised(sigma, u, s) = g^{rho sigma} chris(rho, u, s)
  std::vector<double> chris_raised(static_cast<std::size_t>(n) * n * n, 0.0);
  auto chr = [&](int sg, int u, int s) -> double& {
    return chris_raised[(static_cast<std::size_t>(sg) * n + u) * n + s];
  };
  for (int sg = 0; sg < n; ++sg) {
    for (int u = 0; u < n; ++u) {
      for (int s = 0; s < n; ++s) {
        double sum = 0.0;
        for (int rho = 0; rho < n; ++rho) sum += q(rho, sg) * ch(rho, u, s);
        chr(sg, u, s) = sum;
      }
    }
  }
  // bridge(a, b, c, d) = g^{a lambda,b} g_{lambda mu} g^{mu c,d}
  Tensor4 bridge(n);
  for (int b = 0; b < n; ++b) {
    const Eigen::MatrixXd left = c.raised1[b] * g;  // (a, mu)
    for (int dd = 0; dd < n; ++dd) {
      const Eigen::MatrixXd full = left * c.raised1[dd];  // (a, c)
      for (int a = 0; a < n; ++a) {
        for (int cc = 0; cc < n; ++cc) bridge(a, b, cc, dd) = full(a, cc);
      }
    }
  }

  Tensor4 out(n);
  for (int u = 0; u < n; ++u) {
    for (int r = 0; r < n; ++r) {
      for (int s = 0; s < n; ++s) {
        for (int v = 0; v < n; ++v) {
          double quad = 0.0;
          for (int sg = 0; sg < n; ++sg) quad += ch(sg, r, v) * chr(sg, u, s) - ch(sg, r, s) * chr(sg, u, v);
          const double twice = -d2(u, s, r, v) - d2(r, v, u, s) + d2(r, s, u, v) + d2(u, v, r, s) + 2.0 * quad +
                               bridge(r, u, v, s) - bridge(r, u, s, v) + bridge(u, r, s, v) - bridge(u, r, v, s) +
                               bridge(r, s, v, u) + bridge(u, v, s, r) - bridge(r, v, s, u) - bridge(u, s, v, r);
          out(u, r, s, v) = 0.5 * twice;
        }
      }
    }
  }
  return out;
}

}  // namespace lmgeo
