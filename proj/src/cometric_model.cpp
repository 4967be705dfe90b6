#include "lmgeo/cometric_model.hpp"

#include <cmath>

#include "lmgeo/errors.hpp"

namespace lmgeo {
namespace {

CometricPartials zero_partials(int n) {
  CometricPartials out;
  out.first.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
  out.second.assign(static_cast<std::size_t>(n) * n, Eigen::MatrixXd::Zero(n, n));
  return out;
}

void check_point(const CometricModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) throw InvalidInput("point dimension does not match the model");
}

}  // namespace

EuclideanModel::EuclideanModel(int dim) : cometric_(Eigen::MatrixXd::Identity(dim, dim)) {
  if (dim < 1) throw InvalidInput("model dimension must be positive");
}

EuclideanModel::EuclideanModel(Eigen::MatrixXd constant_cometric) : cometric_(std::move(constant_cometric)) {
  if (cometric_.rows() < 1 || cometric_.rows() != cometric_.cols()) {
    throw InvalidInput("constant cometric must be square");
  }
}

Eigen::MatrixXd EuclideanModel::cometric(const Eigen::VectorXd& x) const {
  check_point(*this, x);
  return cometric_;
}

CometricPartials EuclideanModel::partials(const Eigen::VectorXd& x) const {
  check_point(*this, x);
  return zero_partials(dim());
}

SphereModel::SphereModel(double radius) : radius_(radius) {
  if (!(radius > 0.0)) throw InvalidInput("sphere radius must be positive");
}

Eigen::MatrixXd SphereModel::cometric(const Eigen::VectorXd& x) const {
  check_point(*this, x);
  const double w = 1.0 + x.squaredNorm();
  return (w * w / (4.0 * radius_ * radius_)) * Eigen::MatrixXd::Identity(2, 2);
}

CometricPartials SphereModel::partials(const Eigen::VectorXd& x) const {
  check_point(*this, x);
  const double r2 = radius_ * radius_;
  const double w = 1.0 + x.squaredNorm();
  CometricPartials out = zero_partials(2);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  for (int k = 0; k < 2; ++k) {
    out.first[static_cast<std::size_t>(k)] = (w * x(k) / r2) * id;
    for (int l = 0; l < 2; ++l) {
      const double value = (2.0 * x(k) * x(l) + (k == l ? w : 0.0)) / r2;
      out.second[static_cast<std::size_t>(k * 2 + l)] = value * id;
    }
  }
  return out;
}

HyperbolicModel::HyperbolicModel(int dim) : dim_(dim) {
  if (dim < 2) throw InvalidInput("hyperbolic model needs dimension >= 2");
}

Eigen::MatrixXd HyperbolicModel::cometric(const Eigen::VectorXd& x) const {
  check_point(*this, x);
  const double height = x(dim_ - 1);
  if (!(height > 0.0)) throw InvalidInput("point lies outside the upper half-space");
  return height * height * Eigen::MatrixXd::Identity(dim_, dim_);
}

CometricPartials HyperbolicModel::partials(const Eigen::VectorXd& x) const {
  check_point(*this, x);
  const int last = dim_ - 1;
  const double height = x(last);
  if (!(height > 0.0)) throw InvalidInput("point lies outside the upper half-space");
  CometricPartials out = zero_partials(dim_);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim_, dim_);
  out.first[static_cast<std::size_t>(last)] = 2.0 * height * id;
  out.second[static_cast<std::size_t>(last * dim_ + last)] = 2.0 * id;
  return out;
}

LandmarkModel::LandmarkModel(KernelSpec kernel, int count, int dim)
    : kernel_(kernel), count_(count), space_dim_(dim) {
  if (count < 1 || dim < 1) throw InvalidInput("landmark model needs N >= 1 and D >= 1");
  kernel_.require_smooth();
}

Eigen::VectorXd LandmarkModel::flatten(const Eigen::MatrixXd& rows) const {
  if (rows.rows() != count_ || rows.cols() != space_dim_) throw InvalidInput("array shape mismatch");
  Eigen::VectorXd flat(dim());
  for (int a = 0; a < count_; ++a) {
    for (int i = 0; i < space_dim_; ++i) flat(a * space_dim_ + i) = rows(a, i);
  }
  return flat;
}

Eigen::MatrixXd LandmarkModel::unflatten(const Eigen::VectorXd& flat) const {
  if (flat.size() != dim()) throw InvalidInput("vector length mismatch");
  Eigen::MatrixXd rows(count_, space_dim_);
  for (int a = 0; a < count_; ++a) {
    for (int i = 0; i < space_dim_; ++i) rows(a, i) = flat(a * space_dim_ + i);
  }
  return rows;
}

Eigen::MatrixXd LandmarkModel::cometric(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd q = unflatten(x);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim(), dim());
  for (int a = 0; a < count_; ++a) {
    for (int b = 0; b < count_; ++b) {
      const double value = kernel_value(kernel_, (q.row(a) - q.row(b)).transpose());
      for (int i = 0; i < space_dim_; ++i) out(a * space_dim_ + i, b * space_dim_ + i) = value;
    }
  }
  return out;
}

CometricPartials LandmarkModel::partials(const Eigen::VectorXd& x) const {
  const Eigen::MatrixXd q = unflatten(x);
  const int d = space_dim_;
  const int n = dim();
  CometricPartials out = zero_partials(n);
  for (int a = 0; a < count_; ++a) {
    for (int b = 0; b < count_; ++b) {
      if (a == b) continue;
      const Eigen::VectorXd offset = (q.row(a) - q.row(b)).transpose();
      const Eigen::VectorXd grad = grad_K(kernel_, offset);
      const Eigen::MatrixXd hess = hess_K(kernel_, offset);
      // Only c, e in {a, b} contribute, with sign +1 for a and -1 for b.
      const int movers[2] = {a, b};
      const double signs[2] = {1.0, -1.0};
      for (int mc = 0; mc < 2; ++mc) {
        for (int k = 0; k < d; ++k) {
          const int ck = movers[mc] * d + k;
          for (int i = 0; i < d; ++i) {
            out.first[static_cast<std::size_t>(ck)](a * d + i, b * d + i) = signs[mc] * grad(k);
          }
          for (int me = 0; me < 2; ++me) {
            for (int l = 0; l < d; ++l) {
              const int el = movers[me] * d + l;
              const double value = signs[mc] * signs[me] * hess(k, l);
              for (int i = 0; i < d; ++i) {
                out.second[static_cast<std::size_t>(ck) * n + el](a * d + i, b * d + i) = value;
              }
            }
          }
        }
      }
    }
  }
  return out;
}

CometricPartials fd_cometric_partials(const CometricFunction& cometric, const Eigen::VectorXd& x,
                                      FiniteDifferenceSteps steps) {
  const int n = static_cast<int>(x.size());
  const double h1 = steps.first > 0.0 ? steps.first : 1e-4 * (1.0 + x.norm());
  const double h2 = steps.second;
  if (!(h2 > 0.0)) throw InvalidInput("finite-difference step must be positive");

  CometricPartials out = zero_partials(n);
  auto shifted = [&](int k, double dk, int l, double dl) {
    Eigen::VectorXd y = x;
    y(k) += dk;
    y(l) += dl;
    return cometric(y);
  };
  for (int k = 0; k < n; ++k) {
    out.first[static_cast<std::size_t>(k)] = (shifted(k, h1, k, 0.0) - shifted(k, -h1, k, 0.0)) / (2.0 * h1);
  }
  const Eigen::MatrixXd centre = cometric(x);
  for (int k = 0; k < n; ++k) {
    out.second[static_cast<std::size_t>(k * n + k)] =
        (shifted(k, h2, k, 0.0) - 2.0 * centre + shifted(k, -h2, k, 0.0)) / (h2 * h2);
    for (int l = k + 1; l < n; ++l) {
      const Eigen::MatrixXd mixed = (shifted(k, h2, l, h2) - shifted(k, h2, l, -h2) - shifted(k, -h2, l, h2) +
                                     shifted(k, -h2, l, -h2)) /
                                    (4.0 * h2 * h2);
      out.second[static_cast<std::size_t>(k * n + l)] = mixed;
      out.second[static_cast<std::size_t>(l * n + k)] = mixed;
    }
  }
  for (auto& m : out.first) m = 0.5 * (m + m.transpose()).eval();
  for (auto& m : out.second) m = 0.5 * (m + m.transpose()).eval();
  return out;
}

FiniteDifferenceModel::FiniteDifferenceModel(int dim, CometricFunction cometric, FiniteDifferenceSteps steps)
    : dim_(dim), cometric_(std::move(cometric)), steps_(steps) {
  if (dim < 1) throw InvalidInput("model dimension must be positive");
  if (!cometric_) throw InvalidInput("cometric supplier is empty");
}

FiniteDifferenceModel::FiniteDifferenceModel(const CometricModel& base, FiniteDifferenceSteps steps)
    : FiniteDifferenceModel(
          base.dim(), [&base](const Eigen::VectorXd& y) { return base.cometric(y); }, steps) {}

CometricPartials FiniteDifferenceModel::partials(const Eigen::VectorXd& x) const {
  if (x.size() != dim_) throw InvalidInput("point dimension does not match the model");
  return fd_cometric_partials(cometric_, x, steps_);
}

}  // namespace lmgeo
