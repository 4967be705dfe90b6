#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "lmgeo/kernels.hpp"

namespace lmgeo {

/// Dense rank-4 array over an n-dimensional index range.
class Tensor4 {
 public:
  explicit Tensor4(int n) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

  [[nodiscard]] int dim() const noexcept { return n_; }
  double& operator()(int i, int j, int k, int l) { return data_[index(i, j, k, l)]; }
  double operator()(int i, int j, int k, int l) const { return data_[index(i, j, k, l)]; }

 private:
  [[nodiscard]] std::size_t index(int i, int j, int k, int l) const {
    return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
  }
  int n_;
  std::vector<double> data_;
};

/// first[k](i, j) = d_k g^{ij};  second[k * n + l](i, j) = d_k d_l g^{ij}.
struct CometricPartials {
  std::vector<Eigen::MatrixXd> first;
  std::vector<Eigen::MatrixXd> second;

  [[nodiscard]] const Eigen::MatrixXd& d2(int k, int l) const {
    return second[static_cast<std::size_t>(k) * first.size() + static_cast<std::size_t>(l)];
  }
};

/// A manifold chart presented by its cometric g^{ij}(x) and the cometric's partials.
class CometricModel {
 public:
  virtual ~CometricModel() = default;

  [[nodiscard]] virtual int dim() const = 0;
  [[nodiscard]] virtual Eigen::MatrixXd cometric(const Eigen::VectorXd& x) const = 0;
  [[nodiscard]] virtual CometricPartials partials(const Eigen::VectorXd& x) const = 0;
};

/// Constant cometric.
class EuclideanModel final : public CometricModel {
 public:
  explicit EuclideanModel(int dim);
  explicit EuclideanModel(Eigen::MatrixXd constant_cometric);

  [[nodiscard]] int dim() const override { return static_cast<int>(cometric_.rows()); }
  [[nodiscard]] Eigen::MatrixXd cometric(const Eigen::VectorXd& x) const override;
  [[nodiscard]] CometricPartials partials(const Eigen::VectorXd& x) const override;

 private:
  Eigen::MatrixXd cometric_;
};

/// Round 2-sphere of the given radius in stereographic coordinates:
/// g^{ij} = (1 + |x|^2)^2 / (4 r^2) delta^{ij}.
class SphereModel final : public CometricModel {
 public:
  explicit SphereModel(double radius);

  [[nodiscard]] int dim() const override { return 2; }
  [[nodiscard]] Eigen::MatrixXd cometric(const Eigen::VectorXd& x) const override;
  [[nodiscard]] CometricPartials partials(const Eigen::VectorXd& x) const override;

 private:
  double radius_;
};

/// Upper half-space {x_n > 0} with g^{ij} = x_n^2 delta^{ij}.
class HyperbolicModel final : public CometricModel {
 public:
  explicit HyperbolicModel(int dim = 2);

  [[nodiscard]] int dim() const override { return dim_; }
  [[nodiscard]] Eigen::MatrixXd cometric(const Eigen::VectorXd& x) const override;
  [[nodiscard]] CometricPartials partials(const Eigen::VectorXd& x) const override;

 private:
  int dim_;
};

/// Landmark manifold L^N(R^D) (exact matching). Coordinates are flattened as
/// x[a * D + i] = q^{ai}.
class LandmarkModel final : public CometricModel {
 public:
  LandmarkModel(KernelSpec kernel, int count, int dim);

  [[nodiscard]] int dim() const override { return count_ * space_dim_; }
  [[nodiscard]] Eigen::MatrixXd cometric(const Eigen::VectorXd& x) const override;
  [[nodiscard]] CometricPartials partials(const Eigen::VectorXd& x) const override;

  [[nodiscard]] int count() const noexcept { return count_; }
  [[nodiscard]] int space_dim() const noexcept { return space_dim_; }
  [[nodiscard]] const KernelSpec& kernel() const noexcept { return kernel_; }

  /// Flatten an N x D array into the model's coordinate order.
  [[nodiscard]] Eigen::VectorXd flatten(const Eigen::MatrixXd& rows) const;
  [[nodiscard]] Eigen::MatrixXd unflatten(const Eigen::VectorXd& flat) const;

 private:
  KernelSpec kernel_;
  int count_;
  int space_dim_;
};

using CometricFunction = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct FiniteDifferenceSteps {
  /// First-derivative step; non-positive selects 1e-4 * (1 + |x|).
  double first = -1.0;
  double second = 1e-3;
};

/// Central first differences and central second differences (symmetrized in k, l).
[[nodiscard]] CometricPartials fd_cometric_partials(const CometricFunction& cometric, const Eigen::VectorXd& x,
                                                    FiniteDifferenceSteps steps = {});

/// Wraps a cometric supplier and derives its partials by finite differences.
class FiniteDifferenceModel final : public CometricModel {
 public:
  FiniteDifferenceModel(int dim, CometricFunction cometric, FiniteDifferenceSteps steps = {});
  /// Uses only base.cometric(); base must outlive this model.
  explicit FiniteDifferenceModel(const CometricModel& base, FiniteDifferenceSteps steps = {});

  [[nodiscard]] int dim() const override { return dim_; }
  [[nodiscard]] Eigen::MatrixXd cometric(const Eigen::VectorXd& x) const override { return cometric_(x); }
  [[nodiscard]] CometricPartials partials(const Eigen::VectorXd& x) const override;

 private:
  int dim_;
  CometricFunction cometric_;
  FiniteDifferenceSteps steps_;
};

}  // namespace lmgeo
