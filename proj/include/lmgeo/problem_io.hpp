#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lmgeo/curvature_engine.hpp"
#include "lmgeo/kernels.hpp"
#include "lmgeo/manifold.hpp"

namespace lmgeo {

/// Axis-aligned lattice of passive points.
struct GridSpec {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  std::vector<int> counts;

  /// Points in row-major lattice order (last axis fastest).
  [[nodiscard]] Eigen::MatrixXd points() const;
};

/// Problem file contents. Every field is optional at parse time; commands check what they need.
struct ProblemSpec {
  std::optional<KernelSpec> kernel;
  SmoothingParam lambda = SmoothingParam::exact();
  std::optional<Eigen::MatrixXd> q;
  std::optional<Eigen::MatrixXd> p;
  std::optional<Eigen::MatrixXd> alpha;
  std::optional<Eigen::MatrixXd> beta;
  std::optional<Eigen::MatrixXd> passive;
  std::optional<GridSpec> grid;
  std::optional<double> t_end;
  std::optional<int> steps;
};

/// `{"family":"gaussian","scale":1.0}` or `{"family":"matern","scale":1.0,"order":"3/2"}`.
[[nodiscard]] KernelSpec parse_kernel_text(const std::string& text);
/// Inline JSON (starts with '{') or a path to a JSON file.
[[nodiscard]] KernelSpec load_kernel(const std::string& path_or_inline);

[[nodiscard]] ProblemSpec parse_problem_text(const std::string& text);
[[nodiscard]] ProblemSpec load_problem(const std::string& path);

[[nodiscard]] std::string read_text_file(const std::string& path);

/// Flat JSON object writer with 17-significant-digit numbers and null for missing values.
class JsonObjectWriter {
 public:
  JsonObjectWriter& number(const std::string& key, std::optional<double> value);
  JsonObjectWriter& integer(const std::string& key, long long value);
  JsonObjectWriter& text(const std::string& key, const std::string& value);
  JsonObjectWriter& boolean(const std::string& key, bool value);
  JsonObjectWriter& numbers(const std::string& key, const std::vector<double>& values);
  JsonObjectWriter& null(const std::string& key);
  [[nodiscard]] std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

[[nodiscard]] std::string report_json(const CurvatureReport& report);

}  // namespace lmgeo
