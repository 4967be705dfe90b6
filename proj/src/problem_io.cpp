#include "lmgeo/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "lmgeo/errors.hpp"
#include "lmgeo/format.hpp"

namespace lmgeo {
namespace {

using json = nlohmann::json;

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

void reject_unknown(const json& object, const std::set<std::string>& allowed, const char* what) {
  if (!object.is_object()) throw InvalidInput(std::string(what) + " must be a JSON object");
  for (const auto& item : object.items()) {
    if (allowed.count(item.key()) == 0) {
      throw InvalidInput(std::string("unknown field '") + item.key() + "' in " + what);
    }
  }
}

double as_number(const json& value, const std::string& what) {
  if (!value.is_number()) throw InvalidInput(what + " must be a number");
  return value.get<double>();
}

Eigen::VectorXd as_vector(const json& value, const std::string& what) {
  if (!value.is_array() || value.empty()) throw InvalidInput(what + " must be a non-empty array of numbers");
  Eigen::VectorXd out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) out(static_cast<Eigen::Index>(i)) = as_number(value[i], what);
  return out;
}

Eigen::MatrixXd as_matrix(const json& value, const std::string& what) {
  if (!value.is_array() || value.empty()) throw InvalidInput(what + " must be a non-empty array of rows");
  const std::size_t rows = value.size();
  const std::size_t cols = value[0].is_array() ? value[0].size() : 0;
  if (cols == 0) throw InvalidInput(what + " rows must be non-empty arrays");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!value[r].is_array() || value[r].size() != cols) throw InvalidInput(what + " is not rectangular");
    for (std::size_t c = 0; c < cols; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = as_number(value[r][c], what);
    }
  }
  if (!out.allFinite()) throw InvalidInput(what + " contains non-finite values");
  return out;
}

KernelSpec kernel_from_json(const json& object) {
  reject_unknown(object, {"family", "scale", "order"}, "kernel");
  if (!object.contains("family") || !object["family"].is_string()) {
    throw InvalidInput("kernel needs a string 'family'");
  }
  const std::string family = object["family"].get<std::string>();
  const double scale = object.contains("scale") ? as_number(object["scale"], "kernel scale") : 1.0;
  if (family != "matern" && object.contains("order")) throw InvalidInput("'order' applies to the matern family only");
  if (family == "gaussian") return KernelSpec::gaussian(scale);
  if (family == "cauchy") return KernelSpec::cauchy(scale);
  if (family == "plateau") return KernelSpec::plateau(scale);
  if (family == "matern") {
    if (!object.contains("order")) throw InvalidInput("matern kernel needs an 'order'");
    const json& order = object["order"];
    if (!order.is_string()) throw InvalidInput("matern order must be a string such as \"3/2\"");
    return KernelSpec::matern(parse_matern_order(order.get<std::string>()), scale);
  }
  throw InvalidInput("unknown kernel family '" + family + "'");
}

}  // namespace

Eigen::MatrixXd GridSpec::points() const {
  const auto dim = lower.size();
  if (upper.size() != dim || static_cast<Eigen::Index>(counts.size()) != dim) {
    throw InvalidInput("grid bounds and counts must share one dimension");
  }
  long long total = 1;
  for (int c : counts) {
    if (c < 1) throw InvalidInput("grid counts must be positive");
    total *= c;
  }
  if (total > 10'000'000) throw InvalidInput("grid is too large");
  Eigen::MatrixXd out(total, dim);
  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    for (Eigen::Index axis = dim - 1; axis >= 0; --axis) {
      const int c = counts[static_cast<std::size_t>(axis)];
      const long long k = rest % c;
      rest /= c;
      out(idx, axis) = (c == 1) ? lower(axis) : lower(axis) + (upper(axis) - lower(axis)) * k / (c - 1);
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

KernelSpec parse_kernel_text(const std::string& text) { return kernel_from_json(parse_json(text, "kernel")); }

KernelSpec load_kernel(const std::string& path_or_inline) {
  const auto first = path_or_inline.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && path_or_inline[first] == '{') return parse_kernel_text(path_or_inline);
  return parse_kernel_text(read_text_file(path_or_inline));
}

ProblemSpec parse_problem_text(const std::string& text) {
  const json root = parse_json(text, "problem");
  reject_unknown(root, {"kernel", "lambda", "q", "p", "alpha", "beta", "passive", "grid", "t_end", "steps"},
                 "problem");
  ProblemSpec spec;
  if (root.contains("kernel")) spec.kernel = kernel_from_json(root["kernel"]);
  if (root.contains("lambda")) {
    const json& lambda = root["lambda"];
    if (lambda.is_string()) {
      if (lambda.get<std::string>() != "inf") throw InvalidInput("lambda must be a number or \"inf\"");
    } else {
      spec.lambda = SmoothingParam::finite(as_number(lambda, "lambda"));
    }
  }
  auto matrix_field = [&](const char* key, std::optional<Eigen::MatrixXd>& target) {
    if (root.contains(key)) target = as_matrix(root[key], key);
  };
  matrix_field("q", spec.q);
  matrix_field("p", spec.p);
  matrix_field("alpha", spec.alpha);
  matrix_field("beta", spec.beta);
  matrix_field("passive", spec.passive);
  if (root.contains("grid")) {
    const json& grid = root["grid"];
    reject_unknown(grid, {"lower", "upper", "counts"}, "grid");
    if (!grid.contains("lower") || !grid.contains("upper") || !grid.contains("counts")) {
      throw InvalidInput("grid needs 'lower', 'upper' and 'counts'");
    }
    GridSpec g{as_vector(grid["lower"], "grid lower"), as_vector(grid["upper"], "grid upper"), {}};
    for (const json& c : grid["counts"]) {
      if (!c.is_number_integer()) throw InvalidInput("grid counts must be integers");
      g.counts.push_back(c.get<int>());
    }
    (void)g.points();
    spec.grid = std::move(g);
  }
  if (root.contains("t_end")) spec.t_end = as_number(root["t_end"], "t_end");
  if (root.contains("steps")) {
    if (!root["steps"].is_number_integer()) throw InvalidInput("steps must be an integer");
    spec.steps = root["steps"].get<int>();
  }
  const auto shape_check = [&](const std::optional<Eigen::MatrixXd>& m, const char* name) {
    if (m && spec.q && (m->rows() != spec.q->rows() || m->cols() != spec.q->cols())) {
      throw InvalidInput(std::string(name) + " must have the same shape as q");
    }
  };
  shape_check(spec.p, "p");
  shape_check(spec.alpha, "alpha");
  shape_check(spec.beta, "beta");
  if (spec.passive && spec.q && spec.passive->cols() != spec.q->cols()) {
    throw InvalidInput("passive points must have the same dimension as q");
  }
  return spec;
}

ProblemSpec load_problem(const std::string& path) { return parse_problem_text(read_text_file(path)); }

JsonObjectWriter& JsonObjectWriter::number(const std::string& key, std::optional<double> value) {
  if (!value || !std::isfinite(*value)) return null(key);
  fields_.emplace_back(key, format_number(*value));
  return *this;
}

JsonObjectWriter& JsonObjectWriter::integer(const std::string& key, long long value) {
  fields_.emplace_back(key, std::to_string(value));
  return *this;
}

JsonObjectWriter& JsonObjectWriter::text(const std::string& key, const std::string& value) {
  fields_.emplace_back(key, json(value).dump());
  return *this;
}

JsonObjectWriter& JsonObjectWriter::boolean(const std::string& key, bool value) {
  fields_.emplace_back(key, value ? "true" : "false");
  return *this;
}

JsonObjectWriter& JsonObjectWriter::numbers(const std::string& key, const std::vector<double>& values) {
  std::string out = "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::isfinite(values[i]) ? format_number(values[i]) : "null";
  }
  fields_.emplace_back(key, out + "]");
  return *this;
}

JsonObjectWriter& JsonObjectWriter::null(const std::string& key) {
  fields_.emplace_back(key, "null");
  return *this;
}

std::string JsonObjectWriter::str() const {
  std::string out = "{";
  for (std::size_t i = 0; i < fields_.size(); ++i) {
    if (i > 0) out += ',';
    out += json(fields_[i].first).dump() + ':' + fields_[i].second;
  }
  return out + "}";
}

std::string report_json(const CurvatureReport& report) {
  return JsonObjectWriter()
      .number("r1", report.r1)
      .number("r2", report.r2)
      .number("r3", report.r3)
      .number("r4", report.r4)
      .number("numerator", report.numerator)
      .number("denominator", report.denominator)
      .number("sectional", report.sectional)
      .str();
}

}  // namespace lmgeo
