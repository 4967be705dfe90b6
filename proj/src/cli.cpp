#include "lmgeo/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "lmgeo/errors.hpp"
#include "lmgeo/format.hpp"
#include "lmgeo/geodesics.hpp"
#include "lmgeo/landmark_curvature.hpp"
#include "lmgeo/oracle_suite.hpp"
#include "lmgeo/problem_io.hpp"
#include "lmgeo/two_point.hpp"

namespace lmgeo {
namespace {

struct Options {
  std::string kernel_json;
  std::string family = "gaussian";
  double scale = 1.0;
  std::string order = "3/2";
  std::string problem;
  std::string out;
  std::string gamma_out;
  std::optional<int> steps;
  std::optional<double> t_end;
  std::uint64_t seed = 0;
  int trials = 50;
  std::optional<double> tol;
  std::optional<double> rho_max;
  std::optional<double> rho_step;
  int every = 0;
};

KernelSpec resolve_kernel(const Options& opt, const ProblemSpec* problem) {
  if (!opt.kernel_json.empty()) return load_kernel(opt.kernel_json);
  if (problem != nullptr && problem->kernel) return *problem->kernel;
  std::ostringstream inline_json;
  inline_json << "{\"family\":\"" << opt.family << "\",\"scale\":" << format_number(opt.scale);
  if (opt.family == "matern") inline_json << ",\"order\":\"" << opt.order << "\"";
  inline_json << "}";
  return parse_kernel_text(inline_json.str());
}

ProblemSpec require_problem(const Options& opt) {
  if (opt.problem.empty()) throw InvalidInput("--problem is required for this command");
  return load_problem(opt.problem);
}

const Eigen::MatrixXd& require_field(const std::optional<Eigen::MatrixXd>& field, const char* name) {
  if (!field) throw InvalidInput(std::string("problem is missing '") + name + "'");
  return *field;
}

/// Writes to --out if given, otherwise to the fallback stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidInput("cannot open output file '" + path + "'");
      stream_ = &file_;
    }
  }
  std::ostream& stream() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int horizon_steps(const Options& opt, const ProblemSpec& problem, int fallback) {
  const int steps = opt.steps.value_or(problem.steps.value_or(fallback));
  if (steps < 1) throw InvalidInput("steps must be positive");
  return steps;
}

double horizon_time(const Options& opt, const ProblemSpec& problem, double fallback) {
  const double t = opt.t_end.value_or(problem.t_end.value_or(fallback));
  if (!std::isfinite(t)) throw InvalidInput("t_end must be finite");
  return t;
}

int cmd_kernel_table(const Options& opt, std::ostream& out) {
  const KernelSpec kernel = resolve_kernel(opt, nullptr);
  const double rho_max = opt.rho_max.value_or(5.0 * kernel.scale());
  const double rho_step = opt.rho_step.value_or(0.01 * kernel.scale());
  if (!(rho_max > 0.0) || !(rho_step > 0.0)) throw InvalidInput("--rho-max and --rho-step must be positive");
  const long long count = std::llround(rho_max / rho_step);
  if (count < 1 || count > 10'000'000) throw InvalidInput("radius grid size out of range");
  std::vector<double> radii;
  radii.reserve(static_cast<std::size_t>(count));
  for (long long i = 1; i <= count; ++i) radii.push_back(rho_max * static_cast<double>(i) / static_cast<double>(count));

  Sink sink(opt.out, out);
  write_coefficient_table(sink.stream(), kernel, radii);
  if (!opt.gamma_out.empty()) {
    std::ofstream gamma_file(opt.gamma_out);
    if (!gamma_file) throw InvalidInput("cannot open output file '" + opt.gamma_out + "'");
    gamma_file << "rho,gamma,dgamma,ddgamma\n";
    for (double rho : radii) {
      const GammaDerivs g = gamma_derivs(kernel, rho);
      gamma_file << format_number(rho) << ',' << format_number(g.value) << ',' << format_number(g.first) << ','
                 << format_number(g.second) << '\n';
    }
  }
  return kExitOk;
}

int cmd_curvature(const Options& opt, std::ostream& out) {
  const ProblemSpec problem = require_problem(opt);
  const KernelSpec kernel = resolve_kernel(opt, &problem);
  const LandmarkConfig config(require_field(problem.q, "q"));
  const Covector alpha(require_field(problem.alpha, "alpha"));
  const Covector beta(require_field(problem.beta, "beta"));
  if (!problem.lambda.is_exact()) throw InvalidInput("curvature is defined for exact matching (lambda = inf) only");
  const CurvatureReport report = curvature_terms(config, kernel, alpha, beta);
  Sink sink(opt.out, out);
  sink.stream() << report_json(report) << '\n';
  return kExitOk;
}

int cmd_geodesic(const Options& opt, std::ostream& out, std::ostream& err) {
  const ProblemSpec problem = require_problem(opt);
  const KernelSpec kernel = resolve_kernel(opt, &problem);
  if (!problem.lambda.is_exact()) throw InvalidInput("geodesics are defined for exact matching (lambda = inf) only");
  const LandmarkConfig config(require_field(problem.q, "q"));
  const Covector p(require_field(problem.p, "p"));
  const double t_end = horizon_time(opt, problem, 1.0);
  const int steps = horizon_steps(opt, problem, 1000);
  const GeodesicPath path = integrate(config, p, kernel, t_end, steps);

  Sink sink(opt.out, out);
  write_path_csv(sink.stream(), path);
  const std::string summary = JsonObjectWriter()
                                  .number("t_end", t_end)
                                  .integer("steps", steps)
                                  .number("hamiltonian", path.hamiltonian_samples.front())
                                  .number("relative_energy_drift", path.relative_energy_drift())
                                  .number("momentum_drift", path.momentum_drift())
                                  .str();
  (opt.out.empty() ? err : out) << summary << '\n';
  return kExitOk;
}

int cmd_advect(const Options& opt, std::ostream& out) {
  const ProblemSpec problem = require_problem(opt);
  const KernelSpec kernel = resolve_kernel(opt, &problem);
  const LandmarkConfig config(require_field(problem.q, "q"));
  const Covector p(require_field(problem.p, "p"));
  Eigen::MatrixXd passive;
  if (problem.passive) {
    passive = *problem.passive;
  } else if (problem.grid) {
    passive = problem.grid->points();
  } else {
    throw InvalidInput("advect needs 'passive' points or a 'grid'");
  }
  if (passive.cols() != config.dim()) throw InvalidInput("passive points must match the landmark dimension");
  const double t_end = horizon_time(opt, problem, 1.0);
  const int steps = horizon_steps(opt, problem, 1000);
  const int every = opt.every > 0 ? opt.every : steps;

  const GeodesicPath path = integrate(config, p, kernel, t_end, steps);
  const std::vector<Eigen::MatrixXd> tracks = advect(path, kernel, passive);

  Sink sink(opt.out, out);
  std::ostream& csv = sink.stream();
  csv << "t,point";
  for (Eigen::Index i = 1; i <= passive.cols(); ++i) csv << ",x_" << i;
  csv << '\n';
  for (std::size_t s = 0; s < tracks.size(); ++s) {
    if (s % static_cast<std::size_t>(every) != 0 && s + 1 != tracks.size()) continue;
    for (Eigen::Index m = 0; m < passive.rows(); ++m) {
      csv << format_number(path.times[s]) << ',' << (m + 1);
      for (Eigen::Index i = 0; i < passive.cols(); ++i) csv << ',' << format_number(tracks[s](m, i));
      csv << '\n';
    }
  }
  return kExitOk;
}

int cmd_two_point(const Options& opt, std::ostream& out, std::ostream& err) {
  const ProblemSpec problem = require_problem(opt);
  const KernelSpec kernel = resolve_kernel(opt, &problem);
  const Eigen::MatrixXd& q = require_field(problem.q, "q");
  const Eigen::MatrixXd& p = require_field(problem.p, "p");
  if (q.rows() != 2) throw InvalidInput("two-point problems need exactly two landmarks");
  const double t_end = horizon_time(opt, problem, 0.5);
  const int steps = horizon_steps(opt, problem, 5000);
  const double tol = opt.tol.value_or(1e-9);

  const TwoPointState state = to_mean_diff(q.row(0).transpose(), q.row(1).transpose(), p.row(0).transpose(),
                                           p.row(1).transpose());
  const ConservedSet invariants = conserved(state, kernel);
  JsonObjectWriter summary;
  summary.number("energy", invariants.energy)
      .numbers("pbar", std::vector<double>(invariants.pbar.data(), invariants.pbar.data() + invariants.pbar.size()))
      .number("omega", invariants.omega);
  try {
    summary.text("classification", to_string(classify(state, kernel)));
  } catch (const NumericalFailure& e) {
    summary.null("classification").text("classification_note", e.what());
  }

  const TwoPointSolution solution = solve_two_point(state, kernel, t_end, tol);
  const GeodesicPath path = integrate(LandmarkConfig(q), Covector(p), kernel, t_end, steps);
  double residual = 0.0;
  Sink sink(opt.out, out);
  std::ostream& csv = sink.stream();
  csv << "t,rho,theta";
  for (Eigen::Index i = 1; i <= q.cols(); ++i) csv << ",qbar_" << i;
  csv << '\n';
  for (std::size_t s = 0; s < path.size(); ++s) {
    const double t = path.times[s];
    const auto [q1, q2] = solution.positions(t);
    residual = std::max({residual, (q1 - path.q_samples[s].row(0).transpose()).norm(),
                         (q2 - path.q_samples[s].row(1).transpose()).norm()});
    csv << format_number(t) << ',' << format_number(solution.rho(t)) << ',' << format_number(solution.theta(t));
    const Eigen::VectorXd centre = solution.qbar(t);
    for (Eigen::Index i = 0; i < centre.size(); ++i) csv << ',' << format_number(centre(i));
    csv << '\n';
  }
  summary.number("t_end", t_end)
      .integer("steps", steps)
      .number("quadrature_ode_residual", residual)
      .numbers("turning_times", solution.turning_times());
  (opt.out.empty() ? err : out) << summary.str() << '\n';
  return kExitOk;
}

int cmd_oracle(const Options& opt, std::ostream& out) {
  const double threshold = opt.tol.value_or(1e-8);
  const OracleSummary summary = run_oracle_suite(opt.trials, opt.seed);
  const bool passed = summary.max_residual <= threshold;
  Sink sink(opt.out, out);
  sink.stream() << JsonObjectWriter()
                       .integer("trials", opt.trials)
                       .integer("seed", static_cast<long long>(opt.seed))
                       .integer("sections", summary.sections)
                       .number("max_residual", summary.max_residual)
                       .number("threshold", threshold)
                       .boolean("passed", passed)
                       .str()
                << '\n';
  return passed ? kExitOk : kExitOracleResidual;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Geodesics and sectional curvature on landmark manifolds", "lmgeo"};
  app.require_subcommand(1);
  Options opt;

  auto add_kernel = [&](CLI::App* cmd) {
    cmd->add_option("--kernel-json", opt.kernel_json, "Kernel JSON (inline or path)");
    cmd->add_option("--family", opt.family, "Kernel family when no kernel JSON is given")
        ->check(CLI::IsMember({"gaussian", "matern", "cauchy", "plateau"}));
    cmd->add_option("--scale", opt.scale, "Kernel length scale");
    cmd->add_option("--order", opt.order, "Matern order: 1/2, 3/2, 5/2 or 7/2");
  };
  auto add_problem = [&](CLI::App* cmd) { cmd->add_option("--problem", opt.problem, "Problem JSON path"); };
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("--out", opt.out, "Output path (default stdout)"); };
  auto add_horizon = [&](CLI::App* cmd) {
    cmd->add_option("--steps", opt.steps, "RK4 step count");
    cmd->add_option("--t-end", opt.t_end, "Integration horizon");
  };

  CLI::App* table = app.add_subcommand("kernel-table", "Coefficient table on a radius grid");
  add_kernel(table);
  add_out(table);
  table->add_option("--rho-max", opt.rho_max, "Largest radius (default 5 * scale)");
  table->add_option("--rho-step", opt.rho_step, "Radius spacing (default 0.01 * scale)");
  table->add_option("--gamma-out", opt.gamma_out, "Also write rho,gamma,dgamma,ddgamma to this path");

  CLI::App* curvature = app.add_subcommand("curvature", "Curvature report for (q, alpha, beta)");
  add_kernel(curvature);
  add_problem(curvature);
  add_out(curvature);

  CLI::App* geodesic = app.add_subcommand("geodesic", "Integrate a geodesic from (q, p)");
  add_kernel(geodesic);
  add_problem(geodesic);
  add_out(geodesic);
  add_horizon(geodesic);

  CLI::App* advect_cmd = app.add_subcommand("advect", "Carry passive points along a geodesic");
  add_kernel(advect_cmd);
  add_problem(advect_cmd);
  add_out(advect_cmd);
  add_horizon(advect_cmd);
  advect_cmd->add_option("--every", opt.every, "Emit every k-th step (default: first and last)");

  CLI::App* two_point = app.add_subcommand("two-point", "Reduced two-landmark solution and checks");
  add_kernel(two_point);
  add_problem(two_point);
  add_out(two_point);
  add_horizon(two_point);
  two_point->add_option("--tol", opt.tol, "Quadrature tolerance (default 1e-9)");

  CLI::App* oracle = app.add_subcommand("oracle", "Mario-vs-classical curvature equivalence suite");
  add_out(oracle);
  oracle->add_option("--trials", opt.trials, "Random landmark sections")->check(CLI::NonNegativeNumber);
  oracle->add_option("--seed", opt.seed, "Seed for mt19937_64");
  oracle->add_option("--tol", opt.tol, "Residual threshold (default 1e-8)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitMalformedInput;
  }

  try {
    if (table->parsed()) return cmd_kernel_table(opt, out);
    if (curvature->parsed()) return cmd_curvature(opt, out);
    if (geodesic->parsed()) return cmd_geodesic(opt, out, err);
    if (advect_cmd->parsed()) return cmd_advect(opt, out);
    if (two_point->parsed()) return cmd_two_point(opt, out, err);
    if (oracle->parsed()) return cmd_oracle(opt, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitMalformedInput;
  } catch (const DegenerateConfiguration& e) {
    err << "degenerate configuration: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitDegenerate;
  }
  return kExitMalformedInput;
}

}  // namespace lmgeo
