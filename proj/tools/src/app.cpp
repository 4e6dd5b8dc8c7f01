#include "angenent_cli/app.hpp"

#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "angenent/convergence.hpp"
#include "angenent/errors.hpp"
#include "angenent/geometry.hpp"
#include "angenent/scenarios.hpp"
#include "angenent_cli/cli_io.hpp"

namespace angenent::cli {

namespace {

struct CommonOptions {
  std::size_t points = 0;
  double tol = SolveConfig{}.residual_tolerance;
  int max_iter = SolveConfig{}.max_iterations;
  double tau = 1.0;
  std::string out = "results";
  std::string format = "csv";
  bool svg = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts, std::size_t default_points) {
  opts.points = default_points;
  if (default_points > 0) {
    cmd->add_option("--points", opts.points, "Number of segments N")
        ->check(CLI::Range(std::size_t{3}, std::size_t{1} << 24))
        ->capture_default_str();
  }
  cmd->add_option("--tol", opts.tol, "Residual tolerance (infinity norm)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--max-iter", opts.max_iter, "Iteration cap of the nonlinear solver")
      ->check(CLI::Range(1, 1000000))
      ->capture_default_str();
  cmd->add_option("--tau", opts.tau, "Time step of the discrete Lagrangian")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out", opts.out, "Output directory")->capture_default_str();
  cmd->add_option("--format", opts.format, "Trajectory file format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_flag("--svg", opts.svg, "Also write an SVG plot");
}

SolveConfig make_config(const CommonOptions& opts) {
  SolveConfig cfg;
  cfg.residual_tolerance = opts.tol;
  cfg.max_iterations = opts.max_iter;
  return cfg;
}

Json common_parameters(const CommonOptions& opts) {
  Json p;
  p["points"] = opts.points;
  p["tol"] = opts.tol;
  p["max_iter"] = opts.max_iter;
  p["tau"] = opts.tau;
  p["out"] = opts.out;
  p["format"] = opts.format;
  p["svg"] = opts.svg;
  return p;
}

std::string fmt(double value, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

// Solves one shape and writes trajectory, summary and manifest.
template <typename Solve>
int run_shape(const std::string& shape, const CommonOptions& opts, Json parameters, Solve&& solve,
              std::ostream& out, std::ostream& err) {
  const fs::path dir = opts.out;
  const SolveConfig cfg = make_config(opts);
  RunManifest manifest;
  manifest.command = shape;
  manifest.parameters = std::move(parameters);
  manifest.solver_config = solve_config_json(cfg);

  ScenarioResult result;
  try {
    const DiscreteLagrangian dl(MetricField::angenent(), opts.tau);
    result = solve(dl, cfg);
  } catch (const Error& e) {
    err << shape << ": numerical failure: " << e.what() << '\n';
    manifest.results["converged"] = false;
    manifest.results["error"] = e.what();
    fs::create_directories(dir);
    manifest.write(dir);
    return kExitNumerical;
  }

  fs::create_directories(dir);
  const std::string traj_name = "trajectory." + opts.format;
  if (opts.format == "json") {
    write_trajectory_json(dir / traj_name, result.trajectory);
  } else {
    write_trajectory_csv(dir / traj_name, result.trajectory);
  }
  const Json summary = make_summary(shape, result, opts.tau);
  write_json(dir / "summary.json", summary);
  manifest.files = {traj_name, "summary.json"};
  if (opts.svg) {
    write_trajectory_svg(dir / "trajectory.svg", result.trajectory);
    manifest.files.push_back("trajectory.svg");
  }
  manifest.results = summary;
  manifest.write(dir);

  out << shape << ": N=" << opts.points << " entropy=" << fmt(result.entropy)
      << " converged=" << (result.report.converged ? "yes" : "no")
      << " iterations=" << result.report.iterations << '\n';
  if (!result.report.converged) {
    err << shape << ": solver did not converge (residual " << result.report.final_residual_norm << ")\n";
    return kExitNumerical;
  }
  return kExitSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete geodesics of the Angenent metric and self-shrinker entropies"};
  app.name(args.empty() ? "angenent" : args.front());
  app.require_subcommand(1);

  CommonOptions torus_opts, sphere_opts, cylinder_opts, converge_opts;
  double z_cut = kDefaultCylinderCut;

  CLI::App* torus = app.add_subcommand("torus", "Closed geodesic: the Angenent torus cross-section");
  add_common(torus, torus_opts, 2048);

  CLI::App* sphere = app.add_subcommand("sphere", "Open geodesic between (0,-2) and (0,2)");
  add_common(sphere, sphere_opts, 256);

  CLI::App* cylinder = app.add_subcommand("cylinder", "Open geodesic along r = sqrt(2)");
  add_common(cylinder, cylinder_opts, 1024);
  cylinder->add_option("--z-cut", z_cut, "Truncation height of the cylinder")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* converge = app.add_subcommand("converge", "Torus entropy over several N with extrapolation");
  add_common(converge, converge_opts, 0);
  std::vector<std::size_t> point_list{128, 256, 512, 1024, 2048};
  std::string oracle;
  converge->add_option("--points-list", point_list, "Comma-separated N values")
      ->delimiter(',')
      ->check(CLI::Range(std::size_t{3}, std::size_t{1} << 24));
  converge->add_option("--oracle", oracle, "")->check(CLI::IsMember({"quadratic"}))->group("");

  CLI::App* measure = app.add_subcommand("measure", "Entropy of a trajectory file");
  std::string input;
  bool closed = false;
  double measure_tau = 1.0;
  measure->add_option("--input", input, "Trajectory CSV or JSON file")->required()->check(CLI::ExistingFile);
  measure->add_flag("--closed", closed, "Treat a CSV trajectory as closed");
  measure->add_option("--tau", measure_tau, "Time step")->check(CLI::PositiveNumber);

  std::vector<std::string> argv_rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(argv_rest.begin(), argv_rest.end());
  try {
    app.parse(argv_rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitSuccess;
  } catch (const CLI::ParseError& e) {
    err << e.get_name() << ": " << e.what() << '\n';
    return kExitUsage;
  }

  if (*torus) {
    return run_shape("torus", torus_opts, common_parameters(torus_opts),
                     [&](const DiscreteLagrangian& dl, const SolveConfig& cfg) {
                       return solve_angenent(torus_opts.points, dl, cfg);
                     }, out, err);
  }
  if (*sphere) {
    return run_shape("sphere", sphere_opts, common_parameters(sphere_opts),
                     [&](const DiscreteLagrangian& dl, const SolveConfig& cfg) {
                       return solve_sphere(sphere_opts.points, dl, cfg);
                     }, out, err);
  }
  if (*cylinder) {
    Json params = common_parameters(cylinder_opts);
    params["z_cut"] = z_cut;
    return run_shape("cylinder", cylinder_opts, params,
                     [&](const DiscreteLagrangian& dl, const SolveConfig& cfg) {
                       return solve_cylinder(cylinder_opts.points, z_cut, dl, cfg);
                     }, out, err);
  }
  if (*measure) {
    try {
      const fs::path path = input;
      const Trajectory traj =
          path.extension() == ".json" ? read_trajectory_json(path) : read_trajectory_csv(path, closed);
      const DiscreteLagrangian dl(MetricField::angenent(), measure_tau);
      out << "entropy=" << fmt(entropy_estimate(traj, dl), 15) << " points=" << traj.size()
          << " closed=" << (traj.closed ? "yes" : "no") << '\n';
      return kExitSuccess;
    } catch (const Error& e) {
      err << "measure: " << e.what() << '\n';
      return kExitUsage;
    }
  }

  // converge
  if (point_list.size() < 3) {
    err << "converge: --points-list needs at least 3 values\n";
    return kExitUsage;
  }
  for (std::size_t i = 1; i < point_list.size(); ++i) {
    if (point_list[i] <= point_list[i - 1]) {
      err << "converge: --points-list must be strictly increasing\n";
      return kExitUsage;
    }
  }

  const fs::path dir = converge_opts.out;
  const SolveConfig cfg = make_config(converge_opts);
  RunManifest manifest;
  manifest.command = "converge";
  manifest.parameters = common_parameters(converge_opts);
  manifest.parameters.erase("points");
  manifest.parameters["points_list"] = point_list;
  if (!oracle.empty()) manifest.parameters["oracle"] = oracle;
  manifest.solver_config = solve_config_json(cfg);
  fs::create_directories(dir);

  ConvergenceReport report;
  try {
    if (oracle == "quadratic") {
      std::vector<double> values;
      for (std::size_t n : point_list) values.push_back(1.0 + 100.0 / (static_cast<double>(n) * n));
      report = analyze_convergence(point_list, values);
    } else {
      const DiscreteLagrangian dl(MetricField::angenent(), converge_opts.tau);
      report = convergence_study(point_list, dl, cfg);
    }
  } catch (const Error& e) {
    err << "converge: numerical failure: " << e.what() << '\n';
    manifest.results["error"] = e.what();
    manifest.write(dir);
    return kExitNumerical;
  }

  write_convergence_csv(dir / "convergence.csv", report);
  const Json fit = make_fit_summary(report);
  write_json(dir / "fit.json", fit);
  manifest.files = {"convergence.csv", "fit.json"};
  if (converge_opts.svg) {
    write_convergence_svg(dir / "convergence.svg", report);
    manifest.files.push_back("convergence.svg");
  }
  manifest.results = fit;
  manifest.write(dir);

  for (std::size_t i = 0; i < report.point_counts.size(); ++i) {
    out << "N=" << report.point_counts[i] << " entropy=" << fmt(report.entropies[i])
        << " error_estimate=" << report.per_level_error_estimates[i] << '\n';
  }
  if (!report.extrapolated) {
    err << "converge: " << report.note << '\n';
    return kExitNumerical;
  }
  out << "extrapolated=" << fmt(report.extrapolated_entropy) << " slope=" << fmt(report.fitted_order, 4) << '\n';
  return kExitSuccess;
}

}  // namespace angenent::cli
