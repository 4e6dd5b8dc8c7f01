#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "angenent/convergence.hpp"
#include "angenent/scenarios.hpp"
#include "angenent/solvers.hpp"
#include "angenent/trajectory.hpp"

namespace angenent::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

/// Trajectory CSV: header `index,r,z`, one vertex per row, 17 significant
/// digits. Closed trajectories do not repeat their first vertex.
void write_trajectory_csv(const fs::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const fs::path& path, bool closed);

/// Trajectory JSON: {"closed": bool, "points": [[r, z], ...]}.
void write_trajectory_json(const fs::path& path, const Trajectory& traj);
Trajectory read_trajectory_json(const fs::path& path);

/// Flat summary document for one solve. Geometry fields are filled for
/// closed trajectories only (null otherwise).
Json make_summary(const std::string& shape, const ScenarioResult& result, double tau);

Json solve_config_json(const SolveConfig& cfg);

/// Convergence table with columns N,entropy,error_estimate.
void write_convergence_csv(const fs::path& path, const ConvergenceReport& report);
Json make_fit_summary(const ConvergenceReport& report);

/// r horizontal, z vertical, equal aspect. Closed trajectories become one
/// <polygon>, open ones one <polyline>.
void write_trajectory_svg(const fs::path& path, const Trajectory& traj);
/// Log-log plot of |error estimate| against N.
void write_convergence_svg(const fs::path& path, const ConvergenceReport& report);

void write_json(const fs::path& path, const Json& doc);

/// ISO 8601 UTC timestamp, e.g. 2024-01-31T12:00:00Z.
std::string utc_timestamp();

/// Provenance record of one CLI invocation. Every listed file exists once
/// `write` returns.
struct RunManifest {
  std::string command;
  Json parameters = Json::object();
  Json solver_config = Json::object();
  Json results = Json::object();
  std::vector<std::string> files;

  void write(const fs::path& dir) const;
};

}  // namespace angenent::cli
