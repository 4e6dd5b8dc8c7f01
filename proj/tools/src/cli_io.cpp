#include "angenent_cli/cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

#include "angenent/errors.hpp"

namespace angenent::cli {

namespace {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::ofstream open_for_write(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  return out;
}

double parse_double(const std::string& field, const fs::path& path, std::size_t line) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw InvalidInput(path.string() + ":" + std::to_string(line) + ": bad number '" + field + "'");
  }
  return value;
}

// Maps NaN and infinities to null; JSON has no literal for them.
Json number_or_null(double value) {
  if (!std::isfinite(value)) return nullptr;
  return value;
}

}  // namespace

void write_trajectory_csv(const fs::path& path, const Trajectory& traj) {
  std::ofstream out = open_for_write(path);
  out << "index,r,z\n";
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    out << i << ',' << format_double(traj.points[i][0]) << ',' << format_double(traj.points[i][1]) << '\n';
  }
}

Trajectory read_trajectory_csv(const fs::path& path, bool closed) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "index,r,z") {
    throw InvalidInput(path.string() + ": expected header 'index,r,z'");
  }
  Trajectory traj;
  traj.closed = closed;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 3) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": expected 3 fields");
    }
    if (parse_double(fields[0], path, line_no) != static_cast<double>(traj.points.size())) {
      throw InvalidInput(path.string() + ":" + std::to_string(line_no) + ": index out of sequence");
    }
    traj.points.emplace_back(parse_double(fields[1], path, line_no), parse_double(fields[2], path, line_no));
  }
  return traj;
}

void write_trajectory_json(const fs::path& path, const Trajectory& traj) {
  Json doc;
  doc["closed"] = traj.closed;
  Json points = Json::array();
  for (const Point& p : traj.points) points.push_back({p[0], p[1]});
  doc["points"] = std::move(points);
  write_json(path, doc);
}

Trajectory read_trajectory_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
  Trajectory traj;
  traj.closed = doc.at("closed").get<bool>();
  for (const auto& p : doc.at("points")) traj.points.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return traj;
}

Json make_summary(const std::string& shape, const ScenarioResult& result, double tau) {
  Json doc;
  doc["shape"] = shape;
  doc["closed"] = result.trajectory.closed;
  doc["n_points"] = result.trajectory.segment_count();
  doc["tau"] = tau;
  doc["entropy"] = number_or_null(result.entropy);
  doc["converged"] = result.report.converged;
  doc["iterations"] = result.report.iterations;
  doc["residual_norm"] = number_or_null(result.report.final_residual_norm);
  doc["jacobian_rank_deficient"] = result.report.jacobian_rank_deficient;
  if (result.trajectory.closed && result.trajectory.size() >= 3) {
    const GeometrySummary g = geometry_summary(result.trajectory);
    doc["intercepts"] = g.z0_intercepts;
    doc["max_z_point"] = {g.max_z_point[0], g.max_z_point[1]};
    doc["min_r"] = g.min_r;
    doc["max_r"] = g.max_r;
  } else {
    doc["intercepts"] = Json::array();
    doc["max_z_point"] = nullptr;
  }
  return doc;
}

Json solve_config_json(const SolveConfig& cfg) {
  Json doc;
  doc["max_iterations"] = cfg.max_iterations;
  doc["residual_tolerance"] = cfg.residual_tolerance;
  doc["step_tolerance"] = cfg.step_tolerance;
  doc["lm_initial_damping"] = cfg.lm_initial_damping;
  doc["lm_damping_growth"] = cfg.lm_damping_growth;
  doc["lm_damping_shrink"] = cfg.lm_damping_shrink;
  doc["pin_phase"] = cfg.pin_phase;
  doc["linear_solver"] = cfg.linear_solver == LinearSolver::Dense ? "dense" : "structured";
  return doc;
}

void write_convergence_csv(const fs::path& path, const ConvergenceReport& report) {
  std::ofstream out = open_for_write(path);
  out << "N,entropy,error_estimate\n";
  for (std::size_t i = 0; i < report.point_counts.size(); ++i) {
    out << report.point_counts[i] << ',' << format_double(report.entropies[i]) << ','
        << format_double(report.per_level_error_estimates[i]) << '\n';
  }
}

Json make_fit_summary(const ConvergenceReport& report) {
  Json doc;
  doc["point_counts"] = report.point_counts;
  doc["extrapolated"] = report.extrapolated;
  doc["slope"] = number_or_null(report.fitted_order);
  doc["extrapolated_entropy"] = number_or_null(report.extrapolated_entropy);
  Json errors = Json::array();
  for (double e : report.per_level_error_estimates) errors.push_back(number_or_null(e));
  doc["error_estimates"] = std::move(errors);
  if (!report.note.empty()) doc["note"] = report.note;
  return doc;
}

void write_trajectory_svg(const fs::path& path, const Trajectory& traj) {
  constexpr double kPixelsPerUnit = 120.0;
  constexpr double kMargin = 20.0;
  double r_max = 0.0, z_min = 0.0, z_max = 0.0;
  for (const Point& p : traj.points) {
    r_max = std::max(r_max, p[0]);
    z_min = std::min(z_min, p[1]);
    z_max = std::max(z_max, p[1]);
  }
  const double width = 2.0 * kMargin + kPixelsPerUnit * r_max;
  const double height = 2.0 * kMargin + kPixelsPerUnit * (z_max - z_min);
  auto x_of = [&](double r) { return kMargin + kPixelsPerUnit * r; };
  auto y_of = [&](double z) { return kMargin + kPixelsPerUnit * (z_max - z); };

  std::ofstream out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(width) << "\" height=\""
      << format_double(height) << "\">\n";
  out << "<line class=\"axis\" x1=\"" << format_double(x_of(0.0)) << "\" y1=\"" << format_double(y_of(z_max))
      << "\" x2=\"" << format_double(x_of(0.0)) << "\" y2=\"" << format_double(y_of(z_min))
      << "\" stroke=\"gray\"/>\n";
  out << "<line class=\"axis\" x1=\"" << format_double(x_of(0.0)) << "\" y1=\"" << format_double(y_of(0.0))
      << "\" x2=\"" << format_double(x_of(r_max)) << "\" y2=\"" << format_double(y_of(0.0))
      << "\" stroke=\"gray\"/>\n";
  out << '<' << (traj.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"black\" points=\"";
  for (std::size_t i = 0; i < traj.points.size(); ++i) {
    if (i > 0) out << ' ';
    out << format_double(x_of(traj.points[i][0])) << ',' << format_double(y_of(traj.points[i][1]));
  }
  out << "\"/>\n</svg>\n";
}

void write_convergence_svg(const fs::path& path, const ConvergenceReport& report) {
  constexpr double kSize = 400.0;
  constexpr double kMargin = 30.0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < report.point_counts.size(); ++i) {
    const double e = std::abs(report.per_level_error_estimates[i]);
    if (!(e > 0.0) || !std::isfinite(e)) continue;
    xs.push_back(std::log10(static_cast<double>(report.point_counts[i])));
    ys.push_back(std::log10(e));
  }
  std::ofstream out = open_for_write(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_double(kSize + 2 * kMargin)
      << "\" height=\"" << format_double(kSize + 2 * kMargin) << "\">\n";
  if (xs.size() >= 2) {
    const auto [x_lo, x_hi] = std::minmax_element(xs.begin(), xs.end());
    const auto [y_lo, y_hi] = std::minmax_element(ys.begin(), ys.end());
    const double x_span = std::max(*x_hi - *x_lo, 1e-12);
    const double y_span = std::max(*y_hi - *y_lo, 1e-12);
    out << "<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) out << ' ';
      out << format_double(kMargin + kSize * (xs[i] - *x_lo) / x_span) << ','
          << format_double(kMargin + kSize * (*y_hi - ys[i]) / y_span);
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

void write_json(const fs::path& path, const Json& doc) {
  std::ofstream out = open_for_write(path);
  out << doc.dump(2) << '\n';
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

void RunManifest::write(const fs::path& dir) const {
  Json doc;
  doc["command"] = command;
  doc["parameters"] = parameters;
  doc["timestamp"] = utc_timestamp();
  doc["solver_config"] = solver_config;
  doc["results"] = results;
  doc["files"] = files;
  for (const auto& f : files) {
    if (!fs::exists(dir / f)) throw Error("manifest lists missing file " + f);
  }
  write_json(dir / "manifest.json", doc);
}

}  // namespace angenent::cli
