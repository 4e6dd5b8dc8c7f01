#include "angenent/convergence.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <string>

#include "angenent/errors.hpp"
#include "angenent/scenarios.hpp"

namespace angenent {

namespace {

constexpr double kMaxOrder = 100.0;

// (N1^-p - N2^-p) / (N2^-p - N3^-p), rescaled by N2^p to stay finite.
double difference_ratio(double p, double n1, double n2, double n3) {
  return std::expm1(p * std::log(n2 / n1)) / -std::expm1(p * std::log(n2 / n3));
}

}  // namespace

std::optional<PowerLawFit> fit_power_law(const double (&n)[3], const double (&values)[3]) {
  if (!(n[0] > 0.0 && n[0] < n[1] && n[1] < n[2])) return std::nullopt;
  const double d1 = values[0] - values[1];
  const double d2 = values[1] - values[2];
  if (d1 == 0.0 || d2 == 0.0 || (d1 > 0.0) != (d2 > 0.0)) return std::nullopt;
  const double ratio = d1 / d2;

  // The ratio increases with p, from log(n2/n1)/log(n3/n2) at p -> 0.
  double lo = 0.0;
  double hi = kMaxOrder;
  const double floor_ratio = std::log(n[1] / n[0]) / std::log(n[2] / n[1]);
  if (!(ratio > floor_ratio) || !(ratio < difference_ratio(hi, n[0], n[1], n[2]))) return std::nullopt;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (difference_ratio(mid, n[0], n[1], n[2]) < ratio) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  PowerLawFit fit;
  fit.order = 0.5 * (lo + hi);
  fit.coefficient = d1 / (std::pow(n[0], -fit.order) - std::pow(n[1], -fit.order));
  fit.limit = values[2] - fit.coefficient * std::pow(n[2], -fit.order);
  return fit;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("log_log_slope needs matching samples");
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidInput("log_log_slope needs positive samples");
    mean_x += std::log(x[i]);
    mean_y += std::log(y[i]);
  }
  mean_x /= static_cast<double>(x.size());
  mean_y /= static_cast<double>(x.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mean_x;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - mean_y);
  }
  return sxy / sxx;
}

ConvergenceReport analyze_convergence(std::vector<std::size_t> point_counts, std::vector<double> entropies) {
  if (point_counts.size() != entropies.size()) throw InvalidInput("counts and entropies differ in length");
  if (point_counts.size() < 3) throw InvalidInput("convergence analysis needs at least 3 levels");
  for (std::size_t i = 1; i < point_counts.size(); ++i) {
    if (point_counts[i] <= point_counts[i - 1]) throw InvalidInput("point counts must be strictly increasing");
  }

  ConvergenceReport report;
  report.point_counts = std::move(point_counts);
  report.entropies = std::move(entropies);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  report.fitted_order = nan;
  report.extrapolated_entropy = nan;
  report.per_level_error_estimates.assign(report.entropies.size(), nan);

  const auto& e = report.entropies;
  bool decreasing = true, increasing = true;
  for (std::size_t i = 1; i < e.size(); ++i) {
    decreasing = decreasing && e[i] < e[i - 1];
    increasing = increasing && e[i] > e[i - 1];
  }
  if (!decreasing && !increasing) {
    report.note = "entropy sequence is not monotone; extrapolation skipped";
    return report;
  }

  const std::size_t m = e.size();
  const double n[3] = {static_cast<double>(report.point_counts[m - 3]),
                       static_cast<double>(report.point_counts[m - 2]),
                       static_cast<double>(report.point_counts[m - 1])};
  const double v[3] = {e[m - 3], e[m - 2], e[m - 1]};
  const auto fit = fit_power_law(n, v);
  if (!fit) {
    report.note = "no power law fits the last three levels; extrapolation skipped";
    return report;
  }

  report.extrapolated_entropy = fit->limit;
  std::vector<double> counts, magnitudes;
  for (std::size_t i = 0; i < m; ++i) {
    report.per_level_error_estimates[i] = e[i] - fit->limit;
    counts.push_back(static_cast<double>(report.point_counts[i]));
    magnitudes.push_back(std::abs(report.per_level_error_estimates[i]));
  }
  for (double mag : magnitudes) {
    if (!(mag > 0.0)) {
      report.note = "an error estimate vanished; order not fitted";
      return report;
    }
  }
  report.fitted_order = log_log_slope(counts, magnitudes);
  report.extrapolated = true;
  return report;
}

ConvergenceReport convergence_study(const std::vector<std::size_t>& point_counts, const DiscreteLagrangian& dl,
                                    const SolveConfig& cfg) {
  if (point_counts.size() < 3) throw InvalidInput("convergence_study needs at least 3 point counts");
  for (std::size_t i = 1; i < point_counts.size(); ++i) {
    if (point_counts[i] <= point_counts[i - 1]) throw InvalidInput("point counts must be strictly increasing");
  }

  std::vector<std::future<ScenarioResult>> jobs;
  jobs.reserve(point_counts.size());
  for (std::size_t count : point_counts) {
    jobs.push_back(std::async(std::launch::async, [count, &dl, &cfg] { return solve_angenent(count, dl, cfg); }));
  }

  std::vector<double> entropies;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    ScenarioResult result = jobs[i].get();
    if (!result.report.converged) {
      throw NonConvergence("torus solve with N = " + std::to_string(point_counts[i]) + " did not converge");
    }
    entropies.push_back(result.entropy);
  }
  return analyze_convergence(point_counts, std::move(entropies));
}

}  // namespace angenent
