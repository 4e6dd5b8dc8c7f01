#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "angenent/discrete_lagrangian.hpp"
#include "angenent/solvers.hpp"

namespace angenent {

/// Exact fit of value(N) = limit + coefficient * N^(-order) through three levels.
struct PowerLawFit {
  double limit = 0.0;
  double coefficient = 0.0;
  double order = 0.0;
};

/// Fits the three-parameter power law through (n[i], values[i]), i = 0..2,
/// with n strictly increasing. Returns nullopt when the differences do not
/// have a consistent sign or decay, i.e. no positive order fits.
std::optional<PowerLawFit> fit_power_law(const double (&n)[3], const double (&values)[3]);

/// Least-squares slope of log(y) against log(x). Requires y > 0.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceReport {
  std::vector<std::size_t> point_counts;
  std::vector<double> entropies;
  /// Slope of log(error estimate) against log(N); about -2 for this method.
  double fitted_order = 0.0;
  double extrapolated_entropy = 0.0;
  /// entropies[i] - extrapolated_entropy.
  std::vector<double> per_level_error_estimates;
  /// False when the entropy sequence is not monotone or the fit failed; the
  /// derived fields are then NaN.
  bool extrapolated = false;
  std::string note;
};

/// Builds the report from precomputed per-level values. The extrapolated
/// limit comes from the last three levels.
ConvergenceReport analyze_convergence(std::vector<std::size_t> point_counts,
                                      std::vector<double> entropies);

/// Solves the Angenent torus at every count (in parallel), then analyzes.
/// Throws InvalidInput for fewer than 3 counts or a non-increasing list.
ConvergenceReport convergence_study(const std::vector<std::size_t>& point_counts,
                                    const DiscreteLagrangian& dl, const SolveConfig& cfg = {});

}  // namespace angenent
