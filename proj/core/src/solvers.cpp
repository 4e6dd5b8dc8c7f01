#include "angenent/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "angenent/block_tridiagonal.hpp"
#include "angenent/errors.hpp"

namespace angenent {

void SolveConfig::validate() const {
  if (max_iterations < 1) throw InvalidInput("max_iterations must be at least 1");
  if (!(residual_tolerance > 0.0)) throw InvalidInput("residual_tolerance must be positive");
  if (!(step_tolerance > 0.0)) throw InvalidInput("step_tolerance must be positive");
  if (!(lm_initial_damping > 0.0)) throw InvalidInput("lm_initial_damping must be positive");
  if (!(lm_damping_growth > 1.0)) throw InvalidInput("lm_damping_growth must exceed 1");
  if (!(lm_damping_shrink > 0.0 && lm_damping_shrink < 1.0)) {
    throw InvalidInput("lm_damping_shrink must lie in (0, 1)");
  }
}

// ---------------------------------------------------------------------------
// Shooting

namespace {

constexpr int kMaxHalvings = 30;

bool solve_2x2(const Mat2& a, const Vec2& b, Vec2& x) {
  const double det = a.determinant();
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * a.squaredNorm()) return false;
  x = a.inverse() * b;
  return x.allFinite();
}

}  // namespace

Point shoot_step(const Point& q_prev, const Point& q_cur, const DiscreteLagrangian& dl,
                 const SolveConfig& cfg) {
  cfg.validate();
  if (!(q_cur[0] > 0.0)) throw LeftHalfPlane("shoot_step: current point has r <= 0");

  const Vec2 momentum = dl.d1(q_prev, q_cur);
  Point x = 2.0 * q_cur - q_prev;
  if (!(x[0] > 0.0)) x[0] = 0.5 * q_cur[0];

  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    const Vec2 f = momentum + dl.d0(q_cur, x);
    if (f.lpNorm<Eigen::Infinity>() <= cfg.residual_tolerance) return x;

    const Mat2 jac = dl.second_derivatives(q_cur, x).d01;
    Vec2 step;
    if (!solve_2x2(jac, -f, step)) {
      const double damping = cfg.lm_initial_damping * std::max(jac.squaredNorm(), 1e-300);
      const Mat2 normal = jac.transpose() * jac + damping * Mat2::Identity();
      if (!solve_2x2(normal, -jac.transpose() * f, step)) {
        throw SingularJacobian("shoot_step: singular Jacobian after damped retry");
      }
    }

    int halvings = 0;
    while (!(x[0] + step[0] > 0.0)) {
      if (++halvings > kMaxHalvings) throw LeftHalfPlane("shoot_step: iterate left the half-plane");
      step *= 0.5;
    }
    x += step;
    if (step.lpNorm<Eigen::Infinity>() <= cfg.step_tolerance) {
      const Vec2 f_final = momentum + dl.d0(q_cur, x);
      if (f_final.lpNorm<Eigen::Infinity>() <= cfg.residual_tolerance) return x;
      throw NonConvergence("shoot_step: stalled with residual " +
                           std::to_string(f_final.lpNorm<Eigen::Infinity>()));
    }
  }
  const Vec2 f = momentum + dl.d0(q_cur, x);
  if (f.lpNorm<Eigen::Infinity>() <= cfg.residual_tolerance) return x;
  throw NonConvergence("shoot_step: iteration cap reached");
}

Trajectory shoot(const Point& q0, const Point& q1, std::size_t steps, const DiscreteLagrangian& dl,
                 const SolveConfig& cfg) {
  if (steps < 1) throw InvalidInput("shoot needs at least one step");
  if (!(q0[0] > 0.0) || !(q1[0] > 0.0)) throw InvalidInput("shoot: initial points need r > 0");
  Trajectory traj;
  traj.closed = false;
  traj.points.reserve(steps + 1);
  traj.points.push_back(q0);
  traj.points.push_back(q1);
  for (std::size_t k = 1; k < steps; ++k) {
    try {
      traj.points.push_back(shoot_step(traj.points[k - 1], traj.points[k], dl, cfg));
    } catch (const Error& e) {
      throw ShootingError(k + 1, e.what());
    }
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Levenberg-Marquardt on the Euler-Lagrange system

namespace {

constexpr int kMaxDampingAttempts = 60;
constexpr double kMinDamping = 1e-18;
constexpr double kRankDeficiencyRatio = 1e-8;
constexpr int kCorrectorPasses = 3;
constexpr int kPhaseStepCuts = 6;
// An accepted step that keeps more than this fraction of the residual norm counts as a stall.
constexpr double kStallRatio = 0.5;

Eigen::VectorXd residual_vector(const Trajectory& traj, const DiscreteLagrangian& dl) {
  const std::vector<Vec2> res = dl.del_residual(traj);
  Eigen::VectorXd v(2 * res.size());
  for (std::size_t i = 0; i < res.size(); ++i) v.segment<2>(2 * i) = res[i];
  return v;
}

// Hessian of the discrete action with respect to the free points.
BlockTridiagonal<double> assemble_jacobian(const Trajectory& traj, const DiscreteLagrangian& dl) {
  const std::size_t n = traj.size();
  const std::size_t free = traj.free_count();
  BlockTridiagonal<double> jac(free, traj.closed);

  std::vector<HessianBlocks> seg(traj.segment_count());
  for (std::size_t k = 0; k < seg.size(); ++k) {
    const auto [a, b] = traj.segment(k);
    seg[k] = dl.second_derivatives(a, b);
  }

  for (std::size_t i = 0; i < free; ++i) {
    const std::size_t k = i + traj.free_begin();
    const std::size_t before = (k + n - 1) % n;  // segment (q_{k-1}, q_k)
    jac.diag(i) = seg[before].d11 + seg[k % seg.size()].d00;
    if (i > 0 || traj.closed) jac.lower(i) = seg[before].d01.transpose();
    if (i + 1 < free || traj.closed) jac.upper(i) = seg[k % seg.size()].d01;
  }
  return jac;
}

// Replaces the z row and column of point 0 by a scaled identity so that the
// update never moves it.
void pin_first_z(BlockTridiagonal<double>& jac, Eigen::VectorXd& residual, double scale) {
  const std::size_t n = jac.blocks();
  jac.diag(0).row(1).setZero();
  jac.diag(0).col(1).setZero();
  jac.diag(0)(1, 1) = scale;
  jac.upper(0).row(1).setZero();
  jac.lower(0).row(1).setZero();
  jac.lower(1).col(1).setZero();
  jac.upper(n - 1).col(1).setZero();
  residual[1] = 0.0;
}

double mean_abs_diagonal(const BlockTridiagonal<double>& jac) {
  double sum = 0.0;
  for (std::size_t k = 0; k < jac.blocks(); ++k) sum += jac.diag(k).diagonal().cwiseAbs().sum();
  const double mean = sum / static_cast<double>(jac.dimension());
  return mean > 0.0 && std::isfinite(mean) ? mean : 1.0;
}

// Levenberg-Marquardt step delta = -(J^T J + s^2 I)^{-1} J^T R. J is the
// symmetric Hessian of the action, so J^T J + s^2 I = (J + i s)(J - i s) and
// the step equals -Re[(J + i s I)^{-1} R]: one complex block solve.
Eigen::VectorXd lm_step(const BlockTridiagonal<double>& jac, const Eigen::VectorXd& residual,
                        double shift, LinearSolver solver) {
  if (solver == LinearSolver::Dense) {
    if (jac.dimension() > kDenseSolverMaxUnknowns) {
      throw InvalidInput("dense linear solver is limited to " +
                         std::to_string(kDenseSolverMaxUnknowns) + " unknowns");
    }
    const Eigen::MatrixXd j = jac.to_dense();
    Eigen::MatrixXd normal = j.transpose() * j;
    normal.diagonal().array() += shift * shift;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success) throw SingularJacobian("dense normal equations failed");
    Eigen::VectorXd step = -ldlt.solve(j.transpose() * residual);
    if (!step.allFinite()) throw SingularJacobian("dense normal equations failed");
    return step;
  }

  using Complex = std::complex<double>;
  BlockTridiagonal<Complex> shifted(jac.blocks(), jac.cyclic());
  for (std::size_t k = 0; k < jac.blocks(); ++k) {
    shifted.lower(k) = jac.lower(k).cast<Complex>();
    shifted.diag(k) = jac.diag(k).cast<Complex>();
    shifted.upper(k) = jac.upper(k).cast<Complex>();
  }
  shifted.add_to_diagonal(Complex(0.0, shift));
  const Eigen::VectorXcd x = shifted.solve(residual.cast<Complex>());
  return -x.real();
}

void estimate_singular_values(const BlockTridiagonal<double>& jac, SolveReport& report) {
  const Eigen::Index dim = static_cast<Eigen::Index>(jac.dimension());
  Eigen::VectorXd start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start[i] = 1.0 + 0.5 * std::sin(1.7 * static_cast<double>(i));
  start.normalize();

  // Symmetric J: singular values are |eigenvalues|.
  Eigen::VectorXd v = start;
  double largest = 0.0;
  for (int it = 0; it < 200; ++it) {
    Eigen::VectorXd w = jac.multiply(v);
    largest = w.norm();
    if (!(largest > 0.0)) break;
    v = w / largest;
  }

  double smallest = 0.0;
  try {
    v = start;
    for (int it = 0; it < 100; ++it) {
      Eigen::VectorXd w = jac.solve(v);
      const double growth = w.norm();
      if (!(growth > 0.0) || !std::isfinite(growth)) {
        smallest = 0.0;
        break;
      }
      smallest = 1.0 / growth;
      v = w / growth;
    }
  } catch (const SingularJacobian&) {
    smallest = 0.0;
  }

  report.largest_singular_value = largest;
  report.smallest_singular_value = smallest;
  report.jacobian_rank_deficient = smallest < kRankDeficiencyRatio * largest;
}

bool free_points_in_half_plane(const Trajectory& traj) {
  for (std::size_t k = traj.free_begin(); k < traj.free_end(); ++k) {
    if (!(traj.points[k][0] > 0.0)) return false;
  }
  return true;
}

// Newton steps with the phase of point 0 held fixed. They pull a candidate
// that left the one-parameter family of near-solutions of a closed system
// back onto it. Returns true once the residual norm is below `target`.
bool correct_onto_family(Trajectory& candidate, Eigen::VectorXd& residual, double target,
                         const DiscreteLagrangian& dl) {
  for (int pass = 0; pass < kCorrectorPasses && !(residual.norm() < target); ++pass) {
    BlockTridiagonal<double> jac = assemble_jacobian(candidate, dl);
    Eigen::VectorXd rhs = residual;
    pin_first_z(jac, rhs, mean_abs_diagonal(jac));
    Eigen::VectorXd step;
    try {
      step = -jac.solve(rhs);
    } catch (const SingularJacobian&) {
      return false;
    }
    Trajectory moved = candidate;
    for (std::size_t i = 0; i < moved.size(); ++i) moved.points[i] += step.segment<2>(2 * i);
    if (!free_points_in_half_plane(moved)) return false;
    Eigen::VectorXd moved_residual = residual_vector(moved, dl);
    if (!(moved_residual.norm() < residual.norm())) return false;
    candidate = std::move(moved);
    residual = std::move(moved_residual);
  }
  return residual.norm() < target;
}

// Once damped steps stall on a closed system, what is left of the residual
// lies along the near-null reparametrization direction, which only an
// undamped step can follow. Tries a Newton step plus correction.
bool newton_along_family(const Trajectory& x, const BlockTridiagonal<double>& jac,
                         const Eigen::VectorXd& residual, const DiscreteLagrangian& dl,
                         Trajectory& candidate, Eigen::VectorXd& candidate_residual) {
  Eigen::VectorXd step;
  try {
    step = -jac.solve(residual);
  } catch (const SingularJacobian&) {
    return false;
  }
  // The linear model of the phase is crude, so shorten the jump on failure.
  for (int cut = 0; cut < kPhaseStepCuts; ++cut, step *= 0.5) {
    candidate = x;
    for (std::size_t i = 0; i < candidate.size(); ++i) candidate.points[i] += step.segment<2>(2 * i);
    if (!free_points_in_half_plane(candidate)) continue;
    candidate_residual = residual_vector(candidate, dl);
    if (correct_onto_family(candidate, candidate_residual, residual.norm(), dl)) return true;
  }
  return false;
}

std::pair<Trajectory, SolveReport> levenberg_marquardt(Trajectory x, const DiscreteLagrangian& dl,
                                                       const SolveConfig& cfg) {
  SolveReport report;
  const std::size_t begin = x.free_begin();
  const std::size_t free = x.free_count();
  if (free == 0) {
    report.converged = true;
    return {std::move(x), report};
  }
  const bool pin = cfg.pin_phase && x.closed;

  Eigen::VectorXd residual = residual_vector(x, dl);
  double norm2 = residual.norm();
  report.residual_history.push_back(norm2);
  report.final_residual_norm = residual.lpNorm<Eigen::Infinity>();
  double damping = cfg.lm_initial_damping;
  bool stalled = false;

  if (report.final_residual_norm <= cfg.residual_tolerance) {
    report.converged = true;
  }

  for (int iter = 1; iter <= cfg.max_iterations && !report.converged; ++iter) {
    BlockTridiagonal<double> jac = assemble_jacobian(x, dl);
    const double scale = mean_abs_diagonal(jac);
    Eigen::VectorXd rhs = residual;
    if (pin) pin_first_z(jac, rhs, scale);

    bool accepted = false;
    double step_norm = 0.0;
    Trajectory candidate = x;
    Eigen::VectorXd candidate_residual;
    if (stalled && x.closed && !pin && newton_along_family(x, jac, residual, dl, candidate, candidate_residual)) {
      accepted = true;
      for (std::size_t i = 0; i < free; ++i) {
        step_norm = std::max(step_norm, (candidate.points[i] - x.points[i]).lpNorm<Eigen::Infinity>());
      }
    } else {
      candidate = x;
    }
    for (int attempt = 0; attempt < kMaxDampingAttempts && !accepted; ++attempt) {
      Eigen::VectorXd step;
      try {
        step = lm_step(jac, rhs, std::sqrt(damping) * scale, cfg.linear_solver);
      } catch (const SingularJacobian&) {
        damping *= cfg.lm_damping_growth;
        continue;
      }

      int halvings = 0;
      while (true) {
        for (std::size_t i = 0; i < free; ++i) {
          candidate.points[begin + i] = x.points[begin + i] + step.segment<2>(2 * i);
        }
        if (free_points_in_half_plane(candidate)) break;
        if (++halvings > kMaxHalvings) {
          throw LeftHalfPlane("update cannot keep every point in r > 0 after " +
                              std::to_string(kMaxHalvings) + " halvings");
        }
        step *= 0.5;
      }

      candidate_residual = residual_vector(candidate, dl);
      if (candidate_residual.norm() < norm2) {
        accepted = true;
        step_norm = step.lpNorm<Eigen::Infinity>();
        damping = std::max(damping * cfg.lm_damping_shrink, kMinDamping);
      } else {
        damping *= cfg.lm_damping_growth;
      }
    }
    if (!accepted) break;

    x = candidate;
    residual = std::move(candidate_residual);
    stalled = residual.norm() > kStallRatio * norm2;
    norm2 = residual.norm();
    report.iterations = iter;
    report.residual_history.push_back(norm2);
    report.final_residual_norm = residual.lpNorm<Eigen::Infinity>();
    if (report.final_residual_norm <= cfg.residual_tolerance) report.converged = true;
    if (step_norm <= cfg.step_tolerance) break;
  }

  estimate_singular_values(assemble_jacobian(x, dl), report);
  return {std::move(x), report};
}

}  // namespace

std::pair<Trajectory, SolveReport> solve_closed(const Trajectory& initial, const DiscreteLagrangian& dl,
                                                const SolveConfig& cfg) {
  cfg.validate();
  if (!initial.closed) throw InvalidInput("solve_closed needs a closed trajectory");
  validate(initial);
  return levenberg_marquardt(initial, dl, cfg);
}

std::pair<Trajectory, SolveReport> solve_open(const Point& q_start, const Point& q_end,
                                              const std::vector<Point>& initial_interior,
                                              const DiscreteLagrangian& dl, const SolveConfig& cfg) {
  cfg.validate();
  if (!(q_start[0] >= 0.0) || !(q_end[0] >= 0.0)) throw InvalidInput("solve_open: endpoints need r >= 0");
  Trajectory traj;
  traj.closed = false;
  traj.points.reserve(initial_interior.size() + 2);
  traj.points.push_back(q_start);
  traj.points.insert(traj.points.end(), initial_interior.begin(), initial_interior.end());
  traj.points.push_back(q_end);
  validate(traj);
  return levenberg_marquardt(std::move(traj), dl, cfg);
}

}  // namespace angenent
