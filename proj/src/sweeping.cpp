#include "sweepvi/sweeping.hpp"

#include <algorithm>
#include <cmath>

#include "sweepvi/errors.hpp"

namespace sweepvi {

std::pair<Eigen::VectorXd, Eigen::VectorXd> Trajectory::interpolate(double t) const {
  if (times.size() < 2) throw InvalidArgument("interpolate: trajectory is empty");
  if (t < times.front() || t > times.back())
    throw InvalidArgument("interpolate: time outside the trajectory range");
  if (t >= times.back()) return {states.back(), velocities.back()};
  // Locate i with t in [t_i, t_{i+1}); report the velocity of that step.
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const size_t i = static_cast<size_t>(it - times.begin()) - 1;
  const double w = (t - times[i]) / (times[i + 1] - times[i]);
  Eigen::VectorXd u = (1.0 - w) * states[i] + w * states[i + 1];
  return {std::move(u), velocities[i]};
}

double Trajectory::max_velocity_norm() const {
  double m = 0.0;
  for (const auto& z : velocities) m = std::max(m, z.norm());
  return m;
}

StepResult catching_up_step(const SymmetricOperator& A, const SymmetricOperator& B,
                            const ConvexSet& next_set, const Eigen::VectorXd& u_prev,
                            const StepOptions& opts) {
  if (A.dim() != B.dim() || A.dim() != next_set.dim() || A.dim() != u_prev.size())
    throw DimensionError("catching_up_step: operator/set/state dimensions disagree");
  if (!(opts.tol > 0.0)) throw InvalidArgument("catching_up_step: tol must be > 0");
  const double beta = A.coercivity_constant();
  if (!(beta > 0.0))
    throw FactorizationError("catching_up_step: A is not coercive (smallest eigenvalue " +
                             std::to_string(beta) + ")");

  // The step solves: minimize (1/2) <A^{-1}(y - b), y - b> over y in next_set,
  // with b = B u_prev; then z = A^{-1}(y* - b) satisfies the set-valued law
  // -z in N_{next_set}(A z + b).  The gradient map y -> A^{-1}(y - b) has
  // Lipschitz constant 1/beta, so any fixed step below 2*beta converges; we
  // use 1.8 * beta.
  const Eigen::VectorXd b = B.apply(u_prev);
  const double step = 1.8 * beta;
  Eigen::VectorXd y = next_set.project(b);
  double gap = std::numeric_limits<double>::infinity();
  bool gap_met = false;
  for (long k = 1; k <= opts.max_iter; ++k) {
    const Eigen::VectorXd grad = A.solve_spd_raw(y - b);
    const Eigen::VectorXd y_next = next_set.project(y - step * grad);
    gap = (y_next - y).norm();
    y = y_next;
    if (gap <= opts.tol * (1.0 + y.norm())) {
      gap_met = true;
      Eigen::VectorXd z = A.solve_spd(y - b);
      if (next_set.normal_cone_contains(A.apply(z) + b, -z, 10.0 * opts.tol))
        return {std::move(z), gap, k};
      // Gap criterion met but the certificate is not yet: keep iterating.
    }
  }
  if (gap_met)
    throw CertificateError("catching_up_step: iteration stalled without meeting the "
                           "normal-cone certificate (fixed-point gap " +
                           std::to_string(gap) + ")");
  throw ConvergenceError("catching_up_step: projected gradient iteration did not converge",
                         gap, opts.max_iter);
}

namespace {

void validate_problem(const SweepingProblem& p, int steps, std::vector<double>& grid) {
  if (steps < 1) throw InvalidArgument("solve: need at least one step");
  if (!(p.horizon > 0.0)) throw InvalidArgument("solve: horizon must be > 0");
  if (p.horizon > p.sets.horizon() + 1e-12)
    throw InvalidArgument("solve: family horizon " + std::to_string(p.sets.horizon()) +
                          " does not cover the requested horizon " + std::to_string(p.horizon));
  if (p.A.dim() != p.B.dim() || p.A.dim() != p.sets.dim() || p.A.dim() != p.u0.size())
    throw DimensionError("solve: operator/family/state dimensions disagree");

  const ValidationReport ops = validate_operators(p.A, p.B);
  if (!ops.passed())
    throw InvalidArgument("solve: operator assumptions fail:\n" + ops.to_string());

  grid.resize(static_cast<size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    grid[static_cast<size_t>(i)] = p.horizon * static_cast<double>(i) / steps;

  // Sampled families change sets only at their own nodes; the solver grid must
  // hit each of those nodes or a set change would fall inside a step.
  if (!p.sets.is_translated()) {
    for (const double ts : p.sets.sample_times()) {
      if (ts > p.horizon + 1e-12) continue;
      const double pos = ts / p.horizon * steps;
      if (std::abs(pos - std::round(pos)) > 1e-9)
        throw InvalidArgument("solve: family sample time " + std::to_string(ts) +
                              " is not a grid node for n = " + std::to_string(steps));
    }
  }

  const ValidationReport fam = validate_moving_set(p.sets, grid);
  if (!fam.passed())
    throw InvalidArgument("solve: moved-distance assumption fails on the grid:\n" +
                          fam.to_string());

  const double viability = p.sets.set_at(0.0).distance(p.B.apply(p.u0));
  if (viability > 1e-8)
    throw InvalidArgument("solve: initial state is not viable: distance of B u0 to C(0) is " +
                          std::to_string(viability));
}

}  // namespace

Trajectory solve(const SweepingProblem& problem, int steps, const SolverOptions& opts) {
  std::vector<double> grid;
  validate_problem(problem, steps, grid);

  const double mu = problem.horizon / steps;
  Trajectory traj;
  traj.times = grid;
  traj.states.reserve(grid.size());
  traj.velocities.reserve(grid.size() - 1);
  traj.step_residuals.reserve(grid.size() - 1);
  traj.states.push_back(problem.u0);

  StepOptions step_opts{opts.tol, opts.max_iter};
  for (int i = 0; i < steps; ++i) {
    const ConvexSet next_set = problem.sets.set_at(grid[static_cast<size_t>(i) + 1]);
    try {
      StepResult r = catching_up_step(problem.A, problem.B, next_set, traj.states.back(),
                                      step_opts);
      traj.states.push_back(traj.states.back() + mu * r.velocity);
      traj.velocities.push_back(std::move(r.velocity));
      traj.step_residuals.push_back(r.residual);
    } catch (const Error& e) {
      throw StepError("step " + std::to_string(i + 1) + " of " + std::to_string(steps) +
                          " failed: " + e.what(),
                      i + 1);
    }
  }
  return traj;
}

double viability_residual(const Trajectory& trajectory, const SweepingProblem& problem) {
  double worst = 0.0;
  for (int i = 0; i < trajectory.steps(); ++i) {
    const auto& u_prev = trajectory.states[static_cast<size_t>(i)];
    const auto& z = trajectory.velocities[static_cast<size_t>(i)];
    const Eigen::VectorXd point = problem.A.apply(z) + problem.B.apply(u_prev);
    const ConvexSet set = problem.sets.set_at(trajectory.times[static_cast<size_t>(i) + 1]);
    worst = std::max(worst, set.distance(point));
  }
  return worst;
}

VelocityBounds velocity_bounds(const SweepingProblem& problem) {
  const double beta = problem.A.coercivity_constant();
  const double moved = problem.sets.modulus(0.0, problem.horizon);
  const double growth = std::exp(problem.B.operator_norm() * problem.horizon / beta);
  return {8.0 * moved / beta * growth, moved / beta * growth};
}

std::vector<ConvergenceRow> convergence_study(const SweepingProblem& problem,
                                              std::span<const int> ns,
                                              const SolverOptions& opts) {
  if (ns.size() < 2) throw InvalidArgument("convergence_study: need at least two grid sizes");
  for (size_t k = 0; k + 1 < ns.size(); ++k)
    if (ns[k + 1] != 2 * ns[k])
      throw InvalidArgument("convergence_study: grid sizes must double (" +
                            std::to_string(ns[k]) + " -> " + std::to_string(ns[k + 1]) + ")");

  std::vector<Trajectory> runs;
  runs.reserve(ns.size());
  for (const int n : ns) runs.push_back(solve(problem, n, opts));

  std::vector<ConvergenceRow> rows;
  rows.reserve(ns.size());
  for (size_t k = 0; k < ns.size(); ++k) {
    ConvergenceRow row{ns[k], std::numeric_limits<double>::quiet_NaN(),
                       std::numeric_limits<double>::quiet_NaN()};
    if (k + 1 < ns.size()) {
      double err = 0.0;
      for (int i = 0; i <= ns[k]; ++i)
        err = std::max(err, (runs[k].states[static_cast<size_t>(i)] -
                             runs[k + 1].states[static_cast<size_t>(2 * i)])
                                .norm());
      row.err_vs_next = err;
    }
    rows.push_back(row);
  }
  // ratio of this row's error to the next row's; the last two rows keep NaN
  // (the final row has no error, its predecessor no successor error).
  for (size_t k = 0; k + 2 < rows.size(); ++k)
    rows[k].ratio = rows[k].err_vs_next / rows[k + 1].err_vs_next;
  return rows;
}

}  // namespace sweepvi
