#include "sweepvi/evi.hpp"

#include <cmath>
#include <sstream>

#include "sweepvi/errors.hpp"

namespace sweepvi {

FrictionFunctional::FrictionFunctional(Eigen::VectorXd weights) : weights_(std::move(weights)) {
  if (weights_.size() == 0) throw InvalidArgument("friction weights: dimension must be >= 1");
  for (Eigen::Index i = 0; i < weights_.size(); ++i)
    if (!(weights_(i) >= 0.0) || !std::isfinite(weights_(i)))
      throw InvalidArgument("friction weights: weight " + std::to_string(i) +
                            " must be finite and >= 0");
}

double FrictionFunctional::value(const Eigen::VectorXd& w) const {
  if (w.size() != dim()) throw DimensionError("friction value: wrong dimension");
  return weights_.dot(w.cwiseAbs());
}

Eigen::VectorXd FrictionFunctional::prox(const Eigen::VectorXd& x, double s) const {
  if (x.size() != dim()) throw DimensionError("friction prox: wrong dimension");
  if (!(s > 0.0)) throw InvalidArgument("friction prox: step must be > 0");
  Eigen::VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double shrunk = std::abs(x(i)) - s * weights_(i);
    y(i) = shrunk > 0.0 ? (x(i) > 0.0 ? shrunk : -shrunk) : 0.0;
  }
  return y;
}

ConvexSet FrictionFunctional::subdiff_zero() const {
  return ConvexSet::box(-weights_, weights_);
}

namespace {

// xi in dJ(w) componentwise:  |xi_i| <= g_i + tol always, and where w_i is
// active (|w_i| > tol) additionally xi_i = sign(w_i) g_i up to tol.  Two
// aggregate forms are enforced on top, so the certificate also implies the
// set-valued inclusion of the equivalent formulation at the same tolerance:
// the Euclidean excess over the box [-g, g] stays below tol, and the duality
// gap J(w) - <w, xi> below tol * (1 + |w|).
bool subgradient_certificate(const FrictionFunctional& J, const Eigen::VectorXd& w,
                             const Eigen::VectorXd& xi, double tol) {
  const auto& g = J.weights();
  double excess_sq = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(xi(i)) > g(i) + tol) return false;
    const double excess = std::max(std::abs(xi(i)) - g(i), 0.0);
    excess_sq += excess * excess;
    if (std::abs(w(i)) > tol) {
      const double want = w(i) > 0.0 ? g(i) : -g(i);
      if (std::abs(xi(i) - want) > tol) return false;
    }
  }
  // Slight tightening (factor 0.9) so the same quantities recomputed
  // elsewhere through a different floating-point route still clear tol.
  if (std::sqrt(excess_sq) > 0.9 * tol) return false;
  if (J.value(w) - w.dot(xi) > 0.9 * tol * (1.0 + w.norm())) return false;
  return true;
}

}  // namespace

StepResult evi_step(const SymmetricOperator& A, const SymmetricOperator& B,
                    const Eigen::VectorXd& u_prev, const Eigen::VectorXd& f_next,
                    const FrictionFunctional& J, const StepOptions& opts) {
  if (A.dim() != B.dim() || A.dim() != u_prev.size() || A.dim() != f_next.size() ||
      A.dim() != J.dim())
    throw DimensionError("evi_step: dimensions disagree");
  if (!(opts.tol > 0.0)) throw InvalidArgument("evi_step: tol must be > 0");
  const double lmax = A.operator_norm();
  if (!(lmax > 0.0)) throw InvalidArgument("evi_step: A must be nonzero");

  // Minimize Phi(w) = (1/2)<A w, w> + <c, w> + J(w), c = B u_prev - f_next,
  // by proximal gradient with the safe fixed step 1/|A|.
  const Eigen::VectorXd c = B.apply(u_prev) - f_next;
  const double step = 1.0 / lmax;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(A.dim());
  double gap = std::numeric_limits<double>::infinity();
  bool gap_met = false;
  for (long k = 1; k <= opts.max_iter; ++k) {
    const Eigen::VectorXd grad = A.apply(w) + c;
    const Eigen::VectorXd w_next = J.prox(w - step * grad, step);
    gap = (w_next - w).norm();
    w = w_next;
    if (gap <= opts.tol * (1.0 + w.norm())) {
      gap_met = true;
      const Eigen::VectorXd xi = -(A.apply(w) + c);  // = f_next - A w - B u_prev
      if (subgradient_certificate(J, w, xi, 10.0 * opts.tol)) return {std::move(w), gap, k};
    }
  }
  if (gap_met)
    throw CertificateError("evi_step: iteration stalled without meeting the subgradient "
                           "certificate (fixed-point gap " +
                           std::to_string(gap) + ")");
  throw ConvergenceError("evi_step: proximal gradient iteration did not converge", gap,
                         opts.max_iter);
}

CompatibilityMargin compatibility_margin(const SymmetricOperator& B, const Eigen::VectorXd& u0,
                                         const Eigen::VectorXd& f0,
                                         const FrictionFunctional& J) {
  if (B.dim() != u0.size() || B.dim() != f0.size() || B.dim() != J.dim())
    throw DimensionError("compatibility: dimensions disagree");
  const Eigen::VectorXd xi = f0 - B.apply(u0);
  CompatibilityMargin m{std::numeric_limits<double>::infinity(), 0};
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    const double margin = J.weights()(i) - std::abs(xi(i));
    if (margin < m.worst_margin) {
      m.worst_margin = margin;
      m.worst_index = i;
    }
  }
  return m;
}

bool check_compatibility(const SymmetricOperator& B, const Eigen::VectorXd& u0,
                         const Eigen::VectorXd& f0, const FrictionFunctional& J, double tol) {
  return compatibility_margin(B, u0, f0, J).worst_margin >= -tol;
}

SweepingProblem to_sweeping(const EviProblem& problem) {
  if (problem.A.dim() != problem.B.dim() || problem.A.dim() != problem.J.dim() ||
      problem.A.dim() != problem.load.dim() || problem.A.dim() != problem.u0.size())
    throw DimensionError("to_sweeping: dimensions disagree");
  const CompatibilityMargin m = compatibility_margin(problem.B, problem.u0,
                                                     problem.load.value(0.0), problem.J);
  if (m.worst_margin < -1e-8)
    throw InvalidArgument("to_sweeping: initial state incompatible with the load at t = 0 "
                          "(coordinate " +
                          std::to_string(m.worst_index) + ", margin " +
                          std::to_string(m.worst_margin) + ")");
  // C(t) = f(t) - dJ(0): translated family over the reflected subdifferential.
  MovingSet family = MovingSet::translated(ConvexSet::reflect(problem.J.subdiff_zero()),
                                           problem.load, problem.horizon);
  return SweepingProblem{problem.A, problem.B, std::move(family), problem.u0, problem.horizon};
}

Trajectory solve_evi(const EviProblem& problem, int steps, const SolverOptions& opts) {
  if (steps < 1) throw InvalidArgument("solve_evi: need at least one step");
  if (!(problem.horizon > 0.0)) throw InvalidArgument("solve_evi: horizon must be > 0");
  if (problem.A.dim() != problem.B.dim() || problem.A.dim() != problem.J.dim() ||
      problem.A.dim() != problem.load.dim() || problem.A.dim() != problem.u0.size())
    throw DimensionError("solve_evi: dimensions disagree");
  const ValidationReport ops = validate_operators(problem.A, problem.B);
  if (!ops.passed())
    throw InvalidArgument("solve_evi: operator assumptions fail:\n" + ops.to_string());
  const CompatibilityMargin m = compatibility_margin(problem.B, problem.u0,
                                                     problem.load.value(0.0), problem.J);
  if (m.worst_margin < -1e-8)
    throw InvalidArgument("solve_evi: initial state incompatible with the load at t = 0 "
                          "(coordinate " +
                          std::to_string(m.worst_index) + ", margin " +
                          std::to_string(m.worst_margin) + ")");

  const double mu = problem.horizon / steps;
  Trajectory traj;
  traj.times.resize(static_cast<size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    traj.times[static_cast<size_t>(i)] = problem.horizon * static_cast<double>(i) / steps;
  traj.states.reserve(traj.times.size());
  traj.states.push_back(problem.u0);
  StepOptions step_opts{opts.tol, opts.max_iter};
  for (int i = 0; i < steps; ++i) {
    const Eigen::VectorXd f_next = problem.load.value(traj.times[static_cast<size_t>(i) + 1]);
    try {
      StepResult r = evi_step(problem.A, problem.B, traj.states.back(), f_next, problem.J,
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

CrosscheckReport crosscheck(const EviProblem& problem, int steps, const SolverOptions& opts) {
  const Trajectory evi_traj = solve_evi(problem, steps, opts);
  const Trajectory swe_traj = solve(to_sweeping(problem), steps, opts);
  CrosscheckReport report;
  for (size_t i = 0; i < evi_traj.states.size(); ++i) {
    report.max_state_gap =
        std::max(report.max_state_gap, (evi_traj.states[i] - swe_traj.states[i]).norm());
    report.max_state_norm = std::max(
        {report.max_state_norm, evi_traj.states[i].norm(), swe_traj.states[i].norm()});
  }
  for (size_t i = 0; i < evi_traj.velocities.size(); ++i)
    report.max_velocity_gap = std::max(
        report.max_velocity_gap, (evi_traj.velocities[i] - swe_traj.velocities[i]).norm());
  report.tolerance = opts.equiv_tol * (1.0 + report.max_state_norm);
  report.pass = report.max_state_gap <= report.tolerance &&
                report.max_velocity_gap <= report.tolerance;
  return report;
}

std::string CrosscheckReport::to_string() const {
  std::ostringstream ss;
  ss.precision(12);
  ss << "max_state_gap: " << max_state_gap << "\n"
     << "max_velocity_gap: " << max_velocity_gap << "\n"
     << "max_state_norm: " << max_state_norm << "\n"
     << "tolerance: " << tolerance << "\n"
     << "pass: " << (pass ? "true" : "false") << "\n";
  return ss.str();
}

}  // namespace sweepvi
