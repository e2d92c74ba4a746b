#pragma once

#include <Eigen/Dense>
#include <string>

#include "sweepvi/convex.hpp"
#include "sweepvi/sweeping.hpp"

namespace sweepvi {

/// Weighted l1 functional J(w) = sum_i g_i |w_i| with weights g_i >= 0.
/// Positively homogeneous; its subdifferential at the origin is the box
/// [-g, g] (degenerate to {0} in coordinates with g_i = 0), and its proximal
/// map is coordinatewise soft-thresholding.
class FrictionFunctional {
public:
  explicit FrictionFunctional(Eigen::VectorXd weights);

  Eigen::Index dim() const { return weights_.size(); }
  const Eigen::VectorXd& weights() const { return weights_; }

  double value(const Eigen::VectorXd& w) const;

  /// prox_{s J}(x): componentwise sign(x_i) * max(|x_i| - s g_i, 0); s > 0.
  Eigen::VectorXd prox(const Eigen::VectorXd& x, double s) const;

  /// The subdifferential at the origin as a box set.
  ConvexSet subdiff_zero() const;

private:
  Eigen::VectorXd weights_;
};

/// Quasistatic evolution: find u with u(0) = u0 such that at each time the
/// velocity w solves the variational inequality
///   <A w, v - w> + J(v) - J(w) >= <f(t) - B u(t), v - w>  for all v.
struct EviProblem {
  SymmetricOperator A, B;
  FrictionFunctional J;
  TimePath load;
  Eigen::VectorXd u0;
  double horizon;
};

/// One implicit step: minimizes (1/2)<A w, w> + <B u_prev - f_next, w> + J(w)
/// by proximal gradient with fixed step 1/|A|, started at w = 0.  Stops only
/// once both the fixed-point gap is below tol * (1 + |w|) and the computed
/// subgradient certificate xi = f_next - A w - B u_prev lies in dJ(w)
/// componentwise at 10 * tol; exhausting max_iter raises ConvergenceError
/// (gap never met) or CertificateError (certificate never met).
StepResult evi_step(const SymmetricOperator& A, const SymmetricOperator& B,
                    const Eigen::VectorXd& u_prev, const Eigen::VectorXd& f_next,
                    const FrictionFunctional& J, const StepOptions& opts = {});

/// Initial compatibility: |(f0 - B u0)_i| <= g_i + tol for every coordinate;
/// equivalent to B u0 lying in the set C(0) of the converted family.
bool check_compatibility(const SymmetricOperator& B, const Eigen::VectorXd& u0,
                         const Eigen::VectorXd& f0, const FrictionFunctional& J,
                         double tol = 1e-8);

struct CompatibilityMargin {
  double worst_margin;        ///< min_i (g_i - |(f0 - B u0)_i|); >= -tol iff compatible
  Eigen::Index worst_index;
};

CompatibilityMargin compatibility_margin(const SymmetricOperator& B, const Eigen::VectorXd& u0,
                                         const Eigen::VectorXd& f0,
                                         const FrictionFunctional& J);

/// The equivalent set-valued evolution: C(t) = f(t) - dJ(0), a translated
/// family over the reflected subdifferential box.  Rejects problems whose
/// initial state fails compatibility at t = 0 (tolerance 1e-8), which is
/// exactly the initial-viability requirement of the converted problem.
SweepingProblem to_sweeping(const EviProblem& problem);

/// Implicit time stepping of the variational inequality on a uniform grid.
Trajectory solve_evi(const EviProblem& problem, int steps, const SolverOptions& opts = {});

/// Runs both formulations on the same grid and compares them node by node.
struct CrosscheckReport {
  double max_state_gap = 0.0;
  double max_velocity_gap = 0.0;
  double max_state_norm = 0.0;
  double tolerance = 0.0;  ///< equiv_tol * (1 + max_state_norm)
  bool pass = false;
  std::string to_string() const;  // "key: value" lines
};

CrosscheckReport crosscheck(const EviProblem& problem, int steps,
                            const SolverOptions& opts = {});

}  // namespace sweepvi
