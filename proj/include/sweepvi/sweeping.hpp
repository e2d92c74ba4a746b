#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "sweepvi/moving_set.hpp"
#include "sweepvi/operators.hpp"

namespace sweepvi {

struct StepOptions {
  double tol = 1e-10;
  long max_iter = 50000;
};

struct SolverOptions {
  double tol = 1e-10;
  long max_iter = 50000;
  double equiv_tol = 1e-6;   ///< tolerance of the two-formulation cross-check
  bool crosscheck = false;   ///< contact runs: also solve the set-valued form and compare
};

struct StepResult {
  Eigen::VectorXd velocity;
  double residual;   ///< fixed-point gap of the inner iteration at exit
  long iterations;
};

/// Time-discretized evolution: states u_0..u_n at the grid nodes and the
/// per-step velocities z_1..z_n, with z_{i+1} attached to (t_i, t_{i+1}].
class Trajectory {
public:
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;       // n+1 entries
  std::vector<Eigen::VectorXd> velocities;   // n entries
  std::vector<double> step_residuals;        // n entries

  /// Piecewise-linear state and piecewise-constant velocity at time t.
  /// At grid nodes the velocity of the step starting there is reported
  /// (z_1 at t=0, z_n at t=T).
  std::pair<Eigen::VectorXd, Eigen::VectorXd> interpolate(double t) const;

  double max_velocity_norm() const;
  Eigen::Index dim() const { return states.empty() ? 0 : states.front().size(); }
  int steps() const { return static_cast<int>(velocities.size()); }
};

/// Evolution problem: find u with u(0) = u0 whose velocity z satisfies, at
/// each time, the set-valued law  -z(t) in N_{C(t)}(A z(t) + B u(t)).
struct SweepingProblem {
  SymmetricOperator A, B;
  MovingSet sets;
  Eigen::VectorXd u0;
  double horizon;
};

/// One implicit step: finds z with -z in N_{next_set}(A z + B u_prev).
/// Internally projects b = B u_prev onto next_set in the A^{-1} metric by a
/// fixed-step projected gradient iteration, then recovers z = A^{-1}(y - b).
/// The iteration stops only once both the fixed-point gap is below
/// tol * (1 + |y|) and the normal-cone certificate holds at 10 * tol;
/// exhausting max_iter raises ConvergenceError (gap never met) or
/// CertificateError (gap met, certificate never met).
StepResult catching_up_step(const SymmetricOperator& A, const SymmetricOperator& B,
                            const ConvexSet& next_set, const Eigen::VectorXd& u_prev,
                            const StepOptions& opts = {});

/// Catching-up discretization on the uniform grid with `steps` steps.
/// Validates the standing assumptions, grid compatibility for sampled
/// families, and initial viability (distance of B u0 to C(0) at most 1e-8)
/// up front; any failing step aborts with the step index attached.
Trajectory solve(const SweepingProblem& problem, int steps, const SolverOptions& opts = {});

/// max over steps of distance(C(t_{i+1}), A z_{i+1} + B u_i): how far the
/// discrete law is from holding along a trajectory.
double viability_residual(const Trajectory& trajectory, const SweepingProblem& problem);

struct VelocityBounds {
  double conservative_bound;  ///< (8 v(T) / beta) * exp(|B| T / beta)
  double sharp_bound;         ///< (v(T) / beta) * exp(|B| T / beta)
};

/// A priori sup-norm bounds on the discrete velocities, from the moved
/// distance of the family and the operator constants.
VelocityBounds velocity_bounds(const SweepingProblem& problem);

struct ConvergenceRow {
  int n;
  double err_vs_next;  ///< max state gap at shared nodes against the next finer run
  double ratio;        ///< err(n) / err(next n); NaN on the final row
};

/// Solves on each grid size of `ns` (each entry double the previous) and
/// compares consecutive runs at shared nodes.
std::vector<ConvergenceRow> convergence_study(const SweepingProblem& problem,
                                              std::span<const int> ns,
                                              const SolverOptions& opts = {});

}  // namespace sweepvi
