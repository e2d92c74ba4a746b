#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "sweepvi/evi.hpp"

namespace sweepvi {

/// Role of one side of the rectangular domain.
enum class BoundaryTag {
  clamped,   ///< zero displacement (eliminated from the system)
  traction,  ///< prescribed surface traction
  friction,  ///< frictional contact with a given slip bound
};

/// Antiplane shear layer on a rectangle: out-of-plane displacement on a
/// structured triangulated grid, viscosity eta (velocity stiffness), elastic
/// modulus kappa (state stiffness), scalar body force f0(t), scalar surface
/// traction f2(t) on the traction sides, and a friction bound g on the
/// friction sides.
struct ContactConfig {
  int nx = 8, ny = 8;           ///< cells per direction
  double lx = 1.0, ly = 1.0;    ///< side lengths
  double eta = 1.0;             ///< viscosity coefficient; must be > 0
  double kappa = 1.0;           ///< elastic coefficient; must be >= 0
  BoundaryTag left = BoundaryTag::clamped;
  BoundaryTag right = BoundaryTag::friction;
  BoundaryTag bottom = BoundaryTag::traction;
  BoundaryTag top = BoundaryTag::traction;
  TimePath f0 = TimePath::constant(Eigen::VectorXd::Zero(1));  ///< body force, scalar path
  TimePath f2 = TimePath::ramp(Eigen::VectorXd::Ones(1));      ///< surface traction, scalar path
  Eigen::VectorXd g = Eigen::VectorXd::Constant(1, 1.0);  ///< one value, or one per friction node
  std::optional<Eigen::VectorXd> u0;  ///< free-dof initial state; default: elastic equilibrium
  double horizon = 1.0;
};

/// Discretized problem on the free (unclamped) nodes, plus the bookkeeping
/// needed to interpret trajectories: node numbering, lumped masses, and the
/// per-dof friction weights (zero off the friction boundary).
struct ContactAssembly {
  EviProblem problem;
  std::vector<int> free_nodes;      ///< global node id of each free dof
  std::vector<int> friction_dofs;   ///< free-dof indices lying on the friction boundary
  std::vector<int> friction_nodes;  ///< their global node ids (same order)
  Eigen::VectorXd domain_mass;      ///< lumped area mass per free dof
  Eigen::VectorXd traction_mass;    ///< lumped traction-boundary mass per free dof
  Eigen::VectorXd friction_weights; ///< integrated slip bound per free dof
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
};

/// Builds stiffness operators (A from eta, B from kappa), the lumped load
/// path M f0(t) + M_boundary f2(t), the friction functional, and the default
/// initial state (elastic equilibrium B u0 = load(0) when kappa > 0, zero
/// otherwise).  Rejects invalid configs naming the offending field.
ContactAssembly assemble(const ContactConfig& config);

struct StickSlipRecord {
  double time;
  int node;                  ///< global node id
  bool slip;                 ///< |velocity| above 10 * tol
  double traction_residual;  ///< (A w + B u_prev - f)_i ; opposes the velocity when slipping
};

struct StickSlipReport {
  std::vector<StickSlipRecord> records;    ///< one per (time node, friction node)
  double max_equilibrium_residual = 0.0;   ///< off-friction dofs, all steps
  double max_traction_excess = 0.0;        ///< max of |traction| - weight over friction dofs
  int stick_count = 0, slip_count = 0;
  std::optional<double> first_slip_time;
};

struct ContactRun {
  ContactAssembly assembly;
  Trajectory trajectory;  ///< variational-inequality trajectory on the free dofs
  StickSlipReport stick_slip;
  std::optional<CrosscheckReport> crosscheck;  ///< set when opts.crosscheck
};

/// Assembles, verifies initial compatibility (rejecting with the violating
/// node and margin), solves the quasistatic evolution with `steps` uniform
/// steps, and classifies each friction node per step as sticking or slipping.
/// With opts.crosscheck the set-valued formulation is solved too and compared.
ContactRun run_contact(const ContactConfig& config, int steps, const SolverOptions& opts = {});

}  // namespace sweepvi
