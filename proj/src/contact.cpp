#include "sweepvi/contact.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sweepvi/errors.hpp"

namespace sweepvi {

namespace {

struct Mesh {
  int nx, ny;
  double hx, hy;
  int node(int ix, int iy) const { return ix + iy * (nx + 1); }
  int n_nodes() const { return (nx + 1) * (ny + 1); }
};

// Stiffness of one linear triangle with coefficient `coeff`:
// K_ij = coeff * (b_i b_j + c_i c_j) / (4 area), the standard gradient form.
void add_triangle_stiffness(Eigen::MatrixXd& K, double coeff, const int n[3], const double x[3],
                            const double y[3]) {
  const double b[3] = {y[1] - y[2], y[2] - y[0], y[0] - y[1]};
  const double c[3] = {x[2] - x[1], x[0] - x[2], x[1] - x[0]};
  const double area = 0.5 * ((x[1] - x[0]) * (y[2] - y[0]) - (x[2] - x[0]) * (y[1] - y[0]));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      K(n[i], n[j]) += coeff * (b[i] * b[j] + c[i] * c[j]) / (4.0 * area);
}

struct SideNodes {
  std::vector<int> nodes;
  double edge_len;  // length of one segment along this side
};

SideNodes side_nodes(const Mesh& m, int side /*0=left,1=right,2=bottom,3=top*/) {
  SideNodes s;
  if (side == 0 || side == 1) {
    const int ix = (side == 0) ? 0 : m.nx;
    for (int iy = 0; iy <= m.ny; ++iy) s.nodes.push_back(m.node(ix, iy));
    s.edge_len = m.hy;
  } else {
    const int iy = (side == 2) ? 0 : m.ny;
    for (int ix = 0; ix <= m.nx; ++ix) s.nodes.push_back(m.node(ix, iy));
    s.edge_len = m.hx;
  }
  return s;
}

}  // namespace

ContactAssembly assemble(const ContactConfig& config) {
  if (config.nx < 1) throw InvalidArgument("grid.nx: must be >= 1");
  if (config.ny < 1) throw InvalidArgument("grid.ny: must be >= 1");
  if (!(config.lx > 0.0)) throw InvalidArgument("grid.lx: must be > 0");
  if (!(config.ly > 0.0)) throw InvalidArgument("grid.ly: must be > 0");
  if (!(config.eta > 0.0)) throw InvalidArgument("materials.eta: must be > 0");
  if (!(config.kappa >= 0.0)) throw InvalidArgument("materials.kappa: must be >= 0");
  if (config.f0.dim() != 1) throw InvalidArgument("load.f0: must be a scalar path");
  if (config.f2.dim() != 1) throw InvalidArgument("load.f2: must be a scalar path");
  if (!(config.horizon > 0.0)) throw InvalidArgument("time.T: must be > 0");
  const BoundaryTag tags[4] = {config.left, config.right, config.bottom, config.top};
  if (std::count(tags, tags + 4, BoundaryTag::clamped) == 0)
    throw InvalidArgument("boundary: at least one side must be clamped");

  const Mesh mesh{config.nx, config.ny, config.lx / config.nx, config.ly / config.ny};
  const int n_all = mesh.n_nodes();

  Eigen::MatrixXd K_eta = Eigen::MatrixXd::Zero(n_all, n_all);
  Eigen::MatrixXd K_kappa = Eigen::MatrixXd::Zero(n_all, n_all);
  Eigen::VectorXd area_mass = Eigen::VectorXd::Zero(n_all);
  for (int cy = 0; cy < mesh.ny; ++cy) {
    for (int cx = 0; cx < mesh.nx; ++cx) {
      const int n00 = mesh.node(cx, cy), n10 = mesh.node(cx + 1, cy);
      const int n01 = mesh.node(cx, cy + 1), n11 = mesh.node(cx + 1, cy + 1);
      const double x0 = cx * mesh.hx, x1 = (cx + 1) * mesh.hx;
      const double y0 = cy * mesh.hy, y1 = (cy + 1) * mesh.hy;
      // Both triangles of the cell, split along the lower-left diagonal.
      const int ta[3] = {n00, n10, n11};
      const double tax[3] = {x0, x1, x1}, tay[3] = {y0, y0, y1};
      const int tb[3] = {n00, n11, n01};
      const double tbx[3] = {x0, x1, x0}, tby[3] = {y0, y1, y1};
      add_triangle_stiffness(K_eta, config.eta, ta, tax, tay);
      add_triangle_stiffness(K_eta, config.eta, tb, tbx, tby);
      add_triangle_stiffness(K_kappa, config.kappa, ta, tax, tay);
      add_triangle_stiffness(K_kappa, config.kappa, tb, tbx, tby);
      const double tri_share = 0.5 * mesh.hx * mesh.hy / 3.0;  // lumped area mass
      for (const int n : ta) area_mass(n) += tri_share;
      for (const int n : tb) area_mass(n) += tri_share;
    }
  }

  Eigen::VectorXd traction_mass_all = Eigen::VectorXd::Zero(n_all);
  Eigen::VectorXd friction_mass_all = Eigen::VectorXd::Zero(n_all);
  std::set<int> clamped, friction_set;
  for (int side = 0; side < 4; ++side) {
    const SideNodes s = side_nodes(mesh, side);
    if (tags[side] == BoundaryTag::clamped) {
      clamped.insert(s.nodes.begin(), s.nodes.end());
    } else {
      Eigen::VectorXd& mass =
          (tags[side] == BoundaryTag::traction) ? traction_mass_all : friction_mass_all;
      for (size_t k = 0; k + 1 < s.nodes.size(); ++k) {
        mass(s.nodes[k]) += 0.5 * s.edge_len;
        mass(s.nodes[k + 1]) += 0.5 * s.edge_len;
      }
      if (tags[side] == BoundaryTag::friction)
        friction_set.insert(s.nodes.begin(), s.nodes.end());
    }
  }
  for (const int n : clamped) friction_set.erase(n);

  std::vector<int> free_nodes;
  for (int n = 0; n < n_all; ++n)
    if (!clamped.count(n)) free_nodes.push_back(n);
  const int n_free = static_cast<int>(free_nodes.size());

  std::vector<int> friction_nodes(friction_set.begin(), friction_set.end());
  if (config.g.size() != 1 &&
      config.g.size() != static_cast<Eigen::Index>(friction_nodes.size()))
    throw InvalidArgument("friction.g: expected 1 or " + std::to_string(friction_nodes.size()) +
                          " values, got " + std::to_string(config.g.size()));
  for (Eigen::Index i = 0; i < config.g.size(); ++i)
    if (!(config.g(i) >= 0.0) || !std::isfinite(config.g(i)))
      throw InvalidArgument("friction.g: values must be finite and >= 0");

  std::vector<int> dof_of_node(n_all, -1);
  for (int d = 0; d < n_free; ++d) dof_of_node[free_nodes[static_cast<size_t>(d)]] = d;

  Eigen::MatrixXd A_free(n_free, n_free), B_free(n_free, n_free);
  for (int i = 0; i < n_free; ++i)
    for (int j = 0; j < n_free; ++j) {
      A_free(i, j) = K_eta(free_nodes[static_cast<size_t>(i)], free_nodes[static_cast<size_t>(j)]);
      B_free(i, j) =
          K_kappa(free_nodes[static_cast<size_t>(i)], free_nodes[static_cast<size_t>(j)]);
    }

  Eigen::VectorXd domain_mass(n_free), traction_mass(n_free), weights(n_free);
  weights.setZero();
  for (int d = 0; d < n_free; ++d) {
    const int n = free_nodes[static_cast<size_t>(d)];
    domain_mass(d) = area_mass(n);
    traction_mass(d) = traction_mass_all(n);
  }
  for (size_t k = 0; k < friction_nodes.size(); ++k) {
    const int n = friction_nodes[k];
    const double gval = (config.g.size() == 1) ? config.g(0) : config.g(static_cast<Eigen::Index>(k));
    weights(dof_of_node[n]) = gval * friction_mass_all(n);
  }

  std::vector<int> friction_dofs;
  friction_dofs.reserve(friction_nodes.size());
  for (const int n : friction_nodes) friction_dofs.push_back(dof_of_node[n]);

  SymmetricOperator A{std::move(A_free)};
  SymmetricOperator B{std::move(B_free)};

  TimePath load = TimePath::closed_form(
      n_free,
      [domain_mass, traction_mass, f0 = config.f0, f2 = config.f2](double t) {
        return Eigen::VectorXd(domain_mass * f0.value(t)(0) + traction_mass * f2.value(t)(0));
      },
      [domain_mass, traction_mass, f0 = config.f0, f2 = config.f2](double t) {
        return Eigen::VectorXd(domain_mass * f0.derivative(t)(0) +
                               traction_mass * f2.derivative(t)(0));
      });

  Eigen::VectorXd u0;
  if (config.u0) {
    if (config.u0->size() != n_free)
      throw InvalidArgument("initial.u0: expected " + std::to_string(n_free) +
                            " values (one per free node), got " +
                            std::to_string(config.u0->size()));
    u0 = *config.u0;
  } else if (config.kappa > 0.0) {
    u0 = B.solve_spd(load.value(0.0));  // elastic equilibrium under the initial load
  } else {
    u0 = Eigen::VectorXd::Zero(n_free);
  }

  return ContactAssembly{
      EviProblem{std::move(A), std::move(B), FrictionFunctional{weights}, std::move(load),
                 std::move(u0), config.horizon},
      std::move(free_nodes),
      std::move(friction_dofs),
      std::move(friction_nodes),
      std::move(domain_mass),
      std::move(traction_mass),
      weights,
      config.nx,
      config.ny,
      config.lx,
      config.ly};
}

ContactRun run_contact(const ContactConfig& config, int steps, const SolverOptions& opts) {
  ContactAssembly assembly = assemble(config);
  const EviProblem& p = assembly.problem;

  const CompatibilityMargin m =
      compatibility_margin(p.B, p.u0, p.load.value(0.0), p.J);
  if (m.worst_margin < -1e-8)
    throw InvalidArgument(
        "contact: initial state incompatible with the load at node " +
        std::to_string(assembly.free_nodes[static_cast<size_t>(m.worst_index)]) +
        " (margin " + std::to_string(m.worst_margin) + ")");

  Trajectory traj = solve_evi(p, steps, opts);

  StickSlipReport report;
  report.max_traction_excess = -std::numeric_limits<double>::infinity();
  const double slip_threshold = 10.0 * opts.tol;
  std::vector<bool> is_friction(static_cast<size_t>(p.A.dim()), false);
  for (const int d : assembly.friction_dofs) is_friction[static_cast<size_t>(d)] = true;
  for (int i = 0; i < traj.steps(); ++i) {
    const double t = traj.times[static_cast<size_t>(i) + 1];
    const Eigen::VectorXd& w = traj.velocities[static_cast<size_t>(i)];
    const Eigen::VectorXd resid =
        p.A.apply(w) + p.B.apply(traj.states[static_cast<size_t>(i)]) - p.load.value(t);
    for (Eigen::Index d = 0; d < resid.size(); ++d) {
      if (!is_friction[static_cast<size_t>(d)]) {
        report.max_equilibrium_residual =
            std::max(report.max_equilibrium_residual, std::abs(resid(d)));
      }
    }
    for (size_t k = 0; k < assembly.friction_dofs.size(); ++k) {
      const int d = assembly.friction_dofs[k];
      const bool slip = std::abs(w(d)) > slip_threshold;
      report.records.push_back({t, assembly.friction_nodes[k], slip, resid(d)});
      report.max_traction_excess = std::max(
          report.max_traction_excess, std::abs(resid(d)) - assembly.friction_weights(d));
      if (slip) {
        ++report.slip_count;
        if (!report.first_slip_time) report.first_slip_time = t;
      } else {
        ++report.stick_count;
      }
    }
  }
  if (assembly.friction_dofs.empty()) report.max_traction_excess = 0.0;

  ContactRun run{std::move(assembly), std::move(traj), std::move(report), std::nullopt};
  if (opts.crosscheck) run.crosscheck = crosscheck(run.assembly.problem, steps, opts);
  return run;
}

}  // namespace sweepvi
