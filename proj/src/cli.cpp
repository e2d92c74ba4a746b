#include "sweepvi/cli.hpp"

#include <cmath>

#include "sweepvi/config.hpp"
#include "sweepvi/csv.hpp"
#include "sweepvi/errors.hpp"

namespace sweepvi::cli {

namespace {

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "parse error";
    if (!e.field.empty()) err << " [" << e.field << "]";
    if (e.line > 0) err << " (line " << e.line << ")";
    err << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
}

RunConfig load_with_overrides(const CommonOptions& opts) {
  RunConfig cfg = load_run_config(opts.config);
  if (opts.steps) {
    if (*opts.steps < 1) throw ParseError("n must be >= 1", 0, "--n");
    cfg.steps = *opts.steps;
  }
  if (opts.tol) {
    if (!(*opts.tol > 0.0)) throw ParseError("tol must be > 0", 0, "--tol");
    cfg.solver.tol = *opts.tol;
  }
  if (opts.out_dir) cfg.out_dir = *opts.out_dir;
  if (cfg.contact) cfg.contact->horizon = cfg.horizon;
  return cfg;
}

void merge(ValidationReport& into, const ValidationReport& from, const std::string& prefix) {
  for (const auto& c : from.checks)
    into.checks.push_back({prefix + c.name, c.passed, c.value, c.detail});
}

std::vector<double> uniform_grid(double horizon, int steps) {
  std::vector<double> grid(static_cast<size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i)
    grid[static_cast<size_t>(i)] = horizon * static_cast<double>(i) / steps;
  return grid;
}

ValidationReport validate_config(const RunConfig& cfg) {
  ValidationReport report;
  switch (cfg.kind) {
    case ProblemKind::scalar_demo: {
      const auto& s = *cfg.scalar;
      report.add("scalar.g_nonnegative", s.g >= 0.0, s.g);
      report.add("scalar.a_coercive", s.a > 1e-10, s.a);
      report.add("scalar.b_semidefinite", s.b >= -1e-10, s.b);
      if (!report.passed()) break;
      const EviProblem p = build_scalar_problem(s, cfg.horizon);
      const CompatibilityMargin m = compatibility_margin(p.B, p.u0, p.load.value(0.0), p.J);
      report.add("initial.compatible", m.worst_margin >= -1e-8, m.worst_margin,
                 "min over coordinates of g_i - |f_i(0) - (B u0)_i|");
      merge(report, validate_moving_set(to_sweeping(p).sets, uniform_grid(cfg.horizon, cfg.steps)),
            "");
      break;
    }
    case ProblemKind::translated_family: {
      const auto& f = *cfg.family;
      bool ops_ok = true;
      try {
        SymmetricOperator A{f.A};
        report.add("operators.A", true, static_cast<double>(A.dim()), "loaded and symmetric");
      } catch (const Error& e) {
        report.add("operators.A", false, 0.0, e.what());
        ops_ok = false;
      }
      try {
        SymmetricOperator B{f.B};
        report.add("operators.B", true, static_cast<double>(B.dim()), "loaded and symmetric");
      } catch (const Error& e) {
        report.add("operators.B", false, 0.0, e.what());
        ops_ok = false;
      }
      if (!ops_ok) break;
      SymmetricOperator A{f.A}, B{f.B};
      const bool dims_ok = A.dim() == B.dim() && A.dim() == f.base.dim() &&
                           A.dim() == f.path.dim() && A.dim() == f.u0.size();
      report.add("dimensions.agree", dims_ok, static_cast<double>(A.dim()));
      if (!dims_ok) break;
      merge(report, validate_operators(A, B), "");
      const MovingSet sets = MovingSet::translated(f.base, f.path, cfg.horizon);
      const double viability = sets.set_at(0.0).distance(B.apply(f.u0));
      report.add("initial.viable", viability <= 1e-8, viability,
                 "distance of B u0 to the set at t = 0");
      merge(report, validate_moving_set(sets, uniform_grid(cfg.horizon, cfg.steps)), "");
      break;
    }
    case ProblemKind::contact: {
      std::optional<ContactAssembly> assembly;
      try {
        assembly = assemble(*cfg.contact);
      } catch (const Error& e) {
        report.add("contact.config", false, 0.0, e.what());
        break;
      }
      report.add("contact.config", true, static_cast<double>(assembly->problem.A.dim()),
                 "free degrees of freedom");
      const EviProblem& p = assembly->problem;
      merge(report, validate_operators(p.A, p.B), "");
      const CompatibilityMargin m = compatibility_margin(p.B, p.u0, p.load.value(0.0), p.J);
      report.add("initial.compatible", m.worst_margin >= -1e-8, m.worst_margin,
                 "worst node " +
                     std::to_string(
                         assembly->free_nodes[static_cast<size_t>(m.worst_index)]));
      if (m.worst_margin >= -1e-8)
        merge(report,
              validate_moving_set(to_sweeping(p).sets, uniform_grid(cfg.horizon, cfg.steps)), "");
      break;
    }
  }
  return report;
}

void print_run_summary(std::ostream& out, const Trajectory& traj, const SweepingProblem& sp) {
  const VelocityBounds vb = velocity_bounds(sp);
  out << "max_velocity_norm: " << format_double(traj.max_velocity_norm()) << "\n"
      << "velocity_bound_conservative: " << format_double(vb.conservative_bound) << "\n"
      << "velocity_bound_sharp: " << format_double(vb.sharp_bound) << "\n"
      << "viability_residual: " << format_double(viability_residual(traj, sp)) << "\n"
      << "final_state_norm: " << format_double(traj.states.back().norm()) << "\n";
}

}  // namespace

int cmd_validate(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_with_overrides(opts);
    const ValidationReport report = validate_config(cfg);
    out << report.to_string();
    if (!report.passed()) {
      err << "validation failed\n";
      return kExitFailure;
    }
    out << "config ok\n";
    return kExitOk;
  });
}

int cmd_run(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_with_overrides(opts);
    const ValidationReport report = validate_config(cfg);
    if (!report.passed()) {
      out << report.to_string();
      err << "validation failed\n";
      return kExitFailure;
    }
    switch (cfg.kind) {
      case ProblemKind::scalar_demo: {
        const EviProblem p = build_scalar_problem(*cfg.scalar, cfg.horizon);
        const Trajectory traj = solve_evi(p, cfg.steps, cfg.solver);
        write_trajectory_csv(cfg.out_dir / "trajectory.csv", traj);
        print_run_summary(out, traj, to_sweeping(p));
        break;
      }
      case ProblemKind::translated_family: {
        const SweepingProblem sp = build_family_problem(*cfg.family, cfg.horizon);
        const Trajectory traj = solve(sp, cfg.steps, cfg.solver);
        write_trajectory_csv(cfg.out_dir / "trajectory.csv", traj);
        print_run_summary(out, traj, sp);
        break;
      }
      case ProblemKind::contact: {
        const ContactRun run = run_contact(*cfg.contact, cfg.steps, cfg.solver);
        write_trajectory_csv(cfg.out_dir / "trajectory.csv", run.trajectory);
        write_stickslip_csv(cfg.out_dir / "stickslip.csv", run.stick_slip);
        print_run_summary(out, run.trajectory, to_sweeping(run.assembly.problem));
        out << "stick_count: " << run.stick_slip.stick_count << "\n"
            << "slip_count: " << run.stick_slip.slip_count << "\n";
        if (run.stick_slip.first_slip_time)
          out << "first_slip_time: " << format_double(*run.stick_slip.first_slip_time) << "\n";
        break;
      }
    }
    return kExitOk;
  });
}

int cmd_crosscheck(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_with_overrides(opts);
    const ValidationReport report = validate_config(cfg);
    if (!report.passed()) {
      out << report.to_string();
      err << "validation failed\n";
      return kExitFailure;
    }
    std::optional<EviProblem> problem;
    switch (cfg.kind) {
      case ProblemKind::scalar_demo:
        problem = build_scalar_problem(*cfg.scalar, cfg.horizon);
        break;
      case ProblemKind::contact:
        problem = assemble(*cfg.contact).problem;
        break;
      case ProblemKind::translated_family:
        err << "crosscheck needs a problem with a dissipation functional "
               "(kind scalar-demo or contact)\n";
        return kExitUsage;
    }
    const CrosscheckReport rep = crosscheck(*problem, cfg.steps, cfg.solver);
    out << rep.to_string();
    return rep.pass ? kExitOk : kExitFailure;
  });
}

int cmd_converge(const CommonOptions& opts, const std::vector<int>& ns_flag, std::ostream& out,
                 std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_with_overrides(opts);
    const ValidationReport report = validate_config(cfg);
    if (!report.passed()) {
      out << report.to_string();
      err << "validation failed\n";
      return kExitFailure;
    }
    std::optional<SweepingProblem> sp;
    switch (cfg.kind) {
      case ProblemKind::scalar_demo:
        sp = to_sweeping(build_scalar_problem(*cfg.scalar, cfg.horizon));
        break;
      case ProblemKind::translated_family:
        sp = build_family_problem(*cfg.family, cfg.horizon);
        break;
      case ProblemKind::contact:
        sp = to_sweeping(assemble(*cfg.contact).problem);
        break;
    }
    std::vector<int> ns = !ns_flag.empty() ? ns_flag : cfg.ns;
    if (ns.empty()) ns = {cfg.steps, 2 * cfg.steps, 4 * cfg.steps};
    const std::vector<ConvergenceRow> rows = convergence_study(*sp, ns, cfg.solver);
    write_convergence_csv(cfg.out_dir / "convergence.csv", rows);
    for (const auto& row : rows) {
      out << "n: " << row.n;
      if (!std::isnan(row.err_vs_next)) out << "  err_vs_next: " << format_double(row.err_vs_next);
      if (!std::isnan(row.ratio)) out << "  ratio: " << format_double(row.ratio);
      out << "\n";
    }
    return kExitOk;
  });
}

int cmd_contact_demo(const ContactDemoOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.steps < 1) throw ParseError("n must be >= 1", 0, "--n");
    if (!(opts.tol > 0.0)) throw ParseError("tol must be > 0", 0, "--tol");
    ContactConfig cfg;  // built-in demo: defaults of ContactConfig
    SolverOptions solver;
    solver.tol = opts.tol;
    solver.crosscheck = true;
    const ContactRun run = run_contact(cfg, opts.steps, solver);
    write_trajectory_csv(opts.out_dir / "trajectory.csv", run.trajectory);
    write_stickslip_csv(opts.out_dir / "stickslip.csv", run.stick_slip);
    print_run_summary(out, run.trajectory, to_sweeping(run.assembly.problem));
    out << "stick_count: " << run.stick_slip.stick_count << "\n"
        << "slip_count: " << run.stick_slip.slip_count << "\n";
    if (run.stick_slip.first_slip_time)
      out << "first_slip_time: " << format_double(*run.stick_slip.first_slip_time) << "\n";
    out << "max_equilibrium_residual: "
        << format_double(run.stick_slip.max_equilibrium_residual) << "\n";
    out << "crosscheck:\n" << run.crosscheck->to_string();
    return run.crosscheck->pass ? kExitOk : kExitFailure;
  });
}

}  // namespace sweepvi::cli
