"""Solver toolkit for sweeping processes with an implicit velocity constraint.

The core lives in the compiled extension ``sweepvi._core``; this package
re-exports its public names.  Overview of the main entry points:

- ``ConvexSet`` / ``truncate``: structural convex sets with projection,
  support functions and normal-cone membership tests.
- ``TimePath`` / ``MovingSet``: vector paths of time and moving convex
  families (translated or sampled), with moved-distance moduli.
- ``SweepingProblem`` / ``solve``: catching-up discretization of
  ``-z(t) in N_{C(t)}(A z(t) + B u(t))``.
- ``EviProblem`` / ``solve_evi`` / ``crosscheck``: the equivalent quasistatic
  variational inequality with a weighted-l1 dissipation term, plus the
  two-formulation comparison.
- ``ContactConfig`` / ``run_contact``: antiplane frictional contact demo on a
  structured grid.
"""

from sweepvi._core import (  # noqa: F401
    BoundaryTag,
    CertificateError,
    Check,
    ContactAssembly,
    ContactConfig,
    ContactRun,
    ConvergenceError,
    ConvergenceRow,
    ConvexSet,
    CrosscheckReport,
    Error,
    EviProblem,
    FrictionFunctional,
    InvalidArgument,
    MovingSet,
    ParseError,
    SolverOptions,
    StepError,
    StepOptions,
    StepResult,
    StickSlipRecord,
    StickSlipReport,
    SweepingProblem,
    SymmetricOperator,
    TimePath,
    Trajectory,
    ValidationReport,
    VelocityBounds,
    assemble,
    catching_up_step,
    check_compatibility,
    convergence_study,
    crosscheck,
    evi_step,
    format_double,
    hausdorff_box,
    hausdorff_estimate,
    hausdorff_exact,
    run_contact,
    solve,
    solve_evi,
    to_sweeping,
    truncate,
    validate_moving_set,
    validate_operators,
    velocity_bounds,
    viability_residual,
    write_stickslip_csv,
    write_trajectory_csv,
)

__version__ = "0.1.0"
