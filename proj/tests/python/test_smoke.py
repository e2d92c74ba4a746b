"""End-to-end smoke tests of the Python bindings.

These rerun a few fixtures whose expected values are established (with
independent oracles) in the native test suite; here the point is that the
bindings expose working objects, not to re-prove the numerics.
"""

import math

import numpy as np
import pytest

import sweepvi as sv


def test_convex_set_projection_and_support():
    box = sv.ConvexSet.box(np.array([-1.0, 0.0]), np.array([1.0, 2.0]))
    assert np.allclose(box.project(np.array([3.0, -1.0])), [1.0, 0.0])
    assert box.distance(np.array([0.0, 1.0])) == 0.0
    assert box.support(np.array([1.0, 1.0])) == pytest.approx(3.0)
    assert box.normal_cone_contains(np.array([1.0, 1.0]), np.array([1.0, 0.0]), 1e-10)

    lens = sv.truncate(sv.ConvexSet.box(np.array([0.0, 0.0]), np.array([3.0, 3.0])), 2.0)
    p = lens.project(np.array([3.0, 3.0]))
    assert np.allclose(p, [math.sqrt(2.0)] * 2, atol=1e-10)


def test_operator_spectral_quantities():
    op = sv.SymmetricOperator(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert op.coercivity_constant() == pytest.approx(1.0, abs=1e-12)
    assert op.operator_norm() == pytest.approx(3.0, abs=1e-12)
    x = op.solve_spd(np.array([3.0, 3.0]))
    assert np.allclose(x, [1.0, 1.0], atol=1e-12)
    report = sv.validate_operators(op, sv.SymmetricOperator.zero(2))
    assert report.passed()
    assert any(c.name == "A.coercive" for c in report.checks)


def test_moving_interval_sweeping_solve():
    problem = sv.SweepingProblem(
        A=sv.SymmetricOperator.identity(1),
        B=sv.SymmetricOperator.zero(1),
        sets=sv.MovingSet.translated(
            sv.ConvexSet.interval(0.0, 1.0), sv.TimePath.ramp(np.array([1.0])), 1.0
        ),
        u0=np.zeros(1),
        horizon=1.0,
    )
    traj = sv.solve(problem, 1000)
    # Discrete states follow t(t+h)/2; at T=1 that is (1+h)/2.
    assert traj.states[-1][0] == pytest.approx(0.5 * (1.0 + 1e-3), abs=1e-9)
    assert sv.viability_residual(traj, problem) <= 1e-9
    bounds = sv.velocity_bounds(problem)
    assert traj.max_velocity_norm() <= bounds.sharp_bound + 1e-6


def test_scalar_stick_slip_final_state():
    problem = sv.EviProblem(
        A=sv.SymmetricOperator.identity(1),
        B=sv.SymmetricOperator.identity(1),
        J=sv.FrictionFunctional(np.array([1.0])),
        load=sv.TimePath.ramp(np.array([1.0])),
        u0=np.zeros(1),
        horizon=3.0,
    )
    traj = sv.solve_evi(problem, 3000)
    assert traj.states[-1][0] == pytest.approx(1.0 + math.exp(-2.0), abs=5e-3)
    report = sv.crosscheck(problem, 500)
    assert report.pass_
    assert "pass: true" in str(report)


def test_contact_demo_runs_and_slips():
    cfg = sv.ContactConfig()
    cfg.nx = 4
    cfg.ny = 4
    run = sv.run_contact(cfg, 40)
    assert run.stick_slip.slip_count > 0
    assert run.stick_slip.first_slip_time is not None
    assert run.stick_slip.max_equilibrium_residual <= 1e-8
    assert len(run.trajectory.states) == 41
    assert len(run.assembly.friction_nodes) == 5


def test_errors_surface_as_python_exceptions():
    with pytest.raises(sv.InvalidArgument):
        sv.ConvexSet.box(np.array([1.0]), np.array([0.0]))
    cfg = sv.ContactConfig()
    cfg.eta = -1.0
    with pytest.raises(sv.InvalidArgument, match="materials.eta"):
        sv.assemble(cfg)
    assert issubclass(sv.InvalidArgument, sv.Error)
