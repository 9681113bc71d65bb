import numpy as np
import pytest

from membrane.core import InitialDatum, Profile, RunStatus
from membrane.initdata import datum_to_uvstate, initial_rtilde
from membrane.solver import (SolverParams, monitor_invariants, run, step,
                             _minmod, _upwind_derivative)


def test_solver_params_validation():
    with pytest.raises(ValueError):
        SolverParams(cfl=1.5)
    with pytest.raises(ValueError):
        SolverParams(grid_n=16)
    with pytest.raises(ValueError):
        SolverParams(limiter="superbee")


def test_minmod():
    assert _minmod(np.array([1.0]), np.array([2.0]))[0] == 1.0
    assert _minmod(np.array([-1.0]), np.array([2.0]))[0] == 0.0
    assert _minmod(np.array([-3.0]), np.array([-2.0]))[0] == -2.0


def test_upwind_derivative_exact_on_linear_data():
    r = np.linspace(0.0, 1.0, 33)
    f = 2.0 + 3.0 * r
    for limiter in ("none", "minmod"):
        for lam_sign in (1.0, -1.0):
            d = _upwind_derivative(f, lam_sign * np.ones_like(f), r[1] - r[0],
                                   limiter)
            assert np.allclose(d, 3.0, atol=1e-12)


def _static_datum():
    prof = Profile(lambda r: 0.0 * np.asarray(r),
                   lambda r: 0.0 * np.asarray(r))
    return InitialDatum(r1=1.0, r2=2.0, v0=2.0, u_bar=prof)


def test_static_state_stays_static():
    # u = 0, v = const is an exact steady solution (F(0, v) = 0)
    d = _static_datum()
    sol = run(d, SolverParams(grid_n=128, t_max=0.1, snapshot_stride=4),
              force=True)
    assert sol.report.run_status == RunStatus.MAX_TIME_REACHED
    for s in sol.snapshots:
        assert np.allclose(s.u_field, 0.0, atol=1e-13)
        assert np.allclose(s.v_field, 2.0, atol=1e-12)


def test_step_single_state():
    d = _static_datum()
    s0 = datum_to_uvstate(d, 128)
    s1 = step(s0, SolverParams(grid_n=128))
    assert s1.time > s0.time
    assert np.allclose(s1.v_field, 2.0, atol=1e-12)


def test_run_rejects_invalid_datum_without_force():
    d = _static_datum()  # fails A1: u_bar(r2) <= 1/v0
    with pytest.raises(ValueError):
        run(d, SolverParams(grid_n=128, t_max=0.01))


def test_blowup_run_reaches_threshold(sol1024, datum):
    rep = sol1024.report
    assert rep.run_status == RunStatus.BLEW_UP
    assert rep.v_max >= 1e3
    assert rep.t_blow_observed is not None
    assert rep.t_blow_observed < rep.t_star_bound
    assert rep.t_blow_uncertainty < 1e-2
    assert rep.invariant_violations == 0
    assert datum.r1 < rep.v_max_location < datum.r2


def test_snapshots_do_not_alias_solver_buffers(sol512, datum):
    # regression: early snapshots must keep their own field copies
    first = sol512.snapshots[0]
    assert np.allclose(first.v_field, datum.v0)
    assert first.time == 0.0


def test_window_shrinks_monotonically(sol512):
    lefts = np.array([s.left_boundary for s in sol512.snapshots])
    rights = np.array([s.right_boundary for s in sol512.snapshots])
    assert np.all(np.diff(lefts) >= 0.0)
    assert np.all(np.diff(rights) <= 0.0)
    assert np.all(lefts < rights)


def test_snapshot_grids_stay_inside_window(sol512):
    for s in sol512.snapshots[::20]:
        assert s.grid[0] >= s.left_boundary - 1e-12
        assert s.grid[-1] <= s.right_boundary + 1e-12


def test_mass_series_recorded(sol512):
    assert sol512.mass_times.size == len(sol512.snapshots)
    assert sol512.report.mass_drift_rel <= 1e-3
    # the initial mass matches the exact integral of r * v0
    d = sol512.datum
    m0_exact = 0.5 * d.v0 * (d.eta2 ** 2 - d.eta1 ** 2)
    assert sol512.mass_values[0] == pytest.approx(m0_exact, rel=1e-6)


def test_monitor_matches_closed_form_at_t0(datum):
    s = datum_to_uvstate(datum, 4096)
    mon = monitor_invariants(s, alpha=1.0)
    rt_exact = initial_rtilde(datum, s.grid, 1.0)
    # interior points only; np.gradient is one-sided at the edges and
    # first-order at the profile's curvature kinks (the blend is C1)
    assert np.allclose(mon["rt_plus"][2:-2], rt_exact[2:-2], rtol=5e-3, atol=1e-3)
    assert np.allclose(mon["rt_minus"][2:-2], rt_exact[2:-2], rtol=5e-3, atol=1e-3)
    assert mon["violations"] == 0


def test_v_max_stop_threshold(datum):
    sol = run(datum, SolverParams(grid_n=256, v_max_stop=200.0,
                                  snapshot_stride=8))
    assert sol.report.run_status == RunStatus.BLEW_UP
    assert sol.report.v_max >= 200.0
    # last regular snapshot before the stop stayed below twice the threshold
    assert sol.report.v_max <= 400.0


def test_cfl_respected(sol512):
    # consecutive snapshot spacing is bounded by the initial CFL step
    dts = np.diff([s.time for s in sol512.snapshots])
    dr = sol512.snapshots[0].grid[1] - sol512.snapshots[0].grid[0]
    lam0 = 0.4 + 1.0 / 80.0
    assert np.max(dts) <= 0.4 * dr / lam0 * 1.05
