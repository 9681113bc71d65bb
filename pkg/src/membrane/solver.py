"""Explicit time integration of the first-order (u, v) system

    u_t + u u_r + v^-3 v_r = - F(u, v) / (r v^2)
    v_t + v u_r + u v_r   = - u v / r

on the shrinking domain between the rightward C_+ curve from r1 and the
C_- curve from r2.

Scheme: the two characteristic combinations v d_pm u +- v^-1 d_pm v are
advected upwind along lambda_pm = u +- 1/v and recombined, with midpoint
RK2 in time and unsplit sources.  The system is totally linearly
degenerate (no shocks), so first-order upwinding is stable; an optional
minmod-limited second-order derivative sharpens the steep v growth near
blow-up.  Accuracy is quantified by refinement studies, not assumed.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np

from .core import (BlowupReport, CharCurve, CharFamily, InitialDatum,
                   RunStatus, UVState)
from .initdata import check_assumptions, datum_to_uvstate
from .transform import EPS_DISC


class NumericalBreakdown(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverParams:
    cfl: float = 0.4
    grid_n: int = 1024
    v_max_stop: float = 1e3
    delta_min_stop: float = 1e-6
    t_max: float = 10.0
    snapshot_stride: int = 1
    alpha: float = 1.0
    limiter: str = "minmod"  # "none" for plain first-order upwind

    def __post_init__(self):
        if not 0.0 < self.cfl <= 0.9:
            raise ValueError("cfl must lie in (0, 0.9]")
        if self.grid_n < 64:
            raise ValueError("grid_n must be >= 64")
        if self.limiter not in ("none", "minmod"):
            raise ValueError("limiter must be 'none' or 'minmod'")


@dataclass
class Solution:
    snapshots: List[UVState]
    boundary_plus: CharCurve
    boundary_minus: CharCurve
    c0_eta1: Optional[CharCurve]
    c0_eta2: Optional[CharCurve]
    report: BlowupReport
    datum: InitialDatum
    params: SolverParams
    mass_times: np.ndarray = field(default=None)
    mass_values: np.ndarray = field(default=None)


def _f_clamped(u, v):
    """Closure F with the discriminant clamped to zero from below; the
    solver path tolerates roundoff excursions across D = 0.
    """
    q = v * v * (1.0 - u * u) - 1.0
    uv2 = (u * v) ** 2
    d = np.maximum(q * q - 4.0 * uv2, 0.0)
    sq = np.sqrt(d)
    denom = q + sq
    safe = denom > 0.0
    out = np.where(safe, 2.0 * uv2 / np.where(safe, denom, 1.0), 0.5 * (q - sq))
    return out


def _minmod(a, b):
    s = np.sign(a)
    return np.where(s * np.sign(b) > 0, s * np.minimum(np.abs(a), np.abs(b)), 0.0)


def _upwind_derivative(f: np.ndarray, lam: np.ndarray, dr: float,
                       limiter: str) -> np.ndarray:
    """Derivative df/dr biased against the flow direction of lam.

    First order at the window edges; optionally corrected to second order
    with minmod-limited slopes in the interior.
    """
    n = f.size
    out = np.empty_like(f)
    back = np.empty_like(f)
    fwd = np.empty_like(f)
    back[1:] = (f[1:] - f[:-1]) / dr
    back[0] = (f[1] - f[0]) / dr
    fwd[:-1] = (f[1:] - f[:-1]) / dr
    fwd[-1] = (f[-1] - f[-2]) / dr
    pos = lam >= 0.0
    out = np.where(pos, back, fwd)
    if limiter == "minmod" and n >= 4:
        sig = np.zeros_like(f)
        sig[1:-1] = _minmod(f[2:] - f[1:-1], f[1:-1] - f[:-2]) / dr
        corr_pos = np.zeros_like(f)
        corr_neg = np.zeros_like(f)
        corr_pos[1:] = 0.5 * (sig[1:] - sig[:-1])
        corr_neg[:-1] = -0.5 * (sig[1:] - sig[:-1])
        # leave the outermost cells first-order
        corr_pos[:2] = 0.0
        corr_pos[-1] = 0.0
        corr_neg[-2:] = 0.0
        corr_neg[0] = 0.0
        out = out + np.where(pos, corr_pos, corr_neg)
    return out


def _rhs(u: np.ndarray, v: np.ndarray, r: np.ndarray, dr: float,
         limiter: str) -> Tuple[np.ndarray, np.ndarray]:
    """(u_t, v_t) from the characteristic recombination."""
    inv_v = 1.0 / v
    lam_p = u + inv_v
    lam_m = u - inv_v
    f = _f_clamped(u, v)
    du_p = _upwind_derivative(u, lam_p, dr, limiter)
    dv_p = _upwind_derivative(v, lam_p, dr, limiter)
    du_m = _upwind_derivative(u, lam_m, dr, limiter)
    dv_m = _upwind_derivative(v, lam_m, dr, limiter)
    a = lam_p * (v * du_p + inv_v * dv_p) + (u + inv_v * f) / r
    b = lam_m * (-v * du_m + inv_v * dv_m) + (u - inv_v * f) / r
    u_t = 0.5 * (b - a) * inv_v
    v_t = -0.5 * v * (a + b)
    return u_t, v_t


def step(state: UVState, params: SolverParams) -> UVState:
    """One RK2 (midpoint) step on the state's window; boundaries are not
    moved here (run() owns the window bookkeeping).
    """
    u, v, r = state.u_field.copy(), state.v_field.copy(), state.grid
    if r.size < 4:
        raise ValueError("window too small to step")
    dr = float(r[1] - r[0])
    lam_max = float(np.max(np.abs(u) + 1.0 / v))
    dt = params.cfl * dr / lam_max
    u_t, v_t = _rhs(u, v, r, dr, params.limiter)
    um, vm = u + 0.5 * dt * u_t, v + 0.5 * dt * v_t
    u_t2, v_t2 = _rhs(um, vm, r, dr, params.limiter)
    un, vn = u + dt * u_t2, v + dt * v_t2
    if not (np.all(np.isfinite(un)) and np.all(np.isfinite(vn))):
        bad = np.where(~(np.isfinite(un) & np.isfinite(vn)))[0]
        raise NumericalBreakdown(
            f"numerical breakdown at t = {state.time + dt:.6g}, "
            f"r = {r[bad[0]]:.6g}")
    return UVState(time=state.time + dt, grid=r, u_field=un, v_field=vn,
                   left_boundary=state.left_boundary,
                   right_boundary=state.right_boundary)


def monitor_invariants(state: UVState, alpha: float,
                       u_lower: Optional[float] = None,
                       u_upper: Optional[float] = None,
                       tol_u: float = 1e-6,
                       rt_tol_scale: float = 1e-4) -> dict:
    """Discrete Rt_pm and u-bound check on one snapshot.

    d_pm v is evaluated through the second equation of the system
    (d_pm v = -+ v^-1 v_r - v u_r - u v / r needs only spatial
    derivatives), with centered differences in the interior.
    """
    u, v, r = state.u_field, state.v_field, state.grid
    dr = float(r[1] - r[0])
    u_r = np.gradient(u, dr)
    v_r = np.gradient(v, dr)
    common = -v * u_r - u * v / r
    dv_plus = v_r / v + common
    dv_minus = -v_r / v + common
    f = _f_clamped(u, v)
    shift = alpha * f / r
    rt_plus = dv_plus - shift
    rt_minus = dv_minus - shift
    tol = rt_tol_scale * np.maximum(1.0, shift)
    violations = int(np.sum(rt_plus < -tol) + np.sum(rt_minus < -tol))
    if u_lower is not None:
        violations += int(np.sum(u < u_lower - tol_u))
    if u_upper is not None:
        violations += int(np.sum(u > u_upper + tol_u))
    return {
        "rtilde_min": float(min(rt_plus.min(), rt_minus.min())),
        "u_min": float(u.min()),
        "u_max": float(u.max()),
        "violations": violations,
        "rt_plus": rt_plus,
        "rt_minus": rt_minus,
        "dv_plus": dv_plus,
        "dv_minus": dv_minus,
    }


def _interp(r: np.ndarray, f: np.ndarray, x: float) -> float:
    return float(np.interp(x, r, f))


def _mass_between(r, v, a, b) -> float:
    """Trapezoid of r*v over [a, b] with linearly interpolated end cells."""
    if b <= a:
        return 0.0
    rv = r * v
    inside = (r >= a) & (r <= b)
    xs = np.concatenate(([a], r[inside], [b]))
    ys = np.concatenate(([_interp(r, rv, a)], rv[inside], [_interp(r, rv, b)]))
    return float(np.trapezoid(ys, xs))


def run(d: InitialDatum, params: SolverParams, force: bool = False) -> Solution:
    """Integrate from the datum until blow-up, domain collapse, or t_max.

    The bounding C_+ / C_- curves and (when eta1/eta2 are set) the two
    interior C_0 curves are integrated concurrently with the field using
    the same RK2 stages; the active window is the bounding curves clipped
    to the grid.
    """
    report_valid = True
    if not force:
        val = check_assumptions(d, grid_n=max(1024, params.grid_n))
        if not val.all_ok:
            raise ValueError("initial datum fails assumptions: "
                             + "; ".join(val.failures) + " (use force=True)")
        t_star = val.t_star_bound
    else:
        try:
            val = check_assumptions(d, grid_n=max(1024, params.grid_n))
            t_star = val.t_star_bound if val.t_star_bound else float("nan")
            report_valid = val.all_ok
        except Exception:
            t_star, report_valid = float("nan"), False

    n = params.grid_n
    full = datum_to_uvstate(d, n)
    r = full.grid
    dr = float(r[1] - r[0])
    u = full.u_field.copy()
    v = full.v_field.copy()

    u1 = float(d.u_bar(d.r1))
    u2 = float(d.u_bar(d.r2))
    have_c0 = np.isfinite(d.eta1) and np.isfinite(d.eta2)

    # curve positions
    r_plus, r_minus = d.r1, d.r2
    c0_1 = d.eta1 if have_c0 else float("nan")
    c0_2 = d.eta2 if have_c0 else float("nan")
    bp_t, bp_r = [0.0], [r_plus]
    bm_t, bm_r = [0.0], [r_minus]
    c1_t, c1_r = [0.0], [c0_1]
    c2_t, c2_r = [0.0], [c0_2]

    t = 0.0
    snapshots: List[UVState] = []
    mass_t, mass_m = [], []
    violations_total = 0
    v_max_seen = float(v.max())
    v_max_loc = float(r[int(np.argmax(v))])
    status = RunStatus.MAX_TIME_REACHED
    t_blow = None
    dt = 0.0

    def active_slice():
        # first/last grid points strictly inside the bounding curves; cells
        # the curves have passed are dropped immediately, otherwise u keeps
        # growing there and overshoots its range by O(dr)
        lo = max(d.r1, r_plus) - 1e-12 * dr
        hi = min(d.r2, r_minus) + 1e-12 * dr
        i0 = int(np.searchsorted(r, lo, side="left"))
        i1 = int(np.searchsorted(r, hi, side="right"))
        return i0, i1

    def snap(i0, i1):
        return UVState(time=t, grid=r[i0:i1], u_field=u[i0:i1],
                       v_field=v[i0:i1], left_boundary=max(d.r1, r_plus),
                       right_boundary=min(d.r2, r_minus))

    def record(i0, i1):
        nonlocal violations_total, v_max_seen, v_max_loc
        s = snap(i0, i1)
        snapshots.append(s)
        mon = monitor_invariants(s, params.alpha, u_lower=u2, u_upper=u1)
        violations_total += mon["violations"]
        vm = float(s.v_field.max())
        if vm > v_max_seen:
            v_max_seen = vm
            v_max_loc = float(s.grid[int(np.argmax(s.v_field))])
        if have_c0:
            mass_t.append(t)
            mass_m.append(_mass_between(s.grid, s.v_field,
                                        min(c0_1, c0_2), max(c0_1, c0_2)))

    i0, i1 = active_slice()
    record(i0, i1)

    step_idx = 0
    while t < params.t_max:
        i0, i1 = active_slice()
        if i1 - i0 < 8 or r_minus - r_plus < 8 * dr:
            status = RunStatus.DOMAIN_COLLAPSED
            break
        ra, ua, va = r[i0:i1], u[i0:i1], v[i0:i1]
        lam_max = float(np.max(np.abs(ua) + 1.0 / va))
        dt = min(params.cfl * dr / lam_max, params.t_max - t)

        u_t, v_t = _rhs(ua, va, ra, dr, params.limiter)
        um, vm_ = ua + 0.5 * dt * u_t, va + 0.5 * dt * v_t
        u_t2, v_t2 = _rhs(um, vm_, ra, dr, params.limiter)
        un, vn = ua + dt * u_t2, va + dt * v_t2
        if not (np.all(np.isfinite(un)) and np.all(np.isfinite(vn))):
            bad = np.where(~(np.isfinite(un) & np.isfinite(vn)))[0]
            raise NumericalBreakdown(
                f"numerical breakdown at t = {t + dt:.6g}, r = {ra[bad[0]]:.6g}")

        # curves: RK2 with the midpoint field
        def speed(x, uu, vv, fam):
            ui = _interp(ra, uu, x)
            vi = _interp(ra, vv, x)
            if fam == "plus":
                return ui + 1.0 / vi
            if fam == "minus":
                return ui - 1.0 / vi
            return ui

        def advance(x, fam):
            k1 = speed(x, ua, va, fam)
            k2 = speed(x + 0.5 * dt * k1, um, vm_, fam)
            return x + dt * k2

        r_plus = advance(r_plus, "plus")
        r_minus = advance(r_minus, "minus")
        if have_c0:
            c0_1 = advance(c0_1, "zero")
            c0_2 = advance(c0_2, "zero")

        u[i0:i1], v[i0:i1] = un, vn
        t += dt
        step_idx += 1
        bp_t.append(t); bp_r.append(r_plus)
        bm_t.append(t); bm_r.append(r_minus)
        if have_c0:
            c1_t.append(t); c1_r.append(c0_1)
            c2_t.append(t); c2_r.append(c0_2)

        do_snap = (step_idx % params.snapshot_stride == 0)
        vmax_now = float(vn.max())
        f_at_max = float(_f_clamped(un[np.argmax(vn)], vmax_now))
        delta_now = (1.0 + f_at_max) ** 2 / vmax_now ** 2
        # relative delta threshold: delta <= eps * (1 + F)^2 iff v >= 1/sqrt(eps)
        stopped = (vmax_now >= params.v_max_stop
                   or delta_now <= params.delta_min_stop * (1.0 + f_at_max) ** 2)
        if do_snap or stopped or t >= params.t_max:
            i0n, i1n = active_slice()
            record(i0n, i1n)
        if stopped:
            status = RunStatus.BLEW_UP
            t_blow = t - 0.5 * dt
            break

    # mass drift while max v <= 100 (the conservation claim's regime)
    drift = 0.0
    if have_c0 and mass_m:
        m0 = mass_m[0]
        for tt, mm, s in zip(mass_t, mass_m, snapshots):
            if float(s.v_field.max()) <= 100.0 and m0 != 0.0:
                drift = max(drift, abs(mm - m0) / abs(m0))

    f_field = _f_clamped(snapshots[-1].u_field, snapshots[-1].v_field)
    delta_min = float(np.min((1.0 + f_field) ** 2 / snapshots[-1].v_field ** 2))

    report = BlowupReport(
        t_blow_observed=t_blow,
        t_blow_uncertainty=dt if t_blow is not None else None,
        t_star_bound=t_star if t_star is not None else float("nan"),
        v_max=v_max_seen,
        v_max_location=v_max_loc,
        delta_min_reconstructed=delta_min,
        mass_drift_rel=drift,
        invariant_violations=violations_total,
        run_status=status,
    )
    sol = Solution(
        snapshots=snapshots,
        boundary_plus=CharCurve(CharFamily.PLUS, d.r1, np.array(bp_t), np.array(bp_r)),
        boundary_minus=CharCurve(CharFamily.MINUS, d.r2, np.array(bm_t), np.array(bm_r)),
        c0_eta1=CharCurve(CharFamily.ZERO, d.eta1, np.array(c1_t), np.array(c1_r)) if have_c0 else None,
        c0_eta2=CharCurve(CharFamily.ZERO, d.eta2, np.array(c2_t), np.array(c2_r)) if have_c0 else None,
        report=report,
        datum=d,
        params=params,
        mass_times=np.array(mass_t),
        mass_values=np.array(mass_m),
    )
    return sol
