"""Post-hoc verification of solver output.

run_property_suite() binds a finished run to every checkable inequality
and identity the solution is supposed to satisfy: invariant-region
positivity, range bounds on u, mass conservation between the interior
C0 curves, boundary-curve speed bounds, eigenvalue monotonicity along
characteristics, the C0 funnel inequality and speed sandwich, curve
nesting, and the two second-order residual evaluators (with refinement
ratios when a doubled-resolution run is supplied).

wave_form_residual() closes the loop back to the scalar second-order
form: gradients are reconstructed from (u, v) and the quasilinear wave
operator is evaluated by finite differences across snapshots.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .charcalc import (SnapshotStack, commutator_residual_field,
                       decomposition_residual_field)
from .core import CharFamily
from .solver import Solution, _f_clamped, monitor_invariants
from .tracer import FieldAccessor, trace


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        out = (f"check {self.name}: {status}  value={self.value:.6g}  "
               f"threshold={self.threshold:.6g}")
        if self.detail:
            out += f"  ({self.detail})"
        return out


@dataclass(frozen=True)
class VerifyReport:
    checks: Tuple[CheckResult, ...]

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(c.name for c in self.checks)

    def to_text(self) -> str:
        lines = [c.line() for c in self.checks]
        lines.append(f"result: {'all pass' if self.all_pass else 'FAILURES'} "
                     f"({sum(c.passed for c in self.checks)}/{len(self.checks)})")
        return "\n".join(lines)


def _median_residuals(snapshots, stride_t: int, stride_r: int):
    """(commutator median, decomposition median) of |residual| over the
    subsampled interior stencils."""
    stack = SnapshotStack(snapshots)
    com, dec = [], []
    for k in range(0, len(snapshots) - 2, stride_t):
        c = commutator_residual_field(stack, k)[::stride_r]
        rp, rm = decomposition_residual_field(stack, k)
        com.append(np.abs(c[np.isfinite(c)]))
        d = np.concatenate([rp[::stride_r], rm[::stride_r]])
        dec.append(np.abs(d[np.isfinite(d)]))
    com = np.concatenate(com) if com else np.array([])
    dec = np.concatenate(dec) if dec else np.array([])
    med = lambda a: float(np.median(a)) if a.size else float("nan")
    return med(com), med(dec)


def _monotone_excess(values: np.ndarray, direction: int) -> float:
    """Largest excursion against monotonicity (0 when perfectly monotone);
    direction +1 for nondecreasing, -1 for nonincreasing."""
    if values.size < 2:
        return 0.0
    w = direction * values
    running = np.maximum.accumulate(w)
    return float(np.max(running - w))


def run_property_suite(sol: Solution, alpha: float = 1.0,
                       fine: Optional[Solution] = None,
                       stride_t: int = 4, stride_r: int = 4,
                       full: bool = False) -> VerifyReport:
    """All named checks on one run; residual refinement ratios when a
    doubled-resolution run is supplied.  full=True disables subsampling.
    """
    if len(sol.snapshots) < 3:
        raise ValueError("need at least 3 snapshots")
    if full:
        stride_t = stride_r = 1
    d = sol.datum
    dr = float(sol.snapshots[0].grid[1] - sol.snapshots[0].grid[0])
    u1 = float(d.u_bar(d.r1))
    u2 = float(d.u_bar(d.r2))
    checks: List[CheckResult] = []

    # invariant region and u range, every snapshot
    rt_margin = np.inf
    u_excess = 0.0
    for s in sol.snapshots:
        mon = monitor_invariants(s, alpha, u_lower=u2, u_upper=u1)
        tol = 1e-4 * np.maximum(1.0, alpha * _f_clamped(s.u_field, s.v_field)
                                / s.grid)
        rt_margin = min(rt_margin,
                        float(np.min(mon["rt_plus"] + tol)),
                        float(np.min(mon["rt_minus"] + tol)))
        u_excess = max(u_excess, mon["u_max"] - u1, u2 - mon["u_min"])
    checks.append(CheckResult("rtilde_nonneg", rt_margin >= 0.0, rt_margin, 0.0,
                              "min of Rt_pm + 1e-4*max(1, alpha F / r)"))
    checks.append(CheckResult("u_bounds", u_excess <= 1e-6, u_excess, 1e-6,
                              "excursion of u beyond [u_bar(r2), u_bar(r1)]"))

    # conservation between the C0 curves while max v <= 100
    drift = sol.report.mass_drift_rel
    checks.append(CheckResult("conservation_drift", drift <= 1e-3, drift, 1e-3,
                              "relative drift of int r v dr"))

    # boundary speed bounds: r_plus under the fastest admissible C_+ line,
    # r_minus over the slowest admissible C_- line (u in [u2, u1], v >= v0)
    bp, bm = sol.boundary_plus, sol.boundary_minus
    excess_p = float(np.max(bp.r - (d.r1 + (u1 + 1.0 / d.v0) * bp.t)))
    excess_m = float(np.max((d.r2 + (u2 - 1.0 / d.v0) * bm.t) - bm.r))
    checks.append(CheckResult("speed_bound_plus", excess_p <= 2 * dr,
                              excess_p, 2 * dr,
                              "r_plus above r1 + (u_bar(r1) + 1/v0) t"))
    checks.append(CheckResult("speed_bound_minus", excess_m <= 2 * dr,
                              excess_m, 2 * dr,
                              "r_minus below r2 + (u_bar(r2) - 1/v0) t"))

    # eigenvalue gap min_r (lambda_+ - lambda_-) = 2 / max_r v shrinks;
    # the max is over a shrinking window, so allow a small relative slack
    gaps = np.array([2.0 / float(s.v_field.max()) for s in sol.snapshots])
    gap_exc = _monotone_excess(gaps, -1)
    checks.append(CheckResult("eigenvalue_gap_shrink", gap_exc <= 1e-3 * gaps[0],
                              gap_exc, 1e-3 * gaps[0],
                              "2/max v nonincreasing toward blow-up"))

    # lambda_-+ monotone along traced C_pm characteristics, with a
    # pointwise tolerance band set by the local one-cell variation of
    # lambda (the curve samples interpolate across near-jump cells at
    # late times; a fixed tolerance would be meaningless there)
    acc = FieldAccessor(sol.snapshots)

    def lam_and_tol(curve, sign):
        lam = np.empty(curve.t.size)
        tol = np.empty(curve.t.size)
        for j, (rr, tt) in enumerate(zip(curve.r, curve.t)):
            u, v = acc.sample(rr, tt)
            lam[j] = u + sign / v
            ul, vl = acc.sample(rr - dr, tt)
            ur, vr = acc.sample(rr + dr, tt)
            tol[j] = abs((ur + sign / vr) - (ul + sign / vl)) + 1e-6
        return lam, tol

    def banded_excess(lam, tol, direction):
        # excursion against monotonicity after widening each sample by tol
        w = direction * lam
        return float(np.max(np.maximum.accumulate(w - tol) - (w + tol)))

    feet = np.linspace(d.r1, d.r2, 7)[1:-1]
    exc_on_plus = 0.0
    exc_on_minus = 0.0
    for foot in feet:
        lam, tol = lam_and_tol(trace(CharFamily.PLUS, float(foot), acc), -1.0)
        exc_on_plus = max(exc_on_plus, banded_excess(lam, tol, -1))
        lam, tol = lam_and_tol(trace(CharFamily.MINUS, float(foot), acc), +1.0)
        exc_on_minus = max(exc_on_minus, banded_excess(lam, tol, +1))
    checks.append(CheckResult("lambda_minus_monotone_on_plus",
                              exc_on_plus <= 0.0, exc_on_plus, 0.0,
                              "lambda_- nonincreasing along C_+"))
    checks.append(CheckResult("lambda_plus_monotone_on_minus",
                              exc_on_minus <= 0.0, exc_on_minus, 0.0,
                              "lambda_+ nondecreasing along C_-"))

    # C0 funnel, speed sandwich, nesting (only when eta markers exist)
    if np.isfinite(d.eta1) and np.isfinite(d.eta2):
        c1 = trace(CharFamily.ZERO, d.eta1, acc)
        c2 = trace(CharFamily.ZERO, d.eta2, acc)
        m = min(c1.t.size, c2.t.size)
        rate = float(d.u_bar(d.eta1)) - float(d.u_bar(d.eta2)) - 2.0 / d.v0
        gap = c2.r[:m] - c1.r[:m]
        bound = (d.eta2 - d.eta1) - rate * c1.t[:m]
        funnel_exc = float(np.max(gap - bound))
        checks.append(CheckResult("funnel_inequality", funnel_exc <= 2 * dr,
                                  funnel_exc, 2 * dr,
                                  "C0 gap under eta2-eta1 - rate*t"))

        u_on_1 = np.array([acc.sample(r, t)[0] for r, t in zip(c1.r, c1.t)])
        u_on_2 = np.array([acc.sample(r, t)[0] for r, t in zip(c2.r, c2.t)])
        lo = float(d.u_bar(d.eta1)) - 1.0 / d.v0
        hi = float(d.u_bar(d.eta2)) + 1.0 / d.v0
        sandwich_exc = max(float(np.max(lo - u_on_1)), float(np.max(u_on_2 - hi)))
        checks.append(CheckResult("c0_speed_sandwich", sandwich_exc <= 2 * dr,
                                  sandwich_exc, 2 * dr,
                                  "u on C0 curves between the Lemma bounds"))

        bp_at = np.interp(c1.t, bp.t, bp.r)
        bm_at = np.interp(c2.t, bm.t, bm.r)
        nest_exc = max(float(np.max(bp_at - c1.r)), float(np.max(c2.r - bm_at)))
        checks.append(CheckResult("nesting", nest_exc <= dr, nest_exc, dr,
                                  "r_plus < C0(eta1) and C0(eta2) < r_minus"))

    # second-order residuals; informational alone, ratio-checked in pairs
    com_med, dec_med = _median_residuals(sol.snapshots, stride_t, stride_r)
    checks.append(CheckResult("commutator_residual_median",
                              np.isfinite(com_med), com_med, float("inf"),
                              "median |commutator residual|"))
    checks.append(CheckResult("decomposition_residual_median",
                              np.isfinite(dec_med), dec_med, float("inf"),
                              "median |decomposition residual|"))
    if fine is not None:
        com_f, dec_f = _median_residuals(fine.snapshots, stride_t, stride_r)
        ratio_c = com_med / com_f if com_f > 0 else float("inf")
        ratio_d = dec_med / dec_f if dec_f > 0 else float("inf")
        checks.append(CheckResult("residual_refinement_commutator",
                                  ratio_c >= 1.7, ratio_c, 1.7,
                                  "coarse/fine median ratio"))
        checks.append(CheckResult("residual_refinement_decomposition",
                                  ratio_d >= 1.7, ratio_d, 1.7,
                                  "coarse/fine median ratio"))

    return VerifyReport(checks=tuple(checks))


def wave_form_residual(sol, stencil: Tuple[int, int],
                       delta_guard: float = 1e-5) -> Optional[float]:
    """Residual of the scalar second-order form at one space-time stencil.

    Gradients (phi_t, phi_r) are reconstructed from (u, v) on slices
    k-1, k, k+1 and differenced:

        (1 + phi_r^2) phi_tt - 2 phi_r phi_t phi_tr
            - (1 - phi_t^2) phi_rr - phi_r delta / r.

    Returns None (skipped) when any stencil point has reconstructed
    delta <= delta_guard or leaves the active window; raises IndexError
    for stencils without both time neighbours.
    """
    snapshots = sol.snapshots if isinstance(sol, Solution) else sol
    stack = snapshots if isinstance(snapshots, SnapshotStack) else SnapshotStack(snapshots)
    k, i = stencil
    if not (1 <= k < stack.t.size - 1):
        raise IndexError("stencil needs slices k-1, k, k+1")
    if not (1 <= i < stack.r.size - 1):
        raise IndexError("stencil needs interior grid index")

    def recon(ks, js):
        u = stack.u[ks, js]
        v = stack.v[ks, js]
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            return None
        f = _f_clamped(u, v)
        delta = (1.0 + f) ** 2 / v ** 2
        if np.any(delta <= delta_guard):
            return None
        phi_r = np.sqrt(f)
        phi_t = -np.sign(u) * np.sqrt(np.maximum(1.0 + f - delta, 0.0))
        return phi_t, phi_r, delta

    ks = np.array([k - 1, k, k + 1])
    cols = {j: recon(ks, np.full(3, j)) for j in (i - 1, i, i + 1)}
    if any(c is None for c in cols.values()):
        return None
    dt2 = stack.t[k + 1] - stack.t[k - 1]
    dr = stack.dr
    pt_c, pr_c, delta_c = (arr[1] for arr in cols[i])
    phi_tt = (cols[i][0][2] - cols[i][0][0]) / dt2
    phi_tr = (cols[i + 1][0][1] - cols[i - 1][0][1]) / (2.0 * dr)
    phi_rr = (cols[i + 1][1][1] - cols[i - 1][1][1]) / (2.0 * dr)
    r = stack.r[i]
    return float((1.0 + pr_c ** 2) * phi_tt - 2.0 * pr_c * pt_c * phi_tr
                 - (1.0 - pt_c ** 2) * phi_rr - pr_c * delta_c / r)


def wave_form_residual_median(sol, stride_t: int = 4, stride_r: int = 4,
                              delta_guard: float = 1e-5):
    """Median |wave-form residual| over subsampled stencils; also returns
    the skipped-stencil count (delta guard or window exit)."""
    snapshots = sol.snapshots if isinstance(sol, Solution) else sol
    stack = SnapshotStack(snapshots)
    vals, skipped = [], 0
    for k in range(1, stack.t.size - 1, stride_t):
        for i in range(1, stack.r.size - 1, stride_r):
            res = wave_form_residual(stack, (k, i), delta_guard)
            if res is None:
                skipped += 1
            else:
                vals.append(abs(res))
    med = float(np.median(vals)) if vals else float("nan")
    return med, skipped
