"""Characteristic curve tracing through stored solution snapshots.

Curves are integrated against the snapshot stack with bilinear (r, t)
interpolation rather than live coupling to the solver, so a trace is
reproducible from saved output alone.  Accuracy therefore depends on the
snapshot stride; use stride 1 when traces matter.
"""
from __future__ import annotations

from typing import List, Optional

import numpy as np

from .core import CharCurve, CharFamily, InitialDatum

_SPEED_SIGN = {CharFamily.PLUS: 1.0, CharFamily.MINUS: -1.0, CharFamily.ZERO: 0.0}


class FieldAccessor:
    """Bilinear (r, t) interpolation of u and v over a snapshot list.

    Linear in t between consecutive snapshots, linear in r on each
    snapshot's own window (clamped at the window edges; callers stop
    curves once they exit the window, see trace()).
    """

    def __init__(self, snapshots: List):
        if len(snapshots) < 2:
            raise ValueError("need at least 2 snapshots to interpolate in time")
        self.snapshots = list(snapshots)
        self.times = np.array([s.time for s in self.snapshots])
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("snapshot times must be strictly increasing")

    def _bracket(self, t: float):
        k = int(np.searchsorted(self.times, t, side="right")) - 1
        k = min(max(k, 0), len(self.snapshots) - 2)
        t0, t1 = self.times[k], self.times[k + 1]
        w = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
        return k, float(np.clip(w, 0.0, 1.0))

    def sample(self, r: float, t: float):
        """(u, v) at (r, t)."""
        k, w = self._bracket(t)
        s0, s1 = self.snapshots[k], self.snapshots[k + 1]
        u = (1.0 - w) * np.interp(r, s0.grid, s0.u_field) \
            + w * np.interp(r, s1.grid, s1.u_field)
        v = (1.0 - w) * np.interp(r, s0.grid, s0.v_field) \
            + w * np.interp(r, s1.grid, s1.v_field)
        return float(u), float(v)

    def window(self, t: float):
        """Active window [left, right] at time t (linear in t)."""
        k, w = self._bracket(t)
        s0, s1 = self.snapshots[k], self.snapshots[k + 1]
        left = (1.0 - w) * s0.left_boundary + w * s1.left_boundary
        right = (1.0 - w) * s0.right_boundary + w * s1.right_boundary
        return float(left), float(right)

    def speed(self, family: CharFamily, r: float, t: float) -> float:
        u, v = self.sample(r, t)
        return u + _SPEED_SIGN[family] / v


def _accessor(sol) -> FieldAccessor:
    if isinstance(sol, FieldAccessor):
        return sol
    return FieldAccessor(sol.snapshots)


def trace(family, foot: float, sol) -> CharCurve:
    """Integrate dr/dt = lambda_family(r, t) from (foot, t0).

    RK2 (midpoint) on the snapshot time grid.  The curve terminates when
    it exits the active window or when the snapshots end.
    """
    family = CharFamily(family)
    acc = _accessor(sol)
    t0 = acc.times[0]
    left0, right0 = acc.window(t0)
    if not left0 <= foot <= right0:
        raise ValueError(f"foot {foot!r} outside initial window "
                         f"[{left0:.6g}, {right0:.6g}]")
    ts = [float(t0)]
    rs = [float(foot)]
    r_cur = float(foot)
    for k in range(len(acc.times) - 1):
        ta, tb = float(acc.times[k]), float(acc.times[k + 1])
        dt = tb - ta
        k1 = acc.speed(family, r_cur, ta)
        k2 = acc.speed(family, r_cur + 0.5 * dt * k1, ta + 0.5 * dt)
        r_next = r_cur + dt * k2
        left, right = acc.window(tb)
        if not left <= r_next <= right:
            # clip the last segment to the window edge, then stop
            r_next = min(max(r_next, left), right)
            ts.append(tb)
            rs.append(r_next)
            break
        ts.append(tb)
        rs.append(r_next)
        r_cur = r_next
    return CharCurve(family=family, foot=float(foot),
                     t=np.array(ts), r=np.array(rs))


def collision_time(sol, eta1: float, eta2: float) -> Optional[float]:
    """First time the C0 curves from eta1 < eta2 cross, or None.

    Both curves share the snapshot time grid, so the gap is compared
    sample-by-sample; the crossing is located by linear interpolation
    between the bracketing samples.
    """
    if not eta1 < eta2:
        raise ValueError("need eta1 < eta2")
    c1 = trace(CharFamily.ZERO, eta1, sol)
    c2 = trace(CharFamily.ZERO, eta2, sol)
    m = min(c1.t.size, c2.t.size)
    gap = c2.r[:m] - c1.r[:m]
    hit = np.where(gap <= 0.0)[0]
    if hit.size == 0:
        return None
    j = int(hit[0])
    if j == 0:
        return float(c1.t[0])
    g0, g1 = gap[j - 1], gap[j]
    w = g0 / (g0 - g1)
    return float(c1.t[j - 1] + w * (c1.t[j] - c1.t[j - 1]))


def tstar_bound(d: InitialDatum) -> float:
    """(eta2 - eta1) / (u_bar(eta1) - u_bar(eta2) - 2/v0)."""
    if not (np.isfinite(d.eta1) and np.isfinite(d.eta2)):
        raise ValueError("datum has no eta1/eta2 markers")
    denom = float(d.u_bar(d.eta1)) - float(d.u_bar(d.eta2)) - 2.0 / d.v0
    if denom <= 1e-12:
        raise ValueError("A3 violated: u_bar(eta1) - u_bar(eta2) - 2/v0 <= 0")
    return (d.eta2 - d.eta1) / denom
