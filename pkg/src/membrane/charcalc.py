"""Eigenstructure, characteristic-form right-hand sides, decomposition
coefficients, and finite-difference residual evaluators for the two
second-order characteristic identities satisfied along solutions.

Directional derivatives are discretized as d_pm = d_t + lambda_pm d_r with
centered differences in r and one-sided (forward) differences in t between
stored snapshots; nesting two of them uses a 5-point space-time stencil.
The resulting residuals converge at first order in the grid spacing, which
the refinement studies measure rather than assume.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .core import UVPoint, UVState
from .transform import f_partials, f_value


def eigenvalues(p: UVPoint) -> Tuple[float, float]:
    """lambda_pm = u +- 1/v; strictly ordered for finite v."""
    if not p.v > 0.0:
        raise ValueError("v must be positive")
    return p.u + 1.0 / p.v, p.u - 1.0 / p.v


@dataclass(frozen=True)
class CharRHS:
    """Source structure of the characteristic form of the u-equations:

        d_+ u = coef_plus  * d_+ v + src_plus
        d_- u = coef_minus * d_- v + src_minus

    with coef_pm = -+ v^-2 and src_pm = -+ r^-1 (u v^-1 +- v^-2 F).
    """

    coef_plus: float
    src_plus: float
    coef_minus: float
    src_minus: float


def char_rhs(p: UVPoint, r: float) -> CharRHS:
    if not r > 0.0:
        raise ValueError("r must be positive")
    f = f_value(p.u, p.v)
    inv_v2 = 1.0 / (p.v * p.v)
    return CharRHS(
        coef_plus=-inv_v2,
        src_plus=-(p.u / p.v + inv_v2 * f) / r,
        coef_minus=inv_v2,
        src_minus=(p.u / p.v - inv_v2 * f) / r,
    )


@dataclass(frozen=True)
class CoeffSet:
    """Coefficients of the characteristic decomposition (a_ij) and of the
    shifted-variable form (at_ij), at a given alpha >= 1.
    """

    a11: float
    a12: float
    a21: float
    a22: float
    a13: float
    a23: float
    at12: float
    at22: float
    at13: float
    at23: float
    alpha: float


def coefficients(p: UVPoint, alpha: float) -> CoeffSet:
    if alpha < 0.0:
        raise ValueError("alpha must be >= 0")
    u, v = p.u, p.v
    f = f_value(u, v)
    fu, fv = f_partials(u, v)  # raises near the sonic set
    iv = 1.0 / v
    a11 = 3.0 * u - iv + 2.0 * iv * f - iv * iv * fu - fv
    a12 = u + iv - 2.0 * iv * f - iv * iv * fu + fv
    a21 = 3.0 * u + iv - 2.0 * iv * f - iv * iv * fu + fv
    a22 = u - iv + 2.0 * iv * f - iv * iv * fu - fv
    a13 = u * v * (2.0 * u - iv * iv * fu)
    g_plus = 2.0 * iv * f + iv * iv * fu - fv
    g_minus = 2.0 * iv * f - iv * iv * fu - fv
    at12 = 2.0 * alpha * g_plus + a12
    at22 = 2.0 * alpha * g_minus + a22
    at13 = (alpha * alpha * f * g_plus
            + alpha * ((3.0 * u + 2.0 * iv) * f + u * iv * fu) + a13)
    at23 = (alpha * alpha * f * g_minus
            + alpha * ((3.0 * u - iv) * f - u * iv * fu) + a13)
    return CoeffSet(a11=a11, a12=a12, a21=a21, a22=a22, a13=a13, a23=a13,
                    at12=at12, at22=at22, at13=at13, at23=at23, alpha=alpha)


def a12_radical(p: UVPoint) -> float:
    """Closed-form a12 = (u + 1/v)(2 - sqrt((Q+2uv)/(Q-2uv))); cross-check."""
    u, v = p.u, p.v
    q = v * v * (1.0 - u * u) - 1.0
    return (u + 1.0 / v) * (2.0 - np.sqrt((q + 2 * u * v) / (q - 2 * u * v)))


def a22_radical(p: UVPoint) -> float:
    """Closed-form a22 = (u - 1/v)(2 - sqrt((Q-2uv)/(Q+2uv))); cross-check."""
    u, v = p.u, p.v
    q = v * v * (1.0 - u * u) - 1.0
    return (u - 1.0 / v) * (2.0 - np.sqrt((q - 2 * u * v) / (q + 2 * u * v)))


def rtilde(p: UVPoint, dv_plus: float, dv_minus: float, r: float,
           alpha: float) -> Tuple[float, float]:
    """Rt_pm = d_pm v - alpha F / r, the invariant-region variables."""
    if not r > 0.0:
        raise ValueError("r must be positive")
    shift = alpha * f_value(p.u, p.v) / r
    return dv_plus - shift, dv_minus - shift


# ---------------------------------------------------------------------------
# Finite-difference residual evaluators over snapshot sequences.
# ---------------------------------------------------------------------------

class SnapshotStack:
    """Snapshots re-aligned onto the master uniform grid, NaN outside the
    active window of each slice, for space-time stencil work.
    """

    def __init__(self, snapshots: Sequence[UVState]):
        if len(snapshots) < 3:
            raise ValueError("need at least 3 snapshots")
        dr_all = [np.diff(s.grid) for s in snapshots if s.grid.size >= 2]
        dr = float(dr_all[0][0])
        r_min = min(float(s.grid[0]) for s in snapshots)
        r_max = max(float(s.grid[-1]) for s in snapshots)
        n = int(round((r_max - r_min) / dr)) + 1
        self.r = r_min + dr * np.arange(n)
        self.dr = dr
        self.t = np.array([s.time for s in snapshots])
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("snapshot times must be strictly increasing")
        k = len(snapshots)
        self.u = np.full((k, n), np.nan)
        self.v = np.full((k, n), np.nan)
        for j, s in enumerate(snapshots):
            i0 = int(round((s.grid[0] - r_min) / dr))
            self.u[j, i0:i0 + s.grid.size] = s.u_field
            self.v[j, i0:i0 + s.grid.size] = s.v_field

    def directional_dv(self, k: int):
        """(d_+ v, d_- v) on slice k: forward in t, centered in r.

        NaN where the stencil leaves the active window.
        """
        dt = self.t[k + 1] - self.t[k]
        v0, v1 = self.v[k], self.v[k + 1]
        dv_dt = (v1 - v0) / dt
        dv_dr = np.full_like(v0, np.nan)
        dv_dr[1:-1] = (v0[2:] - v0[:-2]) / (2.0 * self.dr)
        lam_p = self.u[k] + 1.0 / v0
        lam_m = self.u[k] - 1.0 / v0
        return dv_dt + lam_p * dv_dr, dv_dt + lam_m * dv_dr

    def directional_of(self, field: np.ndarray, k: int, sign: int):
        """Apply d_+ (sign=+1) or d_- (sign=-1) to a (K, N) field at slice k."""
        dt = self.t[k + 1] - self.t[k]
        df_dt = (field[k + 1] - field[k]) / dt
        df_dr = np.full_like(field[k], np.nan)
        df_dr[1:-1] = (field[k, 2:] - field[k, :-2]) / (2.0 * self.dr)
        lam = self.u[k] + sign / self.v[k]
        return df_dt + lam * df_dr


def _nested_derivatives(stack: SnapshotStack, k: int):
    """d_+ d_- v and d_- d_+ v at slice k, plus first derivatives there.

    Uses slices k, k+1, k+2: the inner derivative is formed on slices k and
    k+1, the outer one differences those two.
    """
    if k + 2 >= stack.t.size:
        raise IndexError("stencil needs slices k, k+1, k+2")
    kk = len(stack.t)
    n = stack.r.size
    g_plus = np.full((kk, n), np.nan)
    g_minus = np.full((kk, n), np.nan)
    for j in (k, k + 1):
        g_plus[j], g_minus[j] = stack.directional_dv(j)
    dpm = stack.directional_of(g_minus, k, +1)   # d_+ d_- v
    dmp = stack.directional_of(g_plus, k, -1)    # d_- d_+ v
    return dpm, dmp, g_plus[k], g_minus[k]


def commutator_residual_field(snapshots: Sequence[UVState], k: int) -> np.ndarray:
    """Residual of the commutator identity

        (d_+ d_- - d_- d_+) v + (u/r)(d_+ v - d_- v) = 0

    on slice k (NaN where the stencil is not available).  The identity
    holds along solutions only; on arbitrary smooth fields it fails, which
    serves as the negative control.
    """
    stack = snapshots if isinstance(snapshots, SnapshotStack) else SnapshotStack(snapshots)
    dpm, dmp, gp, gm = _nested_derivatives(stack, k)
    return dpm - dmp + stack.u[k] / stack.r * (gp - gm)


def commutator_residual(snapshots: Sequence[UVState], k: int, i: int) -> float:
    res = commutator_residual_field(snapshots, k)[i]
    if not np.isfinite(res):
        raise ValueError("stencil touches the domain boundary")
    return float(res)


def decomposition_residual_field(snapshots: Sequence[UVState], k: int):
    """Residuals of both second-order decomposition identities on slice k.

    Returns (res_plus_minus, res_minus_plus) arrays: LHS d_+ d_- v and
    d_- d_+ v minus the full first-order right-hand sides.
    """
    stack = snapshots if isinstance(snapshots, SnapshotStack) else SnapshotStack(snapshots)
    dpm, dmp, gp, gm = _nested_derivatives(stack, k)
    u, v, r = stack.u[k], stack.v[k], stack.r
    # F and its partials inline, NaN wherever D <= 0 (sonic or invalid):
    # residual consumers treat NaN stencils as unavailable, not as errors.
    with np.errstate(invalid="ignore", divide="ignore"):
        q = v * v * (1.0 - u * u) - 1.0
        d = q * q - 4.0 * (u * v) ** 2
        sq = np.sqrt(np.where(d > 0, d, np.nan))
        f = np.where(q + sq > 0, 2.0 * (u * v) ** 2 / (q + sq), 0.5 * (q - sq))
        one_m_u2 = 1.0 - u * u
        fu = -u * v * v * (1.0 - (v * v * one_m_u2 + 1.0) / sq)
        fv = v * (one_m_u2 - (v * v * one_m_u2 * one_m_u2 - (1.0 + u * u)) / sq)
    iv = 1.0 / v
    common = (2.0 * iv * gp * gm
              + (2.0 * u - iv * iv * fu) / (2.0 * r) * (gp + gm)
              + (2.0 * u * u * v - u * iv * fu) / (r * r))
    odd = (iv - 2.0 * iv * f + fv) / (2.0 * r) * (gp - gm)
    res_pm = dpm - (common + odd - u / (2.0 * r) * (gp - gm))
    res_mp = dmp - (common + odd + u / (2.0 * r) * (gp - gm))
    return res_pm, res_mp


def decomposition_residual(snapshots: Sequence[UVState], k: int,
                           i: int) -> Tuple[float, float]:
    res_pm, res_mp = decomposition_residual_field(snapshots, k)
    if not (np.isfinite(res_pm[i]) and np.isfinite(res_mp[i])):
        raise ValueError("stencil touches the domain boundary")
    return float(res_pm[i]), float(res_mp[i])


def states_from_fields(u_fn, v_fn, r: np.ndarray, times: Sequence[float]) -> List[UVState]:
    """Build a snapshot list from closed-form fields u(r, t), v(r, t);
    used for manufactured negative controls.
    """
    out = []
    for t in times:
        out.append(UVState(time=float(t), grid=r,
                           u_field=np.asarray(u_fn(r, t), dtype=float) + 0.0 * r,
                           v_field=np.asarray(v_fn(r, t), dtype=float) + 0.0 * r,
                           left_boundary=float(r[0]), right_boundary=float(r[-1])))
    return out
