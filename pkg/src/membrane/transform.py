"""Transforms between (phi_t, phi_r), the s-parameterization, and (u, v).

The state plane carries the closure

    F(u, v) = 1/2 [ Q - sqrt(Q^2 - 4 u^2 v^2) ],   Q = v^2 - u^2 v^2 - 1,

the smaller root of x^2 - Q x + u^2 v^2 = 0.  In the s-parameterization
(s1 = phi_r, s2 = -phi_t / sqrt(delta)) one has Q = s1^2 + s2^2,
u v = s1 s2, and F = min(s1^2, s2^2).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .core import (NonTimelikeError, OutsideHyperbolicRegion, PhiGradients,
                   SonicSetError, UVPoint)

# Roundoff slack on the discriminant: D slightly negative is clamped to 0
# inside f_value, but refused by f_partials (F is continuous across D = 0,
# not differentiable).
EPS_DISC = 1e-12


@dataclass(frozen=True)
class SPair:
    """s1 = phi_r, s2 = -phi_t / sqrt(delta); any real pair is admissible."""

    s1: float
    s2: float


# ---------------------------------------------------------------------------
# Array-level kernels (used directly by the solver and the sampling suites).
# ---------------------------------------------------------------------------

def q_value(u, v):
    """Q = v^2 - u^2 v^2 - 1 (= s1^2 + s2^2 on valid states)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return v * v * (1.0 - u * u) - 1.0


def discriminant(u, v):
    """D = Q^2 - 4 u^2 v^2 (= (s1^2 - s2^2)^2 on valid states)."""
    q = q_value(u, v)
    uv = np.asarray(u, dtype=float) * np.asarray(v, dtype=float)
    return q * q - 4.0 * uv * uv


def f_value(u, v):
    """The closure F(u, v), clamped on the band D in [-EPS_DISC, 0].

    Computed as 2 u^2 v^2 / (Q + sqrt(D)) where that denominator is
    positive: the naive half-difference cancels catastrophically for
    v >> 1, while the small root stays accurate in ratio form.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    q = q_value(u, v)
    uv2 = (u * v) ** 2
    d = q * q - 4.0 * uv2
    if np.any(d < -EPS_DISC):
        raise OutsideHyperbolicRegion(
            "discriminant D(u,v) < 0: state outside the hyperbolic region")
    sq = np.sqrt(np.maximum(d, 0.0))
    denom = q + sq
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(denom > 0.0, 2.0 * uv2 / np.where(denom > 0.0, denom, 1.0),
                         0.5 * (q - sq))
    out = np.where(denom > 0.0, ratio, 0.5 * (q - sq))
    return out if out.ndim else float(out)


def f_partials(u, v):
    """(dF/du, dF/dv), valid strictly inside the hyperbolic region.

    dF/du = -u v^2 (1 - (v^2 - u^2 v^2 + 1) / sqrt(D))
    dF/dv = v [ (1 - u^2) - (v^2 (1 - u^2)^2 - (1 + u^2)) / sqrt(D) ]
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    d = discriminant(u, v)
    if np.any(d <= EPS_DISC):
        raise SonicSetError("derivative singular near sonic set (D ~ 0)")
    sq = np.sqrt(d)
    one_m_u2 = 1.0 - u * u
    df_du = -u * v * v * (1.0 - (v * v * one_m_u2 + 1.0) / sq)
    df_dv = v * (one_m_u2 - (v * v * one_m_u2 * one_m_u2 - (1.0 + u * u)) / sq)
    if df_du.ndim:
        return df_du, df_dv
    return float(df_du), float(df_dv)


def delta_reconstructed(u, v):
    """delta = (1 + F)^2 / v^2, the timelike margin implied by (u, v)."""
    v = np.asarray(v, dtype=float)
    f = f_value(u, v)
    out = (1.0 + np.asarray(f)) ** 2 / (v * v)
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Pointwise operations on the domain types.
# ---------------------------------------------------------------------------

def phi_to_uv(g: PhiGradients) -> UVPoint:
    """u = -phi_r phi_t / (1 + phi_r^2), v = (1 + phi_r^2) / sqrt(delta)."""
    if not g.delta > 0.0:
        raise NonTimelikeError(
            f"null-or-spacelike gradients: delta = {g.delta}")
    one_p = 1.0 + g.phi_r * g.phi_r
    return UVPoint(u=-g.phi_r * g.phi_t / one_p, v=one_p / np.sqrt(g.delta))


def s_to_phi(s: SPair) -> PhiGradients:
    """Invert the s-definitions: phi_r = s1, delta = (1+s1^2)/(1+s2^2)."""
    delta = (1.0 + s.s1 * s.s1) / (1.0 + s.s2 * s.s2)
    return PhiGradients(phi_t=-s.s2 * np.sqrt(delta), phi_r=s.s1, delta=delta)


def s_to_uv(s: SPair) -> UVPoint:
    """u = s1 s2 / sqrt((1+s1^2)(1+s2^2)), v = sqrt((1+s1^2)(1+s2^2))."""
    prod = (1.0 + s.s1 * s.s1) * (1.0 + s.s2 * s.s2)
    root = np.sqrt(prod)
    return UVPoint(u=s.s1 * s.s2 / root, v=root)


def closure_F(p: UVPoint) -> float:
    return float(f_value(p.u, p.v))


def closure_F_partials(p: UVPoint) -> Tuple[float, float]:
    return f_partials(p.u, p.v)


def uv_to_phi(p: UVPoint) -> PhiGradients:
    """Reconstruct gradients with the convention phi_r >= 0, u phi_t <= 0.

    phi_r = +sqrt(F), delta = (1 + phi_r^2)^2 / v^2,
    phi_t = -sign(u) sqrt(1 + phi_r^2 - delta).
    """
    f = closure_F(p)
    if f < 0.0:
        if f < -EPS_DISC:
            raise OutsideHyperbolicRegion(f"negative closure value F = {f}")
        f = 0.0
    phi_r = np.sqrt(f)
    one_p = 1.0 + f
    delta = one_p * one_p / (p.v * p.v)
    phi_t_sq = one_p - delta
    if phi_t_sq < 0.0:
        if phi_t_sq < -EPS_DISC * one_p:
            raise OutsideHyperbolicRegion(
                f"inconsistent state: 1 + phi_r^2 - delta = {phi_t_sq}")
        phi_t_sq = 0.0
    phi_t = -np.sign(p.u) * np.sqrt(phi_t_sq)
    return PhiGradients(phi_t=float(phi_t), phi_r=float(phi_r), delta=float(delta))


def sample_spairs(count: int, s_max: float = 3.0, seed: int = 0,
                  min_gap: float = 1e-3):
    """Deterministic random SPairs with 0 < s1, s2 <= s_max and
    |s1 - s2| >= min_gap (keeps the sample strictly off the sonic set
    D = 0, where s1^2 = s2^2).
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < count:
        need = count - len(pairs)
        s = rng.uniform(0.0, s_max, size=(2 * need + 16, 2))
        ok = (s[:, 0] > 0) & (s[:, 1] > 0) & (np.abs(s[:, 0] - s[:, 1]) >= min_gap)
        pairs.extend(map(tuple, s[ok][:need]))
    return [SPair(s1, s2) for s1, s2 in pairs]


def sample_valid_region(count: int, s_max: float = 3.0, seed: int = 0,
                        min_gap: float = 1e-3):
    """Deterministic sample of transform-valid UVPoints (sample_spairs
    mapped through s_to_uv); the backbone of the property suites.
    """
    return [s_to_uv(s) for s in sample_spairs(count, s_max, seed, min_gap)]
