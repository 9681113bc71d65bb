"""Construction and admissibility checks for initial data (u_bar, v0).

Admissibility means:
  A1: 0 < r1 < r2, constant v0 >= 1, u_bar in C1[r1, r2], u_bar(r2) > 1/v0;
  A2: u_bar'(r) + (u_bar(r) + beta F0(r)) / r < 0 on [r1, r2],
      with F0(r) = F(u_bar(r), v0) and a fixed beta >= 1;
  A3: a sub-interval (eta1, eta2) whose difference quotient
      (eta2 - eta1) / (u_bar(eta1) - u_bar(eta2) - 2/v0) is positive and
      smaller than both flanking quotients.

Checks are evaluated on a dense uniform sample plus the interval endpoints;
margins are reported so borderline data are visible.  Strict inequalities
are accepted only with margin >= MARGIN_FLOOR.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import InitialDatum, Profile, UVState
from .transform import f_value

MARGIN_FLOOR = 1e-10


@dataclass(frozen=True)
class ValidationReport:
    a1_ok: bool
    a2_ok: bool
    a3_ok: bool
    a2_margin: float
    a3_lhs: float
    a3_rhs_left: float
    a3_rhs_right: float
    t_star_bound: Optional[float]
    c1_consistency: float
    failures: tuple

    @property
    def all_ok(self) -> bool:
        return self.a1_ok and self.a2_ok and self.a3_ok

    def to_dict(self) -> dict:
        return {
            "a1_ok": self.a1_ok, "a2_ok": self.a2_ok, "a3_ok": self.a3_ok,
            "a2_margin": self.a2_margin, "a3_lhs": self.a3_lhs,
            "a3_rhs_left": self.a3_rhs_left, "a3_rhs_right": self.a3_rhs_right,
            "t_star_bound": self.t_star_bound,
            "c1_consistency": self.c1_consistency,
            "failures": list(self.failures),
        }


def check_assumptions(d: InitialDatum, grid_n: int = 10_000) -> ValidationReport:
    """Evaluate A1-A3 on a dense sample and report margins."""
    if grid_n < 64:
        raise ValueError("grid_n must be >= 64")
    r = np.linspace(d.r1, d.r2, grid_n)
    failures = []

    ubar = np.asarray(d.u_bar(r), dtype=float)
    if not np.all(np.isfinite(ubar)):
        raise ValueError("u_bar not evaluable on [r1, r2]")
    dubar = np.asarray(d.u_bar.derivative(r), dtype=float)

    # Sampled derivative must be consistent with finite differences of the
    # samples (C1 sanity, not a convergence claim).
    fd = np.gradient(ubar, r)
    scale = 1.0 + np.max(np.abs(dubar))
    c1_consistency = float(np.max(np.abs(fd[2:-2] - dubar[2:-2])) / scale)
    h = r[1] - r[0]
    c1_ok = c1_consistency <= 10.0 * h * scale + 1e-6

    a1_ok = True
    if not d.r1 > 0.0:
        a1_ok = False
        failures.append("A1: r1 <= 0")
    if not d.v0 >= 1.0:
        a1_ok = False
        failures.append("A1: v0 < 1")
    if not ubar[-1] > 1.0 / d.v0:
        a1_ok = False
        failures.append("A1: u_bar(r2) <= 1/v0")
    if not c1_ok:
        a1_ok = False
        failures.append("A1: sampled derivative inconsistent with samples")

    # A2, pointwise; F0 may be undefined where the state leaves the
    # hyperbolic region, reported per-point.
    q = d.v0 ** 2 * (1.0 - ubar ** 2) - 1.0
    disc = q * q - 4.0 * (ubar * d.v0) ** 2
    bad = disc < 0.0
    if np.any(bad):
        failures.append(
            f"A2: F0 undefined (discriminant < 0) at {int(bad.sum())} of "
            f"{grid_n} sample radii, first at r = {r[bad][0]:.6g}")
        a2_ok = False
        a2_margin = float("nan")
    else:
        f0 = f_value(ubar, np.full_like(ubar, d.v0))
        a2_expr = dubar + (ubar + d.beta * f0) / r
        a2_margin = float(np.min(-a2_expr))
        a2_ok = a2_margin >= MARGIN_FLOOR
        if not a2_ok:
            worst = r[int(np.argmax(a2_expr))]
            failures.append(f"A2: u_bar' + (u_bar + beta*F0)/r >= 0 near r = {worst:.6g}")

    # A3 on the chosen (eta1, eta2).
    a3_lhs = a3_left = a3_right = float("nan")
    t_star = None
    if not (np.isfinite(d.eta1) and np.isfinite(d.eta2)):
        a3_ok = False
        failures.append("A3: eta1/eta2 not set")
    else:
        u_r1, u_e1, u_e2, u_r2 = (float(d.u_bar(x)) for x in (d.r1, d.eta1, d.eta2, d.r2))
        denom = u_e1 - u_e2 - 2.0 / d.v0
        if denom <= MARGIN_FLOOR:
            a3_ok = False
            failures.append("A3: u_bar(eta1) - u_bar(eta2) - 2/v0 <= 0")
        else:
            a3_lhs = (d.eta2 - d.eta1) / denom
            a3_left = (d.eta1 - d.r1) / (u_r1 - u_e1 + 2.0 / d.v0)
            a3_right = (d.r2 - d.eta2) / (u_e2 - u_r2 + 2.0 / d.v0)
            t_star = a3_lhs
            a3_ok = (a3_lhs > 0.0
                     and a3_lhs < min(a3_left, a3_right) - MARGIN_FLOOR)
            if not a3_ok:
                failures.append("A3: lhs quotient not below flanking quotients")

    return ValidationReport(a1_ok=a1_ok, a2_ok=a2_ok, a3_ok=a3_ok,
                            a2_margin=a2_margin, a3_lhs=a3_lhs,
                            a3_rhs_left=a3_left, a3_rhs_right=a3_right,
                            t_star_bound=t_star, c1_consistency=c1_consistency,
                            failures=tuple(failures))


def _smoothstep(x: np.ndarray) -> np.ndarray:
    """0 for x <= -1/2, 1 for x >= 1/2, C1 cubic blend in between."""
    xi = np.clip(x + 0.5, 0.0, 1.0)
    return xi * xi * (3.0 - 2.0 * xi)


def _smoothstep_deriv(x: np.ndarray) -> np.ndarray:
    xi = np.clip(x + 0.5, 0.0, 1.0)
    return 6.0 * xi * (1.0 - xi)


DEFAULT_FAMILY = dict(r1=1.0, r2=1.4, v0=80.0, drop=0.08, width=0.1, level=0.4)


def make_family(r1: float = DEFAULT_FAMILY["r1"], r2: float = DEFAULT_FAMILY["r2"],
                v0: float = DEFAULT_FAMILY["v0"], drop: float = DEFAULT_FAMILY["drop"],
                width: float = DEFAULT_FAMILY["width"],
                level: float = DEFAULT_FAMILY["level"],
                beta: float = 1.0, grid_n: int = 4096) -> InitialDatum:
    """Monotone-decreasing profile with one steep interior drop:

        u_bar(r) = level - drop * step((r - rc)/width) - slope * (r - r1),

    rc the interval midpoint.  The background slope is tuned by bisection to
    the smallest value for which A2 holds with margin; the constructor
    rejects parameter combinations for which any assumption still fails.
    """
    if not (r1 > 0 and r2 > r1 and v0 >= 1 and drop > 0 and width > 0):
        raise ValueError("invalid family parameters")
    if not level - drop > 1.0 / v0:
        raise ValueError("need level - drop > 1/v0 (A1 would fail)")
    if width >= (r2 - r1) / 3.0:
        raise ValueError("width too large relative to the interval")

    rc = 0.5 * (r1 + r2)

    def build(slope: float) -> InitialDatum:
        def value(r):
            r = np.asarray(r, dtype=float)
            return level - drop * _smoothstep((r - rc) / width) - slope * (r - r1)

        def deriv(r):
            r = np.asarray(r, dtype=float)
            return -drop * _smoothstep_deriv((r - rc) / width) / width - slope + 0.0 * r

        prof = Profile(value, deriv, token="family")
        return InitialDatum(r1=r1, r2=r2, v0=v0, u_bar=prof, beta=beta,
                            eta1=rc - width, eta2=rc + width)

    def a2_margin(slope: float) -> float:
        rep = check_assumptions(build(slope), grid_n=grid_n)
        return rep.a2_margin if np.isfinite(rep.a2_margin) else -np.inf

    # Smallest slope with a little headroom over the A2 margin floor.
    target = 1e-3
    lo, hi = 0.0, 1.0
    while a2_margin(hi) < target:
        hi *= 2.0
        if hi > 1e4:
            raise ValueError("A2 cannot be satisfied for these parameters")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if a2_margin(mid) >= target:
            hi = mid
        else:
            lo = mid
    datum = build(hi)
    report = check_assumptions(datum, grid_n=grid_n)
    if not report.all_ok:
        raise ValueError("family parameters rejected: " + "; ".join(report.failures))
    return datum


def datum_to_uvstate(d: InitialDatum, grid_n: int) -> UVState:
    """Sample the datum at t = 0: u = u_bar(r_i), v identically v0."""
    r = np.linspace(d.r1, d.r2, grid_n)
    return UVState(time=0.0, grid=r,
                   u_field=np.asarray(d.u_bar(r), dtype=float),
                   v_field=np.full(grid_n, float(d.v0)),
                   left_boundary=d.r1, right_boundary=d.r2)


def initial_rtilde(d: InitialDatum, r: np.ndarray, alpha: float) -> np.ndarray:
    """Closed-form Rt_pm at t = 0.

    With v constant initially, d_pm v = -v0 u_bar' - u_bar v0 / r, so

        Rt_pm(r, 0) = -v0 u_bar' - (u_bar v0 + alpha F0) / r
                    >= -v0 (u_bar' + (u_bar + alpha F0) / r)  for v0 >= 1.

    Both families coincide; positive at every point whenever A2 holds and
    alpha <= beta.
    """
    r = np.asarray(r, dtype=float)
    ubar = np.asarray(d.u_bar(r), dtype=float)
    f0 = f_value(ubar, np.full_like(ubar, d.v0))
    return (-d.v0 * np.asarray(d.u_bar.derivative(r), dtype=float)
            - (ubar * d.v0 + alpha * f0) / r)


def load_table(path) -> Profile:
    """Two-column text table (r, u_bar(r)) with a header line."""
    data = np.loadtxt(path, skiprows=1, delimiter=None)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ValueError("expected two columns (r, u_bar)")
    return Profile.from_samples(data[:, 0], data[:, 1])
