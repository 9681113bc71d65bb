"""Shared value types for the radial membrane blow-up laboratory.

All types are plain immutable containers; the math lives in the other
modules.  Reals are 64-bit floats throughout.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.interpolate import CubicSpline


class NonTimelikeError(ValueError):
    """Raised when a gradient pair is null or spacelike (delta <= 0)."""


class OutsideHyperbolicRegion(ValueError):
    """Raised when (u, v) violates the discriminant condition D >= 0."""


class SonicSetError(ValueError):
    """Raised when a derivative is requested on/near the set D = 0."""


@dataclass(frozen=True)
class PhiGradients:
    """Pointwise gradient pair (phi_t, phi_r) with delta = 1 + phi_r^2 - phi_t^2.

    delta is stored, not recomputed on access, so that consumers see exactly
    the value the producer certified; ``from_gradients`` is the canonical
    constructor.
    """

    phi_t: float
    phi_r: float
    delta: float

    @staticmethod
    def from_gradients(phi_t: float, phi_r: float) -> "PhiGradients":
        return PhiGradients(phi_t=float(phi_t), phi_r=float(phi_r),
                            delta=1.0 + phi_r * phi_r - phi_t * phi_t)

    def recomputed_delta(self) -> float:
        return 1.0 + self.phi_r * self.phi_r - self.phi_t * self.phi_t

    @property
    def timelike(self) -> bool:
        return self.delta > 0.0


@dataclass(frozen=True)
class UVPoint:
    """A point in the (u, v) state plane."""

    u: float
    v: float

    def discriminant(self) -> float:
        """D(u, v) = (v^2 - u^2 v^2 - 1)^2 - 4 u^2 v^2."""
        q = self.v * self.v - self.u * self.u * self.v * self.v - 1.0
        return q * q - 4.0 * self.u * self.u * self.v * self.v

    def in_valid_region(self, tol: float = 0.0) -> bool:
        return (-tol <= self.u <= 1.0 + tol and self.v >= 1.0 - tol
                and self.discriminant() >= -tol)


@dataclass(frozen=True)
class UVState:
    """Discrete (u, v) fields on the active radial window at one time.

    ``grid`` is uniformly spaced and restricted to the current window
    [left_boundary, right_boundary]; fields are aligned with it.
    """

    time: float
    grid: np.ndarray
    u_field: np.ndarray
    v_field: np.ndarray
    left_boundary: float
    right_boundary: float

    def __post_init__(self):
        for name in ("grid", "u_field", "v_field"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.base is not None:
                arr = arr.copy()  # never alias a mutable buffer
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.grid.shape == self.u_field.shape == self.v_field.shape):
            raise ValueError("grid/u_field/v_field shapes differ")

    @property
    def n(self) -> int:
        return self.grid.size

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "grid": self.grid.tolist(),
            "u_field": self.u_field.tolist(),
            "v_field": self.v_field.tolist(),
            "left_boundary": self.left_boundary,
            "right_boundary": self.right_boundary,
        }

    @staticmethod
    def from_dict(d: dict) -> "UVState":
        return UVState(time=d["time"],
                       grid=np.array(d["grid"], dtype=float),
                       u_field=np.array(d["u_field"], dtype=float),
                       v_field=np.array(d["v_field"], dtype=float),
                       left_boundary=d["left_boundary"],
                       right_boundary=d["right_boundary"])


class Profile:
    """Radial profile with derivative access.

    Backed either by a closed-form pair (value, derivative) or by dense
    samples with a cubic-spline interpolant.
    """

    def __init__(self, value: Callable[[np.ndarray], np.ndarray],
                 derivative: Callable[[np.ndarray], np.ndarray],
                 token: Optional[str] = None):
        self._value = value
        self._derivative = derivative
        self.token = token

    def __call__(self, r):
        return self._value(np.asarray(r, dtype=float))

    def derivative(self, r):
        return self._derivative(np.asarray(r, dtype=float))

    @staticmethod
    def from_samples(r: np.ndarray, values: np.ndarray) -> "Profile":
        r = np.asarray(r, dtype=float)
        values = np.asarray(values, dtype=float)
        if r.size < 4:
            raise ValueError("need at least 4 samples for a cubic profile")
        if np.any(np.diff(r) <= 0):
            raise ValueError("sample radii must be strictly increasing")
        spline = CubicSpline(r, values)
        dspline = spline.derivative()
        return Profile(lambda x: spline(x), lambda x: dspline(x),
                       token="samples")


@dataclass(frozen=True)
class InitialDatum:
    """Initial profile u_bar on [r1, r2], constant v0, and the diagnostic
    parameters used by the admissibility checks.
    """

    r1: float
    r2: float
    v0: float
    u_bar: Profile
    beta: float = 1.0
    eta1: float = field(default=float("nan"))
    eta2: float = field(default=float("nan"))

    def __post_init__(self):
        if not self.r1 > 0.0:
            raise ValueError("r1 must be positive")
        if not self.r2 > self.r1:
            raise ValueError("need r1 < r2")
        if not self.v0 >= 1.0:
            raise ValueError("v0 must be >= 1")
        if not self.beta >= 1.0:
            raise ValueError("beta must be >= 1")
        if math.isfinite(self.eta1) or math.isfinite(self.eta2):
            if not (self.r1 < self.eta1 < self.eta2 < self.r2):
                raise ValueError("need r1 < eta1 < eta2 < r2")


class CharFamily(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    ZERO = "zero"


@dataclass(frozen=True)
class CharCurve:
    """A traced characteristic: (t, r) samples strictly increasing in t."""

    family: CharFamily
    foot: float
    t: np.ndarray
    r: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.t, dtype=float)
        r = np.asarray(self.r, dtype=float)
        t.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", r)
        if t.shape != r.shape:
            raise ValueError("t/r shapes differ")
        if t.size >= 2 and np.any(np.diff(t) <= 0):
            raise ValueError("curve samples must be strictly increasing in t")

    def position(self, time) -> np.ndarray:
        return np.interp(time, self.t, self.r)


class RunStatus(str, enum.Enum):
    BLEW_UP = "blew_up"
    BOUND_EXCEEDED = "bound_exceeded"
    DOMAIN_COLLAPSED = "domain_collapsed"
    MAX_TIME_REACHED = "max_time_reached"


@dataclass(frozen=True)
class BlowupReport:
    """Run-level summary comparing the observed blow-up to the a-priori bound."""

    t_blow_observed: Optional[float]
    t_blow_uncertainty: Optional[float]
    t_star_bound: float
    v_max: float
    v_max_location: float
    delta_min_reconstructed: float
    mass_drift_rel: float
    invariant_violations: int
    run_status: RunStatus

    def to_dict(self) -> dict:
        d = {
            "t_blow_observed": self.t_blow_observed,
            "t_blow_uncertainty": self.t_blow_uncertainty,
            "t_star_bound": self.t_star_bound,
            "v_max": self.v_max,
            "v_max_location": self.v_max_location,
            "delta_min_reconstructed": self.delta_min_reconstructed,
            "mass_drift_rel": self.mass_drift_rel,
            "invariant_violations": self.invariant_violations,
            "run_status": self.run_status.value,
        }
        return d
