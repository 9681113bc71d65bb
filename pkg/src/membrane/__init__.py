"""Numerical laboratory for the radially symmetric relativistic membrane
equation in first-order (u, v) form: transforms, characteristic machinery,
a shrinking-domain solver, curve tracing, and post-hoc verification suites.
"""

from .core import (BlowupReport, CharCurve, CharFamily, InitialDatum,
                   NonTimelikeError, OutsideHyperbolicRegion, PhiGradients,
                   Profile, RunStatus, SonicSetError, UVPoint, UVState)

__all__ = [
    "BlowupReport", "CharCurve", "CharFamily", "InitialDatum",
    "NonTimelikeError", "OutsideHyperbolicRegion", "PhiGradients",
    "Profile", "RunStatus", "SonicSetError", "UVPoint", "UVState",
]

__version__ = "0.1.0"
