"""Settling time along the manifold and the trailing-interface position.

The time to reach the origin from concentration x is T(x) = int_0^x ds/|y(s)|,
improper at s = 0 but finite because |y| ~ K s**((1+alpha)/2) with exponent
below one.  In the regularized abscissa the integrand is the smooth function
m/|z(sigma)|, so the numerical part carries no singularity at all; the piece
below the handoff is the closed-form tail integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .model import (
    Bracket,
    DomainError,
    PhysicalParams,
    SolverConfig,
    envelope_crossing_x,
)
from .manifold import ManifoldCurve, grow_manifold
from .speed import solve_speed

__all__ = [
    "SettlingResult",
    "TrailingInterface",
    "settling_time",
    "trailing_interface",
    "interface_bounds",
    "settling_bounds",
]


@dataclass(frozen=True)
class SettlingResult:
    T: float
    tail_part: float
    numeric_part: float
    quad_error_estimate: float


class TrailingInterface(NamedTuple):
    R: float
    c: float
    curve: ManifoldCurve


def settling_time(curve: ManifoldCurve, x: float, cfg: SolverConfig) -> SettlingResult:
    """Time T(x) to reach the origin from (x, y(x)) along the manifold.

    tail_part integrates the analytic leading term on [0, seed_x] in closed
    form; numeric_part is the error-controlled integral of m/|z| carried
    along with the manifold growth.  The error estimate combines the
    integrator tolerance with the known tail truncation scale.
    """
    if x <= 0.0:
        raise DomainError(f"settling_time requires x > 0, got {x}")
    if x > curve.x_max * (1.0 + 1e-9):
        raise DomainError(f"settling_time: x={x} beyond the grown range {curve.x_max}")
    p = curve.params
    q = 0.5 * (1.0 + p.alpha)
    K = curve.tail_coefficient
    sigma_x = x ** (0.5 * (1.0 - p.alpha))
    sigma_seed = curve.sigma_seed
    if sigma_x <= sigma_seed:
        T = sigma_x / (K * (1.0 - q))
        return SettlingResult(T=T, tail_part=T, numeric_part=0.0, quad_error_estimate=0.0)
    tail = sigma_seed / (K * (1.0 - q))
    total = float(curve.time_at_sigma(sigma_x))
    numeric = total - tail
    b = curve.c / (p.lam * (1.0 + q))
    tail_defect = (b / (K * K)) * sigma_seed**2 / max(1.0 - p.alpha, 1e-300)
    err = cfg.ode_rel_tol * total + tail_defect
    return SettlingResult(T=total, tail_part=tail, numeric_part=numeric, quad_error_estimate=err)


def trailing_interface(
    p: PhysicalParams, v0: float, cfg: SolverConfig
) -> TrailingInterface:
    """Solve the speed, grow the manifold to v0, and settle: R = T(v0, c(v0))."""
    if not (0.0 < v0 < 1.0):
        raise DomainError(f"trailing_interface requires 0 < v0 < 1, got {v0}")
    speed = solve_speed(p, v0, cfg)
    curve = grow_manifold(p, speed.c, v0, cfg)
    R = settling_time(curve, v0, cfg).T
    return TrailingInterface(R=R, c=speed.c, curve=curve)


def interface_bounds(p: PhysicalParams, v0: float) -> Bracket:
    """Proven two-sided bounds on the trailing-interface position R(v0)."""
    if not (0.0 < v0 < 1.0):
        raise DomainError(f"interface_bounds requires 0 < v0 < 1, got {v0}")
    a = p.alpha
    lo = math.sqrt(2.0 * (1.0 + a) * p.lam) / (1.0 - a) * v0 ** (0.5 * (1.0 - a))
    amp = 2.0**1.5 / math.sqrt(1.0 + a)
    hi = 2.0 * math.sqrt(p.lam) * amp / (1.0 - a) * v0 ** (0.5 * (1.0 - a)) / (1.0 - v0)
    return Bracket(lo, hi)


def settling_bounds(p: PhysicalParams, c: float, x: float) -> Bracket:
    """Two-sided bounds on T(x, c), valid for x below the envelope crossing."""
    if x <= 0.0:
        raise DomainError("settling_bounds requires x > 0")
    if not x < envelope_crossing_x(p, c):
        raise DomainError("settling_bounds requires x < envelope_crossing_x(p, c)")
    a = p.alpha
    lo = math.sqrt(2.0 * (1.0 + a) * p.lam) / (1.0 - a) * x ** (0.5 * (1.0 - a))
    shrink = 1.0 - c * math.sqrt((1.0 + a) / (2.0 * p.lam)) * x ** (0.5 * (1.0 - a))
    return Bracket(lo, lo / shrink)
