"""Closure of the coupled system: find v0 so the reconstructed temperature
hits the ignition value at the interface.

For each trial v0 the scalar problem delivers (c, R, v); the remaining
equation is one of two equivalent integral identities, whose defect changes
sign across a proven v0 interval.  Bisection on that defect is guaranteed to
converge, unlike the projected fixed-point iteration (also provided, as an
experimental mode) for which no contraction property is known.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from ._rootfind import bracketed_root
from .model import (
    Bracket,
    BracketError,
    ConvergenceError,
    DomainError,
    PhysicalParams,
    SolverConfig,
    v0_interval,
)
from .manifold import ManifoldCurve, grow_manifold
from .settling import settling_time
from .speed import SpeedResult, solve_speed

__all__ = [
    "ClosureBranch",
    "ClosureResult",
    "WaveIntegrals",
    "wave_integrals",
    "closure_residual_grad",
    "closure_residual_val",
    "clamp_to_interval",
    "fixed_point_map",
    "solve_wave",
]


class ClosureBranch(enum.Enum):
    BELOW_ONE = "lambda_below_one"
    ABOVE_ONE = "lambda_above_one"
    EQUAL_ONE = "lambda_equal_one"


@dataclass(frozen=True)
class WaveIntegrals:
    """Exponentially weighted profile integrals taken along the manifold.

    grad_weighted = int_0^R exp(-c s) (-v'(s)) ds
    value_weighted = int_0^R exp(-c s) v(s) ds

    Both are evaluated in the regularized abscissa with the weight written as
    exp(-c (T(v0) - T(x))) <= 1, so they stay finite even when c*R is large.
    """

    grad_weighted: float
    value_weighted: float
    quad_error: float


@dataclass(frozen=True)
class _InnerSolution:
    v0: float
    speed: SpeedResult
    curve: ManifoldCurve
    R: float
    integrals: WaveIntegrals


@dataclass(frozen=True)
class ClosureResult:
    v0_star: float
    c: float
    R: float
    residual: float
    branch: ClosureBranch
    iterations: int
    curve: ManifoldCurve
    speed: SpeedResult


def wave_integrals(curve: ManifoldCurve, R: float, cfg: SolverConfig) -> WaveIntegrals:
    """The two exp(-c s)-weighted integrals over the full profile."""
    c = curve.c
    m = curve._m
    sigma_seed = curve.sigma_seed
    x_seed = curve.seed_x

    def grad_integrand(sig, z, T):
        return m * np.exp(-c * (R - T)) * sig ** (m - 1.0)

    def value_integrand(sig, z, T):
        return m * np.exp(-c * (R - T)) * sig**m / (-z)

    grad, err_g = curve.integrate(grad_integrand, cfg.quad_tol)
    value, err_v = curve.integrate(value_integrand, cfg.quad_tol)
    # closed-form leading tail below the handoff; x_seed is tiny but the
    # value integral at small alpha is not beyond quad_tol, so keep it
    tail_T = sigma_seed / (curve.tail_coefficient * (1.0 - curve._q))
    w_tail = math.exp(-c * (R - tail_T)) if c * (R - tail_T) < 700.0 else 0.0
    grad += w_tail * x_seed
    if x_seed > 0.0:
        value += w_tail * x_seed ** (2.0 - curve._q) / (
            curve.tail_coefficient * (2.0 - curve._q)
        )
    return WaveIntegrals(grad_weighted=grad, value_weighted=value, quad_error=err_g + err_v)


def _solve_inner(
    p: PhysicalParams, v0: float, cfg: SolverConfig, c_hint: float | None = None
) -> _InnerSolution:
    speed = solve_speed(p, v0, cfg, c_hint=c_hint)
    curve = grow_manifold(p, speed.c, v0, cfg)
    R = settling_time(curve, v0, cfg).T
    integrals = wave_integrals(curve, R, cfg)
    return _InnerSolution(v0=v0, speed=speed, curve=curve, R=R, integrals=integrals)


def _grad_defect(p: PhysicalParams, inner: _InnerSolution) -> float:
    return (1.0 - p.theta) + (1.0 - p.lam) * inner.integrals.grad_weighted - inner.v0


def _value_defect(p: PhysicalParams, inner: _InnerSolution) -> float:
    bracketed = 1.0 - p.theta - inner.speed.c * (1.0 - p.lam) * inner.integrals.value_weighted
    return bracketed / p.lam - inner.v0


def closure_residual_grad(p: PhysicalParams, v0: float, cfg: SolverConfig) -> float:
    """Closure defect in gradient form (natural for lam < 1); its root is v0*.

    Positive at the lower end of the admissible interval and negative at the
    upper end.  At lam = 1 it degenerates to (1 - theta) - v0 exactly.
    """
    if not (0.0 < v0 < 1.0):
        raise DomainError(f"closure residual requires 0 < v0 < 1, got {v0}")
    return _grad_defect(p, _solve_inner(p, v0, cfg))


def closure_residual_val(p: PhysicalParams, v0: float, cfg: SolverConfig) -> float:
    """Closure defect in value form (natural for lam > 1); its root is v0*."""
    if not (0.0 < v0 < 1.0):
        raise DomainError(f"closure residual requires 0 < v0 < 1, got {v0}")
    return _value_defect(p, _solve_inner(p, v0, cfg))


def clamp_to_interval(x: float, interval: Bracket) -> float:
    """Projection onto [lo, hi]; identity inside, endpoint outside."""
    return min(max(x, interval.lo), interval.hi)


def fixed_point_map(p: PhysicalParams, v0: float, cfg: SolverConfig) -> float:
    """One projected fixed-point update of v0 (experimental Picard mode)."""
    interval = v0_interval(p)
    if isinstance(interval, float):
        return interval
    inner = _solve_inner(p, v0, cfg)
    if p.lam < 1.0:
        raw = (1.0 - p.theta) + (1.0 - p.lam) * inner.integrals.grad_weighted
    else:
        raw = (
            1.0
            - p.theta
            - inner.speed.c * (1.0 - p.lam) * inner.integrals.value_weighted
        ) / p.lam
    return clamp_to_interval(raw, interval)


def solve_wave(p: PhysicalParams, cfg: SolverConfig, *, picard: bool = False) -> ClosureResult:
    """Full closure: v0*, the matched speed c, and the interface position R.

    Dispatch on lam: at lam = 1 the admissible value is 1 - theta exactly;
    otherwise the appropriate defect is bisected over the admissible
    interval, whose endpoint signs are guaranteed.  ``picard=True`` runs the
    projected fixed-point iteration instead (may cycle; raises on the
    iteration cap rather than returning an unconverged answer).
    """
    p.require_main_path()
    interval = v0_interval(p)
    if isinstance(interval, float):
        inner = _solve_inner(p, interval, cfg)
        return ClosureResult(
            v0_star=interval,
            c=inner.speed.c,
            R=inner.R,
            residual=_grad_defect(p, inner),
            branch=ClosureBranch.EQUAL_ONE,
            iterations=0,
            curve=inner.curve,
            speed=inner.speed,
        )

    branch = ClosureBranch.BELOW_ONE if p.lam < 1.0 else ClosureBranch.ABOVE_ONE
    defect = _grad_defect if p.lam < 1.0 else _value_defect

    cache: dict[float, _InnerSolution] = {}
    hint_holder: list[float | None] = [None]

    def g(v0: float) -> float:
        inner = _solve_inner(p, v0, cfg, c_hint=hint_holder[0])
        hint_holder[0] = inner.speed.c
        cache[v0] = inner
        return defect(p, inner)

    if picard:
        return _picard_closure(p, cfg, interval, branch, g, cache)

    g_lo = g(interval.lo)
    g_hi = g(interval.hi)
    if not (g_lo > 0.0 > g_hi):
        raise BracketError(
            f"closure defect signs at the admissible interval endpoints are "
            f"({g_lo}, {g_hi}); expected (+, -).  This indicates a numerical "
            "inconsistency in the inner solves, not an absent solution."
        )
    # the closure defect is smooth and nearly linear across the admissible
    # interval, so regula falsi may take over from the first iteration
    res = bracketed_root(
        lambda v: -g(v),
        interval.lo,
        interval.hi,
        flo=-g_lo,
        fhi=-g_hi,
        ftol=0.5 * cfg.v0_bisect_tol,
        switch_rel=1.0,
        max_iter=cfg.max_iter,
        increasing=True,
    )
    v0_star = res.root
    inner = cache.get(v0_star) or _solve_inner(p, v0_star, cfg, c_hint=hint_holder[0])
    return ClosureResult(
        v0_star=v0_star,
        c=inner.speed.c,
        R=inner.R,
        residual=defect(p, inner),
        branch=branch,
        iterations=res.iterations + 2,
        curve=inner.curve,
        speed=inner.speed,
    )


def _picard_closure(p, cfg, interval, branch, g, cache) -> ClosureResult:
    v0 = 0.5 * (interval.lo + interval.hi)
    for it in range(1, cfg.max_iter + 1):
        defect_value = g(v0)
        v0_next = clamp_to_interval(v0 + defect_value, interval)
        if abs(v0_next - v0) <= cfg.v0_bisect_tol:
            inner = cache[v0]
            return ClosureResult(
                v0_star=v0,
                c=inner.speed.c,
                R=inner.R,
                residual=defect_value,
                branch=branch,
                iterations=it,
                curve=inner.curve,
                speed=inner.speed,
            )
        v0 = v0_next
    raise ConvergenceError(
        f"projected fixed-point iteration did not settle within {cfg.max_iter} "
        "steps (no contraction property is guaranteed; use the default "
        "bisection mode)"
    )
