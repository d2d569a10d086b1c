"""Boundary cases of the reaction order and diffusivity ratio.

These closed-form or semi-closed-form solutions exist at the edges of the
parameter domain (alpha -> 1, alpha -> 0, lam = 0, lam = 1) and double as
independent oracles for the main solver: interior solves must approach them
continuously.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._rootfind import bracketed_root
from .model import DomainError, PhysicalParams, SolverConfig
from .fixedpoint import solve_wave

__all__ = [
    "LimitKind",
    "LimitCase",
    "SweepRow",
    "LambdaZeroWave",
    "speed_alpha_one",
    "speed_alpha_zero",
    "lambda_zero_speed_defect",
    "lambda_zero_solution",
    "theta_of_speed_half_order",
    "sweep_alpha",
]


class LimitKind(enum.Enum):
    ALPHA_ONE = "alpha_one"
    ALPHA_ZERO = "alpha_zero"
    LAMBDA_ZERO = "lambda_zero"
    LAMBDA_ONE = "lambda_one"


@dataclass(frozen=True)
class LimitCase:
    kind: LimitKind
    params: PhysicalParams

    def __post_init__(self) -> None:
        checks = {
            LimitKind.ALPHA_ONE: self.params.alpha == 1.0,
            LimitKind.ALPHA_ZERO: self.params.alpha == 0.0,
            LimitKind.LAMBDA_ZERO: self.params.lam == 0.0,
            LimitKind.LAMBDA_ONE: self.params.lam == 1.0,
        }
        if not checks[self.kind]:
            raise DomainError(f"params {self.params} inconsistent with limit {self.kind}")


def speed_alpha_one(theta: float, lam: float) -> float:
    """Wave speed of the first-order reaction: no trailing interface exists.

    c = (theta/(1-theta) + lam*(theta/(1-theta))**2)**(-1/2); decreasing in
    both arguments.
    """
    if not (0.0 < theta < 1.0):
        raise DomainError(f"theta must lie in (0, 1), got {theta}")
    if lam < 0.0:
        raise DomainError(f"lam must be nonnegative, got {lam}")
    r = theta / (1.0 - theta)
    return (r + lam * r * r) ** -0.5


def speed_alpha_zero(theta: float, cfg: SolverConfig | None = None) -> float:
    """Wave speed of the zero-order reaction; the trailing interface equals c.

    Unique positive root of exp(c**2) = 1/(1 - c**2 * theta), equivalently
    theta = (1 - exp(-c**2))/c**2.  Independent of lam.
    """
    if not (0.0 < theta < 1.0):
        raise DomainError(f"theta must lie in (0, 1), got {theta}")

    def g(c: float) -> float:
        c2 = c * c
        return theta * c2 - 1.0 + math.exp(-c2)

    hi = 1.0 / math.sqrt(theta)
    res = bracketed_root(g, 1.0e-8, hi, ftol=1.0e-15, max_iter=200)
    return res.root


def lambda_zero_speed_defect(c: float, alpha: float, theta: float) -> float:
    """Defect whose unique positive root is the immobilized-reactant speed.

    Evaluated in the substituted form
        theta - 1 + (c**2/(1-alpha)) * int_0^1 exp(-c**2 (1-y)/(1-alpha)) y**(1/(1-alpha)) dy,
    which keeps the integrand smooth at the inner endpoint.  Tends to
    theta - 1 as c -> 0 and to theta as c -> infinity.
    """
    if c <= 0.0:
        return theta - 1.0
    s = c * c / (1.0 - alpha)
    expo = 1.0 / (1.0 - alpha)

    def integrand(y: float) -> float:
        return math.exp(-s * (1.0 - y)) * y**expo

    val, _ = quad(integrand, 0.0, 1.0, epsabs=1.0e-15, epsrel=1.0e-13, limit=200)
    return theta - 1.0 + s * val


@dataclass(frozen=True)
class LambdaZeroWave:
    """Explicit wave for immobilized reactant (infinite Lewis number)."""

    c: float
    R: float
    alpha: float

    def v(self, xi):
        base = np.maximum(1.0 - np.asarray(xi, dtype=float) * (1.0 - self.alpha) / self.c, 0.0)
        return base ** (1.0 / (1.0 - self.alpha))

    def vp(self, xi):
        return -self.v(xi) ** self.alpha / self.c


def lambda_zero_solution(p: PhysicalParams, cfg: SolverConfig | None = None) -> LambdaZeroWave:
    """Speed, interface, and closed-form profile for lam = 0.

    The reactant equation integrates explicitly; the speed is the root of the
    reaction-balance defect, bracketed by its proven limits at c -> 0+ and
    c -> infinity.
    """
    if p.lam != 0.0:
        raise DomainError(f"lambda_zero_solution requires lam = 0, got {p.lam}")
    if not (0.0 <= p.alpha < 1.0):
        raise DomainError(f"lambda_zero_solution requires 0 <= alpha < 1, got {p.alpha}")

    def f(c: float) -> float:
        return lambda_zero_speed_defect(c, p.alpha, p.theta)

    lo, hi = 0.5, 1.0
    flo = f(lo)
    while flo >= 0.0:
        lo *= 0.5
        flo = f(lo)
        if lo < 1.0e-8:
            break
    fhi = f(hi)
    while fhi <= 0.0:
        hi *= 2.0
        fhi = f(hi)
        if hi > 1.0e4:
            break
    res = bracketed_root(f, lo, hi, flo=flo, fhi=fhi, ftol=1.0e-13, max_iter=200)
    return LambdaZeroWave(c=res.root, R=res.root / (1.0 - p.alpha), alpha=p.alpha)


def theta_of_speed_half_order(c: float) -> float:
    """Closed-form ignition temperature vs speed for alpha = 1/2, lam = 0.

    Derived by elementary antiderivatives from the defining integral:
    theta = c**-2 - (1/2) c**-4 (1 - exp(-2 c**2)).  Satisfies theta -> 1 as
    c -> 0+ and theta -> 0 as c -> infinity.
    """
    if c <= 0.0:
        raise DomainError("theta_of_speed_half_order requires c > 0")
    a = 2.0 * c * c
    # series for small arguments to avoid catastrophic cancellation
    if a < 1.0e-3:
        return 1.0 - a / 3.0 + a * a / 12.0 - a**3 / 60.0
    return 1.0 / (c * c) - 0.5 / c**4 * (1.0 - math.exp(-a))


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    c: float
    R: float
    v0: float
    ok: bool
    message: str = ""


def sweep_alpha(
    p_base: PhysicalParams,
    alphas: list[float],
    cfg: SolverConfig,
    *,
    n_threads: int | None = None,
) -> list[SweepRow]:
    """Full closure solve per reaction order; failures become table rows.

    Rows are returned sorted by alpha regardless of execution order, so the
    output is deterministic under any thread count (FLAMEWAVE_THREADS caps
    the default).
    """
    for a in alphas:
        if not (0.0 < a < 1.0):
            raise DomainError(f"sweep alphas must lie in (0, 1), got {a}")
    if n_threads is None:
        n_threads = int(os.environ.get("FLAMEWAVE_THREADS", "1"))
    n_threads = max(1, min(n_threads, len(alphas)))

    def run(a: float) -> SweepRow:
        p = PhysicalParams(alpha=a, lam=p_base.lam, theta=p_base.theta)
        try:
            closure = solve_wave(p, cfg)
            return SweepRow(alpha=a, c=closure.c, R=closure.R, v0=closure.v0_star, ok=True)
        except Exception as exc:  # per-row failure must not kill the sweep
            return SweepRow(
                alpha=a, c=math.nan, R=math.nan, v0=math.nan, ok=False, message=str(exc)
            )

    ordered = sorted(alphas)
    if n_threads == 1:
        rows = [run(a) for a in ordered]
    else:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            rows = list(pool.map(run, ordered))
    return rows
