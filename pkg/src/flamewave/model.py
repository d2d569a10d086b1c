"""Domain types, vector fields, and closed-form bound curves.

Everything here is a pure function of its inputs.  The planar field

    x' = y,    Lambda * y' = c*y + x**alpha

lives in the quadrant Q = {x >= 0, y <= 0}; its unique trajectory into the
origin encodes the reactant profile of the traveling wave (x is the
concentration, y its spatial derivative).  The closed-form curves below pin
that trajectory between proven envelopes and bound the admissible wave speed,
which is what makes every downstream bisection bracketed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "FlamewaveError",
    "DomainError",
    "BracketError",
    "ConvergenceError",
    "IntegrationError",
    "PhysicalParams",
    "SolverConfig",
    "PhaseState",
    "Bracket",
    "phase_field",
    "extended_field",
    "envelope_lower",
    "envelope_upper",
    "envelope_crossing_x",
    "speed_brackets",
    "v0_interval",
]


class FlamewaveError(Exception):
    """Base class for solver errors."""


class DomainError(FlamewaveError, ValueError):
    """Input outside the admissible parameter/state domain."""


class BracketError(FlamewaveError, RuntimeError):
    """A guaranteed sign change was not observed; indicates a formula bug."""


class ConvergenceError(FlamewaveError, RuntimeError):
    """Iteration cap exceeded before reaching the requested tolerance."""


class IntegrationError(FlamewaveError, RuntimeError):
    """ODE integration or quadrature failed."""


@dataclass(frozen=True)
class PhysicalParams:
    """Problem instance: reaction order, inverse Lewis number, ignition temperature.

    The main solver path requires 0 < alpha < 1 and lam > 0.  The boundary
    values alpha in {0, 1} and lam = 0 are accepted at construction so the
    limit-case module can use them, but `require_main_path` rejects them.
    """

    alpha: float
    lam: float
    theta: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= 1.0):
            raise DomainError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.lam < 0.0:
            raise DomainError(f"lam must be nonnegative, got {self.lam}")
        if not (0.0 < self.theta < 1.0):
            raise DomainError(f"theta must lie in (0, 1), got {self.theta}")

    def require_main_path(self) -> None:
        if not (0.0 < self.alpha < 1.0):
            raise DomainError(
                f"alpha={self.alpha} is a limit case; the main solver needs 0 < alpha < 1"
            )
        if self.lam <= 0.0:
            raise DomainError(
                f"lam={self.lam} is a limit case; the main solver needs lam > 0"
            )


# Handoff abscissa for the analytic tail, expressed in the regularized
# coordinate sigma = x**((1-alpha)/2).  The closed-form tail below sigma_seed
# carries a relative defect of order c*sigma_seed**2, i.e. ~1e-10 here.
DEFAULT_SEED_SIGMA = 1.0e-5


@dataclass(frozen=True)
class SolverConfig:
    """Numerical tolerances shared by all solver stages.

    seed_x is the concentration value below which the manifold is represented
    by its analytic tail instead of numerical integration.  Left at None, the
    handoff is placed at sigma = x**((1-alpha)/2) = DEFAULT_SEED_SIGMA, which
    keeps the tail defect at the 1e-10 level uniformly in alpha.  A positive
    value is interpreted directly in x.
    """

    ode_rel_tol: float = 1.0e-12
    ode_abs_tol: float = 1.0e-14
    seed_x: float | None = None
    c_bisect_tol: float = 1.0e-11
    v0_bisect_tol: float = 1.0e-10
    quad_tol: float = 1.0e-10
    max_iter: int = 200

    def __post_init__(self) -> None:
        for name in ("ode_rel_tol", "ode_abs_tol", "c_bisect_tol", "v0_bisect_tol", "quad_tol"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be strictly positive")
        if self.seed_x is not None and self.seed_x <= 0.0:
            raise DomainError("seed_x must be strictly positive (or None for the default policy)")
        if self.max_iter < 1:
            raise DomainError("max_iter must be at least 1")

    def seed_sigma(self, alpha: float) -> float:
        """Tail handoff in the regularized coordinate sigma = x**((1-alpha)/2)."""
        if self.seed_x is None:
            return DEFAULT_SEED_SIGMA
        return self.seed_x ** (0.5 * (1.0 - alpha))


@dataclass(frozen=True)
class PhaseState:
    """Point (x, y) of the phase plane; x is concentration, y its derivative."""

    x: float
    y: float

    def in_quadrant(self) -> bool:
        return self.x >= 0.0 and self.y <= 0.0


@dataclass(frozen=True)
class Bracket:
    """Closed interval [lo, hi] with lo < hi."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise DomainError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __contains__(self, value: float) -> bool:
        return self.lo < value < self.hi


def phase_field(p: PhysicalParams, c: float, s: PhaseState) -> tuple[float, float]:
    """Right-hand side (x', y') of the quadrant field at state ``s``.

    Defined for x >= 0 only; the fractional power does not extend to x < 0 on
    the main path (see `extended_field` for the odd whole-plane extension).
    """
    if s.x < 0.0:
        raise DomainError(f"phase_field requires x >= 0, got x={s.x}")
    if c < 0.0:
        raise DomainError(f"phase_field requires c >= 0, got c={c}")
    return s.y, (c * s.y + s.x**p.alpha) / p.lam


def extended_field(p: PhysicalParams, c: float, s: tuple[float, float]) -> tuple[float, float]:
    """Whole-plane extension (y, (c*y + sign(x)|x|^alpha)/Lambda).

    Odd under point reflection: extended_field(-s) == -extended_field(s),
    with sign(0) = 0 so the origin stays the unique equilibrium.
    """
    x, y = s
    sgn = 0.0 if x == 0.0 else math.copysign(1.0, x)
    return y, (c * y + sgn * abs(x) ** p.alpha) / p.lam


def envelope_lower(p: PhysicalParams, x: float) -> float:
    """Lower trapping curve: the exact zero-speed separatrix.

    At c = 0 the field is Hamiltonian and its stable trajectory into the
    origin is y = -(2/((1+alpha)*Lambda))**0.5 * x**((1+alpha)/2); for c > 0
    the manifold lies strictly above it.
    """
    if x < 0.0:
        raise DomainError(f"envelope_lower requires x >= 0, got {x}")
    coef = math.sqrt(2.0 / ((1.0 + p.alpha) * p.lam))
    return -coef * x ** (0.5 * (1.0 + p.alpha))


def envelope_upper(p: PhysicalParams, c: float, x: float) -> float:
    """Upper trapping curve: the lower envelope shifted by (c/Lambda)*x.

    The field crosses this curve transversally upward, so the manifold stays
    below it wherever the curve remains in the quadrant (x < envelope_crossing_x).
    """
    if x < 0.0:
        raise DomainError(f"envelope_upper requires x >= 0, got {x}")
    if c < 0.0:
        raise DomainError(f"envelope_upper requires c >= 0, got {c}")
    return envelope_lower(p, x) + (c / p.lam) * x


def envelope_crossing_x(p: PhysicalParams, c: float) -> float:
    """Abscissa where the upper envelope exits the quadrant through y = 0.

    Returns +inf at c = 0 (the envelope never crosses); downstream code only
    ever needs the predicate ``x < envelope_crossing_x(p, c)``.
    """
    if c < 0.0:
        raise DomainError(f"envelope_crossing_x requires c >= 0, got {c}")
    if c == 0.0:
        return math.inf
    base = 2.0 * p.lam / ((1.0 + p.alpha) * c * c)
    return base ** (1.0 / (1.0 - p.alpha))


def speed_brackets(p: PhysicalParams, v0: float) -> Bracket:
    """Proven two-sided bounds on the wave speed for a given v0 in (0, 1).

    Lower bound from the energy identity; upper bound is the tighter of the
    energy bound divided by (1 - v0) and the bound from the horizontal-field
    curve y = -x**alpha / c.  Both upper bounds are valid, so their minimum
    shortens the bisection.
    """
    if not (0.0 < v0 < 1.0):
        raise DomainError(f"speed_brackets requires 0 < v0 < 1, got {v0}")
    c_lo = math.sqrt(2.0 * p.lam / (1.0 + p.alpha)) * v0 ** (0.5 * (1.0 + p.alpha))
    c_hi_energy = c_lo / (1.0 - v0)
    c_hi_flat = math.sqrt(p.lam / (1.0 - v0)) * v0 ** (0.5 * p.alpha)
    return Bracket(c_lo, min(c_hi_energy, c_hi_flat))


def v0_interval(p: PhysicalParams) -> Bracket | float:
    """Admissible interval for the ignition-side concentration v(0).

    For lam < 1 it is [1-theta, 1-lam*theta]; for lam > 1 it is
    [(1-theta)/lam, 1-theta/lam].  At lam = 1 the interval degenerates and
    the unique admissible value 1 - theta is returned as a float.
    """
    if p.lam <= 0.0:
        raise DomainError("v0_interval requires lam > 0")
    if p.lam == 1.0:
        return 1.0 - p.theta
    if p.lam < 1.0:
        return Bracket(1.0 - p.theta, 1.0 - p.lam * p.theta)
    return Bracket((1.0 - p.theta) / p.lam, 1.0 - p.theta / p.lam)
