"""Wave-speed selection for a fixed ignition-side concentration v0.

The trajectory launched from (v0, -(c/Lambda)(1-v0)) lands on the stable
manifold exactly when the defect

    psi(v0, c) = y_c(v0) + (c/Lambda)(1 - v0)

vanishes.  psi is strictly increasing in c and changes sign across the
proven speed bracket, so a bracketed bisection/regula-falsi hybrid finds the
unique root.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._rootfind import bracketed_root
from .model import Bracket, BracketError, DomainError, PhysicalParams, SolverConfig, speed_brackets
from .manifold import endpoint_ordinate

__all__ = ["SpeedResult", "speed_defect", "solve_speed"]


@dataclass(frozen=True)
class SpeedResult:
    c: float
    psi_residual: float
    iterations: int
    bracket_used: Bracket


def speed_defect(p: PhysicalParams, v0: float, c: float, cfg: SolverConfig) -> float:
    """Initial-condition defect psi(v0, c); negative when c is too small."""
    if not (0.0 < v0 < 1.0):
        raise DomainError(f"speed_defect requires 0 < v0 < 1, got {v0}")
    if c < 0.0:
        raise DomainError(f"speed_defect requires c >= 0, got {c}")
    return endpoint_ordinate(p, c, v0, cfg) + (c / p.lam) * (1.0 - v0)


def solve_speed(
    p: PhysicalParams,
    v0: float,
    cfg: SolverConfig,
    *,
    c_hint: float | None = None,
) -> SpeedResult:
    """Unique speed c(v0) with |psi| below c_bisect_tol on the natural scale.

    ``c_hint`` (e.g. the speed at a nearby v0) narrows the starting bracket;
    monotonicity of psi makes the directed expansion safe, and the proven
    bracket is the fall-back, so the hint is a pure optimization.
    """
    p.require_main_path()
    proven = speed_brackets(p, v0)

    def f(c: float) -> float:
        return speed_defect(p, v0, c, cfg)

    # |psi| <= ftol guarantees |c - c*| <= cfg.c_bisect_tol because
    # d(psi)/dc >= (1 - v0)/Lambda (both terms of psi increase with c).
    ftol = 0.5 * cfg.c_bisect_tol * (1.0 - v0) / p.lam

    evals = 0
    lo, hi = proven.lo, proven.hi
    flo = fhi = None
    if c_hint is not None and proven.lo < c_hint < proven.hi:
        lo, hi, flo, fhi, evals = _hint_bracket(f, proven, c_hint)

    if flo is None:
        flo = f(lo)
        evals += 1
    if fhi is None:
        fhi = f(hi)
        evals += 1
    if not (flo < 0.0 < fhi):
        raise BracketError(
            f"speed defect has no sign change on [{lo}, {hi}] "
            f"(psi values {flo}, {fhi}); the proven bounds exclude this"
        )
    res = bracketed_root(
        f, lo, hi, flo=flo, fhi=fhi, ftol=ftol, max_iter=cfg.max_iter, increasing=True
    )
    c = min(max(res.root, proven.lo), proven.hi)
    return SpeedResult(
        c=c,
        psi_residual=res.residual,
        iterations=res.iterations + evals,
        bracket_used=Bracket(lo, hi),
    )


def _hint_bracket(f, proven: Bracket, hint: float):
    """Grow a sign-changing sub-bracket around the hint, never leaving ``proven``."""
    delta = 0.02
    lo = max(proven.lo, hint * (1.0 - delta))
    hi = min(proven.hi, hint * (1.0 + delta))
    flo, fhi = f(lo), f(hi)
    evals = 2
    for _ in range(8):
        if flo < 0.0 < fhi:
            return lo, hi, flo, fhi, evals
        delta *= 4.0
        if flo >= 0.0:
            hi, fhi = lo, flo
            lo = max(proven.lo, hint * (1.0 - delta))
            flo = f(lo)
        else:
            lo, flo = hi, fhi
            hi = min(proven.hi, hint * (1.0 + delta))
            fhi = f(hi)
        evals += 1
        if lo == proven.lo and hi == proven.hi:
            break
    return lo, hi, flo, fhi, evals
