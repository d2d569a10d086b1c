"""Bracketed scalar root finding: bisection with a regula-falsi finish.

Plain bisection narrows the bracket until it is small relative to its
location, then an Illinois-damped regula falsi takes over for superlinear
convergence.  The root never leaves the initial bracket, so convergence is
guaranteed whenever the endpoint signs differ.  Fully deterministic: exact
zero residuals resolve to the current midpoint.
"""

from __future__ import annotations

from typing import Callable

from .model import BracketError, ConvergenceError

__all__ = ["bracketed_root", "RootResult"]


class RootResult:
    __slots__ = ("root", "residual", "iterations", "lo", "hi")

    def __init__(self, root: float, residual: float, iterations: int, lo: float, hi: float):
        self.root = root
        self.residual = residual
        self.iterations = iterations
        self.lo = lo
        self.hi = hi


def bracketed_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    ftol: float,
    xtol: float = 0.0,
    flo: float | None = None,
    fhi: float | None = None,
    switch_rel: float = 1.0e-3,
    max_iter: int = 200,
    increasing: bool | None = None,
) -> RootResult:
    """Find x in [lo, hi] with |f(x)| <= ftol (or bracket width <= xtol).

    ``flo``/``fhi`` may pass along already-computed endpoint values.  The
    endpoint signs must differ; a same-sign bracket raises ``BracketError``
    since every caller in this package has a proven sign change.
    """
    if not lo < hi:
        raise BracketError(f"empty bracket [{lo}, {hi}]")
    if flo is None:
        flo = f(lo)
    if fhi is None:
        fhi = f(hi)
    if flo == 0.0:
        return RootResult(lo, 0.0, 0, lo, hi)
    if fhi == 0.0:
        return RootResult(hi, 0.0, 0, lo, hi)
    if (flo > 0.0) == (fhi > 0.0):
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={flo}, f(hi)={fhi}"
        )
    if increasing is not None and (flo < 0.0) != increasing:
        raise BracketError("endpoint signs contradict the declared monotonicity")

    best_x, best_f = (lo, flo) if abs(flo) <= abs(fhi) else (hi, fhi)
    last_side = 0
    for it in range(1, max_iter + 1):
        width = hi - lo
        scale = max(abs(lo), abs(hi), 1.0)
        if width <= switch_rel * scale:
            # regula falsi with Illinois damping against one-sided stalls
            denom = fhi - flo
            x = lo - flo * width / denom if denom != 0.0 else 0.5 * (lo + hi)
            margin = 0.01 * width
            if not (lo + margin <= x <= hi - margin):
                x = 0.5 * (lo + hi)
        else:
            x = 0.5 * (lo + hi)
        fx = f(x)
        if abs(fx) < abs(best_f):
            best_x, best_f = x, fx
        if fx == 0.0:
            return RootResult(x, 0.0, it, lo, hi)
        if abs(fx) <= ftol:
            return RootResult(x, fx, it, lo, hi)
        if (fx > 0.0) == (fhi > 0.0):
            hi, fhi = x, fx
            if last_side == +1:
                flo *= 0.5
            last_side = +1
        else:
            lo, flo = x, fx
            if last_side == -1:
                fhi *= 0.5
            last_side = -1
        if hi - lo <= max(xtol, 4.0e-16 * max(abs(lo), abs(hi))):
            return RootResult(best_x, best_f, it, lo, hi)
    raise ConvergenceError(
        f"root not located to tolerance within {max_iter} iterations "
        f"(bracket [{lo}, {hi}], best residual {best_f})"
    )
