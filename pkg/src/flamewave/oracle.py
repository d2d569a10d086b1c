"""Brute-force reference solvers that share no numerical kernels with the
main path.

A fixed-step fourth-order integrator marches the second-order reactant
equation in physical time until the trajectory either reaches the axis
v' = 0 with reactant left (speed too small) or crosses v = 0 while still
moving (speed too large); bisection on that dichotomy pins the speed.  A
two-parameter grid search over (v0, c) with the same integrator pins the
closure.  Deliberately simple to audit; the inefficiency is acceptable at
oracle scale.  Bound formulas used for the search windows are re-stated
inline rather than imported, to keep the code paths disjoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .model import DomainError, IntegrationError, PhysicalParams

__all__ = [
    "ShotResult",
    "OracleResult",
    "shoot_time_domain",
    "oracle_speed",
    "grid_search_closure",
    "emit_golden_fixture",
]

UNDERSHOOT = 1  # hit v' = 0 with v > 0: c too small
OVERSHOOT = -1  # hit v = 0 with v' < 0: c too large
TIMEOUT = 0


@njit(cache=False)
def _rk4_shot(alpha, lam, c, v0, dt, max_steps):
    """Fixed-step RK4 march until the trajectory leaves {v > 0, v' < 0}.

    Returns (side, t_stop, v_stop, w_stop, iv, ivp, steps) where iv and ivp
    are trapezoid accumulations of exp(-c t) v and exp(-c t) v'.
    """
    v = v0
    w = -c / lam * (1.0 - v0)
    t = 0.0
    iv = 0.0
    ivp = 0.0
    gv_prev = v
    gw_prev = w
    inv_lam = 1.0 / lam
    for step in range(max_steps):
        k1v = w
        k1w = (c * w + v**alpha) * inv_lam
        v2 = v + 0.5 * dt * k1v
        w2 = w + 0.5 * dt * k1w
        if v2 < 0.0:
            v2 = 0.0
        k2v = w2
        k2w = (c * w2 + v2**alpha) * inv_lam
        v3 = v + 0.5 * dt * k2v
        w3 = w + 0.5 * dt * k2w
        if v3 < 0.0:
            v3 = 0.0
        k3v = w3
        k3w = (c * w3 + v3**alpha) * inv_lam
        v4 = v + dt * k3v
        w4 = w + dt * k3w
        if v4 < 0.0:
            v4 = 0.0
        k4v = w4
        k4w = (c * w4 + v4**alpha) * inv_lam
        vn = v + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        wn = w + dt / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w)
        tn = t + dt
        if vn <= 0.0 or wn >= 0.0:
            # resolve the crossing with 64 sub-steps from the last good state
            sub = dt / 64.0
            for _ in range(130):
                s1v = w
                s1w = (c * w + v**alpha) * inv_lam
                va = v + 0.5 * sub * s1v
                wa = w + 0.5 * sub * s1w
                if va < 0.0:
                    va = 0.0
                s2v = wa
                s2w = (c * wa + va**alpha) * inv_lam
                vb = v + 0.5 * sub * s2v
                wb = w + 0.5 * sub * s2w
                if vb < 0.0:
                    vb = 0.0
                s3v = wb
                s3w = (c * wb + vb**alpha) * inv_lam
                vc = v + sub * s3v
                wc = w + sub * s3w
                if vc < 0.0:
                    vc = 0.0
                s4v = wc
                s4w = (c * wc + vc**alpha) * inv_lam
                vs = v + sub / 6.0 * (s1v + 2.0 * s2v + 2.0 * s3v + s4v)
                ws = w + sub / 6.0 * (s1w + 2.0 * s2w + 2.0 * s3w + s4w)
                ts = t + sub
                if vs <= 0.0 or ws >= 0.0:
                    # linear fraction to the first crossing inside this sub-step
                    frac_v = 2.0
                    frac_w = 2.0
                    if vs <= 0.0 and vs != v:
                        frac_v = v / (v - vs)
                    if ws >= 0.0 and ws != w:
                        frac_w = -w / (ws - w)
                    frac = frac_v if frac_v < frac_w else frac_w
                    side = OVERSHOOT if frac_v <= frac_w else UNDERSHOOT
                    t_ev = t + frac * sub
                    v_ev = v + frac * (vs - v)
                    w_ev = w + frac * (ws - w)
                    gv = math.exp(-c * t_ev) * v_ev
                    gw = math.exp(-c * t_ev) * w_ev
                    iv += 0.5 * (t_ev - t) * (gv_prev + gv)
                    ivp += 0.5 * (t_ev - t) * (gw_prev + gw)
                    return side, t_ev, v_ev, w_ev, iv, ivp, step
                ev = math.exp(-c * ts)
                iv += 0.5 * sub * (gv_prev + ev * vs)
                ivp += 0.5 * sub * (gw_prev + ev * ws)
                gv_prev = ev * vs
                gw_prev = ev * ws
                v, w, t = vs, ws, ts
            return TIMEOUT, t, v, w, iv, ivp, step
        ev = math.exp(-c * tn)
        iv += 0.5 * dt * (gv_prev + ev * vn)
        ivp += 0.5 * dt * (gw_prev + ev * wn)
        gv_prev = ev * vn
        gw_prev = ev * wn
        v, w, t = vn, wn, tn
    return TIMEOUT, t, v, w, iv, ivp, max_steps


@dataclass(frozen=True)
class ShotResult:
    side: int
    t_stop: float
    v_stop: float
    w_stop: float
    defect: float
    exp_weighted_v: float
    exp_weighted_grad: float


@dataclass(frozen=True)
class OracleResult:
    method: str
    params: PhysicalParams
    c: float
    v0: float
    R: float
    defect: float
    cell_v0: float = 0.0
    cell_c: float = 0.0


def _t_budget(p: PhysicalParams, v0: float) -> float:
    # generous multiple of the proven interface upper bound (restated inline)
    amp = 2.0**1.5 / math.sqrt(1.0 + p.alpha)
    upper = 2.0 * math.sqrt(p.lam) * amp / (1.0 - p.alpha) * v0 ** (0.5 * (1.0 - p.alpha)) / (1.0 - v0)
    return 3.0 * upper + 10.0


def shoot_time_domain(
    p: PhysicalParams, v0: float, c: float, dt: float = 1.0e-6
) -> ShotResult:
    """One fixed-step shot from the interface state; classifies the exit."""
    if not (0.0 < v0 < 1.0):
        raise DomainError(f"shoot_time_domain requires 0 < v0 < 1, got {v0}")
    if dt <= 0.0:
        raise DomainError("dt must be positive")
    p.require_main_path()
    max_steps = int(_t_budget(p, v0) / dt) + 1
    side, t_ev, v_ev, w_ev, iv, ivp, _ = _rk4_shot(p.alpha, p.lam, c, v0, dt, max_steps)
    if side == TIMEOUT:
        raise IntegrationError(
            f"shooting step budget exceeded (t={t_ev}); dt={dt} too coarse or c degenerate"
        )
    return ShotResult(
        side=side,
        t_stop=t_ev,
        v_stop=v_ev,
        w_stop=w_ev,
        defect=math.hypot(v_ev, w_ev),
        exp_weighted_v=iv,
        exp_weighted_grad=ivp,
    )


def _speed_window(p: PhysicalParams, v0: float) -> tuple[float, float]:
    # restated speed bounds; independent of the model module on purpose
    lo = math.sqrt(2.0 * p.lam / (1.0 + p.alpha)) * v0 ** (0.5 * (1.0 + p.alpha))
    hi = min(lo / (1.0 - v0), math.sqrt(p.lam / (1.0 - v0)) * v0 ** (0.5 * p.alpha))
    return lo, hi


def oracle_speed(
    p: PhysicalParams, v0: float, dt: float = 1.0e-6, rel_tol: float = 1.0e-9
) -> OracleResult:
    """Speed by pure bisection on the undershoot/overshoot dichotomy."""
    lo, hi = _speed_window(p, v0)
    shot_lo = shoot_time_domain(p, v0, lo, dt)
    shot_hi = shoot_time_domain(p, v0, hi, dt)
    if not (shot_lo.side == UNDERSHOOT and shot_hi.side == OVERSHOOT):
        raise IntegrationError(
            f"oracle speed window [{lo}, {hi}] not classified as expected: "
            f"{shot_lo.side}, {shot_hi.side}"
        )
    best = shot_lo
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        shot = shoot_time_domain(p, v0, mid, dt)
        if shot.side == UNDERSHOOT:
            lo = mid
        else:
            hi = mid
        if shot.defect < best.defect:
            best = shot
    c = 0.5 * (lo + hi)
    return OracleResult(
        method="time_domain_shooting",
        params=p,
        c=c,
        v0=v0,
        R=best.t_stop,
        defect=best.defect,
    )


def _closure_defect(p: PhysicalParams, v0: float, c: float, shot: ShotResult) -> float:
    if p.lam == 1.0:
        return abs(v0 - (1.0 - p.theta))
    if p.lam < 1.0:
        return abs(p.theta + v0 - 1.0 + (1.0 - p.lam) * shot.exp_weighted_grad)
    return abs(p.theta + p.lam * v0 - 1.0 + c * (1.0 - p.lam) * shot.exp_weighted_v)


def grid_search_closure(
    p: PhysicalParams, n: int = 24, dt: float = 1.0e-5
) -> OracleResult:
    """Exhaustive (v0, c) scan minimizing shot defect plus closure defect.

    The winning cell is re-gridded twice at +-1.5 cell widths; the final cell
    size is reported so callers can assert agreement 'within one cell'.
    """
    if n < 4:
        raise DomainError("grid_search_closure needs n >= 4")
    p.require_main_path()
    th, lm = p.theta, p.lam
    if lm < 1.0:
        v_lo, v_hi = 1.0 - th, 1.0 - lm * th
    elif lm > 1.0:
        v_lo, v_hi = (1.0 - th) / lm, 1.0 - th / lm
    else:
        v_lo, v_hi = max(1.0e-3, 1.0 - th - 0.05), min(1.0 - 1.0e-3, 1.0 - th + 0.05)
    c_lo = min(_speed_window(p, v)[0] for v in (v_lo, v_hi))
    c_hi = max(_speed_window(p, v)[1] for v in (v_lo, v_hi))

    best = (math.inf, 0.0, 0.0, 0.0)  # defect, v0, c, t_stop
    for _ in range(3):
        v_grid = np.linspace(v_lo, v_hi, n)
        c_grid = np.linspace(c_lo, c_hi, n)
        for v0 in v_grid:
            for c in c_grid:
                try:
                    shot = shoot_time_domain(p, float(v0), float(c), dt)
                except IntegrationError:
                    continue
                total = shot.defect + _closure_defect(p, float(v0), float(c), shot)
                if total < best[0]:
                    best = (total, float(v0), float(c), shot.t_stop)
        dv = (v_hi - v_lo) / (n - 1)
        dc = (c_hi - c_lo) / (n - 1)
        v_lo, v_hi = max(v_lo, best[1] - 1.5 * dv), min(v_hi, best[1] + 1.5 * dv)
        c_lo, c_hi = max(c_lo, best[2] - 1.5 * dc), min(c_hi, best[2] + 1.5 * dc)
    return OracleResult(
        method="grid_search_closure",
        params=p,
        c=best[2],
        v0=best[1],
        R=best[3],
        defect=best[0],
        cell_v0=dv,
        cell_c=dc,
    )


def emit_golden_fixture(results: list[OracleResult], path) -> None:
    """Write pinned oracle values in the CLI table format (17 significant digits)."""
    lines = ["method,alpha,lambda,theta,v0,c,R,defect"]
    for r in results:
        fields = [r.method] + [
            format(x, ".17g")
            for x in (r.params.alpha, r.params.lam, r.params.theta, r.v0, r.c, r.R, r.defect)
        ]
        lines.append(",".join(fields))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
