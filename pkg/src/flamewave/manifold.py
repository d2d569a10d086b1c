"""Stable-manifold construction for the quadrant field.

The trajectory into the origin is the graph y(x) of

    dy/dx = c/Lambda + x**alpha / (Lambda * y),

singular at x = 0 where y ~ -K * x**((1+alpha)/2).  Integrating in x from a
seed near the origin is self-correcting (the gap between neighboring
solutions shrinks as x grows) but the power-law leading term makes both the
seed and every downstream integral lose accuracy near x = 0.  We therefore
integrate in the regularized abscissa

    sigma = x**((1-alpha)/2),      z(sigma) = y(x) / x**((1+alpha)/2),

in which the manifold is an analytic function with z(0) = -K and the
settling time is the regular integral m * int d(sigma)/|z|.  The analytic
tail (a three-term series in sigma) hands off to numerical integration at
sigma_seed, where its truncation error is O(sigma_seed**3) in z and
O(c * sigma_seed**2) in the settling time.

A curve carries its (sigma, z, T) samples plus monotone cubic interpolants;
all queries and quadratures evaluate those, so a grown curve is immutable
and cheap to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import PchipInterpolator

from .model import (
    DomainError,
    IntegrationError,
    PhaseState,
    PhysicalParams,
    SolverConfig,
    envelope_lower,
    envelope_upper,
    extended_field,
)

__all__ = [
    "ManifoldCurve",
    "manifold_seed",
    "grow_manifold",
    "eval_manifold",
    "sample_phase_portrait",
]

DEFAULT_SAMPLES = 1536

_GAUSS_LO = np.polynomial.legendre.leggauss(7)
_GAUSS_HI = np.polynomial.legendre.leggauss(15)


def _tail_z(K: float, b: float, d: float, sigma):
    """Series z = -K + b*sigma + d*sigma**2 valid near the origin."""
    return -K + b * sigma + d * sigma * sigma


def manifold_seed(p: PhysicalParams, c: float, eps: float) -> PhaseState:
    """Midpoint of the proven trapping envelope at x = eps.

    The manifold lies strictly between the zero-speed separatrix and its
    (c/Lambda)*x shift, so the midpoint is within (c/(2*Lambda))*eps of the
    true curve; that error contracts as integration proceeds outward.
    """
    if eps <= 0.0:
        raise DomainError(f"manifold_seed requires eps > 0, got {eps}")
    if c < 0.0:
        raise DomainError(f"manifold_seed requires c >= 0, got {c}")
    y = envelope_lower(p, eps) + 0.5 * (c / p.lam) * eps
    return PhaseState(eps, y)


@dataclass
class ManifoldCurve:
    """Sampled stable manifold for one (params, c) pair, with analytic tail.

    ``samples`` holds (x, y) pairs with x strictly increasing; below
    ``seed_x`` the curve is the closed-form tail -tail_coefficient * x**q.
    The private sigma/z/T arrays are the regularized representation used by
    the settling, closure, and profile stages.
    """

    c: float
    params: PhysicalParams
    seed_x: float
    tail_coefficient: float
    _sigma: np.ndarray
    _z: np.ndarray
    _T: np.ndarray
    _q: float
    _m: float
    _b: float
    _d: float
    _z_interp: PchipInterpolator = field(repr=False)
    _T_interp: PchipInterpolator = field(repr=False)
    _sigma_of_T: PchipInterpolator = field(repr=False)

    @property
    def x_max(self) -> float:
        return float(self._sigma[-1] ** self._m)

    @property
    def sigma_seed(self) -> float:
        return float(self._sigma[0])

    @property
    def sigma_max(self) -> float:
        return float(self._sigma[-1])

    @property
    def samples(self) -> np.ndarray:
        """(n, 2) array of (x, y) pairs, x strictly increasing and positive."""
        x = np.exp(self._m * np.log(self._sigma))
        y = self._z * np.exp(self._m * self._q * np.log(self._sigma))
        keep = (x > 0.0) & (y < 0.0)
        x, y = x[keep], y[keep]
        keep2 = np.concatenate(([True], np.diff(x) > 0.0))
        return np.column_stack([x[keep2], y[keep2]])

    # -- coordinate helpers -------------------------------------------------

    def sigma_of_x(self, x):
        return np.asarray(x, dtype=float) ** (1.0 / self._m)

    def z_at_sigma(self, sigma):
        sigma = np.asarray(sigma, dtype=float)
        out = np.where(
            sigma < self._sigma[0],
            _tail_z(self.tail_coefficient, self._b, self._d, sigma),
            self._z_interp(np.clip(sigma, self._sigma[0], self._sigma[-1])),
        )
        return out

    def y_at(self, x):
        """Manifold ordinate y(x); analytic tail below seed_x, interpolation above."""
        x_arr = np.asarray(x, dtype=float)
        if np.any(x_arr < 0.0) or np.any(x_arr > self.x_max * (1.0 + 1e-9)):
            raise DomainError(
                f"eval_manifold defined on [0, {self.x_max}], got values outside"
            )
        with np.errstate(divide="ignore"):
            sigma = np.where(x_arr > 0.0, x_arr ** (1.0 / self._m), 0.0)
        xq = np.where(x_arr > 0.0, x_arr**self._q, 0.0)
        y = self.z_at_sigma(sigma) * xq
        y = np.where(x_arr == 0.0, 0.0, y)
        return float(y) if np.isscalar(x) or np.ndim(x) == 0 else y

    def time_at_sigma(self, sigma):
        """Settling time to the origin from the point at regularized abscissa sigma."""
        sigma = np.asarray(sigma, dtype=float)
        tail = sigma / (self.tail_coefficient * (1.0 - self._q))
        out = np.where(
            sigma < self._sigma[0],
            tail,
            self._T_interp(np.clip(sigma, self._sigma[0], self._sigma[-1])),
        )
        return out

    def time_at_x(self, x):
        return self.time_at_sigma(self.sigma_of_x(x))

    def sigma_at_time(self, T):
        """Inverse of time_at_sigma; exact tail inversion below the handoff."""
        T = np.asarray(T, dtype=float)
        tail_sigma = T * self.tail_coefficient * (1.0 - self._q)
        out = np.where(
            T < self._T[0],
            tail_sigma,
            self._sigma_of_T(np.clip(T, self._T[0], self._T[-1])),
        )
        return out

    # -- quadrature along the curve ----------------------------------------

    def integrate(self, integrand, quad_tol: float = 1.0e-10, max_splits: int = 2):
        """Integrate ``integrand(sigma, z, T) d(sigma)`` over [sigma_seed, sigma_max].

        Composite Gauss-Legendre over the sample partition; the 7-vs-15-point
        discrepancy is the error estimate, and intervals are halved (all at
        once) until it falls below quad_tol relative.
        """
        edges = self._sigma
        for attempt in range(max_splits + 1):
            lo = self._panel_sum(integrand, edges, _GAUSS_LO)
            hi = self._panel_sum(integrand, edges, _GAUSS_HI)
            err = abs(hi - lo)
            if err <= quad_tol * max(abs(hi), 1.0e-300):
                return hi, err
            mid = 0.5 * (edges[:-1] + edges[1:])
            edges = np.sort(np.concatenate([edges, mid]))
        raise IntegrationError(
            f"curve quadrature did not reach quad_tol={quad_tol} (estimate {err})"
        )

    def _panel_sum(self, integrand, edges, rule) -> float:
        nodes, weights = rule
        half = 0.5 * np.diff(edges)
        center = 0.5 * (edges[:-1] + edges[1:])
        sig = (center[:, None] + half[:, None] * nodes[None, :]).ravel()
        z = self.z_at_sigma(sig)
        T = self.time_at_sigma(sig)
        vals = integrand(sig, z, T).reshape(len(half), len(nodes))
        return float(np.sum(vals @ weights * half))


def _series_coefficients(p: PhysicalParams, c: float) -> tuple[float, float, float, float, float]:
    q = 0.5 * (1.0 + p.alpha)
    m = 2.0 / (1.0 - p.alpha)
    K = math.sqrt(2.0 / ((1.0 + p.alpha) * p.lam))
    b = c / (p.lam * (1.0 + q))
    d = -q * b * b / (2.0 * K)
    return q, m, K, b, d


def grow_manifold(
    p: PhysicalParams,
    c: float,
    x_max: float,
    cfg: SolverConfig,
    *,
    n_samples: int = DEFAULT_SAMPLES,
) -> ManifoldCurve:
    """Integrate the manifold out to x_max and return the sampled curve.

    Integration runs in the regularized coordinate with an adaptive embedded
    Runge-Kutta pair at cfg.ode_rel_tol; the settling time is carried as a
    second state under the same error control.  Errors in the seed contract
    as sigma grows, so the seed series truncation never dominates.
    """
    p.require_main_path()
    if c < 0.0:
        raise DomainError(f"grow_manifold requires c >= 0, got {c}")
    if x_max <= 0.0:
        raise DomainError(f"grow_manifold requires x_max > 0, got {x_max}")
    q, m, K, b, d = _series_coefficients(p, c)
    sigma_seed = cfg.seed_sigma(p.alpha)
    sigma_max = x_max ** (1.0 / m)
    if not sigma_seed < 0.5 * sigma_max:
        raise DomainError(
            f"seed handoff sigma={sigma_seed} too close to sigma_max={sigma_max}; "
            "lower seed_x or raise x_max"
        )
    lam = p.lam
    mc_over_lam = m * c / lam

    def rhs(s, state):
        z = state[0]
        return (m * (-q * z + 1.0 / (lam * z)) / s + mc_over_lam, -m / z)

    def hits_axis(s, state):
        return state[0] + 1.0e-12

    hits_axis.terminal = True

    z0 = _tail_z(K, b, d, sigma_seed)
    T0 = sigma_seed / (K * (1.0 - q))
    sig_eval = np.linspace(sigma_seed, sigma_max, max(int(n_samples), 8))
    sol = solve_ivp(
        rhs,
        (sigma_seed, sigma_max),
        (z0, T0),
        method="DOP853",
        rtol=cfg.ode_rel_tol,
        atol=cfg.ode_abs_tol,
        t_eval=sig_eval,
        events=hits_axis,
    )
    if sol.status == 1:
        raise IntegrationError(
            "manifold ordinate reached 0 before x_max; the true manifold cannot, "
            "so this signals a tolerance or seed bug"
        )
    if not sol.success:
        raise IntegrationError(f"manifold integration failed: {sol.message}")

    sigma = sol.t
    z = sol.y[0]
    T = sol.y[1]
    curve = ManifoldCurve(
        c=c,
        params=p,
        seed_x=sigma_seed**m,
        tail_coefficient=K,
        _sigma=sigma,
        _z=z,
        _T=T,
        _q=q,
        _m=m,
        _b=b,
        _d=d,
        _z_interp=PchipInterpolator(sigma, z, extrapolate=False),
        _T_interp=PchipInterpolator(sigma, T, extrapolate=False),
        _sigma_of_T=PchipInterpolator(T, sigma, extrapolate=False),
    )
    for arr in (sigma, z, T):
        arr.setflags(write=False)
    return curve


def endpoint_ordinate(p: PhysicalParams, c: float, x_end: float, cfg: SolverConfig) -> float:
    """y(x_end) without storing a sampled curve; used by the speed solver.

    Same equation, seed, and error control as grow_manifold, but only the
    endpoint value is kept, which makes the inner loop of the speed
    bisection several times cheaper.
    """
    p.require_main_path()
    q, m, K, b, d = _series_coefficients(p, c)
    sigma_seed = cfg.seed_sigma(p.alpha)
    sigma_max = x_end ** (1.0 / m)
    if not sigma_seed < 0.5 * sigma_max:
        raise DomainError("seed handoff too close to the evaluation point")
    lam = p.lam
    mc_over_lam = m * c / lam

    def rhs(s, state):
        z = state[0]
        return (m * (-q * z + 1.0 / (lam * z)) / s + mc_over_lam,)

    def hits_axis(s, state):
        return state[0] + 1.0e-12

    hits_axis.terminal = True

    sol = solve_ivp(
        rhs,
        (sigma_seed, sigma_max),
        (_tail_z(K, b, d, sigma_seed),),
        method="DOP853",
        rtol=cfg.ode_rel_tol,
        atol=cfg.ode_abs_tol,
        events=hits_axis,
    )
    if sol.status == 1 or not sol.success:
        raise IntegrationError(f"manifold integration failed: {sol.message}")
    return float(sol.y[0, -1]) * x_end**q


def eval_manifold(curve: ManifoldCurve, x):
    """Manifold ordinate y(x) for 0 <= x <= x_max; exactly 0 at x = 0."""
    return curve.y_at(x)


def sample_phase_portrait(
    p: PhysicalParams,
    c: float,
    seeds: list[tuple[float, float]],
    t_span: float,
    cfg: SolverConfig,
    *,
    box: tuple[tuple[float, float], tuple[float, float]] | None = None,
    points_per_side: int = 400,
) -> list[np.ndarray]:
    """Trajectories of the whole-plane field through the given seeds.

    Each polyline is an (n, 3) array with columns (t, x, y), integrated over
    [-t_span, t_span] and truncated at the first exit from ``box``.  Output
    is plot data only; tolerances are relaxed relative to the solver path.
    """
    if t_span <= 0.0:
        raise DomainError("t_span must be positive")
    if box is None:
        extent = max([1.0] + [max(abs(sx), abs(sy)) for sx, sy in seeds])
        box = ((-2.0 * extent, 2.0 * extent), (-2.0 * extent, 2.0 * extent))
    (x_lo, x_hi), (y_lo, y_hi) = box

    def rhs(t, s):
        return extended_field(p, c, (s[0], s[1]))

    def escaped(t, s):
        pad = 4.0
        return min(
            s[0] - pad * x_lo, pad * x_hi - s[0], s[1] - pad * y_lo, pad * y_hi - s[1]
        )

    escaped.terminal = True

    polylines: list[np.ndarray] = []
    for sx, sy in seeds:
        halves = []
        for sign in (-1.0, 1.0):
            t_eval = np.linspace(0.0, sign * t_span, points_per_side)
            sol = solve_ivp(
                rhs,
                (0.0, sign * t_span),
                (sx, sy),
                method="RK45",
                rtol=1.0e-9,
                atol=1.0e-12,
                t_eval=t_eval,
                events=escaped,
            )
            pts = np.column_stack([sol.t, sol.y[0], sol.y[1]])
            inside = (
                (pts[:, 1] >= x_lo)
                & (pts[:, 1] <= x_hi)
                & (pts[:, 2] >= y_lo)
                & (pts[:, 2] <= y_hi)
            )
            cut = np.argmin(inside) if not inside.all() else len(pts)
            halves.append(pts[: max(cut, 1)])
        backward, forward = halves
        polylines.append(np.vstack([backward[::-1], forward[1:]]))
    return polylines
