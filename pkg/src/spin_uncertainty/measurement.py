"""Measurement uncertainty of covariant joint observables of the three spin components.

A covariant observable with a point mass at radius ``r`` in the fibre ``n``
outputs ``r`` times a random direction whose polar density, given the ``L3``
eigenstate ``|m>``, is ``(2s+1)/2 |d_nm(theta)|^2`` in ``cos theta``.  Its
squared calibration error on ``|m>`` is

    I(s, r, n, m) = (2s+1)/2 int_{-1}^{1} |d_nm|^2 (r x - m)^2 dx,

which for ``s >= 1`` has the form ``A_s(r, n) + m^2 B_s(r, n)``.  Minimizing
the worst case over ``m`` gives the optimal observable.  All "delta" values
here are squared errors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .spin_core import QuantumState, SpinContext, make_spin_context, parse_spin, wigner_small_d

__all__ = [
    "CovariantMeasurementSpec",
    "DiscreteDistribution",
    "OmegaPoint",
    "OptimalMeasurement",
    "I_closed",
    "I_quadrature",
    "omega_point",
    "K_functional",
    "optimal_measurement",
    "optimal_spec",
    "brute_force_optimum",
    "calibration_error",
    "marginal_moment",
    "wasserstein_1d",
    "output_distribution",
    "ideal_distribution",
    "metric_vs_calibration_check",
    "separating_normal",
    "separating_gap",
    "measurement_profile",
]

QUAD_TOL = 1e-11
METRIC_ORDER = 200
BINNING_TOL = 2e-3


def _check_weight(two_s: int, x, name: str):
    k = two_s / 2 - float(x)
    if abs(k - round(k)) > 1e-12 or not 0 <= round(k) <= two_s:
        raise ValueError(f"{name}={x} is not a weight of spin {two_s / 2}")


@dataclass(frozen=True)
class CovariantMeasurementSpec:
    """Mixture of point masses: ``atoms`` holds ``(n, r, weight)`` triples."""

    atoms: tuple

    def __post_init__(self):
        atoms = tuple((float(n), float(r), float(w)) for n, r, w in self.atoms)
        if not atoms:
            raise ValueError("at least one atom is required")
        if any(r < 0 or w < 0 for _, r, w in atoms):
            raise ValueError("radii and weights must be non-negative")
        if abs(math.fsum(w for *_, w in atoms) - 1) > 1e-12:
            raise ValueError("atom weights must sum to 1")
        object.__setattr__(self, "atoms", atoms)

    def validate(self, two_s: int):
        for n, _, _ in self.atoms:
            _check_weight(two_s, n, "n")


@dataclass(frozen=True)
class DiscreteDistribution:
    """Finitely supported probability measure on the line (support stored sorted)."""

    support: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.support, dtype=float).reshape(-1)
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        if x.shape != p.shape or x.size == 0:
            raise ValueError("support and probs must be non-empty and of equal length")
        if not np.all(np.isfinite(x)):
            raise ValueError("support must be finite")
        if np.any(p < 0) or abs(p.sum() - 1) > 1e-12:
            raise ValueError("probs must be non-negative and sum to 1")
        order = np.argsort(x, kind="stable")
        object.__setattr__(self, "support", x[order])
        object.__setattr__(self, "probs", p[order])

    @classmethod
    def point(cls, x: float) -> "DiscreteDistribution":
        return cls(np.array([float(x)]), np.array([1.0]))


class OmegaPoint(NamedTuple):
    """Coefficients ``(a, b)`` of ``I = a + m^2 b``."""

    a: float
    b: float


class OptimalMeasurement(NamedTuple):
    r_min: float
    delta_min_squared: float
    n_opt: float


def _A(s: float, r: float, n: float) -> float:
    c = s * (s + 1)
    return r * r * c * (-2 * n * n + 2 * c - 1) / (c * (2 * s - 1) * (2 * s + 3))


def _B(s: float, r: float, n: float) -> float:
    c = s * (s + 1)
    num = 6 * n * n * r * r - 2 * n * r * (4 * c - 3) + c * (-2 * r * r + 4 * c - 3)
    return num / (c * (2 * s - 1) * (2 * s + 3))


def I_closed(s, r: float, n: float, m: float) -> float:
    """Closed-form squared deviation of the output from ``m`` on input ``|m>``."""
    two_s = parse_spin(s)
    if two_s == 0:
        raise ValueError("spin 0 has no measurement problem")
    _check_weight(two_s, n, "n")
    _check_weight(two_s, m, "m")
    if r < 0:
        raise ValueError("r must be non-negative")
    s = two_s / 2
    if two_s == 1:
        sign = 1.0 if n > 0 else -1.0
        return r * r / 3 - sign * r / 3 + 0.25
    return _A(s, r, n) + m * m * _B(s, r, n)


@lru_cache(maxsize=256)
def _d_squared_nodes(two_s: int, order: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights in ``x = cos theta`` and ``|d(theta_k)|^2`` at each node."""
    x, w = np.polynomial.legendre.leggauss(order)
    ctx = make_spin_context(Fraction(two_s, 2))
    d2 = np.stack([wigner_small_d(ctx, t) ** 2 for t in np.arccos(x)])
    for a in (x, w, d2):
        a.setflags(write=False)
    return x, w, d2


def _quad_moments(two_s: int, n: float, m: float, order: int) -> np.ndarray:
    """``(2s+1)/2 int |d_nm|^2 x^j dx`` for ``j = 0, 1, 2`` at a fixed order."""
    x, w, d2 = _d_squared_nodes(two_s, order)
    s = two_s / 2
    k = d2[:, int(round(s - n)), int(round(s - m))] * w * (two_s + 1) / 2
    return np.array([k.sum(), (k * x).sum(), (k * x * x).sum()])


def _adaptive_moments(two_s: int, n: float, m: float, tol: float = QUAD_TOL) -> np.ndarray:
    order = max(4, two_s // 2 + 3)
    prev = _quad_moments(two_s, n, m, order)
    while True:
        order *= 2
        cur = _quad_moments(two_s, n, m, order)
        if np.max(np.abs(cur - prev)) <= tol or order >= 4096:
            return cur
        prev = cur


def I_quadrature(s, r: float, n: float, m: float) -> float:
    """The calibration integral by adaptive Gauss-Legendre quadrature over ``cos theta``."""
    two_s = parse_spin(s)
    if two_s == 0:
        raise ValueError("spin 0 has no measurement problem")
    _check_weight(two_s, n, "n")
    _check_weight(two_s, m, "m")
    if r < 0:
        raise ValueError("r must be non-negative")
    q0, q1, q2 = _adaptive_moments(two_s, float(n), float(m))
    return float(r * r * q2 - 2 * r * m * q1 + m * m * q0)


def omega_point(s, r: float, n: float) -> OmegaPoint:
    """``(A_s(r, n), B_s(r, n))``; only defined for ``s >= 1``."""
    two_s = parse_spin(s)
    if two_s < 2:
        raise ValueError("the (a, b) decomposition needs s >= 1")
    _check_weight(two_s, n, "n")
    s = two_s / 2
    return OmegaPoint(_A(s, r, n), _B(s, r, n))


def K_functional(p: OmegaPoint, s) -> float:
    """Worst case over ``m`` of ``a + m^2 b``: ``|m| = s`` if ``b > 0``, else the smallest ``|m|``."""
    two_s = parse_spin(s)
    if two_s < 2:
        raise ValueError("K is defined for s >= 1")
    a, b = float(p[0]), float(p[1])
    if b > 0:
        return a + (two_s / 2) ** 2 * b
    return a if two_s % 2 == 0 else a + b / 4


def optimal_measurement(s) -> OptimalMeasurement:
    """Optimal radius and the minimal worst-case squared calibration error, with ``n = s``."""
    two_s = parse_spin(s)
    if two_s == 0:
        raise ValueError("spin 0 has no measurement problem")
    s = two_s / 2
    if two_s == 1:
        return OptimalMeasurement(0.5, 1 / 6, s)
    if two_s == 2:
        return OptimalMeasurement(1.25, 0.375, s)
    root = math.sqrt(2 * s + 3)
    return OptimalMeasurement((2 * s - root + 3) / 2, (s - root + 2) / 2, s)


def optimal_spec(s) -> CovariantMeasurementSpec:
    """Single point mass at ``n = s``, ``r = r_min(s)``."""
    opt = optimal_measurement(s)
    return CovariantMeasurementSpec(((opt.n_opt, opt.r_min, 1.0),))


def _worst_case(moms: np.ndarray, m_vals: np.ndarray, r: np.ndarray) -> np.ndarray:
    """``max_m`` of ``r^2 q2 - 2 r m q1 + m^2 q0`` for each entry of ``r``."""
    r = np.atleast_1d(r)[:, None]
    vals = r * r * moms[:, 2] - 2 * r * m_vals * moms[:, 1] + m_vals * m_vals * moms[:, 0]
    return vals.max(axis=1)


def brute_force_optimum(s, r_grid=None) -> tuple[float, float, float]:
    """Minimize ``max_m I(s, r, n, m)`` over ``r`` and ``n`` numerically.

    ``I`` comes from quadrature, not from the closed form.  The grid minimum
    for each ``n`` is refined by a bounded golden-section search on the two
    neighbouring cells; the worst case is convex in ``r`` so this is safe.

    Returns
    -------
    (r_star, n_star, value)
    """
    two_s = parse_spin(s)
    if two_s == 0:
        raise ValueError("spin 0 has no measurement problem")
    s = two_s / 2
    if r_grid is None:
        r_grid = np.linspace(0, 2 * s, 2001)[1:]
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.size < 3 or np.any(r_grid <= 0):
        raise ValueError("r_grid must hold at least three positive radii")
    m_vals = s - np.arange(two_s + 1)
    best = (math.inf, math.inf, math.inf)
    for n in m_vals:
        moms = np.stack([_adaptive_moments(two_s, n, m) for m in m_vals])
        vals = _worst_case(moms, m_vals, r_grid)
        i = int(np.argmin(vals))
        lo, hi = r_grid[max(i - 1, 0)], r_grid[min(i + 1, r_grid.size - 1)]
        res = minimize_scalar(lambda r: float(_worst_case(moms, m_vals, r)[0]),
                              bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
        r_star, value = (float(res.x), float(res.fun)) if res.fun < vals[i] else (float(r_grid[i]), float(vals[i]))
        if value < best[2] - 1e-12:
            best = (r_star, float(n), value)
    return best


def calibration_error(ctx: SpinContext, spec: CovariantMeasurementSpec) -> tuple[list[float], float]:
    """Per-input squared errors ``sum_atoms w I(s, r, n, m)`` for ``m = s .. -s`` and their maximum."""
    spec.validate(ctx.two_s)
    per_m = [math.fsum(w * I_closed(ctx.s, r, n, m) for n, r, w in spec.atoms) for m in ctx.m_values]
    return per_m, max(per_m)


def marginal_moment(ctx: SpinContext, spec: CovariantMeasurementSpec, m: float, power: int) -> float:
    """``p``-th moment of the third output component given input ``|m>`` (``p`` = 1 or 2)."""
    if power not in (1, 2):
        raise ValueError("power must be 1 or 2")
    spec.validate(ctx.two_s)
    _check_weight(ctx.two_s, m, "m")
    total = 0.0
    for n, r, w in spec.atoms:
        q = _adaptive_moments(ctx.two_s, n, float(m))
        total += w * r**power * q[power]
    return float(total)


def wasserstein_1d(mu: DiscreteDistribution, nu: DiscreteDistribution, alpha: float) -> float:
    """Wasserstein ``alpha``-distance via the monotone coupling of the quantile functions."""
    if not alpha >= 1:
        raise ValueError("alpha must be at least 1")
    cmu = np.cumsum(mu.probs)
    cnu = np.cumsum(nu.probs)
    cmu[-1] = cnu[-1] = 1.0
    u = np.union1d(cmu, cnu)
    u = u[(u > 0) & (u <= 1)]
    du = np.diff(np.concatenate([[0.0], u]))
    mid = u - du / 2
    x = mu.support[np.minimum(np.searchsorted(cmu, mid), cmu.size - 1)]
    y = nu.support[np.minimum(np.searchsorted(cnu, mid), cnu.size - 1)]
    return float(np.sum(du * np.abs(x - y) ** alpha) ** (1 / alpha))


def output_distribution(ctx: SpinContext, spec: CovariantMeasurementSpec, rho: QuantumState,
                        order: int = METRIC_ORDER) -> DiscreteDistribution:
    """Distribution of the third output component, discretized on quadrature nodes ``r x_k``.

    The marginal is an exact ``L3`` measurement followed by the kernel
    ``P(m, .)``; each kernel is represented by its masses at the nodes.
    """
    spec.validate(ctx.two_s)
    x, w, d2 = _d_squared_nodes(ctx.two_s, order)
    p = np.clip(np.real(np.diag(rho.density())), 0, None)
    p = p / p.sum()
    supports, masses = [], []
    for n, r, weight in spec.atoms:
        kern = d2[:, ctx.index(n), :] * (w * (ctx.d) / 2)[:, None]
        supports.append(r * x)
        masses.append(weight * kern @ p)
    masses = np.concatenate(masses)
    return DiscreteDistribution(np.concatenate(supports), masses / masses.sum())


def ideal_distribution(ctx: SpinContext, rho: QuantumState) -> DiscreteDistribution:
    p = np.clip(np.real(np.diag(rho.density())), 0, None)
    return DiscreteDistribution(ctx.m_values.astype(float), p / p.sum())


def metric_vs_calibration_check(ctx: SpinContext, spec: CovariantMeasurementSpec, states,
                                tol: float = BINNING_TOL) -> dict:
    """Compare Wasserstein-2 output distances with the calibration error.

    Returns a report with the per-state squared distances, the calibration
    profile, the largest excess over the calibration maximum and the largest
    eigenstate mismatch ``|D^2(F_m, delta_m) - I(m)|``.  ``ok`` requires no
    state to exceed the calibration maximum by more than ``tol``.
    """
    per_m, cal_max = calibration_error(ctx, spec)
    eig_err = 0.0
    for k, m in enumerate(ctx.m_values):
        v = np.zeros(ctx.d, dtype=complex)
        v[k] = 1
        D = wasserstein_1d(output_distribution(ctx, spec, QuantumState(vector=v)),
                           DiscreteDistribution.point(m), 2)
        eig_err = max(eig_err, abs(D * D - per_m[k]))
    dist2 = []
    for rho in states:
        D = wasserstein_1d(output_distribution(ctx, spec, rho), ideal_distribution(ctx, rho), 2)
        dist2.append(D * D)
    excess = max((d - cal_max for d in dist2), default=-math.inf)
    return {
        "per_m": per_m,
        "calibration_max": cal_max,
        "metric_squared": dist2,
        "max_excess": excess,
        "eigenstate_error": eig_err,
        "ok": bool(excess <= tol),
    }


def separating_normal(s) -> np.ndarray:
    """Normal of the tangent to ``r -> (A_s(r, s), B_s(r, s))`` at the optimum (``s > 1``)."""
    two_s = parse_spin(s)
    if two_s <= 2:
        raise ValueError("the separating line is defined for s > 1")
    s = two_s / 2
    root = math.sqrt(2 * s + 3)
    return np.array([2 * root / (2 * s * s + 5 * s + 3), (2 * s - root + 3) / (2 * s + 3)])


def separating_gap(s, n: float, r: float) -> float:
    """``(omega_point(s, r, n) - v) . u`` with ``v = (A_s(r_min, s), 0)``.

    Non-negative on the whole ``(n, r)`` domain, vanishing only at the optimum.
    """
    u = separating_normal(s)
    opt = optimal_measurement(s)
    p = np.array(omega_point(s, r, n))
    v = np.array(omega_point(s, opt.r_min, opt.n_opt))
    return float((p - v) @ u)


def measurement_profile(spins) -> list[dict]:
    """Rows ``(s, r_min, r_min/s, delta_min_squared)`` for the optimal observables."""
    rows = []
    for s in spins:
        two_s = parse_spin(s)
        opt = optimal_measurement(s)
        rows.append({"s": two_s / 2, "r_min": opt.r_min, "r_min_over_s": opt.r_min / (two_s / 2),
                     "delta_min_squared": opt.delta_min_squared})
    return rows
