"""Preparation uncertainty regions for angular momentum components.

The lower convex hull of a variance region is described by its supporting
half-spaces ``w . x >= m(w)``.  For each weight vector ``w`` the minimum
``m(w)`` is estimated by alternating between the two partial minimizations of

    sum_a w_a tr rho (A_a - a_a)^2

over the shifts ``a_a`` (closed form: the means) and over states (ground
state of the shifted quadratic operator).  Every iterate is an upper bound
on ``m(w)`` and the sequence of bounds is non-increasing.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import gammaln

from .constants import DEFAULT_SEED, VERIFY_TOL
from .spin_core import (
    MomentData,
    QuantumState,
    SpinContext,
    hermitian_ground_state,
    make_spin_context,
    moments,
    random_states,
)

__all__ = [
    "WeightVector",
    "RegionPoint",
    "MinimizeOptions",
    "min_weighted_variance",
    "weight_grid",
    "trace_region",
    "c2_bound",
    "sum_bound_check",
    "power_mean_bound",
    "vnorm_p",
    "hexagon_hull",
    "spin1_pure_family",
]


@dataclass(frozen=True)
class WeightVector:
    """Non-negative weights, normalized to unit sum on construction."""

    w: tuple

    def __init__(self, w):
        arr = np.asarray(w, dtype=float).reshape(-1)
        if arr.size not in (2, 3):
            raise ValueError("weight vectors have 2 or 3 entries")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("weights must be finite and non-negative")
        total = arr.sum()
        if total <= 0:
            raise ValueError("weights must not all vanish")
        object.__setattr__(self, "w", tuple(float(x) for x in arr / total))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.w, dtype=dtype)

    def __len__(self):
        return len(self.w)


@dataclass
class RegionPoint:
    variances: tuple
    bound: float
    weights: WeightVector
    witness: QuantumState
    iterations: int
    converged: bool


@dataclass(frozen=True)
class MinimizeOptions:
    """Settings for the alternating minimization.

    ``restarts`` Haar-random starts are used in addition to ``shift_seeds``
    starts taken from a scan over the shift vector ``a`` (see
    :func:`min_weighted_variance`).
    """

    max_iters: int = 500
    tolerance: float = 1e-12
    restarts: int = 16
    seed: int = DEFAULT_SEED
    shift_seeds: int = 4


def _variances(psi: np.ndarray, ops: Sequence[np.ndarray]) -> tuple[np.ndarray, np.ndarray]:
    means = np.array([np.vdot(psi, A @ psi).real for A in ops])
    sq = np.array([np.vdot(A @ psi, A @ psi).real for A in ops])
    return means, np.maximum(sq - means**2, 0.0)


def _alternate(psi, ops, w, opts: MinimizeOptions):
    d = ops[0].shape[0]
    eye = np.eye(d)
    squares = [A @ A for A in ops]
    means, var = _variances(psi, ops)
    f = float(w @ var)
    for it in range(1, opts.max_iters + 1):
        H = sum(wa * (S - 2 * a * A + a * a * eye) for wa, S, A, a in zip(w, squares, ops, means))
        _, new = hermitian_ground_state(H)
        new_means, new_var = _variances(new, ops)
        f_new = float(w @ new_var)
        # the bound may only drop; allow rounding noise
        if f_new > f + 1e-11 * max(1.0, abs(f)):
            raise ArithmeticError("alternating step increased the bound")
        decrease = f - f_new
        if f_new < f:
            psi, means, var, f = new, new_means, new_var, f_new
        if decrease <= opts.tolerance * abs(f):
            return psi, var, f, it, True
    return psi, var, f, opts.max_iters, False


def _shift_scan_starts(ops, w, n_seeds: int) -> list[np.ndarray]:
    """Ground states of ``sum_a w_a (A_a - x_a)^2`` at the best points of a grid over ``x``.

    Random states have means near zero, so alternation started from them can
    stall at eigenstates with small ``|m|``; these starts cover every shift.
    """
    if n_seeds <= 0:
        return []
    d = ops[0].shape[0]
    eye = np.eye(d)
    radius = [float(np.abs(np.linalg.eigvalsh(A)).max()) for A in ops]
    per_axis = 17 if len(ops) == 2 else 9
    axes = [np.linspace(-r, r, per_axis) for r in radius]
    shifts = np.array(list(itertools.product(*axes)))
    squares = [A @ A for A in ops]
    energies = np.empty(len(shifts))
    for chunk in range(0, len(shifts), 256):
        xs = shifts[chunk:chunk + 256]
        H = sum(wa * (S[None] - 2 * x[:, None, None] * A[None] + (x * x)[:, None, None] * eye[None])
                for wa, S, A, x in zip(w, squares, ops, xs.T))
        energies[chunk:chunk + len(xs)] = np.linalg.eigvalsh(H)[:, 0]
    starts = []
    for i in np.argsort(energies, kind="stable")[:n_seeds]:
        x = shifts[i]
        H = sum(wa * (S - 2 * xa * A + xa * xa * eye) for wa, S, A, xa in zip(w, squares, ops, x))
        starts.append(hermitian_ground_state(H)[1])
    return starts


def min_weighted_variance(ctx: SpinContext | None, ops: Sequence[np.ndarray], w,
                          options: MinimizeOptions | None = None) -> RegionPoint:
    """Upper estimate of ``min_rho sum_a w_a var_rho(A_a)`` with its witness state.

    Runs the alternating minimization from ``options.restarts`` Haar-random
    pure states and from ground states at the ``options.shift_seeds`` best
    points of a shift-vector scan, and keeps the smallest bound.  ``converged`` is False when the
    best run stopped at ``max_iters`` without meeting the relative tolerance.
    """
    opts = options or MinimizeOptions()
    weights = w if isinstance(w, WeightVector) else WeightVector(w)
    wv = np.asarray(weights)
    ops = [np.asarray(A, dtype=complex) for A in ops]
    if len(ops) != len(wv):
        raise ValueError("need one weight per operator")
    d = ops[0].shape[0]
    for A in ops:
        if A.shape != (d, d) or np.max(np.abs(A - A.conj().T)) > VERIFY_TOL:
            raise ValueError("operators must be Hermitian of equal dimension")
    if ctx is not None and ctx.d != d:
        raise ValueError("operator dimension does not match spin context")

    starts = list(random_states(d, opts.restarts, opts.seed)) if opts.restarts else []
    starts += _shift_scan_starts(ops, wv, opts.shift_seeds)
    if not starts:
        raise ValueError("need at least one start (restarts or shift_seeds)")
    best = None
    for psi0 in starts:
        run = _alternate(psi0, ops, wv, opts)
        if best is None or run[2] < best[2]:
            best = run
    psi, var, f, iters, ok = best
    return RegionPoint(
        variances=tuple(float(x) for x in var),
        bound=f,
        weights=weights,
        witness=QuantumState(vector=psi / np.linalg.norm(psi)),
        iterations=iters,
        converged=ok,
    )


def weight_grid(n_components: int, n: int) -> list[WeightVector]:
    """Uniform tangent-direction grids.

    Two components: ``(cos^2 phi, sin^2 phi)`` for ``phi`` uniform on
    ``[0, pi/2]``.  Three components: squared points of a Fibonacci lattice on
    the positive octant of the unit sphere.
    """
    if n < 1:
        raise ValueError("grid must be non-empty")
    if n_components == 2:
        if n == 1:
            return [WeightVector((0.5, 0.5))]
        phi = np.linspace(0.0, np.pi / 2, n)
        return [WeightVector((math.cos(p) ** 2, math.sin(p) ** 2)) for p in phi]
    if n_components == 3:
        golden = math.pi * (3 - math.sqrt(5))
        out = []
        for i in range(n):
            z = 1 - (i + 0.5) / n
            phi = (i * golden) % (math.pi / 2)
            r2 = 1 - z * z
            out.append(WeightVector((r2 * math.cos(phi) ** 2, r2 * math.sin(phi) ** 2, z * z)))
        return out
    raise ValueError("n_components must be 2 or 3")


def region_operators(ctx: SpinContext, n_components: int) -> list[np.ndarray]:
    """``(L1, L3)`` for two components, ``(L1, L2, L3)`` for three."""
    if n_components == 2:
        return [ctx.L1, ctx.L3]
    if n_components == 3:
        return [ctx.L1, ctx.L2, ctx.L3]
    raise ValueError("n_components must be 2 or 3")


def trace_region(ctx: SpinContext, n_components: int, grid, options: MinimizeOptions | None = None,
                 map_fn=map) -> list[RegionPoint]:
    """One :class:`RegionPoint` per weight of ``grid``.

    ``grid`` is either a point count for :func:`weight_grid` or an explicit
    sequence of weight vectors.  ``map_fn`` may be a parallel map; results keep
    grid order.
    """
    weights = weight_grid(n_components, grid) if isinstance(grid, (int, np.integer)) else [
        w if isinstance(w, WeightVector) else WeightVector(w) for w in grid]
    if not weights:
        raise ValueError("grid must be non-empty")
    if any(len(w) != n_components for w in weights):
        raise ValueError("weight length does not match component count")
    task = _RegionTask(ctx.two_s, n_components, options or MinimizeOptions())
    return list(map_fn(task, weights))


@dataclass(frozen=True)
class _RegionTask:
    two_s: int
    n_components: int
    options: MinimizeOptions = field(default_factory=MinimizeOptions)

    def __call__(self, w: WeightVector) -> RegionPoint:
        ctx = make_spin_context(self.two_s / 2)
        return min_weighted_variance(ctx, region_operators(ctx, self.n_components), w, self.options)


def c2_bound(ctx: SpinContext, grid_points: int = 64) -> float:
    """Best constant ``c`` in ``var L1 + var L3 >= c``.

    Minimizes over ``a`` the ground energy of ``s(s+1) - L2^2 - 2a L3 + a^2``;
    the operator only couples ``m`` and ``m'`` with ``m - m'`` even, so the
    two parity blocks are diagonalized separately.
    """
    s = ctx.s
    L2sq = (ctx.L2 @ ctx.L2).real
    m = ctx.m_values
    blocks = [np.arange(0, ctx.d, 2), np.arange(1, ctx.d, 2)]
    blocks = [b for b in blocks if b.size]
    sub = [(L2sq[np.ix_(b, b)], m[b]) for b in blocks]

    def energy(a: float) -> float:
        e = min(np.linalg.eigvalsh(-K - 2 * a * np.diag(mb))[0] for K, mb in sub)
        return ctx.casimir + a * a + e

    if s == 0:
        return 0.0
    # energy(a) = energy(-a): scan [0, s], then golden-section around the best cell
    xs = np.linspace(0.0, s, grid_points + 1)
    vals = np.array([energy(x) for x in xs])
    i = int(np.argmin(vals))
    if i == 0:
        bracket = (-xs[1], 0.0, xs[1])
    elif i == grid_points:
        res = minimize_scalar(energy, bounds=(xs[-2], s), method="bounded",
                              options={"xatol": 1e-12})
        return float(min(res.fun, vals[i]))
    else:
        bracket = (xs[i - 1], xs[i], xs[i + 1])
    res = minimize_scalar(energy, bracket=bracket, method="golden", tol=1e-12)
    return float(min(res.fun, vals[i]))


def sum_bound_check(ctx: SpinContext, rho: QuantumState) -> tuple[float, bool]:
    """``tr Lam(rho)`` and whether it respects ``tr Lam >= s``."""
    lhs = float(np.trace(moments(ctx, rho).Lam))
    return lhs, lhs >= ctx.s - VERIFY_TOL


def power_mean_bound(p: float, s) -> float:
    """Lower bound on the ``L^p`` sphere norm of ``v(e)``, attained by coherent states.

    ``c(p, s) = s/2 * (sqrt(pi) Gamma(p+1) / (2 Gamma(p+3/2)))^(1/p)``.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    s = float(s)
    if math.isinf(p):
        return s / 2
    log_inner = 0.5 * math.log(math.pi) + gammaln(p + 1) - math.log(2) - gammaln(p + 1.5)
    return s / 2 * math.exp(log_inner / p)


def _sphere_mean(f, order: int) -> float:
    """Mean of ``f(x, y, z)`` over the unit sphere; Gauss-Legendre in cos(theta), trapezoid in phi."""
    x, wx = np.polynomial.legendre.leggauss(order)
    n_phi = 2 * order
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    X = x[:, None]
    R = np.sqrt(1 - X**2)
    vals = f(R * np.cos(phi)[None, :], R * np.sin(phi)[None, :], np.broadcast_to(X, (order, n_phi)))
    return float(wx @ vals.mean(axis=1) / 2)


def vnorm_p(ctx: SpinContext, rho: QuantumState, p: float, tol: float = 1e-9,
            max_order: int = 2048) -> float:
    """``(mean over the sphere of v(e)^p)^(1/p)``; ``p = inf`` gives ``max v``.

    Uses principal axes of ``Lam``: ``v(e) = sum_k e_k^2 mu_k``.  The
    quadrature order doubles until two successive estimates agree within
    ``tol`` (relative).
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    mu = np.clip(np.linalg.eigvalsh(moments(ctx, rho).Lam)[::-1], 0.0, None)
    if math.isinf(p):
        return float(mu[0])

    def integrand(x, y, z):
        return (mu[0] * x * x + mu[1] * y * y + mu[2] * z * z) ** p

    order = 8
    prev = _sphere_mean(integrand, order)
    while order < max_order:
        order *= 2
        cur = _sphere_mean(integrand, order)
        if abs(cur - prev) <= tol * max(abs(cur), 1e-300):
            return cur ** (1 / p)
        prev = cur
    return prev ** (1 / p)


def hexagon_hull(mu) -> list[tuple[float, float, float]]:
    """Distinct coordinate permutations of ``mu``, ordered around the hexagon.

    Their convex hull holds every variance triple reachable from a covariance
    matrix with eigenvalues ``mu`` by rotating the frame.
    """
    mu = tuple(float(x) for x in mu)
    if len(mu) != 3 or not (mu[0] >= mu[1] >= mu[2] >= 0):
        raise ValueError("mu must be a descending triple of non-negative reals")
    verts = []
    for perm in itertools.permutations(mu):
        if not any(max(abs(a - b) for a, b in zip(perm, v)) <= 1e-12 for v in verts):
            verts.append(perm)
    if len(verts) == 1:
        return verts
    c = np.mean(verts, axis=0)
    u = np.array([1.0, -1.0, 0.0]) / math.sqrt(2)
    v = np.array([1.0, 1.0, -2.0]) / math.sqrt(6)
    ang = [math.atan2((np.array(p) - c) @ v, (np.array(p) - c) @ u) for p in verts]
    return [verts[i] for i in np.argsort(ang)]


# spherical basis |m> expressed by Cartesian components, for the spin-1 real representation
_SPIN1_CART_TO_M = np.array([
    [-1 / math.sqrt(2), 1j / math.sqrt(2), 0.0],   # <+1|
    [0.0, 0.0, 1.0],                              # <0|
    [1 / math.sqrt(2), 1j / math.sqrt(2), 0.0],    # <-1|
])


def spin1_pure_family(t: float) -> tuple[QuantumState, MomentData]:
    """Normal form of a spin-1 pure state, ``psi = (cos t, i sin t, 0)`` in Cartesian components.

    Every spin-1 pure state is a rotation of one of these.  Returns the state
    in the ``L3`` basis together with the closed-form moments
    ``lam = (0, 0, 2 sin t cos t)``, ``Lam = diag(tau, 1 - tau, 1 - 4 tau (1 - tau))``
    with ``tau = sin^2 t``.
    """
    if not -math.pi - 1e-12 <= t <= math.pi + 1e-12:
        raise ValueError("t must lie in [-pi, pi]")
    cart = np.array([math.cos(t), 1j * math.sin(t), 0.0])
    psi = _SPIN1_CART_TO_M @ cart
    tau = math.sin(t) ** 2
    md = MomentData(
        lam=np.array([0.0, 0.0, 2 * math.sin(t) * math.cos(t)]),
        Lam=np.diag([tau, 1 - tau, 1 - 4 * tau * (1 - tau)]),
    )
    return QuantumState(vector=psi / np.linalg.norm(psi)), md
