"""Output entropies of angular momentum components and the overlap bound on their sum.

Entropies are Shannon entropies taken to base ``d = 2s + 1``, so every value
lies in ``[0, 1]``.  The sum of the entropies of two orthogonal components is
bounded below by ``-log_d c^2`` where ``c`` is the largest overlap between
their eigenbases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .constants import DEFAULT_SEED, VERIFY_TOL
from .spin_core import (
    QuantumState,
    SpinContext,
    coherent_state,
    eigenstate,
    make_spin_context,
    parse_spin,
    polar_rotation,
    random_states,
)

__all__ = [
    "EntropyPair",
    "shannon_entropy",
    "output_distribution",
    "output_entropy",
    "mu_constant",
    "mu_bound",
    "entropy_pair",
    "phi_family_state",
    "region_sample_s1",
    "psi_alpha_state",
    "binomial_column_entropy",
    "eigenstate_entropy_sums",
]

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class EntropyPair:
    """Normalized output entropies along ``e1`` and ``e2`` (and optionally ``e3``).

    ``params`` records how the witness state was generated, for data export.
    """

    h1: float
    h2: float
    state: QuantumState
    h3: float | None = None
    params: tuple = field(default=())

    def __post_init__(self):
        for h in (self.h1, self.h2) + (() if self.h3 is None else (self.h3,)):
            if not -1e-12 <= h <= 1 + 1e-12:
                raise ValueError(f"normalized entropy {h} outside [0, 1]")

    @property
    def total(self) -> float:
        return self.h1 + self.h2


def shannon_entropy(p, base: float) -> float:
    """``-sum p log_base p`` with ``0 log 0 = 0``; ordering of ``p`` is irrelevant."""
    p = np.asarray(p, dtype=float).reshape(-1)
    if np.any(p < -1e-12):
        raise ValueError("probabilities must be non-negative")
    p = p[p > 0]
    return float(max(0.0, -np.sum(p * np.log(p)) / math.log(base)))


def output_distribution(ctx: SpinContext, e, rho: QuantumState) -> np.ndarray:
    """Probabilities ``<m_e|rho|m_e>`` for ``m = s, s-1, ..., -s`` along direction ``e``."""
    U = polar_rotation(ctx, np.asarray(e, dtype=float))
    if rho.kind == "pure":
        p = np.abs(U.conj().T @ rho.vector) ** 2
    else:
        p = np.einsum("im,ij,jm->m", U.conj(), rho.matrix, U).real
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def output_entropy(ctx: SpinContext, e, rho: QuantumState) -> float:
    """Entropy of the distribution of ``e.L`` in state ``rho``, normalized by ``log d``."""
    if ctx.d == 1:
        return 0.0
    return shannon_entropy(output_distribution(ctx, e, rho), ctx.d)


def mu_constant(s) -> float:
    """Squared maximal overlap ``c^2 = 2^{-2s} C(2s, floor(s + 1/2))`` of the ``L1`` and ``L2`` eigenbases."""
    two_s = parse_spin(s)
    k = (two_s + 1) // 2
    return math.exp(-two_s * math.log(2) + gammaln(two_s + 1) - gammaln(k + 1) - gammaln(two_s - k + 1))


def mu_bound(s) -> float:
    """Lower bound ``-log_d c^2`` on ``H(L1) + H(L2)``; tends to 1/2 for large ``s``."""
    two_s = parse_spin(s)
    if two_s == 0:
        return 0.0
    return -math.log(mu_constant(s)) / math.log(two_s + 1)


def entropy_pair(ctx: SpinContext, rho: QuantumState, *, with_e3: bool = False, params: tuple = ()) -> EntropyPair:
    """Entropies along ``e1`` and ``e2``; raises ``ArithmeticError`` if the overlap bound fails."""
    h1 = output_entropy(ctx, E1, rho)
    h2 = output_entropy(ctx, E2, rho)
    bound = mu_bound(ctx.s) if ctx.d > 1 else 0.0
    if h1 + h2 < bound - VERIFY_TOL * 10:
        raise ArithmeticError(f"entropy sum {h1 + h2} below overlap bound {bound}")
    h3 = output_entropy(ctx, E3, rho) if with_e3 else None
    return EntropyPair(h1=h1, h2=h2, state=rho, h3=h3, params=params)


def phi_family_state(t: float) -> QuantumState:
    """Spin-1 state ``(cos t/sqrt2, sin t, cos t/sqrt2)`` in the ``L3`` basis."""
    c = math.cos(t) / math.sqrt(2)
    return QuantumState(vector=np.array([c, math.sin(t), c], dtype=complex))


def _odd_at_least(n: int) -> int:
    n = max(int(n), 3)
    return n if n % 2 else n + 1


def region_sample_s1(grid: int = 100, n_random: int = 0, seed: int = DEFAULT_SEED,
                     with_e3: bool = True) -> list[EntropyPair]:
    """Entropy triples of spin-1 pure states.

    Real states ``(cos a, sin a cos b, sin a sin b)`` are sampled on a grid with
    ``a`` in ``[0, pi/2]`` (odd count near ``grid/2``) and ``b`` in ``[0, 2pi)``
    (multiple of four near ``grid``), which contains the ``L1`` and ``L2``
    eigenstates with ``m = 0``.  The family ``phi(t)`` is added on ``grid``
    points of ``[0, pi]``, followed by ``n_random`` Haar-random complex states.

    Each pair's ``params`` is ``("real", a, b)``, ``("phi", t)`` or ``("haar", i)``.
    """
    grid = int(grid)
    if grid < 1:
        raise ValueError("grid must be positive")
    if n_random < 0:
        raise ValueError("n_random must be non-negative")
    ctx = make_spin_context(1)
    out = []
    a_vals = np.linspace(0, np.pi / 2, _odd_at_least(grid // 2))
    n_b = max(4, 4 * round(grid / 4))
    b_vals = 2 * np.pi * np.arange(n_b) / n_b
    for a in a_vals:
        for b in b_vals:
            v = np.array([math.cos(a), math.sin(a) * math.cos(b), math.sin(a) * math.sin(b)], dtype=complex)
            out.append(entropy_pair(ctx, QuantumState(vector=v), with_e3=with_e3,
                                    params=("real", float(a), float(b))))
    for t in np.linspace(0, np.pi, grid):
        out.append(entropy_pair(ctx, phi_family_state(t), with_e3=with_e3, params=("phi", float(t))))
    if n_random:
        for i, v in enumerate(random_states(ctx, n_random, seed)):
            out.append(entropy_pair(ctx, QuantumState(vector=v), with_e3=with_e3, params=("haar", i)))
    return out


def psi_alpha_state(ctx: SpinContext, alpha_angle: float) -> QuantumState:
    """Normalized ``cos(a)|s>_1 + sin(a) U3|s>_1`` with ``U3 = exp(-i pi L3/2)``.

    ``|s>_1`` is the coherent state along ``e1`` and ``U3`` turns it into the
    coherent state along ``e2``.  The two terms are nearly orthogonal for large
    ``s``, and the entropy pair approaches ``(sin^2 a, cos^2 a)/2``.
    """
    if not -1e-12 <= alpha_angle <= np.pi / 2 + 1e-12:
        raise ValueError("alpha_angle must lie in [0, pi/2]")
    base = coherent_state(ctx, E1).vector
    u3 = np.exp(-0.5j * np.pi * ctx.m_values)
    v = math.cos(alpha_angle) * base + math.sin(alpha_angle) * (u3 * base)
    return QuantumState(vector=v / np.linalg.norm(v))


def binomial_column_entropy(s) -> float:
    """Normalized entropy of ``2^{-2s} C(2s, k)``, ``k = 0..2s``, by summation in log space."""
    two_s = parse_spin(s)
    if two_s == 0:
        return 0.0
    k = np.arange(two_s + 1)
    logp = -two_s * math.log(2) + gammaln(two_s + 1) - gammaln(k + 1) - gammaln(two_s - k + 1)
    return float(-np.sum(np.exp(logp) * logp) / math.log(two_s + 1))


def eigenstate_entropy_sums(s) -> tuple[float, float]:
    """Entropy sums ``H(L1) + H(L2)`` of the ``L1`` eigenstates ``|s>`` and ``|0>`` (``|1/2>`` for half-integer ``s``)."""
    ctx = make_spin_context(s)
    low = 0.0 if ctx.is_integer else 0.5
    sums = []
    for m in (ctx.s, low):
        pair = entropy_pair(ctx, eigenstate(ctx, m, E1))
        sums.append(pair.total)
    return sums[0], sums[1]
