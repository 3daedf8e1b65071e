"""Large-spin limit of the variance region via the Holstein-Primakoff picture.

Near the maximal-weight state, ``L1/sqrt(s)`` and ``L2/sqrt(s)`` act like
oscillator quadratures.  Squeezed oscillator ground states, expressed in the
occupation basis ``|n> <-> |m = s - n>`` and truncated to ``2s + 1`` levels,
give spin states whose scaled variances approach ``(1/(2 alpha), alpha/2, 0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .prep_region import c2_bound
from .spin_core import QuantumState, SpinContext, make_spin_context, moments

__all__ = [
    "HPState",
    "hp_distribution",
    "hp_state",
    "hp_moments",
    "hp_moments_numeric",
    "tail_cutoff",
    "truncate_to_spin",
    "asymptotic_variance_triple",
    "scaled_variances",
    "is_ill_conditioned",
    "fit_c2_scaling",
    "convergence_table",
]

_MAX_TERMS = 10**6


@dataclass(frozen=True)
class HPState:
    """Squeezed oscillator ground state in the occupation basis (odd amplitudes vanish)."""

    alpha: float
    amplitudes: np.ndarray
    cutoff: int


def _log_p_even(alpha: float, k: np.ndarray) -> np.ndarray:
    """log p_{2k} for ``alpha != 1``."""
    return (math.log(2 * math.sqrt(alpha) / (1 + alpha))
            + 2 * k * math.log(abs(1 - alpha) / (2 + 2 * alpha))
            + gammaln(2 * k + 1) - 2 * gammaln(k + 1))


def hp_distribution(alpha: float, cutoff: int) -> tuple[np.ndarray, float]:
    """Occupation probabilities ``p_n`` for ``n = 0 .. cutoff`` and the tail mass beyond.

    ``p_{2k} = 2 sqrt(alpha)/(1 + alpha) ((1 - alpha)/(2 + 2 alpha))^{2k} C(2k, k)``
    and ``p_{2k+1} = 0``.
    """
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    p = np.zeros(cutoff + 1)
    if alpha == 1:
        p[0] = 1.0
        return p, 0.0
    k = np.arange(cutoff // 2 + 1)
    p[0::2] = np.exp(_log_p_even(alpha, k))
    tail = max(0.0, 1.0 - math.fsum(p))
    return p, tail


def tail_cutoff(alpha: float, tail: float = 1e-12) -> int:
    """Smallest even cutoff with tail mass below ``tail`` (capped at 10^6 terms)."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if alpha == 1:
        return 0
    q = ((1 - alpha) / (1 + alpha)) ** 2
    # p_{2k+2}/p_{2k} increases towards q, so the tail past 2k is below p_{2k}/(1-q)
    k = np.arange(1, _MAX_TERMS // 2 + 1)
    ok = _log_p_even(alpha, k) - math.log1p(-q) < math.log(tail)
    if not ok.any():
        return _MAX_TERMS
    return int(2 * k[np.argmax(ok)])


def hp_state(alpha: float, cutoff: int) -> HPState:
    """Amplitudes ``psi_n``: ``sqrt(p_n)`` with sign ``sgn(1 - alpha)^(n/2)``."""
    p, _ = hp_distribution(alpha, cutoff)
    amp = np.sqrt(p)
    k = np.arange(cutoff + 1) // 2
    if alpha > 1:
        amp = amp * np.where(k % 2 == 1, -1.0, 1.0)
    return HPState(alpha=float(alpha), amplitudes=amp, cutoff=int(cutoff))


def hp_moments(alpha: float) -> tuple[float, float]:
    """Closed forms of ``<a*a>`` and ``<(a*a)^2>``."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    x = (1 - alpha) ** 2
    return x / (4 * alpha), 3 * x * x / (16 * alpha**2) + x / (2 * alpha)


def hp_moments_numeric(alpha: float, cutoff: int | None = None) -> tuple[float, float]:
    """Same moments by direct summation of ``n p_n`` and ``n^2 p_n``."""
    cutoff = tail_cutoff(alpha) if cutoff is None else cutoff
    p, _ = hp_distribution(alpha, cutoff)
    n = np.arange(cutoff + 1, dtype=float)
    return math.fsum(n * p), math.fsum(n * n * p)


def truncate_to_spin(ctx: SpinContext, hp: HPState | float) -> QuantumState:
    """Place ``psi_n`` at ``|m = s - n>`` for ``n <= 2s`` and renormalize.

    ``hp`` may be an :class:`HPState` or just ``alpha``.
    """
    if not isinstance(hp, HPState):
        hp = hp_state(float(hp), ctx.d - 1)
    v = np.zeros(ctx.d, dtype=complex)
    n = min(ctx.d, hp.amplitudes.size)
    v[:n] = hp.amplitudes[:n]
    return QuantumState(vector=v / np.linalg.norm(v))


def asymptotic_variance_triple(alpha: float) -> tuple[float, float, float]:
    """Limit of ``(var L1, var L2, var L3) / s`` for the truncated squeezed states."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    return 1 / (2 * alpha), alpha / 2, 0.0


def scaled_variances(ctx: SpinContext, alpha: float) -> np.ndarray:
    """Exact variances of the truncated state along the axes, divided by ``s``."""
    md = moments(ctx, truncate_to_spin(ctx, alpha))
    return np.diag(md.Lam) / ctx.s


def is_ill_conditioned(alpha: float, s) -> bool:
    """Flags extreme squeezing where ``<a*a>`` exceeds ``s/4``."""
    return hp_moments(alpha)[0] > float(s) / 4


def convergence_table(alphas, spins) -> list[dict]:
    """Rows ``(s, alpha, nu1, nu2, nu3, error)`` with max-norm error to the limit."""
    rows = []
    for alpha in alphas:
        target = np.array(asymptotic_variance_triple(alpha))
        for s in spins:
            nu = scaled_variances(make_spin_context(s), alpha)
            rows.append({
                "s": float(s), "alpha": float(alpha),
                "nu1": float(nu[0]), "nu2": float(nu[1]), "nu3": float(nu[2]),
                "error": float(np.abs(nu - target).max()),
                "ill_conditioned": is_ill_conditioned(alpha, s),
            })
    return rows


def fit_c2_scaling(s_list, c2_values=None) -> tuple[float, float]:
    """Least-squares fit ``c2(s) ~ coefficient * s^exponent`` on log-log axes.

    ``c2_values`` defaults to :func:`c2_bound` at each spin.
    """
    s_arr = np.asarray([float(s) for s in s_list])
    if np.unique(s_arr).size < 2:
        raise ValueError("need at least two distinct spins")
    if c2_values is None:
        if s_arr.size < 4 or np.any(s_arr < 5):
            raise ValueError("need at least four spins, all >= 5")
        c2_values = [c2_bound(make_spin_context(s)) for s in s_arr]
    y = np.log(np.asarray(c2_values, dtype=float))
    slope, intercept = np.polyfit(np.log(s_arr), y, 1)
    return float(math.exp(intercept)), float(slope)
