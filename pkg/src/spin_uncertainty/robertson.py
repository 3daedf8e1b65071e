"""Robertson-type bounds from positivity of the moment matrix of (1, L1, L2, L3).

The matrix ``M_jk = tr rho X_j^* X_k`` with ``X = (1, L1, L2, L3)`` is positive
semi-definite for every state.  Written in the principal frame of the
covariance matrix (eigenvalues ``mu``) it gives an eigenvalue bound which,
after closing under frame rotations, becomes a bound on ordered variance
triples.
"""
from __future__ import annotations

import math

import numpy as np

from .constants import PSD_TOL
from .spin_core import MomentData

__all__ = [
    "schrodinger_matrix",
    "principal_minors",
    "is_psd",
    "principal_frame",
    "generalized_robertson_eigen",
    "generalized_robertson_variance",
    "boundary_hyperbola",
    "boundary_sheets",
    "extreme_point",
    "sum_of_products_slack",
    "hexagon_variance_slack",
]


def schrodinger_matrix(lam, mu) -> np.ndarray:
    """4x4 Hermitian moment matrix for first moments ``lam`` and diagonal covariance ``mu``."""
    l1, l2, l3 = (float(x) for x in lam)
    m1, m2, m3 = (float(x) for x in mu)
    return np.array([
        [1, l1, l2, l3],
        [l1, m1 + l1 * l1, l1 * l2 + 0.5j * l3, l1 * l3 - 0.5j * l2],
        [l2, l1 * l2 - 0.5j * l3, m2 + l2 * l2, l2 * l3 + 0.5j * l1],
        [l3, l1 * l3 + 0.5j * l2, l2 * l3 - 0.5j * l1, m3 + l3 * l3],
    ], dtype=complex)


def principal_minors(M: np.ndarray) -> tuple[float, float, float, float]:
    """Determinants of the leading 1x1 ... 4x4 blocks."""
    M = np.asarray(M)
    return tuple(float(np.linalg.det(M[:k, :k]).real) for k in range(1, 5))


def is_psd(M: np.ndarray, tol: float = PSD_TOL) -> bool:
    return bool(np.linalg.eigvalsh(M).min() >= -tol)


def principal_frame(md: MomentData) -> tuple[np.ndarray, np.ndarray]:
    """First moments and covariance eigenvalues in the principal frame (descending ``mu``).

    The frame is a proper rotation so the orientation of the commutator terms
    is preserved.
    """
    w, V = np.linalg.eigh(md.Lam)
    w, V = w[::-1], V[:, ::-1]
    if np.linalg.det(V) < 0:
        V[:, 2] = -V[:, 2]
    return V.T @ md.lam, w


def _ordered(x, name: str) -> tuple[float, float, float]:
    x = tuple(float(v) for v in x)
    if len(x) != 3 or not (x[0] >= x[1] >= x[2] >= 0):
        raise ValueError(f"{name} must be a descending triple of non-negative reals")
    return x


def generalized_robertson_eigen(mu, s) -> tuple[float, bool]:
    """Slack of ``4 mu1 mu2 >= s(s+1) - (mu1 + mu2 + mu3)`` for ordered eigenvalues."""
    m1, m2, m3 = _ordered(mu, "mu")
    s = float(s)
    slack = 4 * m1 * m2 - s * (s + 1) + (m1 + m2 + m3)
    return slack, slack >= -PSD_TOL


def generalized_robertson_variance(v, s) -> tuple[float, bool]:
    """Slack of ``4 v1 (v2 + v3) >= s(s+1) - (v1 + v2 + v3)`` for ordered variances."""
    v1, v2, v3 = _ordered(v, "v")
    s = float(s)
    slack = 4 * v1 * (v2 + v3) - s * (s + 1) + (v1 + v2 + v3)
    return slack, slack >= -PSD_TOL


def sum_of_products_slack(v, s) -> float:
    """Slack of the plain summed Robertson bound ``v1v2 + v2v3 + v3v1 >= (s(s+1) - sum v)/4``."""
    v1, v2, v3 = (float(x) for x in v)
    s = float(s)
    return v1 * v2 + v2 * v3 + v3 * v1 - (s * (s + 1) - (v1 + v2 + v3)) / 4


def boundary_hyperbola(s, v1_grid) -> np.ndarray:
    """Points ``(v1, v2, 0)`` on ``4 v1 v2 = s(s+1) - v1 - v2``.

    Grid values beyond the root ``v1 = s(s+1)`` (where ``v2`` would turn
    negative) are dropped.
    """
    s = float(s)
    c = s * (s + 1)
    v1 = np.asarray(v1_grid, dtype=float).reshape(-1)
    if np.any(v1 <= 0):
        raise ValueError("v1 grid must be positive")
    v1 = v1[v1 <= c]
    v2 = (c - v1) / (4 * v1 + 1)
    return np.column_stack([v1, v2, np.zeros_like(v1)])


def boundary_sheets(s, v1_grid) -> dict[str, np.ndarray]:
    """The hyperbola on each coordinate plane, keyed by the vanishing component."""
    base = boundary_hyperbola(s, v1_grid)
    return {
        "v3=0": base,
        "v2=0": base[:, [0, 2, 1]],
        "v1=0": base[:, [2, 0, 1]],
    }


def extreme_point(gamma: float, s) -> np.ndarray:
    """Vertex ``(c, gamma - c, 0)`` of the ordered slice ``sum v = gamma``.

    ``c = gamma/2 + sqrt(gamma^2/4 - (s(s+1) - gamma)/4)`` is the largest
    root of ``4 c (gamma - c) = s(s+1) - gamma``, i.e. the largest admissible
    leading variance on that slice.  Defined for ``s <= gamma <= s(s+1)``.
    """
    s = float(s)
    disc = gamma * gamma / 4 - (s * (s + 1) - gamma) / 4
    if disc < -1e-12 or gamma > s * (s + 1) + 1e-12:
        raise ValueError("gamma must lie in [s, s(s+1)]")
    c = gamma / 2 + math.sqrt(max(disc, 0.0))
    return np.array([c, gamma - c, 0.0])


def hexagon_variance_slack(v, s) -> float:
    """Slack of ``max_i v_i <= c(sum v)`` with ``c`` from :func:`extreme_point`.

    Each eigenvalue triple obeying the eigenvalue bound lies in the hexagon
    spanned by the permutations of ``extreme_point(gamma)``, and frame
    rotations only produce convex combinations of permutations, so every
    physical variance triple satisfies this.  Unlike the ordered product form
    :func:`generalized_robertson_variance` it also covers triples such as
    ``(s/3, s/3, s/3)`` from a coherent state along the diagonal.
    """
    v = np.asarray(v, dtype=float)
    s = float(s)
    gamma = float(v.sum())
    disc = gamma * gamma / 4 - (s * (s + 1) - gamma) / 4
    if disc < 0:
        return float(disc)
    return float(gamma / 2 + math.sqrt(disc) - v.max())
