"""Classical vector model: measures on a sphere matching quantum first and second moments."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PSD_TOL
from .spin_core import QuantumState, SpinContext, as_direction, make_spin_context, moments

__all__ = [
    "ClassicalMoments",
    "quantum_moments",
    "moment_feasible",
    "latitude_measure_moments",
    "third_moment_gap",
    "characteristic_function",
    "imaginary_extension_modulus",
]


@dataclass(frozen=True)
class ClassicalMoments:
    m: np.ndarray
    M: np.ndarray
    r: float

    def __post_init__(self):
        M = np.asarray(self.M, dtype=float)
        if np.max(np.abs(M - M.T)) > 1e-12:
            raise ValueError("second-moment matrix must be symmetric")
        object.__setattr__(self, "m", np.asarray(self.m, dtype=float).reshape(3))
        object.__setattr__(self, "M", M)

    @property
    def covariance(self) -> np.ndarray:
        return self.M - np.outer(self.m, self.m)


def quantum_moments(ctx: SpinContext, rho: QuantumState) -> ClassicalMoments:
    """``m_j = tr rho L_j``, ``M_jk = Re tr rho L_j L_k`` on the sphere of radius ``sqrt(s(s+1))``."""
    md = moments(ctx, rho)
    M = md.Lam + np.outer(md.lam, md.lam)
    return ClassicalMoments(m=md.lam, M=(M + M.T) / 2, r=math.sqrt(ctx.casimir))


def moment_feasible(cm: ClassicalMoments, tol: float = PSD_TOL) -> bool:
    """Whether ``(m, M)`` are moments of some probability measure on the sphere of radius ``r``.

    True iff ``tr M = r^2`` and the covariance ``M - m m^T`` is positive
    semi-definite.
    """
    trace_ok = abs(np.trace(cm.M) - cm.r**2) <= tol
    cov = cm.covariance
    return bool(trace_ok and np.linalg.eigvalsh((cov + cov.T) / 2).min() >= -tol)


def latitude_measure_moments(s, m) -> ClassicalMoments:
    """Moments of the uniform measure on the circle ``x3 = m`` of the sphere ``|x|^2 = s(s+1)``."""
    s = float(s)
    m = float(m)
    if abs(m) > s + 1e-12 or abs(2 * (s - m) - round(2 * (s - m))) > 1e-12:
        raise ValueError(f"m={m} is not a weight of spin {s}")
    r2 = s * (s + 1)
    # x1 = rho cos(phi), x2 = rho sin(phi) with rho^2 = r^2 - m^2; <cos^2> = 1/2
    transverse = (r2 - m * m) / 2
    return ClassicalMoments(
        m=np.array([0.0, 0.0, m]),
        M=np.diag([transverse, transverse, m * m]),
        r=math.sqrt(r2),
    )


def third_moment_gap(e, n_phi: int = 256) -> tuple[float, float]:
    """Quantum vs classical ``<(e.x)^3>`` for spin 1/2 in ``|m = +1/2>``.

    The classical value integrates over the latitude circle ``x3 = 1/2`` on
    the sphere of radius ``sqrt(3)/2`` with a trapezoid rule in azimuth
    (exact for this trigonometric polynomial once ``n_phi > 3``).
    """
    e = as_direction(e)
    cos_t = float(e[2])
    if abs(cos_t) >= 1 - 1e-12 or abs(cos_t) <= 1e-12 or cos_t < 0:
        raise ValueError("angle between e and e3 must lie strictly between 0 and pi/2")
    ctx = make_spin_context(0.5)
    A = ctx.component(e)
    up = np.array([1.0, 0.0], dtype=complex)
    quantum = float(np.vdot(up, A @ A @ A @ up).real)
    rho_perp = math.sqrt(0.75 - 0.25)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    x = np.stack([rho_perp * np.cos(phi), rho_perp * np.sin(phi), np.full(n_phi, 0.5)], axis=1)
    classical = float(np.mean((x @ e) ** 3))
    if not classical > quantum:
        raise ArithmeticError("classical third moment did not exceed the quantum value")
    return quantum, classical


def characteristic_function(ctx: SpinContext, rho: QuantumState, k) -> complex:
    """``tr(rho exp(i k.L))`` via the spectral decomposition of ``k.L``."""
    k = np.asarray(k, dtype=float).reshape(3)
    w, V = np.linalg.eigh(ctx.component(k))
    U = (V * np.exp(1j * w)) @ V.conj().T
    return rho.expect(U)


def imaginary_extension_modulus(ctx: SpinContext, rho: QuantumState, axis: int, kappa: float) -> float:
    """``|tr(rho exp(kappa L_axis))|``, the characteristic function at ``k = -i kappa e_axis``."""
    w, V = np.linalg.eigh(ctx.L[axis])
    E = (V * np.exp(kappa * w)) @ V.conj().T
    return abs(rho.expect(E))
