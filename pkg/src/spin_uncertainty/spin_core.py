"""Spin-s representation matrices, rotations, states and second moments.

All matrices are expressed in the eigenbasis of ``L3`` ordered by descending
magnetic quantum number, so index 0 corresponds to ``m = s`` and index
``d - 1`` to ``m = -s``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.spatial.transform import Rotation

from .constants import CONSTRUCTION_TOL, HERMITIAN_TOL, VERIFY_TOL

__all__ = [
    "SpinContext",
    "QuantumState",
    "MomentData",
    "make_spin_context",
    "parse_spin",
    "as_direction",
    "rotation_operator",
    "rotation_matrix",
    "wigner_small_d",
    "coherent_state",
    "eigenstate",
    "polar_rotation",
    "maximally_mixed",
    "moments",
    "moments_batch",
    "variance",
    "hermitian_ground_state",
    "random_state",
    "random_states",
    "random_rotation",
    "unit_vectors",
    "check_moment_invariants",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SpinContext:
    """Immutable spin-s representation.

    Attributes
    ----------
    two_s : int
        Twice the spin quantum number.
    L1, L2, L3 : ndarray
        Hermitian angular momentum components, shape ``(d, d)``.
    Lplus, Lminus : ndarray
        Ladder operators ``L1 +/- i L2``.
    """

    two_s: int
    L1: np.ndarray
    L2: np.ndarray
    L3: np.ndarray
    Lplus: np.ndarray
    Lminus: np.ndarray

    @property
    def s(self) -> float:
        return self.two_s / 2

    @property
    def d(self) -> int:
        return self.two_s + 1

    @property
    def casimir(self) -> float:
        return self.s * (self.s + 1)

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order (descending)."""
        return self.s - np.arange(self.d)

    @property
    def is_integer(self) -> bool:
        return self.two_s % 2 == 0

    @property
    def L(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return (self.L1, self.L2, self.L3)

    def component(self, e) -> np.ndarray:
        """The operator ``e . L`` for a real 3-vector ``e``."""
        e = np.asarray(e, dtype=float)
        return e[0] * self.L1 + e[1] * self.L2 + e[2] * self.L3

    def index(self, m) -> int:
        """Basis index of the ``L3`` eigenvector with eigenvalue ``m``."""
        k = self.s - float(m)
        if abs(k - round(k)) > CONSTRUCTION_TOL or not 0 <= round(k) < self.d:
            raise ValueError(f"m={m} is not a weight of spin {self.s}")
        return int(round(k))

    def __repr__(self) -> str:
        return f"SpinContext(s={Fraction(self.two_s, 2)}, d={self.d})"


def parse_spin(s) -> int:
    """Return ``2s`` for a spin given as number, Fraction or string ("1/2", "0.5")."""
    raw = s
    if isinstance(s, str):
        try:
            s = Fraction(s.strip())
        except ValueError:
            raise ValueError(f"cannot parse spin {raw!r}") from None
    two_s = 2 * float(s)
    if not np.isfinite(two_s) or abs(two_s - round(two_s)) > CONSTRUCTION_TOL:
        raise ValueError(f"spin must be a half-integer, got {raw}")
    if round(two_s) < 0:
        raise ValueError(f"spin must be non-negative, got {raw}")
    return int(round(two_s))


def make_spin_context(s) -> SpinContext:
    """Build the spin-s matrices from the ladder-operator matrix elements.

    ``<m+1| L+ |m> = sqrt(s(s+1) - m(m+1))``; ``L1`` and ``L2`` are the
    Hermitian and anti-Hermitian parts of ``L+``.
    """
    two_s = parse_spin(s)
    spin = two_s / 2
    m = spin - np.arange(two_s + 1)
    # column j holds m_j; L+ maps index j to j-1
    lp = np.diag(np.sqrt(spin * (spin + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    lm = lp.conj().T.copy()
    L1 = (lp + lm) / 2
    L2 = (lp - lm) / 2j
    L3 = np.diag(m).astype(complex)
    return SpinContext(
        two_s=two_s,
        L1=_readonly(L1),
        L2=_readonly(L2),
        L3=_readonly(L3),
        Lplus=_readonly(lp),
        Lminus=_readonly(lm),
    )


def as_direction(e, normalize: bool = False) -> np.ndarray:
    """Validate (or normalize) a real unit 3-vector."""
    e = np.asarray(e, dtype=float).reshape(3)
    n = np.linalg.norm(e)
    if normalize:
        if n == 0:
            raise ValueError("zero vector has no direction")
        return e / n
    if abs(n - 1) > CONSTRUCTION_TOL:
        raise ValueError(f"direction must have unit norm, got |e|={n}")
    return e


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure vector or density matrix in the descending-m ``L3`` basis."""

    vector: np.ndarray | None = None
    matrix: np.ndarray | None = None

    def __post_init__(self):
        if (self.vector is None) == (self.matrix is None):
            raise ValueError("give exactly one of vector or matrix")
        if self.vector is not None:
            v = np.asarray(self.vector, dtype=complex).reshape(-1)
            if abs(np.linalg.norm(v) - 1) > CONSTRUCTION_TOL:
                raise ValueError("pure state vector must have unit norm")
            object.__setattr__(self, "vector", _readonly(v))
        else:
            r = np.asarray(self.matrix, dtype=complex)
            if r.ndim != 2 or r.shape[0] != r.shape[1]:
                raise ValueError("density matrix must be square")
            if np.max(np.abs(r - r.conj().T)) > CONSTRUCTION_TOL:
                raise ValueError("density matrix must be Hermitian")
            if abs(np.trace(r).real - 1) > CONSTRUCTION_TOL:
                raise ValueError("density matrix must have unit trace")
            if np.linalg.eigvalsh(r).min() < -CONSTRUCTION_TOL:
                raise ValueError("density matrix must be positive semi-definite")
            object.__setattr__(self, "matrix", _readonly(r))

    @classmethod
    def pure(cls, vector, normalize: bool = False) -> "QuantumState":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(vector=v)

    @classmethod
    def mixed(cls, matrix) -> "QuantumState":
        return cls(matrix=matrix)

    @property
    def kind(self) -> str:
        return "pure" if self.vector is not None else "mixed"

    @property
    def dim(self) -> int:
        return len(self.vector) if self.vector is not None else self.matrix.shape[0]

    def density(self) -> np.ndarray:
        if self.vector is not None:
            return np.outer(self.vector, self.vector.conj())
        return np.array(self.matrix)

    def expect(self, op: np.ndarray) -> complex:
        if self.vector is not None:
            return complex(self.vector.conj() @ op @ self.vector)
        return complex(np.trace(self.matrix @ op))

    def transformed(self, U: np.ndarray) -> "QuantumState":
        """The state ``U rho U*``."""
        if self.vector is not None:
            return QuantumState(vector=U @ self.vector)
        r = U @ self.matrix @ U.conj().T
        return QuantumState(matrix=(r + r.conj().T) / 2)


@dataclass(frozen=True)
class MomentData:
    """First moments ``lam`` and symmetrized covariance matrix ``Lam``."""

    lam: np.ndarray
    Lam: np.ndarray

    @property
    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues of ``Lam`` in descending order."""
        return np.linalg.eigvalsh(self.Lam)[::-1]


def _check_dim(ctx: SpinContext, rho: QuantumState):
    if rho.dim != ctx.d:
        raise ValueError(f"state dimension {rho.dim} does not match d={ctx.d}")


def rotation_operator(ctx: SpinContext, axis, angle: float) -> np.ndarray:
    """``exp(-i angle axis.L)`` by spectral decomposition of ``axis.L``."""
    axis = as_direction(axis)
    w, V = np.linalg.eigh(ctx.component(axis))
    return (V * np.exp(-1j * angle * w)) @ V.conj().T


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """SO(3) matrix for the same axis-angle pair as :func:`rotation_operator`.

    With ``U = rotation_operator(ctx, axis, angle)`` and ``R`` this matrix,
    ``U* (e.L) U = (R^T e).L``.
    """
    axis = as_direction(axis)
    return Rotation.from_rotvec(angle * axis).as_matrix()


def wigner_small_d(ctx: SpinContext, theta: float) -> np.ndarray:
    """Real matrix ``d[n, m] = <n| exp(-i theta L2) |m>``, rows/columns by descending m."""
    # -i L2 is a real antisymmetric matrix, so the exponential is real orthogonal
    w, V = np.linalg.eigh(ctx.L2)
    U = (V * np.exp(-1j * theta * w)) @ V.conj().T
    return np.ascontiguousarray(U.real)


def polar_rotation(ctx: SpinContext, e: np.ndarray) -> np.ndarray:
    """Unitary rotating the north pole onto ``e``: rotate about e2 by theta, then e3 by phi."""
    theta = np.arccos(np.clip(e[2], -1.0, 1.0))
    phi = np.arctan2(e[1], e[0])
    d = wigner_small_d(ctx, theta).astype(complex)
    return np.exp(-1j * phi * ctx.m_values)[:, None] * d


def coherent_state(ctx: SpinContext, e) -> QuantumState:
    """Maximal-weight eigenvector of ``e.L`` (spin coherent state pointing along ``e``)."""
    e = as_direction(e)
    U = polar_rotation(ctx, e)
    v = U[:, 0]
    return QuantumState(vector=v / np.linalg.norm(v))


def eigenstate(ctx: SpinContext, m, e=(0.0, 0.0, 1.0)) -> QuantumState:
    """Eigenvector of ``e.L`` with eigenvalue ``m`` (default axis e3)."""
    e = as_direction(e)
    U = polar_rotation(ctx, e)
    v = U[:, ctx.index(m)]
    return QuantumState(vector=v / np.linalg.norm(v))


def maximally_mixed(ctx: SpinContext) -> QuantumState:
    return QuantumState(matrix=np.eye(ctx.d, dtype=complex) / ctx.d)


def moments(ctx: SpinContext, rho: QuantumState) -> MomentData:
    """First moments and symmetrized covariance ``Re tr(rho Lj Lk) - lam_j lam_k``."""
    _check_dim(ctx, rho)
    lam = np.array([rho.expect(L).real for L in ctx.L])
    second = np.empty((3, 3))
    for j in range(3):
        for k in range(j, 3):
            second[j, k] = second[k, j] = rho.expect(ctx.L[j] @ ctx.L[k]).real
    Lam = second - np.outer(lam, lam)
    return MomentData(lam=lam, Lam=(Lam + Lam.T) / 2)


def moments_batch(ctx: SpinContext, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized :func:`moments` for pure states stacked as rows of ``vectors``.

    Returns ``lam`` of shape ``(n, 3)`` and ``Lam`` of shape ``(n, 3, 3)``.
    """
    psi = np.asarray(vectors, dtype=complex)
    Lpsi = np.stack([psi @ L.T for L in ctx.L], axis=1)  # (n, 3, d): L_j psi
    lam = np.einsum("nd,njd->nj", psi.conj(), Lpsi).real
    # <L_j L_k> = <L_j psi | L_k psi>
    second = np.einsum("njd,nkd->njk", Lpsi.conj(), Lpsi).real
    second = (second + np.swapaxes(second, 1, 2)) / 2
    Lam = second - lam[:, :, None] * lam[:, None, :]
    return lam, Lam


def variance(ctx: SpinContext, rho: QuantumState, e) -> float:
    """Variance of ``e.L`` in ``rho``."""
    _check_dim(ctx, rho)
    A = ctx.component(as_direction(e))
    mean = rho.expect(A).real
    return max(rho.expect(A @ A).real - mean**2, 0.0)


def hermitian_ground_state(H: np.ndarray) -> tuple[float, np.ndarray]:
    """Lowest eigenvalue and a phase-fixed eigenvector of a Hermitian matrix.

    The eigenvector's first entry of non-negligible modulus is made real and
    positive. In a degenerate ground space any vector is an acceptable
    witness; the one returned is LAPACK's first column, phase-fixed.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(H))))
    if np.max(np.abs(H - H.conj().T)) > HERMITIAN_TOL * scale:
        raise ValueError("matrix is not Hermitian")
    w, V = np.linalg.eigh((H + H.conj().T) / 2)
    v = V[:, 0].astype(complex)
    k = int(np.argmax(np.abs(v) > 1e-8))
    v = v * (abs(v[k]) / v[k])
    return float(w[0]), v


def random_states(ctx: SpinContext | int, n: int, seed=None) -> np.ndarray:
    """``n`` Haar-random pure states as rows, from normalized complex Gaussians.

    ``ctx`` may also be a plain Hilbert-space dimension.
    """
    d = ctx if isinstance(ctx, (int, np.integer)) else ctx.d
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def random_state(ctx: SpinContext, seed=None) -> QuantumState:
    return QuantumState(vector=random_states(ctx, 1, seed)[0])


def random_rotation(ctx: SpinContext, seed=None) -> tuple[np.ndarray, np.ndarray]:
    """Haar-random rotation as the pair ``(U, R)`` of spin-s unitary and SO(3) matrix."""
    rot = Rotation.random(random_state=np.random.default_rng(seed))
    vec = rot.as_rotvec()
    angle = float(np.linalg.norm(vec))
    axis = vec / angle if angle > 0 else np.array([0.0, 0.0, 1.0])
    return rotation_operator(ctx, axis, angle), rotation_matrix(axis, angle)


def check_moment_invariants(ctx: SpinContext, md: MomentData, tol: float = VERIFY_TOL) -> bool:
    """Symmetry, positivity and ``tr Lam + |lam|^2 = s(s+1)``."""
    sym = np.max(np.abs(md.Lam - md.Lam.T)) <= CONSTRUCTION_TOL
    psd = np.linalg.eigvalsh(md.Lam).min() >= -tol
    norm = abs(np.trace(md.Lam) + md.lam @ md.lam - ctx.casimir) <= tol
    return bool(sym and psd and norm)


def commutator_residual(ctx: SpinContext) -> float:
    """Max entrywise deviation of ``[Lj, Lk] - i eps_jkl Ll`` over cyclic triples."""
    L = ctx.L
    res = 0.0
    for j, k, l in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c = L[j] @ L[k] - L[k] @ L[j] - 1j * L[l]
        res = max(res, float(np.max(np.abs(c))))
    return res


def casimir_residual(ctx: SpinContext) -> float:
    C = sum(L @ L for L in ctx.L)
    return float(np.max(np.abs(C - ctx.casimir * np.eye(ctx.d))))


def orthonormal_columns_residual(M: np.ndarray) -> float:
    return float(np.max(np.abs(M.conj().T @ M - np.eye(M.shape[1]))))


def unit_vectors(n: int, seed=None) -> np.ndarray:
    """``n`` uniformly distributed unit vectors as rows."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n, 3))
    return x / np.linalg.norm(x, axis=1, keepdims=True)

