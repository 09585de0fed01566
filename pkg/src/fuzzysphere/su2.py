"""SU(2) irreducible representations and their matrix machinery.

Spins are tracked exactly as twice their value (``HalfInt``), generators are
built by the ladder construction in the Jz eigenbasis ordered m = j..-j
(highest weight first, so the highest-weight projector is the top-left matrix
unit), and group elements are z-y-z Euler triples.  Matrix exponentials go
through exact eigendecompositions of the Hermitian generators, never series,
so group-element matrices are unitary to machine precision.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class HalfInt:
    """A nonnegative integer or half-integer stored exactly as 2j."""

    twice_value: int

    def __post_init__(self):
        if self.twice_value < 0:
            raise ValueError("spin must be nonnegative")

    @classmethod
    def of(cls, j):
        """Coerce an int, float or HalfInt to HalfInt; rejects non-half-integers."""
        if isinstance(j, HalfInt):
            return j
        twice = round(2 * j)
        if abs(2 * j - twice) > 1e-12:
            raise ValueError(f"{j} is not an integer or half-integer")
        return cls(twice)

    @property
    def value(self):
        return self.twice_value / 2.0

    @property
    def dim(self):
        """Dimension 2j+1 of the spin-j representation."""
        return self.twice_value + 1

    def __repr__(self):
        if self.twice_value % 2 == 0:
            return f"HalfInt({self.twice_value // 2})"
        return f"HalfInt({self.twice_value}/2)"


@dataclass(frozen=True)
class GroupElement:
    """Group element as z-y-z Euler angles (alpha, beta, gamma).

    alpha and gamma are reduced mod 4*pi (SU(2) double cover); beta is
    required in [0, pi].
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", float(self.alpha) % (4 * np.pi))
        object.__setattr__(self, "gamma", float(self.gamma) % (4 * np.pi))
        b = float(self.beta)
        if not -1e-12 <= b <= np.pi + 1e-12:
            raise ValueError("beta must lie in [0, pi]")
        object.__setattr__(self, "beta", min(max(b, 0.0), np.pi))

    @staticmethod
    def identity():
        return GroupElement(0.0, 0.0, 0.0)


IDENTITY = GroupElement.identity()


@dataclass(frozen=True)
class SpinIrrep:
    """Spin-j irreducible representation data.

    Generators satisfy [Jx, Jy] = i Jz cyclically; the highest-weight vector
    is the first basis vector (Jz eigenvalue +j).
    """

    j: HalfInt
    dim: int
    Jz: np.ndarray
    Jplus: np.ndarray
    Jminus: np.ndarray
    Jx: np.ndarray
    Jy: np.ndarray
    highest_weight: np.ndarray
    # eigendecomposition of Jy, cached for exact exponentials
    _jy_eigvals: np.ndarray = field(repr=False, default=None)
    _jy_eigvecs: np.ndarray = field(repr=False, default=None)

    @property
    def m_values(self):
        """Jz eigenvalues in basis order: j, j-1, ..., -j."""
        j = self.j.value
        return j - np.arange(self.dim)


@lru_cache(maxsize=None)
def _build_irrep_cached(twice_j):
    j = twice_j / 2.0
    dim = twice_j + 1
    m = j - np.arange(dim)
    Jz = np.diag(m).astype(complex)
    # <m+1| J+ |m> = sqrt(j(j+1) - m(m+1)); superdiagonal in m = j..-j order
    raise_coeffs = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    Jplus = np.zeros((dim, dim), dtype=complex)
    Jplus[np.arange(dim - 1), np.arange(1, dim)] = raise_coeffs
    Jminus = Jplus.conj().T
    Jx = (Jplus + Jminus) / 2
    Jy = (Jplus - Jminus) / 2j
    xi = np.zeros(dim, dtype=complex)
    xi[0] = 1.0
    evals, evecs = np.linalg.eigh(Jy)
    return SpinIrrep(
        j=HalfInt(twice_j), dim=dim, Jz=Jz, Jplus=Jplus, Jminus=Jminus,
        Jx=Jx, Jy=Jy, highest_weight=xi,
        _jy_eigvals=evals, _jy_eigvecs=evecs,
    )


def build_irrep(j):
    """Construct the spin-j irrep by the ladder construction."""
    return _build_irrep_cached(HalfInt.of(j).twice_value)


def wigner_matrix(rep, g):
    """Unitary matrix of the group element g in the given irrep.

    U(g) = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz), evaluated by
    exact eigendecomposition (Jz is diagonal; Jy is diagonalized once per
    irrep and cached).
    """
    m = rep.m_values
    left = np.exp(-1j * g.alpha * m)
    right = np.exp(-1j * g.gamma * m)
    V = rep._jy_eigvecs
    mid = (V * np.exp(-1j * g.beta * rep._jy_eigvals)) @ V.conj().T
    return (left[:, None] * mid) * right[None, :]


def adjoint_act(rep, g, T):
    """Conjugation action: U(g) T U(g)*."""
    T = np.asarray(T, dtype=complex)
    if T.shape != (rep.dim, rep.dim):
        raise ValueError(f"expected a {rep.dim}x{rep.dim} matrix, got {T.shape}")
    U = wigner_matrix(rep, g)
    return U @ T @ U.conj().T


def compose(g1, g2):
    """Group composition g1*g2 via unit quaternions."""
    q = _quat_mul(_euler_to_quat(g1), _euler_to_quat(g2))
    return _quat_to_euler(q)


def _euler_to_quat(g):
    # q = (w, x, y, z) for exp(-i a Jz) exp(-i b Jy) exp(-i c Jz) in SU(2),
    # where the spin-1/2 matrix is w*I - i(x*sigma_x + y*sigma_y + z*sigma_z)
    a, b, c = g.alpha, g.beta, g.gamma
    cb, sb = np.cos(b / 2), np.sin(b / 2)
    return np.array([
        cb * np.cos((a + c) / 2),
        -sb * np.sin((a - c) / 2),
        sb * np.cos((a - c) / 2),
        cb * np.sin((a + c) / 2),
    ])


def _quat_mul(p, q):
    w1, x1, y1, z1 = p
    w2, x2, y2, z2 = q
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ])


def _quat_to_euler(q):
    w, x, y, z = q
    beta = 2 * np.arctan2(np.hypot(x, y), np.hypot(w, z))
    half_sum = np.arctan2(z, w)      # (alpha + gamma)/2
    half_diff = np.arctan2(-x, y)    # (alpha - gamma)/2
    return GroupElement(half_sum + half_diff, beta, half_sum - half_diff)


def rotation_angle(g):
    """Rotation angle omega in [0, 2*pi] with cos(omega/2) = tr(U)/2 on spin 1/2."""
    c = np.cos(g.beta / 2) * np.cos((g.alpha + g.gamma) / 2)
    return 2 * np.arccos(np.clip(c, -1.0, 1.0))


def axis_angle_element(axis, angle):
    """Group element rotating by `angle` about the unit 3-vector `axis`."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    # exp(-i t u.J) on spin 1/2 gives the quaternion (cos t/2, u sin t/2)
    q = np.concatenate([[np.cos(angle / 2)], np.sin(angle / 2) * axis])
    return _quat_to_euler(q)


def random_elements(rng, size):
    """Haar-distributed group elements."""
    alpha = rng.uniform(0, 4 * np.pi, size)
    beta = np.arccos(rng.uniform(-1, 1, size))
    gamma = rng.uniform(0, 4 * np.pi, size)
    return [GroupElement(a, b, c) for a, b, c in zip(alpha, beta, gamma)]


def symmetric_power(n):
    """Isometry from Sym^n(C^2) into (C^2)^tensor-n and the induced spin-n/2 irrep.

    Returns (V, rep) where V is a 2^n x (n+1) matrix with orthonormal columns
    (the symmetrized weight vectors, highest weight first) and rep is
    build_irrep(n/2).  The column k is the normalized symmetrization of
    e0^(n-k) e1^k, so xi^(tensor n) maps to the first column exactly.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    dim = 1 << n
    V = np.zeros((dim, n + 1), dtype=complex)
    counts = np.zeros(n + 1, dtype=np.int64)
    for idx in range(dim):
        k = idx.bit_count()
        counts[k] += 1
        V[idx, k] = 1.0
    V /= np.sqrt(counts)[None, :]
    return V, build_irrep(HalfInt(n))


def apply_tensor_power(U, vec, n):
    """Apply U^(tensor n) to a vector in (C^2)^(tensor n) without forming it."""
    t = np.asarray(vec, dtype=complex).reshape((2,) * n)
    for axis in range(n):
        t = np.tensordot(U, t, axes=([1], [axis]))
        t = np.moveaxis(t, 0, axis)
    return t.reshape(-1)


def restricted_tensor_rep(V, U, n):
    """Matrix of U^(tensor n) restricted to the symmetric subspace: V* U^n V."""
    cols = np.stack([apply_tensor_power(U, V[:, k], n) for k in range(V.shape[1])], axis=1)
    return V.conj().T @ cols


def adjoint_casimir_matrix(rep):
    """Casimir of the adjoint action on B(H), as a d^2 x d^2 matrix.

    ad(J)T = [J, T] vectorizes to J (x) I - I (x) J^T; the Casimir
    sum of squares has eigenvalue l(l+1) on the spin-l isotypic component.
    """
    d = rep.dim
    eye = np.eye(d)
    C = np.zeros((d * d, d * d), dtype=complex)
    for J in (rep.Jx, rep.Jy, rep.Jz):
        ad = np.kron(J, eye) - np.kron(eye, J.T)
        C += ad @ ad
    return C


def isotypic_projectors(n):
    """Orthogonal projectors of B(H^n) onto its spin-l components, l = 0..n.

    Projectors act on vectorized matrices (row-major d^2 vectors), are
    mutually orthogonal for the Hilbert-Schmidt inner product and sum to the
    identity; component l has dimension 2l+1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rep = build_irrep(HalfInt(n))
    C = adjoint_casimir_matrix(rep)
    evals, evecs = np.linalg.eigh(C)
    projectors = []
    for l in range(n + 1):
        mask = np.abs(evals - l * (l + 1)) < 0.5
        W = evecs[:, mask]
        projectors.append(W @ W.conj().T)
    return projectors


def isotypic_component(projectors, T):
    """List of the isotypic parts of the matrix T, one per projector."""
    d = int(round(np.sqrt(projectors[0].shape[0])))
    v = np.asarray(T, dtype=complex).reshape(-1)
    return [(P @ v).reshape(d, d) for P in projectors]
