"""Exact-degree Haar quadrature on SU(2) / S^2 and band-limited harmonic fields.

Quadrature rules are product rules: Gauss-Legendre in cos(beta) tensored with
uniform grids in alpha and gamma (period 4*pi on the group, 2*pi on the
sphere).  They integrate matrix-coefficient products exactly up to the stated
degree, so every integral in this package is exact rather than approximate.

Spherical harmonics use the orthonormal quantum-mechanics (Condon-Shortley)
normalization; a field is the coefficient list of f = sum c_{lm} Y_{lm}.
Per-degree coefficient blocks are ordered m = l..-l to match the irrep basis
order, so translation acts by the spin-l group-element matrices directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import su2

try:  # scipy >= 1.15
    from scipy.special import sph_harm_y as _sph_harm_y

    def _ylm_theta(l, m, theta):
        return _sph_harm_y(l, m, theta, 0.0)
except ImportError:  # pragma: no cover - older scipy
    from scipy.special import sph_harm as _sph_harm

    def _ylm_theta(l, m, theta):
        return _sph_harm(m, l, 0.0, theta)


@dataclass(frozen=True)
class QuadratureRule:
    """Haar quadrature on SU(2), exact for irreps with 2j <= exact_degree."""

    alphas: np.ndarray
    betas: np.ndarray
    gammas: np.ndarray
    weights: np.ndarray
    exact_degree: int

    @property
    def nodes(self):
        return [su2.GroupElement(a, b, c)
                for a, b, c in zip(self.alphas, self.betas, self.gammas)]

    def integrate(self, values):
        """Sum weights * values with pairwise (deterministic) reduction."""
        return _pairwise_sum(self.weights * np.asarray(values))


@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature on S^2 exact for Y_l Y_l' products with l+l' <= exact_degree.

    thetas/theta_weights are the Gauss-Legendre colatitude line; phis are
    uniform with equal weights.  Full node list is the product, weights
    normalized to total mass 1.
    """

    thetas: np.ndarray
    theta_weights: np.ndarray
    phis: np.ndarray
    exact_degree: int

    @property
    def nodes(self):
        T, P = np.meshgrid(self.thetas, self.phis, indexing="ij")
        return np.column_stack([T.ravel(), P.ravel()])

    @property
    def weights(self):
        w = np.repeat(self.theta_weights / len(self.phis), len(self.phis))
        return w

    def integrate(self, values):
        """Integrate values sampled on the (theta, phi) product grid (mass-1)."""
        v = np.asarray(values).reshape(len(self.thetas), len(self.phis))
        return _pairwise_sum((self.theta_weights / len(self.phis)) @ v)


def _pairwise_sum(a):
    a = np.asarray(a)
    while a.shape[0] > 1:
        n = a.shape[0]
        half = n // 2
        head = a[:half] + a[half:2 * half]
        a = np.concatenate([head, a[2 * half:]], axis=0) if n % 2 else head
    return a[0] if a.shape[0] else a.dtype.type(0)


@lru_cache(maxsize=None)
def haar_rule(degree):
    """Smallest product Haar rule exact for all irreps with 2j <= degree."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    n_euler = degree + 1                      # kills e^{-i m alpha}, 2|m| <= degree
    n_beta = degree // 2 + 1                  # GL exact to poly degree 2n-1 >= degree
    x, w = np.polynomial.legendre.leggauss(n_beta)
    betas_line = np.arccos(x)
    alphas_line = 4 * np.pi * np.arange(n_euler) / n_euler
    A, B, C = np.meshgrid(alphas_line, betas_line, alphas_line, indexing="ij")
    W = np.broadcast_to((w / 2)[None, :, None], A.shape) / n_euler**2
    return QuadratureRule(
        alphas=A.ravel(), betas=B.ravel(), gammas=C.ravel(),
        weights=W.ravel().copy(), exact_degree=degree,
    )


@lru_cache(maxsize=None)
def sphere_grid(degree):
    """Smallest product grid on S^2 exact for harmonic products up to `degree`."""
    if degree < 0:
        raise ValueError("degree must be >= 0")
    n_theta = degree // 2 + 1
    n_phi = degree + 1
    x, w = np.polynomial.legendre.leggauss(n_theta)
    return SphereGrid(
        thetas=np.arccos(x), theta_weights=w / 2,
        phis=2 * np.pi * np.arange(n_phi) / n_phi,
        exact_degree=degree,
    )


def coherent_moment(m):
    """Haar moment of the squared coherent overlap: integral of cos^{2m}(beta/2).

    Evaluated by the exact product rule; the value is 1/(m+1).
    """
    rule = haar_rule(2 * m)
    return rule.integrate(np.cos(rule.betas / 2) ** (2 * m))


class HarmonicField:
    """Band-limited function on S^2 as spherical-harmonic coefficients.

    blocks[l] is the complex coefficient vector of degree l, ordered
    m = l, l-1, ..., -l.
    """

    __slots__ = ("max_degree", "blocks")

    def __init__(self, max_degree, blocks=None):
        self.max_degree = int(max_degree)
        if blocks is None:
            blocks = [np.zeros(2 * l + 1, dtype=complex)
                      for l in range(self.max_degree + 1)]
        self.blocks = [np.asarray(b, dtype=complex) for b in blocks]
        for l, b in enumerate(self.blocks):
            if b.shape != (2 * l + 1,):
                raise ValueError(f"block {l} has wrong length {b.shape}")

    def coeff(self, l, m):
        if l > self.max_degree or abs(m) > l:
            return 0j
        return self.blocks[l][l - m]

    def set_coeff(self, l, m, value):
        self.blocks[l][l - m] = value

    def copy(self):
        return HarmonicField(self.max_degree, [b.copy() for b in self.blocks])

    def truncated(self, L):
        """Copy truncated (or zero-padded) to max degree L."""
        blocks = [self.blocks[l].copy() if l <= self.max_degree
                  else np.zeros(2 * l + 1, dtype=complex)
                  for l in range(L + 1)]
        return HarmonicField(L, blocks)

    def degree(self, tol=0.0):
        """Largest l whose block exceeds tol in max-norm."""
        for l in range(self.max_degree, -1, -1):
            if np.abs(self.blocks[l]).max() > tol:
                return l
        return 0

    def l2_norm(self):
        return np.sqrt(sum(float(np.vdot(b, b).real) for b in self.blocks))

    def is_real(self, tol=1e-10):
        """Whether the field is real-valued: c(l,-m) = (-1)^m conj(c(l,m))."""
        for l, b in enumerate(self.blocks):
            signs = (-1.0) ** (l - np.arange(2 * l + 1))  # (-1)^m in block order
            if np.abs(b[::-1] - signs * b.conj()).max() > tol:
                return False
        return True

    # -- linear structure ------------------------------------------------
    def __add__(self, other):
        L = max(self.max_degree, other.max_degree)
        a, b = self.truncated(L), other.truncated(L)
        return HarmonicField(L, [x + y for x, y in zip(a.blocks, b.blocks)])

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        return HarmonicField(self.max_degree, [scalar * b for b in self.blocks])

    __rmul__ = __mul__

    def conjugate(self):
        """Complex conjugate field: c(l,m) -> (-1)^m conj(c(l,-m))."""
        blocks = []
        for l, b in enumerate(self.blocks):
            signs = (-1.0) ** (l - np.arange(2 * l + 1))
            blocks.append(signs * b[::-1].conj())
        return HarmonicField(self.max_degree, blocks)

    @staticmethod
    def constant(value, max_degree=0):
        f = HarmonicField(max_degree)
        f.set_coeff(0, 0, value * np.sqrt(4 * np.pi))
        return f

    @staticmethod
    def basis(l, m, max_degree=None):
        """The single harmonic Y_{lm} as a field."""
        f = HarmonicField(l if max_degree is None else max_degree)
        f.set_coeff(l, m, 1.0)
        return f


def legendre_table(L, thetas):
    """Orthonormal associated-Legendre values P~[l, m] on a colatitude line.

    P~[l, m] is the theta-part of Y_{lm} for m >= 0 (Condon-Shortley phase
    included): Y_{lm}(theta, phi) = P~[l, m](theta) e^{i m phi}, and
    P~[l, -m] = (-1)^m P~[l, m].  Shape (L+1, L+1, len(thetas)); entries with
    m > l are zero.  Stable three-term recursion, vectorized over nodes.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    ct, st = np.cos(thetas), np.sin(thetas)
    P = np.zeros((L + 1, L + 1, len(thetas)))
    P[0, 0] = np.sqrt(1.0 / (4 * np.pi))
    for m in range(1, L + 1):
        P[m, m] = -np.sqrt((2 * m + 1) / (2.0 * m)) * st * P[m - 1, m - 1]
    for m in range(L):
        P[m + 1, m] = np.sqrt(2 * m + 3.0) * ct * P[m, m]
    for m in range(L + 1):
        for l in range(m + 2, L + 1):
            a = np.sqrt((4.0 * l * l - 1) / (l * l - m * m))
            b = np.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1) ** 2 - 1))
            P[l, m] = a * (ct * P[l - 1, m] - b * P[l - 2, m])
    return P


@lru_cache(maxsize=64)
def _legendre_table_cached(L, thetas_key):
    return legendre_table(L, np.frombuffer(thetas_key))


def _table_for(L, thetas):
    key = np.ascontiguousarray(thetas, dtype=float).tobytes()
    return _legendre_table_cached(L, key)


def _signed_rows(table, l):
    """Theta-rows of Y_{lm} for m = l..-l from the m >= 0 table slice."""
    ms = np.arange(l, -l - 1, -1)
    rows = table[l, np.abs(ms)]
    signs = np.where(ms < 0, (-1.0) ** np.abs(ms), 1.0)
    return signs[:, None] * rows


def _theta_profiles(field, table):
    """Theta-profiles G[m-index, node] of each azimuthal order, rows m = L..-L."""
    L = field.max_degree
    n = table.shape[2]
    G = np.zeros((2 * L + 1, n), dtype=complex)
    for l in range(L + 1):
        b = field.blocks[l]
        if not b.any():
            continue
        G[L - l:L + l + 1] += b[:, None] * _signed_rows(table, l)
    return G


def synthesize(field, thetas, phis):
    """Evaluate the field on the product grid; returns (n_theta, n_phi) values."""
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    L = field.max_degree
    G = _theta_profiles(field, _table_for(L, thetas))
    E = np.exp(1j * np.outer(np.arange(L, -L - 1, -1), phis))
    return G.T @ E


def synthesize_at(field, theta, phi):
    """Evaluate the field at scattered points (arrays theta, phi)."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    L = field.max_degree
    G = _theta_profiles(field, legendre_table(L, theta))
    ms = np.arange(L, -L - 1, -1)
    return np.einsum("mk,mk->k", G, np.exp(1j * np.outer(ms, phi)))


def analyze(values, grid, L):
    """Project sampled values onto harmonics of degree <= L.

    Exact for band-limited inputs when grid.exact_degree >= deg(f) + L.
    Coefficients follow f = sum c_{lm} Y_{lm}; the constant 1 analyzes to
    c_{00} = sqrt(4 pi) (the single explicit 4 pi of the normalization).
    """
    if grid.exact_degree < 2 * L:
        raise ValueError(
            f"grid exact to degree {grid.exact_degree} cannot resolve products "
            f"of two degree-{L} fields")
    v = np.asarray(values, dtype=complex).reshape(len(grid.thetas), len(grid.phis))
    n_phi = len(grid.phis)
    ms = np.arange(L, -L - 1, -1)
    # phi transform: F[m, theta] = (1/n_phi) sum_phi f e^{-i m phi}
    E = np.exp(-1j * np.outer(ms, grid.phis)) / n_phi
    F = E @ v.T
    table = _table_for(L, grid.thetas)
    field = HarmonicField(L)
    for l in range(L + 1):
        rows = _signed_rows(table, l)
        field.blocks[l] = 4 * np.pi * np.einsum(
            "mk,k,mk->m", rows, grid.theta_weights, F[L - l:L + l + 1])
    return field


def translate(field, g):
    """Left-translation of the field by g: (g.f)(x) = f(g^{-1} x).

    Degree-l blocks transform by the spin-l group-element matrix.
    """
    out = field.copy()
    for l in range(1, field.max_degree + 1):
        D = su2.wigner_matrix(su2.build_irrep(l), g)
        out.blocks[l] = D @ field.blocks[l]
    return out


def rotation_matrix(g):
    """SO(3) image of the group element: Rz(alpha) Ry(beta) Rz(gamma)."""
    def rz(t):
        c, s = np.cos(t), np.sin(t)
        return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])

    def ry(t):
        c, s = np.cos(t), np.sin(t)
        return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])

    return rz(g.alpha) @ ry(g.beta) @ rz(g.gamma)


def sup_norm(field, tol=1e-6, max_rounds=4):
    """Max of |f| over the sphere: grid scan plus local polish.

    Scans product grids (starting just above Nyquist for the band limit,
    densified until the scan max stabilizes to tol), then polishes the best
    node with shrinking local grids.  Band-limited fields have controlled
    gradients, so the scan locates the global basin and the polish sharpens
    the value to ~1e-9.
    """
    return sup_norm_argmax(field, tol=tol, max_rounds=max_rounds)[0]


def sup_norm_argmax(field, tol=1e-6, max_rounds=4):
    """sup_norm together with the (theta, phi) location of the maximum."""
    L = max(field.max_degree, 1)
    n_theta = 2 * L + 6
    best = -1.0
    best_pt = (0.0, 0.0)
    for round_idx in range(max_rounds):
        thetas = np.pi * (np.arange(n_theta) + 0.5) / n_theta
        phis = 2 * np.pi * np.arange(2 * n_theta) / (2 * n_theta)
        vals = np.abs(synthesize(field, thetas, phis))
        k = np.unravel_index(np.argmax(vals), vals.shape)
        current = vals[k]
        pole = np.abs(synthesize(field, np.array([0.0, np.pi]), np.array([0.0])))
        if pole.max() > current:
            current = pole.max()
            cand = (0.0 if pole[0, 0] >= pole[1, 0] else np.pi, 0.0)
        else:
            cand = (thetas[k[0]], phis[k[1]])
        converged = round_idx > 0 and abs(current - best) <= tol * max(best, 1e-30)
        if current > best:
            best, best_pt = current, cand
        if converged:
            break
        n_theta = int(n_theta * 1.5) + 1

    # local polish: 9x9 grids shrinking around the running argmax
    t0, p0 = best_pt
    h = np.pi / n_theta
    line = np.linspace(-1.0, 1.0, 9)
    for _ in range(6):
        ts = t0 + h * line
        ps = p0 + h * line
        T, P = np.meshgrid(ts, ps, indexing="ij")
        t_flat, p_flat = T.ravel(), P.ravel()
        # fold colatitudes through the poles
        fold_lo = t_flat < 0
        fold_hi = t_flat > np.pi
        t_flat = np.where(fold_lo, -t_flat, t_flat)
        t_flat = np.where(fold_hi, 2 * np.pi - t_flat, t_flat)
        p_flat = np.where(fold_lo | fold_hi, p_flat + np.pi, p_flat)
        vals = np.abs(synthesize_at(field, t_flat, p_flat))
        k = int(np.argmax(vals))
        if vals[k] > best:
            best = vals[k]
            t0, p0 = t_flat[k], p_flat[k]
        h *= 0.2
    return best, t0, p0


def random_real_field(rng, degree, max_degree=None, unit=True):
    """Random real-valued band-limited field (uniform random real blocks)."""
    L = degree if max_degree is None else max_degree
    f = HarmonicField(L)
    for l in range(degree + 1):
        re = rng.standard_normal(2 * l + 1)
        im = rng.standard_normal(2 * l + 1)
        b = re + 1j * im
        signs = (-1.0) ** (l - np.arange(2 * l + 1))
        f.blocks[l] = (b + signs * b[::-1].conj()) / 2
    if unit:
        norm = f.l2_norm()
        if norm > 0:
            f = (1.0 / norm) * f
    return f
