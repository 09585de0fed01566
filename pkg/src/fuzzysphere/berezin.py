"""Covariant symbols on the fuzzy sphere and the induced transform.

The level-n data lives on B(H^n) with H^n the spin-n/2 space (dim n+1) and
P the highest-weight rank-1 projector.  The symbol of a matrix T is the
function x -> tr(T a_x(P)) on the sphere (band-limited of degree <= n); its
adjoint w.r.t. the normalized trace and the mass-1 invariant measure is
f -> (n+1) * integral f(x) a_x(P) dx.  The composition acts as a scalar on
each degree-l harmonic block; those scalars, the concentration bounds and
the moment identities are computed here by exact quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from . import harmonic as hh
from . import su2


def op_norm(T):
    """Spectral norm (largest singular value)."""
    return float(np.linalg.norm(np.asarray(T), 2))


def hs_inner(S, T, d=None):
    """Normalized Hilbert-Schmidt inner product <S, T> = tr(T* S)/d."""
    S, T = np.asarray(S), np.asarray(T)
    d = S.shape[0] if d is None else d
    return complex(np.trace(T.conj().T @ S)) / d


def field_inner(f, g):
    """L^2 inner product <f, g> for the mass-1 invariant measure."""
    L = min(f.max_degree, g.max_degree)
    s = sum(complex(np.vdot(g.blocks[l], f.blocks[l])) for l in range(L + 1))
    return s / (4 * np.pi)


class CoherentFamily:
    """The rank-1 highest-weight projector of spin n/2 and its group orbit."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = int(n)
        self.rep = su2.build_irrep(su2.HalfInt(n))
        self.dim = self.rep.dim
        P = np.zeros((self.dim, self.dim), dtype=complex)
        P[0, 0] = 1.0
        self.P = P

    def coherent_state(self, theta, phi):
        """State vector U(phi, theta, 0) e_1, vectorized over node arrays."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        phi = np.atleast_1d(np.asarray(phi, dtype=float))
        rep = self.rep
        V = rep._jy_eigvecs
        col0 = V.conj().T @ rep.highest_weight
        # exp(-i theta Jy) e_1 for all thetas at once
        mid = V @ (np.exp(-1j * np.outer(rep._jy_eigvals, theta)) * col0[:, None])
        return np.exp(-1j * np.outer(rep.m_values, phi)) * mid

    def projector_at(self, g):
        """a_g(P) as a dense matrix for a single group element."""
        psi = su2.wigner_matrix(self.rep, g)[:, 0]
        return np.outer(psi, psi.conj())

    def grid_states(self, grid):
        """Coherent-state matrix (dim, n_nodes) on a sphere grid (theta-major)."""
        T, Ph = np.meshgrid(grid.thetas, grid.phis, indexing="ij")
        return self.coherent_state(T.ravel(), Ph.ravel())


@lru_cache(maxsize=None)
def _family(n):
    return CoherentFamily(n)


def symbol(n, T, L=None):
    """Covariant symbol of T in B(H^n) as a harmonic field of degree <= n."""
    fam = _family(n)
    T = np.asarray(T, dtype=complex)
    if T.shape != (fam.dim, fam.dim):
        raise ValueError(f"expected {fam.dim}x{fam.dim} matrix, got {T.shape}")
    grid = hh.sphere_grid(2 * n)
    psi = fam.grid_states(grid)
    vals = np.einsum("ik,ij,jk->k", psi.conj(), T, psi, optimize=True)
    return hh.analyze(vals.reshape(len(grid.thetas), len(grid.phis)), grid,
                      n if L is None else L)


def adjoint_symbol(n, f):
    """Quantization map: (n+1) * integral f(x) a_x(P) dx by exact quadrature."""
    fam = _family(n)
    deg = f.degree(1e-15)
    grid = hh.sphere_grid(max(2 * n, n + deg))
    if grid.exact_degree < n + deg:
        raise ValueError("insufficient quadrature degree")
    psi = fam.grid_states(grid)
    fvals = hh.synthesize(f, grid.thetas, grid.phis).ravel()
    return (n + 1) * np.einsum("ik,k,jk->ij", psi, grid.weights * fvals,
                               psi.conj(), optimize=True)


def hP_field(n):
    """The transform kernel as a zonal field: (n+1) cos^{2n}(beta/2), degree n."""
    nodes = (n + 2) // 2 + 2
    x, w = np.polynomial.legendre.leggauss(nodes)
    betas = np.arccos(x)
    vals = (n + 1) * ((1 + x) / 2) ** n
    table = hh.legendre_table(n, betas)
    f = hh.HarmonicField(n)
    for l in range(n + 1):
        # c_l0 = 2 pi * int P~_l0(beta) h(beta) sin(beta) d(beta)
        f.set_coeff(l, 0, 2 * np.pi * np.sum(w * table[l, 0] * vals))
    return f


@lru_cache(maxsize=None)
def beta_zonal(n, l):
    """Block scalar of the transform from the 1-D zonal integral.

    (n+1)/2^{n+1} * int_{-1}^{1} P_l(u) (1+u)^n du, exact Gauss-Legendre.
    """
    if l > n:
        return 0.0
    nodes = (n + l) // 2 + 2
    x, w = np.polynomial.legendre.leggauss(nodes)
    Pl = np.polynomial.legendre.legval(x, np.eye(l + 1)[l])
    return float((n + 1) / 2 ** (n + 1) * np.sum(w * Pl * (1 + x) ** n))


def transform(n, f, route="symbol"):
    """Berezin transform of the field f at level n.

    route="symbol": honest composition symbol(adjoint_symbol(f)).
    route="convolution": convolution with the level-n kernel, reduced per
    degree block to the 1-D zonal integrals (independent of the symbol path).
    """
    if route == "symbol":
        return symbol(n, adjoint_symbol(n, f))
    if route == "convolution":
        out = hh.HarmonicField(min(f.max_degree, n))
        for l in range(out.max_degree + 1):
            out.blocks[l] = beta_zonal(n, l) * f.blocks[l]
        return out
    raise ValueError(f"unknown route {route!r}")


@dataclass(frozen=True)
class TransformSpectrum:
    """Per-degree scalars of the level-n transform, index l = 0..L."""

    n: int
    beta: np.ndarray

    def check_invariants(self, tol=1e-10):
        assert abs(self.beta[0] - 1) < tol
        n = self.n
        for l, b in enumerate(self.beta):
            if l <= n:
                assert 0 < b <= 1 + tol, (l, b)
            else:
                assert abs(b) < tol, (l, b)


def spectrum(n, L):
    """Transform scalars computed through the symbol/adjoint pipeline.

    beta[l] is read off by pushing the zonal harmonic of degree l through
    adjoint_symbol and symbol; entries with l > n are asserted ~0 and stored
    as exact zeros.
    """
    beta = np.zeros(L + 1)
    for l in range(L + 1):
        f = hh.HarmonicField.basis(l, 0)
        if l > n:
            T = adjoint_symbol(n, f)
            assert np.abs(T).max() < 1e-10, "band limit violated"
            continue
        out = transform(n, f, route="symbol")
        coeffs = np.concatenate([b for b in out.blocks])
        target = out.coeff(l, 0).real
        rest = np.abs(coeffs).sum() - abs(out.coeff(l, 0))
        assert rest < 1e-9, "transform output left its input block"
        beta[l] = target
    return TransformSpectrum(n=n, beta=beta)


def moment_check(n):
    """Moment of the level-1 symbol in the level-n state vs the dimension ratio.

    Returns (quadrature value, (n+1)/(n+2)).
    """
    rule = hh.haar_rule(2 * n + 2)
    c2 = np.cos(rule.betas / 2) ** 2
    value = (n + 1) * rule.integrate(c2 ** n * c2)
    return float(value), (n + 1) / (n + 2)


def _zonal_profile(a, betas):
    """Azimuthal mean of the field a on given colatitudes."""
    table = hh.legendre_table(a.max_degree, betas)
    out = np.zeros(len(np.atleast_1d(betas)), dtype=complex)
    for l in range(a.max_degree + 1):
        out += a.coeff(l, 0) * table[l, 0]
    return out


def concentration_check(n, gamma, a):
    """Both sides of the superlevel concentration inequality.

    lhs: |level-n state applied to (1 - chi_gamma) a| with chi_gamma the
    indicator of {cos^2(beta/2) >= 1 - gamma}; the cut colatitude is
    beta* = 2 arccos(sqrt(1-gamma)) and the integral is adaptive 1-D on the
    zonal reduction.  rhs: sup|a| / h(chi_{gamma/2}) * ((1-gamma)/(1-gamma/2))^n.
    """
    if not 0 < gamma < 1:
        raise ValueError("gamma must lie in (0, 1)")
    beta_star = 2 * np.arccos(np.sqrt(1 - gamma))

    def integrand(b):
        return float(np.real(_zonal_profile(a, np.array([b]))[0])
                     * np.cos(b / 2) ** (2 * n) * np.sin(b) / 2)

    re_val = quad(integrand, beta_star, np.pi, limit=200)[0]

    def integrand_im(b):
        return float(np.imag(_zonal_profile(a, np.array([b]))[0])
                     * np.cos(b / 2) ** (2 * n) * np.sin(b) / 2)

    im_val = quad(integrand_im, beta_star, np.pi, limit=200)[0]
    lhs = (n + 1) * abs(complex(re_val, im_val))

    beta_half = 2 * np.arccos(np.sqrt(1 - gamma / 2))
    chi_mass = quad(lambda b: np.sin(b) / 2, 0.0, beta_half)[0]
    rhs = hh.sup_norm(a) / chi_mass * ((1 - gamma) / (1 - gamma / 2)) ** n
    return lhs, rhs


def section_norm_profile(f, n_max):
    """Operator norms of the quantizations of f at levels 1..n_max.

    Returns (norms, sup, envelopes): norms[k] = |adjoint_symbol(k+1, f)|_op,
    sup = sup|f|, and envelopes[k] = sum_l (1 - beta_{k+1,l}) sup|f_l| -- a
    certified lower-bound gap, since the symbol is sup-norm contractive:
    |quantization| >= |transform(f)|_inf >= sup - envelope.
    """
    norms = np.array([op_norm(adjoint_symbol(k, f)) for k in range(1, n_max + 1)])
    sup = hh.sup_norm(f)
    block_sups = []
    for l in range(f.max_degree + 1):
        if np.abs(f.blocks[l]).max() > 1e-15:
            fl = hh.HarmonicField(l)
            fl.blocks[l] = f.blocks[l].copy()
            block_sups.append((l, hh.sup_norm(fl)))
    envelopes = np.array([
        sum((1 - beta_zonal(k, l)) * s for l, s in block_sups)
        for k in range(1, n_max + 1)])
    return norms, sup, envelopes


def berezin_maps(n, L=None):
    """Dense matrices of the symbol and its adjoint at level n.

    Symbol matrix: Hilbert-Schmidt basis (matrix units, row-major) to stacked
    harmonic coefficients of degree <= n.  Adjoint matrix: harmonic basis of
    degree <= L (default n) to vectorized matrices.
    """
    L = n if L is None else L
    d = n + 1
    n_harm = (n + 1) ** 2
    S = np.zeros((n_harm, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            E = np.zeros((d, d), dtype=complex)
            E[a, b] = 1.0
            f = symbol(n, E)
            S[:, a * d + b] = np.concatenate(f.blocks)
    cols = sum(2 * l + 1 for l in range(L + 1))
    A = np.zeros((d * d, cols), dtype=complex)
    col = 0
    for l in range(L + 1):
        for m in range(l, -l - 1, -1):
            A[:, col] = adjoint_symbol(n, hh.HarmonicField.basis(l, m)).ravel()
            col += 1
    return S, A
