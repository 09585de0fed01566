"""Lip-norms from the rotation-angle length function and the distance pipeline.

The length of a group element is its rotation angle omega in [0, 2*pi]
(cos(omega/2) = cos(beta/2) cos((alpha+gamma)/2)), which is bi-invariant and
subadditive.  The induced Lip seminorm of a matrix or field is the derivative
seminorm sup over unit axes u of |[u.J, T]| resp. sup|d_u f|; for this length
function the derivative form equals the difference-quotient sup exactly, and
sampled quotients are kept as a consistency guard.

The contraction defects of the level-n quantization round trips are estimated
by seeded randomized search (lower brackets) together with per-block sums
(upper brackets on the truncated degree range); their max feeds the
2*epsilon upper bound on the quantum Gromov-Hausdorff distance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import berezin as bz
from . import harmonic as hh
from . import su2


# -- length function ---------------------------------------------------------

@dataclass(frozen=True)
class LengthFunction:
    """Rotation-angle length on the group with its Haar mean."""

    haar_mean: float

    def __call__(self, g):
        return su2.rotation_angle(g)


def rotation_length():
    """The rotation-angle length; Haar mean from the 1-D angle density."""
    mean = quad(lambda w: w * np.sin(w / 2) ** 2 / np.pi, 0.0, 2 * np.pi)[0]
    return LengthFunction(haar_mean=mean)


# -- axis search -------------------------------------------------------------

def _fibonacci_hemisphere(count):
    k = np.arange(count)
    z = (k + 0.5) / count                     # upper hemisphere suffices: +-u agree
    phi = np.pi * (1 + np.sqrt(5.0)) * k
    s = np.sqrt(1 - z * z)
    return np.column_stack([s * np.cos(phi), s * np.sin(phi), z])


def _axis_sup(batch_value, coarse=48, rounds=6):
    """Maximize a seminorm-in-u over unit axes; deterministic refinement.

    batch_value maps an (k, 3) array of unit axes to k values.  Ties in the
    coarse scan break to the first index.
    """
    axes = _fibonacci_hemisphere(coarse)
    vals = batch_value(axes)
    best_i = int(np.argmax(vals))
    best, u0 = float(vals[best_i]), axes[best_i]
    radius = 0.6
    ring_dirs = np.column_stack([
        np.cos(2 * np.pi * np.arange(12) / 12),
        np.sin(2 * np.pi * np.arange(12) / 12)])
    for _ in range(rounds):
        e1 = np.cross(u0, [0.0, 0.0, 1.0])
        if np.linalg.norm(e1) < 1e-8:
            e1 = np.cross(u0, [1.0, 0.0, 0.0])
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(u0, e1)
        cand = u0[None, :] + radius * (ring_dirs @ np.stack([e1, e2]))
        cand /= np.linalg.norm(cand, axis=1)[:, None]
        vals = batch_value(cand)
        k = int(np.argmax(vals))
        if vals[k] > best:
            best, u0 = float(vals[k]), cand[k]
        radius *= 0.35
    return best, u0


# -- Lip seminorms -----------------------------------------------------------

@dataclass(frozen=True)
class LipValue:
    value: float
    method: str
    tolerance: float
    axis: np.ndarray = field(default=None, repr=False)

    def __float__(self):
        return self.value


def lip_matrix(n, T, tol=1e-6):
    """Derivative Lip seminorm of a Hermitian T in B(H^n)."""
    T = np.asarray(T, dtype=complex)
    if np.abs(T - T.conj().T).max() > 1e-10 * max(1.0, np.abs(T).max()):
        raise ValueError("lip_matrix requires a Hermitian matrix")
    rep = su2.build_irrep(su2.HalfInt(n))
    comms = np.stack([J @ T - T @ J for J in (rep.Jx, rep.Jy, rep.Jz)])

    def batch(axes):
        mats = np.tensordot(axes, comms, axes=([1], [0]))
        return np.array([np.linalg.norm(M, 2) for M in mats])

    value, axis = _axis_sup(batch)
    return LipValue(value=value, method="derivative", tolerance=tol, axis=axis)


def derivative_fields(f):
    """The three rotation derivatives of a field, as fields: d_u = -i u.J per block."""
    out = []
    for i, pick in enumerate("xyz"):
        g = hh.HarmonicField(f.max_degree)
        for l in range(1, f.max_degree + 1):
            rep = su2.build_irrep(su2.HalfInt(2 * l))
            J = {"x": rep.Jx, "y": rep.Jy, "z": rep.Jz}[pick]
            g.blocks[l] = -1j * (J @ f.blocks[l])
        out.append(g)
    return out


def lip_field(f, tol=1e-6):
    """Derivative Lip seminorm of a real-valued field."""
    if not f.is_real(1e-9 * max(1.0, f.l2_norm())):
        raise ValueError("lip_field requires a real-valued field")
    dx, dy, dz = derivative_fields(f)
    L = max(f.max_degree, 1)
    n_theta = 2 * L + 8
    thetas = np.pi * (np.arange(n_theta) + 0.5) / n_theta
    phis = 2 * np.pi * np.arange(2 * n_theta) / (2 * n_theta)
    pole_t = np.array([0.0, np.pi])
    pole_p = np.array([0.0, np.pi / 2])
    stack = np.stack([
        np.concatenate([hh.synthesize(g, thetas, phis).ravel(),
                        hh.synthesize(g, pole_t, pole_p).ravel()])
        for g in (dx, dy, dz)])

    def batch(axes):
        return np.abs(axes @ stack).max(axis=1)

    rough, axis = _axis_sup(batch)
    combined = axis[0] * dx + axis[1] * dy + axis[2] * dz
    value = max(rough, hh.sup_norm(combined))
    return LipValue(value=value, method="derivative", tolerance=tol, axis=axis)


def quotient_consistency_matrix(n, T, lip, rng, samples=20, slack=1e-3):
    """Check sampled difference quotients never exceed the derivative value."""
    rep = su2.build_irrep(su2.HalfInt(n))
    worst = 0.0
    for g in su2.random_elements(rng, samples):
        ell = su2.rotation_angle(g)
        if ell < 1e-9:
            continue
        q = bz.op_norm(su2.adjoint_act(rep, g, T) - T) / ell
        worst = max(worst, q)
    ok = worst <= lip.value * (1 + slack) + 1e-12
    return ok, worst


def quotient_consistency_field(f, lip, rng, samples=20, slack=1e-3):
    worst = 0.0
    for g in su2.random_elements(rng, samples):
        ell = su2.rotation_angle(g)
        if ell < 1e-9:
            continue
        diff = hh.translate(f, g) - f
        q = hh.sup_norm(diff) / ell
        worst = max(worst, q)
    ok = worst <= lip.value * (1 + slack) + 1e-12
    return ok, worst


# -- contraction-defect search ----------------------------------------------

def _search_degrees(max_degree):
    """Geometric subsample of 1..max_degree, always including the ends."""
    degs = {1, max_degree}
    d = 1.0
    while d < max_degree:
        degs.add(int(round(d)))
        d *= 1.3
    return tuple(sorted(x for x in degs if 1 <= x <= max_degree))


def _single_block_field(rng, l, max_degree):
    f = hh.HarmonicField(max_degree)
    b = rng.standard_normal(2 * l + 1) + 1j * rng.standard_normal(2 * l + 1)
    signs = (-1.0) ** (l - np.arange(2 * l + 1))
    f.blocks[l] = (b + signs * b[::-1].conj()) / 2
    return f


@dataclass(frozen=True)
class DeltaReport:
    """Level-n field-side contraction defect estimate.

    value: empirical max of |transform(f) - f|_inf / Lip(f) (lower bracket).
    block_bound: sum over the searched degrees of (1 - beta_l) c_l with c_l
    the empirical sup of |f_l|_inf over the Lip-unit ball (upper bracket on
    the same truncated space).  max_degree is the declared truncation.
    """

    n: int
    value: float
    block_bound: float
    max_degree: int
    degrees: tuple
    seed: int
    samples: int
    block_ratios: dict


def delta_n(n, seed=1234, samples=2, max_degree=None):
    """Seeded randomized estimate of the field-side contraction defect."""
    max_degree = 2 * n if max_degree is None else max_degree
    rng = np.random.default_rng(seed)
    degrees = _search_degrees(max_degree)
    betas = {l: bz.beta_zonal(n, l) for l in degrees}
    best = 0.0
    c_l = {}
    for l in degrees:
        candidates = [hh.HarmonicField.basis(l, 0, max_degree=l)]
        candidates += [_single_block_field(rng, l, l) for _ in range(samples)]
        ratio_l = 0.0
        for f in candidates:
            lip = lip_field(f).value
            if lip < 1e-12:
                continue
            ratio_l = max(ratio_l, hh.sup_norm(f) / lip)
        c_l[l] = ratio_l
        best = max(best, (1 - betas[l]) * ratio_l)
    # mixed candidates: random fields spread over several sampled degrees
    for _ in range(samples * 3):
        picks = rng.choice(degrees, size=min(3, len(degrees)), replace=False)
        f = hh.HarmonicField(int(max(picks)))
        for l in picks:
            f = f + _single_block_field(rng, int(l), int(max(picks)))
        lip = lip_field(f).value
        if lip < 1e-12:
            continue
        diff = f - bz.transform(n, f, route="convolution")
        best = max(best, hh.sup_norm(diff) / lip)
    bound = sum((1 - betas[l]) * c_l[l] for l in degrees)
    return DeltaReport(n=n, value=best, block_bound=bound, max_degree=max_degree,
                       degrees=degrees, seed=seed, samples=samples,
                       block_ratios=c_l)


@dataclass(frozen=True)
class ThetaReport:
    """Level-n matrix-side contraction defect estimate (lower bracket) with
    the per-block sum as upper bracket."""

    n: int
    value: float
    block_bound: float
    seed: int
    samples: int
    block_ratios: dict


def theta_n(n, seed=1234, samples=3):
    """Seeded randomized estimate of the matrix-side contraction defect.

    The round trip acts on the spin-l isotypic block of B(H^n) by the
    certified block scalar, so single-block candidates have ratio
    (1 - beta_l) |T| / Lip(T); mixed candidates go through the projector
    decomposition.
    """
    rng = np.random.default_rng(seed)
    projectors = su2.isotypic_projectors(n)
    betas = [bz.beta_zonal(n, l) for l in range(n + 1)]
    d = n + 1
    best = 0.0
    c_l = {}
    for l in range(1, n + 1):
        ratio_l = 0.0
        for _ in range(samples):
            R = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            T = su2.isotypic_component(projectors, R + R.conj().T)[l]
            T = (T + T.conj().T) / 2
            if np.abs(T).max() < 1e-12:
                continue
            lip = lip_matrix(n, T).value
            if lip < 1e-12:
                continue
            ratio_l = max(ratio_l, bz.op_norm(T) / lip)
        c_l[l] = ratio_l
        best = max(best, (1 - betas[l]) * ratio_l)
    for _ in range(samples * 2):
        R = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        T = R + R.conj().T
        T -= np.trace(T) / d * np.eye(d)
        parts = su2.isotypic_component(projectors, T)
        rt = sum(betas[l] * parts[l] for l in range(n + 1))
        lip = lip_matrix(n, T).value
        if lip < 1e-12:
            continue
        best = max(best, bz.op_norm(T - rt) / lip)
    bound = sum((1 - betas[l]) * c_l[l] for l in c_l)
    return ThetaReport(n=n, value=best, block_bound=bound, seed=seed,
                       samples=samples, block_ratios=c_l)


@dataclass(frozen=True)
class BridgeEstimate:
    """Inputs of the bridge seminorm and the induced distance upper bound."""

    n: int
    delta_n: float
    theta_n: float
    epsilon: float
    gh_upper: float
    search_seed: int

    def __post_init__(self):
        assert self.epsilon >= max(self.delta_n, self.theta_n) - 1e-15
        assert abs(self.gh_upper - 2 * self.epsilon) < 1e-15


def gh_upper(n, seed=1234, samples=2, max_degree=None):
    """Distance upper bound 2*max(delta_n, theta_n) at level n."""
    dr = delta_n(n, seed=seed, samples=samples, max_degree=max_degree)
    tr = theta_n(n, seed=seed, samples=max(samples, 2))
    eps = max(dr.value, tr.value)
    return BridgeEstimate(n=n, delta_n=dr.value, theta_n=tr.value,
                          epsilon=eps, gh_upper=2 * eps, search_seed=seed)


# -- auxiliary inequality checks ----------------------------------------------

@dataclass(frozen=True)
class CheckReport:
    name: str
    cases: list
    passed: bool


def radius_check(samples=10, seed=7, n=4, degree=3, slack=1e-3):
    """Centered norm vs twice radius times Lip, on random fields and matrices."""
    rng = np.random.default_rng(seed)
    length = rotation_length()
    r = length.haar_mean
    cases = []
    for _ in range(samples):
        f = hh.random_real_field(rng, degree)
        mean = f.coeff(0, 0).real / np.sqrt(4 * np.pi)
        lhs = hh.sup_norm(f - hh.HarmonicField.constant(mean, f.max_degree))
        rhs = 2 * r * lip_field(f).value
        cases.append(("field", lhs, rhs))
    d = n + 1
    for _ in range(samples):
        R = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        T = R + R.conj().T
        lhs = bz.op_norm(T - np.trace(T) / d * np.eye(d))
        rhs = 2 * r * lip_matrix(n, T).value
        cases.append(("matrix", lhs, rhs))
    passed = all(l <= rh * (1 + slack) + 1e-12 for _, l, rh in cases)
    return CheckReport(name="radius", cases=cases, passed=passed)


def contraction_check(n, samples=10, seed=11, degree=3, slack=1e-3):
    """Lip contraction under the quantization maps, both directions."""
    rng = np.random.default_rng(seed)
    cases = []
    for _ in range(samples):
        f = hh.random_real_field(rng, min(degree, n))
        lhs = lip_matrix(n, bz.adjoint_symbol(n, f)).value
        rhs = lip_field(f).value
        cases.append(("adjoint", lhs, rhs))
        d = n + 1
        R = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        T = R + R.conj().T
        lhs = lip_field(bz.symbol(n, T)).value
        rhs = lip_matrix(n, T).value
        cases.append(("symbol", lhs, rhs))
    passed = all(l <= rh * (1 + slack) + 1e-12 for _, l, rh in cases)
    return CheckReport(name="contraction", cases=cases, passed=passed)
