"""Direct-diagonalisation oracle for the twisted inhomogeneous transfer matrix.

T(x) = phi1 A(x) + phi2 D(x) where A, D are the diagonal entries of the
monodromy L_L(x - mu_L) ... L_1(x - mu_1) in auxiliary space.  Site basis
bit 1 means spin down; T conserves the number n of down spins.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np

from .eigen import eig, polyroots
from .model_core import (EXPONENTIAL, MONOMIAL, Curve, ModelParams, basis_for,
                         fit_curve, lambda_pm, weight)


class OracleError(ArithmeticError):
    pass


class DegenerateSectorError(OracleError):
    pass


@lru_cache(maxsize=None)
def sector_indices(L: int, n: int) -> np.ndarray:
    """Basis indices of the n-down-spin subspace, in increasing order."""
    if not 0 <= n <= L:
        raise ValueError(f"sector n={n} outside 0..{L}")
    idx = sorted(sum(1 << (L - 1 - s) for s in c) for c in combinations(range(L), n))
    return np.array(idx, dtype=int)


def full_transfer_matrix(params: ModelParams, x: complex) -> np.ndarray:
    L = params.L
    dim = 2 ** L
    up = np.array([[1, 0], [0, 0]], complex)
    dn = np.array([[0, 0], [0, 1]], complex)
    sp = np.array([[0, 1], [0, 0]], complex)
    sm = np.array([[0, 0], [1, 0]], complex)
    # monodromy blocks M[a][b] acting on the quantum space
    M = [[np.eye(dim, dtype=complex), np.zeros((dim, dim), complex)],
         [np.zeros((dim, dim), complex), np.eye(dim, dtype=complex)]]
    for j in range(L):
        z = x - params.mu[j]
        A, B, C = (complex(weight(k, z, params)) for k in "abc")
        left = np.eye(2 ** j)
        right = np.eye(2 ** (L - 1 - j))
        emb = lambda o: np.kron(np.kron(left, o), right)
        loc = [[emb(A * up + B * dn), emb(C * sm)],
               [emb(C * sp), emb(B * up + A * dn)]]
        M = [[loc[a][0] @ M[0][b] + loc[a][1] @ M[1][b] for b in range(2)] for a in range(2)]
    return params.phi1 * M[0][0] + params.phi2 * M[1][1]


@dataclass
class SectorMatrix:
    n: int
    dim: int
    entries: np.ndarray
    x: complex


def build_sector_matrix(params: ModelParams, n: int, x: complex) -> SectorMatrix:
    if not 0 <= n <= params.L:
        raise ValueError(f"sector n={n} outside 0..{params.L}")
    idx = sector_indices(params.L, n)
    T = full_transfer_matrix(params, x)[np.ix_(idx, idx)]
    return SectorMatrix(n=n, dim=comb(params.L, n), entries=T, x=x)


@dataclass
class SpectralCurve:
    """One eigenvalue Lambda(x) of T restricted to sector n."""
    n: int
    curve: Curve
    params: ModelParams = field(repr=False)
    zeroes: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.zeroes is None:
            self.zeroes = curve_zeroes(self.curve, self.params)

    def __call__(self, x):
        return self.curve(x)

    def deriv(self, x, m: int = 1):
        return self.curve.deriv(m)(x)

    @property
    def lambda0(self) -> complex:
        return complex(self.curve(0.0))

    def to_dict(self) -> dict:
        pair = lambda z: [float(z.real), float(z.imag)]
        return {"coeffs": self.curve.to_list(), "lambda0": pair(self.lambda0),
                "zeroes": [pair(u) for u in self.zeroes]}


def _canonical_key(c: Curve):
    scale = max(c.scale(), 1e-300)
    q = lambda v: round(v / scale, 9) + 0.0
    return (tuple(q(z.real) for z in c.coeffs), tuple(q(z.imag) for z in c.coeffs))


def diagonalize_sector(params: ModelParams, n: int, xstar: complex = 0.3137 + 0.2171j):
    """All eigenvalue curves of sector n, canonically ordered.

    The commuting family shares x-independent eigenvectors, so T_n is
    diagonalised once at a generic point and each curve is then evaluated
    anywhere through the bilinear quotient (w^T T(x) v) / (w^T v).
    """
    idx = sector_indices(params.L, n)
    dim = len(idx)
    if dim > 64:
        raise ValueError("sector dimension exceeds desk scale (64)")
    tries = [xstar, 0.4711 - 0.1913j, -0.2719 + 0.3823j]
    for xs in tries:
        T0 = build_sector_matrix(params, n, xs).entries
        w, V = eig(T0)
        gaps = np.abs(w[:, None] - w[None, :]) + np.eye(dim) * 1e300
        if dim == 1 or np.min(gaps) > 1e-7 * max(np.max(np.abs(w)), 1e-300):
            break
    else:
        raise DegenerateSectorError(f"sector n={n}: degenerate spectrum at x={tries[-1]}")
    W = np.linalg.inv(V)  # rows are left eigenvectors with W V = I
    basis = basis_for(params)
    deg = params.L
    curves = []
    for k in range(dim):
        left, right = W[k], V[:, k]

        def ev(x, left=left, right=right):
            return left @ build_sector_matrix(params, n, x).entries @ right
        c = fit_curve(ev, deg, basis, radius=1.0).trimmed(1e-14)
        curves.append(c)
    curves.sort(key=_canonical_key)
    return [SpectralCurve(n=n, curve=c, params=params) for c in curves]


def curve_zeroes(curve: Curve, params: ModelParams) -> np.ndarray:
    """All zeroes of a curve.

    Rational: roots of the polynomial.  Trigonometric: spectral curves of
    sector n have definite parity in e^x (only k = L, L-2, ... appear), so
    they are polynomials of degree L in s = e^{2x} up to a power of e^x;
    each root s gives one sinh-type zero u = log(s)/2, Im(u) in (-pi/2, pi/2].
    """
    c = np.asarray(curve.coeffs, complex)
    if curve.basis == MONOMIAL:
        return np.asarray(polyroots(c))
    d = curve.degree
    scale = max(np.max(np.abs(c)), 1e-300)
    even, odd = c[0::2], c[1::2]
    if np.max(np.abs(odd), initial=0) > 1e-9 * scale and np.max(np.abs(even)) > 1e-9 * scale:
        # mixed parity: fall back to roots in t = e^x
        t = polyroots(c)
        return np.log(t)
    part = even if np.max(np.abs(even)) >= np.max(np.abs(odd), initial=0) else odd
    s = polyroots(part)
    u = np.log(s) / 2
    # fold imaginary part into (-pi/2, pi/2]
    im = (u.imag + np.pi / 2) % np.pi - np.pi / 2
    im = np.where(np.isclose(im, -np.pi / 2), np.pi / 2, im)
    return u.real + 1j * im


def spectrum(params: ModelParams, sectors=None) -> dict:
    sectors = range(params.L + 1) if sectors is None else sectors
    return {n: diagonalize_sector(params, n) for n in sectors}


def vacuum_check(params: ModelParams, x) -> complex:
    """lambda_+ at x: the n=0 eigenvalue."""
    return complex(lambda_pm("+", x, params))
