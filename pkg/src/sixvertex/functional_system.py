"""Compatibility determinant and the determinant-built Riccati coefficients.

For an eigenvalue Lambda in sector n the coefficients M_i(x_0..x_n) of the
linear functional system must make the (n+1) x (n+1) matrix built from them
singular.  Specialising the same construction at x_0 = x_1 = x with the
remaining points placed on n-1 zeroes of Lambda gives the omega matrix;
its minors produce the coefficients of the first-order Riccati equation

    Ob(x) dLambda - O0(x) + O1(x) Lambda - O2(x) Lambda^2 = 0.
"""
from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .model_core import ModelParams, highest_weight, weight


class CoincidentPointsError(ZeroDivisionError):
    pass


def _check_distinct(points, params: ModelParams, what: str = "points"):
    pts = list(points)
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = pts[i] - pts[j]
            if params.trig:
                d = np.sinh(d)
            if abs(d) < 1e-14:
                raise CoincidentPointsError(f"{what} {i} and {j} coincide ({pts[i]})")


def _ab(params):
    a = lambda z: weight("a", z, params)
    b = lambda z: weight("b", z, params)
    c = complex(weight("c", 0.0, params))
    return a, b, c


def coefficient_M(i: int, pts: Sequence[complex], Lam: Callable, params: ModelParams) -> complex:
    """Coefficient M_i of the functional equation at points x_0..x_n."""
    _check_distinct(pts, params)
    a, b, c = _ab(params)
    p1, p2 = params.phi1, params.phi2
    lA = lambda z: complex(highest_weight("A", z, params))
    lD = lambda z: complex(highest_weight("D", z, params))
    x0 = pts[0]
    if i == 0:
        rest = pts[1:]
        tA = np.prod([a(xj - x0) / b(xj - x0) for xj in rest]) if rest else 1.0
        tD = np.prod([a(x0 - xj) / b(x0 - xj) for xj in rest]) if rest else 1.0
        return complex(p1 * tA * lA(x0) + p2 * tD * lD(x0) - Lam(x0))
    xi = pts[i]
    others = [pts[j] for j in range(1, len(pts)) if j != i]
    tA = np.prod([a(xj - xi) / b(xj - xi) for xj in others]) if others else 1.0
    tD = np.prod([a(xi - xj) / b(xi - xj) for xj in others]) if others else 1.0
    return complex(c / b(x0 - xi) * (p1 * tA * lA(xi) - p2 * tD * lD(xi)))


def compatibility_matrix(pts: Sequence[complex], Lam: Callable, params: ModelParams) -> np.ndarray:
    """Matrix whose columns are the functional equation under x_0 <-> x_j swaps."""
    n = len(pts) - 1
    M = np.zeros((n + 1, n + 1), complex)
    for j in range(n + 1):
        ys = list(pts)
        ys[0], ys[j] = ys[j], ys[0]
        for i in range(n + 1):
            if i == 0:
                M[i, j] = coefficient_M(j, ys, Lam, params)
            elif i == j:
                M[i, j] = coefficient_M(0, ys, Lam, params)
            else:
                M[i, j] = coefficient_M(i, ys, Lam, params)
    return M


def compatibility_det(pts, Lam, params: ModelParams) -> complex:
    return complex(np.linalg.det(compatibility_matrix(pts, Lam, params)))


def normalized_compatibility_det(pts, Lam, params: ModelParams) -> float:
    """|det| divided by the product of row norms (Hadamard bound)."""
    M = compatibility_matrix(pts, Lam, params)
    scale = np.prod(np.linalg.norm(M, axis=1))
    return float(abs(np.linalg.det(M)) / scale) if scale > 0 else 0.0


# ---------------------------------------------------------------------------
# omega matrix

def omega_matrix(x0, x1, zeroes: Sequence[complex], params: ModelParams) -> np.ndarray:
    """The (n+1) x (n+1) omega matrix; x0, x1 may be broadcastable arrays.

    Index 0, 1 refer to the points x0, x1; index k >= 2 to zeroes[k-2].
    """
    a, b, c = _ab(params)
    p1, p2 = params.phi1, params.phi2
    us = [complex(u) for u in zeroes]
    m = len(us)
    x0, x1 = np.broadcast_arrays(np.asarray(x0, complex), np.asarray(x1, complex))
    shape = x0.shape
    xx = (x0, x1)
    W = np.zeros(shape + (m + 2, m + 2), complex)
    lA = lambda z: highest_weight("A", z, params)
    lD = lambda z: highest_weight("D", z, params)

    def pa(z, excl=()):  # prod_k a(u_k - z)/b(u_k - z)
        out = np.ones(np.shape(z), complex)
        for k, u in enumerate(us):
            if k not in excl:
                out = out * a(u - z) / b(u - z)
        return out

    def pd(z, excl=()):  # prod_k a(z - u_k)/b(z - u_k)
        out = np.ones(np.shape(z), complex)
        for k, u in enumerate(us):
            if k not in excl:
                out = out * a(z - u) / b(z - u)
        return out

    for i in (0, 1):
        xi, xb = xx[i], xx[1 - i]
        sg = (-1) ** i
        A_i, D_i = lA(xi), lD(xi)
        W[..., i, i] = sg * (p1 * a(xb - xi) * pa(xi) * A_i - p2 * a(xi - xb) * pd(xi) * D_i)
        W[..., i, 1 - i] = sg * c * (p1 * pa(xi) * A_i - p2 * pd(xi) * D_i)
        for jj, uj in enumerate(us):
            W[..., i, jj + 2] = -sg * (p1 * a(xb - xi) * c / b(xi - uj) * pa(xi, (jj,)) * A_i
                                       - p2 * a(xi - xb) * c / b(uj - xi) * pd(xi, (jj,)) * D_i)
    for ii, ui in enumerate(us):
        A_u, D_u = complex(lA(ui)), complex(lD(ui))
        prA = lambda excl: np.prod([a(u - ui) / b(u - ui) for k, u in enumerate(us) if k not in excl])
        prD = lambda excl: np.prod([a(ui - u) / b(ui - u) for k, u in enumerate(us) if k not in excl])
        for j in (0, 1):
            xj, xb = xx[j], xx[1 - j]
            W[..., ii + 2, j] = (-p1 * c / b(ui - xj) * a(xb - ui) / b(xb - ui) * prA((ii,)) * A_u
                                 - p2 * c / b(xj - ui) * a(ui - xb) / b(ui - xb) * prD((ii,)) * D_u)
        f0A = a(x0 - ui) / b(x0 - ui) * a(x1 - ui) / b(x1 - ui)
        f0D = a(ui - x0) / b(ui - x0) * a(ui - x1) / b(ui - x1)
        for jj, uj in enumerate(us):
            if jj == ii:
                W[..., ii + 2, jj + 2] = p1 * f0A * prA((ii,)) * A_u + p2 * f0D * prD((ii,)) * D_u
            else:
                W[..., ii + 2, jj + 2] = (-p1 * c / b(ui - uj) * f0A * prA((ii, jj)) * A_u
                                          - p2 * c / b(uj - ui) * f0D * prD((ii, jj)) * D_u)
    return W


def omega_entry(i: int, j: int, x0: complex, x1: complex, zeroes, params: ModelParams) -> complex:
    """Single omega entry, with collision checks."""
    pts = [x0, x1] if i in (0, 1) or j in (0, 1) else []
    _check_distinct(list(zeroes), params, "zeroes")
    for u in zeroes:
        for x in (x0, x1):
            d = np.sinh(x - u) if params.trig else x - u
            if abs(d) < 1e-14:
                raise CoincidentPointsError(f"omega[{i},{j}]: point {x} hits zero {u}")
    return complex(omega_matrix(x0, x1, zeroes, params)[i, j])


def _minor(W, drop):
    k = [i for i in range(W.shape[-1]) if i not in drop]
    if not k:
        return np.ones(W.shape[:-2], complex)
    return np.linalg.det(W[..., k, :][..., :, k])


# ---------------------------------------------------------------------------
# Riccati coefficients

def contour_derivative(f: Callable, x: complex, r: float, N: int = 32) -> complex:
    """f'(x) from the trapezoid rule on a circle; f must accept arrays."""
    th = 2 * np.pi * np.arange(N) / N
    z = x + r * np.exp(1j * th)
    return complex(np.mean(f(z) * np.exp(-1j * th)) / r)


def richardson_derivative(f: Callable, x: complex, h: float) -> tuple[complex, float]:
    """Fourth-order central difference plus one Richardson step.

    Returns (derivative, relative disagreement between step h and h/2).
    """
    def d(h):
        v = f(np.array([x + 2 * h, x + h, x - h, x - 2 * h]))
        return (-v[0] + 8 * v[1] - 8 * v[2] + v[3]) / (12 * h)
    d1, d2 = d(h), d(h / 2)
    est = (16 * d2 - d1) / 15
    return complex(est), float(abs(d1 - d2) / max(abs(est), 1e-300))


@dataclass
class OmegaValues:
    ob: complex
    o0: complex
    o1: complex
    o2: complex
    warning: str | None = None

    def astuple(self):
        return (self.ob, self.o0, self.o1, self.o2)


def _pole_distance(x, zeroes, params):
    if not len(zeroes):
        return 1.0
    if params.trig:
        # distance modulo i*pi
        ds = []
        for u in zeroes:
            d = x - u
            k = np.round(d.imag / np.pi)
            ds.append(abs(d - 1j * np.pi * k))
        return min(ds)
    return min(abs(x - u) for u in zeroes)


def riccati_coefficients(n: int, zero_subset, x: complex, params: ModelParams,
                         method: str = "contour") -> OmegaValues:
    """(Ob, O0, O1, O2) at x for sector n with the given n-1 zeroes."""
    us = [complex(u) for u in zero_subset]
    if len(us) != n - 1:
        raise ValueError(f"sector {n} needs {n - 1} zeroes, got {len(us)}")
    R = _pole_distance(x, us, params)
    if R < 1e-12:
        raise CoincidentPointsError(f"x={x} coincides with a zero of the subset")
    x = complex(x)
    Wx = omega_matrix(x, x, us, params)
    ob = complex(_minor(Wx, (1,)))
    o2 = complex(_minor(Wx, (0, 1)))
    b = lambda z: weight("b", z, params)

    def g1(y):
        W = omega_matrix(x, y, us, params)
        return _minor(W, (0,)) + _minor(W, (1,))

    def g0(y):
        W = omega_matrix(x, y, us, params)
        return np.linalg.det(W) / b(y - x)

    warn = None
    if method == "contour":
        r = min(0.25, R / 3)
        o1 = contour_derivative(g1, x, r)
        o0 = contour_derivative(g0, x, r)
    elif method == "richardson":
        h = 1e-3 * max(1.0, abs(x))
        h = min(h, R / 4)
        o1, e1 = richardson_derivative(g1, x, h)
        # g0 has a removable singularity at y = x: sample around it only
        o0, e0 = richardson_derivative(g0, x, h)
        if max(e1, e0) > 1e-5:
            warn = f"finite-difference disagreement {max(e1, e0):.2e}"
            warnings.warn(warn, RuntimeWarning, stacklevel=2)
    else:
        raise ValueError(f"unknown method {method!r}")
    return OmegaValues(ob, o0, o1, o2, warn)


class RiccatiCoefficients:
    """Evaluators for the four coefficients of a sector and zero subset."""

    def __init__(self, n: int, zero_subset, params: ModelParams, method: str = "contour"):
        self.n = n
        self.zero_subset = tuple(complex(u) for u in zero_subset)
        self.params = params
        self.method = method

    def __call__(self, x) -> OmegaValues:
        return riccati_coefficients(self.n, self.zero_subset, x, self.params, self.method)

    def ob(self, x):
        return self(x).ob

    def o0(self, x):
        return self(x).o0

    def o1(self, x):
        return self(x).o1

    def o2(self, x):
        return self(x).o2


def riccati_residual(Lam, coeffs: OmegaValues, x) -> tuple[complex, float]:
    """Residual Ob Lambda' - O0 + O1 Lambda - O2 Lambda^2 and its relative size.

    Lam must expose __call__ and deriv(x) (a SpectralCurve does).
    """
    l = Lam(x)
    dl = Lam.deriv(x)
    terms = [coeffs.ob * dl, coeffs.o0, coeffs.o1 * l, coeffs.o2 * l * l]
    r = terms[0] - terms[1] + terms[2] - terms[3]
    return complex(r), float(abs(r) / max(max(abs(t) for t in terms), 1e-300))


def removable_singularity_limit(zeroes, x: complex, params: ModelParams,
                                steps=(1e-2, 1e-3, 1e-4)) -> list:
    """det(omega)(x, x+h)/b(h) for shrinking h; should converge."""
    b = lambda z: weight("b", z, params)
    return [complex(np.linalg.det(omega_matrix(x, x + h, zeroes, params)) / b(h)) for h in steps]


def write_diagnostics_csv(path, rows):
    """rows: iterable of (x, OmegaValues, residual)."""
    fmt = lambda z: f"{complex(z).real:.12g}{complex(z).imag:+.12g}i"
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "omega_bar", "omega0", "omega1", "omega2", "residual"])
        for x, om, res in rows:
            w.writerow([fmt(x), fmt(om.ob), fmt(om.o0), fmt(om.o1), fmt(om.o2), f"{res:.12g}"])
