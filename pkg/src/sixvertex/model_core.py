"""Statistical weights, model parameters and the polynomial curve type.

Two weight families are supported:

    rational        a(x) = x + 1,          b(x) = x,        c = 1
    trigonometric   a(x) = sinh(x + g),    b(x) = sinh(x),  c = sinh(g)

Eigenvalue curves of the rational model are ordinary polynomials in x.
In the trigonometric model they are Laurent polynomials in t = e^x, so a
``Curve`` stores either monomial coefficients or the coefficients of
e^{kx} for k = -d..d.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

RATIONAL = "rational"
TRIGONOMETRIC = "trigonometric"
FAMILIES = (RATIONAL, TRIGONOMETRIC)


class ParameterError(ValueError):
    """Invalid model parameters."""


def _as_complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ParameterError(f"complex pair expected, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


@dataclass(frozen=True)
class ModelParams:
    family: str
    gamma: complex = 0j
    phi1: complex = 1.0
    phi2: complex = 1.0
    mu: tuple = ()
    L: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParameterError(f"unknown family {self.family!r}")
        mu = tuple(complex(m) for m in self.mu)
        L = self.L if self.L is not None else len(mu)
        if not mu and L:
            mu = (0j,) * L
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "L", int(L))
        object.__setattr__(self, "gamma", complex(self.gamma))
        object.__setattr__(self, "phi1", complex(self.phi1))
        object.__setattr__(self, "phi2", complex(self.phi2))
        if self.L < 1:
            raise ParameterError("L must be a positive integer")
        if len(self.mu) != self.L:
            raise ParameterError(f"need {self.L} inhomogeneities, got {len(self.mu)}")
        if self.phi1 == 0 or self.phi2 == 0:
            raise ParameterError("twists phi1, phi2 must be nonzero")
        if self.family == TRIGONOMETRIC and abs(np.sinh(self.gamma)) < 1e-14:
            raise ParameterError("sinh(gamma) vanishes: c-weight is zero")

    @property
    def trig(self) -> bool:
        return self.family == TRIGONOMETRIC

    def replace(self, **kw) -> "ModelParams":
        d = dict(family=self.family, gamma=self.gamma, phi1=self.phi1,
                 phi2=self.phi2, mu=self.mu, L=self.L)
        d.update(kw)
        if "mu" in kw and "L" not in kw:
            d["L"] = len(kw["mu"])
        return ModelParams(**d)

    def to_dict(self) -> dict:
        pair = lambda z: [float(z.real), float(z.imag)]
        return {"family": self.family, "gamma": pair(self.gamma),
                "phi1": pair(self.phi1), "phi2": pair(self.phi2),
                "mu": [pair(m) for m in self.mu], "L": self.L}

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        try:
            mu = [_as_complex(m) for m in d.get("mu", [])]
            return cls(family=d["family"], gamma=_as_complex(d.get("gamma", 0)),
                       phi1=_as_complex(d.get("phi1", 1)), phi2=_as_complex(d.get("phi2", 1)),
                       mu=tuple(mu), L=d.get("L", len(mu)))
        except KeyError as exc:
            raise ParameterError(f"missing field {exc}") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, s: str) -> "ModelParams":
        return cls.from_dict(json.loads(s))


def weight(kind: str, x, params: ModelParams):
    """Statistical weight a, b or c at spectral parameter x (array friendly)."""
    x = np.asarray(x, dtype=complex)
    if params.trig:
        g = params.gamma
        if kind == "a":
            return np.sinh(x + g)
        if kind == "b":
            return np.sinh(x)
        if kind == "c":
            return np.sinh(g) + 0 * x
    else:
        if kind == "a":
            return x + 1
        if kind == "b":
            return x
        if kind == "c":
            return 1 + 0 * x
    raise ValueError(f"unknown weight {kind!r}")


def highest_weight(kind: str, x, params: ModelParams):
    """lambda_A(x) = prod a(x - mu_j) for kind 'A', lambda_D with b for 'D'."""
    w = {"A": "a", "D": "b"}[kind]
    x = np.asarray(x, dtype=complex)
    out = np.ones_like(x)
    for m in params.mu:
        out = out * weight(w, x - m, params)
    return out


def lambda_pm(sign: str, x, params: ModelParams):
    """lambda_+ = phi1 lA + phi2 lD and lambda_- = phi2 lD - phi1 lA.

    The sign of lambda_- is fixed so that the n=1 and n=2 closed-form
    Riccati coefficients and the sl(2) generators hold as written; with
    this choice Omega_bar = -c lambda_- in the n=1 sector.
    """
    lA = highest_weight("A", x, params)
    lD = highest_weight("D", x, params)
    if sign == "+":
        return params.phi1 * lA + params.phi2 * lD
    if sign == "-":
        return params.phi2 * lD - params.phi1 * lA
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


# ---------------------------------------------------------------------------
# curves

MONOMIAL = "monomial"
EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class Curve:
    """A polynomial (monomial basis) or Laurent polynomial in e^x.

    For the exponential basis ``coeffs[k + d]`` multiplies e^{kx}.
    """
    basis: str
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex)).copy()
        if self.basis == EXPONENTIAL and len(c) % 2 == 0:
            raise ValueError("exponential curves need 2d+1 coefficients")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        n = len(self.coeffs)
        return n - 1 if self.basis == MONOMIAL else (n - 1) // 2

    @property
    def exponents(self) -> np.ndarray:
        if self.basis == MONOMIAL:
            return np.arange(len(self.coeffs))
        d = self.degree
        return np.arange(-d, d + 1)

    def __call__(self, x):
        x = np.asarray(x, dtype=complex)
        if self.basis == MONOMIAL:
            return np.polynomial.polynomial.polyval(x, self.coeffs)
        d = self.degree
        t = np.exp(x)
        return np.polynomial.polynomial.polyval(t, self.coeffs) * t ** (-d)

    def deriv(self, m: int = 1) -> "Curve":
        if m == 0:
            return self
        if self.basis == MONOMIAL:
            return Curve(MONOMIAL, np.polynomial.polynomial.polyder(self.coeffs, m)
                         if len(self.coeffs) > m else [0])
        return Curve(EXPONENTIAL, self.coeffs * self.exponents.astype(float) ** m)

    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs))) if len(self.coeffs) else 0.0

    def _pad(self, d: int) -> np.ndarray:
        if self.basis == MONOMIAL:
            out = np.zeros(d + 1, complex)
            out[:len(self.coeffs)] = self.coeffs
            return out
        out = np.zeros(2 * d + 1, complex)
        k = self.degree
        out[d - k:d + k + 1] = self.coeffs
        return out

    def __add__(self, other: "Curve") -> "Curve":
        if not isinstance(other, Curve):
            other = constant_curve(other, self.basis)
        if other.basis != self.basis:
            raise ValueError("basis mismatch")
        d = max(self.degree, other.degree)
        return Curve(self.basis, self._pad(d) + other._pad(d))

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, other) -> "Curve":
        if isinstance(other, Curve):
            if other.basis != self.basis:
                raise ValueError("basis mismatch")
            return Curve(self.basis, np.convolve(self.coeffs, other.coeffs))
        return Curve(self.basis, self.coeffs * complex(other))

    __rmul__ = __mul__

    def trimmed(self, rtol: float = 1e-13) -> "Curve":
        """Drop negligible outer coefficients."""
        c = self.coeffs
        tol = rtol * max(self.scale(), 1e-300)
        if self.basis == MONOMIAL:
            k = len(c)
            while k > 1 and abs(c[k - 1]) <= tol:
                k -= 1
            return Curve(MONOMIAL, c[:k])
        d = self.degree
        while d > 0 and abs(c[0]) <= tol and abs(c[-1]) <= tol:
            c = c[1:-1]
            d -= 1
        return Curve(EXPONENTIAL, c)

    def distance(self, other: "Curve") -> float:
        """Relative max-coefficient distance."""
        d = max(self.degree, other.degree)
        a, b = self._pad(d), other._pad(d)
        return float(np.max(np.abs(a - b)) / max(np.max(np.abs(a)), np.max(np.abs(b)), 1e-300))

    def to_list(self) -> list:
        return [[float(z.real), float(z.imag)] for z in self.coeffs]


def constant_curve(v, basis: str = MONOMIAL) -> Curve:
    return Curve(basis, [complex(v)])


def basis_for(params: ModelParams) -> str:
    return EXPONENTIAL if params.trig else MONOMIAL


def fit_curve(f, degree: int, basis: str, radius: float = 1.0, oversample: int = 6,
              tol: float = 1e-9) -> Curve:
    """Least-squares fit of an analytic function by a curve of given degree.

    Samples lie on a circle (monomial basis: |x| = radius; exponential basis:
    x on the imaginary axis, i.e. |e^x| = 1), which keeps the Vandermonde
    system unitary up to scaling.  Raises if the fit residual exceeds tol.
    """
    if basis == MONOMIAL:
        N = degree + 1 + oversample
        theta = 2 * np.pi * (np.arange(N) + 0.25) / N
        xs = radius * np.exp(1j * theta)
        V = (xs[:, None] / radius) ** np.arange(degree + 1)[None, :]
    else:
        N = 2 * degree + 1 + oversample
        theta = 2 * np.pi * (np.arange(N) + 0.25) / N
        xs = 1j * theta
        V = np.exp(1j * theta[:, None] * np.arange(-degree, degree + 1)[None, :])
    vals = np.array([f(x) for x in xs], dtype=complex)
    c, *_ = np.linalg.lstsq(V, vals, rcond=None)
    res = np.linalg.norm(V @ c - vals) / max(np.linalg.norm(vals), 1e-300)
    if res > tol:
        raise ArithmeticError(f"curve fit residual {res:.3e} exceeds {tol:.1e}")
    if basis == MONOMIAL:
        c = c / radius ** np.arange(degree + 1)
    return Curve(basis, c)


def highest_weight_curve(kind: str, params: ModelParams) -> Curve:
    """lambda_A or lambda_D as an exact Curve."""
    out = constant_curve(1.0, basis_for(params))
    for m in params.mu:
        if params.trig:
            g = params.gamma if kind == "A" else 0.0
            # sinh(x - m + g) = (e^{g-m} e^x - e^{m-g} e^{-x}) / 2
            fac = Curve(EXPONENTIAL, [-np.exp(m - g) / 2, 0, np.exp(g - m) / 2])
        else:
            fac = Curve(MONOMIAL, [(1 if kind == "A" else 0) - m, 1])
        out = out * fac
    return out


def lambda_pm_curve(sign: str, params: ModelParams) -> Curve:
    lA = highest_weight_curve("A", params)
    lD = highest_weight_curve("D", params)
    if sign == "+":
        return params.phi1 * lA + params.phi2 * lD
    return params.phi2 * lD - params.phi1 * lA


def parse_complex(s: str) -> complex:
    """Parse '0.3+0.1i', '1', '-2i', '0.5-1e-3i' into a complex number."""
    t = s.strip().replace(" ", "").replace("I", "i").replace("j", "i")
    if not t:
        raise ValueError("empty complex literal")
    if t.endswith("i"):
        t = t[:-1] + "j"
        if t in ("j", "+j", "-j"):
            t = t.replace("j", "1j")
    return complex(t)
