"""Lie point symmetries of the first-order Riccati equation

    Sigma = Ob(x) L1 - O0(x) + O1(x) L - O2(x) L^2 = 0      (L1 = dL/dx).

Fields v = xi d/dx + phi d/dL in the minimal form xi = f0(x),
phi = g0(x) + g1(x) L reduce the symmetry condition to three linear ODEs for
(f0, g0, g1).  Eliminating g1, g0 leaves a third-order linear ODE for f0,

    U0 f0 + U1 f0' - (O2 Ob)^3 f0''' = 0,

whose three solutions give three fields; these close into sl(2).

Derivatives are carried by truncated Taylor jets (see ``jets``).  The
coefficients are modelled as N(x) / Q(x)^m with N a fitted (Laurent)
polynomial and Q = prod b(x - u) over the zero subset, so their jets are
exact up to the fit error.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from ._n2_fields import n2_components
from .eigen import polyroots
from .functional_system import OmegaValues, riccati_coefficients
from .jets import Jet, curve_jet
from .model_core import EXPONENTIAL, MONOMIAL, Curve, ModelParams, lambda_pm_curve

NAMES = ("ob", "o0", "o1", "o2")


class SymmetryError(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# jet-valued functions

class JetFunction:
    """Analytic function of x that returns Jets: f(x, order) -> Jet."""

    def __init__(self, fn: Callable[[complex, int], Jet], label: str = ""):
        self.fn = fn
        self.label = label

    def __call__(self, x, order: int = 0) -> Jet:
        return self.fn(complex(x), order)

    def value(self, x) -> complex:
        return self(x, 0).value

    @classmethod
    def from_curve(cls, c: Curve, label: str = "") -> "JetFunction":
        return cls(lambda x, K: curve_jet(c, x, K), label)

    @classmethod
    def constant(cls, v, label: str = "") -> "JetFunction":
        return cls(lambda x, K: Jet.constant(v, K), label)

    @classmethod
    def from_callable(cls, f: Callable, r: float = 0.05, N: int = 48, label: str = "") -> "JetFunction":
        """Jets from Cauchy integrals of an analytic callable accepting arrays."""
        def fn(x, K):
            th = 2 * np.pi * np.arange(N) / N
            v = np.asarray(f(x + r * np.exp(1j * th)), complex)
            c = [np.mean(v * np.exp(-1j * k * th)) / r ** k for k in range(K + 1)]
            return Jet(c)
        return cls(fn, label)


def as_jet_function(f) -> JetFunction:
    if isinstance(f, JetFunction):
        return f
    if isinstance(f, Curve):
        return JetFunction.from_curve(f)
    if np.isscalar(f):
        return JetFunction.constant(f)
    return JetFunction.from_callable(f)


# ---------------------------------------------------------------------------
# coefficient models

class FittedCoefficients:
    """Exact-derivative model of (Ob, O0, O1, O2) for a sector and zero subset.

    Each coefficient times Q^m (Q = prod b(x - u), m chosen per coefficient)
    is sampled on a circle (rational) or a vertical line (trigonometric) and
    identified as a polynomial / Laurent polynomial by FFT; the identification
    is then checked at off-grid points.
    """

    def __init__(self, n: int, zero_subset, params: ModelParams, tol: float = 1e-9,
                 max_power: int = 3):
        self.n = n
        self.zero_subset = tuple(complex(u) for u in zero_subset)
        self.params = params
        trig = params.trig
        basis = EXPONENTIAL if trig else MONOMIAL
        Q = Curve(basis, [1.0])
        for u in self.zero_subset:
            Q = Q * (Curve(EXPONENTIAL, [-np.exp(u) / 2, 0, np.exp(-u) / 2]) if trig
                     else Curve(MONOMIAL, [-u, 1.0]))
        self.Q = Q
        L = params.L
        N = 16 * ((4 * L + 4 * max_power * max(n - 1, 0) + 24) // 16 + 1)
        xs = self._nodes(N)
        vals = np.array([riccati_coefficients(n, self.zero_subset, x, params).astuple() for x in xs])
        qv = np.asarray(Q(xs), complex)
        self.num, self.power = {}, {}
        for k, name in enumerate(NAMES):
            for m in range(max_power + 1):
                c = self._identify(vals[:, k] * qv ** m, N)
                if c is not None:
                    self.num[name], self.power[name] = c, m
                    break
            else:
                raise SymmetryError(f"{name}: not a (Laurent) polynomial times Q^-m for m <= {max_power}")
        # off-grid check
        rng = np.random.default_rng(11)
        for x in self._offgrid(rng, 4):
            direct = riccati_coefficients(n, self.zero_subset, x, params).astuple()
            model = self(x).astuple()
            for a, b in zip(direct, model):
                if abs(a - b) > tol * max(abs(a), 1.0):
                    raise SymmetryError(f"coefficient model off by {abs(a - b):.2e} at x={x}")

    def _nodes(self, N):
        us = self.zero_subset
        th = 2 * np.pi * (np.arange(N) + 0.25) / N
        if self.params.trig:
            for c in (0.05, 0.37, -0.29, 0.61, -0.53):
                if all(abs((c - u).real) > 0.1 for u in us):
                    self._shift = c
                    return c + 1j * th
            raise SymmetryError("no sampling line clear of the zero subset")
        R = max(1.5, 1.2 * max((abs(u) for u in us), default=0) + 0.5)
        for rr in (R, 1.17 * R, 1.41 * R):
            if all(abs(abs(u) - rr) > 0.1 for u in us):
                self._radius = rr
                return rr * np.exp(1j * th)
        raise SymmetryError("no sampling circle clear of the zero subset")

    def _offgrid(self, rng, k):
        out = []
        while len(out) < k:
            z = complex(rng.uniform(-0.9, 0.9) + 1j * rng.uniform(-0.9, 0.9))
            if all(abs(z - u) > 0.2 for u in self.zero_subset):
                out.append(z)
        return out

    def _identify(self, v, N):
        c = np.fft.fft(v) / N
        if self.params.trig:
            ks = np.fft.fftfreq(N, 1.0 / N).astype(int)
            th0 = 2 * np.pi * 0.25 / N
            c = c * np.exp(-1j * ks * th0)  # undo the quarter-step offset
            a = np.abs(c)
            sig = a > 1e-12 * a.max()
            if np.any(sig & (np.abs(ks) >= N // 2 - 2)):
                return None
            d = int(np.max(np.abs(ks[sig])))
            coeffs = np.zeros(2 * d + 1, complex)
            for k, ck in zip(ks, c):
                if abs(k) <= d:
                    coeffs[k + d] = ck * np.exp(-k * self._shift)
            return Curve(EXPONENTIAL, coeffs)
        R = self._radius
        th0 = 2 * np.pi * 0.25 / N
        c = c * np.exp(-1j * np.arange(N) * th0)
        a = np.abs(c)
        sig = np.where(a > 1e-12 * a.max())[0]
        d = int(sig.max())
        if d >= N // 2:
            return None
        return Curve(MONOMIAL, c[:d + 1] / R ** np.arange(d + 1))

    def jets(self, x, order: int = 3) -> dict:
        q = curve_jet(self.Q, x, order)
        out = {}
        for name in NAMES:
            num = curve_jet(self.num[name], x, order)
            m = self.power[name]
            out[name] = num / q ** m if m else num
        return out

    def __call__(self, x) -> OmegaValues:
        j = self.jets(x, 0)
        return OmegaValues(*(j[k].value for k in NAMES))

    def singular_points(self) -> list:
        """Zeroes of O2 Ob and of Q (where the f0 equation degenerates)."""
        pts = list(self.zero_subset)
        for name in ("ob", "o2"):
            c = self.num[name].trimmed(1e-13)
            if c.degree == 0:
                continue
            if c.basis == MONOMIAL:
                pts += list(polyroots(c.coeffs))
            else:
                pts += list(np.log(polyroots(c.coeffs).astype(complex)))
        return pts


class SampledCoefficients:
    """Pointwise coefficients with jets from Cauchy integrals (slow, generic)."""

    def __init__(self, n: int, zero_subset, params: ModelParams, r: float = 0.05, N: int = 24):
        self.n, self.params = n, params
        self.zero_subset = tuple(complex(u) for u in zero_subset)
        self.r, self.N = r, N

    def jets(self, x, order: int = 3) -> dict:
        th = 2 * np.pi * np.arange(self.N) / self.N
        v = np.array([riccati_coefficients(self.n, self.zero_subset, x + self.r * np.exp(1j * t),
                                           self.params).astuple() for t in th])
        out = {}
        for k, name in enumerate(NAMES):
            out[name] = Jet([np.mean(v[:, k] * np.exp(-1j * m * th)) / self.r ** m
                             for m in range(order + 1)])
        return out

    def __call__(self, x) -> OmegaValues:
        return riccati_coefficients(self.n, self.zero_subset, x, self.params)


class CurveCoefficients:
    """Coefficients given directly as Curves (e.g. closed forms)."""

    def __init__(self, ob: Curve, o0: Curve, o1: Curve, o2: Curve):
        self.c = dict(zip(NAMES, (ob, o0, o1, o2)))

    def jets(self, x, order: int = 3) -> dict:
        return {k: curve_jet(v, x, order) for k, v in self.c.items()}

    def __call__(self, x) -> OmegaValues:
        return OmegaValues(*(complex(self.c[k](x)) for k in NAMES))


def n1_rational_coefficients(params: ModelParams) -> CurveCoefficients:
    """n=1 rational: Ob = -lambda_-, O2 = 1, O1 = 2 lambda_+ + lambda_-',
    O0 = lambda_+^2 + lambda_+ lambda_-' - lambda_- lambda_+'."""
    if params.trig:
        raise ValueError("rational family required")
    lp, lm = lambda_pm_curve("+", params), lambda_pm_curve("-", params)
    one = Curve(MONOMIAL, [1.0])
    o0 = lp * lp + lp * lm.deriv() - lm * lp.deriv()
    return CurveCoefficients((-1) * lm, o0, 2 * lp + lm.deriv(), one)


# ---------------------------------------------------------------------------
# vector fields

def _fd_partial(f, x, lam, var, h=1e-3):
    """Five-point complex central difference."""
    def at(t):
        return f(x + t, lam) if var == "x" else f(x, lam + t)
    s = h * max(1.0, abs(x) if var == "x" else abs(lam))
    return (-at(2 * s) + 8 * at(s) - 8 * at(-s) + at(-2 * s)) / (12 * s)


class VectorField:
    """v = xi(x, L) d/dx + phi(x, L) d/dL with optional analytic partials."""

    def __init__(self, xi: Callable, phi: Callable, partials: dict | None = None, label: str = ""):
        self.xi, self.phi = xi, phi
        self.partials = partials or {}
        self.label = label

    def __call__(self, x, lam):
        return complex(self.xi(x, lam)), complex(self.phi(x, lam))

    def partial(self, comp: str, var: str, x, lam) -> complex:
        key = f"{comp}_{var}"
        if key in self.partials:
            return complex(self.partials[key](x, lam))
        f = self.xi if comp == "xi" else self.phi
        return complex(_fd_partial(f, x, lam, var))

    def apply(self, g: Callable, x, lam) -> complex:
        """v(g) for a function g(x, L)."""
        xi, phi = self(x, lam)
        return xi * _fd_partial(g, x, lam, "x") + phi * _fd_partial(g, x, lam, "L")


class AnsatzField(VectorField):
    """Minimal-form field xi = f0(x), phi = g0(x) + g1(x) L with jet components."""

    def __init__(self, f0, g0, g1, label: str = ""):
        self.f0, self.g0, self.g1 = as_jet_function(f0), as_jet_function(g0), as_jet_function(g1)
        xi = lambda x, lam: self.f0(x).value
        phi = lambda x, lam: self.g0(x).value + self.g1(x).value * lam
        partials = {
            "xi_x": lambda x, lam: self.f0(x, 1).d(1),
            "xi_L": lambda x, lam: 0j,
            "phi_x": lambda x, lam: self.g0(x, 1).d(1) + self.g1(x, 1).d(1) * lam,
            "phi_L": lambda x, lam: self.g1(x).value,
        }
        super().__init__(xi, phi, partials, label)

    @property
    def solution(self) -> "DeterminingSolution":
        return DeterminingSolution(self.f0, self.g0, self.g1)

    def scaled(self, s) -> "AnsatzField":
        sc = lambda F: JetFunction(lambda x, K: F(x, K) * s)
        return AnsatzField(sc(self.f0), sc(self.g0), sc(self.g1), self.label)


def prolong1(v: VectorField, x, lam, lam1) -> complex:
    """First prolongation coefficient phi_x + (phi_L - xi_x) L1 - xi_L L1^2."""
    px, pl = v.partial("phi", "x", x, lam), v.partial("phi", "L", x, lam)
    xx, xl = v.partial("xi", "x", x, lam), v.partial("xi", "L", x, lam)
    return complex(px + (pl - xx) * lam1 - xl * lam1 ** 2)


def commutator(v: VectorField, w: VectorField) -> VectorField:
    """[v, w] with components v(xi_w) - w(xi_v) and v(phi_w) - w(phi_v)."""
    if isinstance(v, AnsatzField) and isinstance(w, AnsatzField):
        def lift(fn):
            return JetFunction(fn)

        def xi(x, K):
            fv, fw = v.f0(x, K + 1), w.f0(x, K + 1)
            return _trunc(fv * fw.deriv() - fw * fv.deriv(), K)

        def g1(x, K):
            fv, fw = v.f0(x, K + 1), w.f0(x, K + 1)
            av, aw = v.g1(x, K + 1), w.g1(x, K + 1)
            return _trunc(fv * aw.deriv() - fw * av.deriv(), K)

        def g0(x, K):
            fv, fw = v.f0(x, K + 1), w.f0(x, K + 1)
            av, aw = v.g1(x, K + 1), w.g1(x, K + 1)
            bv, bw = v.g0(x, K + 1), w.g0(x, K + 1)
            return _trunc(fv * bw.deriv() + bv * aw - fw * bv.deriv() - bw * av, K)
        return AnsatzField(lift(xi), lift(g0), lift(g1), f"[{v.label},{w.label}]")

    def comp(c):
        def f(x, lam):
            xv, pv = v(x, lam)
            xw, pw = w(x, lam)
            return (xv * w.partial(c, "x", x, lam) + pv * w.partial(c, "L", x, lam)
                    - xw * v.partial(c, "x", x, lam) - pw * v.partial(c, "L", x, lam))
        return f
    return VectorField(comp("xi"), comp("phi"), label=f"[{v.label},{w.label}]")


def _trunc(j: Jet, K: int) -> Jet:
    return Jet(j.c[:K + 1])


# ---------------------------------------------------------------------------
# determining equations and the f0 elimination

@dataclass
class DeterminingSolution:
    f0: JetFunction
    g0: JetFunction
    g1: JetFunction


def _terms(F, G0, G1, om):
    """The three determining expressions from jets (order >= 1)."""
    ob, o0, o1, o2 = (om[k] for k in NAMES)
    f, fp = F.d(0), F.d(1)
    a, ap = G1.d(0), G1.d(1)
    b, bp = G0.d(0), G0.d(1)
    B, Bp = ob.d(0), ob.d(1)
    Z0, Z0p = o0.d(0), o0.d(1)
    Z1, Z1p = o1.d(0), o1.d(1)
    Z2, Z2p = o2.d(0), o2.d(1)
    e1 = [(fp + a) * Z2 * B, f * Z2p * B, -f * Z2 * Bp]
    e2 = [fp * Z1 * B, ap * B * B, f * Z1p * B, -f * Z1 * Bp, -2 * b * Z2 * B]
    e3 = [(fp - a) * Z0 * B, -b * Z1 * B, -bp * B * B, f * Z0p * B, -f * Z0 * Bp]
    return e1, e2, e3


def determining_residuals(sol: DeterminingSolution, coeffs, x, relative: bool = False):
    """(e1, e2, e3) of the determining system at x (relative: / largest term)."""
    F, G0, G1 = sol.f0(x, 1), sol.g0(x, 1), sol.g1(x, 1)
    om = coeffs.jets(x, 1)
    out = []
    for t in _terms(F, G0, G1, om):
        r = complex(sum(t))
        if relative:
            r = r / max(max(abs(z) for z in t), 1e-300)
        out.append(r)
    return tuple(out)


def _g1_jet(F: Jet, om: dict) -> Jet:
    ob, o2 = om["ob"], om["o2"]
    K = F.order - 1
    F, ob, o2 = _trunc(F, K + 1), _trunc(ob, K + 1), _trunc(o2, K + 1)
    out = F * (o2 * ob.deriv() - o2.deriv() * ob) / (o2 * ob)
    return _trunc(out, K) - F.deriv()


def _g0_jet(F: Jet, om: dict) -> Jet:
    K = F.order - 2
    T = lambda j, k=K + 2: _trunc(j, k)
    F = T(F)
    B, Z1, Z2 = T(om["ob"]), T(om["o1"]), T(om["o2"])
    Bp, Bpp = B.deriv(), B.deriv().deriv()
    Z1p, Z2p, Z2pp = Z1.deriv(), Z2.deriv(), Z2.deriv().deriv()
    t1 = F / (2 * Z2 * B) * (B * (Z1p + Bpp) - Bp * (Z1 + Bp)
                             + (B / Z2) ** 2 * (Z2p ** 2 - Z2 * Z2pp))
    t2 = F.deriv() / (2 * Z2 ** 2) * (Z2 * (Z1 + Bp) - B * Z2p)
    t3 = F.deriv().deriv() * B / (2 * Z2)
    return T(t1, K) + T(t2, K) - T(t3, K)


def _check_nonsingular(om, x):
    if abs(om["o2"].value * om["ob"].value) < 1e-300:
        raise ZeroDivisionError(f"O2 Ob vanishes at x={x}")


def g1_from_f0(f0, coeffs, x) -> complex:
    F = as_jet_function(f0)(x, 1)
    om = coeffs.jets(x, 2)
    _check_nonsingular(om, x)
    return _g1_jet(F, om).value


def g0_from_f0(f0, coeffs, x) -> complex:
    F = as_jet_function(f0)(x, 2)
    om = coeffs.jets(x, 3)
    _check_nonsingular(om, x)
    return _g0_jet(F, om).value


def solution_from_f0(f0, coeffs) -> DeterminingSolution:
    """Complete (f0, g0, g1) from f0 through the elimination formulas."""
    f0 = as_jet_function(f0)

    def g1(x, K):
        om = coeffs.jets(x, K + 2)
        return _g1_jet(f0(x, K + 1), om)

    def g0(x, K):
        om = coeffs.jets(x, K + 3)
        return _g0_jet(f0(x, K + 2), om)
    return DeterminingSolution(f0, JetFunction(g0), JetFunction(g1))


def upsilon(coeffs, x, corrected: bool = True):
    """(U0, U1) of the f0 equation.

    corrected=False evaluates U0 exactly as usually displayed (with the
    undefined symbol O3 read as Ob); that form has the wrong sign on its last
    bracket, which corrected=True fixes.  U1 is the same in both.
    """
    U0, U1 = _upsilon_jets(coeffs.jets(x, 3), 0, corrected)
    return U0.value, U1.value


def f0_ode_residual(f0, coeffs, x, corrected: bool = True) -> complex:
    """U0 f0 + U1 f0' - (O2 Ob)^3 f0''' at x."""
    F = as_jet_function(f0)(x, 3)
    U0, U1 = upsilon(coeffs, x, corrected)
    v = coeffs(x)
    return complex(U0 * F.d(0) + U1 * F.d(1) - (v.o2 * v.ob) ** 3 * F.d(3))


def on_surface_residual(v: VectorField, coeffs, x, lam) -> float:
    """|v1(Sigma)| / scale with L1 eliminated through Sigma = 0."""
    om = coeffs.jets(x, 1)
    B, Z0, Z1, Z2 = (om[k] for k in NAMES)
    lam1 = (Z0.value - Z1.value * lam + Z2.value * lam ** 2) / B.value
    xi, phi = v(x, lam)
    p1 = prolong1(v, x, lam, lam1)
    terms = [xi * B.d(1) * lam1, -xi * Z0.d(1), xi * Z1.d(1) * lam, -xi * Z2.d(1) * lam ** 2,
             phi * Z1.value, -2 * phi * Z2.value * lam, p1 * B.value]
    return float(abs(sum(terms)) / max(max(abs(t) for t in terms), 1e-300))


# ---------------------------------------------------------------------------
# integration of the f0 equation

def _series_f0(y, A: Jet, Bj: Jet, K: int) -> Jet:
    """Taylor series of a solution of f''' = A f + B f' from (f, f', f'')."""
    a = np.zeros(K + 4, complex)
    a[0], a[1], a[2] = y[0], y[1], y[2] / 2
    Ac = np.concatenate([A.c, np.zeros(K + 1)])
    Bc = np.concatenate([Bj.c, np.zeros(K + 1)])
    for k in range(K + 1):
        s = sum(Ac[j] * a[k - j] for j in range(k + 1))
        s += sum(Bc[j] * (k - j + 1) * a[k - j + 1] for j in range(k + 1))
        a[k + 3] = s / ((k + 3) * (k + 2) * (k + 1))
    return Jet(a[:K + 1])


def _ab_jets(coeffs, x, K, corrected=True):
    """Jets of A = U0/D and B = U1/D with D = (O2 Ob)^3."""
    om = coeffs.jets(x, K + 3)
    Bm, Z0, Z1, Z2 = (om[k] for k in NAMES)
    D = (Z2 * Bm) ** 3
    U0, U1 = _upsilon_jets(om, K, corrected)
    return _trunc(U0 / _trunc(D, K), K), _trunc(U1 / _trunc(D, K), K)


def _upsilon_jets(om, K, corrected=True):
    """U0, U1 as jets of order K (needs coefficient jets of order K + 3)."""
    B, Z0, Z1, Z2 = (om[k] for k in NAMES)
    d = lambda j, m: _nder(j, m, K)
    b, b1, b2, b3 = d(B, 0), d(B, 1), d(B, 2), d(B, 3)
    o0, o0p = d(Z0, 0), d(Z0, 1)
    o1, o1p, o1pp = d(Z1, 0), d(Z1, 1), d(Z1, 2)
    o2, o2p, o2pp, o2ppp = d(Z2, 0), d(Z2, 1), d(Z2, 2), d(Z2, 3)
    o3, o3p, o3pp = b, b1, b2
    last = (b1 ** 3 - 2 * b * b1 * b2 - o1 ** 2 * b1 - b * o1p * b1 + o1 * b * o1p
            - 2 * o0 * b * o2p + b ** 2 * o1pp + b ** 2 * b3)
    U0 = (2 * o2 ** 4 * (2 * o0 * b1 - b * o0p) - 3 * b ** 3 * o2p ** 3
          + o2 * b ** 2 * o2p * (o1 * o2p + b1 * o2p + 4 * o3 * o2pp)
          - o2 ** 2 * b * (b * (o2p * b2 + b1 * o2pp + o1p * o2p + o1 * o2pp)
                           - o2p * b1 * (b1 + o1) + o2ppp * b ** 2)
          + (1 if corrected else -1) * o2 ** 3 * last)
    U1 = o2 * o3 * (2 * o3 * o2 ** 2 * o1p - o2 ** 2 * o3p ** 2 - 2 * o1 * o3 * o2 * o2p
                    - 2 * o3 * o2 * o2p * o3p + 3 * o3 ** 2 * o2p ** 2 + 2 * o3 * o2 ** 2 * o3pp
                    - 2 * o3 ** 2 * o2 * o2pp - 4 * o0 * o2 ** 3 + o1 ** 2 * o2 ** 2)
    return U0, U1


def _nder(j: Jet, m: int, K: int) -> Jet:
    for _ in range(m):
        j = j.deriv()
    return _trunc(j, K)


@dataclass
class SymmetrySolutions:
    fields: list
    x0: complex
    span: float
    wronskian: list
    trace: list = field(default_factory=list)

    def grid(self, k: int = 7):
        return [self.x0 + t for t in np.linspace(0.1, self.span - 0.1, k)]


def _segment_distance(x0, span, p):
    t = min(max((p - x0).real, 0.0), span)
    return abs(x0 + t - p)


def choose_interval(coeffs, span: float = 2.0, clearance: float = 0.3) -> complex:
    """Start x0 of a horizontal segment [x0, x0+span] clear of singular points."""
    pts = coeffs.singular_points() if hasattr(coeffs, "singular_points") else []
    cands = [0.3, 0.7, 1.1, -2.7, 1.6, -3.4, 2.2, 3.0, -4.5]
    shifts = [0.0, 0.35j, -0.35j, 0.7j, -0.7j]
    for s in shifts:
        for c in cands:
            x0 = c + s
            if all(_segment_distance(x0, span, p) >= clearance for p in pts):
                return complex(x0)
    raise SymmetryError("no integration segment clear of coefficient poles")


def solve_symmetries(coeffs, x0=None, span: float = 2.0, rtol: float = 1e-12,
                     atol: float = 1e-14) -> SymmetrySolutions:
    """Integrate the f0 equation from the three canonical initial conditions.

    DOP853 (8th order, adaptive) along x = x0 + t, t in [0, span].  Each
    solution f0 yields an AnsatzField via the elimination formulas.
    """
    x0 = choose_interval(coeffs, span) if x0 is None else complex(x0)

    def rhs(t, y):
        x = x0 + t
        A, B = _ab_jets(coeffs, x, 0)
        return [y[1], y[2], A.value * y[0] + B.value * y[1]]

    sols = []
    for k in range(3):
        y0 = np.zeros(3, complex)
        y0[k] = 1.0
        r = solve_ivp(rhs, (0.0, span), y0, method="DOP853", rtol=rtol, atol=atol, dense_output=True)
        if not r.success:
            raise SymmetryError(f"integration failed: {r.message} (steps {len(r.t)})")
        sols.append(r)

    def make_f0(r):
        def fn(x, K):
            t = (x - x0)
            if abs(t.imag) > 1e-12 or not -1e-9 <= t.real <= span + 1e-9:
                raise ValueError(f"x={x} outside the integration segment")
            y = r.sol(t.real)
            A, B = _ab_jets(coeffs, x, max(K - 3, 0))
            return _series_f0(y, A, B, K)
        return JetFunction(fn)

    fields, wr = [], []
    for k, r in enumerate(sols):
        sol = solution_from_f0(make_f0(r), coeffs)
        fields.append(AnsatzField(sol.f0, sol.g0, sol.g1, label=f"v{k}"))
    for t in np.linspace(0, span, 5):
        W = np.array([r.sol(t) for r in sols]).T
        wr.append(complex(np.linalg.det(W)))
    if min(abs(w) for w in wr) < 1e-10:
        raise SymmetryError("solutions became linearly dependent on the segment")
    return SymmetrySolutions(fields, x0, span, wr, [len(r.t) for r in sols])


# ---------------------------------------------------------------------------
# algebra classification

@dataclass
class AlgebraReport:
    n: int
    structure_constants: np.ndarray  # C[i, j, k]: [v_i, v_j] = sum_k C[i,j,k] v_k
    closure_residual: float
    killing_rank: int
    killing: np.ndarray
    verdict: str
    basis_rank: int

    def to_dict(self) -> dict:
        pair = lambda z: [float(z.real), float(z.imag)]
        return {"n": self.n,
                "structure_constants": [[[pair(c) for c in row] for row in plane]
                                        for plane in self.structure_constants],
                "closure_residual": float(self.closure_residual),
                "killing_rank": int(self.killing_rank), "verdict": self.verdict}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _stack(v, grid):
    vals = [v(x, lam) for x, lam in grid]
    return np.array([a for a, _ in vals] + [b for _, b in vals], complex)


def classify_algebra(fields, grid, n: int = 0) -> AlgebraReport:
    """Fit structure constants on grid points and classify the algebra."""
    fields = list(fields)
    m = len(fields)
    Bm = np.array([_stack(v, grid) for v in fields]).T
    sv = np.linalg.svd(Bm, compute_uv=False)
    rank = int(np.sum(sv > 1e-9 * sv[0])) if sv[0] > 0 else 0
    C = np.zeros((m, m, m), complex)
    worst = 0.0
    for i in range(m):
        for j in range(i + 1, m):
            c = _stack(commutator(fields[i], fields[j]), grid)
            a, *_ = np.linalg.lstsq(Bm, c, rcond=None)
            res = np.linalg.norm(Bm @ a - c) / max(np.linalg.norm(c), sv[0] * 1e-12, 1e-300)
            worst = max(worst, float(res))
            C[i, j], C[j, i] = a, -a
    ad = [C[i].T for i in range(m)]  # (ad_i)[k, j] = C[i, j, k]
    K = np.array([[np.trace(ad[a] @ ad[b]) for b in range(m)] for a in range(m)])
    ks = np.linalg.svd(K, compute_uv=False)
    krank = int(np.sum(ks > 1e-8 * max(ks[0], 1e-300))) if ks[0] > 1e-12 * max(np.abs(C).max(), 1e-300) else 0
    if rank < m:
        verdict = "inconclusive"
    elif worst < 1e-5 and m == 3 and krank == 3:
        verdict = "sl2"
    else:
        verdict = "other"
    return AlgebraReport(n, C, worst, krank, K, verdict, rank)


def default_grid(xs, lams=(0.3 - 0.2j, -0.7 + 0.4j, 1.1 + 0.1j, 0.2 + 0.9j, -0.4 - 0.6j)):
    return [(complex(x), complex(l)) for x in xs for l in lams]


# ---------------------------------------------------------------------------
# closed-form generators

def generators_n1(params: ModelParams):
    """(X+, X-, H) for sector n=1 of the rational model."""
    if params.trig:
        raise ValueError("closed-form n=1 generators are given for the rational family")
    lp, lm = lambda_pm_curve("+", params), lambda_pm_curve("-", params)

    def parts(x, K):
        X = Jet.variable(x, K)
        P, M = curve_jet(lp, x, K + 1), curve_jet(lm, x, K + 1)
        Pp, Mp = _trunc(P.deriv(), K), _trunc(M.deriv(), K)
        P, M = _trunc(P, K), _trunc(M, K)
        r = Mp / M
        return X, P, M, Pp, r

    def jf(expr):
        return JetFunction(lambda x, K: expr(*parts(x, K)))

    xp = AnsatzField(jf(lambda X, P, M, Pp, r: Jet.constant(-1j, X.order)),
                     jf(lambda X, P, M, Pp, r: -1j * (Pp - P * r)),
                     jf(lambda X, P, M, Pp, r: -1j * r), "X+")
    xm = AnsatzField(jf(lambda X, P, M, Pp, r: -1j * X * X),
                     jf(lambda X, P, M, Pp, r: -1j * (M + X * X * Pp - X * P * (X * r - 2))),
                     jf(lambda X, P, M, Pp, r: -1j * X * (X * r - 2)), "X-")
    h = AnsatzField(jf(lambda X, P, M, Pp, r: -2 * X),
                    jf(lambda X, P, M, Pp, r: -2 * (X * Pp - P * (X * r - 1))),
                    jf(lambda X, P, M, Pp, r: -2 * (X * r - 1)), "H")
    return xp, xm, h


class GeneratorSet(tuple):
    """(X+, X-, H) with an attached consistency report."""

    def __new__(cls, fields, report=None):
        obj = super().__new__(cls, fields)
        obj.report = report
        return obj


@dataclass
class DiscrepancyReport:
    u1: complex
    determining_max: dict
    on_surface_max: dict
    projection_residual: dict
    passed: bool
    note: str

    def to_dict(self) -> dict:
        return {"u1": [float(self.u1.real), float(self.u1.imag)],
                "determining_max": {k: float(v) for k, v in self.determining_max.items()},
                "on_surface_max": {k: float(v) for k, v in self.on_surface_max.items()},
                "projection_residual": {k: float(v) for k, v in self.projection_residual.items()},
                "passed": bool(self.passed), "note": self.note}


def generators_n2(u1, params: ModelParams, check: bool = True, tol: float = 1e-6,
                  h_from_bracket: bool = False) -> GeneratorSet:
    """Closed-form (X+, X-, H) for sector n=2 of the rational model.

    With check=True the fields are tested against the determining equations
    built from the n=2 coefficients with zero subset {u1}; the result carries
    a DiscrepancyReport comparing their xi components with the span of
    integrated f0 solutions.  The closed-form phi of H does not satisfy the
    determining equations while X+ and X- do; h_from_bracket=True replaces H
    by [X+, X-], whose xi agrees with the closed-form xi of H.
    """
    if params.trig:
        raise ValueError("closed-form n=2 generators are given for the rational family")
    u1 = complex(u1)
    lp, lm = lambda_pm_curve("+", params), lambda_pm_curve("-", params)
    LPu, LMu = complex(lp(u1)), complex(lm(u1))

    def comp(key, idx):
        def fn(x, K):
            X = Jet.variable(x, K)
            P, M = curve_jet(lp, x, K + 1), curve_jet(lm, x, K + 1)
            out = n2_components(X, u1, _trunc(P, K), _trunc(M, K), _trunc(P.deriv(), K),
                                _trunc(M.deriv(), K), LPu, LMu)[key][idx]
            return out if isinstance(out, Jet) else Jet.constant(out, K)
        return JetFunction(fn)

    fields = [AnsatzField(comp(k, 0), comp(k, 1), comp(k, 2), lab)
              for k, lab in (("+", "X+"), ("-", "X-"), ("H", "H"))]
    bracket = commutator(fields[0], fields[1])
    if h_from_bracket:
        fields[2] = AnsatzField(bracket.f0, bracket.g0, bracket.g1, "H")
    if not check:
        return GeneratorSet(fields)
    coeffs = FittedCoefficients(2, [u1], params)
    sym = solve_symmetries(coeffs)
    xs = sym.grid(7)
    det, surf, proj = {}, {}, {}
    basis = np.array([[f.f0.value(x) for f in sym.fields] for x in xs])
    for f in fields:
        det[f.label] = max(max(abs(r) for r in determining_residuals(f.solution, coeffs, x, True))
                           for x in xs)
        surf[f.label] = max(on_surface_residual(f, coeffs, x, lam) for x, lam in default_grid(xs[::2]))
        target = np.array([f.f0.value(x) for x in xs])
        a, *_ = np.linalg.lstsq(basis, target, rcond=None)
        proj[f.label] = float(np.linalg.norm(basis @ a - target) / max(np.linalg.norm(target), 1e-300))
    ok = max(det.values()) < tol
    bad = sorted(k for k, v in det.items() if v >= tol)
    xi_gap = max(abs(bracket.f0.value(x) - fields[2].f0.value(x)) / max(abs(fields[2].f0.value(x)), 1e-300)
                 for x in xs)
    det["[X+,X-]"] = max(max(abs(r) for r in determining_residuals(bracket.solution, coeffs, x, True))
                         for x in xs)
    if ok:
        note = "closed forms satisfy the determining equations"
    else:
        note = (f"closed forms of {', '.join(bad)} violate the determining equations; "
                f"xi of [X+,X-] matches xi of H to {xi_gap:.1e} and [X+,X-] solves the "
                "determining equations, so the defect sits in phi; the integrated fields "
                "from solve_symmetries span the same algebra")
    return GeneratorSet(fields, DiscrepancyReport(u1, det, surf, proj, ok, note))


# ---------------------------------------------------------------------------
# finite map of X+

def x_plus_map(Lam, alpha, params: ModelParams) -> JetFunction:
    """Image of a solution under exp(alpha X+), as a function of the new x:

        Lbar(y) = [Lam(y + i a) - lp(y + i a)] lm(y) / lm(y + i a) + lp(y).
    """
    lp, lm = lambda_pm_curve("+", params), lambda_pm_curve("-", params)
    F = as_jet_function(Lam.curve if hasattr(Lam, "curve") else Lam)
    s = 1j * complex(alpha)

    def fn(y, K):
        P1, M1 = curve_jet(lp, y + s, K), curve_jet(lm, y + s, K)
        return (F(y + s, K) - P1) * curve_jet(lm, y, K) / M1 + curve_jet(lp, y, K)
    return JetFunction(fn)


def riccati_residual_jet(F: JetFunction, coeffs, x) -> float:
    """Relative residual Ob F' - O0 + O1 F - O2 F^2 for a jet function F."""
    J = F(x, 1)
    v = coeffs(x)
    t = [v.ob * J.d(1), -v.o0, v.o1 * J.value, -v.o2 * J.value ** 2]
    return float(abs(sum(t)) / max(max(abs(z) for z in t), 1e-300))

