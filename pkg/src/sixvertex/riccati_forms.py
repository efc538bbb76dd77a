"""Closed-form Riccati coefficients for the trigonometric model.

* ``coeffs_n1``   - sector n=1 coefficients in terms of lambda_+/-.
* ``coeffs_n2``   - sector n=2 coefficients depending on one zero u1.
* ``alt_riccati_residual`` - the n=2 equation obtained by sending the
  third specialisation point to 0 instead of a zero of Lambda:

      Jb dLambda + K+ Lambda^2 + J1 Lambda + J0 = 0.

The derivatives of lambda_+/- are taken analytically from their exponential
expansions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model_core import ModelParams, lambda_pm_curve


class PoleError(ZeroDivisionError):
    pass


def _require_trig(params: ModelParams):
    if not params.trig:
        raise ValueError("closed forms are implemented for the trigonometric family; "
                         "use functional_system.riccati_coefficients for the rational model")


@dataclass
class _Lams:
    lp: complex
    lm: complex
    dlp: complex
    dlm: complex


def _lams(x, params) -> _Lams:
    cp = lambda_pm_curve("+", params)
    cm = lambda_pm_curve("-", params)
    return _Lams(complex(cp(x)), complex(cm(x)), complex(cp.deriv()(x)), complex(cm.deriv()(x)))


def coeffs_n1(x, params: ModelParams):
    """(Ob, O0, O1, O2) for sector n=1."""
    _require_trig(params)
    g = params.gamma
    sh, ch = np.sinh(g), np.cosh(g)
    v = _lams(x, params)
    ob = -sh * v.lm
    o0 = (ch * v.lp) ** 2 - (sh * v.lm) ** 2 + sh * ch * (v.lp * v.dlm - v.lm * v.dlp)
    o1 = 2 * ch * v.lp + sh * v.dlm
    return complex(ob), complex(o0), complex(o1), 1.0 + 0j


@dataclass
class ClosedFormN2:
    u1: complex
    params: ModelParams

    def __post_init__(self):
        _require_trig(self.params)
        cp = lambda_pm_curve("+", self.params)
        cm = lambda_pm_curve("-", self.params)
        self.lplus = complex(cp(self.u1))
        self.lminus = complex(cm(self.u1))

    def P(self, y):
        g = self.params.gamma
        return self.lplus * np.cosh(2 * g) * np.sinh(y) + self.lminus * np.sinh(2 * g) * np.cosh(y)

    def Q(self, x):
        g, d = self.params.gamma, self.u1 - x
        return (self.lplus * np.cosh(2 * g) * np.sinh(2 * d)
                + self.lminus * np.sinh(2 * g) * np.cosh(2 * d))

    def __call__(self, x):
        g = self.params.gamma
        sh, ch = np.sinh(g), np.cosh(g)
        s2, c2 = np.sinh(2 * g), np.cosh(2 * g)
        Lp, Lm = self.lplus, self.lminus
        d = self.u1 - x
        S = np.sinh(d)
        if abs(S) < 1e-13:
            raise PoleError(f"x={x} coincides with u1 (mod i pi)")
        v = _lams(x, self.params)
        A = np.sinh(d + g) ** 2
        B = np.sinh(-d + g) ** 2
        ob = (sh ** 2 / (4 * S ** 2) * ((Lp + Lm) * np.sinh(2 * (d + g)) + (Lm - Lp) * np.sinh(2 * (-d + g))) * v.lp
              - s2 / (4 * S ** 2) * ((Lp + Lm) * A + (Lp - Lm) * B) * v.lm)
        o0 = (2 * Lp * (sh * ch * v.lm / S) ** 2
              + v.lp / S * (c2 * v.lp + sh * ch * v.dlm) * self.P(d)
              - sh * ch * v.lm / S * (self.P(2 * d) * v.lp / S + self.P(d) * v.dlp))
        o1 = (-self.Q(x) / (2 * S ** 2) * (s2 * v.lm + sh ** 2 * v.dlp)
              + v.lp / S ** 2 * (Lp * c2 * (ch ** 2 * np.cosh(2 * d) - 1) + Lm * s2 * ch ** 2 * np.sinh(2 * d))
              + s2 * v.dlm / (4 * S ** 2) * (Lp * (A + B) + Lm * s2 * np.sinh(2 * d)))
        o2 = ((Lp + Lm) * A + (Lp - Lm) * B) / (2 * S ** 2)
        return complex(ob), complex(o0), complex(o1), complex(o2)


def coeffs_n2(x, u1, params: ModelParams):
    """(Ob, O0, O1, O2) for sector n=2 with Lambda(u1) = 0."""
    return ClosedFormN2(complex(u1), params)(x)


@dataclass
class AltFormN2:
    """Coefficients of the n=2 equation specialised at the origin.

    ``printed_j1`` reproduces the J1 combination as it is usually quoted;
    the default J1 is the one that actually follows from the compatibility
    determinant (sign of the K- term flipped, K+ dlambda_- weighted by
    sinh(g)cosh(g) instead of 1/2).
    """
    lambda0: complex
    params: ModelParams
    printed_j1: bool = False

    def __post_init__(self):
        _require_trig(self.params)
        self.mplus = complex(lambda_pm_curve("+", self.params)(0.0))
        self.mminus = complex(lambda_pm_curve("-", self.params)(0.0))

    def K(self, x):
        g = self.params.gamma
        mp, mm, L0 = self.mplus, self.mminus, self.lambda0
        s2g, c2g = np.sinh(2 * g), np.cosh(2 * g)
        kp = mp * (np.cosh(2 * x) * c2g - 1) - mm * s2g * np.sinh(2 * x) - 2 * L0 * np.sinh(x) ** 2
        km = mp * np.sinh(2 * x) * c2g - mm * s2g * np.cosh(2 * x) - L0 * np.sinh(2 * x)
        k0 = 2 * mp * c2g * np.sinh(x) ** 2 - mm * s2g * np.sinh(2 * x) + L0 * (c2g - np.cosh(2 * x))
        return kp, km, k0

    def __call__(self, x):
        """(Jb, K+, J1, J0) at x."""
        g = self.params.gamma
        sh, ch = np.sinh(g), np.cosh(g)
        s2g, c2g = np.sinh(2 * g), np.cosh(2 * g)
        mp, mm, L0 = self.mplus, self.mminus, self.lambda0
        v = _lams(x, self.params)
        kp, km, k0 = self.K(x)
        jb = v.lp * sh ** 2 * km + v.lm * sh * ch * kp
        tail = 2 * v.lp * (c2g * (mp * (1 - ch ** 2 * np.cosh(2 * x)) - L0)
                           + ch ** 2 * (L0 * np.cosh(2 * x) + mm * s2g * np.sinh(2 * x)))
        if self.printed_j1:
            j1 = km * (s2g * v.lm + sh ** 2 * v.dlp) - 0.5 * kp * v.dlm + tail
        else:
            j1 = -km * (s2g * v.lm + sh ** 2 * v.dlp) - sh * ch * kp * v.dlm + tail
        j0 = ((mp - L0) * s2g ** 2 * v.lm ** 2
              + (c2g * v.lp + sh * ch * v.dlm) * v.lp * k0
              + sh * ch * v.lm * (2 * v.lp * km - k0 * v.dlp))
        return complex(jb), complex(kp), complex(j1), complex(j0)


def alt_riccati_residual(Lam, x, params: ModelParams, printed_j1: bool = False):
    """Residual of the origin-specialised n=2 equation and its relative size.

    Lam is a SpectralCurve (provides value, derivative and lambda0).
    """
    form = AltFormN2(Lam.lambda0, params, printed_j1)
    jb, kp, j1, j0 = form(x)
    l, dl = complex(Lam(x)), complex(Lam.deriv(x))
    terms = [jb * dl, kp * l * l, j1 * l, j0]
    r = sum(terms)
    return complex(r), float(abs(r) / max(max(abs(t) for t in terms), 1e-300))
