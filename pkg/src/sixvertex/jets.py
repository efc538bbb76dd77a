"""Truncated Taylor series (jets) in one complex variable.

A Jet of order K at x0 stores c_k = f^(k)(x0) / k! for k = 0..K.  Arithmetic
follows the usual truncated power-series rules, so derivatives of composite
expressions come out exactly from the derivatives of their parts.
"""
from __future__ import annotations

from math import factorial

import numpy as np


class Jet:
    __array_priority__ = 1000  # make numpy scalars defer to Jet operators

    def __init__(self, coeffs):
        self.c = np.asarray(coeffs, dtype=complex)

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @classmethod
    def variable(cls, x0, order: int) -> "Jet":
        c = np.zeros(order + 1, complex)
        c[0] = x0
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @classmethod
    def constant(cls, v, order: int) -> "Jet":
        c = np.zeros(order + 1, complex)
        c[0] = v
        return cls(c)

    @classmethod
    def from_derivs(cls, derivs) -> "Jet":
        return cls([d / factorial(k) for k, d in enumerate(derivs)])

    def d(self, m: int = 0) -> complex:
        """m-th derivative at the expansion point."""
        return complex(self.c[m] * factorial(m)) if m <= self.order else 0j

    @property
    def value(self) -> complex:
        return complex(self.c[0])

    def derivs(self):
        return [self.d(m) for m in range(self.order + 1)]

    def deriv(self) -> "Jet":
        """Jet of f' (one order lower)."""
        k = np.arange(1, len(self.c))
        return Jet(self.c[1:] * k) if len(self.c) > 1 else Jet([0j])

    # arithmetic ---------------------------------------------------------
    def _lift(self, o) -> "Jet":
        if isinstance(o, Jet):
            return o
        return Jet.constant(o, self.order)

    def _match(self, o):
        o = self._lift(o)
        K = min(self.order, o.order)
        return self.c[:K + 1], o.c[:K + 1]

    def __add__(self, o):
        a, b = self._match(o)
        return Jet(a + b)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.c)

    def __sub__(self, o):
        a, b = self._match(o)
        return Jet(a - b)

    def __rsub__(self, o):
        a, b = self._match(o)
        return Jet(b - a)

    def __mul__(self, o):
        if not isinstance(o, Jet):
            return Jet(self.c * complex(o))
        a, b = self._match(o)
        return Jet(np.convolve(a, b)[:len(a)])

    __rmul__ = __mul__

    def __truediv__(self, o):
        if not isinstance(o, Jet):
            return Jet(self.c / complex(o))
        a, b = self._match(o)
        if b[0] == 0:
            raise ZeroDivisionError("jet division by a series vanishing at the expansion point")
        q = np.zeros_like(a)
        for k in range(len(a)):
            q[k] = (a[k] - np.dot(b[1:k + 1], q[k - 1::-1][:k])) / b[0]
        return Jet(q)

    def __rtruediv__(self, o):
        return self._lift(o) / self

    def __pow__(self, p: int):
        if int(p) != p:
            raise ValueError("only integer powers of jets are supported")
        p = int(p)
        if p < 0:
            return 1.0 / (self ** (-p))
        out = Jet.constant(1.0, self.order)
        base = self
        while p:
            if p & 1:
                out = out * base
            base = base * base
            p >>= 1
        return out

    def __repr__(self):
        return f"Jet({np.array2string(self.c, precision=6)})"


def curve_jet(curve, x0, order: int) -> Jet:
    """Jet of a model_core.Curve at x0."""
    return Jet.from_derivs([complex(curve.deriv(m)(x0)) for m in range(order + 1)])


