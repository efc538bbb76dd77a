"""The X+ spectral map on sector n=1 of the rational model and its cycles.

    K1(Lam)(x) = [Lam(x + i a) - lp(x + i a)] lm(x) / lm(x + i a) + lp(x)

is a rational function of x; it is a polynomial (and then again an
eigenvalue) only when its residues at the roots of lm(x + i a) vanish.  For
two zeroes w_l, w_m of lm this happens for a = i (w_l - w_m) provided
Lam(w_l) = lp(w_l) and Lam(w_m) != lp(w_m).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .eigen import polyroots
from .model_core import MONOMIAL, Curve, ModelParams, lambda_pm_curve
from .report import fmt_complex
from .transfer_oracle import diagonalize_sector

GENERIC_ALPHA = 1.0  # representative label for the alpha-independent fixed point


class ResidueObstructionError(ArithmeticError):
    def __init__(self, msg, residues):
        super().__init__(msg)
        self.residues = residues


def _require(params: ModelParams):
    if params.trig:
        raise ValueError("the n=1 spectral map is implemented for the rational family")


def shift_curve(c: Curve, s: complex) -> Curve:
    """p(x + s) for a monomial-basis curve."""
    p = np.asarray(c.coeffs, complex)
    d = len(p) - 1
    out = np.zeros(d + 1, complex)
    for k in range(d + 1):
        out[k] = sum(comb(j, k) * p[j] * s ** (j - k) for j in range(k, d + 1))
    return Curve(MONOMIAL, out)


@dataclass
class K1Image:
    numerator: Curve
    denominator: Curve
    poles: np.ndarray
    residues: np.ndarray
    scale: float
    tol: float = 1e-8

    def __call__(self, x):
        return self.numerator(x) / self.denominator(x)

    @property
    def is_polynomial(self) -> bool:
        return bool(np.all(np.abs(self.residues) < self.tol * self.scale))

    def curve(self) -> Curve:
        if not self.is_polynomial:
            bad = [(complex(p), complex(r)) for p, r in zip(self.poles, self.residues)
                   if abs(r) >= self.tol * self.scale]
            raise ResidueObstructionError(f"image is not a polynomial; nonzero residues {bad}", bad)
        q, _ = np.polydiv(self.numerator.coeffs[::-1], self.denominator.coeffs[::-1])
        return Curve(MONOMIAL, q[::-1]).trimmed(1e-13)


def k1_apply(Lam, alpha, params: ModelParams, tol: float = 1e-8) -> K1Image:
    """Image of an n=1 eigenvalue curve under the X+ map with parameter alpha."""
    _require(params)
    c = Lam.curve if hasattr(Lam, "curve") else Lam
    s = 1j * complex(alpha)
    lp, lm = lambda_pm_curve("+", params), lambda_pm_curve("-", params)
    lms = shift_curve(lm, s)
    num = (shift_curve(c, s) - shift_curve(lp, s)) * lm + lp * lms
    den = lms.trimmed(1e-14)
    poles = polyroots(den.coeffs) if den.degree > 0 else np.zeros(0, complex)
    dden = den.deriv()
    res = np.array([num(p) / dden(p) for p in poles], complex)
    scale = max(num.scale() / max(den.scale(), 1e-300), 1e-300)
    return K1Image(num, den, np.asarray(poles), res, scale, tol)


@dataclass
class AlphaCandidate:
    alpha: complex
    w_source: complex
    w_target: complex
    source_gap: float
    target_gap: float


def lambda_minus_zeroes(params: ModelParams) -> np.ndarray:
    lm = lambda_pm_curve("-", params).trimmed(1e-14)
    return np.asarray(polyroots(lm.coeffs))


def admissible_alphas(Lam, params: ModelParams, eq_tol: float = 1e-8, ne_tol: float = 1e-4):
    """All alpha = i (w_l - w_m) passing the selection rules for Lam."""
    _require(params)
    lp = lambda_pm_curve("+", params)
    c = Lam.curve if hasattr(Lam, "curve") else Lam
    ws = lambda_minus_zeroes(params)
    gaps = []
    for w in ws:
        scale = max(abs(lp(w)), abs(c(w)), 1.0)
        gaps.append(float(abs(c(w) - lp(w)) / scale))
    out = []
    for l, wl in enumerate(ws):
        for m, wm in enumerate(ws):
            if l == m:
                continue
            if gaps[l] < eq_tol and gaps[m] > ne_tol:
                out.append(AlphaCandidate(complex(1j * (wl - wm)), complex(wl), complex(wm), gaps[l], gaps[m]))
    return out


@dataclass
class CycleGraph:
    params: ModelParams
    nodes: list                       # SpectralCurve per node, canonical order
    edges: list = field(default_factory=list)   # (src, dst, alpha, generic)
    dropped: list = field(default_factory=list)  # (src, alpha, reason)

    def edge_set(self):
        return {(s, d) for s, d, _, _ in self.edges}

    def to_dot(self) -> str:
        lines = ["digraph cycles {"]
        for s, d, a, _ in self.edges:
            lines.append(f'  "L{s}" -> "L{d}" [label="alpha={fmt_complex(a)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {"nodes": [{"label": f"L{i}", "coeffs": n.curve.to_list()} for i, n in enumerate(self.nodes)],
                "edges": [{"src": f"L{s}", "dst": f"L{d}", "alpha": [a.real, a.imag], "generic": g}
                          for s, d, a, g in self.edges],
                "dropped": [{"src": f"L{s}", "alpha": [a.real, a.imag], "reason": r}
                            for s, a, r in self.dropped]}


def _snap(a: complex, rel: float = 1e-12) -> complex:
    """Zero out rounding noise in a component of alpha."""
    tol = rel * max(abs(a), 1.0)
    re = 0.0 if abs(a.real) < tol else a.real
    im = 0.0 if abs(a.imag) < tol else a.imag
    return complex(re, im)


def _match(curve: Curve, nodes, tol=1e-8):
    for j, n in enumerate(nodes):
        if curve.distance(n.curve) < tol:
            return j
    return None


def build_cycle_graph(params: ModelParams, nodes=None, tol: float = 1e-8, n_generic: int = 5) -> CycleGraph:
    """Nodes: sector-1 eigenvalues; edges: verified admissible alpha maps."""
    _require(params)
    nodes = diagonalize_sector(params, 1) if nodes is None else nodes
    g = CycleGraph(params, nodes)
    lp = lambda_pm_curve("+", params)
    rng = np.random.default_rng(5)
    for i, node in enumerate(nodes):
        if node.curve.distance(lp) < tol:
            # fixed for every alpha: verify on random alphas, emit one loop
            ok = True
            for a in list(rng.normal(size=n_generic) + 1j * rng.normal(size=n_generic)):
                img = k1_apply(node, a, params)
                if not img.is_polynomial or img.curve().distance(node.curve) >= tol:
                    ok = False
            if ok:
                g.edges.append((i, i, complex(GENERIC_ALPHA), True))
            else:
                g.dropped.append((i, complex(GENERIC_ALPHA), "lambda_+ not fixed"))
            continue
        for cand in admissible_alphas(node, params):
            img = k1_apply(node, cand.alpha, params)
            if not img.is_polynomial:
                g.dropped.append((i, cand.alpha, "nonzero residues"))
                continue
            j = _match(img.curve(), nodes, tol)
            if j is None:
                g.dropped.append((i, cand.alpha, "image is not a sector eigenvalue"))
                continue
            g.edges.append((i, j, _snap(cand.alpha), False))
    g.edges.sort(key=lambda e: (e[0], e[1], round(e[2].real, 9), round(e[2].imag, 9)))
    return g
