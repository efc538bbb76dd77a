"""Zero-based description of the spectrum.

An eigenvalue of sector n is written through its L zeroes,

    Lambda(x) = Lambda0 prod_j sinh(u_j - x) / sinh(u_j)     (trigonometric)
    Lambda(x) = Lambda0 prod_j (u_j - x) / u_j              (rational),

so that dLambda = -Lambda F(x) with F the log-derivative sum.  Substituting
into the Riccati equation gives the quadratic relation

    O2 Lambda^2 + (Ob F - O1) Lambda + O0 = 0,

where the coefficients depend on a subset of n-1 zeroes.  Two subsets
eliminate Lambda^2 and give Lambda as a ratio of 2x2 minors.  The x -> +-inf
asymptotics fix Lambda0 and one further condition on S = sum(u_j - mu_j).
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .functional_system import CoincidentPointsError, riccati_coefficients
from .model_core import EXPONENTIAL, MONOMIAL, Curve, ModelParams

SAMPLE_SEED = 0xBE7A
ISOLATION_TOL = 1e-4   # Jacobian ratio below which a square solve is retried on the rotated system
NONISOLATED_TOL = 1e-6  # ... and below which a root is reported as non-isolated


class NormalizationError(ValueError):
    pass


class DegeneratePairError(ValueError):
    pass


class ConditioningError(ArithmeticError):
    pass


class SingularityError(ArithmeticError):
    pass


class NonConvergenceError(ArithmeticError):
    def __init__(self, msg, trace=None):
        super().__init__(msg)
        self.trace = trace or []


def _sep(a, b, params):
    return np.sinh(a - b) if params.trig else a - b


# ---------------------------------------------------------------------------
# product representation

def product_representation(lambda0, zeroes, params: ModelParams) -> Curve:
    """Expanded curve of Lambda0 prod (zero factors), normalised to Lambda(0) = Lambda0."""
    us = [complex(u) for u in zeroes]
    if params.trig:
        out = Curve(EXPONENTIAL, [complex(lambda0)])
        for u in us:
            s = np.sinh(u)
            if abs(s) < 1e-14:
                raise NormalizationError(f"zero {u} is in i*pi*Z; cannot normalise at x=0")
            # sinh(u - x) = (e^u e^{-x} - e^{-u} e^x) / 2
            out = out * Curve(EXPONENTIAL, [np.exp(u) / (2 * s), 0, -np.exp(-u) / (2 * s)])
        return out
    out = Curve(MONOMIAL, [complex(lambda0)])
    for u in us:
        if abs(u) < 1e-14:
            raise NormalizationError("zero at x=0; cannot normalise at x=0")
        out = out * Curve(MONOMIAL, [1.0, -1.0 / u])
    return out


def product_value(x, lambda0, zeroes, params: ModelParams) -> complex:
    if params.trig:
        return complex(lambda0 * np.prod([np.sinh(u - x) / np.sinh(u) for u in zeroes]))
    return complex(lambda0 * np.prod([(u - x) / u for u in zeroes]))


def log_derivative_sum(x, zeroes, params: ModelParams) -> complex:
    """F(x) = sum coth(u - x) (trigonometric) or sum 1/(u - x) (rational)."""
    tot = 0j
    for u in zeroes:
        d = _sep(u, x, params)
        if abs(d) < 1e-14:
            raise CoincidentPointsError(f"x={x} hits zero {u}")
        tot += np.cosh(u - x) / d if params.trig else 1.0 / d
    return complex(tot)


# ---------------------------------------------------------------------------
# quadratic form and reconstruction

def _quad(om, lam, F):
    return om.o2 * lam * lam + (om.ob * F - om.o1) * lam + om.o0


def _quad_scale(om, lam, F):
    return max(abs(om.o2 * lam * lam), abs(om.ob * F * lam), abs(om.o1 * lam), abs(om.o0), 1e-300)


def quadratic_residual(Lam, zero_subset, x, params: ModelParams, zeroes=None,
                       relative: bool = False) -> complex:
    """O2 Lam^2 + (Ob F - O1) Lam + O0 at x.

    F is built from ``zeroes`` (defaults to Lam.zeroes).  With relative=True
    the residual is divided by its largest term.
    """
    zs = Lam.zeroes if zeroes is None else zeroes
    om = riccati_coefficients(len(zero_subset) + 1, zero_subset, x, params)
    lam = complex(Lam(x))
    F = log_derivative_sum(x, zs, params)
    r = _quad(om, lam, F)
    return complex(r / _quad_scale(om, lam, F)) if relative else complex(r)


def delta_minors(x, subset_m, subset_mbar, params: ModelParams):
    """(D12, D13, D23) built from the coefficients of two subsets at x."""
    if sorted(map(complex, subset_m), key=lambda z: (z.real, z.imag)) == \
            sorted(map(complex, subset_mbar), key=lambda z: (z.real, z.imag)):
        raise DegeneratePairError("the two subsets coincide; all minors vanish")
    n = len(subset_m) + 1
    a = riccati_coefficients(n, subset_m, x, params)
    b = riccati_coefficients(n, subset_mbar, x, params)
    d12 = a.ob * b.o2 - b.ob * a.o2
    d13 = a.o1 * b.o2 - b.o1 * a.o2
    d23 = a.o0 * b.o2 - b.o0 * a.o2
    return d12, d13, d23


def reconstruct_lambda(x, subset_pair, zeroes, params: ModelParams) -> complex:
    """Lambda(x) = D23 / (D13 - F D12) from a pair of distinct subsets."""
    m, mbar = subset_pair
    d12, d13, d23 = delta_minors(x, m, mbar, params)
    F = log_derivative_sum(x, zeroes, params)
    den = d13 - F * d12
    scale = max(abs(d13), abs(F * d12), abs(d23), 1e-300)
    if abs(den) < 1e-12 * scale:
        raise ConditioningError(f"reconstruction denominator {abs(den):.2e} vanishes at x={x}")
    return complex(d23 / den)


# ---------------------------------------------------------------------------
# asymptotic conditions

def lambda0_from_zeroes(zeroes, params: ModelParams, n: int) -> complex:
    """Lambda(0) fixed by the x -> +-inf asymptotics of sector n."""
    us = np.asarray(zeroes, complex)
    L = params.L
    if params.trig:
        g, mu = params.gamma, np.asarray(params.mu, complex)
        pref = params.phi1 * np.exp((L - n) * g) + params.phi2 * np.exp(n * g)
        return complex((-1) ** L * pref * np.prod(np.exp(us - mu) * np.sinh(us)))
    return complex((-1) ** L * (params.phi1 + params.phi2) * np.prod(us))


def asymptotic_condition(zeroes, params: ModelParams, n: int) -> complex:
    """Second asymptotic condition on S = sum(u_j - mu_j).

    Trigonometric: phi1 sinh((L-n)g + S) + phi2 sinh(n g + S) = 0, replaced by
    exp(2 n g + 2 S) - 1 = 0 when L = 2n (the generic form then factorises
    as (phi1 + phi2) sinh(n g + S)).  Rational:
    (phi1 + phi2) S + phi1 (L - n) + phi2 n = 0.
    """
    L = params.L
    S = complex(np.sum(np.asarray(zeroes, complex) - np.asarray(params.mu, complex)))
    p1, p2 = params.phi1, params.phi2
    if params.trig:
        g = params.gamma
        if L == 2 * n:
            return complex(np.exp(2 * n * g + 2 * S) - 1)
        return complex(p1 * np.sinh((L - n) * g + S) + p2 * np.sinh(n * g + S))
    return complex((p1 + p2) * S + p1 * (L - n) + p2 * n)


def boundary_conditions(zeroes, lambda0, params: ModelParams, n: int):
    """Residual pair (Lambda0 condition relative, asymptotic condition)."""
    l0 = lambda0_from_zeroes(zeroes, params, n)
    r1 = (complex(lambda0) - l0) / max(abs(lambda0), 1e-300)
    return complex(r1), asymptotic_condition(zeroes, params, n)


def quoted_phi_ratio(S, params: ModelParams) -> complex:
    """phi1/phi2 = -sinh(2g + S) / sinh((L-2)g + S), the n=2 form of the condition.

    Vanishes at S = -2g, which would demand phi1 = 0.
    """
    g, L = params.gamma, params.L
    return complex(-np.sinh(2 * g + S) / np.sinh((L - 2) * g + S))


def quoted_half_filling_variant(zeroes, params: ModelParams) -> complex:
    """|exp(4g - 2S) - 1| as usually quoted for L = 4 (sign of S is off)."""
    S = np.sum(np.asarray(zeroes, complex) - np.asarray(params.mu, complex))
    return complex(np.exp(4 * params.gamma - 2 * S) - 1)


# ---------------------------------------------------------------------------
# Newton solver

def sample_points(k: int, avoid=(), params: ModelParams | None = None, seed: int = SAMPLE_SEED):
    """k fixed pseudo-random complex points kept 1e-3 away from ``avoid``."""
    rng = np.random.default_rng(seed)
    pts = []
    while len(pts) < k:
        z = complex(rng.uniform(-0.8, 0.8) + 1j * rng.uniform(-0.8, 0.8))
        if params is not None and params.trig:
            far = all(abs(np.sinh(z - u)) > 1e-3 for u in avoid)
        else:
            far = all(abs(z - u) > 1e-3 for u in avoid)
        if far and abs(z) > 1e-3:
            pts.append(z)
    return pts


@dataclass
class ZeroSystem:
    """Square system for the zeroes of one sector-n eigenvalue.

    Unknowns u_1..u_L; Lambda0 is eliminated through the asymptotic
    formula.  Equations: the quadratic relation (subset = first n-1
    unknowns) at L-1 sample points, plus the asymptotic condition on S.
    With rotate=True every point carries the relation for all L cyclic
    subsets (u_k..u_{k+n-2}), giving an overdetermined system.
    """
    params: ModelParams
    n: int
    points: list = field(default_factory=list)
    scales: np.ndarray | None = None
    rotate: bool = False

    def __post_init__(self):
        if not 1 <= self.n <= self.params.L:
            raise ValueError(f"sector n={self.n} outside 1..{self.params.L}")

    def raw(self, us) -> np.ndarray:
        us = np.asarray(us, complex)
        p, n = self.params, self.n
        l0 = lambda0_from_zeroes(us, p, n)
        L = len(us)
        if self.rotate and n >= 2:
            subsets = [[us[(k + j) % L] for j in range(n - 1)] for k in range(L)]
        else:
            subsets = [us[:n - 1]]
        out = []
        for x in self.points:
            lam = product_value(x, l0, us, p)
            F = log_derivative_sum(x, us, p)
            for sub in subsets:
                om = riccati_coefficients(n, sub, x, p)
                out.append((_quad(om, lam, F), _quad_scale(om, lam, F)))
        out.append((asymptotic_condition(us, p, n), 1.0))
        return np.array(out)

    def fix_scales(self, us):
        self.scales = np.abs(self.raw(us)[:, 1]).astype(float)

    def __call__(self, us) -> np.ndarray:
        r = self.raw(us)
        sc = self.scales if self.scales is not None else np.abs(r[:, 1])
        return r[:, 0] / sc

    def jacobian(self, us, h: float = 1e-6) -> np.ndarray:
        us = np.asarray(us, complex)
        J = np.zeros((len(self(us)), len(us)), complex)
        for j in range(len(us)):
            e = np.zeros(len(us), complex)
            e[j] = h * max(1.0, abs(us[j]))
            J[:, j] = (self(us + e) - self(us - e)) / (2 * e[j])
        return J


@dataclass
class SolverReport:
    converged: bool
    iterations: int
    zeroes: list
    residual: float
    heldout_max: float
    lambda0: complex = 0j
    trace: list = field(default_factory=list)
    isolation: float = float("nan")   # sigma_min / sigma_max of the Jacobian at the result

    @property
    def isolated(self) -> bool:
        return not self.isolation < NONISOLATED_TOL

    def to_dict(self) -> dict:
        return {"converged": bool(self.converged), "iterations": int(self.iterations),
                "zeroes": [[float(u.real), float(u.imag)] for u in self.zeroes],
                "residual": float(self.residual), "heldout_max": float(self.heldout_max),
                "isolation": float(self.isolation)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_distinct(us, params):
    for i, j in itertools.combinations(range(len(us)), 2):
        if abs(_sep(us[i], us[j], params)) < 1e-12:
            raise SingularityError(f"seed zeroes {i} and {j} coincide; Jacobian is singular")


def heldout_checks(zeroes, params: ModelParams, n: int, k: int = 3, seed: int = 1) -> float:
    """Max relative violation of redundant instances not used in the solve.

    n >= 2: Lambda0 from the asymptotic formula against the two-subset
    reconstruction at x = 0 for k random relabellings and subset pairs.
    n = 1 (a single empty subset): the quadratic relation at k fresh points.
    """
    us = np.asarray(zeroes, complex)
    L = len(us)
    rng = np.random.default_rng(seed)
    l0 = lambda0_from_zeroes(us, params, n)
    worst = 0.0
    subsets = list(itertools.combinations(range(L), n - 1))
    if n >= 2 and len(subsets) >= 2:
        for _ in range(k):
            perm = rng.permutation(L)
            v = us[perm]
            i, j = rng.choice(len(subsets), size=2, replace=False)
            pair = ([v[t] for t in subsets[i]], [v[t] for t in subsets[j]])
            rec = reconstruct_lambda(0.0, pair, v, params)
            worst = max(worst, abs(rec - l0) / max(abs(l0), 1e-300))
    else:
        for x in sample_points(k, us, params, seed=seed):
            om = riccati_coefficients(n, us[:n - 1], x, params)
            lam = product_value(x, l0, us, params)
            F = log_derivative_sum(x, us, params)
            worst = max(worst, abs(_quad(om, lam, F)) / _quad_scale(om, lam, F))
    return float(worst)


def _make_system(params, n, us, rotate):
    k = 2 * (params.L - 1) if rotate else params.L - 1
    sysm = ZeroSystem(params, n, sample_points(k, us, params), rotate=rotate)
    sysm.fix_scales(us)
    return sysm


def solve_zeroes(params: ModelParams, n: int, seed, tol: float = 1e-10, maxiter: int = 40,
                 heldout: bool = True, overdetermine: bool | None = None) -> SolverReport:
    """Damped Newton (Armijo backtracking, factor 0.5) from the seed zeroes.

    The square system is used unless its Jacobian at the seed is worse
    conditioned than 1e-4 (or overdetermine=True); the rotated-subset system
    is then solved by Gauss-Newton steps.  With overdetermine=None a square
    solve that fails, violates the held-out checks or ends on a
    non-isolated solution (Jacobian ratio < ISOLATION_TOL) is retried on
    the rotated-subset system.
    """
    us = np.array(seed, complex)
    if len(us) != params.L:
        raise ValueError(f"seed must have L={params.L} entries")
    _check_distinct(us, params)
    rotate = bool(overdetermine)
    sysm = _make_system(params, n, us, rotate)
    J = sysm.jacobian(us)
    if overdetermine is None and n >= 2 and not rotate:
        sv = np.linalg.svd(J, compute_uv=False)
        if sv[-1] < ISOLATION_TOL * sv[0]:
            return solve_zeroes(params, n, seed, tol, maxiter, heldout, True)
    try:
        rep = _newton(sysm, us, J, params, n, tol, maxiter, rotate)
    except NonConvergenceError:
        if overdetermine is None and n >= 2:
            return solve_zeroes(params, n, seed, tol, maxiter, heldout, True)
        raise
    if heldout or (overdetermine is None and n >= 2):
        rep.heldout_max = heldout_checks(rep.zeroes, params, n)
        retry = rep.heldout_max > 1e-7 or rep.isolation < ISOLATION_TOL
        if retry and overdetermine is None and n >= 2:
            return solve_zeroes(params, n, seed, tol, maxiter, heldout, True)
    return rep


def _newton(sysm, us, J, params, n, tol, maxiter, rotate) -> SolverReport:
    F = sysm(us)
    nrm = float(np.linalg.norm(F))
    trace = [nrm]
    it = 0
    cap = 0.1 * max(1.0, float(np.max(np.abs(us))))
    while nrm >= tol:
        if it >= maxiter:
            raise NonConvergenceError(f"no convergence in {maxiter} iterations (|F|={nrm:.2e})", trace)
        if it:
            J = sysm.jacobian(us)
        sv = np.linalg.svd(J, compute_uv=False)
        if sv[-1] < 1e-13 * max(sv[0], 1e-300):
            raise SingularityError(f"rank-deficient Jacobian (cond {sv[0] / max(sv[-1], 1e-300):.1e})")
        dv = np.linalg.lstsq(J, -F, rcond=None)[0]
        big = float(np.max(np.abs(dv)))
        if big > cap:  # trust-region cap keeps the iterate in the seed's basin
            dv *= cap / big
        t = 1.0
        while True:
            cand = us + t * dv
            try:
                Fc = sysm(cand)
                nc = float(np.linalg.norm(Fc))
            except (CoincidentPointsError, ZeroDivisionError, FloatingPointError):
                nc = np.inf
            if nc <= (1 - 1e-4 * t) * nrm or t < 1e-4:
                break
            t *= 0.5
        if not np.isfinite(nc):
            raise NonConvergenceError("line search left the domain", trace)
        us, F, nrm = cand, Fc, nc
        it += 1
        trace.append(nrm)
        # re-draw sample points that drifted onto a zero
        if any(abs(_sep(x, u, params)) < 1e-3 for x in sysm.points for u in us):
            sysm = _make_system(params, n, us, rotate)
            F = sysm(us)
            nrm = float(np.linalg.norm(F))
    # polish: a small residual still allows an error of |F|/sigma_min in u
    for _ in range(5):
        try:
            dv = np.linalg.lstsq(sysm.jacobian(us), -F, rcond=None)[0]
            cand = us + dv
            Fc = sysm(cand)
            nc = float(np.linalg.norm(Fc))
        except (np.linalg.LinAlgError, CoincidentPointsError, ZeroDivisionError):
            break
        if not nc < nrm:
            break
        us, F, nrm = cand, Fc, nc
        if np.max(np.abs(dv)) < 1e-14 * max(1.0, float(np.max(np.abs(us)))):
            break
    try:
        sv = np.linalg.svd(sysm.jacobian(us), compute_uv=False)
        iso = float(sv[-1] / max(sv[0], 1e-300))
    except (np.linalg.LinAlgError, CoincidentPointsError, ZeroDivisionError):
        iso = 0.0
    if params.trig:
        im = (us.imag + np.pi / 2) % np.pi - np.pi / 2
        us = us.real + 1j * im
    return SolverReport(True, it, list(us), nrm, float("nan"), lambda0_from_zeroes(us, params, n), trace, iso)


def match_zero_sets(a, b, params: ModelParams) -> float:
    """Max distance between two zero multisets (mod i pi for trig), greedy."""
    a, b = list(map(complex, a)), list(map(complex, b))
    if len(a) != len(b):
        return np.inf
    worst = 0.0
    for u in a:
        if params.trig:
            d = [abs(np.exp(2 * (u - v)) - 1) for v in b]
        else:
            d = [abs(u - v) for v in b]
        k = int(np.argmin(d))
        worst = max(worst, d[k])
        b.pop(k)
    return float(worst)
