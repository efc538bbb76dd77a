"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run under pytest (lines are printed with capture disabled) or directly:
    python tests/test_acceptance.py
"""
import itertools
import json
import os
import sys
import time
from functools import lru_cache

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from sixvertex.cli import main  # noqa: E402
from sixvertex.functional_system import normalized_compatibility_det, riccati_coefficients, riccati_residual  # noqa: E402
from sixvertex.lie_symmetry import (FittedCoefficients, classify_algebra, commutator, default_grid,  # noqa: E402
                                    determining_residuals, f0_ode_residual, generators_n1,
                                    n1_rational_coefficients, riccati_residual_jet, solve_symmetries, upsilon,
                                    x_plus_map)
from sixvertex.model_core import ModelParams, lambda_pm_curve  # noqa: E402
from sixvertex.riccati_forms import alt_riccati_residual, coeffs_n1, coeffs_n2  # noqa: E402
from sixvertex.spectral_maps import admissible_alphas, build_cycle_graph, k1_apply  # noqa: E402
from sixvertex.transfer_oracle import build_sector_matrix, diagonalize_sector, full_transfer_matrix  # noqa: E402
from sixvertex.zero_solver import (boundary_conditions, heldout_checks, match_zero_sets,  # noqa: E402
                                   reconstruct_lambda, solve_zeroes)

from conftest import TABLE, rational_params, table_curves, table_labels, table_params, trig_params  # noqa: E402

LS = (1, 2, 3, 4, 5)
FAMILIES = ("rational", "trigonometric")
S1, S2 = np.sqrt(1 - 2 / np.sqrt(5)), np.sqrt(1 + 2 / np.sqrt(5))
# alpha_ij keyed by table rows (i, j); alpha_ji = -alpha_ij
ALPHAS = {
    3: {(1, 2): 1 / np.sqrt(3)},
    4: {(1, 2): -0.5, (1, 3): 0.5, (2, 3): 1.0},
    5: {(1, 2): -S1, (2, 3): (S1 + S2) / 2, (1, 3): -(S1 - S2) / 2,
        (2, 4): (S1 - S2) / 2, (1, 4): -(S1 + S2) / 2, (3, 4): -S2},
}


@lru_cache(maxsize=None)
def params(fam, L):
    return trig_params(L, seed=L) if fam == "trigonometric" else rational_params(L, seed=L)


@lru_cache(maxsize=None)
def sector(fam, L, n):
    return tuple(diagonalize_sector(params(fam, L), n))


def all_eigenvalues():
    for fam in FAMILIES:
        for L in LS:
            for n in range(1, L + 1):
                for i, Lam in enumerate(sector(fam, L, n)):
                    yield fam, L, n, i, Lam


def _pts(rng, k):
    return rng.uniform(-0.8, 0.8, k) + 1j * rng.uniform(-0.8, 0.8, k)


def _coeff_rel(got, want):
    got, want = np.asarray(got, complex), np.asarray(want, complex)
    if len(got) != len(want):
        return np.inf
    ref = np.where(want != 0, np.abs(want), np.max(np.abs(want)))
    return float(np.max(np.abs(got - want) / ref))


def check_ac1():
    """Reference sector-1 spectra via the spectrum command."""
    t0 = time.perf_counter()
    worst = 0.0
    import contextlib
    import io
    for L in (3, 4, 5):
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["spectrum", "--family", "rational", "--phi1", "1", "--phi2", "1",
                         "--mu", ",".join(["0"] * L), "--sector", "1"])
        if code != 0:
            return False, f"L={L}: exit code {code}"
        curves = [np.array([complex(*c) for c in cv["coeffs"]]) for cv in json.loads(buf.getvalue())["curves"]]
        for row in TABLE[L]:
            worst = max(worst, min(_coeff_rel(c, row) for c in curves))
    dt = time.perf_counter() - t0
    return worst < 1e-8 and dt < 5, f"max coefficient rel err {worst:.1e}, runtime {dt:.2f}s (< 5s)"


def check_ac2():
    """Compatibility determinant at 10 point tuples per eigenvalue."""
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst, count = 0.0, 0
    for fam, L, n, _, Lam in all_eigenvalues():
        for _ in range(10):
            worst = max(worst, normalized_compatibility_det(_pts(rng, n + 1), Lam, params(fam, L)))
        count += 1
    dt = time.perf_counter() - t0
    return worst < 1e-7 and dt < 60, f"{count} eigenvalues, max normalized |det| {worst:.1e}, runtime {dt:.1f}s (< 60s)"


def check_ac3():
    """Riccati residual from the determinant coefficients, 20 points per eigenvalue."""
    rng = np.random.default_rng(3)
    worst, count = 0.0, 0
    for fam, L, n, _, Lam in all_eigenvalues():
        p = params(fam, L)
        subs = itertools.cycle(list(itertools.combinations(Lam.zeroes, n - 1)))
        for x in _pts(rng, 20):
            _, rel = riccati_residual(Lam, riccati_coefficients(n, next(subs), x, p), x)
            worst = max(worst, rel)
            count += 1
    return worst < 1e-6, f"{count} points, max relative residual {worst:.1e}"


def _rel_tuple(a, b):
    return max(abs(x - y) / max(abs(x), abs(y), 1e-300) for x, y in zip(a, b))


def check_ac4():
    """Closed n=1/n=2 coefficients and the alternative n=2 form."""
    rng = np.random.default_rng(4)
    c1 = c2 = alt = 0.0
    for L in (2, 3, 4, 5):
        p = params("trigonometric", L)
        for x in _pts(rng, 10):
            c1 = max(c1, _rel_tuple(coeffs_n1(x, p), riccati_coefficients(1, [], x, p).astuple()))
        u1 = complex(_pts(rng, 1)[0]) * 0.6
        for x in _pts(rng, 10):
            c2 = max(c2, _rel_tuple(coeffs_n2(x, u1, p), riccati_coefficients(2, [u1], x, p).astuple()))
    for L in (2, 3, 4):
        for p in (params("trigonometric", L), ModelParams("trigonometric", gamma=0.4, L=L)):
            for Lam in diagonalize_sector(p, 2):
                for x in _pts(rng, 5):
                    alt = max(alt, alt_riccati_residual(Lam, x, p)[1])
    ok = c1 < 1e-8 and c2 < 1e-8 and alt < 1e-6
    return ok, f"n=1 coeff rel {c1:.1e}, n=2 coeff rel {c2:.1e}, alternative n=2 residual {alt:.1e}"


def check_ac5():
    """Boundary conditions, Newton reconvergence, held-out relations, reconstruction."""
    rng = np.random.default_rng(5)
    bc = dist = held = rec = 0.0
    bad = []
    for fam, L, n, i, Lam in all_eigenvalues():
        p = params(fam, L)
        us = np.asarray(Lam.zeroes)
        bc = max(bc, *map(abs, boundary_conditions(us, Lam.lambda0, p, n)))
        seed = us + 0.01 * np.maximum(np.abs(us), 0.1) * np.exp(2j * np.pi * rng.uniform(size=L))
        try:
            r = solve_zeroes(p, n, seed)
            d, h = match_zero_sets(r.zeroes, us, p), r.heldout_max
        except ArithmeticError as e:
            d, h = np.inf, np.inf
            bad.append(f"{fam[:4]} L={L} n={n} #{i}: {type(e).__name__}")
        if d > 1e-10 or h > 1e-7:
            bad.append(f"{fam[:4]} L={L} n={n} #{i}: dist {d:.1e} heldout {h:.1e}")
        dist, held = max(dist, d), max(held, h)
        if 2 <= n:
            pairs = list(itertools.combinations(itertools.combinations(range(L), n - 1), 2))
            for k, x in enumerate(_pts(rng, 10)):
                a, b = pairs[k % len(pairs)]
                v = reconstruct_lambda(x, ([us[t] for t in a], [us[t] for t in b]), us, p)
                rec = max(rec, abs(v - Lam(x)) / abs(Lam(x)))
    ok = bc < 1e-8 and dist < 1e-10 and held < 1e-7 and rec < 1e-6
    detail = (f"boundary {bc:.1e}, Newton max dist {dist:.1e}, held-out {held:.1e}, reconstruction {rec:.1e}"
              + (f"; failures: {'; '.join(bad)}" if bad else ""))
    return ok, detail


XS = [0.1 * k + 0.05j for k in range(5)]


def check_ac6():
    """sl(2) for n=1: determining equations, brackets on a 5x5 grid, X+ map."""
    p = params("rational", 3)
    c = n1_rational_coefficients(p)
    xp, xm, h = generators_n1(p)
    det = max(abs(r) for v in (xp, xm, h) for x in XS for r in determining_residuals(v.solution, c, x, True))
    grid = default_grid(XS)
    brk = 0.0
    for lhs, rhs in ((commutator(xp, xm), lambda x, l: h(x, l)),
                     (commutator(h, xp), lambda x, l: 2 * np.asarray(xp(x, l))),
                     (commutator(h, xm), lambda x, l: -2 * np.asarray(xm(x, l)))):
        for x, l in grid:
            a, b = np.asarray(lhs(x, l)), np.asarray(rhs(x, l))
            brk = max(brk, float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1.0)))
    xpm = 0.0
    for Lam in diagonalize_sector(p, 1):
        for a in (0.37, -0.21 + 0.1j):
            F = x_plus_map(Lam, a, p)
            for x in (0.31 + 0.2j, -0.4 + 0.15j):
                xpm = max(xpm, riccati_residual_jet(F, c, x))
    ok = det < 1e-9 and brk < 1e-9 and xpm < 1e-6 and len(grid) == 25
    return ok, f"determining {det:.1e}, brackets {brk:.1e} on {len(grid)} points, X+ map residual {xpm:.1e}"


def check_ac7():
    """Upsilon_0/1, f0 in {1, x, x^2}, integrated n=2 fields."""
    p = params("rational", 3)
    c = n1_rational_coefficients(p)
    ups = f0r = 0.0
    for x in XS:
        scale = abs(c(x).ob) ** 3
        ups = max(ups, *(abs(u) / scale for u in upsilon(c, x)))
        for f0 in (lambda z: 1.0 + 0 * z, lambda z: z, lambda z: z * z):
            f0r = max(f0r, abs(f0_ode_residual(f0, c, x)) / scale)
    u1 = complex(np.random.default_rng(7).uniform(-0.8, 0.8, 2) @ [1, 1j])
    coeffs = FittedCoefficients(2, [u1], p)
    sym = solve_symmetries(coeffs)
    xs = sym.grid(5)
    det = max(abs(r) for v in sym.fields for x in xs for r in determining_residuals(v.solution, coeffs, x, True))
    rep = classify_algebra(sym.fields, default_grid(xs), 2)
    ok = (ups < 1e-8 and f0r < 1e-8 and len(sym.fields) == 3 and det < 1e-6 and rep.verdict == "sl2"
          and rep.closure_residual < 1e-5 and rep.killing_rank == 3)
    return ok, (f"Upsilon {ups:.1e}, f0 residual {f0r:.1e}; u1={u1:.3f}: {len(sym.fields)} fields, "
                f"determining {det:.1e}, closure {rep.closure_residual:.1e}, Killing rank {rep.killing_rank}, "
                f"verdict {rep.verdict}")


def check_ac8():
    """Admissible alpha sets, cycle graph structures, lambda_+ fixed point."""
    t0 = time.perf_counter()
    errs, notes = [], []
    aerr = 0.0
    for L in (3, 4, 5):
        p = table_params(L)
        g = build_cycle_graph(p)
        lab = table_labels(g.nodes, L)
        got = sorted(a.alpha.real for n in g.nodes for a in admissible_alphas(n, p))
        imag = max((abs(a.alpha.imag) for n in g.nodes for a in admissible_alphas(n, p)), default=0.0)
        want = sorted({round(s * v, 12) for v in ALPHAS[L].values() for s in (1, -1)})
        uniq = sorted({round(a, 9) for a in got})
        if len(uniq) != len(want):
            errs.append(f"L={L}: alpha set {uniq}")
        else:
            aerr = max(aerr, imag, *(min(abs(a - w) for a in got) for w in want))
        rows = {(lab[s], lab[d]): a for s, d, a, gen in g.edges if not gen}
        loops = [(lab[s], lab[d]) for s, d, a, gen in g.edges if gen]
        edges = {}
        for (a, b), v in ALPHAS[L].items():
            edges[(a, b)], edges[(b, a)] = v, -v
        if g.dropped or loops != [(0, 0)] or set(rows) != set(edges) or any(
                abs(rows[k] - v) > 1e-10 for k, v in edges.items()):
            errs.append(f"L={L}: graph structure differs")
        notes.append(f"L={L} {len(rows)} edges")
        lp = lambda_pm_curve("+", p)
        rng = np.random.default_rng(L)
        for a in rng.normal(size=5) + 1j * rng.normal(size=5):
            if k1_apply(lp, a, p).curve().distance(lp) > 1e-8:
                errs.append(f"L={L}: lambda_+ not fixed at alpha={a:.3f}")
    dt = time.perf_counter() - t0
    ok = not errs and aerr < 1e-10 and dt < 30
    return ok, f"alpha err {aerr:.1e}, {', '.join(notes)}, runtime {dt:.1f}s (< 30s)" + (
        f"; {'; '.join(errs)}" if errs else "")


def check_ac9():
    """Commutation, block diagonality, trace identity, no shared zeroes."""
    rng = np.random.default_rng(9)
    com = blk = tr = 0.0
    gap = np.inf
    for fam in FAMILIES:
        for L in LS:
            p = params(fam, L)
            x, y = _pts(rng, 2)
            for n in range(L + 1):
                A, B = build_sector_matrix(p, n, x).entries, build_sector_matrix(p, n, y).entries
                com = max(com, np.linalg.norm(A @ B - B @ A) / (np.linalg.norm(A) * np.linalg.norm(B)))
            T = full_transfer_matrix(p, x)
            mag = np.array([bin(s).count("1") for s in range(2 ** L)])
            blk = max(blk, np.linalg.norm(T[mag[:, None] != mag[None, :]]) / np.linalg.norm(T))
            total = sum(c(x) for n in range(L + 1) for c in sector(fam, L, n))
            tr = max(tr, abs(total - np.trace(T)) / abs(np.trace(T)))
            for n in range(1, L + 1):
                for a, b in itertools.combinations(sector(fam, L, n), 2):
                    if a.curve.distance(b.curve) < 1e-8:
                        continue
                    gap = min(gap, min(match_zero_sets([u], [v], p) for u in a.zeroes for v in b.zeroes))
    ok = com < 1e-10 and blk < 1e-12 and tr < 1e-9 and gap > 1e-6
    return ok, f"commutation {com:.1e}, block {blk:.1e}, trace {tr:.1e}, min root distance {gap:.1e}"


CHECKS = [check_ac1, check_ac2, check_ac3, check_ac4, check_ac5, check_ac6, check_ac7, check_ac8, check_ac9]


def _line(k, ok, detail):
    return f"AC{k} {'PASS' if ok else 'FAIL'}: {detail}"


@pytest.mark.parametrize("k", range(1, 10))
def test_acceptance(k, capsys):
    ok, detail = CHECKS[k - 1]()
    with capsys.disabled():
        print("\n" + _line(k, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    fails = 0
    for k, chk in enumerate(CHECKS, 1):
        ok, detail = chk()
        fails += not ok
        print(_line(k, ok, detail), flush=True)
    sys.exit(1 if fails else 0)
