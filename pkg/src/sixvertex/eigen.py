"""Small dense complex eigen-solver and polynomial root finder.

The matrices met in this package are at most 64 x 64, so a plain
Householder-Hessenberg reduction followed by single-shift complex QR
(Wilkinson shifts, Givens sweeps) is fast enough and keeps the oracle
self-contained.  Eigenvectors come from back-substitution on the Schur
form.  ``polyroots`` is an Aberth-Ehrlich simultaneous iteration.
"""
from __future__ import annotations

import numpy as np


class EigenError(ArithmeticError):
    pass


def hessenberg(A):
    """Return (H, Q) with A = Q H Q^H and H upper Hessenberg."""
    H = np.array(A, dtype=complex)
    n = H.shape[0]
    Q = np.eye(n, dtype=complex)
    for k in range(n - 2):
        x = H[k + 1:, k].copy()
        alpha = np.linalg.norm(x)
        if alpha == 0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x
        v[0] += phase * alpha
        v /= np.linalg.norm(v)
        H[k + 1:, :] -= 2.0 * np.outer(v, v.conj() @ H[k + 1:, :])
        H[:, k + 1:] -= 2.0 * np.outer(H[:, k + 1:] @ v, v.conj())
        Q[:, k + 1:] -= 2.0 * np.outer(Q[:, k + 1:] @ v, v.conj())
        H[k + 2:, k] = 0
    return H, Q


def _givens(a, b):
    r = np.hypot(abs(a), abs(b))
    if r == 0:
        return 1.0, 0.0
    c = abs(a) / r
    s = (a / abs(a) if a != 0 else 1.0) * np.conj(b) / r
    return c, s


def schur(A, maxiter: int = 100):
    """Complex Schur decomposition A = Z T Z^H via shifted QR."""
    H, Z = hessenberg(A)
    n = H.shape[0]
    eps = np.finfo(float).eps
    hi = n - 1
    it = 0
    while hi > 0:
        # find active block [lo, hi]
        lo = hi
        while lo > 0:
            sub = abs(H[lo, lo - 1])
            if sub <= eps * (abs(H[lo, lo]) + abs(H[lo - 1, lo - 1])):
                H[lo, lo - 1] = 0
                break
            lo -= 1
        if lo == hi:
            hi -= 1
            it = 0
            continue
        it += 1
        if it > maxiter:
            raise EigenError(f"QR iteration did not converge (block {lo}..{hi})")
        # Wilkinson shift from trailing 2x2
        a, b = H[hi - 1, hi - 1], H[hi - 1, hi]
        c, d = H[hi, hi - 1], H[hi, hi]
        tr, det = a + d, a * d - b * c
        disc = np.sqrt(tr * tr / 4 - det)
        m1, m2 = tr / 2 + disc, tr / 2 - disc
        mu = m1 if abs(m1 - d) < abs(m2 - d) else m2
        if it % 11 == 0:
            mu = d + abs(H[hi, hi - 1]) * (0.75 + 0.5j)  # exceptional shift
        # implicit single-shift sweep on H[lo:hi+1, lo:hi+1]
        for k in range(lo, hi):
            if k == lo:
                x, y = H[lo, lo] - mu, H[lo + 1, lo]
            else:
                x, y = H[k, k - 1], H[k + 1, k - 1]
            cs, sn = _givens(x, y)
            G = np.array([[cs, sn], [-np.conj(sn), cs]], dtype=complex)
            j0 = max(lo, k - 1)
            H[k:k + 2, j0:] = G @ H[k:k + 2, j0:]
            if k > lo:
                H[k + 1, k - 1] = 0
            top = min(hi, k + 2) + 1
            H[:top, k:k + 2] = H[:top, k:k + 2] @ G.conj().T
            Z[:, k:k + 2] = Z[:, k:k + 2] @ G.conj().T
    return np.triu(H), Z


def eig(A):
    """Eigenvalues and right eigenvectors (columns, unit norm)."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    if n == 1:
        return A[0].copy(), np.ones((1, 1), complex)
    T, Z = schur(A)
    w = np.diag(T).copy()
    scale = max(np.max(np.abs(T)), 1e-300)
    small = np.finfo(float).eps * scale
    Y = np.zeros((n, n), dtype=complex)
    for k in range(n):
        y = np.zeros(n, dtype=complex)
        y[k] = 1.0
        for i in range(k - 1, -1, -1):
            den = T[i, i] - w[k]
            if abs(den) < small:
                den = small
            y[i] = -(T[i, i + 1:k + 1] @ y[i + 1:k + 1]) / den
        Y[:, k] = y / np.linalg.norm(y)
    V = Z @ Y
    V /= np.linalg.norm(V, axis=0)
    return w, V


def polyroots(coeffs, tol: float = 1e-15, maxiter: int = 500):
    """Roots of sum coeffs[k] x^k by Aberth-Ehrlich iteration.

    Returns the roots polished by a final Newton step.  Raises EigenError
    if the iteration stalls.
    """
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    deg = len(c) - 1
    if deg < 1:
        return np.zeros(0, complex)
    p = c[::-1] / c[-1]  # monic, highest first
    dp = np.polyder(p)
    # initial guesses on a circle of the Cauchy-bound radius
    r = 1 + np.max(np.abs(p[1:])) if deg > 0 else 1
    r = min(r, 2 * max(np.abs(p[1:]) ** (1.0 / np.arange(1, deg + 1))) + 1e-3)
    z = r * np.exp(2j * np.pi * (np.arange(deg) + 0.25) / deg + 0.4j)
    for _ in range(maxiter):
        pv = np.polyval(p, z)
        dv = np.polyval(dp, z)
        ratio = np.where(dv != 0, pv / np.where(dv != 0, dv, 1), 0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        s = np.sum(np.where(np.eye(deg, dtype=bool), 0, 1.0 / diff), axis=1)
        w = ratio / (1 - ratio * s)
        z = z - w
        if np.all(np.abs(w) <= tol * np.maximum(np.abs(z), 1.0)):
            break
    else:
        res = np.abs(np.polyval(p, z))
        if np.max(res) > 1e-8 * np.max(np.abs(p)):
            raise EigenError(f"Aberth iteration stalled; residuals {res}")
    # polish
    pv, dv = np.polyval(p, z), np.polyval(dp, z)
    ok = dv != 0
    z2 = z.copy()
    z2[ok] -= pv[ok] / dv[ok]
    better = np.abs(np.polyval(p, z2)) < np.abs(pv)
    return np.where(better, z2, z)
