"""Dense non-symmetric eigenvalue solver: Hessenberg reduction + shifted QR.

Complex single-shift QR with Wilkinson shifts, deterministic exceptional
shifts and subdiagonal deflation.  Eigenvalues only; no Schur vectors.
Used for companion-matrix polynomial roots and as the large-``n`` fallback
of the spectral routines.
"""

from __future__ import annotations

import numpy as np

from .errors import NoConvergence

_EPS = float(np.finfo(np.float64).eps)


def balance(a: np.ndarray) -> np.ndarray:
    """Diagonal similarity scaling (powers of 2) equalizing row/col norms.

    Eigenvalues are preserved exactly; the scaling is the classical
    iterative norm-balancing pass and improves the accuracy of the QR
    iteration for badly scaled inputs such as companion matrices.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    radix = 2.0
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            r = np.abs(a[i, :]).sum() - abs(a[i, i])
            c = np.abs(a[:, i]).sum() - abs(a[i, i])
            if r == 0.0 or c == 0.0:
                continue
            s = c + r
            f = 1.0
            while c < r / radix:
                c *= radix
                r /= radix
                f *= radix
            while c >= r * radix:
                c /= radix
                r *= radix
                f /= radix
            if (c + r) < 0.95 * s:
                converged = False
                a[i, :] *= 1.0 / f
                a[:, i] *= f
    return a


def hessenberg(a: np.ndarray) -> np.ndarray:
    """Reduce a square complex matrix to upper Hessenberg form.

    Householder reflections applied two-sided; returns a new array.
    """
    h = np.array(a, dtype=complex)
    n = h.shape[0]
    for k in range(n - 2):
        x = h[k + 1:, k]
        xnorm = np.linalg.norm(x)
        if xnorm == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        alpha = -phase * xnorm
        v = x.copy()
        v[0] -= alpha
        vnorm = np.linalg.norm(v)
        if vnorm == 0.0:
            continue
        v /= vnorm
        # P = I - 2 v v*; apply from the left then the right
        h[k + 1:, k:] -= 2.0 * np.outer(v, v.conj() @ h[k + 1:, k:])
        h[:, k + 1:] -= 2.0 * np.outer(h[:, k + 1:] @ v, v.conj())
        h[k + 1, k] = alpha
        h[k + 2:, k] = 0.0
    return h


def _rotg(a: complex, b: complex) -> tuple[float, complex]:
    """Givens rotation G = [[c, s], [-conj(s), c]], c real, G @ (a, b) = (r, 0)."""
    if b == 0:
        return 1.0, 0.0 + 0.0j
    if a == 0:
        return 0.0, 1.0 + 0.0j
    na = abs(a)
    r = np.hypot(na, abs(b))
    return na / r, (a / na) * np.conjugate(b) / r


def _eig2(block: np.ndarray) -> tuple[complex, complex]:
    """Eigenvalues of a 2x2 complex block via the stabilized quadratic."""
    p, q = block[0, 0], block[0, 1]
    r, s = block[1, 0], block[1, 1]
    half = 0.5 * (p + s)
    disc = np.sqrt(0.25 * (p - s) ** 2 + q * r)
    e1 = half + disc
    e2 = half - disc
    # recompute the smaller root from the determinant when possible
    det = p * s - q * r
    if abs(e1) > abs(e2) and e1 != 0:
        e2 = det / e1
    elif abs(e2) > abs(e1) and e2 != 0:
        e1 = det / e2
    return e1, e2


def _wilkinson_shift(block: np.ndarray) -> complex:
    e1, e2 = _eig2(block)
    corner = block[1, 1]
    return e1 if abs(e1 - corner) <= abs(e2 - corner) else e2


def _qr_step(h: np.ndarray, lo: int, hi: int, mu: complex) -> None:
    """One explicit shifted QR sweep on the Hessenberg block h[lo:hi+1, lo:hi+1]."""
    idx = np.arange(lo, hi + 1)
    h[idx, idx] -= mu
    rots = []
    for k in range(lo, hi):
        c, s = _rotg(h[k, k], h[k + 1, k])
        rots.append((c, s))
        top = c * h[k, k:hi + 1] + s * h[k + 1, k:hi + 1]
        bot = -np.conjugate(s) * h[k, k:hi + 1] + c * h[k + 1, k:hi + 1]
        h[k, k:hi + 1] = top
        h[k + 1, k:hi + 1] = bot
        h[k + 1, k] = 0.0
    for k in range(lo, hi):
        c, s = rots[k - lo]
        left = c * h[lo:k + 2, k] + np.conjugate(s) * h[lo:k + 2, k + 1]
        right = -s * h[lo:k + 2, k] + c * h[lo:k + 2, k + 1]
        h[lo:k + 2, k] = left
        h[lo:k + 2, k + 1] = right
    h[idx, idx] += mu


def eigvals(a: np.ndarray, max_iter_factor: int = 60) -> np.ndarray:
    """Eigenvalues of a dense complex matrix.

    Parameters
    ----------
    a : (n, n) array_like
        Square complex matrix.
    max_iter_factor : int
        Iteration budget is ``max_iter_factor * n`` QR sweeps in total.

    Returns
    -------
    (n,) ndarray of complex eigenvalues, unordered.

    Raises
    ------
    NoConvergence
        If the QR iteration does not deflate within its budget.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("eigvals expects a square matrix")
    n = a.shape[0]
    if n == 0:
        return np.empty(0, dtype=complex)
    if n == 1:
        return a.ravel().copy()
    h = hessenberg(balance(a))
    scale = max(np.abs(h).max(), 1.0)
    eigs: list[complex] = []
    hi = n - 1
    total = 0
    since_deflation = 0
    while hi >= 0:
        if hi == 0:
            eigs.append(h[0, 0])
            break
        lo = hi
        while lo > 0:
            s = abs(h[lo - 1, lo - 1]) + abs(h[lo, lo])
            if s == 0.0:
                s = scale
            if abs(h[lo, lo - 1]) <= _EPS * s:
                h[lo, lo - 1] = 0.0
                break
            lo -= 1
        if lo == hi:
            eigs.append(h[hi, hi])
            hi -= 1
            since_deflation = 0
            continue
        if lo == hi - 1:
            eigs.extend(_eig2(h[hi - 1:hi + 1, hi - 1:hi + 1]))
            hi -= 2
            since_deflation = 0
            continue
        total += 1
        since_deflation += 1
        if total > max_iter_factor * n:
            raise NoConvergence(
                f"QR iteration exceeded {max_iter_factor * n} sweeps at size {hi - lo + 1}")
        if since_deflation % 16 == 0:
            # deterministic exceptional shift to break limit cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            mu = _wilkinson_shift(h[hi - 1:hi + 1, hi - 1:hi + 1])
        _qr_step(h, lo, hi, mu)
    return np.array(eigs, dtype=complex)
