"""Shared fixtures and independent oracles for the test suite.

The oracles deliberately avoid the library's own code paths: dense
determinants come from LU factorizations sampled on a circle, resolvent
entries from dense linear solves, eigenvalues from LAPACK.
"""

import numpy as np
import pytest

from dissjacobi.jacobi import FiniteJacobi


def random_strict(rng, n):
    b1 = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.2, 2.0))
    return FiniteJacobi(b1, tuple(rng.uniform(-1.0, 1.0, size=n - 1)),
                        tuple(rng.uniform(0.3, 1.5, size=n - 1)))


def random_selfadjoint(rng, n):
    b = rng.uniform(-1.0, 1.0, size=n)
    a = rng.uniform(0.3, 1.5, size=n - 1)
    return FiniteJacobi(float(b[0]), tuple(b[1:]), tuple(a))


def charpoly_dense(m):
    """Coefficients of det(zI - M), ascending, via LU determinants on a circle."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    radius = 1.5 * max(1.0, np.abs(m).sum(axis=1).max())
    k = n + 1
    zs = radius * np.exp(2j * np.pi * np.arange(k) / k)
    vals = np.array([np.linalg.det(z * np.eye(n) - m) for z in zs])
    return np.fft.fft(vals) / k / radius ** np.arange(k)


def resolvent_entry(j, z, row=0, col=0):
    """((J - zI)^{-1} d_col, d_row) by dense solve."""
    m = j.dense() if isinstance(j, FiniteJacobi) else np.asarray(j, dtype=complex)
    n = m.shape[0]
    rhs = np.zeros(n, dtype=complex)
    rhs[col] = 1.0
    x = np.linalg.solve(m - z * np.eye(n), rhs)
    return complex(x[row])


def eigvals_lapack(j):
    m = j.dense() if isinstance(j, FiniteJacobi) else np.asarray(j, dtype=complex)
    return np.linalg.eigvals(m)


def match_sets(got, want):
    """Greedy min-distance matching; returns the worst pairing distance."""
    got = list(got)
    want = list(want)
    assert len(got) == len(want)
    worst = 0.0
    for w in want:
        i = int(np.argmin([abs(g - w) for g in got]))
        worst = max(worst, abs(got.pop(i) - w))
    return worst


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


@pytest.fixture
def paper_3x3():
    """Worked 3x3 example: eigenvalues i (double) and 2i."""
    return FiniteJacobi(4j, (0.0, 0.0), (3.0 / np.sqrt(2.0), 1.0 / np.sqrt(2.0)))


@pytest.fixture
def j2():
    """2x2 matrix with the double eigenvalue i."""
    return FiniteJacobi(2j, (0.0,), (1.0,))
