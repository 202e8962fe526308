"""In-repo dense eigensolver against LAPACK and structural checks."""

import numpy as np
import pytest

from conftest import match_sets
from dissjacobi import eigen


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8, 13, 21, 30])
def test_matches_lapack_random_complex(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert match_sets(eigen.eigvals(a), np.linalg.eigvals(a)) < 1e-9 * max(1, n)


@pytest.mark.parametrize("n", [2, 6, 17])
def test_matches_lapack_random_real(n, rng):
    a = rng.normal(size=(n, n))
    assert match_sets(eigen.eigvals(a), np.linalg.eigvals(a)) < 1e-9


def test_hessenberg_structure_and_similarity(rng):
    a = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    h = eigen.hessenberg(a)
    assert np.abs(np.tril(h, -2)).max() == 0.0
    assert match_sets(np.linalg.eigvals(h), np.linalg.eigvals(a)) < 1e-10


def test_balance_preserves_eigenvalues(rng):
    a = rng.normal(size=(6, 6)) * np.logspace(-4, 4, 6)[:, None]
    assert match_sets(np.linalg.eigvals(eigen.balance(a)),
                      np.linalg.eigvals(a)) < 1e-8


def test_jordan_block_mean():
    # defective eigenvalue: individual values split ~eps^(1/n), the mean is stable
    n = 5
    a = 1.5j * np.eye(n) + np.diag(np.ones(n - 1), 1)
    vals = eigen.eigvals(a)
    assert abs(vals.mean() - 1.5j) < 1e-10


def test_diagonal_and_triangular():
    d = np.diag([1.0 + 1j, -2.0, 3.5j])
    assert match_sets(eigen.eigvals(d), [1 + 1j, -2, 3.5j]) < 1e-14
    t = np.array([[2.0, 5.0, 1.0], [0.0, -1.0, 4.0], [0.0, 0.0, 7.0]])
    assert match_sets(eigen.eigvals(t), [2, -1, 7]) < 1e-12


def test_rejects_nonsquare():
    with pytest.raises(ValueError):
        eigen.eigvals(np.ones((2, 3)))
