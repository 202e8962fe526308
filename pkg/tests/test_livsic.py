"""Triangular model and conversion: model data, rank-one structure, Krylov
matching, unitarity, cross-algorithm agreement."""

import numpy as np
import pytest

from conftest import match_sets, random_strict
from dissjacobi.errors import NonUpperHalfPlane
from dissjacobi.inverse import reconstruct_from_spectrum
from dissjacobi.jacobi import FiniteJacobi, Spectrum, spectrum
from dissjacobi.livsic import (ConversionResult, TriangularModel,
                               model_from_spectrum, triangular_matrix,
                               triangular_to_jacobi)


def closed_form_2x2(z1: complex, z2: complex):
    """Hand-derived 2x2 conversion: matrix entries and intertwiner."""
    x1, y1, x2, y2 = z1.real, z1.imag, z2.real, z2.imag
    c = y1 + y2
    b1 = complex((x1 * y1 + x2 * y2) / c, c)
    a1 = np.sqrt((((x1 - x2) / c) ** 2 + 1.0) * y1 * y2)
    b2 = (x1 * y2 + x2 * y1) / c
    d = (x2 - x1) - 1j * c
    phase = d / abs(d)
    u = np.array([[np.sqrt(y1 / c), -np.sqrt(y2 / c) * phase],
                  [np.sqrt(y2 / c), np.sqrt(y1 / c) * phase]])
    return FiniteJacobi(b1, (b2,), (a1,)), u


class TestModelData:
    def test_examples(self):
        m = model_from_spectrum(Spectrum(((1j, 1),)))
        assert m.alphas == (0.0,) and abs(m.betas[0] - np.sqrt(2.0)) < 1e-15
        m = model_from_spectrum(Spectrum(((1j, 1), (2j, 1))))
        assert np.allclose(m.betas, [np.sqrt(2.0), 2.0])
        m = model_from_spectrum(Spectrum(((1.0 + 0.5j, 1),)))
        assert m.alphas == (1.0,) and m.betas == (1.0,)

    def test_multiplicity_expansion(self):
        m = model_from_spectrum(Spectrum(((1j, 2), (2j, 1))))
        assert m.n == 3 and m.alphas == (0.0, 0.0, 0.0)

    def test_rejects_lower_half(self):
        with pytest.raises(NonUpperHalfPlane):
            model_from_spectrum(Spectrum(((-1j, 1),)))

    def test_rejects_nonpositive_beta(self):
        with pytest.raises(ValueError):
            TriangularModel((0.0,), (0.0,))


class TestTriangularMatrix:
    def test_single(self):
        t = triangular_matrix(model_from_spectrum(Spectrum(((1j, 1),))))
        assert np.allclose(t, [[1j]])

    def test_off_diagonal_entry(self):
        t = triangular_matrix(model_from_spectrum(Spectrum(((1j, 1), (2j, 1)))))
        assert abs(t[0, 1] - 2j * np.sqrt(2.0)) < 1e-14
        assert t[1, 0] == 0.0

    def test_rank_one_imaginary_part(self, rng):
        m = TriangularModel(tuple(rng.uniform(-1, 1, 4)),
                            tuple(rng.uniform(0.3, 1.5, 4)))
        t = triangular_matrix(m)
        g = m.channel()
        assert np.abs((t - t.conj().T) / 1j - np.outer(g, g.conj())).max() < 1e-13


class TestConversion:
    def test_singleton(self):
        res = triangular_to_jacobi(TriangularModel((0.5,), (1.0,)))
        assert abs(res.jacobi.b1 - (0.5 + 0.5j)) < 1e-14
        assert np.allclose(res.u, [[1.0]])

    def test_2x2_closed_form(self):
        res = triangular_to_jacobi(model_from_spectrum(Spectrum(((1j, 1), (2j, 1)))))
        want_j, want_u = closed_form_2x2(1j, 2j)
        assert np.abs(res.jacobi.dense() - want_j.dense()).max() < 1e-12
        assert np.abs(res.u - want_u).max() < 1e-12

    def test_2x2_closed_form_random(self, rng):
        for _ in range(20):
            z1 = complex(rng.uniform(-2, 2), rng.uniform(0.2, 2.0))
            z2 = complex(rng.uniform(-2, 2), rng.uniform(0.2, 2.0))
            res = triangular_to_jacobi(
                TriangularModel((z1.real, z2.real),
                                (np.sqrt(2 * z1.imag), np.sqrt(2 * z2.imag))))
            want_j, want_u = closed_form_2x2(z1, z2)
            assert np.abs(res.jacobi.dense() - want_j.dense()).max() < 1e-8
            assert np.abs(res.u - want_u).max() < 1e-8

    def test_worked_3x3(self, paper_3x3):
        res = triangular_to_jacobi(model_from_spectrum(Spectrum(((1j, 2), (2j, 1)))))
        assert np.abs(res.jacobi.dense() - paper_3x3.dense()).max() < 1e-8

    def test_invariants(self, rng):
        s = spectrum(random_strict(rng, 7))
        model = model_from_spectrum(s)
        res = triangular_to_jacobi(model)
        r = res.residuals(model)
        t_norm = max(1.0, np.abs(triangular_matrix(model)).max())
        assert r["unitary"] < 1e-8
        assert r["intertwine"] < 1e-7 * t_norm
        assert r["channel"] < 1e-7 * t_norm

    def test_first_column_closed_form(self, rng):
        s = spectrum(random_strict(rng, 5))
        model = model_from_spectrum(s)
        res = triangular_to_jacobi(model)
        c = sum(z.imag for z in model.eigenvalues())
        want = np.sqrt(np.array([z.imag for z in model.eigenvalues()]) / c)
        assert np.abs(res.u[:, 0] - want).max() < 1e-12

    def test_cross_algorithm_agreement(self, rng):
        for n in (2, 4, 6, 8, 10):
            s = spectrum(random_strict(rng, n))
            j_peel = reconstruct_from_spectrum(s)
            j_tri = triangular_to_jacobi(model_from_spectrum(s)).jacobi
            assert np.abs(j_peel.dense() - j_tri.dense()).max() < 1e-6

    def test_order_independence_with_multiplicities(self):
        s1 = Spectrum(((1j, 2), (2j, 1)))
        m1 = model_from_spectrum(s1)
        # shuffled pair order realizes the same matrix
        m2 = TriangularModel((0.0, 0.0, 0.0), (2.0, np.sqrt(2.0), np.sqrt(2.0)))
        j1 = triangular_to_jacobi(m1).jacobi
        j2 = triangular_to_jacobi(m2).jacobi
        assert np.abs(j1.dense() - j2.dense()).max() < 1e-7

    def test_spectrum_preserved(self, rng):
        pts = [complex(rng.uniform(-1, 1), rng.uniform(0.3, 1.2)) for _ in range(6)]
        model = TriangularModel(tuple(z.real for z in pts),
                                tuple(np.sqrt(2 * z.imag) for z in pts))
        res = triangular_to_jacobi(model)
        assert match_sets(np.linalg.eigvals(res.jacobi.dense()), pts) < 1e-7

    def test_conversion_result_is_dataclass(self):
        res = triangular_to_jacobi(TriangularModel((0.0,), (1.0,)))
        assert isinstance(res, ConversionResult)
