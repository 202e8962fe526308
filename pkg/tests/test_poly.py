"""Polynomial layer: roots with clustering, rational Taylor data, Hermite
interpolation.  Expected values are computed by independent oracles
(closed forms, finite differences, hand-solved linear systems)."""

import numpy as np
import pytest

from conftest import match_sets
from dissjacobi.errors import DegreeZero, PoleAtPoint, SingularSystem
from dissjacobi.poly import (ComplexPoly, HermiteData, RationalFunction,
                             cluster_roots, expand_roots, hermite_rational,
                             roots, taylor_at)


class TestComplexPoly:
    def test_trim_and_degree(self):
        p = ComplexPoly(np.array([1.0, 2.0, 0.0, 1e-18]))
        assert p.degree == 1

    def test_from_roots_expands(self):
        p = ComplexPoly.from_roots([1j, 1j, 2j])
        # (z-i)^2 (z-2i) = z^3 - 4i z^2 - 5 z + 2i, expanded by hand
        assert np.allclose(p.coeffs, [2j, -5.0, -4j, 1.0])

    def test_shifted_is_composition(self, rng):
        p = ComplexPoly(rng.normal(size=5) + 1j * rng.normal(size=5))
        w = 0.3 - 0.2j
        z0 = 1.1 + 0.7j
        assert abs(p.shifted(z0)(w) - p(z0 + w)) < 1e-12

    def test_arithmetic(self):
        p = ComplexPoly(np.array([1.0, 1.0]))
        q = ComplexPoly(np.array([-1.0, 1.0]))
        assert np.allclose((p * q).coeffs, [-1.0, 0.0, 1.0])
        assert np.allclose((p + q).coeffs, [0.0, 2.0])


class TestRoots:
    def test_quadratic_symmetric(self):
        got = roots(ComplexPoly(np.array([1.0, 0.0, 1.0])))
        assert match_sets([z for z, _ in got], [1j, -1j]) < 1e-12
        assert all(m == 1 for _, m in got)

    def test_double_root_clusters(self):
        got = roots(ComplexPoly.from_roots([1j, 1j, 2j]))
        mults = {complex(np.round(z, 6)): m for z, m in got}
        assert mults[complex(0, 1)] == 2
        assert mults[complex(0, 2)] == 1

    def test_linear(self):
        assert roots(ComplexPoly(np.array([-5.0, 1.0]))) == [(5.0 + 0j, 1)]

    def test_constant_raises(self):
        with pytest.raises(DegreeZero):
            roots(ComplexPoly(np.array([3.0])))

    def test_roundtrip_random_multisets(self, rng):
        for _ in range(25):
            k = int(rng.integers(1, 13))
            pts = []
            while len(pts) < k:
                z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                if all(abs(z - w) > 1e-5 for w in pts):
                    pts.append(z)
            p = ComplexPoly.from_roots(pts)
            back = expand_roots(roots(p))
            assert np.abs(back.coeffs - p.coeffs).max() < 1e-6 * max(
                1.0, np.abs(p.coeffs).max())

    def test_cluster_transitivity(self):
        # chain of points pairwise-close to neighbours only
        pts = [1.0, 1.0 + 4e-7, 1.0 + 8e-7, 5.0]
        got = cluster_roots(pts)
        assert sorted(m for _, m in got) == [1, 3]


class TestTaylorAt:
    def test_inverse_z(self):
        f = RationalFunction.from_coeffs([1.0], [0.0, 1.0])
        assert np.allclose(taylor_at(f, 1.0, 1), [1.0, -1.0])

    def test_direct_evaluation(self):
        f = RationalFunction.from_coeffs([1.0, 0.0, -2.0], [0.0, -10.0, 0.0, 2.0])
        z0 = 3j
        want = (-2.0 * z0 ** 2 + 1.0) / (2.0 * z0 ** 3 - 10.0 * z0)
        assert abs(taylor_at(f, z0, 0)[0] - want) < 1e-12

    def test_constant(self):
        f = RationalFunction.from_coeffs([5.0], [1.0])
        assert np.allclose(taylor_at(f, 0.33 + 1j, 2), [5.0, 0.0, 0.0])

    def test_matches_finite_differences(self, rng):
        f = RationalFunction.from_coeffs([0.7, -1.2, 0.4], [2.0, 0.3, -0.5, 1.0])
        z0 = 0.4 + 1.1j
        vals = taylor_at(f, z0, 2)
        h = 1e-5
        fd1 = (f(z0 + h) - f(z0 - h)) / (2 * h)
        fd2 = (f(z0 + h) - 2 * f(z0) + f(z0 - h)) / h ** 2
        assert abs(vals[1] - fd1) < 1e-5
        assert abs(vals[2] - fd2) < 1e-4

    def test_pole_raises(self):
        f = RationalFunction.from_coeffs([1.0], [0.0, 1.0])
        with pytest.raises(PoleAtPoint):
            taylor_at(f, 0.0, 1)


class TestHermiteRational:
    def test_single_node_residue(self):
        # boundary value i/4 at 2i with mirrored node: by hand the 2x2 real
        # system forces -1/2 over z
        data = HermiteData(((2j, (0.25j,)),))
        phi = hermite_rational(data, 0, 1, self_conjugate=True)
        assert np.allclose(phi.num.coeffs, [-0.5])
        assert np.allclose(phi.den.coeffs, [0.0, 1.0])
        assert abs(-(2j) * phi(2j * 1e9) * 1e9 - 0.5) < 1e-6

    def test_zero_data_zero_numerator(self):
        phi = hermite_rational(HermiteData(((0.0, (0.0,)),)), 0, 1,
                               self_conjugate=True)
        assert phi.num.is_zero()

    def test_conjugate_pair_samples(self):
        # f(z) = -1/(z^2 + 2) sampled at +-i; underdetermined but consistent
        data = HermiteData(((1j, (-1.0,)),))
        phi = hermite_rational(data, 1, 2, self_conjugate=True)
        assert abs(phi(1j) - (-1.0)) < 1e-8
        assert abs(phi(-1j) - (-1.0)) < 1e-8
        assert phi.num.is_real_within(1e-9)
        assert phi.den.is_real_within(1e-9)

    def test_recovers_rational_with_derivatives(self):
        f = RationalFunction.from_coeffs([2.0, 1.0], [5.0, 3.0, 1.0])
        z1 = 1.0 + 1.0j
        v = taylor_at(f, z1, 1)
        data = HermiteData(((z1, tuple(v)), (0.5, (complex(f(0.5)),))))
        phi = hermite_rational(data, 1, 2, self_conjugate=True)
        assert np.abs(phi.num.coeffs - f.num.coeffs).max() < 1e-8
        assert np.abs(phi.den.coeffs - f.den.coeffs).max() < 1e-8

    def test_inconsistent_data_raises(self):
        # three distinct nodes cannot sit on any 0/1 rational with these values
        data = HermiteData(((1.0, (1.0,)), (2.0, (5.0,)), (3.0, (-4.0,))))
        with pytest.raises(SingularSystem):
            hermite_rational(data, 0, 1, self_conjugate=True)

    def test_coincident_nodes_rejected(self):
        data = HermiteData(((1.0, (1.0,)), (1.0 + 1e-15, (2.0,))))
        with pytest.raises(ValueError):
            hermite_rational(data, 0, 1)
