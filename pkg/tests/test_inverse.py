"""Inverse algorithms: spectral reconstruction, characteristic-function
route, mixed recovery, self-adjoint recovery, block-split recovery."""

import json

import numpy as np
import pytest

from conftest import eigvals_lapack, match_sets, random_selfadjoint, random_strict
from dissjacobi.errors import (InconsistentCounts, NoConsistentMatrix,
                               NonUpperHalfPlane)
from dissjacobi.inverse import (BlockData, MixedData, block_recover,
                                mixed_recover, reconstruct_from_charfunction,
                                reconstruct_from_spectrum, sa_mixed_recover)
from dissjacobi.jacobi import FiniteJacobi, Spectrum, spectrum
from dissjacobi.mfunc import CharFunction


def gap(j1, j2):
    return float(np.abs(j1.dense() - j2.dense()).max())


class TestReconstructFromSpectrum:
    def test_worked_3x3(self, paper_3x3):
        j = reconstruct_from_spectrum(Spectrum(((1j, 2), (2j, 1))))
        assert gap(j, paper_3x3) < 1e-8

    def test_uniform_double(self, j2):
        assert gap(reconstruct_from_spectrum(Spectrum(((1j, 2),))), j2) < 1e-8

    def test_uniform_family_couplings(self):
        # couplings of the pure multiplicity-n family, n = 2..5, verified
        # against the continued-fraction data and the power-sum identities
        want = {
            2: [1.0],
            3: [np.sqrt(8.0 / 3.0), np.sqrt(1.0 / 3.0)],
            4: [np.sqrt(5.0), 2.0 / np.sqrt(5.0), 1.0 / np.sqrt(5.0)],
            5: [2.0 * np.sqrt(2.0), np.sqrt(7.0 / 5.0), 4.0 / np.sqrt(35.0),
                1.0 / np.sqrt(7.0)],
        }
        for n, a_ref in want.items():
            j = reconstruct_from_spectrum(Spectrum(((1j, n),)))
            assert abs(j.b1 - n * 1j) < 1e-8
            assert np.abs(np.asarray(j.a) - a_ref).max() < 1e-8
            assert max(abs(b) for b in j.b_rest) < 1e-8
            # trace of J^2: n * (i)^2 = b1^2 + 2 sum a_k^2
            t2 = j.b1 ** 2 + 2.0 * sum(x * x for x in j.a)
            assert abs(t2 - n * (1j) ** 2) < 1e-8

    def test_singleton(self):
        z1 = 0.3 + 1.7j
        j = reconstruct_from_spectrum(Spectrum(((z1, 1),)))
        assert j.n == 1 and abs(j.b1 - z1) < 1e-14

    def test_mirror_pair_closed_form(self):
        j = reconstruct_from_spectrum(Spectrum(((-1 + 1j, 1), (1 + 1j, 1))))
        want = FiniteJacobi(2j, (0.0,), (np.sqrt(2.0),))
        assert gap(j, want) < 1e-12

    def test_imag_mass_exact(self, rng):
        s = spectrum(random_strict(rng, 6))
        j = reconstruct_from_spectrum(s)
        assert j.b1.imag == s.imag_sum  # by construction, not within tolerance

    def test_lower_half_rejected(self):
        with pytest.raises(NonUpperHalfPlane):
            reconstruct_from_spectrum(Spectrum(((-1j, 1),)))

    def test_roundtrip_random(self, rng):
        for n in (2, 4, 7, 10):
            j = random_strict(rng, n)
            assert gap(reconstruct_from_spectrum(spectrum(j)), j) < 1e-6

    def test_spectrum_of_result_matches(self, rng):
        pts = [complex(rng.uniform(-1, 1), rng.uniform(0.3, 1.5)) for _ in range(5)]
        j = reconstruct_from_spectrum(Spectrum.merged(pts))
        assert match_sets(eigvals_lapack(j), pts) < 1e-7


class TestReconstructFromCharFunction:
    def test_singleton(self):
        j = reconstruct_from_charfunction(CharFunction(Spectrum(((1j, 1),))))
        assert abs(j.b1 - 1j) < 1e-14

    def test_worked_3x3(self, paper_3x3):
        w = CharFunction(Spectrum(((1j, 2), (2j, 1))))
        assert gap(reconstruct_from_charfunction(w), paper_3x3) < 1e-8

    def test_reciprocal_symmetry_zero_diagonal(self):
        # W(-z) = 1/W(z) for the mirror-symmetric spectrum
        s = Spectrum(((-1 + 1j, 1), (1 + 1j, 1)))
        w = CharFunction(s)
        for z in (3.1 - 0.7j, -2.2 - 1.3j):
            assert abs(w(-z) - 1.0 / w(z)) < 1e-12
        j = reconstruct_from_charfunction(w)
        assert abs(j.b1.real) < 1e-8
        assert max(abs(b) for b in j.b_rest) < 1e-8

    def test_agrees_with_spectrum_route(self, rng):
        s = spectrum(random_strict(rng, 6))
        assert gap(reconstruct_from_charfunction(CharFunction(s)),
                   reconstruct_from_spectrum(s)) < 1e-9


class TestMixedRecover:
    def test_worked_3x3_hidden_tail(self, paper_3x3):
        data = MixedData(prefix=FiniteJacobi(4j, (0.0,), (3.0 / np.sqrt(2.0),)),
                         spectrum=Spectrum(((2j, 1),)), n=3)
        j = mixed_recover(data)
        assert gap(j, paper_3x3) < 1e-8

    def test_2x2_hand_solved(self, j2):
        data = MixedData(prefix=FiniteJacobi(2j, (), ()),
                         spectrum=Spectrum(((1j, 1),)), n=2)
        j = mixed_recover(data)
        assert gap(j, j2) < 1e-10

    def test_maximal_r_random(self, rng):
        j = random_strict(rng, 5)
        s = spectrum(j)
        data = MixedData(prefix=j.leading(1), spectrum=s_drop(s, keep=4), n=5)
        rec = mixed_recover(data)
        assert gap(rec, j) < 1e-6

    def test_all_splits_random(self, rng):
        for trial in range(6):
            n = int(rng.integers(3, 8))
            j = random_strict(rng, n)
            full = spectrum(j)
            for r in range(1, n):
                data = MixedData(prefix=j.leading(n - r),
                                 spectrum=s_drop(full, keep=r), n=n)
                rec = mixed_recover(data)
                assert gap(rec, j) < 1e-6

    def test_prefix_is_preserved_exactly(self, rng):
        j = random_strict(rng, 6)
        data = MixedData(prefix=j.leading(4), spectrum=s_drop(spectrum(j), 2), n=6)
        rec = mixed_recover(data)
        assert rec.b1 == j.b1 and rec.b_rest[:3] == j.b_rest[:3]
        assert rec.a[:3] == j.a[:3]

    def test_counts_validated(self):
        with pytest.raises(InconsistentCounts):
            MixedData(prefix=FiniteJacobi(1j, (), ()),
                      spectrum=Spectrum(((1j, 1),)), n=3)

    def test_json_roundtrip(self):
        data = MixedData(prefix=FiniteJacobi(2j, (), ()),
                         spectrum=Spectrum(((1j, 1),)), n=2)
        back = MixedData.from_dict(json.loads(json.dumps(data.to_dict())))
        assert back.n == 2 and back.prefix.b1 == 2j


def s_drop(s: Spectrum, keep: int) -> Spectrum:
    """Sub-multiset with the requested total multiplicity (deterministic)."""
    pts = s.points()[:keep]
    return Spectrum.merged(pts)


class TestSaMixedRecover:
    def test_closed_form_n2(self):
        b1, a1, lam = 0.3, 1.2, 2.5
        j = sa_mixed_recover([b1, a1], [lam], 2)
        want = lam + a1 ** 2 / (b1 - lam)
        assert abs(j.b_rest[0] - want) < 1e-10

    def test_generate_hide_recover_n3(self, rng):
        j = random_selfadjoint(rng, 3)
        lam = float(np.sort(eigvals_lapack(j).real)[-1])
        rec = sa_mixed_recover(list_c(j)[:4], [lam], 3)
        assert gap(rec, j) < 1e-8

    def test_generate_hide_recover_even_gap(self, rng):
        j = random_selfadjoint(rng, 4)
        eigs = np.sort(eigvals_lapack(j).real)
        rec = sa_mixed_recover(list_c(j)[:5], [float(eigs[0]), float(eigs[-1])], 4)
        assert gap(rec, j) < 1e-7

    def test_inconsistent_eigenvalue(self):
        # prescribing an eigenvalue of the known block violates disjointness
        j = FiniteJacobi(0.0, (0.0,), (1.0,))
        with pytest.raises(NoConsistentMatrix):
            sa_mixed_recover([0.0, 1.0], [0.0], 2)


def list_c(j: FiniteJacobi) -> list:
    return [x if not isinstance(x, complex) else x.real for x in j.entries_c()]


class TestBlockRecover:
    def test_two_singleton_blocks(self):
        data = BlockData(p=1, nonreal=Spectrum(((3j, 1),)),
                         real_eigs=(7.0,), tail=(), n=2)
        j = block_recover(data)
        want = np.array([[3j, 0.0], [0.0, 7.0]])
        assert np.abs(j.dense() - want).max() < 1e-12
        assert j.zero_coupling == 1

    def test_double_block_roundtrip(self, rng):
        j22 = random_selfadjoint(rng, 2)
        eigs = sorted(float(x) for x in eigvals_lapack(j22).real)
        data = BlockData(p=2, nonreal=Spectrum(((1j, 2),)), real_eigs=tuple(eigs),
                         tail=(float(j22.b_rest[0]),), n=4)
        j = block_recover(data)
        want_11 = FiniteJacobi(2j, (0.0,), (1.0,))
        assert np.abs(j.dense()[:2, :2] - want_11.dense()).max() < 1e-8
        assert np.abs(j.dense()[2:, 2:] - j22.dense()).max() < 1e-6
        assert j.dense()[1, 2] == 0.0

    def test_partial_tail_roundtrip(self, rng):
        # p = 3, n = 5, one real eigenvalue plus the last two entries known
        j11 = random_strict(rng, 3)
        s11 = spectrum(j11)
        j22 = random_selfadjoint(rng, 2)
        eigs = sorted(float(x) for x in eigvals_lapack(j22).real)
        data = BlockData(p=3, nonreal=s11, real_eigs=(eigs[0],),
                         tail=(float(j22.a[0]), float(j22.b_rest[0])), n=5)
        rec = block_recover(data)
        full = np.zeros((5, 5), dtype=complex)
        full[:3, :3] = j11.dense()
        full[3:, 3:] = j22.dense()
        assert np.abs(rec.dense() - full).max() < 1e-6

    def test_counts_validated(self):
        with pytest.raises(InconsistentCounts):
            BlockData(p=2, nonreal=Spectrum(((1j, 1),)), real_eigs=(1.0,),
                      tail=(), n=4)

    def test_json_roundtrip(self):
        data = BlockData(p=1, nonreal=Spectrum(((3j, 1),)),
                         real_eigs=(7.0,), tail=(), n=2)
        back = BlockData.from_dict(json.loads(json.dumps(data.to_dict())))
        assert back.p == 1 and back.real_eigs == (7.0,)


class TestSymmetricSpectra:
    def test_zero_diagonal_property(self, rng):
        for _ in range(8):
            z = complex(rng.uniform(0.2, 1.5), rng.uniform(0.3, 1.5))
            eta = rng.uniform(0.3, 1.5)
            s = Spectrum.merged([z, -np.conj(z), 1j * eta])
            j = reconstruct_from_spectrum(s)
            assert abs(j.b1.real) < 1e-7
            assert max(abs(b) for b in j.b_rest) < 1e-7
