"""Randomized invariant suites behind ``dissjacobi verify``.

Each suite runs seeded trials of one family of identities and reports one
row per invariant with the worst residual seen.  The suites are also the
backbone of the acceptance tests.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DissJacobiError
from .inverse import reconstruct_from_spectrum
from .jacobi import FiniteJacobi, Spectrum, principal_charpolys, spectrum
from .livsic import model_from_spectrum, triangular_to_jacobi
from .mfunc import mchain
from .poly import RationalFunction, taylor_at
from .semiinf import (chebyshev_eig, chebyshev_jacobi, herglotz_sqrt, moments,
                      predicted_real_eig, real_part_top_eigs,
                      tangent_series_moments, truncation_top_eig,
                      volterra_couplings, volterra_jacobi, VolterraParams)


@dataclass
class CheckRow:
    """One invariant: worst residual over all trials against its tolerance."""

    name: str
    trials: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


def random_strict(rng: np.random.Generator, n: int) -> FiniteJacobi:
    """Random strict-class matrix with entries of moderate size."""
    b1 = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.2, 2.0))
    b_rest = tuple(rng.uniform(-1.0, 1.0, size=n - 1))
    a = tuple(rng.uniform(0.3, 1.5, size=n - 1))
    return FiniteJacobi(b1, b_rest, a)


def random_selfadjoint(rng: np.random.Generator, n: int) -> FiniteJacobi:
    b = rng.uniform(-1.0, 1.0, size=n)
    a = rng.uniform(0.3, 1.5, size=n - 1)
    return FiniteJacobi(float(b[0]), tuple(b[1:]), tuple(a))


def matrix_gap(j1: FiniteJacobi, j2: FiniteJacobi) -> float:
    """Max entrywise difference between two matrices of equal size."""
    return float(np.abs(j1.dense() - j2.dense()).max())


def suite_roundtrip(n_max: int = 8, trials: int = 50, seed: int = 20240901,
                    tol: Tolerances = DEFAULT) -> list[CheckRow]:
    """spectrum -> reconstruct roundtrips, imaginary-mass identity and
    agreement between the peel-based and triangular-conversion routes."""
    rng = np.random.default_rng(seed)
    worst_rt = worst_mass = worst_cross = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, n_max + 1))
        j = random_strict(rng, n)
        s = spectrum(j, tol)
        rebuilt = reconstruct_from_spectrum(s, tol)
        worst_rt = max(worst_rt, matrix_gap(j, rebuilt))
        worst_mass = max(worst_mass, abs(rebuilt.b1.imag - s.imag_sum),
                         abs(s.imag_sum - j.b1.imag))
        other = triangular_to_jacobi(model_from_spectrum(s), tol).jacobi
        worst_cross = max(worst_cross, matrix_gap(rebuilt, other))
    return [
        CheckRow("reconstruct(spectrum(J)) = J", trials, worst_rt, tol.roundtrip),
        CheckRow("Im b1 = sum of Im eigenvalues", trials, worst_mass, 1e-9),
        CheckRow("peel route = triangular route", trials, worst_cross, tol.roundtrip),
    ]


def green_residual(j: FiniteJacobi, entries, tol: Tolerances = DEFAULT) -> float:
    """Worst relative residual of the boundary-derivative identity.

    For every eigenvalue z0 of multiplicity l and every interior cut j:
    derivatives of 1/m_-(z, j+1) at z0 up to order l-1 equal
    a_j^2 m_+^(p)(z0, j).
    """
    chain = mchain(j, tol)
    p = principal_charpolys(j)
    a = np.asarray(j.a, float)
    worst = 0.0
    for z0, mult in entries:
        for cut in range(1, j.n):
            inv_minus = RationalFunction(-p[cut], p[cut - 1])
            lhs = taylor_at(inv_minus, z0, mult - 1, tol)
            rhs = (a[cut - 1] ** 2) * taylor_at(chain.plus(cut), z0, mult - 1, tol)
            for lv, rv in zip(lhs, rhs):
                scale = max(1.0, abs(lv), abs(rv))
                worst = max(worst, abs(lv - rv) / scale)
    return worst


def suite_green(n_max: int = 6, trials: int = 20, seed: int = 20240901,
                tol: Tolerances = DEFAULT) -> list[CheckRow]:
    """Boundary-derivative identity on random and on multiple-eigenvalue data."""
    rng = np.random.default_rng(seed)
    worst_simple = 0.0
    for _ in range(trials):
        n = int(rng.integers(3, max(4, n_max + 1)))
        j = random_strict(rng, n)
        s = spectrum(j, tol)
        worst_simple = max(worst_simple, green_residual(j, s.entries, tol))
    worst_mult = 0.0
    for entries in [((1j, 2), (2j, 1)),
                    ((1j, 3),),
                    ((-1.0 + 1.0j, 2), (1.0 + 2.0j, 2))]:
        s = Spectrum(entries)
        j = reconstruct_from_spectrum(s, tol)
        worst_mult = max(worst_mult, green_residual(j, s.entries, tol))
    return [
        CheckRow("derivative identity (simple eigenvalues)", trials,
                 worst_simple, tol.green),
        CheckRow("derivative identity (multiplicities)", 3, worst_mult, tol.green),
    ]


def suite_symmetric(trials: int = 50, seed: int = 20240901,
                    tol: Tolerances = DEFAULT) -> list[CheckRow]:
    """Mirror-symmetric spectra produce a purely imaginary corner and zero
    diagonal."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        pairs = int(rng.integers(1, 4))
        axis = int(rng.integers(0, 3))
        pts: list[complex] = []
        for _ in range(pairs):
            z = complex(rng.uniform(0.1, 1.5), rng.uniform(0.2, 1.5))
            pts.extend([z, -np.conj(z)])
        for _ in range(axis):
            pts.append(complex(0.0, rng.uniform(0.2, 1.5)))
        j = reconstruct_from_spectrum(Spectrum.merged(pts, tol), tol)
        worst = max(worst, abs(j.b1.real),
                    max((abs(b) for b in j.b_rest), default=0.0))
    return [CheckRow("symmetric spectrum -> zero diagonal", trials, worst, 1e-7)]


def suite_volterra(l: float = 1.0, tol: Tolerances = DEFAULT) -> list[CheckRow]:
    """Entry formula, tangent-series moments, trace identity, eigenvalue
    convergence of the integration-operator truncations."""
    n = 60
    j = volterra_jacobi(VolterraParams(l, n))
    a_ref = volterra_couplings(l, n - 1)
    worst_entry = float(np.abs(np.asarray(j.a) - a_ref).max())
    ms = moments(j.real_part(), 2 * n - 2)
    ref = tangent_series_moments(l, 2 * n - 2)
    worst_mom = 0.0
    for got, want in zip(ms.gammas, ref):
        worst_mom = max(worst_mom, abs(got - want) / max(1.0, abs(want)))
    errs = []
    for size in (25, 50, 100, 200):
        top = real_part_top_eigs(l, size, 1)[0]
        errs.append(abs(top - predicted_real_eig(l, 0)))
    worst_conv = max(errs)
    nonmono = max(max(errs[i + 1] - errs[i], 0.0) for i in range(len(errs) - 1))
    return [
        CheckRow("coupling formula l/sqrt((2k-1)(2k+1))", 1, worst_entry, 1e-15),
        CheckRow("moments match tangent series", 1, worst_mom, 1e-10),
        CheckRow("top real eigenvalue converges", 4, worst_conv, 1e-8),
        CheckRow("convergence error non-increasing", 4, nonmono, 1e-12),
    ]


def suite_chebyshev(tol: Tolerances = DEFAULT) -> list[CheckRow]:
    """Closed-form eigenvalues, their defining equations and the threshold."""
    worst_def = 0.0
    for l in (0.6, 0.8, 1.0, 1.7, 3.0):
        z = chebyshev_eig("standard", l, tol)
        worst_def = max(worst_def, abs(herglotz_sqrt(z) - z - 1j / (2 * l)))
    for l in (1.2, 2.0, 5.0):
        z = chebyshev_eig("modified", l, tol)
        worst_def = max(worst_def, abs(herglotz_sqrt(z) - 1j * l))
    absent = 0.0
    for l in (0.1, 0.3, 0.5):
        if chebyshev_eig("standard", l, tol) is not None:
            absent = 1.0
    for l in (0.5, 0.9, 1.0):
        if chebyshev_eig("modified", l, tol) is not None:
            absent = 1.0
    trunc = truncation_top_eig(chebyshev_jacobi("standard", 1.0, 400))
    soft = abs(trunc - 0.75j)
    return [
        CheckRow("defining equations at closed forms", 8, worst_def, tol.eig),
        CheckRow("no eigenvalue below threshold", 6, absent, 0.5),
        CheckRow("truncation approaches 0.75i (soft)", 1, soft, 1e-3),
    ]


SUITES = {
    "roundtrip": suite_roundtrip,
    "green": suite_green,
    "symmetric": suite_symmetric,
    "volterra": lambda n_max=0, trials=0, seed=0, tol=DEFAULT: suite_volterra(tol=tol),
    "chebyshev": lambda n_max=0, trials=0, seed=0, tol=DEFAULT: suite_chebyshev(tol=tol),
}


def run_suite(name: str, n_max: int, trials: int, seed: int,
              tol: Tolerances = DEFAULT) -> list[CheckRow]:
    if name not in SUITES:
        raise DissJacobiError(f"unknown suite {name!r}")
    if name in ("roundtrip", "green"):
        return SUITES[name](n_max=n_max, trials=trials, seed=seed, tol=tol)
    if name == "symmetric":
        return SUITES[name](trials=trials, seed=seed, tol=tol)
    return SUITES[name](tol=tol)
