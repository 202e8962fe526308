"""Semi-infinite case studies through finite truncations.

The integration-operator model has corner entry ``i l``, zero diagonal and
couplings l / sqrt((2k-1)(2k+1)); its real part carries the tan(l/z) Weyl
function, which ties the matrix moments to the tangent series (hence to
Bernoulli numbers) and the real spectrum to 2l/((2k+1) pi).  Rank-one
corner perturbations keep a closed-form non-real spectrum.  Two
Chebyshev-type matrices with constant couplings have a single non-real
eigenvalue above an explicit threshold.

All semi-infinite statements are checked on N x N truncations: moment and
trace identities are truncation-exact, isolated eigenvalues are limits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (ExcludedParameter, NumericalError, SingularHankel,
                     TruncationTooSmall)
from .jacobi import FiniteJacobi

# --- integration-operator model ------------------------------------------------


@dataclass(frozen=True)
class VolterraParams:
    """Imaginary mass l of the corner entry and the truncation size N."""

    l: float
    N: int

    def __post_init__(self):
        if not self.l > 0:
            raise ValueError("l must be positive")
        if self.N < 2:
            raise ValueError("need N >= 2")


def volterra_couplings(l: float, count: int) -> np.ndarray:
    k = np.arange(1, count + 1)
    return l / np.sqrt((2.0 * k - 1.0) * (2.0 * k + 1.0))


def volterra_jacobi(p: VolterraParams) -> FiniteJacobi:
    """N x N truncation: b1 = i l, zero diagonal, a_k = l/sqrt((2k-1)(2k+1))."""
    a = volterra_couplings(p.l, p.N - 1)
    return FiniteJacobi(1j * p.l, (0.0,) * (p.N - 1), tuple(a))


def predicted_real_eig(l: float, k: int) -> float:
    """Eigenvalue 2l / ((2k+1) pi) of the real part, k ranging over Z."""
    return 2.0 * l / ((2 * k + 1) * np.pi)


def volterra_real_eigs(p: VolterraParams, k_max: int) -> list[float]:
    """Reference eigenvalues for k = 0..k_max-1 (mirror k < 0 by symmetry)."""
    return [predicted_real_eig(p.l, k) for k in range(k_max)]


def real_part_top_eigs(l: float, n: int, count: int = 1) -> np.ndarray:
    """Largest eigenvalues of the truncated real part, descending."""
    import scipy.linalg

    a = volterra_couplings(l, n - 1)
    eigs = scipy.linalg.eigvalsh_tridiagonal(np.zeros(n), a)
    return eigs[::-1][:count].copy()


# --- moments -------------------------------------------------------------------


@dataclass(frozen=True)
class MomentSequence:
    """Moments gamma_k = (H^k d_1, d_1) of a self-adjoint truncation."""

    gammas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "gammas", tuple(float(g) for g in self.gammas))
        if not self.gammas or abs(self.gammas[0] - 1.0) > 1e-12:
            raise ValueError("gamma_0 must be 1")


def moments(h: FiniteJacobi, k_max: int) -> MomentSequence:
    """gamma_0..gamma_{k_max} by iterated tri-diagonal application.

    Truncation-exact only for k_max <= 2N - 2 (a power of the matrix can
    touch at most one new coordinate per step); larger requests raise
    :class:`TruncationTooSmall`.
    """
    n = h.n
    if k_max > 2 * n - 2:
        raise TruncationTooSmall(
            f"moments beyond order {2 * n - 2} are truncation-polluted")
    if not h.is_selfadjoint:
        raise ValueError("moments are defined for the self-adjoint part")
    b = h.b_full.real
    a = np.asarray(h.a, float)
    v = np.zeros(n)
    v[0] = 1.0
    out = [1.0]
    for _ in range(k_max):
        w = b * v
        w[:-1] += a * v[1:]
        w[1:] += a * v[:-1]
        v = w
        out.append(float(v[0]))
    return MomentSequence(tuple(out))


def bernoulli_numbers(count: int) -> list[Fraction]:
    """B_0..B_{count} as exact rationals (Akiyama-Tanigawa recurrence).

    Convention B_1 = +1/2; only even indices are consumed downstream, where
    the conventions agree.
    """
    row: list[Fraction] = [Fraction(0)] * (count + 1)
    out = []
    for m in range(count + 1):
        row[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
        out.append(row[0])
    return out


def tangent_series_moments(l: float, k_max: int) -> list[float]:
    """Reference even moments from -(1/l) tan(l/z) = -sum gamma_k / z^{k+1}.

    gamma_{2m-2} = T_m l^{2m-2} with T_m the tangent series coefficient
    (-1)^{m-1} 2^{2m} (2^{2m} - 1) B_{2m} / (2m)!; odd moments vanish.
    """
    from math import factorial

    need = k_max // 2 + 1
    bern = bernoulli_numbers(2 * need + 2)
    out = []
    for k in range(k_max + 1):
        if k % 2 == 1:
            out.append(0.0)
            continue
        m = k // 2 + 1
        t = (Fraction((-1) ** (m - 1)) * Fraction(2) ** (2 * m)
             * (Fraction(2) ** (2 * m) - 1) * bern[2 * m] / factorial(2 * m))
        out.append(float(t) * l ** k)
    return out


def hankel_entries(ms: MomentSequence, k: int) -> tuple[float, float]:
    """(a_k, sum of b_1..b_k) recovered from moments via Hankel determinants.

    a_k = sqrt(h_{k-1} h_{k+1} / h_k^2) with h_k the k x k moment Hankel
    determinant; the partial diagonal sums come from the variant with the
    last column advanced by one moment.
    """
    g = np.asarray(ms.gammas)
    if len(g) < 2 * k + 1:
        raise TruncationTooSmall(f"need moments through order {2 * k}")

    def hdet(size: int) -> float:
        if size == 0:
            return 1.0
        mat = np.array([[g[i + j] for j in range(size)] for i in range(size)])
        return float(np.linalg.det(mat))

    def hdet_tilde(size: int) -> float:
        cols = list(range(size - 1)) + [size]
        mat = np.array([[g[i + j] for j in cols] for i in range(size)])
        return float(np.linalg.det(mat))

    hk = hdet(k)
    if hk <= 0:
        raise SingularHankel(f"Hankel determinant h_{k} = {hk:.3e} not positive")
    hkm, hkp = hdet(k - 1), hdet(k + 1)
    if hkm <= 0 or hkp <= 0:
        raise SingularHankel("moment data is not positive definite at this order")
    a_k = float(np.sqrt(hkm * hkp / hk ** 2))
    b_sum = float(hdet_tilde(k) / hk)
    return a_k, b_sum


# --- Chebyshev-type matrices ----------------------------------------------------


def herglotz_sqrt(z: complex) -> complex:
    """Branch of sqrt(z^2 - 1) on C minus [-1, 1] behaving like z at infinity."""
    w = np.sqrt(complex(z) ** 2 - 1.0)
    if abs(z - w) > abs(z + w):
        w = -w
    return complex(w)


def chebyshev_eig(variant: str, l: float,
                  tol: Tolerances = DEFAULT) -> complex | None:
    """Closed-form non-real eigenvalue of the Chebyshev-type matrices.

    standard  (corner il, couplings 1/2, 1/2, ...):
        sqrt(z^2 - 1) - z = i/(2l)  has the C+ solution i (4l^2 - 1)/(4l)
        exactly when l > 1/2, else none.
    modified  (corner il, couplings 1/sqrt(2), 1/2, 1/2, ...):
        sqrt(z^2 - 1) = i l  has the C+ solution i sqrt(l^2 - 1) exactly
        when l > 1, else none.

    The returned value is validated against its defining equation with the
    Herglotz branch; violation raises :class:`NumericalError`.
    """
    if l <= 0:
        raise ValueError("l must be positive")
    if variant == "standard":
        if l <= 0.5:
            return None
        z = 1j * (4.0 * l * l - 1.0) / (4.0 * l)
        residual = abs(herglotz_sqrt(z) - z - 1j / (2.0 * l))
    elif variant == "modified":
        if l <= 1.0:
            return None
        z = 1j * np.sqrt(l * l - 1.0)
        residual = abs(herglotz_sqrt(z) - 1j * l)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if residual > tol.eig * max(1.0, abs(z)):
        raise NumericalError(
            f"defining equation residual {residual:.2e} for {variant} at l={l}")
    return z


def chebyshev_jacobi(variant: str, l: float, n: int) -> FiniteJacobi:
    """N x N truncation of the Chebyshev-type matrices."""
    if variant == "standard":
        a = (0.5,) * (n - 1)
    elif variant == "modified":
        a = (1.0 / np.sqrt(2.0),) + (0.5,) * (n - 2)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return FiniteJacobi(1j * l, (0.0,) * (n - 1), a)


def truncation_top_eig(j: FiniteJacobi) -> complex:
    """Eigenvalue of largest imaginary part of a truncation (dense solve)."""
    eigs = np.linalg.eigvals(j.dense())
    return complex(eigs[np.argmax(eigs.imag)])


# --- rank-one corner perturbations ----------------------------------------------


@dataclass(frozen=True)
class PerturbedVolterra:
    """Corner entry t (any complex), mass l, truncation size N."""

    t: complex
    l: float
    N: int

    def __post_init__(self):
        object.__setattr__(self, "t", complex(self.t))
        if not self.l > 0:
            raise ValueError("l must be positive")
        if self.N < 2:
            raise ValueError("need N >= 2")
        if abs(self.t - 1j * self.l) < 1e-14 or abs(self.t + 1j * self.l) < 1e-14:
            raise ExcludedParameter("t = +/- il is excluded")


def perturbed_volterra_matrix(pv: PerturbedVolterra) -> np.ndarray:
    """Dense truncation with corner entry t (Im t may be any sign)."""
    n = pv.N
    m = np.zeros((n, n), dtype=complex)
    a = volterra_couplings(pv.l, n - 1)
    m[np.arange(n - 1), np.arange(1, n)] = a
    m[np.arange(1, n), np.arange(n - 1)] = a
    m[0, 0] = pv.t
    return m


def perturbed_volterra_eigs(pv: PerturbedVolterra, k_range) -> list[complex]:
    """Closed-form eigenvalues z_k = 2l / (y + 2 pi k - i x).

    Here x = ln |(t+il)/(t-il)| and y = arg((t+il)/(t-il)); each z_k solves
    tan(l / z) = l / t, and the imaginary parts sum to Im t over all k.
    """
    t, l = pv.t, pv.l
    rho = (t + 1j * l) / (t - 1j * l)
    x = float(np.log(abs(rho)))
    y = float(np.angle(rho))
    out = []
    for k in k_range:
        out.append(complex(2.0 * l / (y + 2.0 * np.pi * k - 1j * x)))
    return out


def perturbed_trace_gap(pv: PerturbedVolterra) -> float:
    """| sum Im eig(truncation) - Im t |; exactly zero in exact arithmetic."""
    eigs = np.linalg.eigvals(perturbed_volterra_matrix(pv))
    return float(abs(eigs.imag.sum() - pv.t.imag))


def volterra_sweep(l: float, sizes, k_values=(0, 1, 2)) -> list[dict]:
    """Convergence rows: truncated real-part eigenvalues vs 2l/((2k+1) pi)."""
    rows = []
    for n in sizes:
        tops = real_part_top_eigs(l, n, count=max(k_values) + 1)
        for k in k_values:
            pred = predicted_real_eig(l, k)
            comp = float(tops[k])
            rows.append({"N": int(n), "quantity": f"real_eig_k{k}",
                         "predicted": pred, "computed": comp,
                         "abs_error": abs(comp - pred)})
    return rows
