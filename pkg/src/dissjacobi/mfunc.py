"""Weyl, characteristic and m-function calculus.

The Weyl function m(z) = ((J - zI)^{-1} d_1, d_1) of an n x n matrix is a
rational function of type (n-1)/n; for the strict dissipative class it is
tied to the characteristic function W by fractional-linear transforms.
The chain of half-line Weyl functions m_+( . , k), m_-( . , k) of trailing
and leading blocks is represented exactly through coefficient ratios of
principal characteristic polynomials, which keeps the continued-fraction
extraction and the rational interpolation steps honest.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (DegreeMismatch, NotHerglotzLike, NumericalError, OnSpectrum,
                     PoleAt)
from .jacobi import (FiniteJacobi, Spectrum, principal_charpolys,
                     trailing_charpolys)
from .poly import ComplexPoly, RationalFunction


@dataclass(frozen=True)
class CharFunction:
    """Finite Blaschke-type product W(z) = prod ((z - conj(z_k)) / (z - z_k))^m."""

    spectrum: Spectrum

    def __post_init__(self):
        if not self.spectrum.in_upper_half():
            raise ValueError("characteristic function needs eigenvalues in C+")
        if self.c <= 0:
            raise ValueError("total imaginary mass must be positive")

    @property
    def c(self) -> float:
        """Sum of mult * Im z_k; equals Im b1 of the realizing matrix."""
        return self.spectrum.imag_sum

    def __call__(self, z: complex) -> complex:
        out = 1.0 + 0j
        for zk, m in self.spectrum.entries:
            den = z - zk
            if abs(den) < 1e-300:
                raise PoleAt(f"characteristic function has a pole at {zk}")
            out *= ((z - np.conj(zk)) / den) ** m
        return complex(out)


def char_W(s: Spectrum, z: complex) -> complex:
    """Characteristic-function value for the given spectrum."""
    return CharFunction(s)(z)


def cayley_V(w: complex, tol: Tolerances = DEFAULT) -> complex:
    """Fractional-linear transform V = i (w - 1) / (w + 1)."""
    if abs(w + 1.0) <= tol.node * max(1.0, abs(w)):
        raise PoleAt("transform pole: W(z) = -1")
    return complex(1j * (w - 1.0) / (w + 1.0))


def weyl_m(j: FiniteJacobi, z: complex, tol: Tolerances = DEFAULT) -> complex:
    """(1,1) resolvent entry ((J - zI)^{-1} d_1, d_1).

    Evaluated through the backward determinant recursion on the trailing
    blocks (the tri-diagonal back-substitution), with rescaling against
    overflow.  Raises :class:`OnSpectrum` at an eigenvalue.
    """
    n = j.n
    b = j.b_full
    a = np.asarray(j.a, float)
    # d_k = det(zI - J_[k,n]) up to a common positive rescaling factor
    d_next = 1.0 + 0j            # k = n+1 (empty block)
    d_cur = z - b[n - 1]         # k = n
    for k in range(n - 2, -1, -1):
        d_new = (z - b[k]) * d_cur - (a[k] ** 2) * d_next
        d_next, d_cur = d_cur, d_new
        mag = max(abs(d_cur), abs(d_next))
        if mag > 1e120:
            d_cur /= mag
            d_next /= mag
    if d_cur == 0 or abs(d_cur) < 1e-280 * max(1.0, abs(d_next)):
        raise OnSpectrum(f"{z} is an eigenvalue (resolvent undefined)")
    return complex(-d_next / d_cur)


@dataclass(frozen=True, eq=False)
class MFunctionChain:
    """All half-line Weyl functions of one matrix, as exact rationals.

    ``m_plus[k]`` is the Weyl function of the trailing block J_[k+1, n]
    (k = 0..n-1); ``m_minus[k]`` that of the leading block J_[1, k-1]
    evaluated at its last coordinate (k = 2..n+1, stored at index k).
    The k = 0 plus-function and every minus-function carry the complex b1.
    """

    source: FiniteJacobi
    m_plus: tuple[RationalFunction, ...]
    m_minus: tuple[RationalFunction | None, ...]

    def plus(self, k: int) -> RationalFunction:
        return self.m_plus[k]

    def minus(self, k: int) -> RationalFunction:
        out = self.m_minus[k]
        if out is None:
            raise IndexError(f"m_minus undefined for k={k}")
        return out


def mchain(j: FiniteJacobi, tol: Tolerances = DEFAULT) -> MFunctionChain:
    """Build the full m-function chain through principal-minor determinants.

    The chain relation a_k^2 m_+(z, k) + 1 / m_+(z, k-1) = b_k - z is
    validated on off-spectrum samples; violation raises
    :class:`NumericalError`.
    """
    n = j.n
    q = trailing_charpolys(j)      # q[k-1] = det(zI - J_[k,n]), k = 1..n+1
    p = principal_charpolys(j)     # p[k] = det(zI - J_[1,k]),  k = 0..n
    m_plus = []
    for k in range(n):
        rat = RationalFunction(-q[k + 1], q[k])
        if k >= 1:
            rat = rat.realified(tol.real * 10)
        m_plus.append(rat)
    m_minus: list[RationalFunction | None] = [None, None]
    for k in range(2, n + 2):
        m_minus.append(RationalFunction(-p[k - 2], p[k - 1]))
    chain = MFunctionChain(j, tuple(m_plus), tuple(m_minus))
    _validate_connect(chain, tol)
    return chain


def _validate_connect(chain: MFunctionChain, tol: Tolerances) -> None:
    j = chain.source
    n = j.n
    b = j.b_full
    a = np.asarray(j.a, float)
    radius = 2.0 * max(1.0, j.norm_bound())
    samples = [radius * np.exp(1j * (0.37 + 2.1 * t)) - 1.3j for t in range(3)]
    for z in samples:
        scale = max(1.0, abs(z))
        for k in range(1, n):
            lhs = (a[k - 1] ** 2) * chain.plus(k)(z) + 1.0 / chain.plus(k - 1)(z)
            rhs = b[k - 1] - z
            if abs(lhs - rhs) > tol.chainrel * scale * max(1.0, abs(rhs)):
                raise NumericalError(
                    f"chain relation residual {abs(lhs - rhs):.2e} at k={k}")
        lhs = 1.0 / chain.plus(n - 1)(z)
        rhs = b[n - 1] - z
        if abs(lhs - rhs) > tol.chainrel * scale * max(1.0, abs(rhs)):
            raise NumericalError("terminal chain relation violated")


# --- continued fractions -----------------------------------------------------

@dataclass(frozen=True)
class JFraction:
    """Coefficient chain (b1; a_1^2, b_2; a_2^2, b_3; ...) of a J-fraction."""

    b1: complex
    pairs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "b1", complex(self.b1))
        object.__setattr__(self, "pairs",
                           tuple((float(a2), float(b)) for a2, b in self.pairs))
        if any(a2 <= 0 for a2, _ in self.pairs):
            raise ValueError("all couplings a_k^2 must be positive")

    @property
    def n(self) -> int:
        return 1 + len(self.pairs)

    def to_jacobi(self) -> FiniteJacobi:
        return FiniteJacobi(self.b1,
                            tuple(b for _, b in self.pairs),
                            tuple(np.sqrt(a2) for a2, _ in self.pairs))

    def to_rational(self, tol: Tolerances = DEFAULT) -> RationalFunction:
        """Rebuild the rational m-function from the chain (backward recursion)."""
        bs = [self.b1] + [b for _, b in self.pairs]
        a2s = [a2 for a2, _ in self.pairs]
        num = ComplexPoly(np.array([-1.0 + 0j]), tol)
        den = ComplexPoly(np.array([-bs[-1], 1.0], dtype=complex), tol)
        for k in range(len(bs) - 2, -1, -1):
            zshift = ComplexPoly(np.array([-bs[k], 1.0], dtype=complex), tol)
            num, den = -1.0 * den, zshift * den + a2s[k] * num
        return RationalFunction(num, den)

    def to_dict(self) -> dict:
        return {"b1": [self.b1.real, self.b1.imag],
                "chain": [[a2, b] for a2, b in self.pairs]}

    @classmethod
    def from_dict(cls, d: dict) -> "JFraction":
        return cls(complex(d["b1"][0], d["b1"][1]),
                   tuple((float(a2), float(b)) for a2, b in d["chain"]))


def jfraction_peel(m: RationalFunction, n: int, tol: Tolerances = DEFAULT,
                   complex_head: bool = False) -> JFraction:
    """Extract the J-fraction chain of a rational Weyl function.

    One division step per level: with m = N/D (D monic, N of exact degree
    deg D - 1 with leading coefficient -1), the next diagonal entry is read
    off as b = -(N_{r-2} + D_{r-1}) and the remainder
    R = (b - z) N - D has degree r-2 with leading coefficient a^2 > 0; the
    recursion continues on -R/a^2 over -N.  No limits at infinity are taken.

    With ``complex_head`` the first diagonal entry may be complex (the
    dissipative case); all later entries must come out real.

    Raises
    ------
    DegreeMismatch
        Wrong degrees or -1/z asymptote violated beyond ``tol.asym``.
    NotHerglotzLike
        A non-positive coupling was encountered (input is not the Weyl
        function of any matrix of the announced size).
    """
    num, den = m.num, m.den
    if den.degree != n:
        raise DegreeMismatch(f"denominator degree {den.degree}, expected {n}")
    if num.degree != n - 1:
        raise DegreeMismatch(
            f"numerator degree {num.degree}, expected {n - 1} for a -1/z asymptote")
    lead = num.lead
    if abs(lead + 1.0) > tol.asym:
        raise DegreeMismatch(f"z*m(z) tends to {-lead}, expected -1 "
                             f"(tolerance {tol.asym})")
    num = num * (1.0 / (-lead))  # force the asymptote exactly
    ncoef = num.coeffs.astype(complex)
    dcoef = den.coeffs.astype(complex)
    bs: list[complex] = []
    a2s: list[float] = []
    for r in range(n, 0, -1):
        b = -(ncoef[r - 2] if r >= 2 else 0.0) - dcoef[r - 1]
        if bs or not complex_head:
            _assert_real(b, tol, f"diagonal entry {n - r + 1}")
            b = complex(b).real
        bs.append(b)
        if r == 1:
            break
        # R = (b - z) N - D has exact degree r-2 by the choice of b
        rem = b * ncoef[: r - 1] - dcoef[: r - 1]
        rem[1:] -= ncoef[: r - 2]
        a2c = rem[r - 2]
        _assert_real(a2c, tol, f"coupling {n - r + 1}")
        a2 = float(complex(a2c).real)
        if a2 <= tol.a2_floor * max(1.0, float(np.abs(rem).max())):
            raise NotHerglotzLike(
                f"coupling a^2 = {a2:.3e} at level {n - r + 1} is not positive")
        ncoef, dcoef = -rem / a2, -ncoef[: r].copy()
        a2s.append(a2)
    return JFraction(bs[0], tuple(zip(a2s, (float(np.real(b)) for b in bs[1:]))))


def _assert_real(value: complex, tol: Tolerances, what: str) -> None:
    value = complex(value)
    if abs(value.imag) > tol.real * 1e2 * max(1.0, abs(value)):
        raise NotHerglotzLike(
            f"{what} {value} has a non-real residue beyond tolerance")


def odd_mfunction_check(m: RationalFunction, tol: Tolerances = DEFAULT) -> bool:
    """Whether m(-z) = -m(z) coefficientwise.

    For an odd Weyl function the extracted chain has all-zero diagonal
    entries.
    """
    nc = m.num.coeffs
    dc = m.den.coeffs
    scale = max(float(np.abs(nc).max()), float(np.abs(dc).max()), 1.0)
    # m odd  <=>  num and den have opposite parity
    even_num = all(abs(c) <= tol.real * 1e2 * scale for c in nc[1::2])
    odd_num = all(abs(c) <= tol.real * 1e2 * scale for c in nc[0::2])
    even_den = all(abs(c) <= tol.real * 1e2 * scale for c in dc[1::2])
    odd_den = all(abs(c) <= tol.real * 1e2 * scale for c in dc[0::2])
    return (even_num and odd_den) or (odd_num and even_den)
