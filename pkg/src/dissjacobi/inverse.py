"""Inverse spectral algorithms.

Reconstruction of the unique strict-class matrix from its non-real
eigenvalues (via the continued-fraction peel of the real-part Weyl
function), the same reconstruction driven by characteristic-function data,
mixed-data recovery of hidden tail entries from a known leading block plus
known eigenvalues, its self-adjoint counterpart with real eigenvalues, and
the block-split case with one vanishing coupling.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (InconsistentCounts, InconsistentData, NoConsistentMatrix,
                     NonUpperHalfPlane, NotHerglotzLike, PeelFailure,
                     SingularSystem)
from .jacobi import FiniteJacobi, Spectrum, principal_charpolys
from .mfunc import CharFunction, JFraction, jfraction_peel, mchain
from .poly import (ComplexPoly, HermiteData, RationalFunction, hermite_rational,
                   taylor_at)

logger = logging.getLogger("dissjacobi.inverse")


def _real_part_mfunction(s: Spectrum, tol: Tolerances) -> RationalFunction:
    """m of the real part from the spectrum: (i/c)(Pbar - P) / (Pbar + P).

    With P(z) = prod (z - z_k) the two symmetrizations have real
    coefficients Im p_j / c and Re p_j; the denominator is monic and the
    -1/z asymptote holds exactly by construction.
    """
    c = s.imag_sum
    p = ComplexPoly.from_roots(s.points(), tol)
    num = np.ascontiguousarray(p.coeffs.imag[:-1]) / c
    den = np.ascontiguousarray(p.coeffs.real)
    return RationalFunction(ComplexPoly(num.astype(complex), tol),
                            ComplexPoly(den.astype(complex), tol))


def reconstruct_from_spectrum(s: Spectrum, tol: Tolerances = DEFAULT) -> FiniteJacobi:
    """Unique strict-class matrix with the prescribed eigenvalue multiset.

    Peels the real-part Weyl function built from the prescribed points and
    lifts the result by ``i c`` in the corner, where c is the total
    imaginary mass.  ``Im b1 = c`` holds exactly by construction.

    Raises
    ------
    NonUpperHalfPlane
        If any prescribed eigenvalue has ``Im z <= 0``.
    PeelFailure
        If the continued-fraction extraction breaks down.
    """
    s = Spectrum.merged(s.points(), tol)
    if not s.in_upper_half():
        raise NonUpperHalfPlane("all prescribed eigenvalues need Im z > 0")
    c = s.imag_sum
    m = _real_part_mfunction(s, tol)
    try:
        chain = jfraction_peel(m, s.total, tol)
    except NotHerglotzLike as exc:
        raise PeelFailure(f"peel failed on spectral data: {exc}") from exc
    h = chain.to_jacobi()
    return FiniteJacobi(complex(h.b1.real, c), h.b_rest, h.a)


def reconstruct_from_charfunction(w: CharFunction,
                                  tol: Tolerances = DEFAULT) -> FiniteJacobi:
    """Reconstruction from characteristic-function data.

    Works at the W level: the full (complex) Weyl function
    m(z) = (i / beta)(W(z) - 1) with beta = lim iz(1 - W(z)) is formed as
    an exact rational and peeled with a complex head entry.  Coincides
    entrywise with :func:`reconstruct_from_spectrum` of the underlying
    spectrum; exposed separately because the input is W-level data and the
    code path is genuinely different.
    """
    s = w.spectrum
    if not s.in_upper_half():
        raise NonUpperHalfPlane("all prescribed eigenvalues need Im z > 0")
    c = s.imag_sum  # beta = 2c
    p = ComplexPoly.from_roots(s.points(), tol)
    pbar = p.conjugate_coeffs()
    num = (1j / (2.0 * c)) * (pbar - p)
    try:
        chain = jfraction_peel(RationalFunction(num, p), s.total, tol,
                               complex_head=True)
    except NotHerglotzLike as exc:
        raise PeelFailure(f"peel failed on characteristic data: {exc}") from exc
    return chain.to_jacobi()


# --- mixed data --------------------------------------------------------------

@dataclass(frozen=True)
class MixedData:
    """Known leading block plus known non-real eigenvalues of the full matrix.

    ``prefix`` is the strict-class block J_[1, n-r] (entries
    b_1, a_1, ..., a_{n-r-1}, b_{n-r}), ``spectrum`` carries r = n - prefix.n
    known eigenvalues counting multiplicity.
    """

    prefix: FiniteJacobi
    spectrum: Spectrum
    n: int

    def __post_init__(self):
        r = self.spectrum.total
        if not 1 <= r <= self.n - 1:
            raise InconsistentCounts("need 1 <= r <= n-1 known eigenvalues")
        if self.prefix.n != self.n - r:
            raise InconsistentCounts(
                f"prefix has {self.prefix.n} rows, expected {self.n - r}")
        if not self.prefix.is_strict:
            raise InconsistentCounts("prefix must be a strict-class block")
        if not self.spectrum.in_upper_half():
            raise NonUpperHalfPlane("known eigenvalues must lie in C+")

    def to_dict(self) -> dict:
        return {"n": self.n, "prefix": self.prefix.to_dict(),
                "spectrum": self.spectrum.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "MixedData":
        return cls(FiniteJacobi.from_dict(d["prefix"]),
                   Spectrum.from_dict(d["spectrum"]), int(d["n"]))


def _node_scaling(points) -> tuple[float, float]:
    pts = np.asarray(points, dtype=complex)
    mu = float(np.mean(pts.real))
    sigma = float(np.mean(np.abs(pts - mu)))
    return mu, max(sigma, 1e-2)


def _affine_pullback(p: ComplexPoly, mu: float, sigma: float) -> ComplexPoly:
    """q(z) = p((z - mu) / sigma) via Horner composition."""
    out = ComplexPoly(np.array([0.0 + 0j]), p.tol)
    lin = ComplexPoly(np.array([-mu / sigma, 1.0 / sigma], dtype=complex), p.tol)
    for c in p.coeffs[::-1]:
        out = out * lin + ComplexPoly(np.array([c]), p.tol)
    return out


def _hermite_scaled(nodes: list[tuple[complex, list[complex]]], r: int,
                    tol: Tolerances) -> RationalFunction:
    """Degree (r-1)/r real interpolant, solved in a centered/scaled variable."""
    mu, sigma = _node_scaling([z for z, _ in nodes])
    scaled = []
    for z, vals in nodes:
        zh = (z - mu) / sigma
        scaled.append((zh, tuple(v * sigma ** p for p, v in enumerate(vals))))
    phi_h = hermite_rational(HermiteData(tuple(scaled)), r - 1, r,
                             self_conjugate=True, tol=tol)
    num = _affine_pullback(phi_h.num, mu, sigma)
    den = _affine_pullback(phi_h.den, mu, sigma)
    return RationalFunction(num, den)


def mixed_recover(d: MixedData, tol: Tolerances = DEFAULT) -> FiniteJacobi:
    """Recover the hidden tail a_{n-r}, b_{n-r+1}, ..., a_{n-1}, b_n.

    The boundary function Phi = a_{n-r}^2 m_+(z, n-r) is the unique
    (r-1)/r real rational matching the derivative values of
    1 / m_-(z, n-r+1) at the known eigenvalues and their mirrors; the
    coupling is its residue at infinity and the remaining self-adjoint
    tail is peeled from Phi / a_{n-r}^2.
    """
    n, r = d.n, d.spectrum.total
    q = d.prefix.n  # = n - r
    p = principal_charpolys(d.prefix)
    inv_minus = RationalFunction(-p[q], p[q - 1])  # 1 / m_-(z, q+1)
    nodes: list[tuple[complex, list[complex]]] = []
    for z, mult in d.spectrum.entries:
        if abs(p[q - 1](z)) <= 1e-12 * max(1.0, float(np.abs(p[q - 1].coeffs).max())
                                           * max(1.0, abs(z)) ** (q - 1)):
            raise NoConsistentMatrix(
                f"eigenvalue {z} collides with the known block spectrum")
        vals = taylor_at(inv_minus, z, mult - 1, tol)
        nodes.append((z, list(vals)))
    phi = _hermite_scaled(nodes, r, tol)
    a2 = -phi.num.coefficient(r - 1).real
    if a2 <= tol.a2_floor:
        raise SingularSystem(f"boundary coupling came out {a2:.3e}")
    mtail = RationalFunction(phi.num * (1.0 / a2), phi.den)
    try:
        chain = jfraction_peel(mtail, r, tol)
    except NotHerglotzLike as exc:
        raise NotHerglotzLike(f"tail data inconsistent: {exc}") from exc
    tail = chain.to_jacobi()
    full = FiniteJacobi(
        d.prefix.b1,
        d.prefix.b_rest + (float(tail.b1.real),) + tail.b_rest,
        d.prefix.a + (float(np.sqrt(a2)),) + tail.a)
    full = _refine_tail(d.prefix, full, d.spectrum)
    _check_contains_spectrum(full, d.spectrum, tol)
    return full


def _eig_conditions(j: FiniteJacobi, s: Spectrum) -> np.ndarray:
    """Scaled real residual vector of the prescribed-eigenvalue conditions."""
    cp = principal_charpolys(j)[-1]
    out = []
    for z, mult in s.entries:
        for p in range(mult):
            dp = cp.derivative(p)
            scale = max(1.0, float(np.abs(dp.coeffs).max())
                        * max(1.0, abs(z)) ** max(dp.degree, 0))
            v = dp(z) / scale
            out.extend([v.real, v.imag])
    return np.array(out)


def _refine_tail(prefix: FiniteJacobi, full: FiniteJacobi,
                 s: Spectrum, sweeps: int = 3) -> FiniteJacobi:
    """Damped Gauss-Newton polish of the recovered tail entries.

    The known eigenvalue conditions form a square real system in the 2r
    unknown tail entries; the interpolation result is the starting point
    and the unique solution is its attractor.  Steps that fail to reduce
    the residual or drive a coupling non-positive are rejected.
    """
    q = prefix.n
    x = np.empty(2 * (full.n - q))
    x[0::2] = full.a[q - 1:]
    x[1::2] = full.b_rest[q - 1:]

    def assemble(vec: np.ndarray) -> FiniteJacobi | None:
        if np.any(vec[0::2] <= 0.0):
            return None
        return FiniteJacobi(prefix.b1,
                            prefix.b_rest + tuple(vec[1::2]),
                            prefix.a + tuple(vec[0::2]))

    current = _eig_conditions(full, s)
    best = full
    for _ in range(sweeps):
        norm0 = float(np.linalg.norm(current))
        if norm0 < 1e-14:
            break
        jac = np.empty((len(current), len(x)))
        for i in range(len(x)):
            h = 1e-7 * max(1.0, abs(x[i]))
            xp = x.copy()
            xp[i] += h
            cand = assemble(xp)
            if cand is None:
                xp[i] -= 2 * h
                cand = assemble(xp)
                h = -h
            jac[:, i] = (_eig_conditions(cand, s) - current) / h
        step, *_ = np.linalg.lstsq(jac, -current, rcond=None)
        improved = False
        for damp in (1.0, 0.5, 0.25, 0.125):
            cand = assemble(x + damp * step)
            if cand is None:
                continue
            res = _eig_conditions(cand, s)
            if np.linalg.norm(res) < norm0:
                x = x + damp * step
                current = res
                best = cand
                improved = True
                break
        if not improved:
            break
    return best


def _check_contains_spectrum(j: FiniteJacobi, s: Spectrum, tol: Tolerances) -> None:
    cp = principal_charpolys(j)[-1]
    for z, mult in s.entries:
        for pp in range(mult):
            dp = cp.derivative(pp)
            scale = float(np.abs(dp.coeffs).max()) * max(1.0, abs(z)) ** max(dp.degree, 0)
            if abs(dp(z)) > 1e3 * tol.roundtrip * max(1.0, scale):
                raise InconsistentData(
                    f"recovered matrix misses eigenvalue {z} "
                    f"(order {pp} residual {abs(dp(z)):.2e})")


# --- self-adjoint mixed data -------------------------------------------------

def sa_mixed_recover(prefix_c, eigs, n: int,
                     tol: Tolerances = DEFAULT) -> FiniteJacobi:
    """Self-adjoint recovery: known prefix c_1..c_{2n-1-j} plus j eigenvalues.

    Entries use the single-sequence convention c_{2k-1} = b_k, c_{2k} = a_k.
    The j missing trailing entries are determined by the j prescribed
    (distinct, real) eigenvalues; there may be no consistent matrix, in
    which case :class:`NoConsistentMatrix` is raised.
    """
    eigs = [float(x) for x in eigs]
    j = len(eigs)
    prefix_c = [float(x) for x in prefix_c]
    if len(set(eigs)) != j:
        raise InconsistentCounts("prescribed eigenvalues must be distinct")
    if not 1 <= j <= n or len(prefix_c) != 2 * n - 1 - j:
        raise InconsistentCounts(
            f"need 1 <= j <= n and 2n-1-j = {2 * n - 1 - j} known entries, "
            f"got {len(prefix_c)}")
    s = j // 2
    try:
        if j % 2 == 0:
            # known block J_[1, n-s]; unknown coupling + s x s tail
            known = _jacobi_from_c(prefix_c, n - s)
            vals = _boundary_values(known, eigs)
            nodes = [(complex(lam), [v]) for lam, v in zip(eigs, vals)]
            phi = _hermite_scaled_real(nodes, s, None, tol)
            a2 = -phi.num.coefficient(s - 1).real
            if a2 <= tol.a2_floor:
                raise NoConsistentMatrix(f"tail coupling came out {a2:.3e}")
            tail = _peel_tail(phi, a2, s, tol)
            full = FiniteJacobi(known.b1,
                                known.b_rest + (float(tail.b1.real),) + tail.b_rest,
                                known.a + (float(np.sqrt(a2)),) + tail.a)
        else:
            # known entries end at a_{n-s-1}; unknown (s+1) x (s+1) tail block
            known = _jacobi_from_c(prefix_c[: 2 * (n - s - 1) - 1], n - s - 1)
            a_link = prefix_c[-1]
            if a_link <= 0:
                raise InconsistentCounts("linking coupling must be positive")
            vals = _boundary_values(known, eigs)
            nodes = [(complex(lam), [v]) for lam, v in zip(eigs, vals)]
            phi = _hermite_scaled_real(nodes, s + 1, a_link ** 2, tol)
            tail = _peel_tail(phi, a_link ** 2, s + 1, tol)
            full = FiniteJacobi(known.b1,
                                known.b_rest + (float(tail.b1.real),) + tail.b_rest,
                                known.a + (a_link,) + tail.a)
    except SingularSystem as exc:
        # in this orientation a failed solve means the data admits no matrix
        raise NoConsistentMatrix(str(exc)) from exc
    for lam in eigs:
        cp = principal_charpolys(full)[-1]
        scale = float(np.abs(cp.coeffs).max()) * max(1.0, abs(lam)) ** full.n
        if abs(cp(lam)) > 1e3 * tol.roundtrip * max(1.0, scale):
            raise NoConsistentMatrix(
                f"recovered matrix misses eigenvalue {lam} "
                f"(residual {abs(cp(lam)):.2e})")
    return full


def _jacobi_from_c(cs, size: int) -> FiniteJacobi:
    if len(cs) != 2 * size - 1:
        raise InconsistentCounts("entry sequence length mismatch")
    bs = [cs[2 * k] for k in range(size)]
    as_ = [cs[2 * k + 1] for k in range(size - 1)]
    return FiniteJacobi(bs[0], tuple(bs[1:]), tuple(as_))


def _boundary_values(known: FiniteJacobi, eigs) -> list[complex]:
    """1 / m_-(lambda, q+1) of the known block at the prescribed eigenvalues."""
    p = principal_charpolys(known)
    q = known.n
    inv_minus = RationalFunction(-p[q], p[q - 1])
    out = []
    for lam in eigs:
        scale = float(np.abs(p[q - 1].coeffs).max()) * max(1.0, abs(lam)) ** (q - 1)
        if abs(p[q - 1](lam)) <= 1e-12 * max(1.0, scale):
            raise NoConsistentMatrix(
                f"eigenvalue {lam} collides with the known block spectrum")
        out.append(complex(inv_minus(lam)))
    return out


def _hermite_scaled_real(nodes, r: int, fixed_lead: float | None,
                         tol: Tolerances) -> RationalFunction:
    """Real-node variant; with ``fixed_lead`` the numerator residue -a^2 is pinned."""
    if fixed_lead is None:
        return _hermite_scaled(nodes, r, tol)
    # subtract the pinned numerator term and interpolate the remainder:
    # Phi = (-a^2 z^{r-1} + lower) / den with den monic of degree r
    mu, sigma = _node_scaling([z for z, _ in nodes])
    rows = []
    rhs = []
    for lam, vals in nodes:
        lh = (lam - mu) / sigma
        v = vals[0]
        # unknowns: r-1 lower numerator coeffs, r lower denominator coeffs
        row = np.zeros(2 * r - 1, dtype=complex)
        for k in range(r - 1):
            row[k] = lh ** k
        for k in range(r):
            row[r - 1 + k] = -v * lh ** k
        rows.append(row)
        rhs.append(v * lh ** r + (fixed_lead / sigma) * lh ** (r - 1))
    a = np.array(rows)
    b = np.array(rhs)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    residual = float(np.linalg.norm(a @ sol - b))
    if residual > tol.interp * max(1.0, float(np.linalg.norm(b))):
        raise SingularSystem(f"pinned interpolation inconsistent ({residual:.2e})")
    num_h = np.concatenate([sol[: r - 1], [-fixed_lead / sigma]])
    den_h = np.concatenate([sol[r - 1:], [1.0]])
    num = _affine_pullback(ComplexPoly(num_h), mu, sigma)
    den = _affine_pullback(ComplexPoly(den_h), mu, sigma)
    return RationalFunction(num, den).realified(1e-6)


def _peel_tail(phi: RationalFunction, a2: float, size: int,
               tol: Tolerances) -> FiniteJacobi:
    mtail = RationalFunction(phi.num * (1.0 / a2), phi.den)
    try:
        chain = jfraction_peel(mtail, size, tol)
    except NotHerglotzLike as exc:
        raise NoConsistentMatrix(f"tail peel failed: {exc}") from exc
    return chain.to_jacobi()


# --- block-split data --------------------------------------------------------

@dataclass(frozen=True)
class BlockData:
    """Extended-class data: one vanishing coupling at position p.

    ``nonreal`` carries the p non-real eigenvalues counting multiplicity
    (spectrum of the dissipative block), ``real_eigs`` j distinct real
    eigenvalues of the self-adjoint block, and ``tail`` the known entries
    c_{2p+j+1}, ..., c_{2n-1}.
    """

    p: int
    nonreal: Spectrum
    real_eigs: tuple[float, ...]
    tail: tuple[float, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "real_eigs", tuple(float(x) for x in self.real_eigs))
        object.__setattr__(self, "tail", tuple(float(x) for x in self.tail))
        j = len(self.real_eigs)
        if not 1 <= self.p <= self.n - 1:
            raise InconsistentCounts("need 1 <= p <= n-1")
        if self.nonreal.total != self.p:
            raise InconsistentCounts("non-real multiplicities must sum to p")
        if not self.nonreal.in_upper_half():
            raise NonUpperHalfPlane("non-real eigenvalues must lie in C+")
        if len(self.tail) != 2 * self.n - 1 - (2 * self.p + j):
            raise InconsistentCounts(
                f"expected {2 * self.n - 1 - 2 * self.p - j} tail entries, "
                f"got {len(self.tail)}")
        if len(set(self.real_eigs)) != j or not 1 <= j <= self.n - self.p:
            raise InconsistentCounts(
                "real eigenvalues must be distinct, 1 <= j <= n - p")

    def to_dict(self) -> dict:
        return {"n": self.n, "p": self.p,
                "nonreal_spectrum": self.nonreal.to_dict(),
                "real_eigs": list(self.real_eigs),
                "tail": list(self.tail)}

    @classmethod
    def from_dict(cls, d: dict) -> "BlockData":
        return cls(int(d["p"]), Spectrum.from_dict(d["nonreal_spectrum"]),
                   tuple(d["real_eigs"]), tuple(d["tail"]), int(d["n"]))


def block_recover(d: BlockData, tol: Tolerances = DEFAULT) -> FiniteJacobi:
    """Recover the full extended-class matrix from block data.

    The dissipative p x p block is rebuilt from its non-real eigenvalues;
    the self-adjoint block is recovered from its known trailing entries
    and j real eigenvalues (suffix-oriented recovery via reflection).
    """
    j11 = reconstruct_from_spectrum(d.nonreal, tol)
    m = d.n - d.p
    if m == 1:
        j22 = FiniteJacobi(d.real_eigs[0], (), ())
    else:
        j22 = _sa_recover_suffix(list(d.tail), list(d.real_eigs), m, tol)
    b_rest = j11.b_rest + (float(j22.b1.real),) + j22.b_rest
    a = j11.a + (0.0,) + j22.a
    return FiniteJacobi(j11.b1, b_rest, a)


def _sa_recover_suffix(suffix_c, eigs, n: int, tol: Tolerances) -> FiniteJacobi:
    """Known suffix c_{j+1}..c_{2n-1} plus j eigenvalues; recover c_1..c_j.

    Reflection maps the problem onto the known-prefix orientation: the
    reversed matrix has entry sequence read backwards and an identical
    (real) spectrum.
    """
    reflected_prefix = suffix_c[::-1]
    rec = sa_mixed_recover(reflected_prefix, eigs, n, tol)
    return _reflect(rec)


def _reflect(j: FiniteJacobi) -> FiniteJacobi:
    bs = [complex(j.b1)] + list(j.b_rest)
    bs.reverse()
    return FiniteJacobi(bs[0], tuple(float(b.real) if isinstance(b, complex) else b
                                     for b in bs[1:]), j.a[::-1])
