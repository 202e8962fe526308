"""Polynomial and rational-function arithmetic.

Coefficients are stored in ascending degree order as complex ndarrays.
The module provides root finding with multiplicity clustering (companion
matrix + in-repo QR), rational Hermite interpolation with prescribed
derivative values, and Taylor expansion of rational functions at regular
points.  All values are immutable after construction.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import numpy.polynomial.polynomial as npp
import scipy.linalg

from . import eigen
from .config import DEFAULT, Tolerances
from .errors import (DegreeZero, NonRealResult, PoleAtPoint, SingularSystem)

logger = logging.getLogger("dissjacobi.poly")


def _trim(coeffs: np.ndarray, rel: float) -> np.ndarray:
    """Drop trailing coefficients below ``rel`` times the largest magnitude."""
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=complex))
    scale = np.abs(coeffs).max()
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = len(coeffs)
    while keep > 1 and abs(coeffs[keep - 1]) <= rel * scale:
        keep -= 1
    return coeffs[:keep].copy()


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Polynomial with complex coefficients, ascending degree, trimmed."""

    coeffs: np.ndarray
    tol: Tolerances = field(default=DEFAULT, repr=False, compare=False)

    def __post_init__(self):
        c = _trim(self.coeffs, self.tol.trim)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    # --- constructors -------------------------------------------------
    @classmethod
    def from_roots(cls, roots, tol: Tolerances = DEFAULT) -> "ComplexPoly":
        """Monic polynomial with the given root multiset."""
        roots = np.asarray(list(roots), dtype=complex)
        if len(roots) == 0:
            return cls(np.array([1.0 + 0j]), tol)
        return cls(npp.polyfromroots(roots), tol)

    @classmethod
    def one(cls, tol: Tolerances = DEFAULT) -> "ComplexPoly":
        return cls(np.array([1.0 + 0j]), tol)

    # --- basic queries -------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> complex:
        return complex(self.coeffs[-1])

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0

    def __call__(self, z):
        return npp.polyval(z, self.coeffs)

    def coefficient(self, k: int) -> complex:
        """Coefficient of z**k (0 beyond the stored degree)."""
        return complex(self.coeffs[k]) if 0 <= k <= self.degree else 0.0 + 0j

    # --- arithmetic ----------------------------------------------------
    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            return ComplexPoly(npp.polymul(self.coeffs, other.coeffs), self.tol)
        return ComplexPoly(self.coeffs * other, self.tol)

    __rmul__ = __mul__

    def __add__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(npp.polyadd(self.coeffs, other.coeffs), self.tol)

    def __sub__(self, other: "ComplexPoly") -> "ComplexPoly":
        return ComplexPoly(npp.polysub(self.coeffs, other.coeffs), self.tol)

    def __neg__(self) -> "ComplexPoly":
        return ComplexPoly(-self.coeffs, self.tol)

    def derivative(self, m: int = 1) -> "ComplexPoly":
        if m <= 0:
            return self
        return ComplexPoly(npp.polyder(self.coeffs, m), self.tol)

    def monic(self) -> "ComplexPoly":
        return ComplexPoly(self.coeffs / self.coeffs[-1], self.tol)

    def shifted(self, z0: complex) -> "ComplexPoly":
        """Coefficients of p(z0 + w) as a polynomial in w (Horner composition)."""
        out = np.zeros(1, dtype=complex)
        for c in self.coeffs[::-1]:
            out = npp.polymul(out, np.array([z0, 1.0], dtype=complex))
            out = npp.polyadd(out, np.array([c], dtype=complex))
        return ComplexPoly(out, self.tol)

    def conjugate_coeffs(self) -> "ComplexPoly":
        """Polynomial with conjugated coefficients; its roots are the mirrored ones."""
        return ComplexPoly(np.conj(self.coeffs), self.tol)

    # --- realness ------------------------------------------------------
    def imag_residue(self) -> float:
        scale = np.abs(self.coeffs).max()
        if scale == 0.0:
            return 0.0
        return float(np.abs(self.coeffs.imag).max() / scale)

    def is_real_within(self, rel: float) -> bool:
        return self.imag_residue() <= rel

    def real_coeffs(self, rel: float | None = None) -> np.ndarray:
        rel = self.tol.real if rel is None else rel
        if not self.is_real_within(rel):
            raise NonRealResult(
                f"imaginary residue {self.imag_residue():.2e} exceeds {rel:.2e}")
        out = self.coeffs.real.copy()
        out.flags.writeable = False
        return out


def cluster_roots(points, tol: Tolerances = DEFAULT) -> list[tuple[complex, int]]:
    """Group a root list into (representative, multiplicity) clusters.

    Transitive clustering: two roots belong together when their distance is
    below ``tol.cluster * max(1, |z|)``; the representative is the cluster
    mean.  Output is sorted by (Re, Im) of the representative.
    """
    pts = list(np.asarray(points, dtype=complex))
    m = len(pts)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            cut = tol.cluster * max(1.0, abs(pts[i]), abs(pts[j]))
            if abs(pts[i] - pts[j]) <= cut:
                parent[find(i)] = find(j)
    groups: dict[int, list[complex]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(pts[i])
    out = [(complex(np.mean(g)), len(g)) for g in groups.values()]
    out.sort(key=lambda e: (e[0].real, e[0].imag))
    return out


def roots(p: ComplexPoly, tol: Tolerances = DEFAULT) -> list[tuple[complex, int]]:
    """Roots of ``p`` with multiplicities assigned by clustering.

    Degrees 1 and 2 use closed forms; higher degrees use the balanced
    companion matrix and the in-repo shifted-QR eigensolver.

    Raises
    ------
    DegreeZero
        If ``p`` is constant.
    NoConvergence
        If the QR iteration fails.
    """
    if p.degree < 1:
        raise DegreeZero("cannot take roots of a constant polynomial")
    c = p.monic().coeffs
    n = p.degree
    if n == 1:
        raw = np.array([-c[0]], dtype=complex)
    elif n == 2:
        b, a0 = c[1], c[0]
        disc = np.sqrt(b * b - 4.0 * a0 + 0j)
        # avoid cancellation: pick the larger-magnitude root first
        q = -(b + disc) / 2.0 if abs(b + disc) >= abs(b - disc) else -(b - disc) / 2.0
        r1 = q
        r2 = a0 / q if q != 0 else -b - q
        raw = np.array([r1, r2], dtype=complex)
    else:
        comp = np.zeros((n, n), dtype=complex)
        comp[1:, :-1] = np.eye(n - 1)
        comp[:, -1] = -c[:-1]
        raw = _newton_polish(c, eigen.eigvals(comp))
    return cluster_roots(raw, tol)


def _newton_polish(monic: np.ndarray, pts: np.ndarray, sweeps: int = 3) -> np.ndarray:
    """Guarded Newton refinement of approximate roots of a monic polynomial.

    Near a multiple root the step is damped naturally (p/p' ~ offset/m);
    steps that do not shrink |p| or run away are rejected.
    """
    dmonic = npp.polyder(monic)
    out = pts.astype(complex).copy()
    for i, z in enumerate(out):
        for _ in range(sweeps):
            pv = npp.polyval(z, monic)
            dv = npp.polyval(z, dmonic)
            if dv == 0 or not np.isfinite(dv):
                break
            step = pv / dv
            if not np.isfinite(step) or abs(step) > 0.1 * max(1.0, abs(z)):
                break
            znew = z - step
            if abs(npp.polyval(znew, monic)) >= abs(pv):
                break
            z = znew
        out[i] = z
    return out


def expand_roots(root_mults, tol: Tolerances = DEFAULT) -> ComplexPoly:
    """Monic polynomial from (root, multiplicity) pairs."""
    pts = []
    for z, m in root_mults:
        pts.extend([z] * m)
    return ComplexPoly.from_roots(pts, tol)


@dataclass(frozen=True, eq=False)
class RationalFunction:
    """Ratio of two polynomials, denominator normalized monic."""

    num: ComplexPoly
    den: ComplexPoly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        lead = self.den.lead
        if lead != 1.0:
            object.__setattr__(self, "num", self.num * (1.0 / lead))
            object.__setattr__(self, "den", self.den * (1.0 / lead))

    @classmethod
    def from_coeffs(cls, num, den, tol: Tolerances = DEFAULT) -> "RationalFunction":
        return cls(ComplexPoly(np.asarray(num, dtype=complex), tol),
                   ComplexPoly(np.asarray(den, dtype=complex), tol))

    @property
    def tol(self) -> Tolerances:
        return self.den.tol

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def is_real_within(self, rel: float) -> bool:
        return self.num.is_real_within(rel) and self.den.is_real_within(rel)

    def realified(self, rel: float | None = None) -> "RationalFunction":
        """Same function with imaginary coefficient residue truncated.

        Raises :class:`NonRealResult` when the residue exceeds the tolerance.
        """
        return RationalFunction(
            ComplexPoly(self.num.real_coeffs(rel).astype(complex), self.num.tol),
            ComplexPoly(self.den.real_coeffs(rel).astype(complex), self.den.tol))

    def cancel_common_roots(self, tol: Tolerances = DEFAULT) -> "RationalFunction":
        """Remove numerator/denominator roots closer than ``tol.root``."""
        if self.num.is_zero() or self.num.degree < 1 or self.den.degree < 1:
            return self
        num_roots = [z for z, m in roots(self.num, tol) for _ in range(m)]
        den_roots = [z for z, m in roots(self.den, tol) for _ in range(m)]
        lead = self.num.lead
        changed = False
        kept_den = []
        for zd in den_roots:
            hit = None
            for i, zn in enumerate(num_roots):
                if abs(zn - zd) <= tol.root * max(1.0, abs(zd)):
                    hit = i
                    break
            if hit is None:
                kept_den.append(zd)
            else:
                num_roots.pop(hit)
                changed = True
        if not changed:
            return self
        return RationalFunction(
            ComplexPoly.from_roots(num_roots, tol) * lead,
            ComplexPoly.from_roots(kept_den, tol))


def taylor_at(f: RationalFunction, z0: complex, order: int,
              tol: Tolerances = DEFAULT) -> np.ndarray:
    """Derivative values f(z0), f'(z0), ..., f^(order)(z0).

    Expands numerator and denominator around ``z0`` and divides the power
    series; raises :class:`PoleAtPoint` when ``z0`` is (numerically) a pole.
    """
    den_shift = f.den.shifted(z0).coeffs
    num_shift = f.num.shifted(z0).coeffs
    scale = np.abs(f.den.coeffs).max() * max(1.0, abs(z0)) ** f.den.degree
    if abs(den_shift[0]) <= tol.pole * scale:
        raise PoleAtPoint(f"expansion point {z0} is within {tol.pole:.1e} of a pole")
    k = order + 1
    a = np.zeros(k, dtype=complex)
    b = np.zeros(k, dtype=complex)
    a[:min(k, len(num_shift))] = num_shift[:k]
    b[:min(k, len(den_shift))] = den_shift[:k]
    series = np.zeros(k, dtype=complex)
    for i in range(k):
        acc = a[i]
        for j in range(i):
            acc -= series[j] * b[i - j]
        series[i] = acc / b[0]
    facts = np.array([math.factorial(i) for i in range(k)], dtype=float)
    return series * facts


@dataclass(frozen=True)
class HermiteData:
    """Interpolation nodes with prescribed derivative values.

    ``nodes`` maps each point ``z_j`` to the values
    ``f(z_j), f'(z_j), ..., f^(l_j - 1)(z_j)``.
    """

    nodes: tuple[tuple[complex, tuple[complex, ...]], ...]

    def __post_init__(self):
        nodes = tuple((complex(z), tuple(complex(v) for v in vals))
                      for z, vals in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        for z, vals in nodes:
            if len(vals) == 0:
                raise ValueError("each node needs at least one value")

    @property
    def total_multiplicity(self) -> int:
        return sum(len(vals) for _, vals in self.nodes)

    def validated(self, tol: Tolerances = DEFAULT) -> "HermiteData":
        pts = [z for z, _ in self.nodes]
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if abs(pts[i] - pts[j]) <= tol.node * max(1.0, abs(pts[i])):
                    raise ValueError(f"nodes {pts[i]} and {pts[j]} coincide")
        return self

    def with_conjugates(self, tol: Tolerances = DEFAULT) -> "HermiteData":
        """Add the mirrored node with conjugated values for every non-real node."""
        out = list(self.nodes)
        for z, vals in self.nodes:
            if abs(z.imag) > tol.node * max(1.0, abs(z)):
                out.append((np.conj(z), tuple(np.conj(v) for v in vals)))
        return HermiteData(tuple(out))


def _falling(j: int, p: int) -> float:
    """j (j-1) ... (j-p+1); zero when p > j."""
    if p > j:
        return 0.0
    return float(math.perm(j, p))


def _interp_rows(data: HermiteData, deg_num: int, deg_den: int):
    """Linearized interpolation system for L_num / L_den, L_den monic.

    Condition: d^p/dz^p [L_num(z) - T_j(z) L_den(z)] = 0 at z_j for p < l_j,
    with T_j the Taylor polynomial of the prescribed values.  Unknowns are
    the deg_num+1 numerator coefficients followed by the deg_den lower
    denominator coefficients.
    """
    n_unk = (deg_num + 1) + deg_den
    rows = []
    rhs = []
    for z, vals in data.nodes:
        zp = np.array([z ** j if j else 1.0 for j in range(max(deg_num, deg_den) + 1)],
                      dtype=complex)
        for p in range(len(vals)):
            row = np.zeros(n_unk, dtype=complex)
            for j in range(deg_num + 1):
                if p <= j:
                    row[j] = _falling(j, p) * (zp[j - p] if j > p else 1.0)
            b = 0.0 + 0j
            for q in range(p + 1):
                cq = math.comb(p, q) * vals[q]
                pq = p - q
                for j in range(deg_den):
                    if pq <= j:
                        row[deg_num + 1 + j] -= cq * _falling(j, pq) * (
                            zp[j - pq] if j > pq else 1.0)
                if pq <= deg_den:
                    b += cq * _falling(deg_den, pq) * z ** (deg_den - pq)
            rows.append(row)
            rhs.append(b)
    return np.array(rows), np.array(rhs)


def hermite_rational(data: HermiteData, deg_num: int, deg_den: int,
                     self_conjugate: bool = True,
                     tol: Tolerances = DEFAULT) -> RationalFunction:
    """Real-coefficient rational interpolant with prescribed derivative data.

    Finds ``L_num / L_den`` with ``deg L_num <= deg_num``, ``L_den`` monic of
    degree ``deg_den`` and real coefficients, matching every prescribed
    derivative value.  With ``self_conjugate`` the mirrored nodes (conjugated
    values) are appended automatically for non-real nodes.

    Raises
    ------
    SingularSystem
        If the linear system is inconsistent at ``tol.interp`` or the
        interpolant fails to reproduce the data (pole at a node).
    NonRealResult
        If the solution carries an imaginary residue above ``tol.real``.
    """
    data = data.validated(tol)
    if self_conjugate:
        data = data.with_conjugates(tol)
    a, b = _interp_rows(data, deg_num, deg_den)
    sol, _, rank, _ = scipy.linalg.lstsq(a, b, lapack_driver="gelsd")
    residual = float(np.linalg.norm(a @ sol - b))
    scale = max(1.0, float(np.linalg.norm(b)), float(np.abs(a).max()))
    cond = float(np.linalg.cond(a)) if min(a.shape) > 0 else 0.0
    logger.debug("hermite system %sx%s rank=%d cond=%.3e residual=%.3e",
                 a.shape[0], a.shape[1], rank, cond, residual)
    if residual > tol.interp * scale:
        raise SingularSystem(
            f"interpolation system inconsistent: residual {residual:.2e} "
            f"(rank {rank}, cond {cond:.2e})")
    num = ComplexPoly(sol[:deg_num + 1], tol)
    den = ComplexPoly(np.concatenate([sol[deg_num + 1:], [1.0 + 0j]]), tol)
    result = RationalFunction(num, den).realified(tol.real * max(1.0, cond))
    if result.num.is_zero():
        # identically zero interpolant; valid iff the data is all zeros
        if any(abs(v) > tol.interp for _, vals in data.nodes for v in vals):
            raise SingularSystem("zero interpolant cannot match nonzero data")
        return result
    # reproduce the prescribed values; a vanishing denominator at a node
    # shows up here rather than in the linear residual
    for z, vals in data.nodes:
        try:
            got = taylor_at(result, z, len(vals) - 1, tol)
        except PoleAtPoint as exc:
            raise SingularSystem(f"interpolant has a pole at node {z}") from exc
        err = np.abs(got - np.asarray(vals))
        vscale = np.maximum(1.0, np.abs(vals))
        if np.any(err > tol.interp * max(1.0, cond) * vscale):
            raise SingularSystem(
                f"interpolant misses node {z}: error {err.max():.2e}")
    return result
