"""Dissipative Jacobi matrices, spectra, root chains and diagnostics.

A matrix here is tri-diagonal and symmetric (not Hermitian): the top-left
entry ``b1`` may have a positive imaginary part, all remaining diagonal
entries are real and the couplings ``a_k`` are nonnegative reals.  The
strict dissipative class has ``Im b1 > 0`` and every ``a_k > 0``; the
extended class permits exactly one vanishing coupling, which splits the
matrix into a dissipative block and a self-adjoint block.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import eigen
from .config import DEFAULT, Tolerances
from .errors import (ClusterAmbiguityWarning, NotAnEigenvalue, NumericalError,
                     SampleOnSpectrum)
from .poly import ComplexPoly, cluster_roots, roots


@dataclass(frozen=True, eq=False)
class FiniteJacobi:
    """Finite tri-diagonal matrix: complex ``b1``, real tail, couplings ``a``."""

    b1: complex
    b_rest: tuple[float, ...]
    a: tuple[float, ...]

    def __post_init__(self):
        b1 = complex(self.b1)
        b_rest = tuple(float(b) for b in self.b_rest)
        a = tuple(float(x) for x in self.a)
        object.__setattr__(self, "b1", b1)
        object.__setattr__(self, "b_rest", b_rest)
        object.__setattr__(self, "a", a)
        if len(a) != len(b_rest):
            raise ValueError("need exactly n-1 couplings for n diagonal entries")
        if b1.imag < 0:
            raise ValueError("Im b1 must be nonnegative")
        if any(x < 0 for x in a):
            raise ValueError("couplings must be nonnegative")
        if sum(1 for x in a if x == 0.0) > 1:
            raise ValueError("at most one coupling may vanish (extended class)")

    # --- structure -------------------------------------------------------
    @property
    def n(self) -> int:
        return 1 + len(self.b_rest)

    @property
    def b_full(self) -> np.ndarray:
        return np.concatenate([[complex(self.b1)], np.asarray(self.b_rest, float)])

    @property
    def is_strict(self) -> bool:
        return self.b1.imag > 0 and all(x > 0 for x in self.a)

    @property
    def is_selfadjoint(self) -> bool:
        return self.b1.imag == 0

    @property
    def zero_coupling(self) -> int | None:
        """1-based index p with a_p = 0, or None."""
        for k, x in enumerate(self.a):
            if x == 0.0:
                return k + 1
        return None

    def norm_bound(self) -> float:
        """Row-sum bound on the operator norm."""
        rows = np.abs(self.b_full)
        pads = np.concatenate([[0.0], np.asarray(self.a, float)])
        return float(np.max(rows + pads + np.concatenate([np.asarray(self.a, float), [0.0]])))

    def dense(self) -> np.ndarray:
        m = np.diag(self.b_full.astype(complex))
        for k, x in enumerate(self.a):
            m[k, k + 1] = m[k + 1, k] = x
        return m

    def real_part(self) -> "FiniteJacobi":
        return FiniteJacobi(self.b1.real, self.b_rest, self.a)

    def leading(self, k: int) -> "FiniteJacobi":
        """Upper-left k x k corner."""
        if not 1 <= k <= self.n:
            raise ValueError("leading block size out of range")
        return FiniteJacobi(self.b1, self.b_rest[:k - 1], self.a[:k - 1])

    def trailing(self, k: int) -> "FiniteJacobi":
        """Lower-right block starting at row k (1-based)."""
        if not 1 <= k <= self.n:
            raise ValueError("trailing block start out of range")
        if k == 1:
            return self
        bs = self.b_rest[k - 2:]
        return FiniteJacobi(bs[0], bs[1:], self.a[k - 1:])

    def entries_c(self) -> list:
        """Single-sequence convention c_{2k-1} = b_k, c_{2k} = a_k."""
        out: list = [self.b1 if self.b1.imag != 0 else self.b1.real]
        for bk, ak in zip(self.b_rest, self.a):
            out.append(ak)
            out.append(bk)
        return out

    # --- serialization -----------------------------------------------------
    def to_dict(self) -> dict:
        return {"n": self.n,
                "b1": [self.b1.real, self.b1.imag],
                "b": list(self.b_rest),
                "a": list(self.a)}

    @classmethod
    def from_dict(cls, d: dict) -> "FiniteJacobi":
        b1 = complex(d["b1"][0], d["b1"][1])
        j = cls(b1, tuple(d["b"]), tuple(d["a"]))
        if j.n != int(d["n"]):
            raise ValueError("declared size does not match entry counts")
        return j


@dataclass(frozen=True)
class Spectrum:
    """Multiset of eigenvalues with algebraic multiplicities."""

    entries: tuple[tuple[complex, int], ...]

    def __post_init__(self):
        entries = tuple(sorted(((complex(z), int(m)) for z, m in self.entries),
                               key=lambda e: (e[0].real, e[0].imag)))
        object.__setattr__(self, "entries", entries)
        if any(m < 1 for _, m in entries):
            raise ValueError("multiplicities must be positive")

    @classmethod
    def merged(cls, points, tol: Tolerances = DEFAULT) -> "Spectrum":
        """Cluster nearly coincident prescribed eigenvalues (with a warning).

        Points closer than ``10 * tol.cluster`` are merged into a single
        higher-multiplicity entry; the inverse algorithms are continuous
        there while the interpolation steps are not.
        """
        wide = tol.replace(cluster=10.0 * tol.cluster)
        pts = list(np.asarray(points, dtype=complex))
        clustered = cluster_roots(pts, wide)
        if len(clustered) < len(set(pts)):
            warnings.warn("merged nearly coincident eigenvalues",
                          ClusterAmbiguityWarning, stacklevel=2)
        return cls(tuple(clustered))

    @property
    def total(self) -> int:
        return sum(m for _, m in self.entries)

    @property
    def imag_sum(self) -> float:
        return float(sum(m * z.imag for z, m in self.entries))

    def in_upper_half(self) -> bool:
        return all(z.imag > 0 for z, _ in self.entries)

    def points(self) -> list[complex]:
        """Eigenvalues repeated per multiplicity, deterministic order."""
        return [z for z, m in self.entries for _ in range(m)]

    def mirrored(self) -> list[complex]:
        return [np.conj(z) for z in self.points()]

    def to_dict(self) -> dict:
        return {"eigs": [{"z": [z.real, z.imag], "mult": m} for z, m in self.entries]}

    @classmethod
    def from_dict(cls, d: dict) -> "Spectrum":
        return cls(tuple((complex(e["z"][0], e["z"][1]), int(e["mult"]))
                         for e in d["eigs"]))


@dataclass(frozen=True)
class RootChain:
    """Jordan chain e_0, ..., e_{l-1} at an eigenvalue."""

    eigenvalue: complex
    vectors: tuple[np.ndarray, ...]

    def residual(self, j: FiniteJacobi) -> float:
        m = j.dense()
        z = self.eigenvalue
        n = j.n
        res = float(np.linalg.norm(m @ self.vectors[0] - z * self.vectors[0], np.inf))
        for k in range(1, len(self.vectors)):
            r = m @ self.vectors[k] - z * self.vectors[k] - self.vectors[k - 1]
            res = max(res, float(np.linalg.norm(r, np.inf)))
        return res / max(1.0, max(np.linalg.norm(v, np.inf) for v in self.vectors))


# --- polynomial recursion ---------------------------------------------------

def orthopoly(j: FiniteJacobi, z: complex) -> np.ndarray:
    """Values P_1(z), ..., P_{n+1}(z) of the first-kind recursion.

    Three-term recursion with P_0 = 0, P_1 = 1, boundary couplings
    a_0 = a_n = 1; z_0 is an eigenvalue iff P_{n+1}(z_0) = 0.
    """
    n = j.n
    b = j.b_full
    a = np.concatenate([np.asarray(j.a, float), [1.0]])
    out = np.empty(n + 1, dtype=complex)
    prev = 0.0 + 0j
    cur = 1.0 + 0j
    out[0] = cur
    a_prev = 1.0
    for k in range(n):
        nxt = ((z - b[k]) * cur - a_prev * prev) / a[k]
        out[k + 1] = nxt
        prev, cur = cur, nxt
        a_prev = a[k]
    return out


def orthopoly_coeffs(j: FiniteJacobi) -> list[ComplexPoly]:
    """Coefficient form of P_1, ..., P_{n+1} (same recursion, symbolic)."""
    n = j.n
    b = j.b_full
    a = np.concatenate([np.asarray(j.a, float), [1.0]])
    polys = [ComplexPoly(np.array([1.0 + 0j]))]
    prev = ComplexPoly(np.array([0.0 + 0j]))
    cur = polys[0]
    a_prev = 1.0
    for k in range(n):
        zshift = ComplexPoly(np.array([-b[k], 1.0], dtype=complex))
        nxt = (zshift * cur - a_prev * prev) * (1.0 / a[k])
        polys.append(nxt)
        prev, cur = cur, nxt
        a_prev = a[k]
    return polys


def charpoly(j: FiniteJacobi) -> ComplexPoly:
    """Monic characteristic polynomial det(zI - J) by coefficient recursion."""
    return principal_charpolys(j)[-1]


def principal_charpolys(j: FiniteJacobi) -> list[ComplexPoly]:
    """det(zI - J_[1,k]) for k = 0..n (index 0 is the constant 1)."""
    n = j.n
    b = j.b_full
    a = np.asarray(j.a, float)
    out = [ComplexPoly.one()]
    cur = ComplexPoly(np.array([-b[0], 1.0], dtype=complex))
    out.append(cur)
    prev = out[0]
    for k in range(1, n):
        zshift = ComplexPoly(np.array([-b[k], 1.0], dtype=complex))
        nxt = zshift * cur - (a[k - 1] ** 2) * prev
        out.append(nxt)
        prev, cur = cur, nxt
    return out


def trailing_charpolys(j: FiniteJacobi) -> list[ComplexPoly]:
    """det(zI - J_[k,n]) for k = 1..n+1, returned as list indexed k-1.

    The last element is the empty-block constant 1.
    """
    n = j.n
    b = j.b_full
    a = np.asarray(j.a, float)
    out = [ComplexPoly.one(), ComplexPoly(np.array([-b[n - 1], 1.0], dtype=complex))]
    for k in range(n - 2, -1, -1):
        zshift = ComplexPoly(np.array([-b[k], 1.0], dtype=complex))
        nxt = zshift * out[-1] - (a[k] ** 2) * out[-2]
        out.append(nxt)
    out.reverse()
    return out


def spectrum(j: FiniteJacobi, tol: Tolerances = DEFAULT) -> Spectrum:
    """Eigenvalues with algebraic multiplicities.

    Roots of the characteristic polynomial up to ``tol.qr_crossover``;
    dense Hessenberg QR on the materialized matrix beyond that.  For the
    strict class the imaginary parts must sum to ``Im b1``; a violation
    raises :class:`NumericalError`.
    """
    if j.n <= tol.qr_crossover:
        clustered = roots(charpoly(j), tol)
    else:
        clustered = cluster_roots(eigen.eigvals(j.dense()), tol)
    reps = [z for z, _ in clustered]
    for i in range(len(reps)):
        for k in range(i + 1, len(reps)):
            gap = abs(reps[i] - reps[k])
            if gap < 10.0 * tol.cluster * max(1.0, abs(reps[i])):
                warnings.warn(
                    f"eigenvalue clusters {reps[i]:.6g} and {reps[k]:.6g} nearly "
                    "merge at the configured tolerance",
                    ClusterAmbiguityWarning, stacklevel=2)
    spec = Spectrum(tuple(clustered))
    if j.is_strict:
        drift = abs(spec.imag_sum - j.b1.imag)
        if drift > tol.spec * max(1.0, j.b1.imag):
            raise NumericalError(
                f"imaginary parts sum to {spec.imag_sum}, expected {j.b1.imag}")
    return spec


def root_chain(j: FiniteJacobi, z0: complex, length: int,
               tol: Tolerances = DEFAULT) -> RootChain:
    """Jordan chain of the given length at eigenvalue ``z0``.

    The k-th vector has components P_m^{(k)}(z0) / k!; its leading k
    components vanish identically.  Requires ``z0`` to be a root of the
    characteristic polynomial of multiplicity >= ``length``.
    """
    n = j.n
    if not 1 <= length <= n:
        raise ValueError("chain length out of range")
    cp = charpoly(j)
    for p in range(length):
        dp = cp.derivative(p)
        mag = abs(dp(z0))
        scale = float(np.abs(dp.coeffs).max()) * max(1.0, abs(z0)) ** max(dp.degree, 0)
        if mag > 10.0 * tol.cluster * max(scale, 1.0):
            raise NotAnEigenvalue(
                f"{z0} is not an eigenvalue of multiplicity >= {length} "
                f"(derivative order {p} residual {mag:.2e})")
    polys = orthopoly_coeffs(j)[:n]  # P_1..P_n
    vecs = []
    fact = 1.0
    for k in range(length):
        if k > 0:
            fact *= k
        v = np.array([p.derivative(k)(z0) for p in polys], dtype=complex) / fact
        vecs.append(v)
    chain = RootChain(complex(z0), tuple(vecs))
    res = chain.residual(j)
    if res > tol.chain * max(1.0, j.norm_bound()):
        raise NumericalError(f"root chain residual {res:.2e} too large")
    return chain


# --- diagnostics -------------------------------------------------------------

def kernel_psd_check(j: FiniteJacobi, samples, tol: Tolerances = DEFAULT
                     ) -> tuple[bool, float]:
    """Nonnegativity of the characteristic-function kernel on sample points.

    Assembles G(z, w) = (1 - W(z) conj(W(w))) / (i (z - conj(w))) over the
    samples and reports (min eigenvalue > -tol.psd, min eigenvalue).
    """
    from .mfunc import CharFunction  # local import to avoid a cycle

    spec = spectrum(j, tol)
    w = CharFunction(spec)  # rejects non-dissipative data at construction
    pts = np.asarray(list(samples), dtype=complex)
    for z in pts:
        for zk, _ in spec.entries:
            if abs(z - zk) < 1e-10 * max(1.0, abs(zk)):
                raise SampleOnSpectrum(f"sample {z} sits on the spectrum")
    m = len(pts)
    gram = np.empty((m, m), dtype=complex)
    wv = np.array([w(z) for z in pts])
    for i in range(m):
        for k in range(m):
            num = 1.0 - wv[i] * np.conj(wv[k])
            gram[i, k] = num / (1j * (pts[i] - np.conj(pts[k])))
    gram = 0.5 * (gram + gram.conj().T)
    eigs = np.linalg.eigvalsh(gram)
    lo = float(eigs.min())
    return lo > -tol.psd * max(1.0, float(eigs.max())), lo


def krylov_rank(matrix, channel: int = 1) -> int:
    """Numerical rank of span{g, Mg, ..., M^{n-1} g} with g = delta_channel.

    Accepts a dense array or a :class:`FiniteJacobi`.  For the extended
    class with a_p = 0 the rank from the first channel equals p; a full
    rank n certifies primeness (the channel vector is cyclic).
    """
    m = matrix.dense() if isinstance(matrix, FiniteJacobi) else np.asarray(matrix, dtype=complex)
    n = m.shape[0]
    if not 1 <= channel <= n:
        raise ValueError("channel index out of range")
    v = np.zeros(n, dtype=complex)
    v[channel - 1] = 1.0
    cols = [v]
    for _ in range(n - 1):
        v = m @ v
        norm = np.linalg.norm(v)
        if norm > 0:
            v = v / norm
        cols.append(v)
    return int(np.linalg.matrix_rank(np.column_stack(cols)))


def trace_invariant(j: FiniteJacobi, k: int) -> float:
    """-(a_1...a_k / (k-1)!) Im P_{k+1}^{(k-1)}(0); equals Im b1 for all k.

    The boundary coupling a_n = 1 makes the formula valid at k = n, where
    it reduces to the trace identity.
    """
    if not 1 <= k <= j.n:
        raise ValueError("order k out of range")
    p = orthopoly_coeffs(j)[k]  # P_{k+1}
    coeff = p.coefficient(k - 1)  # P^{(k-1)}(0) / (k-1)!
    prod = float(np.prod(np.asarray(j.a[:k], float)))  # a_n := 1 implied at k = n
    return float(-prod * coeff.imag)
