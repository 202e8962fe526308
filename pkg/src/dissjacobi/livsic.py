"""Triangular model and its conversion to the unitarily equivalent Jacobi form.

The model of a finite prime dissipative operator with rank-one imaginary
part is upper triangular with diagonal z_k = alpha_k + i beta_k^2 / 2 and
strictly-upper entries i beta_j beta_k.  The conversion matches Krylov
inner products of the channel vectors on both sides: Jacobi-side powers
J^m g are assembled symbolically from already-determined entries, the
triangular-side powers are explicit, and each step yields one diagonal
entry (linear equation) and one coupling (norm equation).  The unitary
intertwiner U comes out column by column from the same data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import NonUpperHalfPlane, NumericalBreakdown
from .jacobi import FiniteJacobi, Spectrum

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class TriangularModel:
    """Model data (alpha_k, beta_k); beta_k > 0 in the prime case."""

    alphas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(x) for x in self.alphas))
        object.__setattr__(self, "betas", tuple(float(x) for x in self.betas))
        if len(self.alphas) != len(self.betas):
            raise ValueError("alphas and betas must have equal length")
        if any(b <= 0 for b in self.betas):
            raise ValueError("model requires positive beta_k")

    @property
    def n(self) -> int:
        return len(self.alphas)

    def eigenvalues(self) -> np.ndarray:
        """Diagonal z_k = alpha_k + i beta_k^2 / 2 in model order."""
        a = np.asarray(self.alphas)
        b = np.asarray(self.betas)
        return a + 0.5j * b * b

    def channel(self) -> np.ndarray:
        return np.asarray(self.betas, dtype=complex)

    def to_dict(self) -> dict:
        return {"alphas": list(self.alphas), "betas": list(self.betas)}

    @classmethod
    def from_dict(cls, d: dict) -> "TriangularModel":
        return cls(tuple(d["alphas"]), tuple(d["betas"]))


def model_from_spectrum(s: Spectrum) -> TriangularModel:
    """Model data from prescribed eigenvalues: alpha = Re z, beta = sqrt(2 Im z).

    Multiplicities are expanded into repeated pairs, input order preserved.
    """
    if not s.in_upper_half():
        raise NonUpperHalfPlane("model data needs eigenvalues in C+")
    pts = s.points()
    return TriangularModel(tuple(z.real for z in pts),
                           tuple(float(np.sqrt(2.0 * z.imag)) for z in pts))


def triangular_matrix(m: TriangularModel) -> np.ndarray:
    """Dense upper-triangular model matrix.

    Diagonal z_k, entries i beta_j beta_k above it; twice its imaginary
    part is the rank-one projector onto the channel vector.
    """
    z = m.eigenvalues()
    b = np.asarray(m.betas)
    t = np.diag(z.astype(complex))
    n = m.n
    for j in range(n):
        t[j, j + 1:] = 1j * b[j] * b[j + 1:]
    return t


@dataclass(frozen=True)
class ConversionResult:
    """Jacobi matrix plus the unitary intertwiner U (U J = T U, U g = channel)."""

    jacobi: FiniteJacobi
    u: np.ndarray

    def residuals(self, model: TriangularModel) -> dict:
        t = triangular_matrix(model)
        u = self.u
        j = self.jacobi.dense()
        g = np.zeros(self.jacobi.n, dtype=complex)
        g[0] = np.sqrt(2.0 * self.jacobi.b1.imag)
        return {
            "unitary": float(np.abs(u.conj().T @ u - np.eye(len(u))).max()),
            "intertwine": float(np.abs(u @ j - t @ u).max()),
            "channel": float(np.abs(u @ g - model.channel()).max()),
        }


def triangular_to_jacobi(m: TriangularModel,
                         tol: Tolerances = DEFAULT) -> ConversionResult:
    """Convert a triangular model to its unique Jacobi form, with U.

    Primary path: Krylov inner-product matching (entry by entry).  If the
    resulting U drifts from unitarity beyond ``tol.unitary`` the conversion
    is redone by Arnoldi with modified Gram-Schmidt re-orthogonalization,
    which is the same construction performed stably.

    Raises
    ------
    NumericalBreakdown
        If a coupling falls below the positivity floor on both paths.
    """
    if m.n == 1:
        z = complex(m.eigenvalues()[0])
        return ConversionResult(FiniteJacobi(z, (), ()),
                                np.array([[1.0 + 0j]]))
    try:
        result = _convert_matching(m, tol)
        res = result.residuals(m)
        if (res["unitary"] <= tol.unitary
                and res["intertwine"] <= tol.conv * _tri_norm(m)
                and res["channel"] <= tol.conv * _tri_norm(m)):
            return result
    except NumericalBreakdown:
        pass
    return _convert_arnoldi(m, tol)


def _tri_norm(m: TriangularModel) -> float:
    return max(1.0, float(np.abs(triangular_matrix(m)).max()) * m.n)


def _convert_matching(m: TriangularModel, tol: Tolerances) -> ConversionResult:
    n = m.n
    t = triangular_matrix(m)
    gvec = m.channel()
    c = float(sum(z.imag for z in m.eigenvalues()))
    sq2c = float(np.sqrt(2.0 * c))
    floor = tol.a2_floor * max(1.0, float(np.abs(t).max()) ** 2)

    # triangular-side Krylov chain w_m = T^m g
    w = [gvec]
    for _ in range(n):
        w.append(t @ w[-1])

    bs = np.zeros(n, dtype=complex)
    as_ = np.zeros(n - 1, dtype=float)
    # v[m] = J^m g on the Jacobi side, filled as entries become known
    v = np.zeros((n, n), dtype=complex)
    v[0, 0] = sq2c

    b1 = np.vdot(w[0], w[1]) / (2.0 * c)      # (w1, w0) in math order
    a1sq = float(np.linalg.norm(w[1]) ** 2) / (2.0 * c) - abs(b1) ** 2
    if a1sq <= floor:
        raise NumericalBreakdown(f"first coupling {a1sq:.3e} not positive")
    bs[0] = b1
    as_[0] = float(np.sqrt(a1sq))
    v[1, 0] = b1 * sq2c
    v[1, 1] = as_[0] * sq2c

    for step in range(2, n):
        prev = v[step - 1]
        cur = np.zeros(n, dtype=complex)
        # rows strictly above the frontier use only known entries
        for row in range(step - 1):
            acc = bs[row] * prev[row]
            if row > 0:
                acc += as_[row - 1] * prev[row - 1]
            acc += as_[row] * prev[row + 1]
            cur[row] = acc
        pm = prev[step - 1].real  # = a_{step-2}...a_1 sqrt(2c) > 0
        kappa = as_[step - 2] * prev[step - 2]
        known_ip = np.sum(cur[: step - 1] * np.conj(prev[: step - 1]))
        target_ip = np.vdot(w[step - 1], w[step])
        bm = (target_ip - known_ip - kappa * pm) / (pm * pm)
        if abs(bm.imag) > 1e-5 * max(1.0, abs(bm)):
            raise NumericalBreakdown(
                f"diagonal entry {step} came out non-real ({bm:.3e})")
        bs[step - 1] = bm.real
        cur[step - 1] = kappa + bs[step - 1] * pm
        norm_gap = float(np.linalg.norm(w[step]) ** 2
                         - np.linalg.norm(cur[: step]) ** 2)
        a2 = norm_gap / (pm * pm)
        if a2 <= floor:
            raise NumericalBreakdown(f"coupling {step} came out {a2:.3e}")
        as_[step - 1] = float(np.sqrt(a2))
        cur[step] = as_[step - 1] * pm
        v[step] = cur

    # U columns from U J^{m-1} g = T^{m-1} g
    u = np.zeros((n, n), dtype=complex)
    u[:, 0] = gvec / sq2c
    for col in range(1, n):
        prev = v[col]
        acc = w[col].copy()
        for kk in range(col):
            acc -= u[:, kk] * prev[kk]
        u[:, col] = acc / prev[col].real
    bn = np.vdot(u[:, n - 1], t @ u[:, n - 1])  # (T u_n, u_n)
    bs[n - 1] = bn.real
    jac = FiniteJacobi(bs[0], tuple(x.real for x in bs[1:]), tuple(as_))
    return ConversionResult(jac, u)


def _convert_arnoldi(m: TriangularModel, tol: Tolerances) -> ConversionResult:
    """Arnoldi / modified Gram-Schmidt form of the same conversion."""
    n = m.n
    t = triangular_matrix(m)
    floor = np.sqrt(tol.a2_floor) * max(1.0, float(np.abs(t).max()))
    q = np.zeros((n, n), dtype=complex)
    g = m.channel()
    q[:, 0] = g / np.linalg.norm(g)
    bs = np.zeros(n, dtype=complex)
    as_ = np.zeros(n - 1, dtype=float)
    for k in range(n):
        y = t @ q[:, k]
        bk = np.vdot(q[:, k], y)
        bs[k] = bk if k == 0 else bk.real
        y = y - bk * q[:, k]
        if k > 0:
            y = y - as_[k - 1] * q[:, k - 1]
        # full re-orthogonalization, twice
        for _ in range(2):
            for kk in range(k + 1):
                y = y - np.vdot(q[:, kk], y) * q[:, kk]
        if k < n - 1:
            nrm = float(np.linalg.norm(y))
            if nrm <= floor:
                raise NumericalBreakdown(
                    f"orthogonalization lost the Krylov direction at step {k + 1}")
            as_[k] = nrm
            q[:, k + 1] = y / nrm
    jac = FiniteJacobi(bs[0], tuple(x.real for x in bs[1:]), tuple(as_))
    return ConversionResult(jac, q)
