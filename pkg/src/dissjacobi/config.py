"""Tolerance configuration shared across all modules.

Every numerical routine accepts an optional :class:`Tolerances` instance;
the module-level :data:`DEFAULT` carries the documented defaults.  Fields
whose docs say "scaled" are multiplied by a problem-dependent scale at the
point of use (matrix norm, coefficient magnitude, ...).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Named tolerances, overridable per call or via CLI ``--tol-*`` flags."""

    trim: float = 1e-10        # relative: trailing polynomial coefficients
    real: float = 1e-10        # relative: imaginary residue of real data
    interp: float = 1e-8       # Hermite interpolation residual
    roundtrip: float = 1e-6    # roots/reconstruction roundtrips
    cluster: float = 1e-6      # root clustering, scaled by max(1, |z|)
    root: float = 1e-6         # common-root cancellation distance
    node: float = 1e-12        # minimum separation of interpolation nodes
    chain: float = 1e-7        # root-chain residual, scaled by matrix norm
    spec: float = 1e-8         # imaginary-sum identity, scaled by max(1, Im b1)
    rec: float = 1e-12         # three-term recursion residual, scaled
    chainrel: float = 1e-8     # m-function chain relation residual, scaled
    asym: float = 1e-6         # -1/z asymptote validation
    peel: float = 1e-8         # relative error on rebuilt chain entries
    psd: float = 1e-8          # kernel positive-semidefiniteness slack
    green: float = 1e-6        # boundary-derivative identity, scaled
    unitary: float = 1e-8      # ||U*U - I||
    conv: float = 1e-7         # ||UJ - TU||, scaled by triangular norm
    pole: float = 1e-8         # pole proximity cutoff for Taylor expansion
    fd: float = 1e-5           # finite-difference cross-check, scaled
    eig: float = 1e-10         # closed-form eigenvalue defining equations
    mod: float = 1e-8          # |W| = 1 on the real axis
    mom: float = 1e-8          # moment/entry roundtrips
    flt: float = 1e-8          # fractional-linear relation residuals
    a2_floor: float = 1e-12    # abort threshold for extracted couplings
    qr_crossover: int = 24     # spectrum(): charpoly roots below, dense QR above

    def replace(self, **kwargs) -> "Tolerances":
        return dataclasses.replace(self, **kwargs)

    @classmethod
    def field_names(cls) -> tuple[str, ...]:
        return tuple(f.name for f in dataclasses.fields(cls))


DEFAULT = Tolerances()


@dataclass(frozen=True)
class RunConfig:
    """CLI run configuration: tolerances, output format and RNG seed."""

    tolerances: Tolerances = DEFAULT
    fmt: str = "json"          # json | csv | pretty
    seed: int = 20240901

    def __post_init__(self):
        if self.fmt not in ("json", "csv", "pretty"):
            raise ValueError(f"unknown output format {self.fmt!r}")
        for name in Tolerances.field_names():
            value = getattr(self.tolerances, name)
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive")
