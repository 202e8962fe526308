"""Direct and inverse spectral analysis of finite dissipative Jacobi
matrices with rank-one imaginary part."""

from .config import DEFAULT, RunConfig, Tolerances
from .inverse import (BlockData, MixedData, block_recover, mixed_recover,
                      reconstruct_from_charfunction, reconstruct_from_spectrum,
                      sa_mixed_recover)
from .jacobi import (FiniteJacobi, RootChain, Spectrum, charpoly, kernel_psd_check,
                     krylov_rank, orthopoly, root_chain, spectrum, trace_invariant)
from .livsic import (ConversionResult, TriangularModel, model_from_spectrum,
                     triangular_matrix, triangular_to_jacobi)
from .mfunc import (CharFunction, JFraction, MFunctionChain, cayley_V, char_W,
                    jfraction_peel, mchain, odd_mfunction_check, weyl_m)
from .poly import (ComplexPoly, HermiteData, RationalFunction, hermite_rational,
                   roots, taylor_at)
from .semiinf import (MomentSequence, PerturbedVolterra, VolterraParams,
                      chebyshev_eig, hankel_entries, moments,
                      perturbed_volterra_eigs, volterra_jacobi,
                      volterra_real_eigs)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT", "RunConfig", "Tolerances",
    "FiniteJacobi", "Spectrum", "RootChain",
    "charpoly", "orthopoly", "spectrum", "root_chain", "kernel_psd_check",
    "krylov_rank", "trace_invariant",
    "ComplexPoly", "RationalFunction", "HermiteData", "roots", "taylor_at",
    "hermite_rational",
    "CharFunction", "JFraction", "MFunctionChain", "weyl_m", "char_W",
    "cayley_V", "mchain", "jfraction_peel", "odd_mfunction_check",
    "MixedData", "BlockData", "reconstruct_from_spectrum",
    "reconstruct_from_charfunction", "mixed_recover", "sa_mixed_recover",
    "block_recover",
    "TriangularModel", "ConversionResult", "model_from_spectrum",
    "triangular_matrix", "triangular_to_jacobi",
    "VolterraParams", "PerturbedVolterra", "MomentSequence", "volterra_jacobi",
    "volterra_real_eigs", "moments", "hankel_entries", "chebyshev_eig",
    "perturbed_volterra_eigs",
]
