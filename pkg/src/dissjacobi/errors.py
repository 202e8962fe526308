"""Exception hierarchy and warning categories.

The CLI maps exception classes to exit codes: :class:`ParseError` to 2,
:class:`DomainError` to 3 and :class:`NumericalError` to 4.  Domain errors
signal invalid or inconsistent input data; numerical errors signal that an
algorithm failed on data that looked admissible.
"""


class DissJacobiError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class ParseError(DissJacobiError):
    """Malformed or schema-violating input file."""

    exit_code = 2


class DomainError(DissJacobiError):
    """Input violates a documented precondition or is inconsistent."""

    exit_code = 3


class NumericalError(DissJacobiError):
    """An algorithm broke down or failed to converge."""

    exit_code = 4


# --- polynomial / rational layer ---

class DegreeZero(DomainError):
    """Root finding requested for a constant polynomial."""


class NoConvergence(NumericalError):
    """Iterative eigenvalue computation exceeded its iteration budget."""


class SingularSystem(DomainError):
    """Rational interpolation system is rank deficient and inconsistent."""


class NonRealResult(DomainError):
    """Interpolant expected to be real carries a large imaginary residue."""


class PoleAtPoint(DomainError):
    """Taylor expansion requested at (or too close to) a pole."""


# --- jacobi layer ---

class NotAnEigenvalue(DomainError):
    """Root-chain construction at a point that is not an eigenvalue."""


class SampleOnSpectrum(DomainError):
    """Kernel sample coincides with an eigenvalue or its mirror."""


class ClusterAmbiguityWarning(UserWarning):
    """Root clustering was unstable at the configured tolerance."""


# --- m-function layer ---

class OnSpectrum(DomainError):
    """Resolvent evaluation at a spectral point."""


class PoleAt(DomainError):
    """Fractional-linear transform evaluated at a pole."""


class NotHerglotzLike(DomainError):
    """A continued-fraction step produced a non-positive coupling."""


class DegreeMismatch(DomainError):
    """Rational function has the wrong degrees or asymptotics for peeling."""


# --- inverse layer ---

class NonUpperHalfPlane(DomainError):
    """Prescribed eigenvalue outside the open upper half-plane."""


class PeelFailure(NumericalError):
    """Continued-fraction extraction failed inside a reconstruction."""


class InconsistentCounts(DomainError):
    """Mixed/block data sizes do not add up to a well-posed problem."""


class NoConsistentMatrix(DomainError):
    """No matrix is consistent with the prescribed mixed data."""


class InconsistentData(DomainError):
    """Recovered entries fail to reproduce the prescribed data."""


# --- triangular-model layer ---

class NumericalBreakdown(NumericalError):
    """Krylov conversion lost positivity or orthogonality."""


# --- semi-infinite truncations ---

class SingularHankel(DomainError):
    """Hankel determinant vanished; moment data is degenerate."""


class TruncationTooSmall(DomainError):
    """Requested moment order exceeds the truncation-exact range."""


class ExcludedParameter(DomainError):
    """Perturbation parameter sits at one of the two excluded points."""
