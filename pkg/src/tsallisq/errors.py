"""Exception types shared across the package.

Each error name mirrors the contract it enforces; modules raise these rather
than bare ValueError so callers (and the CLI exit-code mapping) can tell
usage problems, verification failures, and numerical failures apart.
"""


class TsallisqError(Exception):
    """Base class for all package-specific errors."""


class NotHermitianError(TsallisqError):
    """Matrix deviates from its conjugate transpose beyond tolerance."""


class NoConvergenceError(TsallisqError):
    """Eigensolver failed to reach the requested off-diagonal tolerance."""


class NegativeEigenvalueError(TsallisqError):
    """Matrix has an eigenvalue below the PSD clamp threshold."""


class IndexOutOfRangeError(TsallisqError):
    """Qubit index outside [0, n_qubits)."""


class DuplicateIndexError(TsallisqError):
    """Qubit index listed twice."""


class UnsupportedSizeError(TsallisqError):
    """Qubit count outside the supported range."""


class OutOfRangeError(TsallisqError):
    """Scalar argument outside its documented domain."""


class BadRankError(TsallisqError):
    """Requested rank or ensemble size is infeasible."""


class InvalidDensityMatrixError(TsallisqError):
    """Matrix is not Hermitian, positive semidefinite, and unit trace."""


class BadPartitionError(TsallisqError):
    """Bipartition sides are not disjoint or do not cover all qubits."""


class NotTwoQubitsError(TsallisqError):
    """Operation defined only for two-qubit states."""


class QOutsideAnalyticRangeError(TsallisqError):
    """The closed-form mixed-state formula is not established at this q."""


class EndpointError(TsallisqError):
    """Argument sits on a boundary where the expression is singular."""


class QIsOneError(TsallisqError):
    """Expression has a 1/(q-1) factor with no finite value at q=1."""


class BadIndexError(TsallisqError):
    """Focus qubit index invalid for the given state."""


class NegativeBeyondToleranceError(TsallisqError):
    """A residual that must be nonnegative fell below the noise floor."""


class ZeroBasePowerError(TsallisqError):
    """Zero base raised to a nonpositive power."""


class DomainError(TsallisqError):
    """Inputs leave the domain of the function being probed."""


class NoSignChangeError(TsallisqError):
    """Root bracket endpoints have the same sign."""


class MaxIterationsError(TsallisqError):
    """Iteration cap reached before the tolerance was met."""


class NonConvergenceError(TsallisqError):
    """Optimizer restarts exhausted without a stable minimum.

    Carries the best value and decomposition found so far in the
    ``value`` and ``decomposition`` attributes.
    """

    def __init__(self, message, value=None, decomposition=None):
        super().__init__(message)
        self.value = value
        self.decomposition = decomposition
