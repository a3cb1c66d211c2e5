"""Exception types raised by the gatereach library."""


class GateReachError(Exception):
    """Base class for all gatereach errors."""


class ValidationError(GateReachError):
    """Malformed or inconsistent user input (files, JSON, vectors)."""


class NonHermitianInput(ValidationError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""


class NonUnitaryInput(ValidationError):
    """A matrix expected to be unitary is not, beyond tolerance."""


class NonNegligibleLocalPart(ValidationError):
    """A Hamiltonian passed where a purely non-local one is required."""


class NonZeroSum(ValidationError):
    """A 4-vector expected to sum to zero does not, beyond tolerance."""


class LengthMismatch(ValidationError):
    """Vector arguments have incompatible lengths."""


class NotMajorized(GateReachError):
    """A constructive routine was called on a pair that fails majorization."""


class NotDoublyStochastic(ValidationError):
    """Matrix row/column sums deviate from one beyond tolerance."""


class NoMatchingFound(GateReachError):
    """No permutation supported on the positive entries exists; the input
    matrix is numerically broken."""


class OutOfRange(ValidationError):
    """Evaluation time outside the domain of a sampled/piecewise profile."""


class BadRange(ValidationError):
    """An interval with t1 <= t0 was requested."""


class QuadratureFailure(GateReachError):
    """Adaptive quadrature could not reach the error target."""


class HorizonExceeded(GateReachError):
    """The minimum-time search hit the configured horizon while still
    infeasible (e.g. a coupling profile that never accumulates)."""


class NotReachable(GateReachError):
    """Synthesis requested for a gate outside the reachable set at time T."""


class StepTooLarge(GateReachError):
    """Propagation step size fails the local error estimate."""


class UnsupportedProfile(GateReachError):
    """Operation not available for this profile kind."""
