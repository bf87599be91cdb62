"""
Exception taxonomy shared by every spinbatt package.
Each error carries the process exit code the CLI maps it to.
"""


class SpinBatteryError(Exception):
    """Root of all spinbatt errors"""
    exit_code = 1


class ConfigurationError(SpinBatteryError):
    """Raised when a configuration value or step-size guard is violated"""
    exit_code = 2


class UsageError(SpinBatteryError):
    """Raised for malformed user input such as an unparsable state spec"""
    exit_code = 2


class InvalidStateError(SpinBatteryError):
    """Raised when a state violates its physical invariants"""
    exit_code = 2


class DomainError(SpinBatteryError):
    """Raised when an argument lies outside the domain of a formula"""
    exit_code = 2


class NumericalError(SpinBatteryError):
    """Base for failures of a numerical procedure on valid input"""
    exit_code = 3


class IntegrationError(NumericalError):
    """Raised when the master-equation integrator drifts out of tolerance"""


class FitFailureError(NumericalError):
    """Raised when an FID fit cannot be performed or does not converge"""


class NoSignalError(FitFailureError):
    """Raised when no spectral peak rises above the noise floor"""


class DegenerateProjectionError(NumericalError):
    """Raised when the battery subspace carries (almost) no population"""


class InconsistentReconstructionError(NumericalError):
    """Raised when a reconstructed Bloch vector is longer than noise allows"""


class RelationViolationError(NumericalError):
    """Raised in strict mode when an entropy-capacity relation fails"""
