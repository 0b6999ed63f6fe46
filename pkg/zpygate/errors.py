class ZPyGateError(Exception):
    """Base class for every error raised by zpygate."""


class ValidationError(ZPyGateError, ValueError):
    """
    Raised when an input violates a documented precondition
    (non-Hermitian operator, out-of-range parameter, bad schedule).
    """


class ConfigError(ValidationError):
    """
    Raised when a run configuration cannot be parsed or validated.
    """

    def __init__(self, message, lineno=None):
        super().__init__(message)
        self.lineno = lineno


class NumericalError(ZPyGateError):
    """
    Base class for failures of a numerical procedure on valid input.
    """


class PropagationError(NumericalError):
    """
    Raised when the time integrator breaks down.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class CalibrationError(NumericalError):
    """
    Raised when a root finder does not reach the requested spectrum.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConvergenceError(NumericalError):
    """
    Raised when a basis truncation is not converged.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class InfeasibleAnsatzError(NumericalError):
    """
    Raised when an invariant ansatz leaves the physical region
    (non-positive radicand of f3).
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class SchriefferWolffError(NumericalError):
    """
    Raised when the perturbative block diagonalization is resonant.
    """


class GateAnalysisError(NumericalError):
    """
    Raised when a propagator is too far from diagonal to extract phases.
    """


def non_hermitian_exception_factory(asymmetry, tolerance):
    """A factory function for ValidationError on non-Hermitian input."""
    return ValidationError(
        f"Operator is not Hermitian: max |H - H^dagger| = {asymmetry:.3e} "
        f"exceeds the allowed {tolerance:.3e}")


def step_underflow_exception_factory(time, message=""):
    """A factory function for PropagationError."""
    detail = f" ({message})" if message else ""
    return PropagationError(
        f"Integrator step size underflow at t = {time:.6f} ns{detail}",
        time=time)


def cutoff_exception_factory(kind, current, required, change):
    """A factory function for ConvergenceError."""
    return ConvergenceError(
        f"{kind} = {current} is not converged (eigenvalues moved by "
        f"{change:.3e} rad/ns); use {kind} >= {required}",
        required=required)


def infeasible_ansatz_exception_factory(time, radicand):
    """A factory function for InfeasibleAnsatzError."""
    return InfeasibleAnsatzError(
        f"Invariant ansatz is infeasible: radicand c^2 - f1^2 - f2^2 = "
        f"{radicand:.3e} at t = {time:.6f} ns. Use a longer ramp time or "
        f"a higher-degree ansatz.", time=time)


def config_exception_factory(section, key, message, lineno=None):
    """A factory function for ConfigError."""
    where = f" (line {lineno})" if lineno is not None else ""
    return ConfigError(f"[{section}] {key}: {message}{where}", lineno=lineno)
