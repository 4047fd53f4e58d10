"""Exception types shared across the package."""


class PolysieveError(Exception):
    """Base class for all package errors."""


class InputError(PolysieveError, ValueError):
    """Argument outside the operation's domain or precondition."""


class CapabilityError(PolysieveError, ValueError):
    """Request beyond what the implementation supports (degree cap, overflow)."""


class NumericError(PolysieveError, ArithmeticError):
    """Non-finite or degenerate value met during a computation."""


class DegenerateNormalizationError(NumericError):
    """Normalizer eta_0 * gamma_0 is (numerically) zero."""


class StuckChainError(PolysieveError, RuntimeError):
    """Metropolis chain rejected every proposal for too long during burn-in."""


class NumericWarning(UserWarning):
    """Quadrature cross-check or clamp diagnostics exceeded tolerance."""
