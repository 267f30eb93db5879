"""Exception hierarchy."""


class G2Error(Exception):
    """Base class for errors raised by g2solv."""


class InputError(G2Error, ValueError):
    """Malformed or out-of-range input (bad degree, non-Lie bracket, ...)."""


class NotPositiveError(InputError):
    """A 3-form that does not induce a definite metric."""


class NotClosedError(InputError):
    """An operation that requires d(phi) = 0 received a non-closed structure."""


class InconsistencyError(G2Error, RuntimeError):
    """Two independent computation routes disagree beyond tolerance."""
