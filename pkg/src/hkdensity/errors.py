"""Exception hierarchy shared by the library and the CLI.

The CLI maps each class onto its own exit status, so the distinction between
"bad input" and "an identity failed" survives to the shell.
"""


class HKError(Exception):
    """Base class for every error raised by hkdensity."""


class ValidationError(HKError, ValueError):
    """Malformed input: bad exponents, non-prime characteristic, inconsistent curve data."""


class TooManyGeneratorsError(ValidationError):
    """The inclusion-exclusion generator cap was exceeded."""


class VerificationError(HKError):
    """A theorem-level identity failed to hold."""

    def __init__(self, message, lhs=None, rhs=None):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs


class RangeError(HKError, OverflowError):
    """A floating-point evaluation would leave the double range."""
