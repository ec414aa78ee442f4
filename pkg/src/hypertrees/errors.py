"""Exception hierarchy; each class maps onto a CLI exit code."""


class HypertreeError(Exception):
    exit_code = 5


class InputError(HypertreeError, ValueError):
    """Malformed or degenerate input."""

    exit_code = 2


class ContextMismatch(InputError):
    """Polynomials from different variable contexts were combined."""


class PreconditionError(HypertreeError):
    """Well-formed input that an operation does not accept."""

    exit_code = 3


class BudgetExceeded(HypertreeError):
    """A size or time cap was hit."""

    exit_code = 4


class InternalError(HypertreeError):
    """Two independent computations disagreed."""

    exit_code = 5


class ConversionError(InternalError):
    """A multiplicity table does not have the shape of a pulled-back class."""


class RealizationFailed(HypertreeError):
    """No verified realization within the retry cap."""

    exit_code = 4
