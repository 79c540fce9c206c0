"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`DiffAlgebraError`, so callers can catch one type.  The CLI maps the
groups below to distinct exit codes.
"""


class DiffAlgebraError(Exception):
    """Base class for all library errors."""


# -- input / parsing ---------------------------------------------------------

class PolySyntaxError(DiffAlgebraError, ValueError):
    """Malformed differential polynomial text."""

    def __init__(self, message, position=None, text=None):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class NegativeDerivativeOrder(PolySyntaxError):
    pass


# -- algebraic preconditions -------------------------------------------------

class PreconditionError(DiffAlgebraError):
    """An operation was called outside of its domain of definition."""


class DomainMismatch(PreconditionError, TypeError):
    """Two values with different coefficient domains were combined."""


# Name used for the series-level variant of the same failure.
TagMismatch = DomainMismatch


class UndefinedSeparant(PreconditionError):
    pass


class MissingImage(PreconditionError):
    pass


class UnassignedVariable(PreconditionError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class BothConstantInV(PreconditionError):
    pass


class QInIdeal(PreconditionError):
    pass


class ReducibleInput(PreconditionError):
    pass


class PreconditionOrder(PreconditionError):
    pass


class NotDependent(PreconditionError):
    pass


class TimeComponentNotAffine(PreconditionError):
    pass


# -- search failures ---------------------------------------------------------

class SearchExhausted(DiffAlgebraError):
    """A bounded search gave up.  Not a proof of non-existence."""


class ExhaustedTrials(SearchExhausted):
    pass


class BoundExceeded(SearchExhausted):
    pass


# -- solution extension ------------------------------------------------------

class ExtensionError(DiffAlgebraError):
    pass


class NoRationalRoot(ExtensionError):
    pass


class GuardUnsatisfiable(ExtensionError):
    pass


class ResidualNonzero(ExtensionError):
    """The equation cannot vanish at the given order for any admissible choice.

    ``order`` is the coefficient index of the obstruction and ``value`` the
    nonzero residual found there.
    """

    def __init__(self, message, order, value):
        self.order = order
        self.value = value
        super().__init__(message)
