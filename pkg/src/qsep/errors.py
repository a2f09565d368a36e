"""Exception hierarchy."""


class QsepError(Exception):
    """Base class for all errors raised by qsep."""


class ArgumentError(QsepError, ValueError):
    """An argument is outside the domain of the operation."""


class SizeError(ArgumentError):
    """A matrix dimension exceeds the supported range."""


class ContractError(QsepError, ValueError):
    """An input violates a documented precondition (wrong basis tag, non-Hermitian, ...)."""


class ValidationError(QsepError, ValueError):
    """A matrix failed density-matrix validation.

    ``invariant`` is one of ``"shape"``, ``"hermitian"``, ``"trace"``, ``"psd"``;
    ``location`` is the offending ``(row, col)`` when there is one.
    """

    def __init__(self, invariant, message, location=None):
        super().__init__(message)
        self.invariant = invariant
        self.location = location


class ReconstructionError(ValidationError):
    """A coefficient table does not reassemble into a valid density matrix."""


class NotCertifiableError(QsepError):
    """No separability certificate can be built by the requested construction."""

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class ParseError(QsepError, ValueError):
    """Malformed input file; ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column
