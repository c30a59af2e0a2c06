"""Exception hierarchy shared by all lqlab modules."""


class LqlabError(Exception):
    """Base class for every error raised by the library."""


class ModelSpecError(LqlabError, ValueError):
    """A model specification string could not be parsed.

    ``column`` is the 1-based character offset of the offending token.
    """

    def __init__(self, message, column=None):
        self.column = column
        if column is not None:
            message = f"column {column}: {message}"
        super().__init__(message)


class ClassificationError(LqlabError, TypeError):
    """The model has the wrong jump direction for the requested operation."""


class UnsupportedModelError(LqlabError, TypeError):
    """The operation has no implementation for this model variant."""


class DomainError(LqlabError, ValueError):
    """An argument lies outside the domain of the requested function."""


class AssumptionError(LqlabError, ValueError):
    """A structural assumption (e.g. existence of a Cramer root) does not hold."""


class NumericalError(LqlabError, ArithmeticError):
    """A numerical routine failed; ``diagnostics`` carries the solver state."""

    def __init__(self, message, **diagnostics):
        self.diagnostics = diagnostics
        if diagnostics:
            detail = ", ".join(f"{k}={v!r}" for k, v in diagnostics.items())
            message = f"{message} ({detail})"
        super().__init__(message)
