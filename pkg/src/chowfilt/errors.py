"""Exception hierarchy shared by every module."""


class ChowFiltError(ValueError):
    """Base class for all domain errors raised by the package."""


class NotATower(ChowFiltError):
    """A level was expected to divide another one and does not."""


class LevelMismatch(ChowFiltError):
    """Data is not defined over the level it is being used at."""


class NonZeroDegree(ChowFiltError):
    """A degree-zero divisor was required."""


class MixedSupport(ChowFiltError):
    """A cycle on the abelian factor alone was required."""


class BaseMismatch(ChowFiltError):
    """Operands live over different base levels."""


class BaseNotGround(ChowFiltError):
    """The operation is only defined for cycles over the ground level 1."""


class WrongDimension(ChowFiltError):
    """The abelian model does not have the dimension the operation needs."""


class DegreeCheckFailed(ChowFiltError):
    """A Weil-relation table whose orders do not sum to zero."""


class UnsupportedModel(ChowFiltError):
    """The abelian model kind cannot be used for this operation."""


class ParseError(ChowFiltError):
    """Malformed scenario file or expression.

    ``location`` is a human readable pointer (JSON path or column).
    """

    def __init__(self, message, location=None):
        self.location = location
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)


class ValidationError(ChowFiltError):
    """The models violate one of the functoriality laws."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"model validation failed:\n{lines}")
