"""Exception types shared across the package."""


class LevelCostError(Exception):
    """Base class for every error this package raises on purpose."""


class DomainError(LevelCostError, ValueError):
    """A numeric argument is outside its mathematical domain."""


class AlignmentError(LevelCostError, ValueError):
    """Paired inputs do not line up (lengths, sample grids, units, kinds)."""


class DegenerateDenominatorError(LevelCostError, ZeroDivisionError):
    """A levelization denominator is zero, so the ratio is undefined."""


class InputFormatError(LevelCostError, ValueError):
    """A config or CSV input could not be parsed.

    Carries the offending path and, when known, the 1-based line number so
    the CLI can point at the exact spot.
    """

    def __init__(self, message: str, *, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}: "
            if line is not None:
                where = f"{path}:{line}: "
        super().__init__(where + message)
