"""Exception types raised across the package."""


class BinrepError(ValueError):
    pass


class SizeError(BinrepError):
    """Bit length outside the range a routine supports."""


class DomainError(BinrepError):
    """Argument outside the mathematical domain of an operation."""


class ShapeError(BinrepError):
    """Mismatched lengths between genotypes, representations and configs."""


class ParseError(BinrepError):
    """Malformed serialized representation.

    ``position`` is the character offset (for JSON syntax errors) or the
    index into ``perm`` where the problem was detected, when known.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position
