"""Exception hierarchy shared by all diffbasis modules."""


class DiffBasisError(Exception):
    """Base class for every error raised by the package."""


class SignatureMismatchError(DiffBasisError):
    """Objects built over different ring signatures were combined."""


class DuplicateLeadError(DiffBasisError):
    """Two elements handed to the division machinery share a leading term."""


class InconsistentSystemError(DiffBasisError):
    """A nonzero constant was derived, so the ideal is the whole ring."""


class OptionError(DiffBasisError):
    """Invalid or contradictory option combination."""


class ParseError(DiffBasisError):
    """Malformed input text; carries the offending position when known."""

    def __init__(self, message, source=None, position=None):
        self.source = source
        self.position = position
        if source is not None and position is not None:
            pointer = " " * position + "^"
            message = f"{message} at column {position + 1}\n  {source}\n  {pointer}"
        super().__init__(message)


class ProblemFileError(DiffBasisError):
    """Structurally invalid problem file."""
