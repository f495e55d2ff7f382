"""Shared exception types."""


class QuadlinesError(Exception):
    """Base class for all package-specific errors."""


class DegreeMismatchError(QuadlinesError):
    """Forms of unequal degree (or variable count) were combined."""


class DegenerateLineError(QuadlinesError):
    """Two proportional points do not span a line."""


class DegenerateSpanError(QuadlinesError):
    """Wedge of proportional points."""


class NotALineError(QuadlinesError):
    """A bivector failed the decomposability (Pfaffian) test."""


class BasePointError(QuadlinesError):
    """The family matrix vanished at a parameter point."""

    def __init__(self, point):
        self.point = point
        super().__init__(f"family vanishes at parameter {point}")


class ContractedLineError(QuadlinesError):
    """The restriction of a family to a source line is projectively constant."""


class ProjectionNotIsomorphicError(QuadlinesError):
    """A projection contracted a line or identified two lines."""

    def __init__(self, kind, witness):
        self.kind = kind
        self.witness = witness
        super().__init__(f"projection failure ({kind}): witness {witness}")


class NotAnIsomorphismError(QuadlinesError):
    """A triangular coordinate matrix had a zero diagonal coefficient."""


class EmptyJumpingSetError(QuadlinesError):
    """Fundamental-curve extraction needs a nonempty jumping set."""


class SpecialPositionWarning(QuadlinesError):
    """Counts over random flags disagreed; all observed values attached."""

    def __init__(self, message, observed=None):
        self.observed = observed
        super().__init__(message)


class ParseError(QuadlinesError):
    """Polynomial grammar syntax error, with a position."""

    def __init__(self, message, pos):
        self.pos = pos
        super().__init__(f"{message} (at position {pos})")


class FamilyFormatError(QuadlinesError):
    """Malformed family JSON; carries the offending entry indices."""

    def __init__(self, message, indices=None):
        self.indices = indices
        super().__init__(message)
