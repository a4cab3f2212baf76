"""Exception types shared across the package."""


class HdeformError(Exception):
    """Base class for all package errors."""


class CoefficientError(HdeformError):
    """Arithmetic error in the coefficient field (e.g. division by zero)."""


class ParseError(HdeformError):
    """Malformed textual input; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class RelationExtractionError(HdeformError):
    """The relation system could not be solved for an ordered form."""


class ResourceLimitError(HdeformError):
    """A configured memory/size guard was exceeded."""


class RewriteLimitError(HdeformError):
    """Normal ordering exceeded the rewrite step guard."""
