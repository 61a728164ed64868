"""Exception hierarchy shared by the library and the CLI."""


class TriformError(Exception):
    """Base class. ``kind`` is the stable name used in JSON error records."""

    kind = "TriformError"

    def __init__(self, detail=""):
        super().__init__(detail)
        self.detail = detail


class ParseError(TriformError, ValueError):
    kind = "ParseError"


class DomainError(TriformError):
    """Raised when inputs are well formed but outside an operation's domain."""

    kind = "DomainError"


class DimensionTooSmall(DomainError):
    kind = "DimensionTooSmall"


class PoleOfGamma(DomainError):
    kind = "PoleOfGamma"


class IsAPole(DomainError):
    kind = "IsAPole"


class DivergentRegion(DomainError):
    kind = "DivergentRegion"


class FormulaMismatch(TriformError, AssertionError):
    """Two equivalent closed forms disagreed beyond tolerance (a bug, not bad input)."""

    kind = "FormulaMismatch"
