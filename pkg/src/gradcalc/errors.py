"""Exception types shared across the engine."""

from __future__ import annotations


class GradcalcError(ValueError):
    """Base class for engine errors."""


class ChartMismatchError(GradcalcError):
    """Raised when objects living on different charts are combined.

    Charts are compared by identity: two charts with identical variable
    tables are still distinct coordinate systems.
    """


class ValenceError(GradcalcError):
    """Raised when a tensor has the wrong (q, p) valence or symmetry tag."""


class DslError(GradcalcError):
    """Diagnostic for a script that cannot be parsed or resolved.

    kind distinguishes the stage that rejected the input: "lexical"
    (bad character), "syntax" (bad token sequence), or "name" (unknown
    or misused identifier).  All three stop a run with exit status 2.
    Runtime failures of well-formed scripts raise GradcalcError instead
    and exit with status 3.  line/col are 1-based when known.
    """

    def __init__(self, message: str, kind: str = "parse",
                 line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.kind = kind
        self.line = line
        self.col = col

    def __str__(self) -> str:
        loc = ""
        if self.line is not None:
            loc = f" at line {self.line}" + (f", col {self.col}" if self.col is not None else "")
        return f"{self.kind} error{loc}: {self.args[0]}"
