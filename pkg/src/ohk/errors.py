"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class OhkError(Exception):
    """Base class for all errors raised by ohk."""

    code = "error"


class FieldMismatchError(OhkError, TypeError):
    code = "field_mismatch"


class ShapeError(OhkError, ValueError):
    code = "shape"


class DimensionLimitError(OhkError, ValueError):
    code = "dimension_limit"


class TheoryError(OhkError, ValueError):
    code = "theory"


class ParseError(OhkError, ValueError):
    """Syntax error in one of the line-oriented formats, with its position."""

    code = "parse"

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class UnresolvedGrouplikesError(OhkError, ArithmeticError):
    """A character of the dual algebra needs an eigenvalue outside the ground field."""

    code = "unresolved_grouplikes"


class PreconditionError(OhkError, ValueError):
    """An operation's precondition does not hold; ``witness`` pinpoints the failure."""

    code = "precondition"

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotPointedError(PreconditionError):
    code = "not_pointed"
