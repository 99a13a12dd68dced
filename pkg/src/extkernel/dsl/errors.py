from __future__ import annotations


class DslError(Exception):
    """Diagnostic with an optional source position and a CLI exit code."""

    exit_code = 2
    label = "error"

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.col = col

    def __str__(self) -> str:
        where = ""
        if self.line is not None:
            where = f"line {self.line}"
            if self.col is not None:
                where += f", column {self.col}"
            where += ": "
        return f"{self.label}: {where}{self.message}"


class ParseError(DslError):
    label = "syntax error"


class CheckError(DslError):
    label = "type error"


class EvalError(DslError):
    exit_code = 3
    label = "runtime error"
