"""A small expression language over the kernel."""

from .checker import Type, typecheck, typecheck_expression
from .errors import CheckError, DslError, EvalError, ParseError
from .interp import (
    RunResult,
    evaluate_expression,
    render_value,
    run_script,
    value_json,
    values_equal,
)
from .parser import parse_expression, parse_script, tokenize

__all__ = [
    "Type",
    "typecheck",
    "typecheck_expression",
    "CheckError",
    "DslError",
    "EvalError",
    "ParseError",
    "RunResult",
    "evaluate_expression",
    "render_value",
    "run_script",
    "value_json",
    "values_equal",
    "parse_expression",
    "parse_script",
    "tokenize",
]
