"""Scalar-field expression language and numerical calculus on fields."""

from .expr import (
    BinOp,
    Call,
    Const,
    FUNCTIONS,
    Neg,
    Param,
    Var,
    evaluate,
    free_params,
    parse_expr,
    pretty,
)
from .fields import (
    ExprField,
    FuncField,
    GridField,
    ScalarField,
    antiderivative,
    as_field,
    constant,
    cumulative_integral,
    default_step,
    differentiate,
    integrate,
)

__all__ = [
    "BinOp",
    "Call",
    "Const",
    "ExprField",
    "FUNCTIONS",
    "FuncField",
    "GridField",
    "Neg",
    "Param",
    "ScalarField",
    "Var",
    "antiderivative",
    "as_field",
    "constant",
    "cumulative_integral",
    "default_step",
    "differentiate",
    "evaluate",
    "free_params",
    "integrate",
    "parse_expr",
    "pretty",
]
