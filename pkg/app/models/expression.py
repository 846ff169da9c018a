"""
Expression trees for closed-form periodic coefficients.

A coefficient such as ``1+sin(5*t)`` is held as a small immutable tree. Trees are
compiled once into Python closures: a scalar closure built on ``math`` for the
integrator hot loop and a vectorized closure built on ``numpy`` for grid work.
"""

from dataclasses import dataclass
import math
from types import ModuleType
from typing import Callable

import numpy as np

from ..errors import EvaluationError


@dataclass(frozen=True)
class Number:
    value: float
    label: str | None = None


@dataclass(frozen=True)
class Variable:
    name: str = "t"


@dataclass(frozen=True)
class Call:
    function: str
    argument: "Node"


@dataclass(frozen=True)
class UnaryMinus:
    operand: "Node"


@dataclass(frozen=True)
class BinaryOp:
    operator: str
    left: "Node"
    right: "Node"


Node = Number | Variable | Call | UnaryMinus | BinaryOp

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}
_ATOM = 3


def _precedence(node: Node) -> int:
    if isinstance(node, BinaryOp):
        return _PRECEDENCE[node.operator]
    return _ATOM


def _format_number(node: Number) -> str:
    if node.label:
        return node.label
    if node.value.is_integer() and abs(node.value) < 1e15:
        return str(int(node.value))
    return repr(node.value)


def render(node: Node) -> str:
    """Print a tree in the grammar with the minimal parentheses needed to re-parse it."""
    match node:
        case Number():
            return _format_number(node)
        case Variable():
            return node.name
        case Call(function=function, argument=argument):
            return f"{function}({render(argument)})"
        case UnaryMinus(operand=operand):
            inner = render(operand)
            if isinstance(operand, BinaryOp):
                inner = f"({inner})"
            return f"-{inner}"
        case BinaryOp(operator=op, left=left, right=right):
            prec = _PRECEDENCE[op]
            lhs = render(left)
            if _precedence(left) < prec:
                lhs = f"({lhs})"
            rhs = render(right)
            # '-' and '/' are left-associative
            if _precedence(right) < prec or (
                _precedence(right) == prec and op in "-/"
            ):
                rhs = f"({rhs})"
            return f"{lhs}{op}{rhs}"
    raise TypeError(f"unknown node {node!r}")


def contains_variable(node: Node) -> bool:
    match node:
        case Variable():
            return True
        case Number():
            return False
        case Call(argument=argument):
            return contains_variable(argument)
        case UnaryMinus(operand=operand):
            return contains_variable(operand)
        case BinaryOp(left=left, right=right):
            return contains_variable(left) or contains_variable(right)
    raise TypeError(f"unknown node {node!r}")


def _checked_divide(lib: ModuleType) -> Callable:
    if lib is np:

        def divide(num, den):
            if np.any(den == 0):
                raise EvaluationError("division by zero during evaluation")
            return num / den

    else:

        def divide(num, den):
            if den == 0:
                raise EvaluationError("division by zero during evaluation")
            return num / den

    return divide


def compile_node(node: Node, lib: ModuleType) -> Callable:
    """Turn a tree into a closure of ``t`` using ``lib.sin``/``lib.cos``."""
    match node:
        case Number(value=value):
            return lambda t: value
        case Variable():
            return lambda t: t
        case Call(function=function, argument=argument):
            fn = getattr(lib, function)
            arg = compile_node(argument, lib)
            return lambda t: fn(arg(t))
        case UnaryMinus(operand=operand):
            inner = compile_node(operand, lib)
            return lambda t: -inner(t)
        case BinaryOp(operator=op, left=left, right=right):
            lhs = compile_node(left, lib)
            rhs = compile_node(right, lib)
            if op == "+":
                return lambda t: lhs(t) + rhs(t)
            if op == "-":
                return lambda t: lhs(t) - rhs(t)
            if op == "*":
                return lambda t: lhs(t) * rhs(t)
            divide = _checked_divide(lib)
            return lambda t: divide(lhs(t), rhs(t))
    raise TypeError(f"unknown node {node!r}")


class PeriodicExpr:
    """
    Closed-form omega-periodic scalar function.

    Instances come from ``app.services.parser.parse``, which checks periodicity
    before returning them. Calling an instance evaluates it: Python floats go
    through the scalar closure, arrays through the vectorized one.
    """

    __slots__ = ("_scalar", "_vector", "omega", "root", "text")

    def __init__(self, root: Node, omega: float, text: str = ""):
        self.root = root
        self.omega = float(omega)
        self.text = text or render(root)
        self._scalar = compile_node(root, math)
        self._vector = compile_node(root, np)

    @property
    def is_constant(self) -> bool:
        return not contains_variable(self.root)

    def __call__(self, t):
        if isinstance(t, float | int):
            return float(self._scalar(float(t)))
        t = np.asarray(t, dtype=float)
        values = np.asarray(self._vector(t), dtype=float)
        if values.shape != t.shape:
            values = np.full(t.shape, values)
        return values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PeriodicExpr):
            return NotImplemented
        return self.root == other.root and self.omega == other.omega

    def __hash__(self) -> int:
        return hash((self.root, self.omega))

    def __repr__(self) -> str:
        return f"PeriodicExpr({self.text!r}, omega={self.omega:.16g})"

    def __str__(self) -> str:
        return render(self.root)
