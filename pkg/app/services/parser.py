"""
Recursive-descent parser for periodic coefficient expressions.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := number | 't' | 'pi' | 'sin' '(' expr ')' | 'cos' '(' expr ')'
            | '(' expr ')' | '-' factor

Implicit multiplication is rejected. Parsed expressions are checked for
periodicity with the declared period before they are returned.
"""

import logging
import math
import re
from typing import NamedTuple

import numpy as np

from ..errors import EvaluationError, ExpressionSyntaxError, PeriodicityError
from ..models.expression import (
    BinaryOp,
    Call,
    Node,
    Number,
    PeriodicExpr,
    UnaryMinus,
    Variable,
    render,
)

logger = logging.getLogger(__name__)

PERIODICITY_SAMPLES = 1024
PERIODICITY_TOL = 1e-10

_TOKEN = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<symbol>[-+*/()]))"
)
_FUNCTIONS = {"sin", "cos"}


class Token(NamedTuple):
    kind: str  # "number" | "name" | "symbol" | "end"
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        match = _TOKEN.match(text, pos)
        if match is None or match.lastgroup is None:
            offset = len(text[pos:]) - len(text[pos:].lstrip())
            raise ExpressionSyntaxError(
                f"unexpected character {text[pos + offset]!r}", text, pos + offset
            )
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind)))
        pos = match.end()
    tokens.append(Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_variable: bool):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0
        self.allow_variable = allow_variable

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def error(self, message: str, token: Token | None = None) -> ExpressionSyntaxError:
        token = token or self.current
        return ExpressionSyntaxError(message, self.text, token.position)

    def advance(self) -> Token:
        token = self.current
        self.index += 1
        return token

    def expect(self, symbol: str) -> None:
        if self.current.text != symbol or self.current.kind != "symbol":
            found = self.current.text or "end of input"
            raise self.error(f"expected {symbol!r}, found {found!r}")
        self.advance()

    def parse(self) -> Node:
        if self.current.kind == "end":
            raise self.error("empty expression")
        node = self.expr()
        if self.current.kind != "end":
            raise self.error(f"unexpected token {self.current.text!r}")
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.current.kind == "symbol" and self.current.text in "+-":
            op = self.advance().text
            node = BinaryOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.current.kind == "symbol" and self.current.text in "*/":
            op = self.advance().text
            node = BinaryOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Number(float(token.text))
        if token.kind == "name":
            self.advance()
            if token.text == "t":
                if not self.allow_variable:
                    raise self.error("variable 't' not allowed here", token)
                return Variable()
            if token.text == "pi":
                return Number(math.pi, label="pi")
            if token.text in _FUNCTIONS:
                self.expect("(")
                argument = self.expr()
                self.expect(")")
                return Call(token.text, argument)
            raise self.error(f"unknown name {token.text!r}", token)
        if token.kind == "symbol" and token.text == "-":
            self.advance()
            return UnaryMinus(self.factor())
        if token.kind == "symbol" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = token.text or "end of input"
        raise self.error(f"unexpected token {found!r}")


def parse_tree(text: str, allow_variable: bool = True) -> Node:
    return _Parser(text, allow_variable).parse()


def check_periodicity(expr: PeriodicExpr, samples: int = PERIODICITY_SAMPLES) -> None:
    """Raise PeriodicityError unless f(t) = f(t + omega) on a uniform sample of [0, omega)."""
    t = np.arange(samples) * (expr.omega / samples)
    here = expr(t)
    there = expr(t + expr.omega)
    if not (np.all(np.isfinite(here)) and np.all(np.isfinite(there))):
        raise EvaluationError(f"'{expr.text}' is not finite on [0, omega]")
    excess = np.abs(here - there) - PERIODICITY_TOL * (1.0 + np.abs(here))
    worst = int(np.argmax(excess))
    if excess[worst] > 0:
        raise PeriodicityError(
            expr.text, expr.omega, float(t[worst]), float(abs(here[worst] - there[worst]))
        )


def parse(text: str, omega: float) -> PeriodicExpr:
    """Parse coefficient text and verify that omega is a period of it."""
    if not (omega > 0 and math.isfinite(omega)):
        raise ValueError(f"period must be a positive real, got {omega!r}")
    expr = PeriodicExpr(parse_tree(text), float(omega), text.strip())
    check_periodicity(expr)
    logger.debug(f"Parsed {expr.text!r} with period {expr.omega:.16g}")
    return expr


def parse_constant(text: str) -> float:
    """Evaluate a constant expression such as ``2*pi`` (no ``t`` allowed)."""
    node = parse_tree(text, allow_variable=False)
    return evaluate(PeriodicExpr(node, 1.0, text.strip()), 0.0)


def constant(value: float, omega: float) -> PeriodicExpr:
    node = Number(float(value))
    return PeriodicExpr(node, float(omega), render(node))


def evaluate(expr: PeriodicExpr, t: float) -> float:
    """Evaluate at a single time; the result is guaranteed finite."""
    value = expr(float(t))
    if not math.isfinite(value):
        raise EvaluationError(f"'{expr.text}' is not finite at t = {t!r}")
    return value


def to_text(expr: PeriodicExpr) -> str:
    return render(expr.root)
