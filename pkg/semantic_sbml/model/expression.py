"""
Arithmetic expression tree for kinetic laws.

The same tree is produced by the shorthand infix parser and by the MathML
reader. Infix grammar, from loosest to tightest binding::

    expr  := term (('+' | '-') term)*
    term  := unary (('*' | '/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | IDENT | '(' expr ')'

``^`` is right-associative and binds tighter than unary minus.
"""

import math
import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from typing import Callable, Optional, Union

from ..errors import NonFiniteResult, ShorthandSyntaxError, UnboundSymbol

IDENTIFIER_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

# Binding strength used by the printer
_PREC_SUM = 1
_PREC_PRODUCT = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


@dataclass(frozen=True)
class Expression:
    """Base node."""

    def children(self) -> tuple["Expression", ...]:
        return ()

    def __str__(self) -> str:
        return to_infix(self)


@dataclass(frozen=True)
class Number(Expression):
    value: float


@dataclass(frozen=True)
class Symbol(Expression):
    name: str


@dataclass(frozen=True)
class Neg(Expression):
    operand: Expression

    def children(self) -> tuple[Expression, ...]:
        return (self.operand,)


@dataclass(frozen=True)
class BinaryOp(Expression):
    left: Expression
    right: Expression

    operator = "?"
    precedence = 0

    def children(self) -> tuple[Expression, ...]:
        return (self.left, self.right)


@dataclass(frozen=True)
class Add(BinaryOp):
    operator = "+"
    precedence = _PREC_SUM


@dataclass(frozen=True)
class Sub(BinaryOp):
    operator = "-"
    precedence = _PREC_SUM


@dataclass(frozen=True)
class Mul(BinaryOp):
    operator = "*"
    precedence = _PREC_PRODUCT


@dataclass(frozen=True)
class Div(BinaryOp):
    operator = "/"
    precedence = _PREC_PRODUCT


@dataclass(frozen=True)
class Pow(BinaryOp):
    operator = "^"
    precedence = _PREC_POW


BINARY_OPERATORS: dict[str, type[BinaryOp]] = {
    "+": Add,
    "-": Sub,
    "*": Mul,
    "/": Div,
    "^": Pow,
}


def format_number(value: float) -> str:
    """Shortest text that reads back to exactly ``value``."""
    if math.isfinite(value) and value == int(value) and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


def walk(expr: Expression) -> Iterator[Expression]:
    yield expr
    for child in expr.children():
        yield from walk(child)


def symbols(expr: Expression) -> set[str]:
    """All symbol names referenced by ``expr``."""
    return {node.name for node in walk(expr) if isinstance(node, Symbol)}


def rename_symbols(expr: Expression, mapping: Mapping[str, str]) -> Expression:
    """Return ``expr`` with every symbol renamed through ``mapping``."""
    if isinstance(expr, Symbol):
        return Symbol(mapping.get(expr.name, expr.name))
    if isinstance(expr, Neg):
        return Neg(rename_symbols(expr.operand, mapping))
    if isinstance(expr, BinaryOp):
        return type(expr)(rename_symbols(expr.left, mapping), rename_symbols(expr.right, mapping))
    return expr


def fold(operator: type[BinaryOp], operands: list[Expression]) -> Expression:
    """Left-fold operands into a chain of binary nodes."""
    result = operands[0]
    for operand in operands[1:]:
        result = operator(result, operand)
    return result


# --- evaluation ----------------------------------------------------------

_ARITHMETIC: dict[type[BinaryOp], Callable[[float, float], float]] = {
    Add: lambda a, b: a + b,
    Sub: lambda a, b: a - b,
    Mul: lambda a, b: a * b,
    Div: lambda a, b: a / b,
    Pow: math.pow,
}


def eval_expression(expr: Expression, env: Mapping[str, float]) -> float:
    """Evaluate ``expr`` with symbols bound from ``env``.

    Raises:
        UnboundSymbol: a symbol has no binding in ``env``
        NonFiniteResult: division by zero, overflow, or an undefined power
    """
    result = _evaluate(expr, env)
    if not math.isfinite(result):
        raise NonFiniteResult(f"expression {to_infix(expr)} is not finite")
    return result


def _evaluate(expr: Expression, env: Mapping[str, float]) -> float:
    if isinstance(expr, Number):
        return expr.value
    if isinstance(expr, Symbol):
        try:
            return float(env[expr.name])
        except KeyError:
            raise UnboundSymbol(f"unbound symbol {expr.name}", {"symbol": expr.name}) from None
    if isinstance(expr, Neg):
        return -_evaluate(expr.operand, env)
    if isinstance(expr, BinaryOp):
        left = _evaluate(expr.left, env)
        right = _evaluate(expr.right, env)
        try:
            value = _ARITHMETIC[type(expr)](left, right)
        except ZeroDivisionError:
            raise NonFiniteResult(f"division by zero in {to_infix(expr)}") from None
        except (OverflowError, ValueError) as e:
            raise NonFiniteResult(f"{e} in {to_infix(expr)}") from None
        if not math.isfinite(value):
            raise NonFiniteResult(f"non-finite value in {to_infix(expr)}")
        return value
    raise TypeError(f"unknown expression node {type(expr).__name__}")


# --- printing ------------------------------------------------------------


def _precedence(expr: Expression) -> int:
    if isinstance(expr, BinaryOp):
        return expr.precedence
    if isinstance(expr, Neg):
        return _PREC_NEG
    return _PREC_ATOM


def to_infix(expr: Expression) -> str:
    """Canonical infix text; ``parse_infix(to_infix(e)) == e`` for every tree
    without negative number literals."""
    return _print(expr)


def _wrap(expr: Expression, minimum: int) -> str:
    text = _print(expr)
    return text if _precedence(expr) >= minimum else f"({text})"


def _print(expr: Expression) -> str:
    if isinstance(expr, Number):
        text = format_number(expr.value)
        return f"({text})" if expr.value < 0 else text
    if isinstance(expr, Symbol):
        return expr.name
    if isinstance(expr, Neg):
        return "-" + _wrap(expr.operand, _PREC_POW)
    if isinstance(expr, Pow):
        return f"{_wrap(expr.left, _PREC_ATOM)}^{_wrap(expr.right, _PREC_NEG)}"
    if isinstance(expr, (Mul, Div)):
        return f"{_wrap(expr.left, _PREC_PRODUCT)}{expr.operator}{_wrap(expr.right, _PREC_NEG)}"
    if isinstance(expr, (Add, Sub)):
        return f"{_wrap(expr.left, _PREC_SUM)} {expr.operator} {_wrap(expr.right, _PREC_PRODUCT)}"
    raise TypeError(f"unknown expression node {type(expr).__name__}")


# --- parsing -------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()]))"
)

_Token = tuple[str, str, int]


def _tokenize(text: str, line: int, col_offset: int) -> list[_Token]:
    tokens: list[_Token] = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN_RE.match(text, position)
        if not match or match.end() == position:
            column = position + col_offset + len(text[position:]) - len(text[position:].lstrip())
            raise ShorthandSyntaxError(line, column, "number, identifier or operator")
        kind = match.lastgroup or "op"
        tokens.append((kind, match.group(kind), match.start(kind) + col_offset))
        position = match.end()
    return tokens


class _InfixParser:
    def __init__(self, text: str, line: int, col_offset: int) -> None:
        self.tokens = _tokenize(text, line, col_offset)
        self.position = 0
        self.line = line
        self.end_col = col_offset + len(text.rstrip())

    def _peek(self) -> Optional[_Token]:
        return self.tokens[self.position] if self.position < len(self.tokens) else None

    def _fail(self, expected: str) -> ShorthandSyntaxError:
        token = self._peek()
        return ShorthandSyntaxError(self.line, token[2] if token else self.end_col, expected)

    def _accept(self, *operators: str) -> Optional[str]:
        token = self._peek()
        if token and token[0] == "op" and token[1] in operators:
            self.position += 1
            return token[1]
        return None

    def parse(self) -> Expression:
        if not self.tokens:
            raise self._fail("expression")
        expr = self._expr()
        if self._peek() is not None:
            raise self._fail("operator or end of line")
        return expr

    def _expr(self) -> Expression:
        left = self._term()
        while (operator := self._accept("+", "-")) is not None:
            left = BINARY_OPERATORS[operator](left, self._term())
        return left

    def _term(self) -> Expression:
        left = self._unary()
        while (operator := self._accept("*", "/")) is not None:
            left = BINARY_OPERATORS[operator](left, self._unary())
        return left

    def _unary(self) -> Expression:
        if self._accept("-"):
            return Neg(self._unary())
        return self._power()

    def _power(self) -> Expression:
        base = self._atom()
        if self._accept("^"):
            return Pow(base, self._unary())
        return base

    def _atom(self) -> Expression:
        token = self._peek()
        if token is None:
            raise self._fail("number, identifier or '('")
        kind, text, _ = token
        if kind == "number":
            value = float(text)
            if not math.isfinite(value):
                raise self._fail("finite number")
            self.position += 1
            return Number(value)
        if kind == "ident":
            self.position += 1
            return Symbol(text)
        if self._accept("("):
            inner = self._expr()
            if not self._accept(")"):
                raise self._fail("')'")
            return inner
        raise self._fail("number, identifier or '('")


def parse_infix(text: str, line: int = 1, col_offset: int = 1) -> Expression:
    """Parse infix kinetic-law text.

    Args:
        text: Expression text
        line: 1-based line number reported in syntax errors
        col_offset: 1-based column of ``text[0]`` in its source line
    """
    return _InfixParser(text, line, col_offset).parse()


ExpressionLike = Union[Expression, str]


def as_expression(value: ExpressionLike) -> Expression:
    return parse_infix(value) if isinstance(value, str) else value
