"""
Order-insensitive canonical form of kinetic-law expressions.

Sums and differences flatten into signed term lists, products and quotients
into factor lists with exponents; both lists are sorted by printed form, so
commutative reorderings of the same law compare equal.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

from ..model.expression import (
    Add,
    Div,
    Expression,
    Mul,
    Neg,
    Number,
    Pow,
    Sub,
    Symbol,
    format_number,
)


@dataclass(frozen=True)
class CNumber:
    value: float

    @property
    def text(self) -> str:
        return format_number(self.value)


@dataclass(frozen=True)
class CSymbol:
    name: str

    @property
    def text(self) -> str:
        return self.name


@dataclass(frozen=True)
class CSum:
    #: (sign, term) pairs, sign is +1 or -1
    terms: tuple[tuple[int, "CNode"], ...]

    @property
    def text(self) -> str:
        return "(" + "".join(("+" if s > 0 else "-") + t.text for s, t in self.terms) + ")"


@dataclass(frozen=True)
class CProduct:
    #: (factor, exponent) pairs
    factors: tuple[tuple["CNode", float], ...]

    @property
    def text(self) -> str:
        return "*".join(
            f.text if e == 1 else f"{f.text}^{format_number(e)}" for f, e in self.factors
        )


@dataclass(frozen=True)
class CPower:
    base: "CNode"
    exponent: "CNode"

    @property
    def text(self) -> str:
        return f"pow({self.base.text},{self.exponent.text})"


CNode = Union[CNumber, CSymbol, CSum, CProduct, CPower]


def _terms(expr: Expression, sign: int) -> list[tuple[int, CNode]]:
    if isinstance(expr, Add):
        return _terms(expr.left, sign) + _terms(expr.right, sign)
    if isinstance(expr, Sub):
        return _terms(expr.left, sign) + _terms(expr.right, -sign)
    if isinstance(expr, Neg):
        return _terms(expr.operand, -sign)
    return [(sign, canonicalize(expr))]


def _factors(expr: Expression, exponent: float) -> list[tuple[CNode, float]]:
    if isinstance(expr, Mul):
        return _factors(expr.left, exponent) + _factors(expr.right, exponent)
    if isinstance(expr, Div):
        return _factors(expr.left, exponent) + _factors(expr.right, -exponent)
    if isinstance(expr, Pow) and isinstance(expr.right, Number):
        return _factors(expr.left, exponent * expr.right.value)
    return [(canonicalize(expr), exponent)]


def _sum(expr: Expression) -> CNode:
    terms = sorted(_terms(expr, 1), key=lambda term: (term[1].text, term[0]))
    if len(terms) == 1 and terms[0][0] == 1:
        return terms[0][1]
    return CSum(tuple(terms))


def _fold(coefficient: float, value: float, exponent: float) -> Optional[float]:
    """``coefficient * value**exponent`` when that is a finite real, else None."""
    if value <= 0 and not float(exponent).is_integer():
        return None
    try:
        folded = coefficient * value**exponent
    except (OverflowError, ZeroDivisionError):
        return None
    return folded if math.isfinite(folded) else None


def _product(expr: Expression) -> CNode:
    coefficient = 1.0
    exponents: dict[CNode, float] = {}
    for node, exponent in _factors(expr, 1):
        if isinstance(node, CNumber):
            folded = _fold(coefficient, node.value, exponent)
            if folded is not None:
                coefficient = folded
                continue
        exponents[node] = exponents.get(node, 0) + exponent
    factors = [(node, e) for node, e in exponents.items() if e != 0]
    if coefficient != 1:
        factors.append((CNumber(coefficient), 1))
    factors.sort(key=lambda factor: (factor[0].text, factor[1]))
    if not factors:
        return CNumber(1)
    if len(factors) == 1 and factors[0][1] == 1:
        return factors[0][0]
    return CProduct(tuple(factors))


def canonicalize(expr: Expression) -> CNode:
    """Canonical form of ``expr``."""
    if isinstance(expr, Number):
        return CNumber(expr.value)
    if isinstance(expr, Symbol):
        return CSymbol(expr.name)
    if isinstance(expr, (Add, Sub, Neg)):
        return _sum(expr)
    if isinstance(expr, (Mul, Div)) or (isinstance(expr, Pow) and isinstance(expr.right, Number)):
        return _product(expr)
    if isinstance(expr, Pow):
        return CPower(canonicalize(expr.left), canonicalize(expr.right))
    raise TypeError(f"unknown expression node {type(expr).__name__}")


def as_factors(node: CNode) -> tuple[tuple[CNode, float], ...]:
    """Factor list of ``node``; a non-product is its own single factor."""
    return node.factors if isinstance(node, CProduct) else ((node, 1),)
