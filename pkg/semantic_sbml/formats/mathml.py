"""
MathML subset used for kinetic laws.

Supported content: ``<apply>`` with ``plus``, ``minus``, ``times``,
``divide`` and ``power``; ``<ci>``; ``<cn>`` of type ``real``, ``integer``
or ``e-notation``. The writer only emits binary ``<apply>`` nodes and
non-negative ``<cn>`` values, all of which the reader accepts.
"""

from lxml import etree

from ..model.expression import (
    Add,
    BinaryOp,
    Div,
    Expression,
    Mul,
    Neg,
    Number,
    Pow,
    Sub,
    Symbol,
    fold,
    format_number,
)

MATHML_NS = "http://www.w3.org/1998/Math/MathML"

_OPERATOR_TAGS: dict[type[BinaryOp], str] = {
    Add: "plus",
    Sub: "minus",
    Mul: "times",
    Div: "divide",
    Pow: "power",
}


class UnsupportedMath(ValueError):
    """MathML construct outside the supported subset."""


def _local(element: etree._Element) -> str:
    return etree.QName(element).localname


def _elements(parent: etree._Element) -> list[etree._Element]:
    return [child for child in parent if isinstance(child.tag, str)]


def read_math(math: etree._Element) -> Expression:
    """Convert a ``<math>`` element into an expression tree.

    Raises:
        UnsupportedMath: the content uses constructs outside the subset
    """
    children = _elements(math)
    if len(children) != 1:
        raise UnsupportedMath(f"<math> must hold exactly one expression, found {len(children)}")
    return _read_node(children[0])


def _read_number(node: etree._Element) -> Expression:
    number_type = node.get("type", "real")
    if number_type == "e-notation":
        mantissa = (node.text or "").strip()
        separators = [c for c in node if isinstance(c.tag, str) and _local(c) == "sep"]
        exponent = (separators[0].tail or "").strip() if separators else "0"
        value = float(mantissa) * 10.0 ** int(exponent)
    elif number_type in ("real", "integer"):
        value = float((node.text or "").strip())
    else:
        raise UnsupportedMath(f'<cn type="{number_type}"> not supported')
    if value < 0:
        return Neg(Number(-value))
    return Number(value)


def _read_node(node: etree._Element) -> Expression:
    tag = _local(node)
    if tag == "ci":
        return Symbol((node.text or "").strip())
    if tag == "cn":
        try:
            return _read_number(node)
        except ValueError as e:
            if isinstance(e, UnsupportedMath):
                raise
            raise UnsupportedMath(f"malformed number {node.text!r}") from None
    if tag != "apply":
        raise UnsupportedMath(f"<{tag}> not supported")

    children = _elements(node)
    if not children:
        raise UnsupportedMath("empty <apply>")
    operator = _local(children[0])
    operands = [_read_node(child) for child in children[1:]]

    if operator in ("plus", "times"):
        if not operands:
            raise UnsupportedMath(f"<{operator}> without operands")
        return fold(Add if operator == "plus" else Mul, operands)
    if operator == "minus":
        if len(operands) == 1:
            return Neg(operands[0])
        if len(operands) == 2:
            return Sub(operands[0], operands[1])
        raise UnsupportedMath("<minus> takes one or two operands")
    if operator in ("divide", "power"):
        if len(operands) != 2:
            raise UnsupportedMath(f"<{operator}> takes two operands")
        return (Div if operator == "divide" else Pow)(operands[0], operands[1])
    raise UnsupportedMath(f"<{operator}> not supported")


def write_math(parent: etree._Element, expr: Expression) -> etree._Element:
    """Append a ``<math>`` element for ``expr`` to ``parent``."""
    math = etree.SubElement(parent, f"{{{MATHML_NS}}}math", nsmap={None: MATHML_NS})
    _write_node(math, expr)
    return math


def _write_node(parent: etree._Element, expr: Expression) -> None:
    if isinstance(expr, Number):
        if expr.value < 0:
            _write_node(parent, Neg(Number(-expr.value)))
            return
        cn = etree.SubElement(parent, f"{{{MATHML_NS}}}cn")
        cn.text = f" {format_number(expr.value)} "
        return
    if isinstance(expr, Symbol):
        ci = etree.SubElement(parent, f"{{{MATHML_NS}}}ci")
        ci.text = f" {expr.name} "
        return
    apply = etree.SubElement(parent, f"{{{MATHML_NS}}}apply")
    if isinstance(expr, Neg):
        etree.SubElement(apply, f"{{{MATHML_NS}}}minus")
        _write_node(apply, expr.operand)
        return
    if isinstance(expr, BinaryOp):
        etree.SubElement(apply, f"{{{MATHML_NS}}}{_OPERATOR_TAGS[type(expr)]}")
        _write_node(apply, expr.left)
        _write_node(apply, expr.right)
        return
    raise TypeError(f"unknown expression node {type(expr).__name__}")
