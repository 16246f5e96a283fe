"""
Shorthand model notation.

A line-oriented text format that compiles to a ModelDocument::

    @model:2.4.1=MyModel
    @compartments
      default=1
    @species
      default:A=1
      default:B=1
    @parameters
      kf=1
      kr=1
    @reactions
    @rxn=reaction1
      A -> B
      kf*A - kr*B

Declaration lines take optional trailing attributes: a quoted display name,
``sbo=SBO:nnnnnnn``, ``<qualifier>=<uri>`` annotations and, for species,
the flags ``b`` (boundary) and ``c`` (constant). Local parameters follow a
reaction's kinetic-law line as ``@local <id>=<value> [attributes]``.
"""

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from ..errors import (
    DanglingReactionBlock,
    DuplicateId,
    ParseFailure,
    ShorthandSyntaxError,
    UnknownSection,
    UnrecognizedUriScheme,
    UnsupportedSbmlLevel,
)
from ..model.annotations import AnnotationSet
from ..model.document import (
    Compartment,
    ModelDocument,
    Parameter,
    Reaction,
    Species,
    SpeciesReference,
)
from ..model.expression import format_number, parse_infix, to_infix
from ..model.validation import QUALIFIER_RE, require_valid
from .base import BaseFormat
from .sbml import SBML_NAMESPACES

logger = logging.getLogger(__name__)

#: Revision written into the third header component
SHORTHAND_REVISION = 1

SECTIONS = ("compartments", "species", "parameters", "reactions")

_HEADER_RE = re.compile(r"@model:(?P<level>\d+)\.(?P<version>\d+)\.(?P<revision>\d+)=")
_IDENT = r"[A-Za-z_][A-Za-z0-9_]*"
_UNSIGNED = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_NUMBER = r"[+-]?" + _UNSIGNED
_ID_RE = re.compile(_IDENT + r"\Z")
_ASSIGN_RE = re.compile(rf"(?P<id>{_IDENT})=(?P<value>{_NUMBER})\Z")
_SPECIES_RE = re.compile(rf"(?P<compartment>{_IDENT}):(?P<id>{_IDENT})=(?P<value>{_NUMBER})\Z")
_WORD_RE = re.compile(r'"(?:[^"\\]|\\.)*"|\S+')
_EQUATION_TOKEN_RE = re.compile(
    rf"\s*(?:(?P<arrow><->|->)|(?P<number>{_UNSIGNED})|(?P<ident>{_IDENT})|(?P<sep>[+:,]))"
)


@dataclass
class _Word:
    text: str
    col: int


@dataclass
class _Attributes:
    name: str = ""
    sbo: Optional[str] = None
    annotations: AnnotationSet = field(default_factory=AnnotationSet)
    flags: set[str] = field(default_factory=set)


def _strip_comment(line: str) -> str:
    """Drop a ``#`` comment: a ``#`` at the start of a word, outside a quoted name.

    A ``#`` inside a word, such as a URI fragment, is kept.
    """
    quoted = False
    escaped = False
    for index, char in enumerate(line):
        if escaped:
            escaped = False
        elif char == "\\" and quoted:
            escaped = True
        elif char == '"':
            quoted = not quoted
        elif char == "#" and not quoted and (index == 0 or line[index - 1].isspace()):
            return line[:index]
    return line


def _words(text: str, offset: int = 0) -> list[_Word]:
    return [_Word(m.group(0), m.start() + offset + 1) for m in _WORD_RE.finditer(text)]


class _ShorthandParser:
    def __init__(self, text: str) -> None:
        self.lines = text.splitlines()
        self.seen: dict[str, int] = {}
        self.section: Optional[str] = None
        self.compartments: list[Compartment] = []
        self.species: list[Species] = []
        self.parameters: list[Parameter] = []
        self.reactions: list[Reaction] = []
        # open reaction block: header fields plus the lines consumed so far
        self.block: Optional[dict[str, Any]] = None

    def _declare(self, element_id: str, line: int) -> None:
        if element_id in self.seen:
            raise DuplicateId(
                f"line {line}: duplicate id {element_id}"
                f" (first declared on line {self.seen[element_id]})",
                {"id": element_id, "line": line},
            )
        self.seen[element_id] = line

    # --- attributes --------------------------------------------------------

    def _attributes(
        self, words: list[_Word], line: int, allowed_flags: str = "", named: bool = True
    ) -> _Attributes:
        result = _Attributes()
        pairs: list[tuple[str, str]] = []
        for word in words:
            text = word.text
            if text.startswith('"'):
                if result.name or not named:
                    raise ShorthandSyntaxError(line, word.col, "a single quoted name")
                try:
                    result.name = json.loads(text)
                except ValueError:
                    raise ShorthandSyntaxError(line, word.col, "quoted name") from None
                if not result.name:
                    raise ShorthandSyntaxError(line, word.col, "non-empty quoted name")
            elif text in allowed_flags and len(text) == 1:
                result.flags.add(text)
            elif text.startswith("sbo="):
                result.sbo = text[4:]
            elif "=" in text:
                qualifier, _, uri = text.partition("=")
                if not QUALIFIER_RE.match(qualifier):
                    raise ShorthandSyntaxError(line, word.col, "annotation qualifier")
                pairs.append((qualifier, uri))
            else:
                expected = "flag, quoted name, sbo=... or qualifier=uri"
                raise ShorthandSyntaxError(line, word.col, expected)
        try:
            result.annotations = AnnotationSet.of(pairs)
        except UnrecognizedUriScheme as e:
            column = words[0].col if words else 1
            raise ShorthandSyntaxError(line, column, f"resource URI ({e.message})") from None
        return result

    # --- declarations ------------------------------------------------------

    def _compartment(self, words: list[_Word], line: int) -> None:
        match = _ASSIGN_RE.match(words[0].text)
        if not match:
            raise ShorthandSyntaxError(line, words[0].col, "<id>=<size>")
        self._declare(match["id"], line)
        attributes = self._attributes(words[1:], line)
        self.compartments.append(
            Compartment(
                id=match["id"],
                name=attributes.name,
                size=float(match["value"]),
                annotations=attributes.annotations,
                sbo=attributes.sbo,
            )
        )

    def _species(self, words: list[_Word], line: int) -> None:
        match = _SPECIES_RE.match(words[0].text)
        if not match:
            raise ShorthandSyntaxError(line, words[0].col, "<compartment>:<id>=<amount>")
        self._declare(match["id"], line)
        attributes = self._attributes(words[1:], line, allowed_flags="bc")
        self.species.append(
            Species(
                id=match["id"],
                compartment=match["compartment"],
                name=attributes.name,
                initial_amount=float(match["value"]),
                boundary="b" in attributes.flags,
                constant="c" in attributes.flags,
                annotations=attributes.annotations,
                sbo=attributes.sbo,
            )
        )

    def _parameter(self, words: list[_Word], line: int) -> Parameter:
        match = _ASSIGN_RE.match(words[0].text)
        if not match:
            raise ShorthandSyntaxError(line, words[0].col, "<id>=<value>")
        attributes = self._attributes(words[1:], line, named=False)
        return Parameter(
            id=match["id"],
            value=float(match["value"]),
            annotations=attributes.annotations,
            sbo=attributes.sbo,
        )

    # --- reactions ---------------------------------------------------------

    def _open_block(self, words: list[_Word], line: int) -> None:
        self._close_block()
        reaction_id = words[0].text[len("@rxn=") :]
        if not _ID_RE.match(reaction_id):
            raise ShorthandSyntaxError(line, words[0].col + len("@rxn="), "reaction identifier")
        self._declare(reaction_id, line)
        attributes = self._attributes(words[1:], line)
        self.block = {
            "id": reaction_id,
            "line": line,
            "attributes": attributes,
            "equation": None,
            "law": None,
            "locals": [],
        }

    def _equation(self, text: str, line: int) -> dict[str, Any]:
        tokens: list[tuple[str, str, int]] = []
        position = 0
        while text[position:].strip():
            match = _EQUATION_TOKEN_RE.match(text, position)
            if not match or match.end() == position:
                column = position + 1 + len(text[position:]) - len(text[position:].lstrip())
                raise ShorthandSyntaxError(line, column, "species, coefficient, '+', '->' or '<->'")
            kind = match.lastgroup or "sep"
            tokens.append((kind, match.group(kind), match.start(kind) + 1))
            position = match.end()

        arrows = [i for i, token in enumerate(tokens) if token[0] == "arrow"]
        if len(arrows) != 1:
            column = tokens[arrows[1]][2] if len(arrows) > 1 else len(text.rstrip()) + 1
            raise ShorthandSyntaxError(line, column, "exactly one '->' or '<->'")
        arrow = arrows[0]
        colons = [i for i, token in enumerate(tokens) if token[1] == ":"]
        if len(colons) > 1 or (colons and colons[0] < arrow):
            raise ShorthandSyntaxError(line, tokens[colons[-1]][2], "':' after the products")
        end = colons[0] if colons else len(tokens)

        modifiers: list[str] = []
        if colons:
            rest = tokens[end + 1 :]
            if not rest:
                raise ShorthandSyntaxError(line, len(text.rstrip()) + 1, "modifier species")
            for index, (kind, value, col) in enumerate(rest):
                wanted = "ident" if index % 2 == 0 else ","
                if (wanted == "ident" and kind != "ident") or (wanted == "," and value != ","):
                    expected = "modifier species" if wanted == "ident" else "','"
                    raise ShorthandSyntaxError(line, col, expected)
                if kind == "ident":
                    modifiers.append(value)
            if rest[-1][1] == ",":
                raise ShorthandSyntaxError(line, rest[-1][2] + 1, "modifier species")

        return {
            "reactants": self._side(tokens[:arrow], line),
            "products": self._side(tokens[arrow + 1 : end], line),
            "reversible": tokens[arrow][1] == "<->",
            "modifiers": tuple(modifiers),
        }

    @staticmethod
    def _side(tokens: list[tuple[str, str, int]], line: int) -> tuple[SpeciesReference, ...]:
        references: list[SpeciesReference] = []
        index = 0
        while index < len(tokens):
            coefficient = 1.0
            kind, value, col = tokens[index]
            if kind == "number":
                coefficient = float(value)
                index += 1
                if index >= len(tokens):
                    raise ShorthandSyntaxError(line, col + len(value), "species after coefficient")
                kind, value, col = tokens[index]
            if kind != "ident":
                raise ShorthandSyntaxError(line, col, "species")
            references.append(SpeciesReference(value, coefficient))
            index += 1
            if index < len(tokens):
                kind, value, col = tokens[index]
                if value != "+":
                    raise ShorthandSyntaxError(line, col, "'+'")
                index += 1
                if index >= len(tokens):
                    raise ShorthandSyntaxError(line, col + 1, "species")
        return tuple(references)

    def _close_block(self) -> None:
        block = self.block
        if block is None:
            return
        self.block = None
        if block["equation"] is None:
            raise DanglingReactionBlock(
                f"line {block['line']}: reaction {block['id']} has no equation line",
                {"line": block["line"], "id": block["id"]},
            )
        equation = block["equation"]
        attributes: _Attributes = block["attributes"]
        self.reactions.append(
            Reaction(
                id=block["id"],
                name=attributes.name,
                reversible=equation["reversible"],
                reactants=equation["reactants"],
                products=equation["products"],
                modifiers=equation["modifiers"],
                kinetic_law=block["law"],
                local_parameters=tuple(block["locals"]),
                annotations=attributes.annotations,
                sbo=attributes.sbo,
            )
        )

    def _reaction_line(self, raw: str, words: list[_Word], line: int) -> None:
        first = words[0].text
        if first.startswith("@rxn="):
            self._open_block(words, line)
            return
        block = self.block
        if block is None:
            raise DanglingReactionBlock(
                f"line {line}: reaction content outside an @rxn block", {"line": line}
            )
        if first == "@local":
            if block["equation"] is None or len(words) < 2:
                raise ShorthandSyntaxError(line, words[0].col, "@local after the equation line")
            local = self._parameter(words[1:], line)
            if any(p.id == local.id for p in block["locals"]):
                raise DuplicateId(
                    f"line {line}: duplicate local parameter {local.id}",
                    {"id": local.id, "line": line},
                )
            block["locals"].append(local)
            return
        if first.startswith("@"):
            raise ShorthandSyntaxError(line, words[0].col, "@rxn, @local or a section")
        if block["equation"] is None:
            block["equation"] = self._equation(raw, line)
            return
        if block["law"] is None and not block["locals"]:
            offset = len(raw) - len(raw.lstrip())
            block["law"] = parse_infix(raw.strip(), line, offset + 1)
            return
        raise ShorthandSyntaxError(line, words[0].col, "@rxn, @local or a section")

    # --- driver ------------------------------------------------------------

    def _header(self, raw: str, line: int) -> tuple[str, str, int, int]:
        stripped = raw.strip()
        offset = len(raw) - len(raw.lstrip())
        match = _HEADER_RE.match(stripped)
        if not match:
            raise ShorthandSyntaxError(line, offset + 1, "@model:<L>.<V>.<R>=<id>")
        level, version = int(match["level"]), int(match["version"])
        if (level, version) not in SBML_NAMESPACES:
            raise UnsupportedSbmlLevel(
                f"line {line}: SBML level {level} version {version} is not supported",
                {"line": line, "level": level, "version": version},
            )
        words = _words(stripped[match.end() :], offset + match.end())
        if not words or not _ID_RE.match(words[0].text):
            raise ShorthandSyntaxError(line, offset + match.end() + 1, "model identifier")
        name = ""
        if len(words) > 2:
            raise ShorthandSyntaxError(line, words[2].col, "end of line")
        if len(words) == 2:
            if not words[1].text.startswith('"'):
                raise ShorthandSyntaxError(line, words[1].col, "quoted model name")
            try:
                name = json.loads(words[1].text)
            except ValueError:
                raise ShorthandSyntaxError(line, words[1].col, "quoted model name") from None
        return words[0].text, name, level, version

    def parse(self) -> ModelDocument:
        header: Optional[tuple[str, str, int, int]] = None
        for number, original in enumerate(self.lines, start=1):
            raw = _strip_comment(original).rstrip()
            if not raw.strip():
                continue
            if header is None:
                header = self._header(raw, number)
                continue
            offset = len(raw) - len(raw.lstrip())
            words = _words(raw.strip(), offset)
            first = words[0].text
            if first.startswith("@") and first[1:] in SECTIONS:
                if len(words) > 1:
                    raise ShorthandSyntaxError(number, words[1].col, "end of line")
                self._close_block()
                self.section = first[1:]
                continue
            if first.startswith("@model"):
                raise ShorthandSyntaxError(number, words[0].col, "a single @model header")
            if first.startswith("@") and not (first.startswith("@rxn=") or first == "@local"):
                raise UnknownSection(
                    f"line {number}: unknown section {first}", {"line": number, "section": first}
                )
            if self.section == "reactions":
                self._reaction_line(raw, words, number)
            elif first.startswith("@"):
                raise DanglingReactionBlock(
                    f"line {number}: {first} outside the @reactions section", {"line": number}
                )
            elif self.section == "compartments":
                self._compartment(words, number)
            elif self.section == "species":
                self._species(words, number)
            elif self.section == "parameters":
                parameter = self._parameter(words, number)
                self._declare(parameter.id, number)
                self.parameters.append(parameter)
            else:
                raise ShorthandSyntaxError(number, words[0].col, "a section header")
        self._close_block()

        if header is None:
            raise ShorthandSyntaxError(1, 1, "@model:<L>.<V>.<R>=<id>")
        model_id, name, level, version = header
        return ModelDocument(
            id=model_id,
            name=name,
            level=level,
            version=version,
            compartments=tuple(self.compartments),
            species=tuple(self.species),
            parameters=tuple(self.parameters),
            reactions=tuple(self.reactions),
        )


ShorthandSource = Union[str, bytes]


def parse_shorthand(src: ShorthandSource) -> ModelDocument:
    """Compile shorthand text into a ModelDocument.

    Args:
        src: Shorthand text (LF or CRLF line endings)

    Raises:
        ShorthandSyntaxError: a line does not match the grammar
        DuplicateId: an id is declared twice
        UnknownSection: an ``@`` directive names no known section
        DanglingReactionBlock: reaction content outside a complete block
    """
    if isinstance(src, bytes):
        try:
            src = src.decode("utf-8")
        except UnicodeDecodeError as e:
            raise ParseFailure(f"shorthand input is not UTF-8: {e}") from None
    doc = _ShorthandParser(src.lstrip("\ufeff")).parse()
    logger.debug(f"Compiled shorthand model {doc.id} ({len(doc.elements())} elements)")
    return doc


def _attribute_words(
    name: str, sbo: Optional[str], annotations: AnnotationSet, flags: tuple[str, ...] = ()
) -> str:
    words = list(flags)
    if name:
        words.append(json.dumps(name, ensure_ascii=False))
    if sbo:
        words.append(f"sbo={sbo}")
    words.extend(f"{a.qualifier}={a.uri}" for a in annotations)
    return "".join(f" {word}" for word in words)


def _side_text(references: tuple[SpeciesReference, ...]) -> str:
    return " + ".join(
        r.species if r.stoichiometry == 1 else f"{format_number(r.stoichiometry)} {r.species}"
        for r in references
    )


def _equation_text(reaction: Reaction) -> str:
    arrow = "<->" if reaction.reversible else "->"
    parts = (_side_text(reaction.reactants), arrow, _side_text(reaction.products))
    text = " ".join(part for part in parts if part)
    if reaction.modifiers:
        text += " : " + ", ".join(reaction.modifiers)
    return text


def print_shorthand(doc: ModelDocument) -> str:
    """Print the canonical shorthand form of ``doc``.

    Raises:
        InvalidModel: the document has validation errors
    """
    require_valid(doc)
    header = f"@model:{doc.level}.{doc.version}.{SHORTHAND_REVISION}={doc.id}"
    if doc.name:
        header += " " + json.dumps(doc.name, ensure_ascii=False)
    lines = [header]

    if doc.compartments:
        lines.append("@compartments")
        for c in doc.compartments:
            lines.append(
                f"  {c.id}={format_number(c.size)}{_attribute_words(c.name, c.sbo, c.annotations)}"
            )
    if doc.species:
        lines.append("@species")
        for s in doc.species:
            flags = tuple(flag for flag, on in (("b", s.boundary), ("c", s.constant)) if on)
            attributes = _attribute_words(s.name, s.sbo, s.annotations, flags)
            lines.append(f"  {s.compartment}:{s.id}={format_number(s.initial_amount)}{attributes}")
    if doc.parameters:
        lines.append("@parameters")
        for p in doc.parameters:
            attributes = _attribute_words("", p.sbo, p.annotations)
            lines.append(f"  {p.id}={format_number(p.value)}{attributes}")
    if doc.reactions:
        lines.append("@reactions")
        for r in doc.reactions:
            lines.append(f"@rxn={r.id}{_attribute_words(r.name, r.sbo, r.annotations)}")
            lines.append(f"  {_equation_text(r)}")
            if r.kinetic_law is not None:
                lines.append(f"  {to_infix(r.kinetic_law)}")
            for local in r.local_parameters:
                attributes = _attribute_words("", local.sbo, local.annotations)
                lines.append(f"  @local {local.id}={format_number(local.value)}{attributes}")
    return "\n".join(lines) + "\n"


class ShorthandFormat(BaseFormat):
    """Shorthand model notation"""

    name = "shorthand"
    media_type = "text/x-shorthand"

    def read(self, data: bytes) -> ModelDocument:
        return parse_shorthand(data)

    def write(self, doc: ModelDocument, **kwargs: Any) -> bytes:
        return print_shorthand(doc).encode("utf-8")

    def detect(self, data: bytes) -> bool:
        text = data[:4096].decode("utf-8", errors="replace").lstrip("\ufeff")
        for line in text.splitlines():
            stripped = line.strip()
            if stripped and not stripped.startswith("#"):
                return stripped.startswith("@model:")
        return False

