"""
Element alignment shared by diff and merge.

Compartments, species and parameters are matched first; reactions are only
candidates when their reactants and products agree, species and
stoichiometry, under the species matching. Unmatched right-hand elements
keep their id unless it collides with an id already taken, in which case
they are renamed ``<id>__m<k>`` (k = 1-based position of the source model).
"""

from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from ..model.document import (
    COMPARTMENT,
    PARAMETER,
    REACTION,
    SPECIES,
    Element,
    ModelDocument,
    Reaction,
    Species,
    SpeciesReference,
)
from ..model.expression import format_number, rename_symbols, to_infix
from ..semantics import (
    DEFAULT_THRESHOLD,
    AcceptPair,
    EquivalenceOracle,
    MatchScore,
    match_kind,
)

#: Attributes compared per element kind, in report order
ATTRIBUTES: dict[str, tuple[str, ...]] = {
    COMPARTMENT: ("name", "size", "sbo", "annotations"),
    SPECIES: (
        "name",
        "compartment",
        "initial_amount",
        "boundary",
        "constant",
        "sbo",
        "annotations",
    ),
    PARAMETER: ("value", "sbo", "annotations"),
    REACTION: (
        "name",
        "reversible",
        "reactants",
        "products",
        "modifiers",
        "kinetic_law",
        "sbo",
        "annotations",
    ),
}

_UNMATCHED = "\x00"


@dataclass
class Alignment:
    pairs: list[tuple[Element, Element, MatchScore]] = field(default_factory=list)
    unmatched_left: list[Element] = field(default_factory=list)
    unmatched_right: list[Element] = field(default_factory=list)
    #: Right-hand id -> id in the left (merged) id space
    id_map: dict[str, str] = field(default_factory=dict)
    #: (kind, old id, new id) for renamed unmatched right-hand elements
    renames: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def matching(self) -> tuple[MatchScore, ...]:
        return tuple(score for _, _, score in self.pairs)


def _side(
    references: tuple[SpeciesReference, ...], translate: Callable[[str], str]
) -> tuple[tuple[str, float], ...]:
    totals: dict[str, float] = {}
    for reference in references:
        species = translate(reference.species)
        totals[species] = totals.get(species, 0.0) + reference.stoichiometry
    return tuple(sorted(totals.items()))


def _sides(
    reaction: Reaction, translate: Callable[[str], str]
) -> tuple[tuple[tuple[str, float], ...], ...]:
    return _side(reaction.reactants, translate), _side(reaction.products, translate)


def _same_sides(species_map: dict[str, str]) -> AcceptPair:
    def accept(left: Element, right: Element) -> bool:
        assert isinstance(left, Reaction) and isinstance(right, Reaction)
        mapped = _sides(right, lambda s: species_map.get(s, _UNMATCHED + s))
        return _sides(left, lambda s: s) == mapped

    return accept


def _unique_id(element_id: str, source: int, taken: set[str]) -> str:
    candidate = f"{element_id}__m{source}"
    counter = 2
    while candidate in taken:
        candidate = f"{element_id}__m{source}_{counter}"
        counter += 1
    return candidate


def align(
    left: ModelDocument,
    right: ModelDocument,
    equiv: Optional[EquivalenceOracle] = None,
    threshold: float = DEFAULT_THRESHOLD,
    source: int = 2,
) -> Alignment:
    """Match ``right`` against ``left`` and map every right id into the left id space."""
    result = Alignment()
    for kind in (COMPARTMENT, SPECIES, PARAMETER, REACTION):
        lefts, rights = left.elements(kind), right.elements(kind)
        accept: Optional[AcceptPair] = None
        if kind == REACTION:
            accept = _same_sides(
                {b.id: a.id for a, b, _ in result.pairs if a.kind == SPECIES}
            )
        selected = match_kind(lefts, rights, equiv, threshold, accept)
        left_hit = {i for i, _, _ in selected}
        right_hit = {j for _, j, _ in selected}
        for i, j, score in selected:
            result.pairs.append((lefts[i], rights[j], score))
            result.id_map[rights[j].id] = lefts[i].id
        result.unmatched_left.extend(e for i, e in enumerate(lefts) if i not in left_hit)
        result.unmatched_right.extend(e for j, e in enumerate(rights) if j not in right_hit)

    taken = set(left.all_ids())
    for element in result.unmatched_right:
        new_id = element.id
        if new_id in taken:
            new_id = _unique_id(element.id, source, taken)
            result.renames.append((element.kind, element.id, new_id))
        taken.add(new_id)
        result.id_map[element.id] = new_id
    return result


def translate(element: Element, id_map: dict[str, str]) -> Element:
    """Rewrite a right-hand element into the left id space."""

    def mapped(element_id: str) -> str:
        return id_map.get(element_id, element_id)

    new_id = mapped(element.id)
    if isinstance(element, Species):
        return replace(element, id=new_id, compartment=mapped(element.compartment))
    if isinstance(element, Reaction):
        local_ids = element.local_ids()
        law_map = {k: v for k, v in id_map.items() if k not in local_ids}
        return replace(
            element,
            id=new_id,
            reactants=tuple(
                SpeciesReference(mapped(r.species), r.stoichiometry) for r in element.reactants
            ),
            products=tuple(
                SpeciesReference(mapped(r.species), r.stoichiometry) for r in element.products
            ),
            modifiers=tuple(mapped(m) for m in element.modifiers),
            kinetic_law=(
                None
                if element.kinetic_law is None
                else rename_symbols(element.kinetic_law, law_map)
            ),
        )
    return replace(element, id=new_id)


def _references_text(references: tuple[SpeciesReference, ...]) -> str:
    parts = sorted(
        r.species if r.stoichiometry == 1 else f"{format_number(r.stoichiometry)} {r.species}"
        for r in references
    )
    return " + ".join(parts)


def _law_text(reaction: Reaction) -> str:
    text = "" if reaction.kinetic_law is None else to_infix(reaction.kinetic_law)
    if reaction.local_parameters:
        locals_text = ", ".join(
            f"{p.id}={format_number(p.value)}"
            + (f" {p.sbo}" if p.sbo else "")
            + (f" [{p.annotations.canonical_text()}]" if p.annotations else "")
            for p in sorted(reaction.local_parameters, key=lambda p: p.id)
        )
        text += f" | {locals_text}"
    return text


def attribute_values(element: Element) -> dict[str, str]:
    """Canonical text of every compared attribute of ``element``."""
    values: dict[str, str] = {}
    for attribute in ATTRIBUTES[element.kind]:
        if attribute == "annotations":
            values[attribute] = element.annotations.canonical_text()
        elif attribute == "sbo":
            values[attribute] = element.sbo or ""
        elif attribute in ("reactants", "products"):
            values[attribute] = _references_text(getattr(element, attribute))
        elif attribute == "modifiers":
            values[attribute] = ", ".join(sorted(getattr(element, attribute)))
        elif attribute == "kinetic_law":
            assert isinstance(element, Reaction)
            values[attribute] = _law_text(element)
        else:
            value = getattr(element, attribute)
            if isinstance(value, bool):
                values[attribute] = "true" if value else "false"
            elif isinstance(value, float):
                values[attribute] = format_number(value)
            else:
                values[attribute] = str(value)
    return values


def differing_attributes(left: Element, right: Element) -> list[tuple[str, str, str]]:
    """(attribute, left text, right text) for every attribute that differs.

    ``right`` must already be translated into the left id space.
    """
    left_values = attribute_values(left)
    right_values = attribute_values(right)
    return [
        (attribute, left_values[attribute], right_values[attribute])
        for attribute in ATTRIBUTES[left.kind]
        if left_values[attribute] != right_values[attribute]
    ]
