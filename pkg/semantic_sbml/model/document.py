"""
In-memory document model for the supported SBML subset.

All classes are frozen dataclasses with tuple-valued collections, so a
document never changes after construction; edits return new documents.
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .annotations import EMPTY_ANNOTATIONS, AnnotationSet
from .expression import Expression

# Element kinds in document order
COMPARTMENT = "compartment"
SPECIES = "species"
PARAMETER = "parameter"
REACTION = "reaction"
ELEMENT_KINDS = (COMPARTMENT, SPECIES, PARAMETER, REACTION)


@dataclass(frozen=True)
class Compartment:
    id: str
    name: str = ""
    size: float = 1.0
    annotations: AnnotationSet = EMPTY_ANNOTATIONS
    sbo: Optional[str] = None

    kind = COMPARTMENT


@dataclass(frozen=True)
class Species:
    id: str
    compartment: str
    name: str = ""
    initial_amount: float = 0.0
    boundary: bool = False
    constant: bool = False
    annotations: AnnotationSet = EMPTY_ANNOTATIONS
    sbo: Optional[str] = None

    kind = SPECIES


@dataclass(frozen=True)
class Parameter:
    id: str
    value: float = 0.0
    annotations: AnnotationSet = EMPTY_ANNOTATIONS
    sbo: Optional[str] = None

    kind = PARAMETER


@dataclass(frozen=True)
class SpeciesReference:
    species: str
    stoichiometry: float = 1.0


@dataclass(frozen=True)
class Reaction:
    id: str
    name: str = ""
    reversible: bool = False
    reactants: tuple[SpeciesReference, ...] = ()
    products: tuple[SpeciesReference, ...] = ()
    modifiers: tuple[str, ...] = ()
    kinetic_law: Optional[Expression] = None
    local_parameters: tuple[Parameter, ...] = ()
    annotations: AnnotationSet = EMPTY_ANNOTATIONS
    sbo: Optional[str] = None

    kind = REACTION

    def participants(self) -> list[str]:
        """Reactant, product and modifier species ids, first occurrence order."""
        seen: list[str] = []
        for species_id in [r.species for r in self.reactants + self.products] + list(
            self.modifiers
        ):
            if species_id not in seen:
                seen.append(species_id)
        return seen

    def local_ids(self) -> set[str]:
        return {p.id for p in self.local_parameters}

    def local_parameter(self, parameter_id: str) -> Optional[Parameter]:
        for parameter in self.local_parameters:
            if parameter.id == parameter_id:
                return parameter
        return None


Element = Union[Compartment, Species, Parameter, Reaction]


@dataclass(frozen=True)
class ModelDocument:
    id: str = "model"
    name: str = ""
    level: int = 2
    version: int = 4
    compartments: tuple[Compartment, ...] = ()
    species: tuple[Species, ...] = ()
    parameters: tuple[Parameter, ...] = ()
    reactions: tuple[Reaction, ...] = field(default=())

    def elements(self, kind: Optional[str] = None) -> tuple[Element, ...]:
        """Elements of one kind, or all elements in document order."""
        groups: dict[str, tuple[Element, ...]] = {
            COMPARTMENT: self.compartments,
            SPECIES: self.species,
            PARAMETER: self.parameters,
            REACTION: self.reactions,
        }
        if kind is not None:
            return groups[kind]
        return self.compartments + self.species + self.parameters + self.reactions

    def is_empty(self) -> bool:
        return not self.elements()

    def all_ids(self) -> list[str]:
        return [element.id for element in self.elements()]

    def element(self, element_id: str) -> Optional[Element]:
        for element in self.elements():
            if element.id == element_id:
                return element
        return None

    def species_by_id(self) -> dict[str, Species]:
        return {s.id: s for s in self.species}

    def replace_element(self, element: Element) -> "ModelDocument":
        """Return a copy with the element of the same kind and id replaced."""
        attribute = {
            COMPARTMENT: "compartments",
            SPECIES: "species",
            PARAMETER: "parameters",
            REACTION: "reactions",
        }[element.kind]
        current: tuple[Element, ...] = getattr(self, attribute)
        updated = tuple(element if e.id == element.id else e for e in current)
        return replace(self, **{attribute: updated})


def element_path(element: Element) -> str:
    """Stable path used in reports, e.g. ``species:A``."""
    return f"{element.kind}:{element.id}"
