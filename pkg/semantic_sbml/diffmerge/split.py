import logging
from collections.abc import Iterable
from dataclasses import replace

from ..errors import NoSuchElement
from ..model.document import ModelDocument, Reaction, Species
from ..model.expression import symbols
from ..model.validation import require_valid

logger = logging.getLogger(__name__)


def _dependencies(doc: ModelDocument, element_id: str) -> set[str]:
    element = doc.element(element_id)
    if isinstance(element, Species):
        return {element.compartment}
    if isinstance(element, Reaction):
        needed = set(element.participants())
        if element.kinetic_law is not None:
            needed |= symbols(element.kinetic_law) - element.local_ids()
        return needed
    return set()


def split_model(
    doc: ModelDocument, seeds: Iterable[str], expand_reactions: bool = False
) -> ModelDocument:
    """Submodel holding the seeds and everything they depend on.

    Reactions pull their participants and the global symbols of their
    kinetic law; species pull their compartment. With ``expand_reactions``
    every seeded species also pulls each reaction it takes part in. Element
    order follows ``doc``.

    Raises:
        NoSuchElement: a seed is not an element id of ``doc``
        InvalidModel: ``doc`` has validation errors
    """
    require_valid(doc)
    seeds = list(seeds)
    known = set(doc.all_ids())
    missing = sorted(set(seeds) - known)
    if missing:
        raise NoSuchElement(f"no element with id {missing[0]}", {"ids": missing})

    included = set(seeds)
    if expand_reactions:
        seeded_species = {s.id for s in doc.species if s.id in included}
        included |= {
            r.id for r in doc.reactions if seeded_species.intersection(r.participants())
        }

    pending = list(included)
    while pending:
        for dependency in _dependencies(doc, pending.pop()):
            if dependency in known and dependency not in included:
                included.add(dependency)
                pending.append(dependency)

    logger.debug(f"Split {doc.id}: {len(seeds)} seeds closed to {len(included)} elements")
    submodel = replace(
        doc,
        compartments=tuple(e for e in doc.compartments if e.id in included),
        species=tuple(e for e in doc.species if e.id in included),
        parameters=tuple(e for e in doc.parameters if e.id in included),
        reactions=tuple(e for e in doc.reactions if e.id in included),
    )
    return require_valid(submodel)
