"""
N-way merge as a left fold of two-way merges.

Matched elements are unified: annotations are unioned, equal attributes
kept and differing attributes resolved by the merge policy. Unmatched
elements are copied, renamed on id collision. With the ``fail`` default,
conflicts are collected over the whole fold and raised together.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Any, Optional

from ..errors import EmptyInput, InvalidPolicy, MergeConflict
from ..model.document import (
    ELEMENT_KINDS,
    Element,
    ModelDocument,
    element_path,
)
from ..model.validation import require_valid
from ..semantics import DEFAULT_THRESHOLD, EquivalenceOracle
from .align import ATTRIBUTES, align, differing_attributes, translate
from .reports import Conflict, ConflictReport, Rename, RenameLog

logger = logging.getLogger(__name__)

FAIL = "fail"
LEFT = "left"
RIGHT = "right"

#: Attributes a policy override may name
CONFLICTING_ATTRIBUTES = frozenset(
    attribute
    for attributes in ATTRIBUTES.values()
    for attribute in attributes
    if attribute != "annotations"
)


@dataclass(frozen=True)
class MergePolicy:
    """Default choice plus per (element path, attribute) overrides."""

    default: str = FAIL
    overrides: Mapping[tuple[str, str], str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.default not in (FAIL, LEFT, RIGHT):
            raise InvalidPolicy(f"unknown default policy {self.default!r}")
        for (path, attribute), choice in self.overrides.items():
            if choice not in (LEFT, RIGHT):
                raise InvalidPolicy(f"override for {path} {attribute} must be left or right")
            if attribute not in CONFLICTING_ATTRIBUTES:
                raise InvalidPolicy(f"attribute {attribute!r} cannot conflict")

    def choice(self, path: str, attribute: str) -> str:
        return self.overrides.get((path, attribute), self.default)

    @classmethod
    def from_tsv(cls, text: str) -> "MergePolicy":
        """Read a policy file.

        Format: ``default<TAB>fail|left|right`` and
        ``<path><TAB><attribute><TAB>left|right`` lines; ``#`` comments.
        """
        default = FAIL
        overrides: dict[tuple[str, str], str] = {}
        for number, line in enumerate(text.splitlines(), start=1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            columns = [c.strip() for c in line.split("\t")]
            if len(columns) == 2 and columns[0] == "default":
                default = columns[1]
            elif len(columns) == 3:
                overrides[(columns[0], columns[1])] = columns[2]
            else:
                raise InvalidPolicy(f"policy line {number}: expected 2 or 3 tab-separated columns")
        return cls(default, overrides)

    @classmethod
    def from_dict(cls, value: Mapping[str, Any]) -> "MergePolicy":
        """Read ``{"default": ..., "overrides": [{"path", "attribute", "choice"}]}``."""
        default = value.get("default", FAIL)
        entries = value.get("overrides", [])
        if not isinstance(default, str):
            raise InvalidPolicy("policy default must be a string")
        if not isinstance(entries, list):
            raise InvalidPolicy("policy overrides must be a list")
        overrides: dict[tuple[str, str], str] = {}
        for number, entry in enumerate(entries, start=1):
            if not isinstance(entry, Mapping) or set(entry) != {"path", "attribute", "choice"}:
                raise InvalidPolicy(f"override {number} needs exactly path, attribute and choice")
            if not all(isinstance(entry[key], str) for key in entry):
                raise InvalidPolicy(f"override {number}: path, attribute and choice are strings")
            overrides[(entry["path"], entry["attribute"])] = entry["choice"]
        return cls(default, overrides)

    def to_dict(self) -> dict[str, Any]:
        return {
            "default": self.default,
            "overrides": [
                {"path": path, "attribute": attribute, "choice": choice}
                for (path, attribute), choice in sorted(self.overrides.items())
            ],
        }


@dataclass(frozen=True)
class MergeResult:
    document: ModelDocument
    conflicts: ConflictReport
    renames: RenameLog


def _fields(attribute: str, element: Element) -> dict[str, Any]:
    if attribute == "kinetic_law":
        return {
            "kinetic_law": getattr(element, "kinetic_law"),
            "local_parameters": getattr(element, "local_parameters"),
        }
    return {attribute: getattr(element, attribute)}


def _merge_pair(
    accumulator: ModelDocument,
    model: ModelDocument,
    source: int,
    policy: MergePolicy,
    equiv: Optional[EquivalenceOracle],
    threshold: float,
    unresolved: list[Conflict],
    resolved: list[Conflict],
    renames: list[Rename],
) -> ModelDocument:
    alignment = align(accumulator, model, equiv, threshold, source)

    updated: dict[str, Element] = {}
    for left, right, _ in alignment.pairs:
        right = translate(right, alignment.id_map)
        changes: dict[str, Any] = {}
        for attribute, left_value, right_value in differing_attributes(left, right):
            if attribute == "annotations":
                continue
            path = element_path(left)
            conflict = Conflict(path, attribute, left_value, right_value)
            choice = policy.overrides.get((path, attribute))
            if choice is None:
                if policy.default == FAIL:
                    unresolved.append(conflict)
                    continue
                resolved.append(conflict)
                choice = policy.default
            if choice == RIGHT:
                changes.update(_fields(attribute, right))
        annotations = left.annotations.union(right.annotations)
        updated[left.id] = replace(left, annotations=annotations, **changes)

    for kind, old_id, new_id in alignment.renames:
        logger.info(f"Renamed {kind} {old_id} from model {source} to {new_id}")
        renames.append(Rename(source, kind, old_id, new_id))

    groups: dict[str, tuple[Element, ...]] = {}
    for kind in ELEMENT_KINDS:
        kept = tuple(updated.get(e.id, e) for e in accumulator.elements(kind))
        copied = tuple(
            translate(e, alignment.id_map) for e in alignment.unmatched_right if e.kind == kind
        )
        groups[kind] = kept + copied
    logger.debug(
        f"Merged model {source}: {len(alignment.pairs)} matched,"
        f" {len(alignment.unmatched_right)} copied"
    )
    return replace(
        accumulator,
        compartments=groups["compartment"],
        species=groups["species"],
        parameters=groups["parameter"],
        reactions=groups["reaction"],
    )


def merge_models(
    models: Sequence[ModelDocument],
    policy: Optional[MergePolicy] = None,
    equiv: Optional[EquivalenceOracle] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> MergeResult:
    """Merge two or more documents, folding from the left.

    Returns:
        The merged document, the conflicts settled by the policy default
        and the rename log

    Raises:
        MergeConflict: default ``fail`` and unresolved attribute conflicts
        InvalidModel: an input document has validation errors
        EmptyInput: no models given
    """
    if not models:
        raise EmptyInput("merge needs at least one model")
    policy = policy or MergePolicy()
    for model in models:
        require_valid(model)

    unresolved: list[Conflict] = []
    resolved: list[Conflict] = []
    renames: list[Rename] = []
    merged = models[0]
    for source, model in enumerate(models[1:], start=2):
        merged = _merge_pair(
            merged, model, source, policy, equiv, threshold, unresolved, resolved, renames
        )

    if unresolved:
        raise MergeConflict(ConflictReport(tuple(unresolved)))
    require_valid(merged)
    return MergeResult(merged, ConflictReport(tuple(resolved)), RenameLog(tuple(renames)))
