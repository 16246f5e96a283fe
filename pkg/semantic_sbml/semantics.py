"""
Element matching across models and annotation editing.

Scoring ladder for a candidate pair of the same element kind:

* 1.0 (``annotation-identity``) when the ``is`` URI sets intersect after
  equivalence expansion,
* 1.0 (``id-identity``) when the ids and the full annotation sets are equal,
* 0.8 (``id-identity``) when only the ids are equal,
* otherwise the Jaccard index of the full URI sets (``annotation-overlap``).

Pairs scoring below the threshold, or zero, never match. The matching is a
greedy one-to-one selection by descending score; ties are broken by the
lower of the two document positions, then the higher, then the left
position ("mirror order"), so swapping the inputs swaps the pairs.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, replace
from typing import Any, Callable, Optional, Protocol

from .errors import InvalidQualifier, NoSuchElement
from .model.annotations import AnnotationSet, normalize_uri
from .model.document import ELEMENT_KINDS, Element, ModelDocument, element_path
from .model.validation import QUALIFIER_RE, require_valid

logger = logging.getLogger(__name__)

ANNOTATION_IDENTITY = "annotation-identity"
ID_IDENTITY = "id-identity"
ANNOTATION_OVERLAP = "annotation-overlap"

DEFAULT_THRESHOLD = 0.5
ID_IDENTITY_SCORE = 0.8


class EquivalenceOracle(Protocol):
    """Anything that maps a normalized URI to its equivalence class."""

    def equivalence_set(self, uri: str) -> frozenset[str]: ...


@dataclass(frozen=True)
class MatchScore:
    left: str
    right: str
    score: float
    basis: str

    def to_dict(self) -> dict[str, Any]:
        return {"left": self.left, "right": self.right, "score": self.score, "basis": self.basis}


@dataclass(frozen=True)
class MatchResult:
    matches: tuple[MatchScore, ...]
    unmatched_left: tuple[str, ...]
    unmatched_right: tuple[str, ...]

    def mapping(self) -> dict[str, str]:
        """Left element path -> right element path."""
        return {m.left: m.right for m in self.matches}

    def to_dict(self) -> dict[str, Any]:
        return {
            "matches": [m.to_dict() for m in self.matches],
            "unmatched_left": list(self.unmatched_left),
            "unmatched_right": list(self.unmatched_right),
        }


def expand(uris: frozenset[str], equiv: Optional[EquivalenceOracle]) -> frozenset[str]:
    """Union of the equivalence classes of ``uris``."""
    if equiv is None or not uris:
        return uris
    expanded: set[str] = set()
    for uri in uris:
        expanded |= equiv.equivalence_set(uri)
    return frozenset(expanded)


def jaccard(left: frozenset[str], right: frozenset[str]) -> float:
    """|left & right| / |left | right|; 0 when both are empty."""
    union = left | right
    if not union:
        return 0.0
    return len(left & right) / len(union)


def score_pair(
    left: Element, right: Element, equiv: Optional[EquivalenceOracle] = None
) -> tuple[float, str]:
    """Score two elements of the same kind; returns (score, basis)."""
    left_is = expand(left.annotations.is_uris(), equiv)
    right_is = expand(right.annotations.is_uris(), equiv)
    if left_is & right_is:
        return 1.0, ANNOTATION_IDENTITY
    if left.id == right.id:
        if left.annotations == right.annotations:
            return 1.0, ID_IDENTITY
        return ID_IDENTITY_SCORE, ID_IDENTITY
    return jaccard(left.annotations.uris(), right.annotations.uris()), ANNOTATION_OVERLAP


AcceptPair = Callable[[Element, Element], bool]


def match_kind(
    lefts: Sequence[Element],
    rights: Sequence[Element],
    equiv: Optional[EquivalenceOracle] = None,
    threshold: float = DEFAULT_THRESHOLD,
    accept: Optional[AcceptPair] = None,
) -> list[tuple[int, int, MatchScore]]:
    """Greedy one-to-one matching of two element lists of one kind.

    Args:
        lefts: Elements of the left document, in document order
        rights: Elements of the right document, in document order
        equiv: Optional equivalence oracle for ``is`` URIs
        threshold: Minimum score of an accepted pair
        accept: Extra predicate a pair must satisfy to be a candidate

    Returns:
        (left index, right index, score) triples in selection order
    """
    candidates: list[tuple[tuple[float, int, int, int], int, int, MatchScore]] = []
    for i, left in enumerate(lefts):
        for j, right in enumerate(rights):
            score, basis = score_pair(left, right, equiv)
            if score <= 0 or score < threshold:
                continue
            if accept is not None and not accept(left, right):
                continue
            key = (-score, min(i, j), max(i, j), i)
            candidates.append(
                (key, i, j, MatchScore(element_path(left), element_path(right), score, basis))
            )
    candidates.sort(key=lambda candidate: candidate[0])

    used_left: set[int] = set()
    used_right: set[int] = set()
    selected: list[tuple[int, int, MatchScore]] = []
    for _, i, j, match in candidates:
        if i in used_left or j in used_right:
            continue
        used_left.add(i)
        used_right.add(j)
        selected.append((i, j, match))
    return selected


def match_elements(
    a: ModelDocument,
    b: ModelDocument,
    equiv: Optional[EquivalenceOracle] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> MatchResult:
    """Match the elements of two documents kind by kind.

    Raises:
        InvalidModel: either document has validation errors
    """
    require_valid(a)
    require_valid(b)
    matches: list[MatchScore] = []
    unmatched_left: list[str] = []
    unmatched_right: list[str] = []
    for kind in ELEMENT_KINDS:
        lefts, rights = a.elements(kind), b.elements(kind)
        selected = match_kind(lefts, rights, equiv, threshold)
        matches.extend(match for _, _, match in selected)
        left_hit = {i for i, _, _ in selected}
        right_hit = {j for _, j, _ in selected}
        unmatched_left.extend(element_path(e) for i, e in enumerate(lefts) if i not in left_hit)
        unmatched_right.extend(element_path(e) for j, e in enumerate(rights) if j not in right_hit)
    logger.debug(
        f"Matched {len(matches)} pairs, unmatched {len(unmatched_left)} left"
        f" and {len(unmatched_right)} right"
    )
    return MatchResult(tuple(matches), tuple(unmatched_left), tuple(unmatched_right))


def _lookup(doc: ModelDocument, element_id: str) -> Element:
    element = doc.element(element_id)
    if element is None:
        raise NoSuchElement(f"no element with id {element_id}", {"id": element_id})
    return element


def _qualifier(qualifier: str) -> str:
    text = str(getattr(qualifier, "value", qualifier)).strip()
    if not QUALIFIER_RE.match(text):
        raise InvalidQualifier(f"invalid qualifier {qualifier!r}", {"qualifier": text})
    return text


def set_annotation(doc: ModelDocument, element_id: str, qualifier: str, uri: str) -> ModelDocument:
    """Return a copy of ``doc`` with (qualifier, uri) added to one element.

    Raises:
        NoSuchElement: no element has ``element_id``
        UnrecognizedUriScheme: ``uri`` cannot be normalized
    """
    element = _lookup(doc, element_id)
    annotations: AnnotationSet = element.annotations.add(_qualifier(qualifier), uri)
    return doc.replace_element(replace(element, annotations=annotations))


def remove_annotation(
    doc: ModelDocument, element_id: str, qualifier: str, uri: str
) -> ModelDocument:
    """Return a copy of ``doc`` without (qualifier, uri) on one element.

    Removing an entry that is not present logs a warning and returns ``doc``.

    Raises:
        NoSuchElement: no element has ``element_id``
    """
    element = _lookup(doc, element_id)
    qualifier = _qualifier(qualifier)
    normalized = normalize_uri(uri)
    if normalized not in element.annotations.uris(qualifier):
        logger.warning(f"{element_path(element)} has no annotation {qualifier}={normalized}")
        return doc
    annotations = element.annotations.remove(qualifier, normalized)
    return doc.replace_element(replace(element, annotations=annotations))


__all__ = [
    "ANNOTATION_IDENTITY",
    "ANNOTATION_OVERLAP",
    "DEFAULT_THRESHOLD",
    "EquivalenceOracle",
    "ID_IDENTITY",
    "MatchResult",
    "MatchScore",
    "expand",
    "jaccard",
    "match_elements",
    "match_kind",
    "normalize_uri",
    "remove_annotation",
    "score_pair",
    "set_annotation",
]
