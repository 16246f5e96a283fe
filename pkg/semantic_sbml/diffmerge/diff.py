import logging
from typing import Optional

from ..model.document import ModelDocument, element_path
from ..model.validation import require_valid
from ..semantics import DEFAULT_THRESHOLD, EquivalenceOracle
from .align import align, differing_attributes, translate
from .reports import ADDED, CHANGED, REMOVED, AttributeDelta, DiffEntry, DiffReport

logger = logging.getLogger(__name__)


def diff_models(
    a: ModelDocument,
    b: ModelDocument,
    equiv: Optional[EquivalenceOracle] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> DiffReport:
    """Element-aligned difference of two documents.

    Matched pairs are compared attribute by attribute after translating the
    right element into the left id space; equal pairs produce no entry.
    Entries are ordered changed, removed, added, each in document order.

    Raises:
        InvalidModel: either document has validation errors
    """
    require_valid(a)
    require_valid(b)
    alignment = align(a, b, equiv, threshold)

    entries: list[DiffEntry] = []
    for left, right, _ in alignment.pairs:
        deltas = tuple(
            AttributeDelta(attribute, left_value, right_value)
            for attribute, left_value, right_value in differing_attributes(
                left, translate(right, alignment.id_map)
            )
        )
        if deltas:
            entries.append(DiffEntry(element_path(left), CHANGED, deltas, element_path(right)))
    entries.extend(DiffEntry(element_path(e), REMOVED) for e in alignment.unmatched_left)
    entries.extend(DiffEntry(element_path(e), ADDED) for e in alignment.unmatched_right)

    report = DiffReport(tuple(entries), alignment.matching)
    logger.debug(f"Diff {a.id} vs {b.id}: {report.summary}")
    return report
