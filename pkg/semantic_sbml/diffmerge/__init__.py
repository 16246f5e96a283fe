"""
Element-aligned diff, annotation-aware merge and dependency-closure split.
"""

from .align import Alignment, align
from .diff import diff_models
from .merge import FAIL, LEFT, RIGHT, MergePolicy, MergeResult, merge_models
from .reports import (
    ADDED,
    CHANGED,
    REMOVED,
    AttributeDelta,
    Conflict,
    ConflictReport,
    DiffEntry,
    DiffReport,
    Rename,
    RenameLog,
)
from .split import split_model

__all__ = [
    "ADDED",
    "Alignment",
    "AttributeDelta",
    "CHANGED",
    "Conflict",
    "ConflictReport",
    "DiffEntry",
    "DiffReport",
    "FAIL",
    "LEFT",
    "MergePolicy",
    "MergeResult",
    "REMOVED",
    "RIGHT",
    "Rename",
    "RenameLog",
    "align",
    "diff_models",
    "merge_models",
    "split_model",
]
