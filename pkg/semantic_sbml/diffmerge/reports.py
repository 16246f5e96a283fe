"""
Diff, conflict and rename reports with their TSV and JSON layouts.

TSV layouts (UTF-8, one header comment line)::

    diff:      path  kind  attribute  left  right
    conflicts: path  attribute  left  right
    renames:   source  kind  old_id  new_id
"""

import json
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any, Optional

from ..semantics import MatchScore

ADDED = "added"
REMOVED = "removed"
CHANGED = "changed"


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


def _tsv(header: list[str], rows: list[list[str]]) -> str:
    lines = ["# " + "\t".join(header)]
    lines.extend("\t".join(_escape(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def _json(payload: dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


@dataclass(frozen=True)
class AttributeDelta:
    attribute: str
    left: str
    right: str

    def to_dict(self) -> dict[str, str]:
        return {"attribute": self.attribute, "left": self.left, "right": self.right}


@dataclass(frozen=True)
class DiffEntry:
    path: str
    kind: str
    deltas: tuple[AttributeDelta, ...] = ()
    #: Path of the right-hand element of a changed pair
    right_path: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        entry: dict[str, Any] = {"path": self.path, "kind": self.kind}
        if self.right_path is not None:
            entry["right_path"] = self.right_path
        entry["deltas"] = [d.to_dict() for d in self.deltas]
        return entry


@dataclass(frozen=True)
class DiffReport:
    entries: tuple[DiffEntry, ...] = ()
    matching: tuple[MatchScore, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def by_kind(self, kind: str) -> list[DiffEntry]:
        return [e for e in self.entries if e.kind == kind]

    @property
    def summary(self) -> dict[str, Any]:
        """Whole-model difference: counts per entry kind."""
        return {
            "identical": not self.entries,
            ADDED: len(self.by_kind(ADDED)),
            REMOVED: len(self.by_kind(REMOVED)),
            CHANGED: len(self.by_kind(CHANGED)),
        }

    def to_dict(self) -> dict[str, Any]:
        return {
            "summary": self.summary,
            "entries": [e.to_dict() for e in self.entries],
            "matching": [m.to_dict() for m in self.matching],
        }

    def to_json(self) -> str:
        return _json(self.to_dict())

    def to_tsv(self) -> str:
        rows: list[list[str]] = []
        for entry in self.entries:
            if not entry.deltas:
                rows.append([entry.path, entry.kind, "", "", ""])
            for delta in entry.deltas:
                rows.append([entry.path, entry.kind, delta.attribute, delta.left, delta.right])
        return _tsv(["path", "kind", "attribute", "left", "right"], rows)


@dataclass(frozen=True)
class Conflict:
    path: str
    attribute: str
    left: str
    right: str

    def to_dict(self) -> dict[str, str]:
        return {
            "path": self.path,
            "attribute": self.attribute,
            "left": self.left,
            "right": self.right,
        }


@dataclass(frozen=True)
class ConflictReport:
    conflicts: tuple[Conflict, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.conflicts)

    def __bool__(self) -> bool:
        return bool(self.conflicts)

    def __iter__(self) -> Iterator[Conflict]:
        return iter(self.conflicts)

    def to_dict(self) -> dict[str, Any]:
        return {"conflicts": [c.to_dict() for c in self.conflicts]}

    def to_json(self) -> str:
        return _json(self.to_dict())

    def to_tsv(self) -> str:
        rows = [[c.path, c.attribute, c.left, c.right] for c in self.conflicts]
        return _tsv(["path", "attribute", "left", "right"], rows)


@dataclass(frozen=True)
class Rename:
    #: 1-based position of the source model in the merge order
    source: int
    kind: str
    old_id: str
    new_id: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "source": self.source,
            "kind": self.kind,
            "old_id": self.old_id,
            "new_id": self.new_id,
        }


@dataclass(frozen=True)
class RenameLog:
    renames: tuple[Rename, ...] = ()

    def __len__(self) -> int:
        return len(self.renames)

    def to_dict(self) -> dict[str, Any]:
        return {"renames": [r.to_dict() for r in self.renames]}

    def to_tsv(self) -> str:
        rows = [[str(r.source), r.kind, r.old_id, r.new_id] for r in self.renames]
        return _tsv(["source", "kind", "old_id", "new_id"], rows)
