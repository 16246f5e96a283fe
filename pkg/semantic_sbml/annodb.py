"""
Local annotation database: entity records, synonyms and cross-references.

Store directory layout::

    <dir>/records.log   append-only TSV log of merged entity records
    <dir>/index.json    derived index (records and equivalence classes)
    <dir>/.lock         writer lock taken during ingestion

Record lines, in the log and in ingested files, are tab-separated::

    PrimaryURI  Names(|-separated)  CrossRefs(|-separated)  Relations(rel=uri|...)

Lines starting with ``#`` and blank lines are ignored. Later log lines for
the same primary URI supersede earlier ones.
"""

import json
import logging
import os
import tempfile
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Union

from filelock import FileLock
from networkx.utils import UnionFind

from .errors import MalformedRecord, UnrecognizedUriScheme
from .model.annotations import NORMAL_PREFIX, normalize_uri

logger = logging.getLogger(__name__)

RECORDS_FILE = "records.log"
INDEX_FILE = "index.json"
LOCK_FILE = ".lock"


@dataclass(frozen=True)
class EntityRecord:
    primary_uri: str
    names: tuple[str, ...]
    crossrefs: frozenset[str] = frozenset()
    relations: frozenset[tuple[str, str]] = frozenset()

    @property
    def preferred_name(self) -> str:
        return self.names[0]

    def merge(self, other: "EntityRecord") -> "EntityRecord":
        """Combine two records for the same primary URI; ``self`` names come first."""
        names = self.names + tuple(n for n in other.names if n not in self.names)
        return EntityRecord(
            self.primary_uri,
            names,
            self.crossrefs | other.crossrefs,
            self.relations | other.relations,
        )

    def to_line(self) -> str:
        return "\t".join(
            [
                self.primary_uri,
                "|".join(self.names),
                "|".join(sorted(self.crossrefs)),
                "|".join(f"{rel}={uri}" for rel, uri in sorted(self.relations)),
            ]
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "primary_uri": self.primary_uri,
            "names": list(self.names),
            "crossrefs": sorted(self.crossrefs),
            "relations": [{"relation": rel, "target": uri} for rel, uri in sorted(self.relations)],
        }


def _split(column: str) -> list[str]:
    return [item.strip() for item in column.split("|") if item.strip()]


def parse_record_line(text: str, line: int) -> Optional[EntityRecord]:
    """Parse one record line; None for blank and comment lines.

    Raises:
        MalformedRecord: wrong column count, missing names or bad URIs
    """
    if not text.strip() or text.lstrip().startswith("#"):
        return None
    columns = text.rstrip("\r\n").split("\t")
    if not 2 <= len(columns) <= 4:
        raise MalformedRecord(line, f"expected 2 to 4 tab-separated columns, found {len(columns)}")
    columns += [""] * (4 - len(columns))
    primary_raw, names_raw, crossrefs_raw, relations_raw = columns
    try:
        primary = normalize_uri(primary_raw)
        crossrefs = frozenset(normalize_uri(uri) for uri in _split(crossrefs_raw))
        relations: set[tuple[str, str]] = set()
        for item in _split(relations_raw):
            relation, _, target = item.partition("=")
            if not relation or not target:
                raise MalformedRecord(line, f"relation {item!r} is not rel=uri")
            relations.add((relation.strip(), normalize_uri(target)))
    except UnrecognizedUriScheme as e:
        raise MalformedRecord(line, e.message) from None
    names = tuple(_split(names_raw))
    if not names:
        raise MalformedRecord(line, "record has no names")
    if primary in crossrefs:
        raise MalformedRecord(line, "primary URI listed as its own cross-reference")
    return EntityRecord(primary, names, crossrefs, frozenset(relations))


@dataclass(frozen=True)
class IngestSummary:
    accepted: int = 0
    rejected: int = 0
    changed: int = 0
    rejections: tuple[MalformedRecord, ...] = field(default=())

    def to_dict(self) -> dict[str, Any]:
        return {
            "accepted": self.accepted,
            "rejected": self.rejected,
            "changed": self.changed,
            "rejections": [{"line": e.line, "reason": e.message} for e in self.rejections],
        }


@dataclass(frozen=True)
class _State:
    records: dict[str, EntityRecord]
    classes: dict[str, frozenset[str]]
    names: dict[str, frozenset[str]]

    @classmethod
    def build(cls, records: dict[str, EntityRecord]) -> "_State":
        union_find = UnionFind()
        for record in records.values():
            union_find.union(record.primary_uri, *record.crossrefs)
        classes: dict[str, frozenset[str]] = {}
        for members in union_find.to_sets():
            frozen = frozenset(members)
            for uri in frozen:
                classes[uri] = frozen
        names: dict[str, set[str]] = {}
        for record in records.values():
            for name in record.names:
                names.setdefault(name.casefold(), set()).add(record.primary_uri)
        return cls(
            dict(records), classes, {key: frozenset(value) for key, value in names.items()}
        )


class AnnotationStore:
    """Entity records with an equivalence partition over URIs.

    Readers use an immutable snapshot of the in-memory state, so lookups
    need no lock; ingestion holds the directory's writer lock.
    """

    def __init__(self, directory: Optional[Union[str, Path]] = None) -> None:
        """Open a store.

        Args:
            directory: Store directory (created if missing); None keeps the
                store in memory only
        """
        self.directory = Path(directory) if directory is not None else None
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
        self._state = _State.build(self._load())

    # --- persistence -------------------------------------------------------

    def _path(self, name: str) -> Path:
        assert self.directory is not None
        return self.directory / name

    def _load(self) -> dict[str, EntityRecord]:
        records: dict[str, EntityRecord] = {}
        if self.directory is None or not self._path(RECORDS_FILE).exists():
            return records
        with open(self._path(RECORDS_FILE), encoding="utf-8") as f:
            for number, text in enumerate(f, start=1):
                try:
                    record = parse_record_line(text, number)
                except MalformedRecord as e:
                    logger.warning(f"Skipping corrupt log line {number}: {e.message}")
                    continue
                if record is not None:
                    records[record.primary_uri] = record
        logger.debug(f"Loaded {len(records)} records from {self.directory}")
        return records

    def reload(self) -> None:
        self._state = _State.build(self._load())

    def snapshot(self) -> str:
        """Deterministic JSON dump of the store state (the index file content)."""
        state = self._state
        classes = sorted({tuple(sorted(members)) for members in state.classes.values()})
        payload = {
            "records": [state.records[uri].to_dict() for uri in sorted(state.records)],
            "classes": [list(members) for members in classes],
        }
        return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"

    def _write_index(self) -> None:
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".index-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(self.snapshot())
            os.replace(tmp, self._path(INDEX_FILE))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # --- ingestion ---------------------------------------------------------

    def ingest_records(self, records: Union[str, bytes, Iterable[str]]) -> IngestSummary:
        """Merge record lines into the store.

        Malformed lines are rejected and counted; ingestion continues.
        Re-ingesting the same lines changes nothing.
        """
        if isinstance(records, bytes):
            records = records.decode("utf-8")
        lines = records.splitlines() if isinstance(records, str) else list(records)

        parsed: list[EntityRecord] = []
        rejections: list[MalformedRecord] = []
        for number, text in enumerate(lines, start=1):
            try:
                record = parse_record_line(text, number)
            except MalformedRecord as e:
                logger.warning(f"Rejected record line {number}: {e.message}")
                rejections.append(e)
                continue
            if record is not None:
                parsed.append(record)

        if self.directory is None:
            changed = self._merge(parsed)
        else:
            with FileLock(str(self._path(LOCK_FILE))):
                self.reload()
                changed = self._merge(parsed)
                if changed:
                    with open(self._path(RECORDS_FILE), "a", encoding="utf-8") as f:
                        for record in changed:
                            f.write(record.to_line() + "\n")
                    self._write_index()

        summary = IngestSummary(len(parsed), len(rejections), len(changed), tuple(rejections))
        logger.info(
            f"Ingested {summary.accepted} records ({summary.changed} changed,"
            f" {summary.rejected} rejected)"
        )
        return summary

    def _merge(self, parsed: list[EntityRecord]) -> list[EntityRecord]:
        records = dict(self._state.records)
        touched: list[str] = []
        for record in parsed:
            current = records.get(record.primary_uri)
            merged = record if current is None else current.merge(record)
            if merged != current:
                records[record.primary_uri] = merged
                if record.primary_uri not in touched:
                    touched.append(record.primary_uri)
        if touched:
            self._state = _State.build(records)
        return [records[uri] for uri in touched]

    # --- queries -----------------------------------------------------------

    def __len__(self) -> int:
        return len(self._state.records)

    def record_for(self, uri: str) -> Optional[EntityRecord]:
        """Record whose primary URI is ``uri``."""
        return self._state.records.get(normalize_uri(uri))

    def equivalence_set(self, uri: str) -> frozenset[str]:
        """Equivalence class of ``uri``; a singleton for unknown URIs.

        Raises:
            UnrecognizedUriScheme: ``uri`` does not normalize
        """
        normalized = normalize_uri(uri)
        return self._state.classes.get(normalized, frozenset({normalized}))

    def representative(self, uri: str) -> str:
        """Lexicographically smallest member of the class of ``uri``."""
        return min(self.equivalence_set(uri))

    def classes(self) -> list[frozenset[str]]:
        """All equivalence classes, sorted by smallest member."""
        unique = {members for members in self._state.classes.values()}
        return sorted(unique, key=min)

    def search_by_name(self, query: str, exact: bool = False) -> list[EntityRecord]:
        """Case-insensitive name search ordered by (preferred name, primary URI)."""
        state = self._state
        needle = query.strip().casefold()
        if not needle:
            return []
        if exact:
            hits = set(state.names.get(needle, frozenset()))
        else:
            hits = {
                uri for name, uris in state.names.items() if needle in name for uri in uris
            }
        found = [state.records[uri] for uri in hits]
        return sorted(found, key=lambda r: (r.preferred_name, r.primary_uri))

    def search_by_id(self, namespace: str, identifier: str) -> Optional[EntityRecord]:
        """Representative record of the class containing ``identifiers.org/<ns>/<id>``."""
        try:
            uri = normalize_uri(f"{NORMAL_PREFIX}{namespace}/{identifier}")
        except UnrecognizedUriScheme:
            return None
        state = self._state
        members = state.classes.get(uri)
        if members is None:
            return None
        primaries = sorted(m for m in members if m in state.records)
        return state.records[primaries[0]] if primaries else None
