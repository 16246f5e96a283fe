"""
MIRIAM annotations: resource URI normalization and per-element annotation sets.

Every URI is stored in the normal form ``identifiers.org/<namespace>/<id>``.
Accepted inputs are ``urn:miriam:<ns>:<id>`` (percent-escapes decoded),
``http(s)://identifiers.org/<ns>/<id>`` and the normal form itself.
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional
from urllib.parse import unquote

from ..errors import UnrecognizedUriScheme

NORMAL_PREFIX = "identifiers.org/"
_URN_PREFIX = "urn:miriam:"
_HTTP_PREFIXES = ("http://identifiers.org/", "https://identifiers.org/")


class Qualifier(str, Enum):
    """Biology qualifiers with a fixed meaning; any other text is kept verbatim."""

    IS = "is"
    IS_VERSION_OF = "isVersionOf"
    HAS_PART = "hasPart"
    IS_DESCRIBED_BY = "isDescribedBy"


def normalize_qualifier(qualifier: str) -> str:
    text = qualifier.value if isinstance(qualifier, Qualifier) else str(qualifier).strip()
    if not text:
        raise ValueError("empty qualifier")
    return text


def _normal(namespace: str, identifier: str, raw: str) -> str:
    if not namespace or not identifier or "/" in namespace:
        raise UnrecognizedUriScheme(f"cannot normalize resource URI {raw!r}", {"uri": raw})
    return f"{NORMAL_PREFIX}{namespace}/{identifier}"


def normalize_uri(raw: str) -> str:
    """Normalize a MIRIAM resource reference; idempotent on its own output.

    Raises:
        UnrecognizedUriScheme: the reference is in none of the accepted forms
    """
    text = raw.strip()
    if text.startswith(_URN_PREFIX):
        namespace, _, identifier = text[len(_URN_PREFIX) :].partition(":")
        return _normal(unquote(namespace), unquote(identifier), raw)
    for prefix in _HTTP_PREFIXES:
        if text.startswith(prefix):
            namespace, _, identifier = text[len(prefix) :].partition("/")
            return _normal(unquote(namespace), unquote(identifier), raw)
    if text.startswith(NORMAL_PREFIX):
        namespace, _, identifier = text[len(NORMAL_PREFIX) :].partition("/")
        return _normal(namespace, identifier, raw)
    raise UnrecognizedUriScheme(f"unrecognized URI scheme in {raw!r}", {"uri": raw})


def uri_parts(uri: str) -> tuple[str, str]:
    """Split a normal-form URI into (namespace, id)."""
    namespace, _, identifier = uri[len(NORMAL_PREFIX) :].partition("/")
    return namespace, identifier


def to_url(uri: str) -> str:
    """Resolvable identifiers.org URL for a normal-form URI."""
    return f"https://{uri}"


@dataclass(frozen=True, order=True)
class Annotation:
    """A (qualifier, normalized URI) claim."""

    qualifier: str
    uri: str

    @classmethod
    def create(cls, qualifier: str, uri: str) -> "Annotation":
        return cls(normalize_qualifier(qualifier), normalize_uri(uri))


@dataclass(frozen=True)
class AnnotationSet:
    """Deduplicated annotations of one element."""

    entries: frozenset[Annotation] = field(default_factory=frozenset)

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, str]] = ()) -> "AnnotationSet":
        return cls(frozenset(Annotation.create(q, u) for q, u in pairs))

    def __iter__(self) -> Iterator[Annotation]:
        return iter(sorted(self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __contains__(self, item: object) -> bool:
        return item in self.entries

    def add(self, qualifier: str, uri: str) -> "AnnotationSet":
        return AnnotationSet(self.entries | {Annotation.create(qualifier, uri)})

    def remove(self, qualifier: str, uri: str) -> "AnnotationSet":
        return AnnotationSet(self.entries - {Annotation.create(qualifier, uri)})

    def union(self, other: "AnnotationSet") -> "AnnotationSet":
        return AnnotationSet(self.entries | other.entries)

    def uris(self, qualifier: Optional[str] = None) -> frozenset[str]:
        """URIs, optionally restricted to one qualifier."""
        if qualifier is None:
            return frozenset(a.uri for a in self.entries)
        wanted = normalize_qualifier(qualifier)
        return frozenset(a.uri for a in self.entries if a.qualifier == wanted)

    def is_uris(self) -> frozenset[str]:
        return self.uris(Qualifier.IS)

    def qualifiers(self) -> list[str]:
        return sorted({a.qualifier for a in self.entries})

    def canonical_text(self) -> str:
        return ";".join(f"{a.qualifier}={a.uri}" for a in self)


EMPTY_ANNOTATIONS = AnnotationSet()
