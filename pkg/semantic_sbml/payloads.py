"""
Response bodies shared by the CLI and the HTTP service.

Each function runs one toolkit operation and serializes its result, so a
CLI subcommand and its HTTP endpoint produce the same bytes for the same
inputs.
"""

import json
import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Optional, Union

from .annodb import AnnotationStore, EntityRecord
from .balancing import (
    BalancingConfig,
    apply_balanced,
    balance,
    balance_report,
    build_problem,
)
from .cluster import DEFAULT_CLUSTER_THRESHOLD, cluster_models, fingerprint
from .diffmerge import FAIL, MergePolicy, diff_models, merge_models, split_model
from .errors import InvalidPolicy
from .formats import load_model, parse_shorthand, print_shorthand, write_sbml
from .model.document import ModelDocument
from .model.validation import validate_model
from .sbo import SboRuleTable, assign_sbo_terms
from .semantics import DEFAULT_THRESHOLD, EquivalenceOracle, remove_annotation, set_annotation
from .viz import ModelDotOptions, model_to_dot, similarity_to_dot

logger = logging.getLogger(__name__)

JSON = "application/json"
TSV = "text/tab-separated-values"
SBML = "application/xml"
DOT = "text/vnd.graphviz"
SHORTHAND = "text/x-shorthand"

#: Output selector accepted by the payload functions -> media type
MEDIA_TYPES = {"json": JSON, "tsv": TSV, "sbml": SBML, "dot": DOT, "shorthand": SHORTHAND}

SET = "set"
REMOVE = "remove"


@dataclass(frozen=True)
class Payload:
    body: bytes
    media_type: str

    @property
    def text(self) -> str:
        return self.body.decode("utf-8")


def _json(payload: Any) -> Payload:
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    return Payload(text.encode("utf-8"), JSON)


def _text(text: str, media_type: str) -> Payload:
    return Payload(text.encode("utf-8"), media_type)


def _sbml(doc: ModelDocument) -> Payload:
    return Payload(write_sbml(doc), SBML)


def _choose(output: str, allowed: Sequence[str]) -> str:
    if output not in allowed:
        raise ValueError(f"output must be one of {', '.join(allowed)}, not {output!r}")
    return output


def media_output(accept: Optional[str], allowed: Sequence[str]) -> str:
    """First entry of ``allowed`` matching an Accept header; ``allowed[0]`` otherwise."""
    if accept:
        requested = [part.split(";")[0].strip() for part in accept.split(",")]
        for media_type in requested:
            for output in allowed:
                if MEDIA_TYPES[output] == media_type:
                    return output
    return allowed[0]


def parse_policy(
    value: Union[str, dict[str, Any], None], allow_files: bool = False
) -> MergePolicy:
    """Merge policy from ``fail|left|right``, inline policy TSV, a policy dict
    or, when ``allow_files`` is set, ``file=<path>``.

    Raises:
        InvalidPolicy: unknown choice, unreadable or refused file, bad override
    """
    if value is None:
        return MergePolicy(FAIL)
    if isinstance(value, dict):
        return MergePolicy.from_dict(value)
    if "\t" in value or "\n" in value:
        return MergePolicy.from_tsv(value)
    if value.startswith("file="):
        if not allow_files:
            raise InvalidPolicy("policy files are only read from the command line")
        path = value[len("file=") :]
        try:
            with open(path, encoding="utf-8") as f:
                return MergePolicy.from_tsv(f.read())
        except OSError as e:
            raise InvalidPolicy(f"cannot read policy file {path}: {e}") from None
    return MergePolicy(value)


# --- model-core / formats -------------------------------------------------


def validate_payload(data: Union[bytes, str], output: str = "json") -> Payload:
    output = _choose(output, ("json", "tsv"))
    report = validate_model(load_model(data))
    return _json(report.to_dict()) if output == "json" else _text(report.to_tsv(), TSV)


def compile_shorthand_payload(text: Union[bytes, str]) -> Payload:
    return _sbml(parse_shorthand(text))


def decompile_shorthand_payload(data: Union[bytes, str]) -> Payload:
    return _text(print_shorthand(load_model(data)), SHORTHAND)


# --- semantics / diffmerge ------------------------------------------------


def annotate_payload(
    doc: ModelDocument, element: str, qualifier: str, uri: str, action: str = SET
) -> Payload:
    if action == SET:
        return _sbml(set_annotation(doc, element, qualifier, uri))
    if action == REMOVE:
        return _sbml(remove_annotation(doc, element, qualifier, uri))
    raise ValueError(f"action must be {SET} or {REMOVE}, not {action!r}")


def diff_payload(
    left: ModelDocument,
    right: ModelDocument,
    output: str = "json",
    equiv: Optional[EquivalenceOracle] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> Payload:
    output = _choose(output, ("json", "tsv"))
    report = diff_models(left, right, equiv, threshold)
    return _text(report.to_json(), JSON) if output == "json" else _text(report.to_tsv(), TSV)


def merge_payload(
    models: Sequence[ModelDocument],
    policy: Optional[MergePolicy] = None,
    output: str = "sbml",
    equiv: Optional[EquivalenceOracle] = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> Payload:
    """Merged SBML, or a JSON bundle with the resolved conflicts and renames.

    Raises:
        MergeConflict: unresolved conflicts under a ``fail`` policy
    """
    output = _choose(output, ("sbml", "json"))
    result = merge_models(models, policy, equiv, threshold)
    if output == "sbml":
        return _sbml(result.document)
    return _json(
        {
            "model": write_sbml(result.document).decode("utf-8"),
            **result.conflicts.to_dict(),
            **result.renames.to_dict(),
        }
    )


def split_payload(doc: ModelDocument, seeds: Sequence[str], expand: bool = False) -> Payload:
    return _sbml(split_model(doc, seeds, expand_reactions=expand))


# --- balancing / sbo ------------------------------------------------------


def balance_payload(
    doc: ModelDocument,
    data: Union[bytes, str, None] = None,
    config: Optional[BalancingConfig] = None,
    output: str = "sbml",
) -> Payload:
    """Balanced model (SBML), balance report (TSV) or both (JSON)."""
    output = _choose(output, ("sbml", "tsv", "json"))
    problem = build_problem(doc, data, config)
    balanced = balance(problem)
    if output == "tsv":
        return _text(balance_report(problem, balanced).to_tsv(), TSV)
    updated = apply_balanced(doc, balanced, config)
    if output == "sbml":
        return _sbml(updated)
    return _json(
        {
            "model": write_sbml(updated).decode("utf-8"),
            "report": balance_report(problem, balanced).to_dict(),
        }
    )


def sbo_payload(
    doc: ModelDocument, rules: Optional[SboRuleTable] = None, output: str = "sbml"
) -> Payload:
    """Annotated model (SBML), assignment log (TSV) or both (JSON)."""
    output = _choose(output, ("sbml", "tsv", "json"))
    updated, log = assign_sbo_terms(doc, rules)
    if output == "tsv":
        return _text(log.to_tsv(), TSV)
    if output == "sbml":
        return _sbml(updated)
    return _json({"model": write_sbml(updated).decode("utf-8"), **log.to_dict()})


# --- cluster / viz --------------------------------------------------------


def cluster_payload(
    models: Sequence[tuple[str, ModelDocument]],
    threshold: float = DEFAULT_CLUSTER_THRESHOLD,
    output: str = "json",
    equiv: Optional[EquivalenceOracle] = None,
) -> Payload:
    """Similarity graph of labelled models as JSON, TSV or DOT."""
    output = _choose(output, ("json", "tsv", "dot"))
    corpus = [fingerprint(doc, equiv, label) for label, doc in models]
    graph = cluster_models(corpus, threshold)
    if output == "json":
        return _json(graph.to_dict())
    if output == "tsv":
        return _text(graph.to_tsv(), TSV)
    return _text(similarity_to_dot(graph), DOT)


def visualize_payload(doc: ModelDocument, options: Optional[ModelDotOptions] = None) -> Payload:
    return _text(model_to_dot(doc, options), DOT)


# --- annodb ---------------------------------------------------------------


def _records(records: Sequence[EntityRecord]) -> Payload:
    return _json({"records": [record.to_dict() for record in records]})


def search_payload(
    store: AnnotationStore,
    name: Optional[str] = None,
    exact: bool = False,
    namespace: Optional[str] = None,
    identifier: Optional[str] = None,
) -> Payload:
    """Records found by name, or the representative record of an id."""
    if name is not None:
        return _records(store.search_by_name(name, exact))
    if namespace is None or identifier is None:
        raise ValueError("search needs a name or both a namespace and an id")
    record = store.search_by_id(namespace, identifier)
    return _records([record] if record is not None else [])
