"""Structural validation of model documents."""

import json
import math
import re
from dataclasses import dataclass, field
from typing import Any

from ..errors import InvalidModel
from .annotations import AnnotationSet
from .document import ModelDocument, element_path
from .expression import IDENTIFIER_RE, Number, symbols, walk

ERROR = "error"
WARNING = "warning"

SBO_RE = re.compile(r"SBO:\d{7}\Z")
QUALIFIER_RE = re.compile(r"(model:)?[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Finding:
    severity: str
    code: str
    path: str
    message: str

    def to_dict(self) -> dict[str, str]:
        return {
            "severity": self.severity,
            "code": self.code,
            "path": self.path,
            "message": self.message,
        }


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...] = field(default=())

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == ERROR]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == WARNING]

    @property
    def ok(self) -> bool:
        return not self.errors

    def to_dict(self) -> dict[str, Any]:
        return {
            "valid": self.ok,
            "errors": len(self.errors),
            "warnings": len(self.warnings),
            "findings": [f.to_dict() for f in self.findings],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def to_tsv(self) -> str:
        lines = ["# severity\tcode\tpath\tmessage"]
        lines.extend(f"{f.severity}\t{f.code}\t{f.path}\t{f.message}" for f in self.findings)
        return "\n".join(lines) + "\n"


class _Collector:
    def __init__(self) -> None:
        self.findings: list[Finding] = []

    def error(self, code: str, path: str, message: str) -> None:
        self.findings.append(Finding(ERROR, code, path, message))

    def warning(self, code: str, path: str, message: str) -> None:
        self.findings.append(Finding(WARNING, code, path, message))


def _check_sbo(found: _Collector, path: str, sbo: Any) -> None:
    if sbo is not None and not SBO_RE.match(sbo):
        found.error("invalid-sbo", path, f"malformed SBO term {sbo}")


def _check_qualifiers(found: _Collector, path: str, annotations: AnnotationSet) -> None:
    for qualifier in annotations.qualifiers():
        if not QUALIFIER_RE.match(qualifier):
            found.error("invalid-qualifier", path, f"invalid qualifier {qualifier!r}")


def validate_model(doc: ModelDocument) -> ValidationReport:
    """Check every document invariant; findings are returned, never raised."""
    found = _Collector()

    if doc.is_empty():
        found.warning("empty-model", f"model:{doc.id}", "empty model")

    seen: set[str] = set()
    for element in doc.elements():
        path = element_path(element)
        if not IDENTIFIER_RE.match(element.id):
            found.error("invalid-id", path, f"invalid identifier {element.id!r}")
        if element.id in seen:
            found.error("duplicate-id", path, f"duplicate id {element.id}")
        seen.add(element.id)
        _check_sbo(found, path, element.sbo)
        _check_qualifiers(found, path, element.annotations)

    compartment_ids = {c.id for c in doc.compartments}
    species_ids = {s.id for s in doc.species}
    global_symbols = compartment_ids | species_ids | {p.id for p in doc.parameters}

    for compartment in doc.compartments:
        path = element_path(compartment)
        if not math.isfinite(compartment.size) or compartment.size <= 0:
            found.error("invalid-size", path, f"compartment size {compartment.size} must be > 0")

    for species in doc.species:
        path = element_path(species)
        if species.compartment not in compartment_ids:
            found.error(
                "unknown-compartment", path, f"unknown compartment {species.compartment}"
            )
        if not math.isfinite(species.initial_amount) or species.initial_amount < 0:
            found.error(
                "invalid-amount", path, f"initial amount {species.initial_amount} must be >= 0"
            )

    for parameter in doc.parameters:
        if not math.isfinite(parameter.value):
            found.error(
                "non-finite-value", element_path(parameter), f"value {parameter.value} not finite"
            )

    for reaction in doc.reactions:
        path = element_path(reaction)
        for role, references in (("reactant", reaction.reactants), ("product", reaction.products)):
            role_seen: set[str] = set()
            for reference in references:
                if reference.species not in species_ids:
                    found.error(
                        "unknown-species", path, f"unknown {role} species {reference.species}"
                    )
                if reference.species in role_seen:
                    found.error(
                        "duplicate-participant", path, f"{role} {reference.species} listed twice"
                    )
                role_seen.add(reference.species)
                if not math.isfinite(reference.stoichiometry) or reference.stoichiometry <= 0:
                    found.error(
                        "invalid-stoichiometry",
                        path,
                        f"stoichiometry of {reference.species} must be > 0",
                    )
        modifier_seen: set[str] = set()
        for modifier in reaction.modifiers:
            if modifier not in species_ids:
                found.error("unknown-species", path, f"unknown modifier species {modifier}")
            if modifier in modifier_seen:
                found.error("duplicate-participant", path, f"modifier {modifier} listed twice")
            modifier_seen.add(modifier)

        local_seen: set[str] = set()
        for local in reaction.local_parameters:
            local_path = f"{path}/{local.id}"
            if not IDENTIFIER_RE.match(local.id):
                found.error("invalid-id", local_path, f"invalid identifier {local.id!r}")
            if local.id in local_seen:
                found.error("duplicate-id", local_path, f"duplicate local parameter {local.id}")
            local_seen.add(local.id)
            if not math.isfinite(local.value):
                found.error("non-finite-value", local_path, f"value {local.value} not finite")
            _check_sbo(found, local_path, local.sbo)
            _check_qualifiers(found, local_path, local.annotations)

        if reaction.kinetic_law is None:
            found.warning("no-kinetic-law", path, "no kinetic law")
            continue
        resolvable = global_symbols | local_seen
        for symbol in sorted(symbols(reaction.kinetic_law)):
            if symbol not in resolvable:
                found.error(
                    "unresolved-symbol", f"{path}/kineticLaw", f"unresolved symbol {symbol}"
                )
        for node in walk(reaction.kinetic_law):
            if isinstance(node, Number) and not math.isfinite(node.value):
                found.error(
                    "non-finite-value", f"{path}/kineticLaw", f"literal {node.value} not finite"
                )

    return ValidationReport(tuple(found.findings))


def require_valid(doc: ModelDocument) -> ModelDocument:
    """Return ``doc`` unchanged or raise InvalidModel."""
    report = validate_model(doc)
    if not report.ok:
        raise InvalidModel(report)
    return doc
