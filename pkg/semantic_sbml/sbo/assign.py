"""
SBO term assignment for classified kinetic laws and their parameters.
"""

import logging
from dataclasses import dataclass, replace
from typing import Any, Optional

from ..model.document import ModelDocument, Parameter, Reaction
from ..model.validation import require_valid
from .classify import RateLawClass, classify_rate_law
from .rules import SboRuleTable, get_default_rule_table

logger = logging.getLogger(__name__)

ASSIGNED = "assigned"
SKIPPED = "skipped"


@dataclass(frozen=True)
class Assignment:
    #: ``reaction:<id>``, ``reaction:<id>/local:<id>`` or ``parameter:<id>``
    target: str
    #: Rate-law class or parameter role that selected the id
    rule: str
    sbo: str
    status: str
    #: SBO id already present when skipped
    existing: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "target": self.target,
            "rule": self.rule,
            "sbo": self.sbo,
            "status": self.status,
            "existing": self.existing,
        }


@dataclass(frozen=True)
class AssignmentLog:
    entries: tuple[Assignment, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def assigned(self) -> list[Assignment]:
        return [e for e in self.entries if e.status == ASSIGNED]

    @property
    def skipped(self) -> list[Assignment]:
        return [e for e in self.entries if e.status == SKIPPED]

    def to_dict(self) -> dict[str, Any]:
        return {"assignments": [e.to_dict() for e in self.entries]}

    def to_tsv(self) -> str:
        lines = ["# target\trule\tsbo\tstatus\texisting"]
        lines.extend(
            "\t".join([e.target, e.rule, e.sbo, e.status, e.existing or ""]) for e in self.entries
        )
        return "\n".join(lines) + "\n"


class _Assigner:
    def __init__(self, doc: ModelDocument, rules: SboRuleTable) -> None:
        self.rules = rules
        self.globals = {p.id: p for p in doc.parameters}
        self.log: list[Assignment] = []

    def decide(self, target: str, rule: str, sbo: str, current: Optional[str]) -> bool:
        if current is not None:
            logger.warning(f"Skipped {sbo} for {target}: already {current}")
            self.log.append(Assignment(target, rule, sbo, SKIPPED, current))
            return False
        self.log.append(Assignment(target, rule, sbo, ASSIGNED))
        return True

    def reaction(self, reaction: Reaction, doc: ModelDocument) -> Reaction:
        rate_law_class, roles = classify_rate_law(reaction, doc)
        if rate_law_class == RateLawClass.UNKNOWN:
            return reaction

        target = f"reaction:{reaction.id}"
        sbo = self.rules.for_class(rate_law_class)
        if sbo is not None and self.decide(target, rate_law_class.value, sbo, reaction.sbo):
            reaction = replace(reaction, sbo=sbo)

        local_parameters = list(reaction.local_parameters)
        for parameter_id, role in roles.items():
            sbo = self.rules.for_role(role)
            if sbo is None:
                continue
            local = reaction.local_parameter(parameter_id)
            if local is not None:
                path = f"{target}/local:{parameter_id}"
                if self.decide(path, role.value, sbo, local.sbo):
                    index = local_parameters.index(local)
                    local_parameters[index] = replace(local, sbo=sbo)
            else:
                parameter: Parameter = self.globals[parameter_id]
                path = f"parameter:{parameter_id}"
                if self.decide(path, role.value, sbo, parameter.sbo):
                    self.globals[parameter_id] = replace(parameter, sbo=sbo)
        return replace(reaction, local_parameters=tuple(local_parameters))


def assign_sbo_terms(
    doc: ModelDocument, rules: Optional[SboRuleTable] = None
) -> tuple[ModelDocument, AssignmentLog]:
    """Set SBO ids on classified reactions and their role-mapped parameters.

    Existing ids are never overwritten; such targets are logged as skipped.
    Reactions without a kinetic law or with an unrecognized law are left
    untouched.

    Raises:
        InvalidModel: ``doc`` has validation errors
    """
    require_valid(doc)
    rules = rules or get_default_rule_table()
    assigner = _Assigner(doc, rules)
    reactions = tuple(
        reaction if reaction.kinetic_law is None else assigner.reaction(reaction, doc)
        for reaction in doc.reactions
    )
    updated = replace(
        doc,
        reactions=reactions,
        parameters=tuple(assigner.globals[p.id] for p in doc.parameters),
    )
    log = AssignmentLog(tuple(assigner.log))
    logger.info(
        f"SBO assignment on {doc.id}: {len(log.assigned)} assigned, {len(log.skipped)} skipped"
    )
    return updated, log
