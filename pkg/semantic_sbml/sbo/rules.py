"""
SBO rule table: which SBO id each rate-law family and parameter role gets.

Tab-separated lines ``Target  Pattern/Role  SBOId`` where Target is
``ratelaw`` (Pattern is a rate-law class) or ``parameter`` (Role is a
parameter role). ``#`` starts a comment line.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from ..errors import MalformedRuleTable
from ..model.validation import SBO_RE
from ..resources import get_data_file
from .classify import ParameterRole, RateLawClass

logger = logging.getLogger(__name__)

DEFAULT_RULES_FILE = "sbo_rules.tsv"
RATELAW_TARGET = "ratelaw"
PARAMETER_TARGET = "parameter"


@dataclass(frozen=True)
class SboRuleTable:
    rate_laws: dict[RateLawClass, str] = field(default_factory=dict)
    roles: dict[ParameterRole, str] = field(default_factory=dict)

    def for_class(self, rate_law_class: RateLawClass) -> Optional[str]:
        return self.rate_laws.get(rate_law_class)

    def for_role(self, role: ParameterRole) -> Optional[str]:
        return self.roles.get(role)

    def ids(self) -> set[str]:
        return set(self.rate_laws.values()) | set(self.roles.values())


def _enum_value(enum: type, text: str, line: int) -> object:
    try:
        return enum(text)
    except ValueError:
        message = f"line {line}: unknown pattern or role {text!r}"
        raise MalformedRuleTable(message, {"line": line}) from None


def parse_rule_table(text: Union[str, bytes]) -> SboRuleTable:
    """Parse a rule table.

    Raises:
        MalformedRuleTable: bad column count, unknown target/pattern/role,
            malformed SBO id or duplicate entry
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rate_laws: dict[RateLawClass, str] = {}
    roles: dict[ParameterRole, str] = {}
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        columns = [c.strip() for c in line.split("\t")]
        if len(columns) != 3:
            raise MalformedRuleTable(
                f"line {number}: expected 3 tab-separated columns, found {len(columns)}",
                {"line": number},
            )
        target, key, sbo = columns
        if not SBO_RE.match(sbo):
            raise MalformedRuleTable(f"line {number}: malformed SBO id {sbo!r}", {"line": number})
        if target == RATELAW_TARGET:
            table: dict = rate_laws
            entry = _enum_value(RateLawClass, key, number)
            if entry == RateLawClass.UNKNOWN:
                raise MalformedRuleTable(
                    f"line {number}: Unknown laws take no SBO id", {"line": number}
                )
        elif target == PARAMETER_TARGET:
            table = roles
            entry = _enum_value(ParameterRole, key, number)
        else:
            raise MalformedRuleTable(f"line {number}: unknown target {target!r}", {"line": number})
        if entry in table:
            raise MalformedRuleTable(f"line {number}: duplicate entry for {key}", {"line": number})
        table[entry] = sbo
    return SboRuleTable(rate_laws, roles)


def load_rule_table(path: Union[str, Path, None] = None) -> SboRuleTable:
    """Rule table from ``path``, or the packaged default table."""
    if path is None:
        text = get_data_file(DEFAULT_RULES_FILE)
        if text is None:
            raise MalformedRuleTable(f"packaged rule table {DEFAULT_RULES_FILE} is missing")
        logger.debug("Using the packaged SBO rule table")
        return parse_rule_table(text)
    try:
        return parse_rule_table(Path(path).read_text(encoding="utf-8"))
    except OSError as e:
        raise MalformedRuleTable(f"cannot read rule table {path}: {e}") from None


def get_default_rule_table() -> SboRuleTable:
    return load_rule_table()
