"""
Rate-law classification and SBO term assignment.
"""

from .assign import ASSIGNED, SKIPPED, Assignment, AssignmentLog, assign_sbo_terms
from .canonical import canonicalize
from .classify import ParameterRole, RateLawClass, RoleMap, classify_rate_law
from .rules import SboRuleTable, get_default_rule_table, load_rule_table, parse_rule_table

__all__ = [
    "ASSIGNED",
    "SKIPPED",
    "Assignment",
    "AssignmentLog",
    "ParameterRole",
    "RateLawClass",
    "RoleMap",
    "SboRuleTable",
    "assign_sbo_terms",
    "canonicalize",
    "classify_rate_law",
    "get_default_rule_table",
    "load_rule_table",
    "parse_rule_table",
]
