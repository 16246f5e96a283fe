"""
Shared error types for every semantic-sbml module.

Each error class carries the HTTP status, machine-readable code and CLI exit
code it maps to, so the CLI and the HTTP layer report failures the same way.
"""

import json
from typing import Any, Optional

# CLI exit codes
EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_CONFLICT = 3
EXIT_NUMERICAL = 4


class SemanticSbmlError(Exception):
    """Base class for all toolkit errors."""

    status = 400
    code = "bad_request"
    exit_code = EXIT_INVALID

    def __init__(self, message: str, detail: Optional[dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.detail = detail or {}


# --- parsing -------------------------------------------------------------


class ParseFailure(SemanticSbmlError):
    """Input could not be parsed as SBML or shorthand."""

    code = "parse_failure"


class XmlSyntax(ParseFailure):
    code = "xml_syntax"


class UnsupportedSbmlLevel(ParseFailure):
    code = "unsupported_sbml_level"


class BrokenReference(ParseFailure):
    code = "broken_reference"


class ShorthandSyntaxError(ParseFailure):
    """Shorthand source does not match the grammar."""

    code = "shorthand_syntax"

    def __init__(self, line: int, col: int, expected: str) -> None:
        super().__init__(
            f"line {line}, column {col}: expected {expected}",
            {"line": line, "col": col, "expected": expected},
        )
        self.line = line
        self.col = col
        self.expected = expected


class DuplicateId(ParseFailure):
    code = "duplicate_id"


class UnknownSection(ParseFailure):
    code = "unknown_section"


class DanglingReactionBlock(ParseFailure):
    code = "dangling_reaction_block"


# --- model ---------------------------------------------------------------


class InvalidModel(SemanticSbmlError):
    """Document violates structural invariants."""

    status = 422
    code = "invalid_model"

    def __init__(self, report: Any) -> None:
        errors = list(report.errors)
        first = errors[0].message if errors else "invalid model"
        super().__init__(f"{len(errors)} validation error(s): {first}", report.to_dict())
        self.report = report


class UnboundSymbol(SemanticSbmlError):
    code = "unbound_symbol"


class NonFiniteResult(SemanticSbmlError):
    status = 500
    code = "non_finite_result"
    exit_code = EXIT_NUMERICAL


class NoSuchElement(SemanticSbmlError):
    code = "no_such_element"


class UnrecognizedUriScheme(SemanticSbmlError):
    code = "unrecognized_uri_scheme"


class InvalidQualifier(SemanticSbmlError):
    code = "invalid_qualifier"


# --- annodb --------------------------------------------------------------


class MalformedRecord(SemanticSbmlError):
    code = "malformed_record"

    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}", {"line": line})
        self.line = line


# --- diffmerge -----------------------------------------------------------


class InvalidPolicy(SemanticSbmlError):
    code = "invalid_policy"


class EmptyInput(SemanticSbmlError):
    code = "empty_input"


class MergeConflict(SemanticSbmlError):
    """Raised when a merge with policy ``fail`` meets differing attributes."""

    status = 409
    code = "merge_conflict"
    exit_code = EXIT_CONFLICT

    def __init__(self, conflicts: Any) -> None:
        super().__init__(f"{len(conflicts)} merge conflict(s)", conflicts.to_dict())
        self.conflicts = conflicts


# --- balancing -----------------------------------------------------------


class UnknownQuantityType(SemanticSbmlError):
    code = "unknown_quantity_type"


class UnknownElementId(SemanticSbmlError):
    code = "unknown_element_id"


class UnitMismatch(SemanticSbmlError):
    code = "unit_mismatch"


class NonPositiveValueForLogScale(SemanticSbmlError):
    code = "non_positive_value"


class DataFormatError(SemanticSbmlError):
    code = "data_format"


class IncompleteBalance(SemanticSbmlError):
    code = "incomplete_balance"


class NumericalFailure(SemanticSbmlError):
    status = 500
    code = "numerical_failure"
    exit_code = EXIT_NUMERICAL


class SingularSystem(NumericalFailure):
    code = "singular_system"


# --- sbo -----------------------------------------------------------------


class NoKineticLaw(SemanticSbmlError):
    code = "no_kinetic_law"


class MalformedRuleTable(SemanticSbmlError):
    code = "malformed_rule_table"


# --- service -------------------------------------------------------------


class UnknownHandle(SemanticSbmlError):
    status = 404
    code = "unknown_handle"


def error_payload(error: SemanticSbmlError) -> dict[str, Any]:
    """Uniform error body shared by HTTP responses and ``--json`` CLI output."""
    payload: dict[str, Any] = {
        "status": error.status,
        "code": error.code,
        "message": error.message,
    }
    if error.detail:
        payload["detail"] = error.detail
    return payload


def error_json(error: SemanticSbmlError) -> str:
    return json.dumps(error_payload(error), indent=2, ensure_ascii=False) + "\n"
