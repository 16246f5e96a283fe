"""
Model core: document types, expressions, annotations, validation and the
stoichiometric matrix.
"""

from .annotations import Annotation, AnnotationSet, Qualifier, normalize_uri
from .document import (
    ELEMENT_KINDS,
    Compartment,
    Element,
    ModelDocument,
    Parameter,
    Reaction,
    Species,
    SpeciesReference,
    element_path,
)
from .expression import (
    Add,
    Div,
    Expression,
    Mul,
    Neg,
    Number,
    Pow,
    Sub,
    Symbol,
    eval_expression,
    parse_infix,
    to_infix,
)
from .stoichiometry import StoichiometricMatrix, stoichiometric_matrix
from .validation import Finding, ValidationReport, require_valid, validate_model

__all__ = [
    "Add",
    "Annotation",
    "AnnotationSet",
    "Compartment",
    "Div",
    "ELEMENT_KINDS",
    "Element",
    "Expression",
    "Finding",
    "ModelDocument",
    "Mul",
    "Neg",
    "Number",
    "Parameter",
    "Pow",
    "Qualifier",
    "Reaction",
    "Species",
    "SpeciesReference",
    "StoichiometricMatrix",
    "Sub",
    "Symbol",
    "ValidationReport",
    "element_path",
    "eval_expression",
    "normalize_uri",
    "parse_infix",
    "require_valid",
    "stoichiometric_matrix",
    "to_infix",
    "validate_model",
]
