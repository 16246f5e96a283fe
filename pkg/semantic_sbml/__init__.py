"""
semantic-sbml: offline toolkit for semantic SBML processing.

Read and write SBML and shorthand models, match elements by annotation,
diff, merge and split models, balance kinetic parameters, assign SBO terms,
cluster models by annotation similarity and draw them as DOT graphs.
"""

from .__version__ import __version__
from .annodb import AnnotationStore, EntityRecord
from .balancing import (
    BalancingConfig,
    apply_balanced,
    balance,
    balance_report,
    build_problem,
    get_default_balancing_config,
)
from .cluster import (
    Fingerprint,
    SimilarityGraph,
    cluster_models,
    fingerprint,
    rank_models,
    similarity,
)
from .diffmerge import MergePolicy, diff_models, merge_models, split_model
from .errors import SemanticSbmlError
from .formats import load_model, parse_shorthand, print_shorthand, read_sbml, write_sbml
from .model import ModelDocument, validate_model
from .sbo import assign_sbo_terms, classify_rate_law
from .semantics import match_elements, remove_annotation, set_annotation
from .store import ModelStore
from .viz import model_to_dot, similarity_to_dot

__all__ = [
    "AnnotationStore",
    "BalancingConfig",
    "EntityRecord",
    "Fingerprint",
    "MergePolicy",
    "ModelDocument",
    "ModelStore",
    "SemanticSbmlError",
    "SimilarityGraph",
    "__version__",
    "apply_balanced",
    "assign_sbo_terms",
    "balance",
    "balance_report",
    "build_problem",
    "classify_rate_law",
    "cluster_models",
    "diff_models",
    "fingerprint",
    "get_default_balancing_config",
    "load_model",
    "match_elements",
    "merge_models",
    "model_to_dot",
    "parse_shorthand",
    "print_shorthand",
    "rank_models",
    "read_sbml",
    "remove_annotation",
    "set_annotation",
    "similarity",
    "similarity_to_dot",
    "split_model",
    "validate_model",
    "write_sbml",
]
