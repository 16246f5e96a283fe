"""
Model ranking and clustering by annotation similarity.

A model's fingerprint is the set of ``is``-qualified URIs over all of its
elements. Similarity is the Jaccard index of two fingerprints; clustering is
average-linkage agglomeration on ``1 - similarity`` cut where the best
average similarity drops below the threshold.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np
from scipy.cluster.hierarchy import fcluster, linkage
from scipy.spatial.distance import squareform

from .model.document import ModelDocument
from .model.validation import require_valid
from .semantics import EquivalenceOracle

logger = logging.getLogger(__name__)

DEFAULT_CLUSTER_THRESHOLD = 0.3
# fcluster keeps merges with cophenetic distance <= t
_CUT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class Fingerprint:
    label: str
    uris: frozenset[str]

    def __len__(self) -> int:
        return len(self.uris)

    def to_dict(self) -> dict[str, Any]:
        return {"label": self.label, "uris": sorted(self.uris)}


def _representative(uri: str, equiv: EquivalenceOracle) -> str:
    members = equiv.equivalence_set(uri)
    return min(members) if members else uri


def fingerprint(
    doc: ModelDocument, equiv: Optional[EquivalenceOracle] = None, label: Optional[str] = None
) -> Fingerprint:
    """Fingerprint of ``doc``, labelled ``label`` or the model id.

    With an equivalence oracle each URI is replaced by the smallest member of
    its equivalence class, so cross-linked identifiers count once.

    Raises:
        InvalidModel: ``doc`` has validation errors
    """
    require_valid(doc)
    uris: set[str] = set()
    for element in doc.elements():
        uris |= element.annotations.is_uris()
    if equiv is not None:
        uris = {_representative(uri, equiv) for uri in uris}
    return Fingerprint(label or doc.id, frozenset(uris))


def similarity(left: Fingerprint, right: Fingerprint) -> float:
    """Jaccard index of two fingerprints; 0 when both are empty."""
    union = left.uris | right.uris
    if not union:
        return 0.0
    return len(left.uris & right.uris) / len(union)


def rank_models(query: Fingerprint, corpus: Sequence[Fingerprint]) -> list[tuple[str, float]]:
    """Corpus labels by descending similarity to ``query``, ties by label."""
    scored = [(f.label, similarity(query, f)) for f in corpus]
    return sorted(scored, key=lambda item: (-item[1], item[0]))


def similarity_matrix(corpus: Sequence[Fingerprint]) -> np.ndarray:
    """Pairwise similarities; the diagonal is 1 for nonempty fingerprints."""
    vocabulary = sorted(set().union(*(f.uris for f in corpus))) if corpus else []
    column = {uri: i for i, uri in enumerate(vocabulary)}
    incidence = np.zeros((len(corpus), len(vocabulary)))
    for row, f in enumerate(corpus):
        incidence[row, [column[uri] for uri in f.uris]] = 1.0
    intersection = incidence @ incidence.T
    sizes = incidence.sum(axis=1)
    union = sizes[:, None] + sizes[None, :] - intersection
    with np.errstate(invalid="ignore", divide="ignore"):
        matrix = np.where(union > 0, intersection / np.where(union > 0, union, 1.0), 0.0)
    return matrix


@dataclass(frozen=True)
class SimilarityEdge:
    left: str
    right: str
    weight: float

    def to_dict(self) -> dict[str, Any]:
        return {"left": self.left, "right": self.right, "weight": self.weight}


@dataclass(frozen=True)
class SimilarityGraph:
    #: Model labels in corpus order
    nodes: tuple[str, ...] = ()
    #: Undirected edges, left before right in corpus order
    edges: tuple[SimilarityEdge, ...] = ()
    #: Cluster index per node, numbered from 1 in order of first appearance
    clusters: tuple[int, ...] = ()
    #: (label, score) of each node's most similar other node
    nearest: tuple[tuple[str, float], ...] = ()
    threshold: float = DEFAULT_CLUSTER_THRESHOLD

    def cluster_of(self, label: str) -> int:
        return self.clusters[self.nodes.index(label)]

    def partition(self) -> list[frozenset[str]]:
        """Clusters as label sets, in cluster-number order."""
        groups: dict[int, set[str]] = {}
        for label, cluster in zip(self.nodes, self.clusters):
            groups.setdefault(cluster, set()).add(label)
        return [frozenset(groups[c]) for c in sorted(groups)]

    def to_tsv(self) -> str:
        lines = ["# label\tcluster\tnearest\tscore"]
        for label, cluster, (near, score) in zip(self.nodes, self.clusters, self.nearest):
            lines.append(f"{label}\t{cluster}\t{near}\t{score:.4f}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "threshold": self.threshold,
            "nodes": [
                {"label": label, "cluster": cluster, "nearest": near, "score": score}
                for label, cluster, (near, score) in zip(self.nodes, self.clusters, self.nearest)
            ],
            "edges": [e.to_dict() for e in self.edges],
        }


def _flat_clusters(matrix: np.ndarray, threshold: float) -> list[int]:
    count = matrix.shape[0]
    if count < 2:
        return [1] * count
    distance = 1.0 - matrix
    np.fill_diagonal(distance, 0.0)
    tree = linkage(squareform(distance, checks=False), method="average")
    raw = fcluster(tree, t=1.0 - threshold + _CUT_TOLERANCE, criterion="distance")
    renumber: dict[int, int] = {}
    for value in raw:
        renumber.setdefault(int(value), len(renumber) + 1)
    return [renumber[int(value)] for value in raw]


def _nearest(labels: Sequence[str], matrix: np.ndarray, index: int) -> tuple[str, float]:
    candidates = [(labels[j], float(matrix[index, j])) for j in range(len(labels)) if j != index]
    if not candidates:
        return "", 0.0
    return min(candidates, key=lambda item: (-item[1], item[0]))


def cluster_models(
    corpus: Sequence[Fingerprint], threshold: float = DEFAULT_CLUSTER_THRESHOLD
) -> SimilarityGraph:
    """Cluster fingerprints and keep edges with similarity >= ``threshold``.

    Labels are expected to be unique within the corpus.
    """
    labels = tuple(f.label for f in corpus)
    matrix = similarity_matrix(corpus)
    edges = tuple(
        SimilarityEdge(labels[i], labels[j], float(matrix[i, j]))
        for i in range(len(labels))
        for j in range(i + 1, len(labels))
        if matrix[i, j] > 0 and matrix[i, j] >= threshold
    )
    clusters = tuple(_flat_clusters(matrix, threshold))
    logger.debug(
        f"Clustered {len(labels)} models at threshold {threshold}: "
        f"{len(set(clusters))} clusters, {len(edges)} edges"
    )
    return SimilarityGraph(
        nodes=labels,
        edges=edges,
        clusters=clusters,
        nearest=tuple(_nearest(labels, matrix, i) for i in range(len(labels))),
        threshold=threshold,
    )
