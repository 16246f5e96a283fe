"""
Tests for model fingerprints, ranking and clustering.
"""

import itertools

import pytest

from semantic_sbml.annodb import AnnotationStore
from semantic_sbml.cluster import (
    Fingerprint,
    cluster_models,
    fingerprint,
    rank_models,
    similarity,
)

from .conftest import GLUCOSE, annotated_model

KEGG_GLUCOSE = "identifiers.org/kegg.compound/C00031"

UNEVEN = [
    Fingerprint("a", frozenset({"u1", "u2", "u3"})),
    Fingerprint("b", frozenset({"u1", "u2", "u3", "u4"})),
    Fingerprint("c", frozenset({"u4", "u5"})),
    Fingerprint("d", frozenset({"u5", "u6"})),
    Fingerprint("e", frozenset({"u7"})),
    Fingerprint("f", frozenset({"u1", "u6", "u7"})),
]


def upgma_partition(corpus, threshold):
    """Merge the best average-similarity pair while it reaches the threshold."""
    clusters = [[f] for f in corpus]

    def average(left, right):
        pairs = [similarity(x, y) for x in left for y in right]
        return sum(pairs) / len(pairs)

    while len(clusters) > 1:
        best, i, j = max(
            (average(clusters[i], clusters[j]), i, j)
            for i, j in itertools.combinations(range(len(clusters)), 2)
        )
        if best < threshold:
            break
        clusters[i] = clusters[i] + clusters[j]
        del clusters[j]
    return {frozenset(f.label for f in c) for c in clusters}


@pytest.fixture
def fingerprints(corpus):
    """Fingerprints of the family corpus"""
    return [fingerprint(doc, label=label) for label, doc in corpus]


class TestFingerprint:
    """Test fingerprints and pairwise similarity"""

    def test_fingerprint(self, left_model):
        """Test is-URIs of every element are collected"""
        prints = fingerprint(left_model)
        assert prints.label == "left"
        assert len(prints) == 3

    def test_similarity(self, fingerprints):
        """Test family members overlap by half and families are disjoint"""
        assert similarity(fingerprints[0], fingerprints[4]) == 0.5
        assert similarity(fingerprints[0], fingerprints[1]) == 0.0
        assert similarity(Fingerprint("x", frozenset()), Fingerprint("y", frozenset())) == 0.0

    def test_equivalence_collapse(self, records_text):
        """Test cross-linked identifiers count as one"""
        store = AnnotationStore()
        store.ingest_records(records_text)
        chebi = annotated_model("chebi", [GLUCOSE])
        kegg = annotated_model("kegg", [KEGG_GLUCOSE])
        assert similarity(fingerprint(chebi), fingerprint(kegg)) == 0.0
        assert similarity(fingerprint(chebi, store), fingerprint(kegg, store)) == 1.0
        assert fingerprint(kegg, store).uris == {GLUCOSE}


class TestRanking:
    """Test similarity ranking"""

    def test_rank(self, fingerprints):
        """Test descending similarity with ties broken by label"""
        ranked = rank_models(fingerprints[0], fingerprints)
        assert ranked[:5] == [
            ("m00", 1.0),
            ("m04", 0.5),
            ("m08", 0.5),
            ("m12", 0.5),
            ("m16", 0.5),
        ]
        assert ranked[5] == ("m01", 0.0)
        assert len(ranked) == 20


class TestClustering:
    """Test average-linkage clustering"""

    def test_families(self, fingerprints):
        """Test the interleaved corpus splits into its four families"""
        graph = cluster_models(fingerprints, threshold=0.3)
        assert graph.clusters[:8] == (1, 2, 3, 4, 1, 2, 3, 4)
        assert graph.cluster_of("m17") == 2
        assert len(graph.edges) == 40
        assert {e.weight for e in graph.edges} == {0.5}
        assert graph.nearest[0] == ("m04", 0.5)
        assert set(graph.partition()) == upgma_partition(fingerprints, 0.3)

    def test_cut_is_inclusive(self, fingerprints):
        """Test merges exactly at the threshold are kept"""
        assert len(cluster_models(fingerprints, threshold=0.5).partition()) == 4
        above = cluster_models(fingerprints, threshold=0.6)
        assert len(above.partition()) == 20
        assert above.edges == ()

    @pytest.mark.parametrize("threshold", [0.15, 0.25, 0.3, 0.45, 0.6, 0.8])
    def test_separated_clusters(self, threshold):
        """Test no two final clusters reach the threshold on average"""
        graph = cluster_models(UNEVEN, threshold=threshold)
        by_label = {f.label: f for f in UNEVEN}
        groups = [[by_label[label] for label in sorted(g)] for g in graph.partition()]
        for left, right in itertools.combinations(groups, 2):
            pairs = [similarity(x, y) for x in left for y in right]
            assert sum(pairs) / len(pairs) < threshold

    def test_threshold_extremes(self, fingerprints):
        """Test threshold 0 joins everything and 1 joins only identical prints"""
        assert set(cluster_models(fingerprints, threshold=0.0).clusters) == {1}
        twins = [Fingerprint("p", frozenset({"u1"})), Fingerprint("q", frozenset({"u1"}))]
        graph = cluster_models(twins + UNEVEN[:2], threshold=1.0)
        assert graph.clusters == (1, 1, 2, 3)

    def test_small_corpora(self):
        """Test empty and single-model corpora"""
        assert cluster_models([]).nodes == ()
        single = cluster_models([UNEVEN[0]])
        assert single.clusters == (1,)
        assert single.nearest == (("", 0.0),)

    def test_reports(self, fingerprints):
        """Test the TSV and JSON layouts"""
        graph = cluster_models(fingerprints, threshold=0.3)
        lines = graph.to_tsv().splitlines()
        assert lines[0] == "# label\tcluster\tnearest\tscore"
        assert lines[1] == "m00\t1\tm04\t0.5000"
        payload = graph.to_dict()
        assert payload["threshold"] == 0.3
        assert payload["nodes"][1] == {"label": "m01", "cluster": 2, "nearest": "m05", "score": 0.5}
        assert payload["edges"][0] == {"left": "m00", "right": "m04", "weight": 0.5}
