"""
Tests for DOT output.
"""

from semantic_sbml.cluster import Fingerprint, cluster_models
from semantic_sbml.formats import parse_shorthand
from semantic_sbml.viz import ModelDotOptions, dot_id, model_to_dot, quote, similarity_to_dot

from .test_balancing import ENZYME_MODEL


class TestModelDot:
    """Test reaction network graphs"""

    def test_reference_model(self, my_model):
        """Test species, reaction and edge lines"""
        assert model_to_dot(my_model).splitlines() == [
            "digraph model {",
            '  s_A [shape=ellipse, label="A"];',
            '  s_B [shape=ellipse, label="B"];',
            '  r_reaction1 [shape=box, label="reaction1"];',
            "  s_A -> r_reaction1;",
            "  r_reaction1 -> s_B;",
            "}",
        ]

    def test_compartment_clusters(self, left_model):
        """Test species grouped under their compartment"""
        lines = model_to_dot(left_model, ModelDotOptions(compartment_clusters=True)).splitlines()
        assert lines[1:6] == [
            "  subgraph cluster_cyt {",
            '    label="cytosol";',
            '    s_glc [shape=ellipse, label="glucose"];',
            '    s_atp [shape=ellipse, label="atp"];',
            "  }",
        ]

    def test_modifiers_and_stoichiometry(self):
        """Test dashed modifier edges and stoichiometry labels"""
        doc = parse_shorthand(ENZYME_MODEL.replace("S -> P : E", "2 S -> P : E"))
        lines = model_to_dot(doc).splitlines()
        assert '  s_S -> r_v1 [label="2"];' in lines
        assert "  s_E -> r_v1 [style=dashed];" in lines
        hidden = model_to_dot(doc, ModelDotOptions(show_modifiers=False))
        assert "dashed" not in hidden

    def test_deterministic(self, left_model):
        """Test repeated output is identical"""
        assert model_to_dot(left_model) == model_to_dot(left_model)


class TestSimilarityDot:
    """Test similarity graphs"""

    def test_graph(self):
        """Test cluster colours, quoted ids and edge weights"""
        graph = cluster_models(
            [
                Fingerprint("m-1", frozenset({"u1", "u2"})),
                Fingerprint("node", frozenset({"u1"})),
                Fingerprint("solo", frozenset({"u9"})),
            ],
            threshold=0.3,
        )
        assert similarity_to_dot(graph).splitlines() == [
            "graph similarity {",
            '  "m-1" [style=filled, fillcolor="#8dd3c7"];',
            '  "node" [style=filled, fillcolor="#8dd3c7"];',
            '  solo [style=filled, fillcolor="#ffffb3"];',
            '  "m-1" -- "node" [label="0.50"];',
            "}",
        ]

    def test_quoting(self):
        """Test DOT ids are quoted only when needed"""
        assert dot_id("m00") == "m00"
        assert dot_id("Graph") == '"Graph"'
        assert quote('say "hi"\n') == '"say \\"hi\\"\\n"'
