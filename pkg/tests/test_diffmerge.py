"""
Tests for diff, merge and split.
"""

from dataclasses import replace

import pytest

from semantic_sbml.diffmerge import (
    ADDED,
    CHANGED,
    LEFT,
    REMOVED,
    RIGHT,
    MergePolicy,
    diff_models,
    merge_models,
    split_model,
)
from semantic_sbml.diffmerge.merge import FAIL
from semantic_sbml.errors import (
    EmptyInput,
    InvalidModel,
    InvalidPolicy,
    MergeConflict,
    NoSuchElement,
)
from semantic_sbml.formats import parse_shorthand
from semantic_sbml.model import ModelDocument, Species

from .conftest import GLUCOSE

SHADOW_A = f"""\
@model:2.4.1=shadow
@compartments
  default=1
@species
  default:A=5 is={GLUCOSE}
"""


class TestDiff:
    """Test element-aligned diffs"""

    def test_identical(self, left_model):
        """Test a document has no difference with itself"""
        report = diff_models(left_model, left_model)
        assert not report
        assert report.summary == {"identical": True, "added": 0, "removed": 0, "changed": 0}

    def test_renamed_elements_align(self, left_model, right_model):
        """Test annotated renames are not reported as add/remove"""
        report = diff_models(left_model, right_model)
        assert report.summary == {"identical": False, "added": 0, "removed": 0, "changed": 1}
        (entry,) = report.entries
        assert (entry.path, entry.kind, entry.right_path) == ("species:atp", CHANGED, "species:atp")
        assert [(d.attribute, d.left, d.right) for d in entry.deltas] == [
            ("initial_amount", "2", "3")
        ]

    def test_tsv(self, left_model, right_model):
        """Test the TSV layout"""
        assert diff_models(left_model, right_model).to_tsv() == (
            "# path\tkind\tattribute\tleft\tright\nspecies:atp\tchanged\tinitial_amount\t2\t3\n"
        )

    def test_disjoint_models(self, my_model, left_model):
        """Test unrelated documents are all removals and additions"""
        report = diff_models(my_model, left_model)
        assert [e.path for e in report.by_kind(REMOVED)] == [
            "compartment:default",
            "species:A",
            "species:B",
            "parameter:kf",
            "parameter:kr",
            "reaction:reaction1",
        ]
        assert len(report.by_kind(ADDED)) == 5
        assert report.to_dict()["matching"] == []

    def test_reaction_needs_matching_sides(self, left_model, right_model):
        """Test reactions with different participants are never paired"""
        reaction = right_model.reactions[0]
        swapped = reaction.__class__(
            reaction.id,
            reactants=reaction.products,
            products=reaction.reactants,
            kinetic_law=reaction.kinetic_law,
            annotations=reaction.annotations,
        )
        report = diff_models(left_model, right_model.replace_element(swapped))
        assert [e.path for e in report.by_kind(REMOVED)] == ["reaction:hk"]
        assert [e.path for e in report.by_kind(ADDED)] == ["reaction:hexokinase"]

    def test_reaction_needs_matching_stoichiometry(self, left_model, right_model):
        """Test reactions over the same species with other coefficients are never paired"""
        reaction = right_model.reactions[0]
        doubled = replace(
            reaction,
            reactants=tuple(replace(r, stoichiometry=2.0) for r in reaction.reactants),
        )
        report = diff_models(left_model, right_model.replace_element(doubled))
        assert [e.path for e in report.by_kind(REMOVED)] == ["reaction:hk"]
        assert [e.path for e in report.by_kind(ADDED)] == ["reaction:hexokinase"]

    def test_invalid_input(self, left_model):
        """Test invalid documents are refused"""
        with pytest.raises(InvalidModel):
            diff_models(left_model, ModelDocument(species=(Species("A", "nowhere"),)))


class TestMergePolicy:
    """Test merge policy parsing"""

    def test_from_tsv(self):
        """Test default and override lines"""
        policy = MergePolicy.from_tsv(
            "# merge policy\ndefault\tright\nspecies:atp\tinitial_amount\tleft\n"
        )
        assert policy.default == RIGHT
        assert policy.choice("species:atp", "initial_amount") == LEFT
        assert policy.choice("species:glc", "name") == RIGHT
        assert policy.to_dict() == {
            "default": "right",
            "overrides": [{"path": "species:atp", "attribute": "initial_amount", "choice": "left"}],
        }

    @pytest.mark.parametrize(
        "text",
        [
            "default\tmaybe\n",
            "species:atp\tannotations\tleft\n",
            "species:atp\tinitial_amount\tfail\n",
            "a\tb\tc\td\n",
        ],
    )
    def test_invalid(self, text):
        """Test unknown choices, attributes and shapes"""
        with pytest.raises(InvalidPolicy):
            MergePolicy.from_tsv(text)


class TestMerge:
    """Test annotation-aware merging"""

    def test_empty_input(self):
        """Test merging nothing"""
        with pytest.raises(EmptyInput):
            merge_models([])

    def test_single_model(self, my_model):
        """Test a single model merges to itself"""
        result = merge_models([my_model])
        assert result.document == my_model
        assert len(result.renames) == 0

    def test_conflict_fails_by_default(self, left_model, right_model):
        """Test differing attributes raise with every conflict listed"""
        with pytest.raises(MergeConflict) as excinfo:
            merge_models([left_model, right_model])
        error = excinfo.value
        assert (error.status, error.exit_code) == (409, 3)
        assert error.detail == {
            "conflicts": [
                {"path": "species:atp", "attribute": "initial_amount", "left": "2", "right": "3"}
            ]
        }

    @pytest.mark.parametrize("default, expected", [(LEFT, 2.0), (RIGHT, 3.0)])
    def test_default_choice(self, left_model, right_model, default, expected):
        """Test the policy default settles conflicts and reports them"""
        result = merge_models([left_model, right_model], MergePolicy(default))
        assert result.document.element("atp").initial_amount == expected
        assert [c.path for c in result.conflicts] == ["species:atp"]
        assert [s.id for s in result.document.species] == ["glc", "atp"]
        assert [r.id for r in result.document.reactions] == ["hk"]

    def test_override(self, left_model, right_model):
        """Test an override settles one attribute without being reported"""
        policy = MergePolicy(FAIL, {("species:atp", "initial_amount"): RIGHT})
        result = merge_models([left_model, right_model], policy)
        assert result.document.element("atp").initial_amount == 3.0
        assert not result.conflicts

    def test_annotations_union(self, my_model):
        """Test matched elements collect annotations from both sides"""
        shadow = parse_shorthand(SHADOW_A.replace("A=5", "A=1"))
        result = merge_models([my_model, shadow])
        assert result.document.element("A").annotations.is_uris() == {GLUCOSE}
        assert len(result.document.species) == 2

    def test_collision_renamed(self, my_model):
        """Test an unmatched element with a taken id is renamed"""
        result = merge_models([my_model, parse_shorthand(SHADOW_A)], threshold=0.9)
        assert [s.id for s in result.document.species] == ["A", "B", "A__m2"]
        assert result.renames.to_dict() == {
            "renames": [{"source": 2, "kind": "species", "old_id": "A", "new_id": "A__m2"}]
        }
        assert result.renames.to_tsv().splitlines()[1] == "2\tspecies\tA\tA__m2"

    def test_three_way_fold(self, left_model, right_model):
        """Test merging folds from the left over every input"""
        result = merge_models([left_model, right_model, right_model], MergePolicy(RIGHT))
        assert result.document.element("atp").initial_amount == 3.0
        assert len(result.conflicts) == 1


class TestSplit:
    """Test dependency-closure submodels"""

    def test_reaction_pulls_dependencies(self, triangle):
        """Test a reaction pulls participants, law symbols and compartments"""
        sub = split_model(triangle, ["r1"])
        assert sorted(sub.all_ids()) == ["A", "B", "cell", "k1", "r1"]

    def test_species_seed(self, my_model):
        """Test a species alone pulls only its compartment"""
        sub = split_model(my_model, ["A"])
        assert sorted(sub.all_ids()) == ["A", "default"]

    def test_expand_reactions(self, my_model):
        """Test reaction expansion recovers the whole network"""
        assert split_model(my_model, ["A"], expand_reactions=True) == my_model

    def test_missing_seed(self, my_model):
        """Test unknown seeds are all reported"""
        with pytest.raises(NoSuchElement) as excinfo:
            split_model(my_model, ["Z", "A", "Y"])
        assert excinfo.value.detail == {"ids": ["Y", "Z"]}
