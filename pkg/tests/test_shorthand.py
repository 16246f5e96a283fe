"""
Tests for the shorthand notation compiler and printer.
"""

import pytest

from semantic_sbml.errors import (
    DanglingReactionBlock,
    DuplicateId,
    ShorthandSyntaxError,
    UnknownSection,
    UnsupportedSbmlLevel,
)
from semantic_sbml.formats import detect_format, load_model, parse_shorthand, print_shorthand
from semantic_sbml.model import to_infix


class TestShorthandCompile:
    """Test compiling shorthand text"""

    def test_reference_model(self, my_model):
        """Test the reference model compiles to the expected document"""
        assert my_model.id == "MyModel"
        assert (my_model.level, my_model.version) == (2, 4)
        assert [c.id for c in my_model.compartments] == ["default"]
        assert [(s.id, s.compartment, s.initial_amount) for s in my_model.species] == [
            ("A", "default", 1.0),
            ("B", "default", 1.0),
        ]
        assert [(p.id, p.value) for p in my_model.parameters] == [("kf", 1.0), ("kr", 1.0)]
        reaction = my_model.reactions[0]
        assert reaction.id == "reaction1"
        assert reaction.reversible is False
        assert [r.species for r in reaction.reactants] == ["A"]
        assert [r.species for r in reaction.products] == ["B"]
        assert to_infix(reaction.kinetic_law) == "kf*A - kr*B"

    def test_attributes_flags_and_locals(self):
        """Test names, flags, SBO ids, annotations, modifiers and locals"""
        doc = parse_shorthand(
            "@model:3.1.1=m \"My model\"\n"
            "@compartments\n"
            "  c=2.5 \"cell\" sbo=SBO:0000290\n"
            "@species\n"
            "  c:S=10 \"substrate\" b c is=urn:miriam:chebi:CHEBI%3A17234\n"
            "  c:P=0\n"
            "  c:E=1\n"
            "@reactions\n"
            "@rxn=v1 \"uptake\"\n"
            "  2 S <-> P : E\n"
            "  Vmax*S/(Km + S)\n"
            "  @local Vmax=3 sbo=SBO:0000186\n"
            "  @local Km=0.1\n"
        )
        assert doc.name == "My model"
        assert (doc.level, doc.version) == (3, 1)
        compartment = doc.compartments[0]
        assert (compartment.name, compartment.size, compartment.sbo) == ("cell", 2.5, "SBO:0000290")
        substrate = doc.species[0]
        assert substrate.boundary and substrate.constant
        assert substrate.annotations.is_uris() == {"identifiers.org/chebi/CHEBI:17234"}
        reaction = doc.reactions[0]
        assert reaction.name == "uptake"
        assert reaction.reversible is True
        assert reaction.reactants[0].stoichiometry == 2.0
        assert reaction.modifiers == ("E",)
        assert [(p.id, p.value, p.sbo) for p in reaction.local_parameters] == [
            ("Vmax", 3.0, "SBO:0000186"),
            ("Km", 0.1, None),
        ]

    def test_comments_and_crlf(self, my_model_text, my_model):
        """Test comments and CRLF line endings are accepted"""
        text = "# leading comment\r\n" + my_model_text.replace("\n", "  # note\r\n")
        assert parse_shorthand(text) == my_model

    def test_uri_fragment_is_not_a_comment(self):
        """Test a # inside an annotation URI survives parsing and printing"""
        text = (
            "@model:2.4.1=m\n@compartments\n  c=1\n@species\n"
            "  c:A=1 is=http://identifiers.org/go/GO:0005737#part  # trailing note\n"
        )
        doc = parse_shorthand(text)
        assert doc.species[0].annotations.is_uris() == {"identifiers.org/go/GO:0005737#part"}
        assert parse_shorthand(print_shorthand(doc)) == doc

    def test_reaction_without_law(self):
        """Test a block may end right after its equation"""
        doc = parse_shorthand(
            "@model:2.4.1=m\n@compartments\n  c=1\n@species\n  c:A=1\n"
            "@reactions\n@rxn=sink\n  A ->\n"
        )
        assert doc.reactions[0].products == ()
        assert doc.reactions[0].kinetic_law is None


class TestShorthandErrors:
    """Test shorthand error reporting"""

    def test_missing_header(self):
        """Test a document must start with @model"""
        with pytest.raises(ShorthandSyntaxError) as excinfo:
            parse_shorthand("@compartments\n  c=1\n")
        assert (excinfo.value.line, excinfo.value.col) == (1, 1)

    def test_unsupported_level(self):
        """Test the header level/version must be supported"""
        with pytest.raises(UnsupportedSbmlLevel):
            parse_shorthand("@model:1.2.1=m\n")

    def test_duplicate_id(self):
        """Test ids are unique across sections"""
        with pytest.raises(DuplicateId) as excinfo:
            parse_shorthand("@model:2.4.1=m\n@compartments\n  A=1\n@species\n  A:A=1\n")
        assert excinfo.value.detail == {"id": "A", "line": 5}

    def test_unknown_section(self):
        """Test unknown @ directives"""
        with pytest.raises(UnknownSection):
            parse_shorthand("@model:2.4.1=m\n@events\n")

    def test_block_without_equation(self):
        """Test a reaction block needs an equation line"""
        with pytest.raises(DanglingReactionBlock):
            parse_shorthand("@model:2.4.1=m\n@reactions\n@rxn=r1\n@rxn=r2\n  ->\n")

    def test_equation_needs_one_arrow(self):
        """Test equations with two arrows are rejected with a column"""
        with pytest.raises(ShorthandSyntaxError) as excinfo:
            parse_shorthand(
                "@model:2.4.1=m\n@compartments\n  c=1\n@species\n  c:A=1\n  c:B=1\n"
                "@reactions\n@rxn=r\n  A -> B -> A\n"
            )
        assert excinfo.value.line == 9
        assert excinfo.value.col == 10
        assert "'->'" in excinfo.value.expected

    def test_bad_law_position(self):
        """Test kinetic-law errors point into the source line"""
        with pytest.raises(ShorthandSyntaxError) as excinfo:
            parse_shorthand(
                "@model:2.4.1=m\n@compartments\n  c=1\n@species\n  c:A=1\n"
                "@reactions\n@rxn=r\n  A ->\n  k*)\n"
            )
        assert (excinfo.value.line, excinfo.value.col) == (9, 5)


class TestShorthandPrint:
    """Test the canonical shorthand printer"""

    def test_reference_model_prints_verbatim(self, my_model_text, my_model):
        """Test the reference text is already canonical"""
        assert print_shorthand(my_model) == my_model_text

    def test_print_then_compile(self, left_model):
        """Test printed shorthand compiles back to the same document"""
        assert parse_shorthand(print_shorthand(left_model)) == left_model


class TestFormatDetection:
    """Test input format auto-detection"""

    def test_detect(self, my_model_text):
        """Test shorthand and SBML are told apart"""
        assert detect_format(my_model_text).name == "shorthand"
        assert detect_format("<?xml version='1.0'?><sbml/>").name == "sbml"
        assert detect_format("hello") is None

    def test_load_model_rejects_unknown_input(self):
        """Test undetectable input raises a parse failure"""
        from semantic_sbml.errors import ParseFailure

        with pytest.raises(ParseFailure):
            load_model(b"plain text")
