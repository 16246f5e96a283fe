"""
Tests for SBML reading and writing.
"""

import pytest
from lxml import etree

from semantic_sbml.errors import BrokenReference, InvalidModel, UnsupportedSbmlLevel, XmlSyntax
from semantic_sbml.formats import (
    SbmlReader,
    SbmlSerializationOptions,
    parse_shorthand,
    read_sbml,
    write_sbml,
)
from semantic_sbml.model import ModelDocument, Species, to_infix

L2V4 = "http://www.sbml.org/sbml/level2/version4"

FOREIGN_SBML = """<?xml version="1.0" encoding="UTF-8"?>
<sbml xmlns="http://www.sbml.org/sbml/level2/version4" level="2" version="4">
  <model id="foreign">
    <listOfUnitDefinitions>
      <unitDefinition id="mM"/>
    </listOfUnitDefinitions>
    <listOfCompartments>
      <compartment id="cell" size="1"/>
    </listOfCompartments>
    <listOfSpecies>
      <species id="S" compartment="cell" initialConcentration="2.5" metaid="m_S">
        <annotation>
          <rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
                   xmlns:bqbiol="http://biomodels.net/biology-qualifiers/">
            <rdf:Description rdf:about="#m_S">
              <bqbiol:is>
                <rdf:Bag>
                  <rdf:li rdf:resource="urn:miriam:chebi:CHEBI%3A17234"/>
                  <rdf:li rdf:resource="http://example.org/unknown"/>
                </rdf:Bag>
              </bqbiol:is>
            </rdf:Description>
          </rdf:RDF>
        </annotation>
      </species>
      <species id="P" compartment="cell" initialAmount="0"/>
    </listOfSpecies>
    <listOfReactions>
      <reaction id="v">
        <listOfReactants>
          <speciesReference species="S"/>
        </listOfReactants>
        <listOfProducts>
          <speciesReference species="P" stoichiometry="2"/>
        </listOfProducts>
        <kineticLaw>
          <math xmlns="http://www.w3.org/1998/Math/MathML">
            <apply>
              <divide/>
              <apply><times/><ci>Vmax</ci><ci>S</ci></apply>
              <apply><plus/><ci>Km</ci><ci>S</ci></apply>
            </apply>
          </math>
          <listOfParameters>
            <parameter id="Vmax" value="2"/>
            <parameter id="Km" value="0.5"/>
          </listOfParameters>
        </kineticLaw>
      </reaction>
    </listOfReactions>
  </model>
</sbml>
"""


class TestSbmlReader:
    """Test reading SBML documents"""

    def test_reads_supported_subset(self):
        """Test elements, annotations and kinetic laws are read"""
        doc = read_sbml(FOREIGN_SBML)
        assert doc.id == "foreign"
        assert [s.id for s in doc.species] == ["S", "P"]
        assert doc.species[0].initial_amount == 2.5
        assert doc.species[0].annotations.is_uris() == {"identifiers.org/chebi/CHEBI:17234"}
        reaction = doc.reactions[0]
        assert reaction.reversible is True
        assert reaction.products[0].stoichiometry == 2.0
        assert to_infix(reaction.kinetic_law) == "Vmax*S/(Km + S)"
        assert [p.id for p in reaction.local_parameters] == ["Vmax", "Km"]

    def test_collects_warnings(self):
        """Test dropped content is reported as warnings"""
        reader = SbmlReader()
        reader.read(FOREIGN_SBML)
        joined = "\n".join(reader.warnings)
        assert "listOfUnitDefinitions" in joined
        assert "initialConcentration" in joined
        assert "http://example.org/unknown" in joined

    def test_malformed_xml(self):
        """Test XML syntax errors"""
        with pytest.raises(XmlSyntax):
            read_sbml(b"<sbml level='2' version='4'><model>")

    def test_unsupported_level(self):
        """Test Level 1 documents are refused"""
        with pytest.raises(UnsupportedSbmlLevel):
            read_sbml(b'<sbml xmlns="http://www.sbml.org/sbml/level1" level="1" version="2"/>')

    def test_broken_reference(self):
        """Test references to missing species"""
        text = FOREIGN_SBML.replace('species="P" stoichiometry', 'species="Q" stoichiometry')
        with pytest.raises(BrokenReference) as excinfo:
            read_sbml(text)
        assert excinfo.value.detail == {"element": "reaction:v", "reference": "Q"}


class TestSbmlWriter:
    """Test deterministic SBML output"""

    def test_round_trip(self, my_model, left_model):
        """Test written documents read back unchanged"""
        for doc in (my_model, left_model):
            assert read_sbml(write_sbml(doc)) == doc

    def test_deterministic(self, left_model):
        """Test the same document always serializes to the same bytes"""
        assert write_sbml(left_model) == write_sbml(left_model)

    def test_document_shape(self, left_model):
        """Test namespace, level and annotation layout"""
        root = etree.fromstring(write_sbml(left_model))
        assert etree.QName(root).namespace == L2V4
        assert (root.get("level"), root.get("version")) == ("2", "4")
        resources = root.xpath(
            "//rdf:li/@rdf:resource",
            namespaces={"rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
        )
        assert "https://identifiers.org/chebi/CHEBI:17234" in resources

    def test_level3_target(self, my_model):
        """Test writing to Level 3 adds the required constant flags"""
        data = write_sbml(my_model, SbmlSerializationOptions(level=3, version=1))
        root = etree.fromstring(data)
        assert root.get("level") == "3"
        species = root.find(".//{*}species")
        assert species.get("hasOnlySubstanceUnits") == "false"
        assert read_sbml(data).species == my_model.species

    def test_local_metaids_unique(self):
        """Test an annotated local never reuses the metaid of a global element"""
        doc = parse_shorthand(
            "@model:2.4.1=m\n@compartments\n  c=1\n@species\n  c:A=1\n"
            "@parameters\n  r_x=1 is=identifiers.org/chebi/CHEBI:15377\n"
            "@reactions\n@rxn=r\n  A ->\n  x*A\n"
            "  @local x=2 is=identifiers.org/chebi/CHEBI:17234\n"
        )
        data = write_sbml(doc)
        metaids = etree.fromstring(data).xpath("//@metaid")
        assert sorted(metaids) == ["meta_r.x", "meta_r_x"]
        assert read_sbml(data) == doc

    def test_invalid_target(self):
        """Test unsupported targets are rejected"""
        with pytest.raises(ValueError):
            SbmlSerializationOptions(level=2, version=9)

    def test_refuses_invalid_document(self):
        """Test invalid documents are never written"""
        with pytest.raises(InvalidModel):
            write_sbml(ModelDocument(species=(Species("A", "missing"),)))
