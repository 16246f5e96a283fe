"""
Pytest configuration and fixtures for semantic-sbml tests
"""

import sys
from pathlib import Path

import pytest

# Add the project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from semantic_sbml.formats import parse_shorthand
from semantic_sbml.model import Compartment, ModelDocument, Species
from semantic_sbml.model.annotations import AnnotationSet

MY_MODEL = """\
@model:2.4.1=MyModel
@compartments
  default=1
@species
  default:A=1
  default:B=1
@parameters
  kf=1
  kr=1
@reactions
@rxn=reaction1
  A -> B
  kf*A - kr*B
"""

TRIANGLE = """\
@model:2.4.1=Triangle
@compartments
  cell=1
@species
  cell:A=1
  cell:B=1
  cell:C=1
@parameters
  k1=1
  k2=1
  k3=1
@reactions
@rxn=r1
  A <-> B
  k1*A
@rxn=r2
  B <-> C
  k2*B
@rxn=r3
  C <-> A
  k3*C
"""

GLUCOSE = "identifiers.org/chebi/CHEBI:17234"
ATP = "identifiers.org/chebi/CHEBI:15422"
HEXOKINASE = "identifiers.org/ec-code/2.7.1.1"

LEFT_MODEL = f"""\
@model:2.4.1=left
@compartments
  cyt=1 "cytosol"
@species
  cyt:glc=1 "glucose" is={GLUCOSE}
  cyt:atp=2 is={ATP}
@parameters
  k=0.5
@reactions
@rxn=hk is={HEXOKINASE}
  glc -> atp
  k*glc
"""

RIGHT_MODEL = f"""\
@model:2.4.1=right
@compartments
  cyt=1 "cytosol"
@species
  cyt:Glucose=1 "glucose" is={GLUCOSE}
  cyt:atp=3 is={ATP}
@parameters
  k=0.5
@reactions
@rxn=hexokinase is={HEXOKINASE}
  Glucose -> atp
  k*Glucose
"""


def annotated_model(model_id: str, uris: list[str]) -> ModelDocument:
    """One compartment and one species per URI, each carrying an ``is`` annotation."""
    species = tuple(
        Species(f"s{i}", "c", annotations=AnnotationSet.of([("is", uri)]))
        for i, uri in enumerate(uris)
    )
    return ModelDocument(id=model_id, compartments=(Compartment("c"),), species=species)


def family_corpus(families: int = 4, size: int = 5) -> list[tuple[str, ModelDocument]]:
    """Interleaved corpus: model k belongs to family k % families.

    Each model has five of its family's six base URIs and one private URI,
    so models of one family have similarity 0.5 and models of different
    families have similarity 0.
    """
    corpus = []
    for k in range(families * size):
        family = k % families
        member = k // families
        base = [f"identifiers.org/go/GO:{family}{b:05d}" for b in range(6) if b != member]
        private = f"identifiers.org/uniprot/P{k:05d}"
        label = f"m{k:02d}"
        corpus.append((label, annotated_model(label, base + [private])))
    return corpus


@pytest.fixture
def my_model_text():
    """Shorthand source of the two-species reversible mass-action model"""
    return MY_MODEL


@pytest.fixture
def my_model():
    """Compiled MyModel document"""
    return parse_shorthand(MY_MODEL)


@pytest.fixture
def triangle():
    """Three species in a closed reaction cycle"""
    return parse_shorthand(TRIANGLE)


@pytest.fixture
def left_model():
    """Annotated hexokinase model"""
    return parse_shorthand(LEFT_MODEL)


@pytest.fixture
def right_model():
    """Same network as left_model under different ids"""
    return parse_shorthand(RIGHT_MODEL)


@pytest.fixture
def corpus():
    """Deterministic 20-model corpus in four annotation families"""
    return family_corpus()


@pytest.fixture
def records_text():
    """Annotation records linking ChEBI and KEGG glucose entries"""
    return "\n".join(
        [
            "# primary\tnames\tcrossrefs\trelations",
            f"{GLUCOSE}\tD-glucose|glucose\tidentifiers.org/kegg.compound/C00031"
            "\tis_a=identifiers.org/chebi/CHEBI:4167",
            f"{ATP}\tATP|adenosine triphosphate\tidentifiers.org/kegg.compound/C00002",
            "identifiers.org/kegg.compound/C00031\tGlucose\t",
        ]
    )


@pytest.fixture
def temp_output_dir(tmp_path):
    """Directory for files written by a test"""
    output = tmp_path / "output"
    output.mkdir()
    return output
