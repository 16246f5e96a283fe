"""
SBML reader and writer for the supported subset.

The reader accepts Level 2 Versions 1-5 and Level 3 Versions 1-2. Elements
outside the subset (rules, events, unit definitions, notes, ...) are
dropped and recorded in ``SbmlReader.warnings``. The writer is
deterministic: document order for elements, a fixed attribute order and
annotations as an RDF bag of identifiers.org URLs.
"""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Union

from lxml import etree

from ..errors import (
    BrokenReference,
    ParseFailure,
    UnrecognizedUriScheme,
    UnsupportedSbmlLevel,
    XmlSyntax,
)
from ..model.annotations import AnnotationSet, to_url
from ..model.document import (
    Compartment,
    ModelDocument,
    Parameter,
    Reaction,
    Species,
    SpeciesReference,
)
from ..model.expression import Expression, format_number
from ..model.validation import require_valid
from .base import BaseFormat
from .mathml import UnsupportedMath, read_math, write_math

logger = logging.getLogger(__name__)

SBML_NAMESPACES: dict[tuple[int, int], str] = {
    (2, 1): "http://www.sbml.org/sbml/level2",
    (2, 2): "http://www.sbml.org/sbml/level2/version2",
    (2, 3): "http://www.sbml.org/sbml/level2/version3",
    (2, 4): "http://www.sbml.org/sbml/level2/version4",
    (2, 5): "http://www.sbml.org/sbml/level2/version5",
    (3, 1): "http://www.sbml.org/sbml/level3/version1/core",
    (3, 2): "http://www.sbml.org/sbml/level3/version2/core",
}

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
BQBIOL_NS = "http://biomodels.net/biology-qualifiers/"
BQMODEL_NS = "http://biomodels.net/model-qualifiers/"

#: Prefix marking model qualifiers (``bqmodel:``) in an AnnotationSet
MODEL_QUALIFIER_PREFIX = "model:"

_KNOWN_MODEL_CHILDREN = {
    "listOfCompartments",
    "listOfSpecies",
    "listOfParameters",
    "listOfReactions",
    "annotation",
}


@dataclass(frozen=True)
class SbmlSerializationOptions:
    level: int = 2
    version: int = 4
    indent: int = 2

    def __post_init__(self) -> None:
        if self.level not in (2, 3) or self.version < 1:
            raise ValueError(f"invalid SBML target level {self.level} version {self.version}")
        if (self.level, self.version) not in SBML_NAMESPACES:
            raise ValueError(f"unsupported SBML target L{self.level}V{self.version}")
        if self.indent < 0:
            raise ValueError("indent must be >= 0")

    @property
    def namespace(self) -> str:
        return SBML_NAMESPACES[(self.level, self.version)]


def _local(element: etree._Element) -> str:
    return etree.QName(element).localname


def _children(parent: etree._Element, name: Optional[str] = None) -> list[etree._Element]:
    return [
        child
        for child in parent
        if isinstance(child.tag, str) and (name is None or _local(child) == name)
    ]


def _child(parent: etree._Element, name: str) -> Optional[etree._Element]:
    found = _children(parent, name)
    return found[0] if found else None


class SbmlReader:
    """Parse SBML bytes into a ModelDocument, collecting warnings."""

    def __init__(self) -> None:
        self.warnings: list[str] = []

    def warn(self, message: str) -> None:
        logger.warning(message)
        self.warnings.append(message)

    def read(self, data: Union[bytes, str]) -> ModelDocument:
        """Parse a serialized SBML document.

        Raises:
            XmlSyntax: input is not well-formed XML
            UnsupportedSbmlLevel: level/version outside L2V1-5, L3V1-2
            BrokenReference: a species or reaction refers to a missing id
            ParseFailure: attribute values cannot be read
        """
        self.warnings = []
        if isinstance(data, str):
            data = data.encode("utf-8")
        parser = etree.XMLParser(resolve_entities=False, no_network=True, remove_comments=True)
        try:
            root = etree.fromstring(data, parser)
        except etree.XMLSyntaxError as e:
            raise XmlSyntax(f"malformed XML: {e}", {"reason": str(e)}) from None

        if _local(root) != "sbml":
            raise ParseFailure(f"root element is <{_local(root)}>, expected <sbml>")
        level = self._int(root, "level", None)
        version = self._int(root, "version", None)
        if (level, version) not in SBML_NAMESPACES:
            raise UnsupportedSbmlLevel(
                f"SBML level {level} version {version} is not supported",
                {"level": level, "version": version},
            )
        namespace = etree.QName(root).namespace
        if namespace != SBML_NAMESPACES[(level, version)]:
            self.warn(f"namespace {namespace} does not match L{level}V{version}")

        model = _child(root, "model")
        if model is None:
            self.warn("document has no <model> element")
            return ModelDocument(level=level, version=version)
        for child in _children(model):
            if _local(child) not in _KNOWN_MODEL_CHILDREN:
                self.warn(f"dropped <{_local(child)}> from model")
        if _child(model, "annotation") is not None:
            self.warn("dropped model-level annotation")

        compartments = tuple(
            self._compartment(node) for node in self._list(model, "listOfCompartments")
        )
        species = tuple(
            self._species(node) for node in self._list(model, "listOfSpecies")
        )
        parameters = tuple(
            self._parameter(node, f"parameter:{node.get('id')}")
            for node in self._list(model, "listOfParameters")
        )
        reactions = tuple(
            self._reaction(node) for node in self._list(model, "listOfReactions")
        )
        doc = ModelDocument(
            id=model.get("id") or "model",
            name=model.get("name", ""),
            level=level,
            version=version,
            compartments=compartments,
            species=species,
            parameters=parameters,
            reactions=reactions,
        )
        self._check_references(doc)
        logger.debug(f"Read SBML L{level}V{version} model {doc.id}, {len(doc.elements())} elements")
        return doc

    # --- attribute helpers -------------------------------------------------

    def _list(self, model: etree._Element, name: str) -> list[etree._Element]:
        container = _child(model, name)
        return [] if container is None else _children(container)

    @staticmethod
    def _require(node: etree._Element, attribute: str) -> str:
        value = node.get(attribute)
        if not value:
            raise ParseFailure(f"<{_local(node)}> lacks required attribute {attribute}")
        return value

    @staticmethod
    def _float(node: etree._Element, attribute: str, default: Optional[float]) -> Any:
        raw = node.get(attribute)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise ParseFailure(
                f"<{_local(node)} id={node.get('id')!r}> has non-numeric {attribute}={raw!r}"
            ) from None

    @staticmethod
    def _int(node: etree._Element, attribute: str, default: Optional[int]) -> Any:
        raw = node.get(attribute)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            return default

    @staticmethod
    def _bool(node: etree._Element, attribute: str, default: bool) -> bool:
        raw = node.get(attribute)
        if raw is None:
            return default
        return raw.strip() in ("true", "1")

    def _annotations(self, node: etree._Element, path: str) -> AnnotationSet:
        annotation = _child(node, "annotation")
        if annotation is None:
            return AnnotationSet()
        pairs: list[tuple[str, str]] = []
        for rdf in annotation.iter(f"{{{RDF_NS}}}RDF"):
            for description in rdf.iter(f"{{{RDF_NS}}}Description"):
                for qualifier_node in _children(description):
                    qname = etree.QName(qualifier_node)
                    if qname.namespace == BQBIOL_NS:
                        qualifier = qname.localname
                    elif qname.namespace == BQMODEL_NS:
                        qualifier = MODEL_QUALIFIER_PREFIX + qname.localname
                    else:
                        self.warn(f"{path}: dropped annotation qualifier {qname.text}")
                        continue
                    for item in qualifier_node.iter(f"{{{RDF_NS}}}li"):
                        resource = item.get(f"{{{RDF_NS}}}resource")
                        if resource:
                            pairs.append((qualifier, resource))
        annotations = AnnotationSet()
        for qualifier, resource in pairs:
            try:
                annotations = annotations.add(qualifier, resource)
            except UnrecognizedUriScheme:
                self.warn(f"{path}: dropped unrecognized resource {resource}")
        return annotations

    def _drop_unknown(self, node: etree._Element, known: set[str], path: str) -> None:
        for child in _children(node):
            if _local(child) not in known:
                self.warn(f"{path}: dropped <{_local(child)}>")

    # --- elements ----------------------------------------------------------

    def _compartment(self, node: etree._Element) -> Compartment:
        compartment_id = self._require(node, "id")
        path = f"compartment:{compartment_id}"
        self._drop_unknown(node, {"annotation"}, path)
        size = self._float(node, "size", None)
        if size is None:
            size = self._float(node, "volume", None)
        if size is None:
            self.warn(f"{path}: no size given, using 1")
            size = 1.0
        return Compartment(
            id=compartment_id,
            name=node.get("name", ""),
            size=size,
            annotations=self._annotations(node, path),
            sbo=node.get("sboTerm"),
        )

    def _species(self, node: etree._Element) -> Species:
        species_id = self._require(node, "id")
        path = f"species:{species_id}"
        self._drop_unknown(node, {"annotation"}, path)
        amount = self._float(node, "initialAmount", None)
        if amount is None:
            concentration = self._float(node, "initialConcentration", None)
            if concentration is not None:
                self.warn(f"{path}: initialConcentration read as initial amount")
                amount = concentration
            else:
                amount = 0.0
        return Species(
            id=species_id,
            compartment=self._require(node, "compartment"),
            name=node.get("name", ""),
            initial_amount=amount,
            boundary=self._bool(node, "boundaryCondition", False),
            constant=self._bool(node, "constant", False),
            annotations=self._annotations(node, path),
            sbo=node.get("sboTerm"),
        )

    def _parameter(self, node: etree._Element, path: str) -> Parameter:
        self._drop_unknown(node, {"annotation"}, path)
        value = self._float(node, "value", None)
        if value is None:
            self.warn(f"{path}: no value given, using 0")
            value = 0.0
        return Parameter(
            id=self._require(node, "id"),
            value=value,
            annotations=self._annotations(node, path),
            sbo=node.get("sboTerm"),
        )

    def _references(
        self, node: etree._Element, name: str, path: str
    ) -> tuple[SpeciesReference, ...]:
        references = []
        for reference in self._list(node, name):
            if _child(reference, "stoichiometryMath") is not None:
                self.warn(f"{path}: dropped <stoichiometryMath>")
            stoichiometry = self._float(reference, "stoichiometry", None)
            if stoichiometry is None:
                stoichiometry = 1.0
            references.append(SpeciesReference(self._require(reference, "species"), stoichiometry))
        return tuple(references)

    def _reaction(self, node: etree._Element) -> Reaction:
        reaction_id = self._require(node, "id")
        path = f"reaction:{reaction_id}"
        self._drop_unknown(
            node,
            {"listOfReactants", "listOfProducts", "listOfModifiers", "kineticLaw", "annotation"},
            path,
        )
        modifiers = tuple(
            self._require(reference, "species")
            for reference in self._list(node, "listOfModifiers")
        )

        kinetic_law: Optional[Expression] = None
        local_parameters: tuple[Parameter, ...] = ()
        sbo = node.get("sboTerm")
        law = _child(node, "kineticLaw")
        if law is not None:
            sbo = sbo or law.get("sboTerm")
            self._drop_unknown(
                law, {"math", "listOfParameters", "listOfLocalParameters", "annotation"}, path
            )
            math = _child(law, "math")
            if math is None:
                self.warn(f"{path}: kinetic law without <math>")
            else:
                try:
                    kinetic_law = read_math(math)
                except UnsupportedMath as e:
                    self.warn(f"{path}: dropped kinetic law ({e})")
            local_nodes = self._list(law, "listOfParameters") + self._list(
                law, "listOfLocalParameters"
            )
            local_parameters = tuple(
                self._parameter(local, f"{path}/{local.get('id')}") for local in local_nodes
            )

        return Reaction(
            id=reaction_id,
            name=node.get("name", ""),
            reversible=self._bool(node, "reversible", True),
            reactants=self._references(node, "listOfReactants", path),
            products=self._references(node, "listOfProducts", path),
            modifiers=modifiers,
            kinetic_law=kinetic_law,
            local_parameters=local_parameters,
            annotations=self._annotations(node, path),
            sbo=sbo,
        )

    @staticmethod
    def _check_references(doc: ModelDocument) -> None:
        compartment_ids = {c.id for c in doc.compartments}
        species_ids = {s.id for s in doc.species}
        for species in doc.species:
            if species.compartment not in compartment_ids:
                raise BrokenReference(
                    f"species {species.id} refers to missing compartment {species.compartment}",
                    {"element": f"species:{species.id}", "reference": species.compartment},
                )
        for reaction in doc.reactions:
            for species_id in reaction.participants():
                if species_id not in species_ids:
                    raise BrokenReference(
                        f"reaction {reaction.id} refers to missing species {species_id}",
                        {"element": f"reaction:{reaction.id}", "reference": species_id},
                    )


def read_sbml(data: Union[bytes, str]) -> ModelDocument:
    """Parse SBML bytes; warnings are logged. See ``SbmlReader`` to collect them."""
    return SbmlReader().read(data)


class _Writer:
    def __init__(self, opts: SbmlSerializationOptions) -> None:
        self.opts = opts
        self.ns = opts.namespace
        self.l3 = opts.level == 3

    def tag(self, name: str) -> str:
        return f"{{{self.ns}}}{name}"

    def sub(self, parent: etree._Element, name: str, **attributes: str) -> etree._Element:
        element = etree.SubElement(parent, self.tag(name))
        for key, value in attributes.items():
            element.set(key, value)
        return element

    def common(
        self,
        element: etree._Element,
        element_id: str,
        metaid: str,
        annotations: AnnotationSet,
        name: str = "",
        sbo: Optional[str] = None,
    ) -> None:
        if annotations:
            element.set("metaid", metaid)
        element.set("id", element_id)
        if name:
            element.set("name", name)
        if sbo:
            element.set("sboTerm", sbo)

    def annotations(self, element: etree._Element, metaid: str, annotations: AnnotationSet) -> None:
        if not annotations:
            return
        annotation = self.sub(element, "annotation")
        rdf = etree.SubElement(
            annotation,
            f"{{{RDF_NS}}}RDF",
            nsmap={"rdf": RDF_NS, "bqbiol": BQBIOL_NS, "bqmodel": BQMODEL_NS},
        )
        description = etree.SubElement(rdf, f"{{{RDF_NS}}}Description")
        description.set(f"{{{RDF_NS}}}about", f"#{metaid}")
        for qualifier in annotations.qualifiers():
            if qualifier.startswith(MODEL_QUALIFIER_PREFIX):
                tag = f"{{{BQMODEL_NS}}}{qualifier[len(MODEL_QUALIFIER_PREFIX):]}"
            else:
                tag = f"{{{BQBIOL_NS}}}{qualifier}"
            bag = etree.SubElement(etree.SubElement(description, tag), f"{{{RDF_NS}}}Bag")
            for uri in sorted(annotations.uris(qualifier)):
                item = etree.SubElement(bag, f"{{{RDF_NS}}}li")
                item.set(f"{{{RDF_NS}}}resource", to_url(uri))

    def parameter(
        self, parent: etree._Element, parameter: Parameter, tag: str, metaid: str
    ) -> None:
        element = self.sub(parent, tag)
        self.common(element, parameter.id, metaid, parameter.annotations, sbo=parameter.sbo)
        element.set("value", format_number(parameter.value))
        if self.l3 and tag == "parameter":
            element.set("constant", "true")
        self.annotations(element, metaid, parameter.annotations)

    def references(
        self, parent: etree._Element, name: str, references: tuple[SpeciesReference, ...]
    ) -> None:
        if not references:
            return
        container = self.sub(parent, name)
        for reference in references:
            element = self.sub(container, "speciesReference", species=reference.species)
            element.set("stoichiometry", format_number(reference.stoichiometry))
            if self.l3:
                element.set("constant", "true")

    def reaction(self, parent: etree._Element, reaction: Reaction) -> None:
        metaid = f"meta_{reaction.id}"
        element = self.sub(parent, "reaction")
        self.common(element, reaction.id, metaid, reaction.annotations, reaction.name, reaction.sbo)
        element.set("reversible", "true" if reaction.reversible else "false")
        if self.l3 and self.opts.version == 1:
            element.set("fast", "false")
        self.annotations(element, metaid, reaction.annotations)
        self.references(element, "listOfReactants", reaction.reactants)
        self.references(element, "listOfProducts", reaction.products)
        if reaction.modifiers:
            container = self.sub(element, "listOfModifiers")
            for modifier in reaction.modifiers:
                self.sub(container, "modifierSpeciesReference", species=modifier)
        if reaction.kinetic_law is None and not reaction.local_parameters:
            return
        law = self.sub(element, "kineticLaw")
        if reaction.kinetic_law is not None:
            write_math(law, reaction.kinetic_law)
        if reaction.local_parameters:
            list_tag, item_tag = (
                ("listOfLocalParameters", "localParameter")
                if self.l3
                else ("listOfParameters", "parameter")
            )
            container = self.sub(law, list_tag)
            for local in reaction.local_parameters:
                self.parameter(container, local, item_tag, f"meta_{reaction.id}.{local.id}")

    def document(self, doc: ModelDocument) -> etree._Element:
        root = etree.Element(self.tag("sbml"), nsmap={None: self.ns})
        root.set("level", str(self.opts.level))
        root.set("version", str(self.opts.version))
        model = self.sub(root, "model", id=doc.id)
        if doc.name:
            model.set("name", doc.name)

        if doc.compartments:
            container = self.sub(model, "listOfCompartments")
            for compartment in doc.compartments:
                metaid = f"meta_{compartment.id}"
                element = self.sub(container, "compartment")
                self.common(
                    element,
                    compartment.id,
                    metaid,
                    compartment.annotations,
                    compartment.name,
                    compartment.sbo,
                )
                element.set("size", format_number(compartment.size))
                if self.l3:
                    element.set("constant", "true")
                self.annotations(element, metaid, compartment.annotations)

        if doc.species:
            container = self.sub(model, "listOfSpecies")
            for species in doc.species:
                metaid = f"meta_{species.id}"
                element = self.sub(container, "species")
                self.common(
                    element, species.id, metaid, species.annotations, species.name, species.sbo
                )
                element.set("compartment", species.compartment)
                element.set("initialAmount", format_number(species.initial_amount))
                if self.l3:
                    element.set("hasOnlySubstanceUnits", "false")
                element.set("boundaryCondition", "true" if species.boundary else "false")
                element.set("constant", "true" if species.constant else "false")
                self.annotations(element, metaid, species.annotations)

        if doc.parameters:
            container = self.sub(model, "listOfParameters")
            for parameter in doc.parameters:
                self.parameter(container, parameter, "parameter", f"meta_{parameter.id}")

        if doc.reactions:
            container = self.sub(model, "listOfReactions")
            for reaction in doc.reactions:
                self.reaction(container, reaction)
        return root


def write_sbml(doc: ModelDocument, opts: Optional[SbmlSerializationOptions] = None) -> bytes:
    """Serialize ``doc`` as SBML.

    Args:
        doc: Document to write
        opts: Target level/version and indentation; defaults to the
            document's own level and version

    Raises:
        InvalidModel: the document has validation errors
    """
    require_valid(doc)
    if opts is None:
        opts = SbmlSerializationOptions(level=doc.level, version=doc.version)
    root = _Writer(opts).document(doc)
    if opts.indent:
        etree.indent(root, space=" " * opts.indent)
    return etree.tostring(
        root, xml_declaration=True, encoding="UTF-8", pretty_print=bool(opts.indent)
    )


class SbmlFormat(BaseFormat):
    """SBML XML documents"""

    name = "sbml"
    media_type = "application/xml"

    def read(self, data: bytes) -> ModelDocument:
        return read_sbml(data)

    def write(self, doc: ModelDocument, **kwargs: Any) -> bytes:
        opts = kwargs.get("opts")
        return write_sbml(doc, opts)

    def detect(self, data: bytes) -> bool:
        return self._leading_text(data).startswith("<")
