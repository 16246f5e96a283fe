"""
GraphViz DOT output for reaction networks and similarity graphs.

Model networks are bipartite: species are ellipses, reactions are boxes,
and every species reference becomes one edge. Output is deterministic and
uses only declared node ids as edge endpoints.
"""

import logging
import re
from collections.abc import Iterator
from dataclasses import dataclass
from typing import Optional

from .cluster import SimilarityGraph
from .model.document import ModelDocument, Reaction, Species
from .model.expression import format_number
from .model.validation import require_valid

logger = logging.getLogger(__name__)

SPECIES_PREFIX = "s_"
REACTION_PREFIX = "r_"

# Fill colours for similarity clusters, reused cyclically
CLUSTER_PALETTE = (
    "#8dd3c7",
    "#ffffb3",
    "#bebada",
    "#fb8072",
    "#80b1d3",
    "#fdb462",
    "#b3de69",
    "#fccde5",
)

_BARE_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_KEYWORDS = {"node", "edge", "graph", "digraph", "subgraph", "strict"}


@dataclass(frozen=True)
class ModelDotOptions:
    show_modifiers: bool = True
    compartment_clusters: bool = False


def quote(text: str) -> str:
    """DOT string literal for ``text``."""
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def dot_id(text: str) -> str:
    """``text`` as a DOT id, quoted only when required."""
    if _BARE_ID.match(text) and text.lower() not in _KEYWORDS:
        return text
    return quote(text)


def _species_node(species: Species, indent: str) -> str:
    label = quote(species.name or species.id)
    return f"{indent}{SPECIES_PREFIX}{species.id} [shape=ellipse, label={label}];"


def _reaction_lines(reaction: Reaction, show_modifiers: bool) -> Iterator[str]:
    node = f"{REACTION_PREFIX}{reaction.id}"
    for reference in reaction.reactants:
        yield _edge(f"{SPECIES_PREFIX}{reference.species}", node, reference.stoichiometry)
    for reference in reaction.products:
        yield _edge(node, f"{SPECIES_PREFIX}{reference.species}", reference.stoichiometry)
    if show_modifiers:
        for modifier in reaction.modifiers:
            yield f"  {SPECIES_PREFIX}{modifier} -> {node} [style=dashed];"


def _edge(source: str, target: str, stoichiometry: float) -> str:
    if stoichiometry == 1:
        return f"  {source} -> {target};"
    return f"  {source} -> {target} [label={quote(format_number(stoichiometry))}];"


def _model_lines(doc: ModelDocument, options: ModelDotOptions) -> Iterator[str]:
    yield "digraph model {"
    if options.compartment_clusters:
        for compartment in doc.compartments:
            members = [s for s in doc.species if s.compartment == compartment.id]
            yield f"  subgraph cluster_{compartment.id} {{"
            yield f"    label={quote(compartment.name or compartment.id)};"
            for species in members:
                yield _species_node(species, "    ")
            yield "  }"
    else:
        for species in doc.species:
            yield _species_node(species, "  ")
    for reaction in doc.reactions:
        label = quote(reaction.name or reaction.id)
        yield f"  {REACTION_PREFIX}{reaction.id} [shape=box, label={label}];"
    for reaction in doc.reactions:
        yield from _reaction_lines(reaction, options.show_modifiers)
    yield "}"


def model_to_dot(doc: ModelDocument, options: Optional[ModelDotOptions] = None) -> str:
    """DOT text for the species-reaction network of ``doc``.

    Raises:
        InvalidModel: ``doc`` has validation errors
    """
    require_valid(doc)
    options = options or ModelDotOptions()
    logger.debug(f"DOT for {doc.id}: {len(doc.species)} species, {len(doc.reactions)} reactions")
    return "\n".join(_model_lines(doc, options)) + "\n"


def _similarity_lines(graph: SimilarityGraph) -> Iterator[str]:
    yield "graph similarity {"
    for label, cluster in zip(graph.nodes, graph.clusters):
        colour = CLUSTER_PALETTE[(cluster - 1) % len(CLUSTER_PALETTE)]
        yield f'  {dot_id(label)} [style=filled, fillcolor="{colour}"];'
    for edge in graph.edges:
        yield f'  {dot_id(edge.left)} -- {dot_id(edge.right)} [label="{edge.weight:.2f}"];'
    yield "}"


def similarity_to_dot(graph: SimilarityGraph) -> str:
    """Undirected DOT for a similarity graph, nodes coloured by cluster."""
    return "\n".join(_similarity_lines(graph)) + "\n"
