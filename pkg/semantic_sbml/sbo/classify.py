"""
Structural rate-law classification.

Recognized families, matched on the canonical form of the kinetic law:

    MassActionIrreversible       k * prod_s s^m_s            (m = reactant stoichiometry)
    MassActionReversible         kf * prod_s s^m_s - kr * prod_p p^m_p
    MichaelisMentenIrreversible  V * S / (K + S)             (single substrate)
    ModularReversible            the common modular rate law written by balancing
"""

import logging
from enum import Enum
from typing import Optional

from ..balancing.quantities import QuantityType
from ..balancing.ratelaw import (
    KCAT_FWD,
    KCAT_REV,
    km_id,
    modifier_constant_id,
    modular_local_ids,
    modular_rate_law,
)
from ..errors import NoKineticLaw
from ..model.document import ModelDocument, Reaction, SpeciesReference
from ..model.expression import symbols
from .canonical import CNode, CSum, CSymbol, as_factors, canonicalize

logger = logging.getLogger(__name__)


class RateLawClass(str, Enum):
    MASS_ACTION_IRREVERSIBLE = "MassActionIrreversible"
    MASS_ACTION_REVERSIBLE = "MassActionReversible"
    MICHAELIS_MENTEN_IRREVERSIBLE = "MichaelisMentenIrreversible"
    MODULAR_REVERSIBLE = "ModularReversible"
    UNKNOWN = "Unknown"


class ParameterRole(str, Enum):
    FORWARD_RATE_CONSTANT = "forward_rate_constant"
    REVERSE_RATE_CONSTANT = "reverse_rate_constant"
    CATALYTIC_CONSTANT = "catalytic_constant"
    MICHAELIS_CONSTANT = "michaelis_constant"
    MAXIMAL_VELOCITY = "maximal_velocity"
    INHIBITION_CONSTANT = "inhibition_constant"
    ACTIVATION_CONSTANT = "activation_constant"


RoleMap = dict[str, ParameterRole]


class _Symbols:
    """Which law symbols denote species and which denote parameters."""

    def __init__(self, reaction: Reaction, doc: ModelDocument) -> None:
        local_ids = reaction.local_ids()
        self.parameters = local_ids | {p.id for p in doc.parameters}
        self.species = {s.id for s in doc.species} - local_ids

    def is_parameter(self, node: CNode) -> bool:
        return isinstance(node, CSymbol) and node.name in self.parameters

    def is_species(self, node: CNode) -> bool:
        return isinstance(node, CSymbol) and node.name in self.species


def _orders(references: tuple[SpeciesReference, ...]) -> dict[str, float]:
    orders: dict[str, float] = {}
    for reference in references:
        orders[reference.species] = orders.get(reference.species, 0) + reference.stoichiometry
    return orders


def _mass_action_constant(
    node: CNode, orders: dict[str, float], known: _Symbols
) -> Optional[str]:
    """Rate constant of ``k * prod s^m_s`` with exponents ``orders``, else None."""
    constants: list[str] = []
    species: dict[str, float] = {}
    for factor, exponent in as_factors(node):
        if known.is_parameter(factor) and exponent == 1:
            assert isinstance(factor, CSymbol)
            constants.append(factor.name)
        elif known.is_species(factor):
            assert isinstance(factor, CSymbol)
            species[factor.name] = exponent
        else:
            return None
    if len(constants) != 1 or species != orders:
        return None
    return constants[0]


def _michaelis_menten(
    node: CNode, orders: dict[str, float], known: _Symbols
) -> Optional[RoleMap]:
    if len(orders) != 1 or next(iter(orders.values())) != 1:
        return None
    substrate = next(iter(orders))
    velocity: Optional[str] = None
    constant: Optional[str] = None
    seen_substrate = False
    for factor, exponent in as_factors(node):
        if isinstance(factor, CSymbol) and factor.name == substrate and exponent == 1:
            seen_substrate = True
        elif known.is_parameter(factor) and exponent == 1 and velocity is None:
            assert isinstance(factor, CSymbol)
            velocity = factor.name
        elif isinstance(factor, CSum) and exponent == -1 and constant is None:
            terms = factor.terms
            if len(terms) != 2 or any(sign != 1 for sign, _ in terms):
                return None
            names = [term for _, term in terms]
            others = [t for t in names if not (isinstance(t, CSymbol) and t.name == substrate)]
            if len(others) != 1 or not known.is_parameter(others[0]):
                return None
            assert isinstance(others[0], CSymbol)
            constant = others[0].name
        else:
            return None
    if not seen_substrate or velocity is None or constant is None or velocity == constant:
        return None
    return {velocity: ParameterRole.MAXIMAL_VELOCITY, constant: ParameterRole.MICHAELIS_CONSTANT}


def _modular(
    law: CNode, reaction: Reaction, doc: ModelDocument, known: _Symbols
) -> Optional[RoleMap]:
    net: dict[str, float] = {}
    for species, order in _orders(reaction.products).items():
        net[species] = net.get(species, 0) + order
    for species, order in _orders(reaction.reactants).items():
        net[species] = net.get(species, 0) - order
    net = {s: n for s, n in net.items() if n != 0}

    taken = frozenset(doc.all_ids())
    for modifier_type in (None, QuantityType.KA, QuantityType.KI):
        names = modular_local_ids(taken, net, reaction.modifiers, modifier_type)
        template = modular_rate_law(net, reaction.modifiers, modifier_type, names)
        if canonicalize(template) != law:
            continue
        roles: RoleMap = {
            names[KCAT_FWD]: ParameterRole.CATALYTIC_CONSTANT,
            names[KCAT_REV]: ParameterRole.CATALYTIC_CONSTANT,
        }
        roles.update({names[km_id(s)]: ParameterRole.MICHAELIS_CONSTANT for s in net})
        if modifier_type is not None:
            role = (
                ParameterRole.ACTIVATION_CONSTANT
                if modifier_type == QuantityType.KA
                else ParameterRole.INHIBITION_CONSTANT
            )
            roles.update(
                {names[modifier_constant_id(modifier_type, m)]: role for m in reaction.modifiers}
            )
        used = symbols(template) & known.parameters
        return {pid: role for pid, role in roles.items() if pid in used}
    return None


def classify_rate_law(reaction: Reaction, doc: ModelDocument) -> tuple[RateLawClass, RoleMap]:
    """Classify the kinetic law of ``reaction`` and map parameter ids to roles.

    Raises:
        NoKineticLaw: the reaction has no kinetic law
    """
    if reaction.kinetic_law is None:
        raise NoKineticLaw(f"reaction {reaction.id} has no kinetic law", {"reaction": reaction.id})
    law = canonicalize(reaction.kinetic_law)
    known = _Symbols(reaction, doc)
    reactant_orders = _orders(reaction.reactants)

    constant = _mass_action_constant(law, reactant_orders, known)
    if constant is not None:
        return RateLawClass.MASS_ACTION_IRREVERSIBLE, {
            constant: ParameterRole.FORWARD_RATE_CONSTANT
        }

    if isinstance(law, CSum) and sorted(sign for sign, _ in law.terms) == [-1, 1]:
        positive = next(term for sign, term in law.terms if sign == 1)
        negative = next(term for sign, term in law.terms if sign == -1)
        forward = _mass_action_constant(positive, reactant_orders, known)
        reverse = _mass_action_constant(negative, _orders(reaction.products), known)
        if forward is not None and reverse is not None and forward != reverse:
            return RateLawClass.MASS_ACTION_REVERSIBLE, {
                forward: ParameterRole.FORWARD_RATE_CONSTANT,
                reverse: ParameterRole.REVERSE_RATE_CONSTANT,
            }

    roles = _michaelis_menten(law, reactant_orders, known)
    if roles is not None:
        return RateLawClass.MICHAELIS_MENTEN_IRREVERSIBLE, roles

    roles = _modular(law, reaction, doc, known)
    if roles is not None:
        return RateLawClass.MODULAR_REVERSIBLE, roles

    logger.debug(f"Reaction {reaction.id}: kinetic law not in a known family")
    return RateLawClass.UNKNOWN, {}
