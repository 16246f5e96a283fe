"""
Common modular rate law and insertion of balanced parameters into a model.

For a reaction with net stoichiometry n_s, substrates S (n_s < 0) and
products P (n_s > 0)::

    v = u * (kcat_f * prod_S (s/KM_s)^|n_s| - kcat_r * prod_P (p/KM_p)^n_p)
          / (prod_S (1 + s/KM_s)^|n_s| + prod_P (1 + p/KM_p)^n_p - 1)

multiplied by ``m/(KA_m + m)`` per activator or ``KI_m/(KI_m + m)`` per
inhibitor when modifier constants are balanced.
"""

import logging
from collections.abc import Collection, Mapping
from dataclasses import replace
from typing import Optional

from ..errors import IncompleteBalance
from ..model.document import ModelDocument, Parameter, Reaction
from ..model.expression import (
    Add,
    Div,
    Expression,
    Mul,
    Number,
    Pow,
    Sub,
    Symbol,
    fold,
)
from ..model.stoichiometry import stoichiometric_matrix
from ..model.validation import require_valid
from .config import BalancingConfig, get_default_balancing_config
from .problem import modifier_type_for
from .quantities import QuantityInstance, QuantityType
from .solver import BalancedSet

logger = logging.getLogger(__name__)

KCAT_FWD = "kcat_f"
KCAT_REV = "kcat_r"
ENZYME = "u"


def km_id(species: str) -> str:
    return f"KM_{species}"


def modifier_constant_id(quantity_type: QuantityType, species: str) -> str:
    return f"{quantity_type.value}_{species}"


def modular_local_ids(
    taken: Collection[str],
    stoichiometry: Mapping[str, float],
    modifiers: tuple[str, ...] = (),
    modifier_type: Optional[QuantityType] = None,
) -> dict[str, str]:
    """Local parameter id for each modular-law constant of one reaction.

    A constant whose plain id (``kcat_f``, ``KM_A``, ``u`` ...) is already a
    global id in ``taken`` gets ``_local``, then ``_local2`` ... appended, so
    locals never shadow a species or parameter the law refers to.
    """
    bases = [KCAT_FWD, KCAT_REV] + [km_id(s) for s in stoichiometry]
    if modifier_type is not None:
        bases += [modifier_constant_id(modifier_type, m) for m in dict.fromkeys(modifiers)]
    bases.append(ENZYME)
    reserved = set(taken) | set(bases)
    names: dict[str, str] = {}
    for base in bases:
        name = base
        if base in taken:
            name, counter = f"{base}_local", 2
            while name in reserved:
                name = f"{base}_local{counter}"
                counter += 1
            reserved.add(name)
        names[base] = name
    return names


def _power(base: Expression, exponent: float) -> Expression:
    return base if exponent == 1 else Pow(base, Number(exponent))


def _product(factors: list[Expression]) -> Expression:
    return fold(Mul, factors) if factors else Number(1)


def modular_rate_law(
    stoichiometry: dict[str, float],
    modifiers: tuple[str, ...] = (),
    modifier_type: Optional[QuantityType] = None,
    names: Optional[Mapping[str, str]] = None,
) -> Expression:
    """Modular rate law over net coefficients ``stoichiometry``.

    Species symbols are species ids; parameter symbols are ``kcat_f``,
    ``kcat_r``, ``u``, ``KM_<species>`` and ``KA_<m>`` / ``KI_<m>``, each
    renamed through ``names`` when given.
    """
    names = names or {}

    def local(base: str) -> Symbol:
        return Symbol(names.get(base, base))

    substrates = [(s, -n) for s, n in stoichiometry.items() if n < 0]
    products = [(s, n) for s, n in stoichiometry.items() if n > 0]

    def ratio(species: str) -> Expression:
        return Div(Symbol(species), local(km_id(species)))

    def saturation(species: str) -> Expression:
        return Add(Number(1), ratio(species))

    forward = _product([local(KCAT_FWD)] + [_power(ratio(s), n) for s, n in substrates])
    reverse = _product([local(KCAT_REV)] + [_power(ratio(p), n) for p, n in products])
    denominator = Sub(
        Add(
            _product([_power(saturation(s), n) for s, n in substrates]),
            _product([_power(saturation(p), n) for p, n in products]),
        ),
        Number(1),
    )
    law: Expression = Mul(local(ENZYME), Div(Sub(forward, reverse), denominator))
    if modifier_type is None:
        return law
    for modifier in dict.fromkeys(modifiers):
        constant = local(modifier_constant_id(modifier_type, modifier))
        if modifier_type == QuantityType.KA:
            law = Mul(law, Div(Symbol(modifier), Add(constant, Symbol(modifier))))
        else:
            law = Mul(law, Div(constant, Add(constant, Symbol(modifier))))
    return law


def _median(b: BalancedSet, instance: QuantityInstance, reaction: str) -> float:
    if not b.has(instance):
        raise IncompleteBalance(
            f"balanced set has no {instance.label} for reaction {reaction}",
            {"reaction": reaction, "instance": instance.label},
        )
    return b.median(instance)


def _balanced_reaction(
    reaction: Reaction,
    stoichiometry: dict[str, float],
    b: BalancedSet,
    modifier_type: Optional[QuantityType],
    taken: Collection[str],
) -> Reaction:
    rid = reaction.id
    names = modular_local_ids(taken, stoichiometry, reaction.modifiers, modifier_type)
    values: list[tuple[str, float]] = [
        (names[KCAT_FWD], _median(b, QuantityInstance(QuantityType.KCAT_FWD, rid), rid)),
        (names[KCAT_REV], _median(b, QuantityInstance(QuantityType.KCAT_REV, rid), rid)),
    ]
    for species in stoichiometry:
        instance = QuantityInstance(QuantityType.KM, rid, species)
        values.append((names[km_id(species)], _median(b, instance, rid)))
    if modifier_type is not None:
        for modifier in dict.fromkeys(reaction.modifiers):
            instance = QuantityInstance(modifier_type, rid, modifier)
            constant_id = names[modifier_constant_id(modifier_type, modifier)]
            values.append((constant_id, _median(b, instance, rid)))
    values.append((names[ENZYME], _median(b, QuantityInstance(QuantityType.ENZYME_CONC, rid), rid)))

    return replace(
        reaction,
        kinetic_law=modular_rate_law(stoichiometry, reaction.modifiers, modifier_type, names),
        local_parameters=tuple(Parameter(pid, value) for pid, value in values),
    )


def apply_balanced(
    doc: ModelDocument, b: BalancedSet, config: Optional[BalancingConfig] = None
) -> ModelDocument:
    """Replace every kinetic law by the modular rate law with balanced medians.

    Only kinetic laws and local parameters change.

    Raises:
        IncompleteBalance: ``b`` lacks a quantity some reaction needs
        InvalidModel: ``doc`` has validation errors
    """
    config = config or get_default_balancing_config()
    matrix = stoichiometric_matrix(doc)
    modifier_type = modifier_type_for(config)
    taken = frozenset(doc.all_ids())
    reactions = tuple(
        _balanced_reaction(reaction, matrix.column(reaction.id), b, modifier_type, taken)
        for reaction in doc.reactions
    )
    logger.info(f"Inserted modular rate laws into {len(reactions)} reactions of {doc.id}")
    return require_valid(replace(doc, reactions=reactions))
