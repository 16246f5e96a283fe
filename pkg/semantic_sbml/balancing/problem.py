"""
Balancing problem assembly.

The balanced vector q holds the basic quantities: standard chemical
potentials, velocity constants, Michaelis constants, optional activation or
inhibition constants, concentrations and enzyme levels. Every derived
quantity is a fixed linear combination of q::

    ln Keq_r    = -(1/RT) * sum_i n_ri * mu0_i
    ln kcat+_r  = ln kV_r + (ln Keq_r - sum_i n_ri * ln KM_ri) / 2
    ln kcat-_r  = ln kV_r - (ln Keq_r - sum_i n_ri * ln KM_ri) / 2
    ln Vmax+-_r = ln kcat+-_r + ln u_r
    mu_i        = mu0_i + RT * ln c_i
    A_r         = -sum_i n_ri * mu_i
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np

from ..errors import DataFormatError, UnknownElementId
from ..model.document import ModelDocument
from ..model.stoichiometry import StoichiometricMatrix, stoichiometric_matrix
from .config import BalancingConfig, get_default_balancing_config
from .data import Observation, parse_data
from .quantities import DERIVED_TYPES, LOG, QuantityInstance, QuantityType

logger = logging.getLogger(__name__)

DataSource = Union[str, bytes, Iterable[Observation], None]


@dataclass(frozen=True, eq=False)
class BalancingProblem:
    #: Basic instances followed by derived instances; one row of Q each
    instances: tuple[QuantityInstance, ...]
    n_basic: int
    #: Q, rows x basics; the top block is the identity
    dependence: np.ndarray
    prior_mean: np.ndarray
    prior_std: np.ndarray
    #: Prior medians in the canonical unit, as configured
    prior_median: tuple[float, ...]
    data: tuple[Observation, ...]
    pseudo: tuple[Observation, ...]
    rt: float
    stoichiometry: StoichiometricMatrix

    @property
    def basics(self) -> tuple[QuantityInstance, ...]:
        return self.instances[: self.n_basic]

    @property
    def derived(self) -> tuple[QuantityInstance, ...]:
        return self.instances[self.n_basic :]

    def row(self, instance: QuantityInstance) -> int:
        return self._index[instance]

    def has(self, instance: QuantityInstance) -> bool:
        return instance in self._index

    @property
    def observations(self) -> tuple[Observation, ...]:
        return self.data + self.pseudo

    @cached_property
    def _index(self) -> dict[QuantityInstance, int]:
        return {instance: i for i, instance in enumerate(self.instances)}


def modifier_type_for(config: BalancingConfig) -> Optional[QuantityType]:
    if config.modifier_mode == "activation":
        return QuantityType.KA
    if config.modifier_mode == "inhibition":
        return QuantityType.KI
    return None


def enumerate_basics(
    doc: ModelDocument,
    config: BalancingConfig,
    matrix: Optional[StoichiometricMatrix] = None,
) -> list[QuantityInstance]:
    """Basic instances in balanced-vector order."""
    matrix = matrix or stoichiometric_matrix(doc)
    basics = [QuantityInstance(QuantityType.STD_CHEM_POTENTIAL, species=s) for s in matrix.species]
    basics += [QuantityInstance(QuantityType.VELOCITY_CONST, reaction=r) for r in matrix.reactions]
    for reaction in matrix.reactions:
        basics += [
            QuantityInstance(QuantityType.KM, reaction, species)
            for species in matrix.column(reaction)
        ]
    modifier_type = modifier_type_for(config)
    if modifier_type is not None:
        for reaction in doc.reactions:
            basics += [
                QuantityInstance(modifier_type, reaction.id, modifier)
                for modifier in dict.fromkeys(reaction.modifiers)
            ]
    basics += [QuantityInstance(QuantityType.CONC, species=s) for s in matrix.species]
    basics += [QuantityInstance(QuantityType.ENZYME_CONC, reaction=r) for r in matrix.reactions]
    return basics


class _RowBuilder:
    def __init__(self, basics: list[QuantityInstance], rt: float) -> None:
        self.basics = basics
        self.rt = rt
        self.column = {instance: j for j, instance in enumerate(basics)}

    def unit(self, instance: QuantityInstance) -> np.ndarray:
        row = np.zeros(len(self.basics))
        row[self.column[instance]] = 1.0
        return row

    def ln_keq(self, stoichiometry: dict[str, float]) -> np.ndarray:
        row = np.zeros(len(self.basics))
        for species, n in stoichiometry.items():
            mu0 = QuantityInstance(QuantityType.STD_CHEM_POTENTIAL, species=species)
            row -= n / self.rt * self.unit(mu0)
        return row

    def haldane(self, reaction: str, stoichiometry: dict[str, float]) -> np.ndarray:
        row = self.ln_keq(stoichiometry)
        for species, n in stoichiometry.items():
            row -= n * self.unit(QuantityInstance(QuantityType.KM, reaction, species))
        return row

    def mu(self, species: str) -> np.ndarray:
        return self.unit(
            QuantityInstance(QuantityType.STD_CHEM_POTENTIAL, species=species)
        ) + self.rt * self.unit(QuantityInstance(QuantityType.CONC, species=species))


def _derived_rows(
    builder: _RowBuilder, matrix: StoichiometricMatrix
) -> list[tuple[QuantityInstance, np.ndarray]]:
    rows: dict[QuantityType, list[tuple[QuantityInstance, np.ndarray]]] = {}

    def add(quantity_type: QuantityType, row: np.ndarray, **ids: str) -> None:
        rows.setdefault(quantity_type, []).append((QuantityInstance(quantity_type, **ids), row))

    for reaction in matrix.reactions:
        n = matrix.column(reaction)
        kv = builder.unit(QuantityInstance(QuantityType.VELOCITY_CONST, reaction=reaction))
        u = builder.unit(QuantityInstance(QuantityType.ENZYME_CONC, reaction=reaction))
        haldane = builder.haldane(reaction, n)
        kcat_fwd = kv + 0.5 * haldane
        kcat_rev = kv - 0.5 * haldane
        add(QuantityType.KEQ, builder.ln_keq(n), reaction=reaction)
        add(QuantityType.KCAT_FWD, kcat_fwd, reaction=reaction)
        add(QuantityType.KCAT_REV, kcat_rev, reaction=reaction)
        add(QuantityType.VMAX_FWD, kcat_fwd + u, reaction=reaction)
        add(QuantityType.VMAX_REV, kcat_rev + u, reaction=reaction)
    for species in matrix.species:
        add(QuantityType.CHEM_POTENTIAL, builder.mu(species), species=species)
    for reaction in matrix.reactions:
        affinity = np.zeros(len(builder.basics))
        for species, n in matrix.column(reaction).items():
            affinity -= n * builder.mu(species)
        add(QuantityType.REACTION_AFFINITY, affinity, reaction=reaction)

    ordered: list[tuple[QuantityInstance, np.ndarray]] = []
    for quantity_type in DERIVED_TYPES:
        ordered.extend(rows.get(quantity_type, []))
    return ordered


def _check_observation(
    observation: Observation, doc: ModelDocument, index: dict[QuantityInstance, int]
) -> None:
    instance = observation.instance
    reactions = {r.id for r in doc.reactions}
    species = {s.id for s in doc.species}
    if instance.reaction is not None and instance.reaction not in reactions:
        raise UnknownElementId(
            f"line {observation.line}: no reaction {instance.reaction}",
            {"line": observation.line, "id": instance.reaction},
        )
    if instance.species is not None and instance.species not in species:
        raise UnknownElementId(
            f"line {observation.line}: no species {instance.species}",
            {"line": observation.line, "id": instance.species},
        )
    if instance not in index:
        raise DataFormatError(
            f"line {observation.line}: {instance.label} is not a quantity of this model",
            {"line": observation.line, "instance": instance.label},
        )


def build_problem(
    doc: ModelDocument,
    data: DataSource = None,
    config: Optional[BalancingConfig] = None,
) -> BalancingProblem:
    """Assemble q, Q, priors, data rows and pseudo rows for ``doc``.

    Args:
        doc: Model to balance
        data: Kinetic data table text, parsed observations, or None
        config: Balancing configuration (defaults when None)

    Raises:
        InvalidModel: ``doc`` has validation errors
        UnknownQuantityType, UnitMismatch, NonPositiveValueForLogScale,
        DataFormatError: bad data rows
        UnknownElementId: a data row names an id the model lacks
    """
    config = config or get_default_balancing_config()
    matrix = stoichiometric_matrix(doc)
    basics = enumerate_basics(doc, config, matrix)
    builder = _RowBuilder(basics, config.rt)
    derived = _derived_rows(builder, matrix)

    instances = tuple(basics) + tuple(instance for instance, _ in derived)
    dependence = np.vstack([np.eye(len(basics))] + [row[np.newaxis, :] for _, row in derived])
    index = {instance: i for i, instance in enumerate(instances)}

    prior_mean = np.empty(len(basics))
    prior_std = np.empty(len(basics))
    for j, instance in enumerate(basics):
        prior = config.priors[instance.type]
        log_scale = instance.type.scale == LOG
        prior_mean[j] = np.log(prior.median) if log_scale else prior.median
        prior_std[j] = prior.std

    if data is None:
        observations: list[Observation] = []
    elif isinstance(data, (str, bytes)):
        observations = parse_data(data)
    else:
        observations = list(data)
    for observation in observations:
        _check_observation(observation, doc, index)

    observed = {observation.instance for observation in observations}
    pseudo = []
    for instance, _ in derived:
        spec = config.pseudo_for(instance.type)
        if spec is not None and instance not in observed:
            pseudo.append(Observation(instance, spec.median, spec.std))

    logger.debug(
        f"Balancing {doc.id}: {len(basics)} basics, {len(derived)} derived,"
        f" {len(observations)} data rows, {len(pseudo)} pseudo rows"
    )
    return BalancingProblem(
        instances=instances,
        n_basic=len(basics),
        dependence=dependence,
        prior_mean=prior_mean,
        prior_std=prior_std,
        prior_median=tuple(config.priors[instance.type].median for instance in basics),
        data=tuple(observations),
        pseudo=tuple(pseudo),
        rt=config.rt,
        stoichiometry=matrix,
    )
