"""
Linear-Gaussian posterior over the basic quantities and consistency checks.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from ..errors import NumericalFailure, SingularSystem
from .problem import BalancingProblem
from .quantities import LOG, QuantityInstance, QuantityType

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class BalancedSet:
    instances: tuple[QuantityInstance, ...]
    n_basic: int
    #: Posterior mean of every row of Q (ln scale for multiplicative types)
    posterior_mean: np.ndarray
    #: Posterior covariance over the basics
    posterior_cov: np.ndarray
    #: Posterior standard deviation of every row of Q
    posterior_std: np.ndarray

    @cached_property
    def _index(self) -> dict[QuantityInstance, int]:
        return {instance: i for i, instance in enumerate(self.instances)}

    def has(self, instance: QuantityInstance) -> bool:
        return instance in self._index

    def mean(self, instance: QuantityInstance) -> float:
        return float(self.posterior_mean[self._index[instance]])

    def std(self, instance: QuantityInstance) -> float:
        return float(self.posterior_std[self._index[instance]])

    def median(self, instance: QuantityInstance) -> float:
        """Posterior median in the canonical unit."""
        value = self.mean(instance)
        return float(np.exp(value)) if instance.type.scale == LOG else value

    def medians(self) -> dict[str, float]:
        return {instance.label: self.median(instance) for instance in self.instances}


def _posterior(p: BalancingProblem) -> tuple[np.ndarray, np.ndarray]:
    observations = p.observations
    if not observations:
        return p.prior_mean.copy(), np.diag(p.prior_std**2)

    rows = np.array([p.row(o.instance) for o in observations], dtype=int)
    y = np.array([o.mean for o in observations])
    data_std = np.array([o.std for o in observations])
    if np.any(p.prior_std <= 0) or np.any(data_std <= 0):
        raise SingularSystem("standard deviations must be positive")

    design = p.dependence[rows]
    prior_precision = 1.0 / p.prior_std**2
    weights = 1.0 / data_std**2
    precision = np.diag(prior_precision) + design.T @ (weights[:, np.newaxis] * design)
    rhs = prior_precision * p.prior_mean + design.T @ (weights * y)
    try:
        factor = cho_factor(precision, lower=True)
        mean = cho_solve(factor, rhs)
        cov = cho_solve(factor, np.eye(p.n_basic))
    except (LinAlgError, ValueError) as e:
        raise NumericalFailure(f"posterior factorization failed: {e}") from None
    cov = 0.5 * (cov + cov.T)
    return mean, cov


def balance(p: BalancingProblem) -> BalancedSet:
    """Posterior over all quantities given the priors, data and pseudo rows.

    With no observations the posterior is the prior, returned unchanged.

    Raises:
        SingularSystem: a standard deviation is not positive
        NumericalFailure: the posterior precision cannot be factorized
    """
    mean, cov = _posterior(p)
    full_mean = p.dependence @ mean
    full_var = np.einsum("ij,jk,ik->i", p.dependence, cov, p.dependence)
    if not (np.all(np.isfinite(full_mean)) and np.all(np.isfinite(cov))):
        raise NumericalFailure("posterior is not finite")
    logger.debug(
        f"Balanced {p.n_basic} basics against {len(p.observations)} observations"
    )
    return BalancedSet(
        instances=p.instances,
        n_basic=p.n_basic,
        posterior_mean=full_mean,
        posterior_cov=cov,
        posterior_std=np.sqrt(np.clip(full_var, 0.0, None)),
    )


@dataclass(frozen=True)
class ConsistencyReport:
    #: (cycle coefficients over reactions, |c . ln Keq|)
    wegscheider: tuple[tuple[tuple[float, ...], float], ...]
    haldane: dict[str, float]
    vmax: dict[str, float]

    @property
    def max_wegscheider(self) -> float:
        return max((residual for _, residual in self.wegscheider), default=0.0)

    @property
    def max_haldane(self) -> float:
        return max(self.haldane.values(), default=0.0)

    @property
    def max_vmax(self) -> float:
        return max(self.vmax.values(), default=0.0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "max_wegscheider": self.max_wegscheider,
            "max_haldane": self.max_haldane,
            "max_vmax": self.max_vmax,
            "wegscheider": [
                {"cycle": list(cycle), "residual": residual}
                for cycle, residual in self.wegscheider
            ],
            "haldane": dict(self.haldane),
            "vmax": dict(self.vmax),
        }


def consistency_report(p: BalancingProblem, b: BalancedSet) -> ConsistencyReport:
    """Residuals of the Wegscheider, Haldane and Vmax relations on ``b``."""
    matrix = p.stoichiometry

    def ln(quantity_type: QuantityType, reaction: str, species: Optional[str] = None) -> float:
        return b.mean(QuantityInstance(quantity_type, reaction, species))

    ln_keq = np.array([ln(QuantityType.KEQ, r) for r in matrix.reactions])
    cycles = matrix.cycles()
    wegscheider = tuple(
        (tuple(float(x) for x in cycles[:, k]), float(abs(cycles[:, k] @ ln_keq)))
        for k in range(cycles.shape[1])
    )

    haldane: dict[str, float] = {}
    vmax: dict[str, float] = {}
    for reaction in matrix.reactions:
        km_sum = sum(
            n * ln(QuantityType.KM, reaction, species)
            for species, n in matrix.column(reaction).items()
        )
        haldane[reaction] = abs(
            ln(QuantityType.KCAT_FWD, reaction)
            - ln(QuantityType.KCAT_REV, reaction)
            - ln(QuantityType.KEQ, reaction)
            + km_sum
        )
        ln_u = ln(QuantityType.ENZYME_CONC, reaction)
        vmax[reaction] = max(
            abs(ln(QuantityType.VMAX_FWD, reaction) - ln(QuantityType.KCAT_FWD, reaction) - ln_u),
            abs(ln(QuantityType.VMAX_REV, reaction) - ln(QuantityType.KCAT_REV, reaction) - ln_u),
        )
    return ConsistencyReport(wegscheider, haldane, vmax)
