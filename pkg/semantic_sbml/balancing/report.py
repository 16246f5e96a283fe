"""
Balance report: one row per quantity instance plus the consistency residuals.

TSV columns::

    instance  unit  prior_median  data_value  posterior_median  posterior_std

``posterior_std`` is a natural-log standard deviation for multiplicative
quantities and kJ/mol otherwise. Empty cells mean "none".
"""

import json
from dataclasses import dataclass
from typing import Any, Optional

import numpy as np

from ..model.expression import format_number
from .data import Observation
from .problem import BalancingProblem
from .quantities import LOG, QuantityInstance
from .solver import BalancedSet, ConsistencyReport, consistency_report

REPORT_COLUMNS = (
    "instance",
    "unit",
    "prior_median",
    "data_value",
    "posterior_median",
    "posterior_std",
)


def _natural(instance: QuantityInstance, mean: float) -> float:
    return float(np.exp(mean)) if instance.type.scale == LOG else float(mean)


def _data_value(instance: QuantityInstance, observed: list[Observation]) -> Optional[float]:
    if not observed:
        return None
    if len(observed) == 1:
        return observed[0].value
    return _natural(instance, float(np.mean([o.mean for o in observed])))


@dataclass(frozen=True)
class ReportRow:
    instance: QuantityInstance
    prior_median: Optional[float]
    data_value: Optional[float]
    posterior_median: float
    posterior_std: float

    def cells(self) -> list[str]:
        def text(value: Optional[float]) -> str:
            return "" if value is None else format_number(value)

        return [
            self.instance.label,
            self.instance.type.unit,
            text(self.prior_median),
            text(self.data_value),
            text(self.posterior_median),
            text(self.posterior_std),
        ]

    def to_dict(self) -> dict[str, Any]:
        return {
            "instance": self.instance.label,
            "type": self.instance.type.value,
            "reaction": self.instance.reaction,
            "species": self.instance.species,
            "unit": self.instance.type.unit,
            "prior_median": self.prior_median,
            "data_value": self.data_value,
            "posterior_median": self.posterior_median,
            "posterior_std": self.posterior_std,
        }


@dataclass(frozen=True)
class BalanceReport:
    rows: tuple[ReportRow, ...]
    consistency: ConsistencyReport

    def to_tsv(self) -> str:
        lines = ["# " + "\t".join(REPORT_COLUMNS)]
        lines.extend("\t".join(row.cells()) for row in self.rows)
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "quantities": [row.to_dict() for row in self.rows],
            "consistency": self.consistency.to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def balance_report(p: BalancingProblem, b: BalancedSet) -> BalanceReport:
    """Tabulate priors (pseudo medians for derived rows), data and posteriors.

    The data column holds the geometric mean of all data rows for an
    instance (arithmetic mean on the kJ/mol scale).
    """
    data: dict[QuantityInstance, list[Observation]] = {}
    for observation in p.data:
        data.setdefault(observation.instance, []).append(observation)
    pseudo = {observation.instance: observation.value for observation in p.pseudo}

    rows = []
    for i, instance in enumerate(p.instances):
        if i < p.n_basic:
            prior: Optional[float] = p.prior_median[i]
        else:
            prior = pseudo.get(instance)
        observed = data.get(instance, [])
        rows.append(
            ReportRow(
                instance=instance,
                prior_median=prior,
                data_value=_data_value(instance, observed),
                posterior_median=b.median(instance),
                posterior_std=b.std(instance),
            )
        )
    return BalanceReport(tuple(rows), consistency_report(p, b))
