"""
Bayesian parameter balancing and modular rate-law insertion.
"""

from .config import (
    DEFAULT_RT,
    BalancingConfig,
    PriorSpec,
    PseudoSpec,
    balancing_config_from_dict,
    get_default_balancing_config,
    load_balancing_config,
)
from .data import Observation, parse_data
from .problem import BalancingProblem, build_problem
from .quantities import QuantityInstance, QuantityType
from .ratelaw import apply_balanced, modular_rate_law
from .report import BalanceReport, balance_report
from .solver import BalancedSet, ConsistencyReport, balance, consistency_report

__all__ = [
    "BalanceReport",
    "BalancedSet",
    "BalancingConfig",
    "BalancingProblem",
    "ConsistencyReport",
    "DEFAULT_RT",
    "Observation",
    "PriorSpec",
    "PseudoSpec",
    "QuantityInstance",
    "QuantityType",
    "apply_balanced",
    "balance",
    "balance_report",
    "balancing_config_from_dict",
    "build_problem",
    "consistency_report",
    "get_default_balancing_config",
    "load_balancing_config",
    "modular_rate_law",
    "parse_data",
]
