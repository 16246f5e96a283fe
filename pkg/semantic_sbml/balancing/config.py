"""
Parameter balancing configuration.

Defaults reproduce the standard prior and pseudo-value table: medians for
multiplicative quantities in their canonical unit, spreads as natural-log
standard deviations; chemical potentials in kJ/mol.
"""

import json
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from ..errors import DataFormatError, UnknownQuantityType
from .quantities import BASIC_TYPES, DERIVED_TYPES, LOG, QuantityType

#: RT in kJ/mol at 298.15 K
DEFAULT_RT = 2.4790

ModifierMode = Literal["none", "activation", "inhibition"]


class PriorSpec(BaseModel):
    median: float
    std: float = Field(gt=0)


class PseudoSpec(BaseModel):
    enabled: bool = True
    median: float
    std: float = Field(gt=0)


class BalancingConfig(BaseModel):
    rt: float = Field(default=DEFAULT_RT, gt=0)
    priors: dict[QuantityType, PriorSpec]
    pseudo: dict[QuantityType, PseudoSpec]
    #: Master switch for pseudo observations
    use_pseudo_values: bool = True
    modifier_mode: ModifierMode = "none"

    @model_validator(mode="after")
    def _check_tables(self) -> "BalancingConfig":
        for quantity_type in BASIC_TYPES:
            if quantity_type not in self.priors:
                raise ValueError(f"no prior for {quantity_type.value}")
        for quantity_type, spec in self.priors.items():
            if not quantity_type.is_basic:
                raise ValueError(f"{quantity_type.value} is derived and takes no prior")
            if quantity_type.scale == LOG and spec.median <= 0:
                raise ValueError(f"prior median for {quantity_type.value} must be positive")
        for quantity_type, pseudo in self.pseudo.items():
            if quantity_type not in DERIVED_TYPES:
                raise ValueError(f"{quantity_type.value} is basic and takes no pseudo value")
            if quantity_type.scale == LOG and pseudo.median <= 0:
                raise ValueError(f"pseudo median for {quantity_type.value} must be positive")
        return self

    def pseudo_for(self, quantity_type: QuantityType) -> Optional[PseudoSpec]:
        """Pseudo spec in effect for a derived type, None when disabled."""
        if not self.use_pseudo_values:
            return None
        spec = self.pseudo.get(quantity_type)
        return spec if spec is not None and spec.enabled else None


def get_default_balancing_config() -> BalancingConfig:
    """
    Get the default balancing configuration.

    Returns:
        Config with the standard prior medians, unit ln-std spreads, a weak
        N(0, 500) prior on standard chemical potentials and all pseudo values
        enabled
    """
    return BalancingConfig(
        priors={
            QuantityType.KM: PriorSpec(median=0.1, std=1.0),
            QuantityType.KI: PriorSpec(median=0.1, std=1.0),
            QuantityType.KA: PriorSpec(median=0.1, std=1.0),
            QuantityType.CONC: PriorSpec(median=0.1, std=1.0),
            QuantityType.STD_CHEM_POTENTIAL: PriorSpec(median=0.0, std=500.0),
            QuantityType.VELOCITY_CONST: PriorSpec(median=10.0, std=1.0),
            QuantityType.ENZYME_CONC: PriorSpec(median=0.0001, std=1.0),
        },
        pseudo={
            QuantityType.KCAT_FWD: PseudoSpec(median=10.0, std=2.0),
            QuantityType.KCAT_REV: PseudoSpec(median=10.0, std=2.0),
            QuantityType.KEQ: PseudoSpec(median=1.0, std=2.0),
            QuantityType.VMAX_FWD: PseudoSpec(median=0.001, std=2.0),
            QuantityType.VMAX_REV: PseudoSpec(median=0.001, std=2.0),
            QuantityType.REACTION_AFFINITY: PseudoSpec(median=0.0, std=20.0),
            QuantityType.CHEM_POTENTIAL: PseudoSpec(median=0.0, std=20.0),
        },
    )


def balancing_config_from_dict(overrides: dict[str, Any]) -> BalancingConfig:
    """Default config updated from a JSON-style dict.

    ``priors`` and ``pseudo`` entries are merged per quantity type into the
    default tables.

    Raises:
        DataFormatError: unknown quantity type or failed validation
    """
    overrides = dict(overrides)
    base = get_default_balancing_config().model_dump(mode="json")
    for table in ("priors", "pseudo"):
        for key, spec in (overrides.pop(table, None) or {}).items():
            try:
                name = QuantityType.parse(key).value
            except UnknownQuantityType as e:
                raise DataFormatError(f"balancing config {table}: {e}") from None
            base[table][name] = {**base[table].get(name, {}), **spec}
    base.update(overrides)
    try:
        return BalancingConfig.model_validate(base)
    except ValidationError as e:
        raise DataFormatError(f"invalid balancing config: {e}") from None


def load_balancing_config(path: Union[str, Path]) -> BalancingConfig:
    """Load a JSON config file; keys it omits keep their defaults.

    Raises:
        DataFormatError: the file is not valid JSON or fails validation
    """
    try:
        overrides = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise DataFormatError(f"cannot read balancing config {path}: {e}") from None
    if not isinstance(overrides, dict):
        raise DataFormatError("balancing config must be a JSON object")
    return balancing_config_from_dict(overrides)
