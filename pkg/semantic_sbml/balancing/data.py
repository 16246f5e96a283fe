"""
Kinetic data table reader.

Tab-separated columns::

    QuantityType  ReactionID  SpeciesID  Value  Std  Unit

Value is the median in the given unit. Std is a natural-log standard
deviation for multiplicative quantities and a standard deviation in the
given unit for kJ/mol quantities. Lines starting with ``#`` and blank lines
are skipped; a first row starting with ``QuantityType`` is a header.
"""

import logging
import math
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Optional, Union

from ..errors import DataFormatError, NonPositiveValueForLogScale
from .quantities import LOG, QuantityInstance, QuantityType, conversion_factor

logger = logging.getLogger(__name__)

DATA_COLUMNS = ("QuantityType", "ReactionID", "SpeciesID", "Value", "Std", "Unit")


@dataclass(frozen=True)
class Observation:
    """One measured value in canonical units."""

    instance: QuantityInstance
    value: float
    std: float
    line: int = 0

    @property
    def mean(self) -> float:
        """Observation on the balancing scale (ln value for multiplicative types)."""
        return math.log(self.value) if self.instance.type.scale == LOG else self.value


def _number(text: str, column: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise DataFormatError(
            f"line {line}: {column} {text!r} is not a number", {"line": line}
        ) from None
    if not math.isfinite(value):
        raise DataFormatError(f"line {line}: {column} must be finite", {"line": line})
    return value


def parse_data_line(text: str, line: int) -> Optional[Observation]:
    """Parse one data row; None for blank, comment and header lines.

    Raises:
        UnknownQuantityType: unknown first column
        UnitMismatch: unit not convertible to the canonical unit
        NonPositiveValueForLogScale: value <= 0 for a multiplicative type
        DataFormatError: wrong column count, ids or numbers
    """
    if not text.strip() or text.lstrip().startswith("#"):
        return None
    columns = [c.strip() for c in text.rstrip("\r\n").split("\t")]
    if columns[0] == DATA_COLUMNS[0]:
        return None
    if not 5 <= len(columns) <= 6:
        raise DataFormatError(
            f"line {line}: expected 5 or 6 tab-separated columns, found {len(columns)}",
            {"line": line},
        )
    columns += [""] * (6 - len(columns))
    type_text, reaction, species, value_text, std_text, unit = columns

    quantity_type = QuantityType.parse(type_text)
    try:
        instance = QuantityInstance(quantity_type, reaction or None, species or None)
    except ValueError as e:
        raise DataFormatError(f"line {line}: {e}", {"line": line}) from None

    factor = conversion_factor(quantity_type, unit)
    value = _number(value_text, "Value", line) * factor
    std = _number(std_text, "Std", line)
    if std <= 0:
        raise DataFormatError(f"line {line}: Std must be positive", {"line": line})
    if quantity_type.scale == LOG:
        if value <= 0:
            raise NonPositiveValueForLogScale(
                f"line {line}: {quantity_type.value} value must be positive", {"line": line}
            )
    else:
        std *= factor
    return Observation(instance, value, std, line)


def parse_data(data: Union[str, bytes, Iterable[str]]) -> list[Observation]:
    """Parse a kinetic data table; the first bad row raises."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.splitlines() if isinstance(data, str) else list(data)
    observations = []
    for number, text in enumerate(lines, start=1):
        observation = parse_data_line(text, number)
        if observation is not None:
            observations.append(observation)
    logger.debug(f"Read {len(observations)} kinetic data rows")
    return observations
