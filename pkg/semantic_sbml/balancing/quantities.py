"""
Kinetic quantity catalog: types, scales, canonical units and unit conversion.

Multiplicative quantities are balanced as natural logarithms of their value
in the canonical unit; chemical potentials and affinities stay on their
additive kJ/mol scale.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from ..errors import UnitMismatch, UnknownQuantityType

LOG = "log"
LINEAR = "linear"

MM = "mM"
PER_SECOND = "1/s"
MM_PER_SECOND = "mM/s"
KJ_PER_MOL = "kJ/mol"
DIMENSIONLESS = "dimensionless"


class QuantityType(str, Enum):
    KM = "KM"
    KI = "KI"
    KA = "KA"
    CONC = "Conc"
    STD_CHEM_POTENTIAL = "StdChemPotential"
    VELOCITY_CONST = "VelocityConst"
    ENZYME_CONC = "EnzymeConc"
    KCAT_FWD = "KcatFwd"
    KCAT_REV = "KcatRev"
    KEQ = "Keq"
    VMAX_FWD = "VmaxFwd"
    VMAX_REV = "VmaxRev"
    CHEM_POTENTIAL = "ChemPotential"
    REACTION_AFFINITY = "ReactionAffinity"

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @property
    def scale(self) -> str:
        return LINEAR if self.unit == KJ_PER_MOL else LOG

    @property
    def unit(self) -> str:
        return _UNITS[self]

    @property
    def is_basic(self) -> bool:
        return self in BASIC_TYPES

    @property
    def needs_reaction(self) -> bool:
        return self not in (
            QuantityType.CONC,
            QuantityType.STD_CHEM_POTENTIAL,
            QuantityType.CHEM_POTENTIAL,
        )

    @property
    def needs_species(self) -> bool:
        return self in (
            QuantityType.KM,
            QuantityType.KI,
            QuantityType.KA,
            QuantityType.CONC,
            QuantityType.STD_CHEM_POTENTIAL,
            QuantityType.CHEM_POTENTIAL,
        )

    @classmethod
    def parse(cls, text: str) -> "QuantityType":
        """Look a type up by name or symbol, ignoring case.

        Raises:
            UnknownQuantityType: no type has that name or symbol
        """
        key = text.strip().casefold()
        for quantity_type in cls:
            if key in (quantity_type.value.casefold(), quantity_type.symbol.casefold()):
                return quantity_type
        raise UnknownQuantityType(f"unknown quantity type {text!r}", {"type": text})


_SYMBOLS = {
    QuantityType.KM: "KM",
    QuantityType.KI: "KI",
    QuantityType.KA: "KA",
    QuantityType.CONC: "c",
    QuantityType.STD_CHEM_POTENTIAL: "mu0",
    QuantityType.VELOCITY_CONST: "kV",
    QuantityType.ENZYME_CONC: "u",
    QuantityType.KCAT_FWD: "kcat+",
    QuantityType.KCAT_REV: "kcat-",
    QuantityType.KEQ: "Keq",
    QuantityType.VMAX_FWD: "Vmax+",
    QuantityType.VMAX_REV: "Vmax-",
    QuantityType.CHEM_POTENTIAL: "mu",
    QuantityType.REACTION_AFFINITY: "A",
}

_UNITS = {
    QuantityType.KM: MM,
    QuantityType.KI: MM,
    QuantityType.KA: MM,
    QuantityType.CONC: MM,
    QuantityType.STD_CHEM_POTENTIAL: KJ_PER_MOL,
    QuantityType.VELOCITY_CONST: PER_SECOND,
    QuantityType.ENZYME_CONC: MM,
    QuantityType.KCAT_FWD: PER_SECOND,
    QuantityType.KCAT_REV: PER_SECOND,
    QuantityType.KEQ: DIMENSIONLESS,
    QuantityType.VMAX_FWD: MM_PER_SECOND,
    QuantityType.VMAX_REV: MM_PER_SECOND,
    QuantityType.CHEM_POTENTIAL: KJ_PER_MOL,
    QuantityType.REACTION_AFFINITY: KJ_PER_MOL,
}

#: Basic quantities in the order they appear in the balanced vector
BASIC_TYPES = (
    QuantityType.STD_CHEM_POTENTIAL,
    QuantityType.VELOCITY_CONST,
    QuantityType.KM,
    QuantityType.KA,
    QuantityType.KI,
    QuantityType.CONC,
    QuantityType.ENZYME_CONC,
)

#: Derived quantities in row order after the basics
DERIVED_TYPES = (
    QuantityType.KEQ,
    QuantityType.KCAT_FWD,
    QuantityType.KCAT_REV,
    QuantityType.VMAX_FWD,
    QuantityType.VMAX_REV,
    QuantityType.CHEM_POTENTIAL,
    QuantityType.REACTION_AFFINITY,
)

# Factor converting a value in the given unit to the canonical unit
_CONVERSIONS: dict[str, dict[str, float]] = {
    MM: {"M": 1e3, "mM": 1.0, "µM": 1e-3, "uM": 1e-3, "nM": 1e-6},
    PER_SECOND: {"1/s": 1.0, "s^-1": 1.0, "1/min": 1.0 / 60.0, "min^-1": 1.0 / 60.0},
    MM_PER_SECOND: {
        "M/s": 1e3,
        "mM/s": 1.0,
        "µM/s": 1e-3,
        "uM/s": 1e-3,
        "mM/min": 1.0 / 60.0,
    },
    KJ_PER_MOL: {"kJ/mol": 1.0, "J/mol": 1e-3, "kcal/mol": 4.184},
    DIMENSIONLESS: {"": 1.0, "1": 1.0, DIMENSIONLESS: 1.0},
}


def conversion_factor(quantity_type: QuantityType, unit: str) -> float:
    """Factor taking ``unit`` to the canonical unit of ``quantity_type``.

    An empty unit means the canonical unit.

    Raises:
        UnitMismatch: ``unit`` is not convertible to the canonical unit
    """
    unit = unit.strip()
    if not unit:
        return 1.0
    factors = _CONVERSIONS[quantity_type.unit]
    if unit not in factors:
        raise UnitMismatch(
            f"{quantity_type.value} expects {quantity_type.unit}, got {unit}",
            {"type": quantity_type.value, "unit": unit, "expected": quantity_type.unit},
        )
    return factors[unit]


@dataclass(frozen=True)
class QuantityInstance:
    type: QuantityType
    reaction: Optional[str] = None
    species: Optional[str] = None

    def __post_init__(self) -> None:
        if self.type.needs_reaction != (self.reaction is not None):
            raise ValueError(f"{self.type.value} requires a reaction id iff reaction-bound")
        if self.type.needs_species != (self.species is not None):
            raise ValueError(f"{self.type.value} requires a species id iff species-bound")

    @property
    def label(self) -> str:
        """Printed form, e.g. ``KM(reaction1,A)`` or ``c(A)``."""
        ids = ",".join(i for i in (self.reaction, self.species) if i is not None)
        return f"{self.type.symbol}({ids})"
