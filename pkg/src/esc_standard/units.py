"""Energy units and quantities.

Every unit is stored as an exact integer multiple of the kilowatt-hour. A
year is 8760 hours, so ``1 GWy == 8760 GWh`` exactly. Conversions form the
exact rational product ``magnitude * ratio`` and round it once to the nearest
double, which keeps conversion chains consistent and free of drift.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import UnitError
from .timeutil import HOURS_PER_YEAR

__all__ = [
    "AMU",
    "EnergyQuantity",
    "EnergyUnit",
    "MoneyQuantity",
    "conversion_factor",
    "convert",
    "format_quantity",
    "parse_quantity",
    "parse_unit",
]

AMU = "a.m.u."


class EnergyUnit(str, Enum):
    kWh = "kWh"
    MWh = "MWh"
    GWh = "GWh"
    TWh = "TWh"
    GWy = "GWy"
    TWy = "TWy"

    def __str__(self) -> str:
        return self.value

    @property
    def kwh(self) -> int:
        """Size of this unit in kilowatt-hours."""
        return _KWH_PER_UNIT[self]


_KWH_PER_UNIT: dict[EnergyUnit, int] = {
    EnergyUnit.kWh: 1,
    EnergyUnit.MWh: 10**3,
    EnergyUnit.GWh: 10**6,
    EnergyUnit.TWh: 10**9,
    EnergyUnit.GWy: HOURS_PER_YEAR * 10**6,
    EnergyUnit.TWy: HOURS_PER_YEAR * 10**9,
}


def parse_unit(tag: str) -> EnergyUnit:
    """Look up a unit tag; tags are case-sensitive."""
    try:
        return EnergyUnit(tag)
    except ValueError:
        raise UnitError("unknown unit tag", tag) from None


def conversion_factor(source: EnergyUnit, target: EnergyUnit) -> Fraction:
    return Fraction(source.kwh, target.kwh)


@dataclass(frozen=True)
class EnergyQuantity:
    magnitude: float
    unit: EnergyUnit

    def __post_init__(self) -> None:
        if not isinstance(self.unit, EnergyUnit):
            object.__setattr__(self, "unit", parse_unit(self.unit))
        magnitude = float(self.magnitude)
        if not math.isfinite(magnitude):
            raise UnitError("energy magnitude must be finite", repr(self.magnitude))
        object.__setattr__(self, "magnitude", magnitude)

    def to(self, target: EnergyUnit | str) -> EnergyQuantity:
        return convert(self, target)

    def __str__(self) -> str:
        return format_quantity(self)


@dataclass(frozen=True)
class MoneyQuantity:
    """An amount in the arbitrary monetary unit. The unit has no subdivisions."""

    magnitude: float

    def __post_init__(self) -> None:
        magnitude = float(self.magnitude)
        if not math.isfinite(magnitude):
            raise ValueError(f"money magnitude must be finite, got {self.magnitude!r}")
        object.__setattr__(self, "magnitude", magnitude)

    @property
    def unit(self) -> str:
        return AMU

    def __str__(self) -> str:
        return f"{self.magnitude!r} {AMU}"


def _scale(magnitude: float, ratio: Fraction) -> float:
    if ratio == 1:
        return magnitude
    return float(Fraction(magnitude) * ratio)


def convert(q: EnergyQuantity, target: EnergyUnit | str) -> EnergyQuantity:
    """Express ``q`` in ``target`` units.

    >>> convert(EnergyQuantity(1, EnergyUnit.GWy), EnergyUnit.GWh)
    EnergyQuantity(magnitude=8760.0, unit=<EnergyUnit.GWh: 'GWh'>)
    """
    if not isinstance(target, EnergyUnit):
        target = parse_unit(target)
    return EnergyQuantity(_scale(q.magnitude, conversion_factor(q.unit, target)), target)


def to_gwy(magnitude: float, unit: EnergyUnit) -> float:
    return _scale(float(magnitude), conversion_factor(unit, EnergyUnit.GWy))


_QUANTITY_RE = re.compile(r"^\s*(?P<num>\S*?)\s*(?P<unit>[A-Za-z.]+)\s*$")
_NUMBER_RE = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")


def parse_number(token: str) -> float:
    if not _NUMBER_RE.match(token):
        raise UnitError("malformed number", token)
    value = float(token)
    if not math.isfinite(value):
        raise UnitError("malformed number", token)
    return value


def parse_quantity(text: str) -> EnergyQuantity:
    """Parse ``"<decimal>[ ]<unit>"``, e.g. ``"8760GWh"`` or ``"1 GWy"``."""
    m = _QUANTITY_RE.match(text)
    if m is None:
        raise UnitError("expected '<number> <unit>'", text)
    unit = parse_unit(m.group("unit"))
    return EnergyQuantity(parse_number(m.group("num")), unit)


def format_quantity(q: EnergyQuantity) -> str:
    """Render ``q`` so that :func:`parse_quantity` recovers it exactly."""
    return f"{q.magnitude!r} {q.unit.value}"
