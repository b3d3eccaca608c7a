"""Money supply backed by the energy supply capacity of an energy matrix."""

from .errors import (
    ConfigError,
    EscError,
    FormatError,
    InsufficientDataError,
    InvariantViolation,
    OutOfRangeError,
    ScenarioError,
    SeriesError,
    UnitError,
)
from .scenario import (
    Commission,
    Retire,
    Scenario,
    SeasonalProfile,
    SetCoefficient,
    SimulationResult,
    apply_event,
    generate_series,
    simulate,
)
from .series import (
    CapacitySample,
    CapacitySeries,
    canonicalize,
    derivative_of_average,
    value_at,
    window_average,
)
from .standard import (
    EnergyMatrix,
    GrowthAssessment,
    MonetarySnapshot,
    SourceSpec,
    growth_condition,
    money_supply,
    total_abundance,
)
from .timeutil import SECONDS_PER_YEAR, format_timestamp, parse_timestamp, years_to_seconds
from .units import EnergyQuantity, EnergyUnit, MoneyQuantity, convert, format_quantity, parse_quantity

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "EscError",
    "FormatError",
    "InsufficientDataError",
    "InvariantViolation",
    "OutOfRangeError",
    "ScenarioError",
    "SeriesError",
    "UnitError",
    "Commission",
    "Retire",
    "Scenario",
    "SeasonalProfile",
    "SetCoefficient",
    "SimulationResult",
    "apply_event",
    "generate_series",
    "simulate",
    "CapacitySample",
    "CapacitySeries",
    "canonicalize",
    "derivative_of_average",
    "value_at",
    "window_average",
    "EnergyMatrix",
    "GrowthAssessment",
    "MonetarySnapshot",
    "SourceSpec",
    "growth_condition",
    "money_supply",
    "total_abundance",
    "SECONDS_PER_YEAR",
    "format_timestamp",
    "parse_timestamp",
    "years_to_seconds",
    "EnergyQuantity",
    "EnergyUnit",
    "MoneyQuantity",
    "convert",
    "format_quantity",
    "parse_quantity",
]
