"""The energy-supply-capacity monetary standard.

Represented money is the coefficient-weighted sum of each source's trailing
average capacity::

    M(t) = sum_n c_n * <eps_n>_{W_n}(t)        [a.m.u.]
    A(t) = sum_n <eps_n>_{W_n}(t)              [GWy]

With time-independent coefficients, a source ``m`` whose average is falling
must be out-weighed by the others for money to keep growing::

    sum_{s != m} c_s * d<eps_s>/dt  >  -c_m * d<eps_m>/dt

Both that inequality and ``dM/dt > 0`` are strict; ties count as failures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .errors import ConfigError, InvariantViolation
from .series import CapacitySeries, _average, default_derivative_step, derivative_of_average
from .units import EnergyQuantity, EnergyUnit, MoneyQuantity

__all__ = [
    "Compensation",
    "EnergyMatrix",
    "GrowthAssessment",
    "MonetarySnapshot",
    "SourceContribution",
    "SourceSpec",
    "growth_condition",
    "money_supply",
    "total_abundance",
]


@dataclass(frozen=True)
class SourceSpec:
    """One energy source: coefficient ``c`` in a.m.u. per GWy, window in seconds."""

    source_id: str
    c: float
    window: int
    label: str = ""

    def __post_init__(self) -> None:
        if not self.source_id:
            raise ConfigError("source id must be non-empty")
        c = float(self.c)
        if not math.isfinite(c) or c < 0:
            raise ConfigError(f"source {self.source_id!r}: c out of range ({self.c!r}); need finite c >= 0")
        if int(self.window) != self.window or self.window <= 0:
            raise ConfigError(f"source {self.source_id!r}: window must be a positive whole number of seconds")
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "window", int(self.window))
        if not self.label:
            object.__setattr__(self, "label", self.source_id)


class EnergyMatrix:
    """The set of sources backing the currency, each paired with its series."""

    __slots__ = ("_sources", "_series")

    def __init__(self, sources: Iterable[SourceSpec] = (), series: Mapping[str, CapacitySeries] | None = None):
        sources = tuple(sources)
        series = dict(series or {})
        ids = [s.source_id for s in sources]
        seen: set[str] = set()
        for sid in ids:
            if sid in seen:
                raise ConfigError(f"duplicate id {sid!r}")
            seen.add(sid)
        missing = [sid for sid in ids if sid not in series]
        if missing:
            raise ConfigError(f"no series for source(s): {', '.join(missing)}")
        extra = sorted(set(series) - seen)
        if extra:
            raise ConfigError(f"series without a source spec: {', '.join(extra)}")
        for sid, s in series.items():
            if s.source_id != sid:
                raise ConfigError(f"series keyed {sid!r} belongs to source {s.source_id!r}")
        self._sources = sources
        self._series = series

    @property
    def sources(self) -> tuple[SourceSpec, ...]:
        return self._sources

    @property
    def series(self) -> Mapping[str, CapacitySeries]:
        return dict(self._series)

    def __len__(self) -> int:
        return len(self._sources)

    def __contains__(self, source_id: object) -> bool:
        return source_id in self._series

    def __iter__(self):
        for spec in self._sources:
            yield spec, self._series[spec.source_id]

    def spec(self, source_id: str) -> SourceSpec:
        for s in self._sources:
            if s.source_id == source_id:
                return s
        raise KeyError(source_id)

    def with_source(self, spec: SourceSpec, series: CapacitySeries) -> EnergyMatrix:
        return EnergyMatrix(self._sources + (spec,), {**self._series, spec.source_id: series})

    def without(self, source_id: str) -> EnergyMatrix:
        if source_id not in self._series:
            raise KeyError(source_id)
        series = dict(self._series)
        del series[source_id]
        return EnergyMatrix([s for s in self._sources if s.source_id != source_id], series)

    def with_coefficient(self, source_id: str, c: float) -> EnergyMatrix:
        if source_id not in self._series:
            raise KeyError(source_id)
        sources = [replace(s, c=c) if s.source_id == source_id else s for s in self._sources]
        return EnergyMatrix(sources, self._series)

    def scaled(self, k: float) -> EnergyMatrix:
        """Same matrix with every coefficient multiplied by ``k``."""
        return EnergyMatrix([replace(s, c=s.c * k) for s in self._sources], self._series)

    def describe(self) -> tuple[tuple[str, float], ...]:
        return tuple((s.source_id, s.c) for s in self._sources)

    def __repr__(self) -> str:
        return f"EnergyMatrix({list(self.describe())})"


@dataclass(frozen=True)
class SourceContribution:
    source_id: str
    avg_capacity: float  # GWy
    contribution: float  # a.m.u.


@dataclass(frozen=True)
class MonetarySnapshot:
    """Money supply ``M`` (a.m.u.) and abundance ``A_total`` (GWy) at ``t``."""

    t: int
    M: float
    A_total: float
    per_source: tuple[SourceContribution, ...] = ()

    @property
    def money(self) -> MoneyQuantity:
        return MoneyQuantity(self.M)

    @property
    def abundance(self) -> EnergyQuantity:
        return EnergyQuantity(self.A_total, EnergyUnit.GWy)


@dataclass(frozen=True)
class Compensation:
    source_id: str
    lhs: float
    rhs: float
    satisfied: bool


@dataclass(frozen=True)
class GrowthAssessment:
    t: int
    per_source_rate: tuple[tuple[str, float], ...]
    dM_dt: float
    declining: tuple[str, ...] = ()
    compensation: tuple[Compensation, ...] = ()
    overall_growth: bool = field(default=False)

    @property
    def violations(self) -> tuple[str, ...]:
        return tuple(c.source_id for c in self.compensation if not c.satisfied)


def _averages(matrix: EnergyMatrix, t: int) -> list[tuple[SourceSpec, float]]:
    return [(spec, _average(series, t, spec.window)) for spec, series in matrix]


def money_supply(matrix: EnergyMatrix, t: int) -> MonetarySnapshot:
    """Evaluate the money supply and total abundance at ``t``.

    Raises InsufficientDataError if any source's window is not covered;
    there are no partial snapshots.
    """
    averages = _averages(matrix, t)
    per_source = tuple(
        SourceContribution(spec.source_id, avg, spec.c * avg) for spec, avg in averages
    )
    M = math.fsum(p.contribution for p in per_source)
    A = math.fsum(p.avg_capacity for p in per_source)
    return MonetarySnapshot(t, M, A, per_source)


def total_abundance(matrix: EnergyMatrix, t: int) -> EnergyQuantity:
    return EnergyQuantity(math.fsum(avg for _, avg in _averages(matrix, t)), EnergyUnit.GWy)


def growth_condition(matrix: EnergyMatrix, t: int, h: int | None = None) -> GrowthAssessment:
    """Assess monetary growth at ``t``.

    ``h`` is the central-difference step in seconds; when omitted each source
    uses one twentieth of its own window. A compensation entry is produced
    for every source whose average is declining.
    """
    rates: list[tuple[SourceSpec, float]] = []
    for spec, series in matrix:
        step = default_derivative_step(spec.window) if h is None else h
        rates.append((spec, derivative_of_average(series, t, spec.window, step)))
    terms = [spec.c * rate for spec, rate in rates]
    dM_dt = math.fsum(terms)
    declining: list[str] = []
    compensation: list[Compensation] = []
    for i, (spec, rate) in enumerate(rates):
        if rate < 0:
            declining.append(spec.source_id)
            lhs = math.fsum(terms[:i] + terms[i + 1 :])
            rhs = -terms[i]
            compensation.append(Compensation(spec.source_id, lhs, rhs, lhs > rhs))
    return GrowthAssessment(
        t=t,
        per_source_rate=tuple((spec.source_id, rate) for spec, rate in rates),
        dM_dt=dM_dt,
        declining=tuple(declining),
        compensation=tuple(compensation),
        overall_growth=dM_dt > 0,
    )


def check_snapshot(snapshot: MonetarySnapshot) -> None:
    """Raise InvariantViolation if a snapshot's totals disagree with its parts."""
    M = math.fsum(p.contribution for p in snapshot.per_source)
    A = math.fsum(p.avg_capacity for p in snapshot.per_source)
    if not math.isclose(M, snapshot.M, rel_tol=1e-12, abs_tol=0.0) and M != snapshot.M:
        raise InvariantViolation(f"M={snapshot.M!r} but contributions sum to {M!r}")
    if not math.isclose(A, snapshot.A_total, rel_tol=1e-12, abs_tol=0.0) and A != snapshot.A_total:
        raise InvariantViolation(f"A_total={snapshot.A_total!r} but averages sum to {A!r}")
