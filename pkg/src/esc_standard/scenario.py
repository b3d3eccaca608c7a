"""Synthetic energy matrices evolving through discrete events.

Timeline rules used by :func:`simulate`:

* Retire and SetCoefficient take effect exactly at their ``at``; an
  evaluation at that instant sees the post-event matrix.
* A commissioned source generates samples from its ``at`` onward but joins
  the matrix only when its trailing window is covered by its own samples,
  at ``at + window``. Activations at a given instant are applied before
  events at the same instant; events at one instant apply in file order.
* Every change of the active source set or of a coefficient starts a new
  epoch. A derivative stencil ``[t - h, t + h]`` that leaves the current
  epoch yields a snapshot without an assessment.
* Evaluations at the start of the run are skipped while any source's window
  plus derivative stencil reaches before its first sample.

Profiles are generated past the horizon by the largest derivative step so
that evaluations near the end still have a complete stencil.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .errors import ConfigError, ScenarioError
from .rng import standard_normal, stream_key
from .series import CapacitySeries, default_derivative_step
from .standard import (
    EnergyMatrix,
    GrowthAssessment,
    MonetarySnapshot,
    SourceSpec,
    growth_condition,
    money_supply,
)
from .timeutil import SECONDS_PER_YEAR

__all__ = [
    "Commission",
    "Epoch",
    "MatrixEvent",
    "Retire",
    "Scenario",
    "SeasonalProfile",
    "SetCoefficient",
    "SimulationResult",
    "apply_event",
    "generate_series",
    "simulate",
]


@dataclass(frozen=True)
class SeasonalProfile:
    """Parametric capacity profile; GWy for levels, GWy/year for ``trend``.

    ``period`` is in seconds. Capacity at offset ``dt`` seconds from the
    profile start is ``base + trend*years(dt) + amplitude*sin(2*pi*dt/period
    + phase) + noise``, floored at zero.
    """

    base: float
    trend: float = 0.0
    amplitude: float = 0.0
    period: int = SECONDS_PER_YEAR
    phase: float = 0.0
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("base", "trend", "amplitude", "phase", "noise_sigma"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ScenarioError(f"profile.{name} must be finite, got {value!r}")
        if self.base < 0:
            raise ScenarioError(f"profile.base must be >= 0, got {self.base!r}")
        if self.amplitude < 0 or self.amplitude > self.base:
            raise ScenarioError(
                f"profile.amplitude must lie in [0, base={self.base!r}], got {self.amplitude!r}"
            )
        if self.amplitude > 0 and self.period <= 0:
            raise ScenarioError(f"profile.period must be > 0 when amplitude > 0, got {self.period!r}")
        if self.noise_sigma < 0:
            raise ScenarioError(f"profile.noise_sigma must be >= 0, got {self.noise_sigma!r}")
        if not (0 <= self.seed < 2**64):
            raise ScenarioError(f"profile.seed must be an unsigned 64-bit integer, got {self.seed!r}")


def generate_series(
    profile: SeasonalProfile,
    start: int,
    span: int,
    sample_step: int,
    source_id: str = "source",
) -> CapacitySeries:
    """Sample ``profile`` at ``start + k*sample_step`` for ``0 <= k*sample_step <= span``."""
    if sample_step <= 0:
        raise ScenarioError(f"sample_step must be > 0, got {sample_step}")
    if span < sample_step:
        raise ScenarioError(f"span ({span} s) must be >= sample_step ({sample_step} s)")
    key = stream_key(profile.seed, source_id)
    seasonal = profile.amplitude > 0
    noisy = profile.noise_sigma > 0
    times: list[int] = []
    values: list[float] = []
    for k in range(span // sample_step + 1):
        dt = k * sample_step
        v = profile.base + profile.trend * (dt / SECONDS_PER_YEAR)
        if seasonal:
            v += profile.amplitude * math.sin(2.0 * math.pi * dt / profile.period + profile.phase)
        if noisy:
            v += profile.noise_sigma * standard_normal(key, k)
        times.append(start + dt)
        values.append(max(0.0, v))
    return CapacitySeries(source_id, times, values)


@dataclass(frozen=True)
class Commission:
    at: int
    spec: SourceSpec
    profile: SeasonalProfile

    @property
    def source_id(self) -> str:
        return self.spec.source_id


@dataclass(frozen=True)
class Retire:
    at: int
    source_id: str


@dataclass(frozen=True)
class SetCoefficient:
    at: int
    source_id: str
    c: float


MatrixEvent = Union[Commission, Retire, SetCoefficient]


@dataclass(frozen=True)
class Scenario:
    """A run definition; all durations in seconds."""

    start: int
    horizon: int
    eval_step: int
    sample_step: int
    initial: tuple[tuple[SourceSpec, SeasonalProfile], ...]
    events: tuple[MatrixEvent, ...] = ()
    derivative_step: Optional[int] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "initial", tuple(tuple(p) for p in self.initial))
        object.__setattr__(self, "events", tuple(self.events))
        if self.horizon <= 0:
            raise ScenarioError("horizon must be > 0")
        if not 0 < self.eval_step <= self.horizon:
            raise ScenarioError("eval_step must satisfy 0 < eval_step <= horizon")
        if not 0 < self.sample_step <= self.eval_step:
            raise ScenarioError("sample_step must satisfy 0 < sample_step <= eval_step")
        if self.derivative_step is not None and self.derivative_step <= 0:
            raise ScenarioError("derivative_step must be > 0")
        end = self.start + self.horizon
        prev = None
        for i, ev in enumerate(self.events):
            if not self.start <= ev.at <= end:
                raise ScenarioError(f"event {i + 1} at {ev.at} lies outside [start, start + horizon]")
            if prev is not None and ev.at < prev:
                raise ScenarioError(f"event {i + 1} is out of time order")
            prev = ev.at
        ids = [spec.source_id for spec, _ in self.initial]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise ScenarioError(f"duplicate initial source id {dup!r}")

    @property
    def end(self) -> int:
        return self.start + self.horizon

    def step_for(self, spec: SourceSpec) -> int:
        if self.derivative_step is not None:
            return self.derivative_step
        return default_derivative_step(spec.window)


@dataclass(frozen=True)
class Epoch:
    """Interval ``[start, end)`` over which the active matrix is constant."""

    start: int
    end: int
    sources: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class SimulationResult:
    snapshots: tuple[MonetarySnapshot, ...] = ()
    # None where the derivative stencil crosses an epoch boundary.
    assessments: tuple[Optional[GrowthAssessment], ...] = ()
    violations: tuple[tuple[int, tuple[str, ...]], ...] = ()
    epochs: tuple[Epoch, ...] = ()
    skipped: tuple[int, ...] = field(default=())

    @property
    def times(self) -> tuple[int, ...]:
        return tuple(s.t for s in self.snapshots)


def apply_event(
    matrix: EnergyMatrix, event: MatrixEvent, series: CapacitySeries | None = None
) -> EnergyMatrix:
    """Return the matrix after ``event``; ``matrix`` itself is not modified.

    Commission needs the new source's ``series``.
    """
    if isinstance(event, Commission):
        sid = event.spec.source_id
        if sid in matrix:
            raise ScenarioError(f"duplicate commission id {sid!r}")
        if series is None:
            raise ScenarioError(f"commission of {sid!r} needs a capacity series")
        return matrix.with_source(event.spec, series)
    if event.source_id not in matrix:
        raise ScenarioError(f"unknown source id {event.source_id!r}")
    if isinstance(event, Retire):
        return matrix.without(event.source_id)
    if isinstance(event, SetCoefficient):
        try:
            return matrix.with_coefficient(event.source_id, event.c)
        except ConfigError as exc:
            raise ScenarioError(str(exc)) from None
    raise TypeError(f"not a matrix event: {event!r}")


def _covering_span(origin: int, until: int, step: int) -> int:
    return max(step, -(-(until - origin) // step) * step)


def _build_epochs(
    scenario: Scenario, series: dict[str, CapacitySeries]
) -> tuple[list[int], list[EnergyMatrix]]:
    """Boundaries (first is ``scenario.start``) and the matrix in force from each."""
    matrix = EnergyMatrix(
        [spec for spec, _ in scenario.initial],
        {spec.source_id: series[spec.source_id] for spec, _ in scenario.initial},
    )
    known: set[str] = set(matrix.series)
    pending: dict[str, SourceSpec] = {}
    # (time, priority, seq, action); activations sort ahead of events.
    queue: list[tuple[int, int, int, object]] = []
    for seq, ev in enumerate(scenario.events):
        queue.append((ev.at, 1, seq, ev))
    queue.sort(key=lambda item: item[:3])

    boundaries = [scenario.start]
    matrices = [matrix]
    i = 0
    while i < len(queue):
        now = queue[i][0]
        if now > scenario.end:
            break
        before = matrix.describe()
        while i < len(queue) and queue[i][0] == now:
            _, prio, seq, action = queue[i]
            i += 1
            if prio == 0:
                sid = action
                if sid not in pending:
                    continue  # retired while pending
                spec = pending.pop(sid)
                matrix = matrix.with_source(spec, series[sid])
                continue
            if isinstance(action, Commission):
                sid = action.spec.source_id
                if sid in known:
                    raise ScenarioError(f"duplicate commission id {sid!r} (event {seq + 1})")
                known.add(sid)
                pending[sid] = action.spec
                item = (now + action.spec.window, 0, seq, sid)
                bisect.insort(queue, item, lo=i, key=lambda q: q[:3])
                continue
            sid = action.source_id
            if sid in pending:
                if isinstance(action, Retire):
                    del pending[sid]
                else:
                    try:
                        pending[sid] = replace(pending[sid], c=action.c)
                    except ConfigError as exc:
                        raise ScenarioError(str(exc)) from None
                continue
            if sid not in matrix:
                raise ScenarioError(f"event {seq + 1} references unknown source id {sid!r}")
            matrix = apply_event(matrix, action)
        if now == scenario.start:
            matrices[0] = matrix
        elif matrix.describe() != before:
            boundaries.append(now)
            matrices.append(matrix)
    return boundaries, matrices


def simulate(scenario: Scenario) -> SimulationResult:
    steps = {spec.source_id: scenario.step_for(spec) for spec, _ in scenario.initial}
    for ev in scenario.events:
        if isinstance(ev, Commission):
            steps.setdefault(ev.spec.source_id, scenario.step_for(ev.spec))
    margin = max(steps.values(), default=0)

    series: dict[str, CapacitySeries] = {}
    for spec, profile in scenario.initial:
        span = _covering_span(scenario.start, scenario.end + margin, scenario.sample_step)
        series[spec.source_id] = generate_series(
            profile, scenario.start, span, scenario.sample_step, spec.source_id
        )
    for ev in scenario.events:
        if isinstance(ev, Commission) and ev.spec.source_id not in series:
            span = _covering_span(ev.at, scenario.end + margin, scenario.sample_step)
            series[ev.spec.source_id] = generate_series(
                ev.profile, ev.at, span, scenario.sample_step, ev.spec.source_id
            )

    boundaries, matrices = _build_epochs(scenario, series)
    ends = boundaries[1:] + [scenario.end]
    epochs = tuple(Epoch(b, e, m.describe()) for b, e, m in zip(boundaries, ends, matrices))

    snapshots: list[MonetarySnapshot] = []
    assessments: list[Optional[GrowthAssessment]] = []
    violations: list[tuple[int, tuple[str, ...]]] = []
    skipped: list[int] = []
    for k in range(scenario.horizon // scenario.eval_step + 1):
        t = scenario.start + k * scenario.eval_step
        e = bisect.bisect_right(boundaries, t) - 1
        matrix = matrices[e]
        lo = boundaries[e] if e > 0 else None
        hi = boundaries[e + 1] if e + 1 < len(boundaries) else None
        h_max = max((steps[spec.source_id] for spec in matrix.sources), default=0)
        crosses = (lo is not None and t - h_max < lo) or (hi is not None and t + h_max >= hi)
        covered = True
        for spec, s in matrix:
            first = s.span[0]
            if t - spec.window < first:
                covered = False
            elif not crosses and t - spec.window - steps[spec.source_id] < first:
                covered = False
        if not covered:
            skipped.append(t)
            continue
        snapshots.append(money_supply(matrix, t))
        if crosses:
            assessments.append(None)
            continue
        assessment = growth_condition(matrix, t, scenario.derivative_step)
        assessments.append(assessment)
        if assessment.violations:
            violations.append((t, assessment.violations))
    return SimulationResult(
        snapshots=tuple(snapshots),
        assessments=tuple(assessments),
        violations=tuple(violations),
        epochs=epochs,
        skipped=tuple(skipped),
    )
