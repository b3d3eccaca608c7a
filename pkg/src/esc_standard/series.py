"""Capacity time series and the averaging/derivative operators on them.

A series holds annualized supply capacity in GWy at strictly increasing
integer timestamps. Between samples the capacity is linearly interpolated;
nothing is extrapolated past either end.

Window averages are trailing: ``window_average(s, t, w)`` averages over
``[t - w, t]``. The integral of the piecewise-linear interpolant is computed
exactly by the trapezoid rule over the breakpoints inside the window plus the
two partial end segments. All interval arithmetic uses integer differences of
timestamps, so translating a series in time leaves every result bit-identical.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientDataError, OutOfRangeError, SeriesError
from .timeutil import SECONDS_PER_YEAR
from .units import EnergyQuantity, EnergyUnit, to_gwy

__all__ = [
    "CapacitySample",
    "CapacitySeries",
    "canonicalize",
    "default_derivative_step",
    "derivative_of_average",
    "value_at",
    "window_average",
]


@dataclass(frozen=True)
class CapacitySample:
    t: int
    capacity: EnergyQuantity


class CapacitySeries:
    """Immutable capacity series for one source, canonical unit GWy."""

    __slots__ = ("source_id", "_times", "_values", "_tlist")

    def __init__(self, source_id: str, times: Sequence[int], values_gwy: Sequence[float]):
        if len(times) != len(values_gwy):
            raise SeriesError("times and values differ in length")
        if len(times) == 0:
            raise SeriesError(f"series {source_id!r} has no samples")
        tlist = [int(t) for t in times]
        vals = np.asarray(values_gwy, dtype=np.float64)
        for i in range(len(tlist)):
            if i and tlist[i] <= tlist[i - 1]:
                raise SeriesError("non-increasing timestamp", row=i + 1)
            v = vals[i]
            if not math.isfinite(v):
                raise SeriesError("non-finite capacity", row=i + 1)
            if v < 0:
                raise SeriesError("negative capacity", row=i + 1)
        times_arr = np.asarray(tlist, dtype=np.int64)
        times_arr.flags.writeable = False
        vals.flags.writeable = False
        self.source_id = source_id
        self._times = times_arr
        self._values = vals
        self._tlist = tlist

    @property
    def times(self) -> np.ndarray:
        return self._times

    @property
    def values(self) -> np.ndarray:
        """Capacities in GWy."""
        return self._values

    @property
    def samples(self) -> tuple[CapacitySample, ...]:
        return tuple(
            CapacitySample(t, EnergyQuantity(float(v), EnergyUnit.GWy))
            for t, v in zip(self._tlist, self._values)
        )

    @property
    def span(self) -> tuple[int, int]:
        return self._tlist[0], self._tlist[-1]

    def __len__(self) -> int:
        return len(self._tlist)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CapacitySeries):
            return NotImplemented
        return (
            self.source_id == other.source_id
            and self._tlist == other._tlist
            and np.array_equal(self._values, other._values)
        )

    def __hash__(self) -> int:
        return hash((self.source_id, tuple(self._tlist)))

    def __repr__(self) -> str:
        return f"CapacitySeries({self.source_id!r}, n={len(self)}, span={self.span})"

    def shifted(self, delta: int) -> CapacitySeries:
        return CapacitySeries(self.source_id, [t + delta for t in self._tlist], self._values)

    def _interp(self, i: int, x: int) -> float:
        """Interpolant at ``x`` inside segment ``[t_i, t_{i+1}]``."""
        t0 = self._tlist[i]
        v0 = float(self._values[i])
        if x == t0:
            return v0
        t1 = self._tlist[i + 1]
        v1 = float(self._values[i + 1])
        if x == t1:
            return v1
        return v0 + (v1 - v0) * ((x - t0) / (t1 - t0))

    def _value(self, x: int) -> float:
        i = bisect.bisect_right(self._tlist, x) - 1
        if i == len(self._tlist) - 1:
            return float(self._values[i])
        return self._interp(i, x)

    def integral(self, a: int, b: int) -> float:
        """Exact integral of the interpolant over ``[a, b]`` in GWy*seconds."""
        if b <= a:
            return 0.0
        t = self._tlist
        k0 = bisect.bisect_right(t, a)
        k1 = bisect.bisect_left(t, b) - 1
        va = self._value(a)
        vb = self._value(b)
        if k0 > k1:
            return (b - a) * (va + vb) / 2.0
        pts = np.empty(k1 - k0 + 3, dtype=np.int64)
        pts[0] = a
        pts[1:-1] = self._times[k0 : k1 + 1]
        pts[-1] = b
        vals = np.empty(k1 - k0 + 3, dtype=np.float64)
        vals[0] = va
        vals[1:-1] = self._values[k0 : k1 + 1]
        vals[-1] = vb
        dt = np.diff(pts).astype(np.float64)
        return float(np.sum(dt * (vals[:-1] + vals[1:]))) / 2.0


def canonicalize(
    source_id: str,
    samples: Iterable[tuple[int, EnergyQuantity] | CapacitySample],
    rows: Sequence[int] | None = None,
) -> CapacitySeries:
    """Build a GWy series from samples in any energy unit.

    ``rows`` optionally maps sample positions to the row numbers reported in
    errors (the default is 1-based position).
    """
    times: list[int] = []
    values: list[float] = []
    for pos, sample in enumerate(samples):
        if isinstance(sample, CapacitySample):
            t, q = sample.t, sample.capacity
        else:
            t, q = sample
        row = rows[pos] if rows is not None else pos + 1
        if times and t <= times[-1]:
            raise SeriesError(f"source {source_id!r}: non-increasing timestamp", row=row)
        if q.magnitude < 0:
            raise SeriesError(f"source {source_id!r}: negative capacity", row=row)
        times.append(int(t))
        values.append(to_gwy(q.magnitude, q.unit))
    if not times:
        raise SeriesError(f"source {source_id!r}: no samples")
    return CapacitySeries(source_id, times, values)


def value_at(series: CapacitySeries, t: int) -> EnergyQuantity:
    lo, hi = series.span
    if t < lo or t > hi:
        raise OutOfRangeError(series.source_id, t, series.span)
    return EnergyQuantity(series._value(t), EnergyUnit.GWy)


def _average(series: CapacitySeries, t: int, window: int, context: str = "window") -> float:
    if window <= 0:
        raise ValueError(f"window must be positive, got {window} s")
    lo, hi = series.span
    a = t - window
    if a < lo:
        raise InsufficientDataError(series.source_id, "history", (a, t), series.span, context)
    if t > hi:
        raise InsufficientDataError(series.source_id, "future", (a, t), series.span, context)
    return series.integral(a, t) / window


def window_average(series: CapacitySeries, t: int, window: int) -> EnergyQuantity:
    """Trailing mean of the capacity over ``[t - window, t]`` (seconds)."""
    return EnergyQuantity(_average(series, t, window), EnergyUnit.GWy)


def default_derivative_step(window: int) -> int:
    """Default central-difference step: one twentieth of the window."""
    return max(1, round(window / 20))


def derivative_of_average(
    series: CapacitySeries, t: int, window: int, h: int | None = None
) -> float:
    """Central difference of the trailing average, in GWy per year.

    ``h`` is in seconds and defaults to ``window / 20``.
    """
    if h is None:
        h = default_derivative_step(window)
    if h <= 0:
        raise ValueError(f"derivative step must be positive, got {h} s")
    lo, hi = series.span
    if t - h - window < lo:
        raise InsufficientDataError(
            series.source_id, "history", (t - h - window, t - h), series.span, "derivative at t-h"
        )
    if t + h > hi:
        raise InsufficientDataError(
            series.source_id, "future", (t + h - window, t + h), series.span, "derivative at t+h"
        )
    ahead = series.integral(t + h - window, t + h) / window
    behind = series.integral(t - h - window, t - h) / window
    return (ahead - behind) / (2 * h / SECONDS_PER_YEAR)
