"""Test-only builders and oracles. Kept independent of the library's integration path."""

from __future__ import annotations

import math
import random

import numpy as np

from esc_standard import CapacitySeries, EnergyMatrix, SourceSpec
from esc_standard.timeutil import SECONDS_PER_YEAR

YEAR = SECONDS_PER_YEAR
DAY = 86400


def linear_series(sid: str, slope: float, start_value: float, t0: int = 0, span_years: float = 10,
                  step: int = DAY * 30) -> CapacitySeries:
    n = int(round(span_years * YEAR)) // step
    times = [t0 + k * step for k in range(n + 1)]
    return CapacitySeries(sid, times, [start_value + slope * (t - t0) / YEAR for t in times])


def constant_series(sid: str, value: float, span_years: float = 5, step: int = DAY * 30) -> CapacitySeries:
    n = int(round(span_years * YEAR)) // step
    return CapacitySeries(sid, [k * step for k in range(n + 1)], [value] * (n + 1))


def sinusoid_series(sid: str, base: float, amplitude: float, period: int, span_years: float,
                    step: int = DAY, t0: int = 0) -> CapacitySeries:
    n = int(round(span_years * YEAR)) // step
    times = [t0 + k * step for k in range(n + 1)]
    values = [base + amplitude * math.sin(2 * math.pi * (t - t0) / period) for t in times]
    return CapacitySeries(sid, times, values)


def polyline_mean_oracle(series: CapacitySeries, a: int, b: int, step: int = 3600) -> float:
    """Mean over [a, b] by trapezoid on a fine grid of the interpolated polyline."""
    grid = np.arange(a, b + 1, step, dtype=np.int64)
    if grid[-1] != b:
        grid = np.append(grid, b)
    values = np.interp(grid.astype(float), series.times.astype(float), series.values)
    dt = np.diff(grid).astype(float)
    return float(np.sum(dt * (values[:-1] + values[1:]) / 2) / (b - a))


def piecewise_series(sid: str, knots: list[tuple[int, float]], rng: random.Random,
                     mean_gap: int = DAY * 20) -> CapacitySeries:
    """Samples of the polyline through ``knots`` at the knots plus jittered interior points."""
    times = set(t for t, _ in knots)
    for (ta, _), (tb, _) in zip(knots, knots[1:]):
        t = ta + rng.randint(1, mean_gap)
        while t < tb:
            times.add(t)
            t += rng.randint(mean_gap // 2, mean_gap * 3 // 2)
    kt = [t for t, _ in knots]
    kv = [v for _, v in knots]
    ordered = sorted(times)
    values = np.interp(np.array(ordered, dtype=float), np.array(kt, dtype=float), np.array(kv))
    return CapacitySeries(sid, ordered, values.tolist())


def random_linear_matrix(seed: int, t_eval: int = 10 * YEAR):
    """Matrix of 2-5 sources each linear around ``t_eval``; returns (matrix, slopes).

    Each source is linear on its window-plus-stencil neighborhood and bends
    elsewhere. Draws are rejected when the weighted slopes nearly cancel.
    """
    rng = random.Random(seed)
    while True:
        n = rng.randint(2, 5)
        slopes = [rng.choice([-1, 1]) * rng.uniform(0.5, 5.0) for _ in range(n)]
        coeffs = [rng.uniform(0.1, 3.0) for _ in range(n)]
        terms = [c * s for c, s in zip(coeffs, slopes)]
        if abs(math.fsum(terms)) >= 0.05 * math.fsum(abs(x) for x in terms):
            break
    specs, series = [], {}
    for i in range(n):
        sid = f"s{i}"
        window = rng.choice([YEAR // 4, YEAR // 2, YEAR, 2 * YEAR])
        h = window // 20
        lo = t_eval - h - window
        hi = t_eval + h
        k1 = rng.randint(YEAR // 2, lo - DAY)
        k2 = rng.randint(hi + DAY, 14 * YEAR)
        v_eval = rng.uniform(60.0, 120.0)
        s = slopes[i]
        v1 = v_eval + s * (k1 - t_eval) / YEAR
        v2 = v_eval + s * (k2 - t_eval) / YEAR
        v0 = v1 + rng.uniform(-3, 3) * k1 / YEAR
        v3 = v2 + rng.uniform(-3, 3) * (15 * YEAR - k2) / YEAR
        knots = [(0, v0), (k1, v1), (k2, v2), (15 * YEAR, v3)]
        series[sid] = piecewise_series(sid, knots, rng)
        specs.append(SourceSpec(sid, coeffs[i], window))
    return EnergyMatrix(specs, series), dict(zip([f"s{i}" for i in range(n)], slopes))


def random_matrix(seed: int):
    """Arbitrary 2-5 source matrix with bendy series, for invariance checks."""
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    specs, series = [], {}
    for i in range(n):
        sid = f"r{i}"
        knots = []
        v = rng.uniform(20.0, 80.0)
        t = 0
        while t < 6 * YEAR:
            knots.append((t, v))
            t += rng.randint(YEAR // 6, YEAR)
            v = max(0.0, v + rng.uniform(-8.0, 8.0))
        knots.append((6 * YEAR, v))
        series[sid] = piecewise_series(sid, knots, rng, mean_gap=DAY * 10)
        specs.append(SourceSpec(sid, rng.uniform(0.0, 4.0), rng.choice([YEAR // 3, YEAR // 2, YEAR])))
    return EnergyMatrix(specs, series)
