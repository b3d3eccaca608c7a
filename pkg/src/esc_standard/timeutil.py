"""Time axis: integer UTC seconds, durations in seconds, years of 8760 hours."""

from __future__ import annotations

import math
import re
from datetime import datetime, timedelta, timezone

HOURS_PER_YEAR = 8760
SECONDS_PER_YEAR = HOURS_PER_YEAR * 3600

_EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)
_ISO_RE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})T(\d{2}):(\d{2}):(\d{2})Z$")


def parse_timestamp(text: str) -> int:
    """Parse ``YYYY-MM-DDThh:mm:ssZ`` into seconds since the Unix epoch.

    Offsets other than the literal ``Z`` suffix, fractional seconds and
    date-only forms are rejected.
    """
    m = _ISO_RE.match(text)
    if m is None:
        raise ValueError(f"timestamp must be YYYY-MM-DDThh:mm:ssZ (UTC), got {text!r}")
    try:
        dt = datetime(*(int(g) for g in m.groups()), tzinfo=timezone.utc)
    except ValueError as exc:
        raise ValueError(f"invalid timestamp {text!r}: {exc}") from None
    return (dt - _EPOCH) // timedelta(seconds=1)


def format_timestamp(seconds: int | float) -> str:
    dt = _EPOCH + timedelta(seconds=int(seconds))
    return dt.strftime("%Y-%m-%dT%H:%M:%SZ")


def years_to_seconds(years: float) -> int:
    """Convert a duration in years to whole seconds (nearest, ties to even)."""
    if not math.isfinite(years):
        raise ValueError(f"duration must be finite, got {years!r}")
    return round(years * SECONDS_PER_YEAR)


def seconds_to_years(seconds: int | float) -> float:
    return seconds / SECONDS_PER_YEAR
