"""On-disk formats: series CSV, matrix config JSON, scenario JSON, reports.

Series CSV
    header ``timestamp,source_id,capacity,unit``; timestamps are
    ``YYYY-MM-DDThh:mm:ssZ``; each source uses one unit throughout and its
    rows are strictly increasing in time. Rows of different sources may be
    interleaved.

Matrix config JSON
    ``{"sources": [{"id", "label", "c_amu_per_gwy", "window_years"}]}``

Scenario JSON
    ``start`` (timestamp), ``horizon_years``, ``eval_step_years``,
    ``sample_step_years``, optional ``derivative_step_years``, ``initial``
    (list of source entries, each a matrix-config source plus a ``profile``)
    and ``events``. A profile has ``base_gwy``, ``trend_gwy_per_year``,
    ``amplitude_gwy``, ``period_years``, ``phase_rad``, ``noise_sigma_gwy``
    and ``seed``; all but ``base_gwy`` are optional. Events carry ``at`` and
    ``kind``: ``commission`` (with ``source``), ``retire`` (with ``id``) or
    ``set_coefficient`` (with ``id`` and ``c_amu_per_gwy``). Unknown fields
    are rejected everywhere.

Report CSV
    header ``t,M_amu,A_total_gwy,dM_dt_amu_per_y,overall_growth,violations``,
    one row per emitted evaluation. ``dM_dt_amu_per_y`` and
    ``overall_growth`` are empty where the derivative stencil crosses an
    epoch boundary; ``violations`` joins source ids with ``;``.

Durations are decimal years of 8760 hours, rounded to whole seconds. Report
numbers use 12 significant digits, round-half-even.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Annotated, Any, Literal, Mapping, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import FormatError, SeriesError, UnitError
from .scenario import (
    Commission,
    Epoch,
    Retire,
    Scenario,
    SeasonalProfile,
    SetCoefficient,
    SimulationResult,
)
from .series import CapacitySeries, canonicalize
from .standard import (
    Compensation,
    GrowthAssessment,
    MonetarySnapshot,
    SourceContribution,
    SourceSpec,
)
from .timeutil import format_timestamp, parse_timestamp, seconds_to_years, years_to_seconds
from .units import EnergyQuantity, parse_number, parse_unit

SERIES_HEADER = ["timestamp", "source_id", "capacity", "unit"]
REPORT_HEADER = ["t", "M_amu", "A_total_gwy", "dM_dt_amu_per_y", "overall_growth", "violations"]


def render(x: float) -> str:
    """12 significant digits, round-half-even; ``-0`` prints as ``0``."""
    if x == 0:
        x = 0.0
    return format(x, ".12g")


def _r(x: float) -> float:
    return float(render(x))


# ---------------------------------------------------------------------------
# Series CSV
# ---------------------------------------------------------------------------


def load_series(path: str | Path) -> dict[str, CapacitySeries]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(path, f"cannot read: {exc.strerror}") from None
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader, None)
    if header != SERIES_HEADER:
        raise FormatError(path, f"header must be {','.join(SERIES_HEADER)!r}, got {header}", line=1)

    rows: dict[str, list[tuple[int, EnergyQuantity]]] = {}
    lines: dict[str, list[int]] = {}
    units: dict[str, str] = {}
    for record in reader:
        line = reader.line_num
        if not record or record == [""]:
            continue
        if len(record) != 4:
            raise FormatError(path, f"expected 4 fields, got {len(record)}", line)
        stamp, sid, cap, unit_tag = record
        if not sid:
            raise FormatError(path, "empty source_id", line)
        try:
            t = parse_timestamp(stamp)
            unit = parse_unit(unit_tag)
            magnitude = parse_number(cap)
        except (ValueError, UnitError) as exc:
            raise FormatError(path, str(exc), line) from None
        if units.setdefault(sid, unit_tag) != unit_tag:
            raise FormatError(
                path, f"mixed units for source {sid!r} ({units[sid]} then {unit_tag})", line
            )
        rows.setdefault(sid, []).append((t, EnergyQuantity(magnitude, unit)))
        lines.setdefault(sid, []).append(line)
    if not rows:
        raise FormatError(path, "no samples")

    out: dict[str, CapacitySeries] = {}
    for sid, samples in rows.items():
        try:
            out[sid] = canonicalize(sid, samples)
        except SeriesError as exc:
            line = lines[sid][exc.row - 1] if exc.row is not None else None
            msg = str(exc).rsplit(" at row ", 1)[0]
            raise FormatError(path, msg, line) from None
    return out


def write_series(series: Mapping[str, CapacitySeries], path: str | Path) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SERIES_HEADER)
    for sid, s in series.items():
        for t, v in zip(s.times.tolist(), s.values.tolist()):
            writer.writerow([format_timestamp(t), sid, repr(v), "GWy"])
    _write_text(path, buf.getvalue())


# ---------------------------------------------------------------------------
# JSON schemas
# ---------------------------------------------------------------------------


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True)


class _SourceEntry(_Strict):
    id: str
    label: str = ""
    c_amu_per_gwy: float
    window_years: float


class _MatrixFile(_Strict):
    sources: list[_SourceEntry]


class _ProfileEntry(_Strict):
    base_gwy: float
    trend_gwy_per_year: float = 0.0
    amplitude_gwy: float = 0.0
    period_years: float = 1.0
    phase_rad: float = 0.0
    noise_sigma_gwy: float = 0.0
    seed: int = 0


class _ScenarioSource(_SourceEntry):
    profile: _ProfileEntry


class _CommissionEntry(_Strict):
    at: str
    kind: Literal["commission"]
    source: _ScenarioSource


class _RetireEntry(_Strict):
    at: str
    kind: Literal["retire"]
    id: str


class _SetCoefficientEntry(_Strict):
    at: str
    kind: Literal["set_coefficient"]
    id: str
    c_amu_per_gwy: float


_EventEntry = Annotated[
    Union[_CommissionEntry, _RetireEntry, _SetCoefficientEntry], Field(discriminator="kind")
]


class _ScenarioFile(_Strict):
    start: str
    horizon_years: float
    eval_step_years: float
    sample_step_years: float
    derivative_step_years: Optional[float] = None
    initial: list[_ScenarioSource]
    events: list[_EventEntry] = []


def _read_json(path: Path) -> Any:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(path, f"cannot read: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(path, f"invalid JSON: {exc.msg}", exc.lineno) from None


def _validate(model: type[BaseModel], data: Any, path: Path) -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        problems = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or '<root>'}: {err['msg']}"
            for err in exc.errors()
        )
        raise FormatError(path, problems) from None


def _duration(years: float, where: str, path: Path) -> int:
    if not math.isfinite(years) or years <= 0:
        raise FormatError(path, f"{where}: duration must be > 0 years, got {years!r}")
    seconds = years_to_seconds(years)
    if seconds <= 0:
        raise FormatError(path, f"{where}: duration rounds to zero seconds")
    return seconds


def _source_spec(entry: _SourceEntry, where: str, path: Path) -> SourceSpec:
    c = entry.c_amu_per_gwy
    if not math.isfinite(c) or c < 0:
        raise FormatError(path, f"{where}.c_amu_per_gwy: c out of range ({c!r}); need c >= 0")
    window = _duration(entry.window_years, f"{where}.window_years", path)
    if not entry.id:
        raise FormatError(path, f"{where}.id: must be non-empty")
    return SourceSpec(entry.id, c, window, entry.label or entry.id)


def _timestamp(text: str, where: str, path: Path) -> int:
    try:
        return parse_timestamp(text)
    except ValueError as exc:
        raise FormatError(path, f"{where}: {exc}") from None


def load_matrix_config(path: str | Path) -> list[SourceSpec]:
    path = Path(path)
    doc = _validate(_MatrixFile, _read_json(path), path)
    specs: list[SourceSpec] = []
    seen: set[str] = set()
    for i, entry in enumerate(doc.sources):
        spec = _source_spec(entry, f"sources.{i}", path)
        if spec.source_id in seen:
            raise FormatError(path, f'duplicate id "{spec.source_id}"')
        seen.add(spec.source_id)
        specs.append(spec)
    return specs


def _profile(entry: _ProfileEntry, where: str, path: Path) -> SeasonalProfile:
    period = _duration(entry.period_years, f"{where}.period_years", path)
    try:
        return SeasonalProfile(
            base=entry.base_gwy,
            trend=entry.trend_gwy_per_year,
            amplitude=entry.amplitude_gwy,
            period=period,
            phase=entry.phase_rad,
            noise_sigma=entry.noise_sigma_gwy,
            seed=entry.seed,
        )
    except ValueError as exc:
        raise FormatError(path, f"{where}: {exc}") from None


def parse_scenario(data: Any, path: str | Path = "<scenario>") -> Scenario:
    path = Path(path)
    doc: _ScenarioFile = _validate(_ScenarioFile, data, path)
    initial = []
    for i, entry in enumerate(doc.initial):
        where = f"initial.{i}"
        initial.append((_source_spec(entry, where, path), _profile(entry.profile, f"{where}.profile", path)))
    events = []
    for i, ev in enumerate(doc.events):
        where = f"events.{i}"
        at = _timestamp(ev.at, f"{where}.at", path)
        if isinstance(ev, _CommissionEntry):
            spec = _source_spec(ev.source, f"{where}.source", path)
            events.append(Commission(at, spec, _profile(ev.source.profile, f"{where}.source.profile", path)))
        elif isinstance(ev, _RetireEntry):
            events.append(Retire(at, ev.id))
        else:
            c = ev.c_amu_per_gwy
            if not math.isfinite(c) or c < 0:
                raise FormatError(path, f"{where}.c_amu_per_gwy: c out of range ({c!r}); need c >= 0")
            events.append(SetCoefficient(at, ev.id, c))
    derivative_step = None
    if doc.derivative_step_years is not None:
        derivative_step = _duration(doc.derivative_step_years, "derivative_step_years", path)
    try:
        return Scenario(
            start=_timestamp(doc.start, "start", path),
            horizon=_duration(doc.horizon_years, "horizon_years", path),
            eval_step=_duration(doc.eval_step_years, "eval_step_years", path),
            sample_step=_duration(doc.sample_step_years, "sample_step_years", path),
            initial=tuple(initial),
            events=tuple(events),
            derivative_step=derivative_step,
        )
    except ValueError as exc:
        raise FormatError(path, str(exc)) from None


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(_read_json(path), path)


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def snapshot_to_dict(s: MonetarySnapshot) -> dict:
    return {
        "t": format_timestamp(s.t),
        "M_amu": _r(s.M),
        "A_total_gwy": _r(s.A_total),
        "per_source": [
            {
                "id": p.source_id,
                "avg_capacity_gwy": _r(p.avg_capacity),
                "contribution_amu": _r(p.contribution),
            }
            for p in s.per_source
        ],
    }


def assessment_to_dict(a: GrowthAssessment) -> dict:
    return {
        "t": format_timestamp(a.t),
        "per_source_rate": [{"id": sid, "d_avg_gwy_per_y": _r(rate)} for sid, rate in a.per_source_rate],
        "dM_dt_amu_per_y": _r(a.dM_dt),
        "declining": list(a.declining),
        "compensation": [
            {
                "id": c.source_id,
                "lhs_amu_per_y": _r(c.lhs),
                "rhs_amu_per_y": _r(c.rhs),
                "satisfied": c.satisfied,
            }
            for c in a.compensation
        ],
        "overall_growth": a.overall_growth,
    }


def result_to_dict(result: SimulationResult) -> dict:
    return {
        "snapshots": [snapshot_to_dict(s) for s in result.snapshots],
        "assessments": [None if a is None else assessment_to_dict(a) for a in result.assessments],
        "violations": [{"t": format_timestamp(t), "ids": list(ids)} for t, ids in result.violations],
        "epochs": [
            {
                "start": format_timestamp(e.start),
                "end": format_timestamp(e.end),
                "sources": [{"id": sid, "c_amu_per_gwy": _r(c)} for sid, c in e.sources],
            }
            for e in result.epochs
        ],
        "skipped": [format_timestamp(t) for t in result.skipped],
    }


def dumps_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def report_csv(result: SimulationResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_HEADER)
    for snap, assess in zip(result.snapshots, result.assessments):
        if assess is None:
            rate, growth, violations = "", "", ""
        else:
            rate = render(assess.dM_dt)
            growth = "true" if assess.overall_growth else "false"
            violations = ";".join(assess.violations)
        writer.writerow(
            [format_timestamp(snap.t), render(snap.M), render(snap.A_total), rate, growth, violations]
        )
    return buf.getvalue()


def report_json(result: SimulationResult) -> str:
    return dumps_json(result_to_dict(result))


def write_report(result: SimulationResult, path: str | Path, format: str = "csv") -> None:
    if format == "csv":
        text = report_csv(result)
    elif format == "json":
        text = report_json(result)
    else:
        raise ValueError(f"unknown report format {format!r}; expected csv or json")
    _write_text(path, text)


def _write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise FormatError(path, f"cannot write: {exc.strerror}") from None


def _snapshot_from(d: dict) -> MonetarySnapshot:
    return MonetarySnapshot(
        t=parse_timestamp(d["t"]),
        M=float(d["M_amu"]),
        A_total=float(d["A_total_gwy"]),
        per_source=tuple(
            SourceContribution(p["id"], float(p["avg_capacity_gwy"]), float(p["contribution_amu"]))
            for p in d["per_source"]
        ),
    )


def _assessment_from(d: dict) -> GrowthAssessment:
    return GrowthAssessment(
        t=parse_timestamp(d["t"]),
        per_source_rate=tuple((r["id"], float(r["d_avg_gwy_per_y"])) for r in d["per_source_rate"]),
        dM_dt=float(d["dM_dt_amu_per_y"]),
        declining=tuple(d["declining"]),
        compensation=tuple(
            Compensation(c["id"], float(c["lhs_amu_per_y"]), float(c["rhs_amu_per_y"]), bool(c["satisfied"]))
            for c in d["compensation"]
        ),
        overall_growth=bool(d["overall_growth"]),
    )


def result_from_dict(doc: dict) -> SimulationResult:
    return SimulationResult(
        snapshots=tuple(_snapshot_from(s) for s in doc["snapshots"]),
        assessments=tuple(None if a is None else _assessment_from(a) for a in doc["assessments"]),
        violations=tuple((parse_timestamp(v["t"]), tuple(v["ids"])) for v in doc["violations"]),
        epochs=tuple(
            Epoch(
                parse_timestamp(e["start"]),
                parse_timestamp(e["end"]),
                tuple((s["id"], float(s["c_amu_per_gwy"])) for s in e["sources"]),
            )
            for e in doc["epochs"]
        ),
        skipped=tuple(parse_timestamp(t) for t in doc["skipped"]),
    )


def load_report(path: str | Path) -> SimulationResult:
    """Read a JSON report back into a :class:`SimulationResult`."""
    path = Path(path)
    doc = _read_json(path)
    try:
        return result_from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(path, f"malformed report: {exc!r}") from None


def scenario_to_dict(scenario: Scenario) -> dict:
    """Inverse of :func:`parse_scenario` (durations written in years)."""

    def source(spec: SourceSpec, profile: SeasonalProfile) -> dict:
        return {
            "id": spec.source_id,
            "label": spec.label,
            "c_amu_per_gwy": spec.c,
            "window_years": seconds_to_years(spec.window),
            "profile": {
                "base_gwy": profile.base,
                "trend_gwy_per_year": profile.trend,
                "amplitude_gwy": profile.amplitude,
                "period_years": seconds_to_years(profile.period),
                "phase_rad": profile.phase,
                "noise_sigma_gwy": profile.noise_sigma,
                "seed": profile.seed,
            },
        }

    events = []
    for ev in scenario.events:
        at = format_timestamp(ev.at)
        if isinstance(ev, Commission):
            events.append({"at": at, "kind": "commission", "source": source(ev.spec, ev.profile)})
        elif isinstance(ev, Retire):
            events.append({"at": at, "kind": "retire", "id": ev.source_id})
        else:
            events.append({"at": at, "kind": "set_coefficient", "id": ev.source_id, "c_amu_per_gwy": ev.c})
    doc = {
        "start": format_timestamp(scenario.start),
        "horizon_years": seconds_to_years(scenario.horizon),
        "eval_step_years": seconds_to_years(scenario.eval_step),
        "sample_step_years": seconds_to_years(scenario.sample_step),
        "initial": [source(spec, profile) for spec, profile in scenario.initial],
        "events": events,
    }
    if scenario.derivative_step is not None:
        doc["derivative_step_years"] = seconds_to_years(scenario.derivative_step)
    return doc
