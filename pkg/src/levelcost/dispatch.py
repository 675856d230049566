"""Discrete-time energy dispatch and synthetic profile generators.

A :class:`PowerTimeSeries` is a uniformly sampled trace of irradiance
(W/m²) or power (MW). Energy integration uses the left-rectangle rule,
sample value times step length, matching how metered interval data is
normally totalized. :func:`split_energy` walks a PV trace against a load
trace and splits PV energy into directly consumed, stored and curtailed
portions, with storage modeled as a per-day energy budget.

CSV ingestion expects two columns ``timestamp,value`` with ISO-8601
timestamps on a uniform grid. Missing rows fail the load by default; runs
of at most two consecutive missing samples can optionally be filled by
linear interpolation.
"""

import math
from dataclasses import dataclass
from datetime import date, datetime, time, timedelta
from enum import Enum

import numpy as np

from .components import PvArraySpec
from .errors import AlignmentError, DomainError, InputFormatError

# Fixed calendar day used by the synthetic generators so that generated
# load and irradiance traces align without ceremony.
GENERATOR_EPOCH = date(2000, 1, 1)

DEFAULT_STEP = timedelta(minutes=30)

_DAY = timedelta(hours=24)


class SeriesKind(Enum):
    IRRADIANCE = "irradiance"  # W/m²
    POWER = "power"  # MW


@dataclass(frozen=True)
class PowerTimeSeries:
    """Uniformly sampled irradiance or power trace."""

    start: datetime
    step: timedelta
    samples: np.ndarray
    kind: SeriesKind

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1 or samples.size < 1:
            raise DomainError("samples must be a non-empty 1-D array")
        if not np.all(np.isfinite(samples)):
            raise DomainError("samples must be finite")
        if np.any(samples < 0):
            raise DomainError("samples must be >= 0")
        if self.step <= timedelta(0):
            raise DomainError("step must be a positive duration")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def step_hours(self) -> float:
        return self.step.total_seconds() / 3600.0

    @property
    def duration(self) -> timedelta:
        return self.step * len(self)

    def with_samples(self, samples) -> "PowerTimeSeries":
        return PowerTimeSeries(self.start, self.step, np.asarray(samples, dtype=float), self.kind)


@dataclass(frozen=True)
class DispatchResult:
    """Energy totals over the dispatched period, all in MWh.

    ``e_direct`` is PV consumed by the load as generated, ``e_surplus_stored``
    the PV residual that fit into the daily storage budget,
    ``e_curtailed`` the residual that did not, and ``e_unserved`` the load
    that PV alone could not cover (informational; discharge scheduling is
    out of scope).
    """

    e_direct_mwh: float
    e_surplus_stored_mwh: float
    e_curtailed_mwh: float
    e_unserved_mwh: float
    period: timedelta

    @property
    def total_pv_mwh(self) -> float:
        return self.e_direct_mwh + self.e_surplus_stored_mwh + self.e_curtailed_mwh

    @property
    def days(self) -> float:
        return self.period / _DAY


def _require_aligned(pv: PowerTimeSeries, load: PowerTimeSeries) -> None:
    if pv.start != load.start:
        raise AlignmentError(f"series starts differ: {pv.start} vs {load.start}")
    if pv.step != load.step:
        raise AlignmentError(f"series steps differ: {pv.step} vs {load.step}")
    if len(pv) != len(load):
        raise AlignmentError(f"series lengths differ: {len(pv)} vs {len(load)}")


def split_energy(
    pv: PowerTimeSeries,
    load: PowerTimeSeries,
    storage_cap_mwh_per_day: float | None,
    charge_power_limit_mw: float | None = None,
) -> DispatchResult:
    """Split PV energy into direct, stored and curtailed portions.

    Per step, the load absorbs min(pv, load). The positive residual
    accrues to a per-day accumulator capped at ``storage_cap_mwh_per_day``;
    whatever exceeds the cap is curtailed. ``None`` means an unlimited
    store, 0.0 discards every residual. Days are consecutive blocks of
    24 h counted from the series start, so the step must divide 24 h.

    ``charge_power_limit_mw`` optionally caps the instantaneous charging
    power before the daily budget applies. It is off by default because
    the daily energy budget is the accounting the cost schedules consume.
    """
    _require_aligned(pv, load)
    if pv.kind is not SeriesKind.POWER or load.kind is not SeriesKind.POWER:
        raise AlignmentError("split_energy needs two power series (MW)")
    step_h = pv.step_hours
    per_day = _DAY.total_seconds() / pv.step.total_seconds()
    if abs(per_day - round(per_day)) > 1e-9:
        raise AlignmentError(f"step {pv.step} does not divide 24 h")
    per_day = int(round(per_day))
    if storage_cap_mwh_per_day is not None and storage_cap_mwh_per_day < 0:
        raise DomainError("storage_cap_mwh_per_day must be >= 0 or None")

    p = pv.samples
    l = load.samples
    direct_mwh = float(np.minimum(p, l).sum() * step_h)
    unserved_mwh = float(np.maximum(l - p, 0.0).sum() * step_h)
    residual = np.maximum(p - l, 0.0)

    curtailed_mwh = 0.0
    if charge_power_limit_mw is not None:
        if charge_power_limit_mw < 0:
            raise DomainError("charge_power_limit_mw must be >= 0 or None")
        storable = np.minimum(residual, charge_power_limit_mw)
        curtailed_mwh += float((residual - storable).sum() * step_h)
        residual = storable

    residual_mwh = residual * step_h
    stored_mwh = 0.0
    for i in range(0, len(residual_mwh), per_day):
        day_total = float(residual_mwh[i : i + per_day].sum())
        if storage_cap_mwh_per_day is None:
            stored_mwh += day_total
        else:
            taken = min(day_total, storage_cap_mwh_per_day)
            stored_mwh += taken
            curtailed_mwh += day_total - taken

    return DispatchResult(
        e_direct_mwh=direct_mwh,
        e_surplus_stored_mwh=stored_mwh,
        e_curtailed_mwh=curtailed_mwh,
        e_unserved_mwh=unserved_mwh,
        period=pv.step * len(pv),
    )


def _hours_of(t: time) -> float:
    return t.hour + t.minute / 60.0 + t.second / 3600.0 + t.microsecond / 3.6e9


def clear_sky_profile(
    peak_irradiance_w_m2: float,
    sunrise: time,
    sunset: time,
    step: timedelta = DEFAULT_STEP,
    day: date = GENERATOR_EPOCH,
) -> PowerTimeSeries:
    """One day of idealized no-cloud irradiance: a half-sine arch.

    Inside the daylight window the value is
    peak x sin(pi (t - sunrise) / (sunset - sunrise)); outside it is zero.
    """
    if peak_irradiance_w_m2 <= 0:
        raise DomainError("peak_irradiance_w_m2 must be positive")
    rise_h = _hours_of(sunrise)
    set_h = _hours_of(sunset)
    if set_h <= rise_h:
        raise DomainError("sunset must come after sunrise")
    n = int(round(_DAY / step))
    if n < 1 or abs(_DAY / step - n) > 1e-9:
        raise DomainError(f"step {step} does not divide 24 h")
    step_h = step.total_seconds() / 3600.0
    hours = np.arange(n) * step_h
    phase = (hours - rise_h) / (set_h - rise_h)
    samples = np.where(
        (phase > 0.0) & (phase < 1.0),
        peak_irradiance_w_m2 * np.sin(np.pi * np.clip(phase, 0.0, 1.0)),
        0.0,
    )
    return PowerTimeSeries(
        start=datetime.combine(day, time()),
        step=step,
        samples=samples,
        kind=SeriesKind.IRRADIANCE,
    )


def pv_power_from_irradiance(
    irradiance: PowerTimeSeries, spec: PvArraySpec, count: float
) -> PowerTimeSeries:
    """Array output power in MW for ``count`` panels under an irradiance trace.

    Per panel the output is irradiance x efficiency x area, clipped at the
    rated power.
    """
    if irradiance.kind is not SeriesKind.IRRADIANCE:
        raise AlignmentError("pv_power_from_irradiance needs an irradiance series")
    if count < 0:
        raise DomainError("panel count must be >= 0")
    per_panel_w = np.minimum(
        irradiance.samples * spec.efficiency * spec.panel_area_m2, spec.rated_power_w
    )
    return PowerTimeSeries(
        start=irradiance.start,
        step=irradiance.step,
        samples=per_panel_w * count / 1e6,
        kind=SeriesKind.POWER,
    )


def synthetic_load_profile(
    base_mw: float,
    evening_peak_mw: float,
    peak_time: time = time(20, 30),
    step: timedelta = DEFAULT_STEP,
    day: date = GENERATOR_EPOCH,
    trough_time: time = time(5, 0),
) -> PowerTimeSeries:
    """One day of smooth national-style load in MW.

    Daytime sits on a plateau at ``base_mw``, the early morning dips into a
    trough around ``trough_time`` and a Gaussian-shaped evening peak
    reaches exactly ``evening_peak_mw`` at ``peak_time``. With
    base == peak the profile is constant. Distances are circular so the
    shape wraps cleanly across midnight.
    """
    if not base_mw > 0:
        raise DomainError("base_mw must be positive")
    if evening_peak_mw < base_mw:
        raise DomainError("evening_peak_mw must be >= base_mw")
    n = int(round(_DAY / step))
    if n < 1 or abs(_DAY / step - n) > 1e-9:
        raise DomainError(f"step {step} does not divide 24 h")
    step_h = step.total_seconds() / 3600.0
    hours = np.arange(n) * step_h
    swing = evening_peak_mw - base_mw

    def circular(delta_h: np.ndarray) -> np.ndarray:
        d = np.abs(delta_h) % 24.0
        return np.minimum(d, 24.0 - d)

    # Evening peak: Gaussian bump, exactly 1 at its center.
    peak_d = circular(hours - _hours_of(peak_time))
    bump = np.exp(-0.5 * (peak_d / 1.5) ** 2)
    # Overnight trough: cosine dip with compact support so it cannot
    # perturb the peak sample.
    trough_d = circular(hours - _hours_of(trough_time))
    trough_w = 3.0
    trough = np.where(
        trough_d < trough_w, 0.5 * (1.0 + np.cos(np.pi * trough_d / trough_w)), 0.0
    )
    samples = base_mw + swing * bump - 0.3 * swing * trough
    if np.any(samples <= 0):
        raise DomainError("profile dips to zero; raise base_mw or lower the swing")
    return PowerTimeSeries(
        start=datetime.combine(day, time()),
        step=step,
        samples=samples,
        kind=SeriesKind.POWER,
    )


def insolation_wh_m2(irradiance: PowerTimeSeries) -> float:
    """Integral of an irradiance trace over its whole span, in Wh/m²."""
    if irradiance.kind is not SeriesKind.IRRADIANCE:
        raise AlignmentError("insolation needs an irradiance series")
    return float(irradiance.samples.sum() * irradiance.step_hours)


def read_power_csv(
    path: str,
    kind: SeriesKind,
    interpolate_gaps: bool = False,
    max_gap_steps: int = 2,
) -> PowerTimeSeries:
    """Load a ``timestamp,value`` CSV into a PowerTimeSeries.

    Timestamps must be ISO-8601 on a strictly uniform grid. A gap of up to
    ``max_gap_steps`` missing samples is filled by linear interpolation
    when ``interpolate_gaps`` is set; otherwise, and for any longer gap,
    the load fails naming the offending line.
    """
    rows: list[tuple[int, datetime, float]] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, raw in enumerate(handle, start=1):
            line = raw.strip()
            if not line:
                continue
            if line_no == 1 and line.lower().replace(" ", "") == "timestamp,value":
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise InputFormatError(
                    f"expected 'timestamp,value', got {line!r}", path=path, line=line_no
                )
            try:
                stamp = datetime.fromisoformat(parts[0].strip())
            except ValueError as exc:
                raise InputFormatError(
                    f"bad timestamp {parts[0]!r}: {exc}", path=path, line=line_no
                ) from exc
            try:
                value = float(parts[1])
            except ValueError as exc:
                raise InputFormatError(
                    f"bad value {parts[1]!r}", path=path, line=line_no
                ) from exc
            if not math.isfinite(value) or value < 0:
                raise InputFormatError(
                    f"value must be finite and >= 0, got {value}", path=path, line=line_no
                )
            rows.append((line_no, stamp, value))
    if len(rows) < 2:
        raise InputFormatError("need at least two samples to establish the step", path=path)

    step = rows[1][1] - rows[0][1]
    if step <= timedelta(0):
        raise InputFormatError(
            "timestamps must be strictly increasing", path=path, line=rows[1][0]
        )

    samples: list[float] = [rows[0][2]]
    expected = rows[0][1] + step
    for line_no, stamp, value in rows[1:]:
        if stamp == expected:
            samples.append(value)
            expected += step
            continue
        delta = (stamp - expected) / step
        if delta < 0 or abs(delta - round(delta)) > 1e-9:
            raise InputFormatError(
                f"timestamp {stamp.isoformat()} is off the {step} grid",
                path=path,
                line=line_no,
            )
        missing = int(round(delta))
        if not interpolate_gaps or missing > max_gap_steps:
            raise InputFormatError(
                f"{missing} missing sample(s) before {stamp.isoformat()}",
                path=path,
                line=line_no,
            )
        previous = samples[-1]
        for k in range(1, missing + 1):
            samples.append(previous + (value - previous) * k / (missing + 1))
        samples.append(value)
        expected = stamp + step
    return PowerTimeSeries(start=rows[0][1], step=step, samples=np.array(samples), kind=kind)
