"""Named component presets and the preset lookup machinery.

Built-in presets cover the reference PV panel and the lower/upper cost
bounds for vanadium-redox and lithium-ion storage. Extra presets (or
overrides of the built-ins) can be dropped into a directory of JSON files
named by the ``LEVELCOST_PRESET_DIR`` environment variable; each file
holds one spec as {"kind": "pv"|"storage", <field>: <value>, ...} and is
registered under its file stem.
"""

import json
import os
from dataclasses import fields
from pathlib import Path

from .components import PvArraySpec, StorageSpec
from .errors import InputFormatError

PRESET_DIR_ENV = "LEVELCOST_PRESET_DIR"

PV_PRESETS: dict[str, PvArraySpec] = {
    "sharp-nd250": PvArraySpec(
        capital_per_unit=120.0,
        install_per_unit=108.0,
        om_per_unit_year=6.0,
        rated_power_w=250.0,
        efficiency=0.153,
        panel_area_m2=1.64,
        degradation=0.005,
    ),
}

# Storage ships with a 2 MW / 5 MWh rating; capacity is an ordinary config
# field and scenarios may override it.
STORAGE_PRESETS: dict[str, StorageSpec] = {
    "vrb-lower": StorageSpec(
        capital_per_kwh=760.0,
        om_per_kwh_year=100.0,
        power_rating_mw=2.0,
        energy_capacity_mwh=5.0,
        round_trip_efficiency=0.70,
        degradation=0.01,
        lifetime_years=20,
    ),
    "vrb-upper": StorageSpec(
        capital_per_kwh=1600.0,
        om_per_kwh_year=140.0,
        power_rating_mw=2.0,
        energy_capacity_mwh=5.0,
        round_trip_efficiency=0.70,
        degradation=0.01,
        lifetime_years=20,
    ),
    "liion-lower": StorageSpec(
        capital_per_kwh=715.0,
        om_per_kwh_year=80.0,
        power_rating_mw=2.0,
        energy_capacity_mwh=5.0,
        round_trip_efficiency=0.90,
        degradation=0.01,
        lifetime_years=15,
    ),
    "liion-upper": StorageSpec(
        capital_per_kwh=1640.0,
        om_per_kwh_year=95.0,
        power_rating_mw=2.0,
        energy_capacity_mwh=5.0,
        round_trip_efficiency=0.90,
        degradation=0.01,
        lifetime_years=15,
    ),
}


def _spec_from_mapping(path: str, data: dict) -> tuple[str, object]:
    kind = data.get("kind")
    if kind not in ("pv", "storage"):
        raise InputFormatError('preset "kind" must be "pv" or "storage"', path=path)
    cls = PvArraySpec if kind == "pv" else StorageSpec
    allowed = {f.name for f in fields(cls)}
    payload = {k: v for k, v in data.items() if k != "kind"}
    unknown = set(payload) - allowed
    if unknown:
        raise InputFormatError(f"unknown preset fields: {sorted(unknown)}", path=path)
    missing = allowed - set(payload)
    if missing:
        raise InputFormatError(f"preset missing fields: {sorted(missing)}", path=path)
    return kind, cls(**payload)


def _external_presets() -> tuple[dict[str, PvArraySpec], dict[str, StorageSpec]]:
    directory = os.environ.get(PRESET_DIR_ENV)
    pv: dict[str, PvArraySpec] = {}
    storage: dict[str, StorageSpec] = {}
    if not directory:
        return pv, storage
    for path in sorted(Path(directory).glob("*.json")):
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"invalid JSON: {exc}", path=str(path)) from exc
        kind, spec = _spec_from_mapping(str(path), data)
        if kind == "pv":
            pv[path.stem] = spec
        else:
            storage[path.stem] = spec
    return pv, storage


def get_pv_preset(name: str) -> PvArraySpec:
    pv, _ = _external_presets()
    merged = {**PV_PRESETS, **pv}
    try:
        return merged[name]
    except KeyError:
        raise KeyError(f"unknown PV preset {name!r}; available: {sorted(merged)}") from None


def get_storage_preset(name: str) -> StorageSpec:
    _, storage = _external_presets()
    merged = {**STORAGE_PRESETS, **storage}
    try:
        return merged[name]
    except KeyError:
        raise KeyError(f"unknown storage preset {name!r}; available: {sorted(merged)}") from None


def list_presets() -> dict[str, list[str]]:
    """All preset names by kind, external directory included."""
    pv, storage = _external_presets()
    return {
        "pv": sorted({**PV_PRESETS, **pv}),
        "storage": sorted({**STORAGE_PRESETS, **storage}),
    }
