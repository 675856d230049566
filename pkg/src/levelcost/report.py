"""Serialization of metric results and sweep tables.

Human-facing tables (csv, markdown) round to 6 significant digits; the
json-lines stream keeps full float precision so results re-ingest to the
exact values. Nothing time- or host-dependent is written, so identical
inputs produce byte-identical files.
"""

import hashlib
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .finance import LevelizedMetric

FORMATS = ("csv", "markdown", "jsonl")

_EXTENSIONS = {"csv": ".csv", "markdown": ".md", "jsonl": ".jsonl"}


def fmt_number(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def inputs_fingerprint(payload: Mapping) -> str:
    """Stable short hash of the inputs behind a result, for audit trails."""
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def metric_record(metric: LevelizedMetric, fingerprint: str) -> dict:
    return {
        "name": metric.name,
        "pv_cost": metric.pv_cost,
        "pv_energy": metric.pv_energy,
        "value": metric.value,
        "inputs_fingerprint": fingerprint,
    }


def metric_from_record(record: Mapping) -> LevelizedMetric:
    return LevelizedMetric(
        name=record["name"],
        pv_cost=record["pv_cost"],
        pv_energy=record["pv_energy"],
        value=record["value"],
    )


def render_csv(rows: Sequence[Mapping], columns: Sequence[str]) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(fmt_number(row.get(col)) for col in columns))
    return "\n".join(lines) + "\n"


def render_markdown(rows: Sequence[Mapping], columns: Sequence[str]) -> str:
    header = "| " + " | ".join(columns) + " |"
    rule = "|" + "|".join(" --- " for _ in columns) + "|"
    lines = [header, rule]
    for row in rows:
        lines.append("| " + " | ".join(fmt_number(row.get(col)) for col in columns) + " |")
    return "\n".join(lines) + "\n"


def render_jsonl(records: Iterable[Mapping]) -> str:
    return "".join(json.dumps(record, sort_keys=True) + "\n" for record in records)


def read_jsonl(path: str) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records


def write_table(
    out_dir: str,
    stem: str,
    rows: Sequence[Mapping],
    columns: Sequence[str],
    formats: Sequence[str],
) -> list[Path]:
    """Write one logical table in each requested format, return the paths."""
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        path = directory / (stem + _EXTENSIONS[fmt])
        if fmt == "csv":
            path.write_text(render_csv(rows, columns), encoding="utf-8")
        elif fmt == "markdown":
            path.write_text(render_markdown(rows, columns), encoding="utf-8")
        else:
            path.write_text(render_jsonl(rows), encoding="utf-8")
        written.append(path)
    return written
