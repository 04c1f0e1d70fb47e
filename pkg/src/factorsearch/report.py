"""Output records and their JSON / CSV / text encodings.

Floats are written with 17 significant digits in both JSON and CSV so the
two formats carry bit-identical values.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = "1.0"
RECORD_FIELDS = ("schema_version", "command", "config", "results", "metadata")


def format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def encode_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: keys in insertion order, floats at full precision."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(k))}: {encode_json(v, indent, _level + 1)}"
            for k, v in obj.items()
        ]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(encode_json(v) for v in obj) + "]"
        items = [pad + encode_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


@dataclass
class OutputRecord:
    command: str
    config: dict
    results: dict
    metadata: dict
    schema_version: str = SCHEMA_VERSION
    # Fields present in a parsed document that this schema version does not know.
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "schema_version": self.schema_version,
            "command": self.command,
            "config": self.config,
            "results": self.results,
            "metadata": self.metadata,
        }
        out.update(self.extra)
        return out

    def table(self) -> list[dict]:
        return self.results.get("steps") or self.results.get("rows", [])


def parse_record(text: str) -> OutputRecord:
    """Inverse of ``render_json``; unknown top-level keys land in ``extra``."""
    doc = json.loads(text)
    missing = [k for k in RECORD_FIELDS if k not in doc]
    if missing:
        raise ValueError(f"record is missing fields: {', '.join(missing)}")
    extra = {k: v for k, v in doc.items() if k not in RECORD_FIELDS}
    return OutputRecord(
        command=doc["command"],
        config=doc["config"],
        results=doc["results"],
        metadata=doc["metadata"],
        schema_version=doc["schema_version"],
        extra=extra,
    )


def render_json(record: OutputRecord) -> str:
    return encode_json(record.to_dict()) + "\n"


def _columns(rows: list[dict]) -> list[str]:
    """Scalar-valued keys in first-seen order; nested values stay JSON-only."""
    columns: list[str] = []
    for row in rows:
        for key, value in row.items():
            if key not in columns and not isinstance(value, (dict, list, tuple)):
                columns.append(key)
    return columns


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "" if math.isnan(value) else format_float(value)
    return str(value)


def render_csv(record: OutputRecord) -> str:
    rows = record.table()
    columns = _columns(rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def render_text(record: OutputRecord) -> str:
    lines = [f"{record.command} (schema {record.schema_version})"]
    for key, value in record.results.items():
        if key in ("rows", "steps"):
            continue
        lines.append(f"  {key}: {_cell(value) if not isinstance(value, dict) else value}")
    for title in ("rows", "steps"):
        rows = record.results.get(title)
        if not rows:
            continue
        columns = _columns(rows)
        cells = [[_cell(r.get(c)) for c in columns] for r in rows]
        widths = [max(len(c), *(len(r[i]) for r in cells)) for i, c in enumerate(columns)]
        lines.append("")
        lines.append("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
        for r in cells:
            lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    meta = record.metadata
    lines.append("")
    lines.append(f"seed: {meta.get('seed')}")
    if meta.get("timestamp"):
        lines.append(f"timestamp: {meta['timestamp']}")
    return "\n".join(lines) + "\n"


RENDERERS = {"json": render_json, "csv": render_csv, "text": render_text}
