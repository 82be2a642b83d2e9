"""Row serialisation for stdout and JSON summaries persisted under REPORT_DIR."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, TextIO

from app.core.config import settings
from app.core.time_utils import utc_now
from app.schemas.rows import OutputRow

FORMATS = ("csv", "json-lines")


def write_rows(rows: Sequence[OutputRow], fmt: str, stream: TextIO) -> None:
    """CSV with one header per run, or one JSON object per line tagged with its schema."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if not rows:
        return
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=rows[0].columns(), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.cells())
        return
    for row in rows:
        stream.write(json.dumps({"row": row.schema_name, **row.cells()}) + "\n")


def read_csv_rows(text: str):
    """Inverse of the CSV branch of write_rows, as plain cell dicts."""
    return list(csv.DictReader(text.splitlines()))


def write_report(name: str, payload: Dict[str, Any], directory: Optional[Path] = None) -> Path:
    """Persist a JSON summary as <REPORT_DIR>/<name>.json and return its path."""
    target_dir = Path(settings.REPORT_DIR) if directory is None else directory
    target_dir.mkdir(parents=True, exist_ok=True)
    path = target_dir / f"{name}.json"
    document = {"generated_at": utc_now().isoformat(), **payload}
    path.write_text(json.dumps(document, indent=2), encoding="utf-8")
    return path
