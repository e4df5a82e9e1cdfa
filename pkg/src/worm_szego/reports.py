"""
Tabular output for the command line.

Every artefact is a ``pandas.DataFrame`` written either as CSV (header row,
RFC-4180 quoting) or as JSON Lines with a leading ``schema`` field. Complex
values are split into ``<name>_re`` / ``<name>_im`` columns.
"""

from __future__ import annotations

import csv
import logging
import sys
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import TextIO

import pandas as pd

from . import config

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")


def complex_columns(name: str, value: complex) -> dict[str, float]:
    value = complex(value)
    return {f"{name}_re": value.real, f"{name}_im": value.imag}


def to_frame(rows: Sequence[Mapping[str, object]]) -> pd.DataFrame:
    """Rows in emission order; column order follows the first row."""
    return pd.DataFrame(list(rows))


def resolve_out(out: str | None) -> Path | None:
    """Output path (absolute or relative to the working directory); None means stdout."""
    if out is None or str(out).strip() in ("", "-"):
        return None
    p = Path(out).expanduser()
    p.parent.mkdir(parents=True, exist_ok=True)
    return p


def render(df: pd.DataFrame, fmt: str) -> str:
    if fmt == "csv":
        return df.to_csv(index=False, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    if fmt == "json":
        payload = df.copy()
        payload.insert(0, "schema", config.JSON_SCHEMA)
        text = payload.to_json(orient="records", lines=True, double_precision=15)
        return text if text.endswith("\n") else text + "\n"
    raise ValueError(f"Unknown output format {fmt!r}. Known: {list(FORMATS)}")


def write_frame(df: pd.DataFrame, fmt: str, out: str | Path | None = None, *, stream: TextIO | None = None) -> Path | None:
    """Write ``df`` to ``out`` (or ``stream``, default stdout). Returns the path written, if any."""
    text = render(df, fmt)
    path = resolve_out(str(out)) if out is not None else None
    if path is None:
        (stream or sys.stdout).write(text)
        return None
    path.write_text(text, encoding="utf-8")
    logger.info("wrote %d rows to %s", len(df), path)
    return path
