"""CSV and JSON plumbing: shortest round-trip floats, config echo sidecars."""

from __future__ import annotations

import json
import math
from pathlib import Path

from . import __version__


def format_value(v) -> str:
    """Shortest round-trip decimal; infinities as +inf/-inf, missing empty."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    f = float(v)
    if math.isnan(f):
        return ""
    if math.isinf(f):
        return "+inf" if f > 0 else "-inf"
    return repr(f)


def parse_value(s: str) -> float:
    if s == "":
        return math.nan
    if s == "+inf":
        return math.inf
    if s == "-inf":
        return -math.inf
    return float(s)


def write_csv(path: str | Path, header: list[str], rows) -> None:
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path: str | Path) -> tuple[list[str], list[list[float]]]:
    text = Path(path).read_text(encoding="utf-8").strip().split("\n")
    header = text[0].split(",")
    rows = [[parse_value(c) for c in line.split(",")] for line in text[1:]]
    return header, rows


def meta_sidecar_path(out_path: str | Path) -> Path:
    return Path(str(out_path) + ".meta.json")


def write_meta(out_path: str | Path, config: dict, extra: dict | None = None) -> None:
    """Config echo + toolkit version, enough to re-run the command exactly."""
    doc = {"toolkit_version": __version__, "config": config}
    if extra:
        doc["result_meta"] = extra
    meta_sidecar_path(out_path).write_text(
        json.dumps(doc, indent=2, sort_keys=True, allow_nan=True) + "\n",
        encoding="utf-8")


def load_json(path: str | Path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
