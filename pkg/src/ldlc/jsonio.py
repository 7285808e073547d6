"""Deterministic JSON output: sorted keys, no timestamps, run config embedded."""
from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__


def _default(obj):
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, default=_default, separators=(",", ":")) + "\n"


def envelope(kind: str, payload, run_config: dict) -> dict:
    return {"artifact": "ldlc", "version": __version__, "kind": kind, "run_config": run_config, "result": payload}


def write(path, kind: str, payload, run_config: dict) -> dict:
    doc = envelope(kind, payload, run_config)
    Path(path).write_text(dumps(doc))
    return doc


def read(path) -> dict:
    doc = json.loads(Path(path).read_text())
    return doc["result"] if isinstance(doc, dict) and "result" in doc and "artifact" in doc else doc


def write_lines(path, records, run_config: dict) -> None:
    """JSON lines: a header line with the run config, then one record per line."""
    with open(path, "w") as fh:
        fh.write(dumps({"artifact": "ldlc", "version": __version__, "run_config": run_config}))
        for rec in records:
            fh.write(dumps(rec))
