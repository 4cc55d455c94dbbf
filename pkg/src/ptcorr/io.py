"""CSV/JSON serialization with an embedded run manifest.

Floats are written with ``repr``, the shortest string that round-trips to
the same double. Undefined values are ``nan`` in CSV and ``null`` in JSON.
Every CSV starts with ``#`` comment lines: one carrying the manifest as JSON
(without timestamp) and a separate ``# timestamp:`` line, so determinism
checks can drop that single line.
"""

from __future__ import annotations

import datetime as _dt
import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .ensembles import BIT_GENERATOR
from .propagator import Geometry
from .sweep import CurveSet, VisibilityGrid

MANIFEST_PREFIX = "# manifest: "
TIMESTAMP_PREFIX = "# timestamp: "


def make_manifest(command: str, params: dict, seed=None) -> dict:
    return {
        "command": command,
        "params": _jsonable(params),
        "seed": seed,
        "rng": BIT_GENERATOR,
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def fmt(x) -> str:
    x = float(x)
    return "nan" if math.isnan(x) else repr(x)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Geometry):
        return obj.value
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if math.isnan(obj) else float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def strip_timestamp(text: str) -> str:
    """Remove the volatile timestamp from CSV or JSON output text."""
    if text.lstrip().startswith("{"):
        data = json.loads(text)
        data.get("manifest", {}).pop("timestamp", None)
        return dumps(data)
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith(TIMESTAMP_PREFIX))


def _header(manifest: dict) -> list[str]:
    stable = {k: v for k, v in manifest.items() if k != "timestamp"}
    return [
        MANIFEST_PREFIX + json.dumps(_jsonable(stable), sort_keys=True) + "\n",
        TIMESTAMP_PREFIX + str(manifest.get("timestamp", "")) + "\n",
    ]


def grid_csv(grid: VisibilityGrid, manifest: dict) -> str:
    lines = _header(manifest)
    lines.append("kl,gok_re,gok_im,visibility\n")
    for j, g in enumerate(grid.gok_axis):
        re, im = fmt(g.real), fmt(g.imag)
        for i, kl in enumerate(grid.kl_axis):
            lines.append(f"{fmt(kl)},{re},{im},{fmt(grid.values[j, i])}\n")
    return "".join(lines)


def curves_csv(curves: CurveSet, manifest: dict) -> str:
    lines = _header(manifest)
    if len(curves.configs) == 1:
        g = curves.configs[0]
        lines.append("length,visibility\n")
        lines += [f"{fmt(l)},{fmt(v)}\n" for l, v in zip(curves.lengths, curves.values[g])]
    else:
        lines.append("geometry,length,visibility\n")
        for g in curves.configs:
            lines += [f"{g.value},{fmt(l)},{fmt(v)}\n" for l, v in zip(curves.lengths, curves.values[g])]
    return "".join(lines)


def _split(text: str):
    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith(MANIFEST_PREFIX):
            meta = json.loads(line[len(MANIFEST_PREFIX):])
        elif line.startswith(TIMESTAMP_PREFIX):
            meta["timestamp"] = line[len(TIMESTAMP_PREFIX):]
        elif line and not line.startswith("#"):
            rows.append(line.split(","))
    return meta, rows[0], rows[1:]


def read_grid_csv(path) -> tuple[VisibilityGrid, dict]:
    """Parse a map-mode CSV back into a grid and its manifest."""
    meta, header, rows = _split(Path(path).read_text(encoding="utf-8"))
    if header != ["kl", "gok_re", "gok_im", "visibility"]:
        raise ValueError(f"not a visibility map CSV: header {header}")
    kl = list(dict.fromkeys(float(r[0]) for r in rows))
    gok = list(dict.fromkeys(complex(float(r[1]), float(r[2])) for r in rows))
    values = [float(r[3]) for r in rows]
    geometry = meta.get("params", {}).get("geometry", Geometry.M_XMTX.value)
    return VisibilityGrid(geometry, kl, gok, values), meta


def read_curves_csv(path) -> tuple[dict, dict]:
    """Parse a curve-mode CSV into ``{geometry: (lengths, values)}`` and the manifest."""
    meta, header, rows = _split(Path(path).read_text(encoding="utf-8"))
    out: dict = {}
    if header == ["length", "visibility"]:
        g = meta.get("params", {}).get("geometry")
        out[g] = (np.array([float(r[0]) for r in rows]), np.array([float(r[1]) for r in rows]))
    elif header == ["geometry", "length", "visibility"]:
        for name in dict.fromkeys(r[0] for r in rows):
            sel = [r for r in rows if r[0] == name]
            out[name] = (np.array([float(r[1]) for r in sel]), np.array([float(r[2]) for r in sel]))
    else:
        raise ValueError(f"not a visibility curve CSV: header {header}")
    return out, meta
