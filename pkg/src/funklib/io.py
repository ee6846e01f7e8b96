"""Text formats: function specs, grid JSON, spectrum JSON and CSV tables."""
from __future__ import annotations

import csv
import io
import json
import math
import re
from pathlib import Path

import numpy as np

from .harmonics import HarmonicSpectrum, lm_index
from .sphere import GridFunction, SphereGrid


class FormatError(ValueError):
    """Malformed spec string or input file."""


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def grid_function_to_dict(f: GridFunction, **meta) -> dict:
    out = {"n_lat": f.grid.n_lat, "n_lon": f.grid.n_lon, "values": f.values.tolist()}
    out.update(meta)
    return out


def grid_function_from_dict(d: dict) -> GridFunction:
    try:
        grid = SphereGrid(int(d["n_lat"]), int(d["n_lon"]))
        return GridFunction(grid, np.asarray(d["values"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"not a grid function: {exc}") from exc


def spectrum_to_list(s: HarmonicSpectrum, atol: float = 0.0) -> list[dict]:
    return [{"l": l, "m": m, "value": v} for l, m, v in s.terms(atol)]


def spectrum_from_list(items) -> HarmonicSpectrum:
    try:
        terms: dict[tuple[int, int], float] = {}
        for it in items:
            l, m = int(it["l"]), int(it["m"])
            lm_index(l, m)
            terms[(l, m)] = terms.get((l, m), 0.0) + float(it["value"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"not a spectrum list: {exc}") from exc
    return HarmonicSpectrum.from_terms(terms)


def read_json(path: str | Path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def load_function_file(path: str | Path) -> GridFunction | HarmonicSpectrum:
    """A grid-function object or a ``[{l, m, value}, ...]`` spectrum list."""
    data = read_json(path)
    if isinstance(data, dict):
        return grid_function_from_dict(data)
    if isinstance(data, list):
        return spectrum_from_list(data)
    raise FormatError(f"{path}: expected a JSON object or list")


_TERM = re.compile(
    r"^\s*(?:(?P<coef>[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*\*\s*)?"
    r"(?:(?P<const>const):(?P<cval>[^+]+)|ylm:(?P<l>\d+)\s*,\s*(?P<m>[-+]?\d+))\s*$"
)


def parse_function_spec(spec: str) -> GridFunction | HarmonicSpectrum:
    """Parse ``const:<v>``, ``ylm:<l>,<m>`` and ``<c>*term`` joined by ``+``, or ``@file.json``.

    Constants map to the degree-0 coefficient ``v sqrt(4 pi)``.
    """
    spec = spec.strip()
    if spec.startswith("@"):
        return load_function_file(spec[1:])
    if not spec:
        raise FormatError("empty function spec")
    terms: dict[tuple[int, int], float] = {}
    for raw in spec.split("+"):
        m = _TERM.match(raw)
        if not m:
            raise FormatError(f"cannot parse term {raw!r} in function spec {spec!r}")
        coef = float(m["coef"]) if m["coef"] else 1.0
        if m["const"]:
            try:
                v = float(m["cval"])
            except ValueError as exc:
                raise FormatError(f"bad constant in {raw!r}") from exc
            key, val = (0, 0), coef * v * math.sqrt(4.0 * math.pi)
        else:
            l, mm = int(m["l"]), int(m["m"])
            if abs(mm) > l:
                raise FormatError(f"|m| > l in {raw!r}")
            key, val = (l, mm), coef
        terms[key] = terms.get(key, 0.0) + val
    return HarmonicSpectrum.from_terms(terms)


def parse_vector(text: str) -> np.ndarray:
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise FormatError(f"bad vector {text!r}") from exc
    if v.size != 3 or not np.linalg.norm(v) > 0:
        raise FormatError(f"expected a non-zero 3-vector, got {text!r}")
    return v / np.linalg.norm(v)


def parse_floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise FormatError(f"bad number list {text!r}") from exc


def parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise FormatError(f"bad integer list {text!r}") from exc


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"
