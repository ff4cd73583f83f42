"""File formats: CSV datasets in, JSON/CSV/SVG results out.

Floats are always written with 17 significant digits, which round-trips
IEEE doubles exactly: serializing and re-parsing reproduces every numeric
field bit for bit.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .data import IndexEstimate, SampleMatrix, SensitivityDataset, validate_dataset
from .errors import DataError


def fmt(x: float) -> str:
    """Shortest-safe decimal form of a double (17 significant digits)."""
    return format(float(x), ".17g")


def _read_csv_columns(path: Path, cols: list[str]) -> np.ndarray:
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        for name in cols:
            if name not in header:
                raise DataError(f"{path}: no column named {name!r}")
        pick = [header.index(name) for name in cols]
        rows = []
        for rownum, rec in enumerate(reader, start=1):
            if not rec:
                continue
            if len(rec) != len(header):
                raise DataError(f"{path}: row {rownum} has {len(rec)} fields, "
                                f"expected {len(header)}")
            vals = []
            for col in pick:
                cell = rec[col].strip()
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise DataError(
                        f"{path}: non-numeric value {cell!r} at row {rownum}, "
                        f"column {header[col]!r}") from None
            rows.append(vals)
    if len(rows) < 2:
        raise DataError(f"{path}: need at least 2 data rows, got {len(rows)}")
    return np.asarray(rows, dtype=np.float64)


def read_columns_csv(path, cols: Sequence[str], prefix: str = "Y") -> SampleMatrix:
    """Load the named columns of a headered CSV as one SampleMatrix."""
    cols = list(cols)
    if not cols:
        raise DataError("need at least one column")
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    return SampleMatrix(_read_csv_columns(path, cols), tuple(cols), prefix=prefix)


def read_dataset_csv(path, x_cols: Sequence[str], y_cols: Sequence[str]) -> SensitivityDataset:
    """Load a dataset from a headered CSV, selecting input/output columns.

    Raises :class:`DataError` for a missing header, unknown or overlapping
    selectors, ragged rows, or non-numeric cells (reported with 1-based data
    row and the column name).
    """
    x_cols = list(x_cols)
    y_cols = list(y_cols)
    if not x_cols or not y_cols:
        raise DataError("need at least one input and one output column")
    overlap = set(x_cols) & set(y_cols)
    if overlap:
        raise DataError(f"column {sorted(overlap)[0]!r} selected as both "
                        "input and output")
    path = Path(path)
    if not path.exists():
        raise DataError(f"no such file: {path}")
    data = _read_csv_columns(path, x_cols + y_cols)
    nx = len(x_cols)
    return validate_dataset(data[:, :nx], data[:, nx:],
                            x_names=tuple(x_cols), y_names=tuple(y_cols))


def write_dataset_csv(path, ds: SensitivityDataset) -> None:
    """Write inputs and outputs side by side, exact-round-trip floats."""
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([*ds.x.names, *ds.y.names])
        for xr, yr in zip(ds.x.values, ds.y.values):
            w.writerow([fmt(v) for v in xr] + [fmt(v) for v in yr])


def _json_emit(value, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = ",\n".join(f'{pad}  {json.dumps(k)}: {_json_emit(v, indent + 1)}'
                           for k, v in value.items())
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = ",\n".join(f"{pad}  {_json_emit(v, indent + 1)}" for v in value)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt(value)
    if value is None:
        return "null"
    return json.dumps(value)


def estimate_document(est: IndexEstimate, threshold: float | None = None) -> dict:
    """JSON-ready dict for an estimate (the indices.json schema)."""
    inputs = []
    for i, name in enumerate(est.input_names):
        entry: dict = {"name": name, "index": float(est.indices[i])}
        if est.components is not None:
            entry["components"] = {k: float(v[i]) for k, v in est.components.items()}
        if est.bootstrap is not None and "index" in est.bootstrap.stats:
            tab = est.bootstrap.stats["index"]
            entry["ci"] = {"low": float(tab.ci_low[i]),
                           "high": float(tab.ci_high[i]),
                           "type": est.bootstrap.ci_type,
                           "conf": est.bootstrap.confidence}
        inputs.append(entry)
    doc = {
        "method": est.method,
        "bound": float(est.bound),
        "converged": bool(est.converged),
        "inputs": inputs,
        "separations": [
            {"input": name, "class": h + 1,
             "x": float(est.representatives[i, h]),
             "value": float(est.separations[i, h])}
            for i, name in enumerate(est.input_names)
            for h in range(est.separations.shape[1])
        ],
    }
    if threshold is not None:
        doc["threshold"] = float(threshold)
    return doc


def write_results(est: IndexEstimate, out_dir, threshold: float | None = None,
                  base: str = "indices") -> dict[str, Path]:
    """Write <base>.json, <base>.csv and separations.csv into ``out_dir``.

    Returns the mapping of artifact kind to path.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths: dict[str, Path] = {}

    doc = estimate_document(est, threshold)
    jpath = out / f"{base}.json"
    jpath.write_text(_json_emit(doc) + "\n")
    paths["json"] = jpath

    comp_keys = list(est.components.keys()) if est.components else []
    has_ci = est.bootstrap is not None and "index" in est.bootstrap.stats
    cpath = out / f"{base}.csv"
    with cpath.open("w", newline="") as fh:
        w = csv.writer(fh)
        head = ["input", "index", *comp_keys]
        if has_ci:
            head += ["ci_low", "ci_high"]
        w.writerow(head)
        for i, name in enumerate(est.input_names):
            row = [name, fmt(est.indices[i])]
            row += [fmt(est.components[k][i]) for k in comp_keys]
            if has_ci:
                tab = est.bootstrap.stats["index"]
                row += [fmt(tab.ci_low[i]), fmt(tab.ci_high[i])]
            w.writerow(row)
    paths["csv"] = cpath

    spath = out / "separations.csv"
    with spath.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["input", "class", "x", "value"])
        for entry in doc["separations"]:
            w.writerow([entry["input"], entry["class"], fmt(entry["x"]),
                        fmt(entry["value"])])
    paths["separations"] = spath
    return paths


def write_smap_results(matrix: np.ndarray, input_names: Sequence[str],
                       output_names: Sequence[str], out_dir) -> dict[str, Path]:
    """Write the (d, k) sensitivity map as smap.json + smap.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    doc = {
        "method": "1d-smap",
        "inputs": list(input_names),
        "outputs": list(output_names),
        "matrix": [[float(v) for v in row] for row in matrix],
    }
    jpath = out / "smap.json"
    jpath.write_text(_json_emit(doc) + "\n")
    cpath = out / "smap.csv"
    with cpath.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["input", *output_names])
        for name, row in zip(input_names, matrix):
            w.writerow([name, *[fmt(v) for v in row]])
    return {"json": jpath, "csv": cpath}


def load_results(path) -> dict:
    """Parse a results JSON back into plain Python structures."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON ({exc})") from None
