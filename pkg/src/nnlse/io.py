"""CSV/JSON writers. Floats are written with 17 significant digits."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

FMT = "{:.17g}"


def fmt(x) -> str:
    return FMT.format(float(x))


def _open(path):
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    return p.open("w", newline="")


def write_dense_csv(path, matrix: np.ndarray):
    """Dense complex matrix; each cell is 're+imj' in Python complex syntax."""
    with _open(path) as fh:
        w = csv.writer(fh)
        for row in np.asarray(matrix, dtype=complex):
            w.writerow([f"{fmt(z.real)}{'+' if z.imag >= 0 or np.isnan(z.imag) else '-'}{fmt(abs(z.imag))}j" for z in row])


def read_dense_csv(path) -> np.ndarray:
    with open(path, newline="") as fh:
        return np.array([[complex(cell) for cell in row] for row in csv.reader(fh)])


def write_triplets(path, matrix: np.ndarray, tol: float = 0.0):
    """Sparse text format: header line 'row,col,re,im', then one nonzero per line."""
    m = np.asarray(matrix, dtype=complex)
    rows, cols = np.nonzero(np.abs(m) > tol)
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(["row", "col", "re", "im"])
        for r, c in zip(rows, cols):
            w.writerow([r, c, fmt(m[r, c].real), fmt(m[r, c].imag)])


def read_triplets(path, shape) -> np.ndarray:
    out = np.zeros(shape, dtype=complex)
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        for rec in reader:
            out[int(rec["row"]), int(rec["col"])] = float(rec["re"]) + 1j * float(rec["im"])
    return out


def write_rows(path, header, rows):
    with _open(path) as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": float(obj.real), "im": float(obj.imag)}
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True)


def write_json(path, obj):
    with _open(path) as fh:
        fh.write(dumps(obj) + "\n")
