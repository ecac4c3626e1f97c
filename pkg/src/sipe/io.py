"""File formats: series CSV, precision JSON, long-format result CSVs."""

import csv
import json
import math

import numpy as np

from .core import InputError, PrecisionEstimate, TimeSeriesMatrix, frequency_grid

ZERO_CUTOFF = 1e-12


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def read_series_csv(path):
    """Read a CSV of time points (rows) by series (columns).

    A single header row is detected when its fields are not all numeric;
    otherwise columns are named ``V1 .. Vp``.
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    if not rows:
        raise InputError(f"{path}: empty file")
    names = None
    if not all(_is_number(c) for c in rows[0]):
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
    width = len(names) if names else len(rows[0])
    data = []
    for lineno, row in enumerate(rows, 2 if names else 1):
        if len(row) != width:
            raise InputError(f"{path}: line {lineno} has {len(row)} fields, expected {width}")
        try:
            data.append([float(c) for c in row])
        except ValueError:
            raise InputError(f"{path}: non-numeric value on line {lineno}") from None
    return TimeSeriesMatrix(np.array(data, dtype=float).reshape(len(data), width), names)


def write_series_csv(path, ts):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ts.names)
        for row in ts.values:
            w.writerow([repr(float(v)) for v in row])


def _clean(x):
    x = float(x)
    return 0.0 if abs(x) < ZERO_CUTOFF else x


def _encode_matrix(M):
    return [[[_clean(z.real), _clean(z.imag)] for z in row] for row in M]


def precision_to_dict(est, names=None, extra=None):
    """JSON-ready dict: per-frequency complex matrices as ``[re, im]`` pairs.

    Only estimated frequencies are listed; entries below 1e-12 in magnitude
    are written as exact zeros.
    """
    grid = est.grid
    lam = est.lam
    finite = lam[np.isfinite(lam)]
    scalar_lam = finite.size and np.all(finite == finite[0])
    freqs = []
    for pos in np.flatnonzero(est.solved):
        freqs.append(
            {
                "index": int(grid.indices[pos]),
                "frequency": float(grid.frequencies[pos]),
                "lambda": None if math.isnan(lam[pos]) else float(lam[pos]),
                "matrix": _encode_matrix(est.matrices[pos]),
            }
        )
    out = {
        "n": grid.n,
        "p": est.p,
        "span": est.span,
        "lambda": float(finite[0]) if scalar_lam else None,
        "names": list(names) if names is not None else [f"V{i + 1}" for i in range(est.p)],
        "frequencies": freqs,
        "failures": {str(int(grid.indices[pos])): msg for pos, msg in sorted(est.failures.items())},
    }
    if extra:
        out.update(extra)
    return out


def write_precision_json(path, est, names=None, extra=None):
    with open(path, "w") as fh:
        json.dump(precision_to_dict(est, names, extra), fh, indent=1, sort_keys=False)
        fh.write("\n")


def precision_from_dict(doc):
    """Inverse of :func:`precision_to_dict`; returns ``(estimate, names)``."""
    try:
        n, p = int(doc["n"]), int(doc["p"])
        grid = frequency_grid(n)
        mats = np.full((n, p, p), np.nan + 0j)
        lam = np.full(n, np.nan)
        for entry in doc["frequencies"]:
            pos = int(grid.position(int(entry["index"])))
            arr = np.asarray(entry["matrix"], dtype=float)
            if arr.shape != (p, p, 2):
                raise InputError(f"matrix at index {entry['index']} has shape {arr.shape}")
            mats[pos] = arr[..., 0] + 1j * arr[..., 1]
            if entry.get("lambda") is not None:
                lam[pos] = float(entry["lambda"])
        failures = {int(grid.position(int(j))): msg for j, msg in doc.get("failures", {}).items()}
    except (KeyError, TypeError, ValueError) as err:
        raise InputError(f"malformed precision JSON: {err}") from None
    solved = np.all(np.isfinite(mats), axis=(1, 2))
    est = PrecisionEstimate(grid, mats, lam=lam, solved=solved, failures=failures,
                            span=doc.get("span"))
    return est, doc.get("names") or [f"V{i + 1}" for i in range(p)]


def read_precision_json(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as err:
            raise InputError(f"{path}: not valid JSON ({err})") from None
    return precision_from_dict(doc)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return "" if math.isnan(v) else repr(v)
    return str(v)


def write_rows_csv(path, rows, columns):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row.get(c)) for c in columns])


def write_matrix_csv(path, matrix, names):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([""] + list(names))
        for name, row in zip(names, matrix):
            w.writerow([name] + [_fmt(float(v)) for v in row])


def read_matrix_csv(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    names = rows[0][1:]
    values = np.array([[float(v) if v else math.nan for v in r[1:]] for r in rows[1:]])
    return values, names


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _nan_to_none(obj):
    if isinstance(obj, float) and math.isnan(obj):
        return None
    if isinstance(obj, dict):
        return {k: _nan_to_none(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_nan_to_none(v) for v in obj]
    return obj


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_nan_to_none(obj), fh, indent=1, default=_json_default)
        fh.write("\n")
