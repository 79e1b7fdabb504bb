"""On-disk formats: series CSV, truth JSON, report JSON and adjacency CSVs.

All writers are deterministic: UTF-8, LF line endings, floats printed with
17 significant digits, JSON keys sorted. Reading a report and writing it
back reproduces the original bytes.
"""

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .adjacency import AdjacencyMatrix
from .exceptions import DataError, EmptyData
from .series import MultivariateTimeSeries, from_matrix
from .simulate import GroundTruth

__all__ = [
    "format_float",
    "dumps_canonical",
    "write_series_csv",
    "read_series_csv",
    "truth_to_dict",
    "truth_from_dict",
    "write_truth_json",
    "read_truth_json",
    "report_to_dict",
    "write_report_json",
    "read_report_json",
    "adjacency_from_report",
    "write_adjacency_csv",
    "read_adjacency_csv",
]


def format_float(x) -> str:
    s = "%.17g" % x
    if not any(ch in s for ch in ".eEn"):
        s += ".0"
    return s


def _scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format_float(float(v)) if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def _dump(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_dump(obj[k], indent, level + 1)}"
                 for k in sorted(obj, key=str)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent, level + 1) for v in obj) + "\n" + end + "]"
    return _scalar(obj)


def dumps_canonical(obj, indent: int = 2) -> str:
    """Serialize to JSON with sorted keys and 17-significant-digit floats."""
    return _dump(obj, indent, 0) + "\n"


def _write_text(path, text):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _csv_text(rows):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


# -- series ------------------------------------------------------------------

def write_series_csv(series: MultivariateTimeSeries, path) -> None:
    """One header row of names, then one row per timestep."""
    rows = [list(series.names)]
    rows += [[format_float(x) for x in series.values[:, t]] for t in range(series.T)]
    _write_text(path, _csv_text(rows))


def read_series_csv(path) -> MultivariateTimeSeries:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise EmptyData(f"{path}: file is empty")
    names = [s.strip() for s in rows[0]]
    body = rows[1:]
    if not body:
        raise EmptyData(f"{path}: no data rows")
    values = np.empty((len(names), len(body)))
    for t, row in enumerate(body):
        if len(row) != len(names):
            raise DataError(f"{path}: data row {t + 1} has {len(row)} fields, expected {len(names)}")
        for i, cell in enumerate(row):
            try:
                values[i, t] = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: unparseable value {cell!r} at timestep {t}, variable {names[i]!r}"
                ) from None
    return from_matrix(values, names)


# -- ground truth ------------------------------------------------------------

def truth_to_dict(truth: GroundTruth, mode=None, noise=None, seed=None) -> dict:
    names = list(truth.names)
    return {
        "n": truth.n,
        "max_lag": truth.max_lag,
        "variables": names,
        "edges": [
            {"source": names[s], "target": names[t], "lag": lag, "coefficient": c}
            for s, t, lag, c in truth.edge_list()
        ],
        "mode": mode,
        "noise": None if noise is None else noise.to_dict(),
        "seed": seed if seed is not None else truth.seed,
        "stabilization_scale": truth.scale,
    }


def truth_from_dict(d: dict) -> GroundTruth:
    names = list(d.get("variables") or [f"X{i + 1}" for i in range(d["n"])])
    index = {name: k for k, name in enumerate(names)}

    def ref(v):
        return index[v] if isinstance(v, str) else int(v)

    edges = [(ref(e["source"]), ref(e["target"]), int(e["lag"]), float(e["coefficient"]))
             for e in d.get("edges", [])]
    return GroundTruth.from_edges(int(d["n"]), edges, max_lag=int(d.get("max_lag") or 1),
                                  names=names, scale=float(d.get("stabilization_scale", 1.0)),
                                  seed=d.get("seed"))


def write_truth_json(truth: GroundTruth, path, mode=None, noise=None, seed=None) -> None:
    _write_text(path, dumps_canonical(truth_to_dict(truth, mode, noise, seed)))


def read_truth_json(path) -> GroundTruth:
    with open(path, encoding="utf-8") as fh:
        return truth_from_dict(json.load(fh))


# -- inference report --------------------------------------------------------

def _matrix_dict(m: AdjacencyMatrix):
    return {
        "decisions": m.decisions.astype(int).tolist(),
        "geweke": m.strengths.tolist(),
        "p_values": m.p_values.tolist(),
    }


def report_to_dict(report) -> dict:
    names = list(report.names)
    edges = []
    for b, m in report.edge_records():
        edges.append({
            "source": names[b.source],
            "target": names[b.target],
            "bvgc": {k: v for k, v in b.to_dict().items() if k not in ("source", "target")},
            "mvgc": {k: v for k, v in m.to_dict().items() if k not in ("source", "target")},
            "combined": bool(report.a_combined.decisions[b.source, b.target]),
        })
    return {
        "config": {**report.config.to_dict(), "fingerprint": report.fingerprint},
        "variables": names,
        "matrices": {
            "bvgc": _matrix_dict(report.a_bvgc),
            "mvgc": _matrix_dict(report.a_mvgc),
            "combined": _matrix_dict(report.a_combined),
        },
        "edges": edges,
    }


def write_report_json(report, path) -> None:
    _write_text(path, dumps_canonical(report if isinstance(report, dict) else report_to_dict(report)))


def read_report_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def adjacency_from_report(d: dict, which: str = "combined") -> AdjacencyMatrix:
    m = d["matrices"][which]
    kind = which if which in ("bvgc", "mvgc", "combined") else "combined"
    return AdjacencyMatrix(np.array(m["decisions"], dtype=bool), kind,
                           np.array(m["geweke"], dtype=float),
                           np.array(m["p_values"], dtype=float), d.get("variables"))


# -- adjacency CSV -----------------------------------------------------------

def write_adjacency_csv(matrix: AdjacencyMatrix, path, values: str = "decisions") -> None:
    """Square CSV with a header row and a leading column of names.

    ``values`` picks the cell content: ``decisions`` (0/1), ``geweke`` or
    ``p_values``. Rows are sources, columns are targets.
    """
    if values == "decisions":
        cells = [[str(int(v)) for v in row] for row in matrix.decisions]
    elif values in ("geweke", "p_values"):
        arr = matrix.strengths if values == "geweke" else matrix.p_values
        cells = [[format_float(v) for v in row] for row in arr]
    else:
        raise ValueError(f"unknown adjacency value kind {values!r}")
    names = list(matrix.names)
    rows = [[""] + names] + [[names[i]] + cells[i] for i in range(matrix.n)]
    _write_text(path, _csv_text(rows))


def read_adjacency_csv(path, kind: str = "combined") -> AdjacencyMatrix:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    names = rows[0][1:]
    dec = np.array([[float(c) != 0 for c in r[1:]] for r in rows[1:]], dtype=bool)
    return AdjacencyMatrix(dec, kind, names=names)
