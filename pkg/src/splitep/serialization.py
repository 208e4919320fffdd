"""JSON instance files and CSV traces.

Instance file layout (``format`` = ``"splitep-instance"``, ``version`` = 1)::

    {
      "format": "splitep-instance", "version": 1,
      "kind": "sep" | "scep",
      "spec": {...InstanceSpec fields...} | null,
      "C": {"type": "box", "lo": [...], "hi": [...]} | {"type": "whole_space", "dim": d},
      "Q": same as C,
      "A": [[row], ...],
      "f": [{"type": "quadratic", "P": [[...]], "R": [[...]], "c": [...]}
            | {"type": "rotation"}, ...],
      "F": [...same...],
      "known_solution": [...] | null
    }

Floats are written with ``repr`` precision so files round-trip exactly.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math

import numpy as np

from .bifunctions import QuadraticBifunction, RotationBifunction
from .problem import ScepInstance, SepInstance
from .sets import BoxSet, WholeSpace
from .trace import CSV_COLUMNS

FORMAT = "splitep-instance"
VERSION = 1


class InstanceFormatError(ValueError):
    """Malformed instance file; the message names the offending field."""


def _set_to_dict(S):
    if isinstance(S, BoxSet):
        return {"type": "box", "lo": S.lo.tolist(), "hi": S.hi.tolist()}
    if isinstance(S, WholeSpace):
        return {"type": "whole_space", "dim": S.dim}
    raise TypeError(f"cannot serialize set {type(S).__name__}")


def _bif_to_dict(f):
    if isinstance(f, QuadraticBifunction):
        return {"type": "quadratic", "P": f.P.tolist(), "R": f.R.tolist(), "c": f.c.tolist()}
    if isinstance(f, RotationBifunction):
        return {"type": "rotation"}
    raise TypeError(f"cannot serialize bifunction {type(f).__name__}")


def instance_to_dict(inst) -> dict:
    xs = inst.known_solution
    return {
        "format": FORMAT,
        "version": VERSION,
        "kind": "sep" if isinstance(inst, SepInstance) else "scep",
        "spec": inst.meta.get("spec"),
        "C": _set_to_dict(inst.C),
        "Q": _set_to_dict(inst.Q),
        "A": inst.A.tolist(),
        "f": [_bif_to_dict(f) for f in inst.f_list],
        "F": [_bif_to_dict(F) for F in inst.F_list],
        "known_solution": None if xs is None else xs.tolist(),
    }


def _get(d, key, path):
    if not isinstance(d, dict):
        raise InstanceFormatError(f"field '{path}': expected an object")
    if key not in d:
        raise InstanceFormatError(f"field '{path}.{key}' is missing" if path else
                                  f"field '{key}' is missing")
    return d[key]


def _array(value, path, ndim):
    try:
        a = np.array(value, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InstanceFormatError(f"field '{path}': not numeric ({exc})") from None
    if a.ndim != ndim or a.size == 0:
        raise InstanceFormatError(f"field '{path}': expected a nonempty {ndim}-D array")
    if not np.all(np.isfinite(a)):
        raise InstanceFormatError(f"field '{path}': non-finite entries")
    return a


def _set_from_dict(d, path):
    kind = _get(d, "type", path)
    try:
        if kind == "box":
            return BoxSet(_array(_get(d, "lo", path), f"{path}.lo", 1),
                          _array(_get(d, "hi", path), f"{path}.hi", 1))
        if kind == "whole_space":
            return WholeSpace(int(_get(d, "dim", path)))
    except ValueError as exc:
        if isinstance(exc, InstanceFormatError):
            raise
        raise InstanceFormatError(f"field '{path}': {exc}") from None
    raise InstanceFormatError(f"field '{path}.type': unknown set type {kind!r}")


def _bif_from_dict(d, path):
    kind = _get(d, "type", path)
    if kind == "rotation":
        return RotationBifunction()
    if kind == "quadratic":
        P = _array(_get(d, "P", path), f"{path}.P", 2)
        R = _array(_get(d, "R", path), f"{path}.R", 2)
        c = _array(_get(d, "c", path), f"{path}.c", 1)
        try:
            return QuadraticBifunction(P, R, c)
        except ValueError as exc:
            raise InstanceFormatError(f"field '{path}': {exc}") from None
    raise InstanceFormatError(f"field '{path}.type': unknown bifunction type {kind!r}")


def instance_from_dict(d):
    if _get(d, "format", "") != FORMAT:
        raise InstanceFormatError(f"field 'format': expected {FORMAT!r}")
    if _get(d, "version", "") != VERSION:
        raise InstanceFormatError(f"field 'version': unsupported {d['version']!r}")
    kind = _get(d, "kind", "")
    if kind not in ("sep", "scep"):
        raise InstanceFormatError(f"field 'kind': expected 'sep' or 'scep', got {kind!r}")
    C = _set_from_dict(_get(d, "C", ""), "C")
    Q = _set_from_dict(_get(d, "Q", ""), "Q")
    A = _array(_get(d, "A", ""), "A", 2)
    fs = _get(d, "f", "")
    Fs = _get(d, "F", "")
    for name, lst in (("f", fs), ("F", Fs)):
        if not isinstance(lst, list) or not lst:
            raise InstanceFormatError(f"field '{name}': expected a nonempty list")
    fs = [_bif_from_dict(x, f"f[{i}]") for i, x in enumerate(fs)]
    Fs = [_bif_from_dict(x, f"F[{i}]") for i, x in enumerate(Fs)]
    for name, lst, S in (("f", fs, C), ("F", Fs, Q)):
        for i, b in enumerate(lst):
            if getattr(b, "dim", S.dim) != S.dim:
                raise InstanceFormatError(f"field '{name}[{i}]': dimension {b.dim} does not "
                                          f"match its set (dimension {S.dim})")
    xs = d.get("known_solution")
    xs = None if xs is None else _array(xs, "known_solution", 1)
    spec = d.get("spec")
    meta = {"spec": spec} if spec is not None else {}
    try:
        if kind == "sep":
            if len(fs) != 1 or len(Fs) != 1:
                raise InstanceFormatError("field 'f'/'F': kind 'sep' takes exactly one of each")
            return SepInstance(C, Q, A, fs[0], Fs[0], xs, meta)
        return ScepInstance(C, Q, A, fs, Fs, xs, meta)
    except InstanceFormatError:
        raise
    except ValueError as exc:
        raise InstanceFormatError(f"field 'A': {exc}") from None


def dump_instance(inst, path):
    with open(path, "w") as fh:
        json.dump(instance_to_dict(inst), fh)
        fh.write("\n")


def load_instance(path):
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"not valid JSON: {exc}") from None
    return instance_from_dict(d)


def instance_fingerprint(inst) -> str:
    """SHA-256 of the canonical JSON form; equal for identical data."""
    d = instance_to_dict(inst)
    d.pop("spec")
    blob = json.dumps(d, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    return "" if math.isnan(v) else repr(v)


def trace_rows(trace, timing=True):
    for r in trace.rows:
        yield [_fmt(r.n), _fmt(r.D_n), _fmt(r.residual_split), _fmt(r.residual_step),
               _fmt(r.gamma_n), _fmt(r.alpha_n), _fmt(r.delta_n), _fmt(r.fejer_violation),
               _fmt(r.elapsed_ms) if timing else ""]


def write_trace_csv(trace, fh, timing=True):
    """Write the fixed-column trace CSV. ``timing=False`` blanks ``elapsed_ms``."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(trace_rows(trace, timing))


def trace_csv(trace, timing=True) -> str:
    buf = io.StringIO()
    write_trace_csv(trace, buf, timing)
    return buf.getvalue()


def write_rows_csv(rows, fh, columns=None):
    """Write a list of dicts as CSV with ``columns`` (default: keys of the first row)."""
    columns = columns or (list(rows[0]) if rows else [])
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r.get(c)) if not isinstance(r.get(c), str) else r[c] for c in columns])
