"""JSON and CSV interchange for sequences, functions and matrices.

JSON round trips are bit-exact for log values (floats serialise via repr).
CSV is the plotting interface: sequences export as (p, logM, logmu, logm)
and sampled functions as (t, value).
"""

from __future__ import annotations

import csv
import json
from typing import IO

from . import bmt, functions as fn, sequences as sq
from .errors import FormatError
from .grids import DEFAULT_GRID, GridSpec


# ---------------------------------------------------------------------------
# sequences
# ---------------------------------------------------------------------------


def sequence_to_dict(m: sq.WeightSequence) -> dict:
    return {
        "name": m.name,
        "P_max": m.p_max,
        "log_values": [float(v) for v in m.log_values],
    }


def sequence_from_dict(data: dict) -> sq.WeightSequence:
    if "log_values" not in data:
        raise FormatError("sequence JSON needs a 'log_values' array")
    values = data["log_values"]
    if "P_max" in data and int(data["P_max"]) != len(values) - 1:
        raise FormatError(
            f"P_max={data['P_max']} inconsistent with {len(values)} log values"
        )
    return sq.from_log_values(values, name=str(data.get("name", "")))


_SEQUENCE_FAMILIES = {
    "gevrey": (sq.gevrey, "s"),
    "exp_power": (sq.exp_power, "a"),
    "qgevrey": (sq.qgevrey, "q"),
}


def build_sequence(spec: dict) -> sq.WeightSequence:
    """Build a sequence from a family spec like {"family": "gevrey", "s": 2}."""
    if "log_values" in spec:
        return sequence_from_dict(spec)
    family = spec.get("family")
    if family not in _SEQUENCE_FAMILIES:
        raise FormatError(
            f"unknown sequence family {family!r}; known: {sorted(_SEQUENCE_FAMILIES)}"
        )
    builder, key = _SEQUENCE_FAMILIES[family]
    if key not in spec:
        raise FormatError(f"family {family!r} needs parameter {key!r}")
    p_max = int(spec.get("P_max", sq.DEFAULT_P_MAX))
    return builder(float(spec[key]), p_max)


def write_sequence_csv(m: sq.WeightSequence, stream: IO[str]):
    writer = csv.writer(stream)
    writer.writerow(["p", "logM", "logmu", "logm"])
    for p in range(m.p_max + 1):
        writer.writerow(
            [
                p,
                repr(float(m.log_values[p])),
                repr(float(m.log_quotients[p])),
                repr(float(m.log_small[p])),
            ]
        )


# ---------------------------------------------------------------------------
# functions
# ---------------------------------------------------------------------------


def grid_to_dict(grid: GridSpec) -> dict:
    return {"t_min": grid.t_min, "t_max": grid.t_max, "n": grid.n}


def grid_from_dict(data: dict | None) -> GridSpec:
    if not data:
        return DEFAULT_GRID
    return GridSpec(
        float(data.get("t_min", DEFAULT_GRID.t_min)),
        float(data.get("t_max", DEFAULT_GRID.t_max)),
        int(data.get("n", DEFAULT_GRID.n)),
    )


def function_to_dict(omega: fn.WeightFunction) -> dict:
    """Descriptor of a weight function; transform kinds nest their operands."""
    kind = omega.kind
    out: dict = {"kind": kind, "params": {}}
    p = omega.params
    if kind == "power":
        out["params"]["alpha"] = p["alpha"]
    elif kind == "log_power":
        out["params"]["beta"] = p["beta"]
    elif kind == "normalized":
        out["params"]["of"] = function_to_dict(p["of"])
    elif kind == "power_substitution":
        out["params"]["of"] = function_to_dict(p["of"])
        out["params"]["alpha"] = p["alpha"]
    elif kind in ("associated", "integral_form"):
        out["params"]["sequence"] = sequence_to_dict(p["sequence"])
    elif kind in ("conjugate", "biconjugate"):
        out["params"]["of"] = function_to_dict(p["of"])
        out["grid"] = grid_to_dict(p["grid"])
    elif kind in ("envelope_lower", "envelope_upper"):
        out["params"]["sigma"] = function_to_dict(p["sigma"])
        out["params"]["tau"] = function_to_dict(p["tau"])
        out["grid"] = grid_to_dict(p["grid"])
    else:
        raise FormatError(f"function kind {kind!r} has no serialised form")
    return out


def build_function(data: dict) -> fn.WeightFunction:
    kind = data.get("kind")
    params = data.get("params", {})
    grid = grid_from_dict(data.get("grid"))
    if kind == "power":
        return fn.power_weight(float(params["alpha"]))
    if kind == "log_power":
        return fn.log_power_weight(float(params["beta"]))
    if kind == "identity":
        return fn.identity_weight()
    if kind == "normalized":
        return fn.normalized(build_function(params["of"]))
    if kind == "power_substitution":
        return fn.power_substitution(
            build_function(params["of"]), float(params["alpha"])
        )
    if kind == "associated":
        return fn.associated(build_sequence(params["sequence"]))
    if kind == "integral_form":
        return fn.integral_form(build_sequence(params["sequence"]))
    if kind == "conjugate":
        return fn.conjugate(build_function(params["of"]), grid)
    if kind == "biconjugate":
        return fn.biconjugate(build_function(params["of"]), grid)
    if kind == "envelope_lower":
        return fn.envelope_lower(
            build_function(params["sigma"]), build_function(params["tau"]), grid
        )
    if kind == "envelope_upper":
        return fn.envelope_upper(
            build_function(params["sigma"]), build_function(params["tau"]), grid
        )
    raise FormatError(f"unknown function kind {kind!r}")


def write_samples_csv(ts, values, stream: IO[str]):
    writer = csv.writer(stream)
    writer.writerow(["t", "value"])
    for t, v in zip(ts, values):
        writer.writerow([repr(float(t)), repr(float(v))])


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


def matrix_to_dict(mat: bmt.WeightMatrix) -> dict:
    return {
        "ells": [float(e) for e in mat.ells],
        "sequences": {
            repr(float(e)): sequence_to_dict(member)
            for e, member in zip(mat.ells, mat.members)
        },
        "provenance": mat.provenance,
    }


def matrix_from_dict(data: dict) -> bmt.WeightMatrix:
    ells = tuple(float(e) for e in data["ells"])
    members = tuple(
        sequence_from_dict(data["sequences"][repr(float(e))]) for e in ells
    )
    return bmt.WeightMatrix(
        ells=ells,
        members=members,
        provenance=str(data.get("provenance", "associated")),
        diagnostics={},
    )


def load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as stream:
        return json.load(stream)


def _coerce_scalar(obj):
    import numpy as np

    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serialisable: {type(obj)!r}")


def dump_json(data, path: str | None = None) -> str:
    text = json.dumps(data, indent=2, allow_nan=True, default=_coerce_scalar)
    if path:
        with open(path, "w", encoding="utf-8") as stream:
            stream.write(text + "\n")
    return text
