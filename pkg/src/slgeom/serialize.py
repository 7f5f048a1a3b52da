"""JSON and CSV round-trip helpers for the public value types.

CSV: comma separated, header row, 12 significant digits.  JSON: UTF-8 with
stable (insertion) key order.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .flags import FlagPoint, IdealPoint
from .rootsys import ChamberVector, RootSystem
from .symspace import SymPoint, SymTangent

__all__ = [
    "rootsystem_to_json", "rootsystem_from_json",
    "chamber_to_json", "chamber_from_json",
    "sympoint_to_json", "sympoint_from_json",
    "tangent_to_json", "tangent_from_json",
    "flag_to_json", "flag_from_json",
    "ideal_to_json", "ideal_from_json",
    "write_csv", "read_csv",
    "fmt",
]


def fmt(x: float) -> str:
    return f"{x:.12g}"


def rootsystem_to_json(sys: RootSystem) -> dict:
    return {"family": sys.family, "rank": sys.rank}


def rootsystem_from_json(d: dict) -> RootSystem:
    return RootSystem(d["family"], int(d["rank"]))


def chamber_to_json(v: ChamberVector) -> list:
    return [float(x) for x in v.coords]


def chamber_from_json(sys: RootSystem, data) -> ChamberVector:
    return ChamberVector.of(sys, data)


def sympoint_to_json(x: SymPoint) -> dict:
    return {"n": x.n, "gram": [float(v) for v in x.gram.flatten()]}


def sympoint_from_json(d: dict) -> SymPoint:
    n = int(d["n"])
    return SymPoint(np.array(d["gram"], dtype=float).reshape(n, n))


def tangent_to_json(t: SymTangent) -> dict:
    return {"base": sympoint_to_json(t.base),
            "mat": [float(v) for v in t.mat.flatten()]}


def tangent_from_json(d: dict) -> SymTangent:
    base = sympoint_from_json(d["base"])
    return SymTangent(base, np.array(d["mat"], dtype=float).reshape(base.n, base.n))


def flag_to_json(f: FlagPoint) -> dict:
    return {"type": list(f.type), "basis": [float(v) for v in f.basis.flatten()]}


def flag_from_json(d: dict) -> FlagPoint:
    t = tuple(int(x) for x in d["type"])
    b = np.array(d["basis"], dtype=float)
    n = int(round(np.sqrt(len(b))))
    return FlagPoint(t, b.reshape(n, n))


def ideal_to_json(a: IdealPoint) -> dict:
    d = flag_to_json(a.flag)
    d["weights"] = chamber_to_json(a.weights)
    return d


def ideal_from_json(sys: RootSystem, d: dict) -> IdealPoint:
    return IdealPoint(flag_from_json(d), ChamberVector.of(sys, d["weights"]))


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, float) else v for v in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        r = csv.reader(fh)
        header = next(r)
        return header, [row for row in r]


def dump_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
