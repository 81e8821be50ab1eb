"""JSON encoding of filtrations, martingales, stopping times and reports.

Rationals travel as ``"num/den"`` strings so the exact backend survives a
round trip. Output is deterministic: keys are sorted and floats use their
shortest repr, so equal inputs give byte-identical files.
"""
from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction

import numpy as np

from .orlicz import OrliczFunction, from_dict
from .process import Martingale
from .space import FiniteFiltration, make_filtration
from .stopping import StoppingTime


def encode_number(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def decode_number(x):
    """Inverse of :func:`encode_number`; ``"a/b"`` strings become Fractions."""
    if isinstance(x, str):
        if "/" in x:
            num, den = x.split("/")
            return Fraction(int(num), int(den))
        return float(x)
    return x


def to_jsonable(obj):
    """Recursively convert numbers, tuples and library objects to JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, FiniteFiltration):
        return filtration_to_dict(obj)
    if isinstance(obj, Martingale):
        return martingale_to_dict(obj)
    if isinstance(obj, StoppingTime):
        return stopping_time_to_list(obj)
    if isinstance(obj, OrliczFunction):
        return to_jsonable(obj.to_dict())
    if hasattr(obj, "as_dict"):
        return to_jsonable(obj.as_dict())
    return encode_number(obj)


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def digest(obj) -> str:
    """SHA-256 of the canonical JSON text."""
    return hashlib.sha256(dumps(obj).encode()).hexdigest()


# -- filtrations and processes ----------------------------------------------

def filtration_to_dict(F: FiniteFiltration) -> dict:
    return {
        "depth": F.depth,
        "outcomes": [{"id": i, "p": encode_number(p)} for i, p in zip(F.ids, F.probs)],
        "levels": [[[F.ids[w] for w in atom] for atom in lvl] for lvl in F.levels],
    }


def filtration_from_dict(d: dict) -> FiniteFiltration:
    probs = [decode_number(o["p"]) for o in d["outcomes"]]
    exact = all(isinstance(p, Fraction) for p in probs)
    outcomes = [(o["id"], p) for o, p in zip(d["outcomes"], probs)]
    F = make_filtration(outcomes, d["levels"], exact=exact)
    if "depth" in d and d["depth"] != F.depth:
        raise ValueError(f"declared depth {d['depth']} but levels give {F.depth}")
    return F


def martingale_to_dict(f: Martingale) -> dict:
    F = f.filtration
    return {"filtration": filtration_to_dict(F),
            "terminal": {str(i): encode_number(v) for i, v in zip(F.ids, f.terminal)}}


def martingale_from_dict(d: dict, F: FiniteFiltration | None = None) -> Martingale:
    F = filtration_from_dict(d["filtration"]) if F is None else F
    term = d["terminal"]
    X = [decode_number(term[str(i)]) for i in F.ids]
    if F.exact:
        X = [Fraction(x) for x in X]
    return Martingale.from_terminal(F, X)


def stopping_time_to_list(nu: StoppingTime) -> list:
    return [[n, i] for n, i in nu.sorted_nodes()]


def stopping_time_from_list(F: FiniteFiltration, nodes) -> StoppingTime:
    return StoppingTime(F, [(int(n), int(i)) for n, i in nodes])


def decomposition_to_dict(dec) -> dict:
    F = dec.f.filtration
    return {
        "source": dec.source, "kind": dec.kind, "A": dec.A,
        "atoms": [{"k": a.k, "nu": stopping_time_to_list(a.nu),
                   "terminal": {str(i): encode_number(v) for i, v in zip(F.ids, a.a.terminal)},
                   "bound": encode_number(a.bound)}
                  for a in dec.atoms],
    }


def phi_to_dict(Phi: OrliczFunction) -> dict:
    return Phi.to_dict()


def phi_from_dict(d: dict) -> OrliczFunction:
    return from_dict(d)


__all__ = [
    "encode_number", "decode_number", "to_jsonable", "dumps", "digest",
    "filtration_to_dict", "filtration_from_dict", "martingale_to_dict",
    "martingale_from_dict", "stopping_time_to_list", "stopping_time_from_list",
    "decomposition_to_dict", "phi_to_dict", "phi_from_dict",
]
