"""Scene files in, reports out.

Both are UTF-8 JSON.  Floats in reports are written with 17 significant
digits so that parsing a report gives back exactly the same numbers.
"""
from __future__ import annotations

import dataclasses
import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .augmented_dual import AugPair
from .cones import ConeUnion, make_union
from .errors import InputError
from .geometry import NormSpec, Tolerances

TASKS = ("analyze", "separate", "certify", "oracle-check", "export-plot")


@dataclass
class Scene:
    ns: NormSpec
    K: ConeUnion
    A: ConeUnion
    task: str
    certificate: Optional[AugPair] = None
    tol: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    raw: dict = field(default_factory=dict, repr=False)

    def echo(self) -> dict:
        out = dict(self.raw)
        out["task"] = self.task
        out["seed"] = self.seed
        return out


def _pieces(obj, name: str) -> list:
    if not isinstance(obj, dict) or "pieces" not in obj:
        raise InputError(f"{name} must be an object with a 'pieces' list")
    pieces = obj["pieces"]
    if not isinstance(pieces, list) or not pieces:
        raise InputError(f"{name} needs at least one piece")
    for p in pieces:
        if not isinstance(p, list) or not p:
            raise InputError(f"every piece of {name} needs at least one generator")
    return pieces


def parse_scene(data: dict, task: Optional[str] = None, seed: Optional[int] = None) -> Scene:
    """Validate a decoded scene document.  ``task``/``seed`` override the file."""
    if not isinstance(data, dict):
        raise InputError("scene must be a JSON object")
    try:
        dim = data["dimension"]
        norm = data["norm"]
    except KeyError as exc:
        raise InputError(f"scene is missing field {exc}") from None
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise InputError("dimension must be an integer")
    try:
        ns = NormSpec(norm, dim)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    t = data.get("tolerances", {}) or {}
    try:
        tol = Tolerances(
            eps_mem=float(t.get("eps_mem", 1e-9)),
            eps_sep=float(t.get("eps_sep", 1e-7)),
            max_iter=int(t.get("max_iter", 10_000)),
        )
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad tolerances: {exc}") from None
    try:
        K = make_union(_pieces(data.get("K"), "K"), ns, tol)
        A = make_union(_pieces(data.get("A"), "A"), ns, tol)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    task = task or data.get("task", "analyze")
    if task not in TASKS:
        raise InputError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    cert = None
    if data.get("certificate") is not None:
        c = data["certificate"]
        try:
            cert = AugPair(ns.check(c["xstar"]), float(c["alpha"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bad certificate: {exc}") from None
    if task == "certify" and cert is None:
        raise InputError("task 'certify' needs a certificate")
    seed = int(data.get("seed", 0)) if seed is None else int(seed)
    return Scene(ns, K, A, task, cert, tol, seed, raw=data)


def load_scene(path, task: Optional[str] = None, seed: Optional[int] = None) -> Scene:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read scene: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"scene is not valid JSON: {exc}") from None
    return parse_scene(data, task, seed)


# ---------------------------------------------------------------------------
# reports

def jsonable(obj: Any) -> Any:
    """Plain JSON data from dataclasses, enums and numpy values; non-finite floats become None."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with every float written as %.17g."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, float):
        text = "%.17g" % obj
        if not any(ch in text for ch in ".en"):
            text += ".0"  # keep floats distinguishable from ints
        return text
    return json.dumps(obj)


@dataclass
class Report:
    scene: dict
    task: str
    exit_code: int
    results: dict
    wall_time: float
    version: str

    def to_json(self) -> str:
        return dumps(jsonable(dataclasses.asdict(self))) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls(**json.loads(text))
