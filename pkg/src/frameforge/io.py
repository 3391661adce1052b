"""JSON encoding of sets, step functions and bundles, plus the built-in catalog."""
from __future__ import annotations

import hashlib
import json
import sys
from fractions import Fraction
from typing import Any, Callable, Optional

from .dyadic import DEFAULT_WINDOW_EXP, LineSet, PeriodicSet, dyadic, from_num_exp, num_exp
from .stepfn import PeriodicStepFunction, StepFunction, symmetric_indicator, interval_indicator

SCHEMA = 1


class InputError(ValueError):
    """Malformed or unknown input."""


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def dy_to_json(q: Fraction) -> dict:
    n, e = num_exp(Fraction(q))
    return {"num": n, "exp": e}


def dy_from_json(obj) -> Fraction:
    """Accept ``{"num", "exp"}``, an int, or a string like ``"3/8"``."""
    try:
        if isinstance(obj, dict):
            return from_num_exp(obj["num"], obj["exp"])
        return dyadic(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad dyadic value {obj!r}: {exc}") from exc


def _cx(obj: dict) -> complex:
    return complex(float(obj.get("re", 0.0)), float(obj.get("im", 0.0)))


# ---------------------------------------------------------------------------
# sets
# ---------------------------------------------------------------------------

def _ivs_to_json(intervals) -> list:
    return [{"a": dy_to_json(a), "b": dy_to_json(b)} for a, b in intervals]


def _ivs_from_json(items) -> list:
    return [(dy_from_json(it["a"]), dy_from_json(it["b"])) for it in items]


def lineset_to_json(A: LineSet) -> dict:
    return {"kind": "lineset", "window_exp": A.window_exp, "intervals": _ivs_to_json(A)}


def pset_to_json(A: PeriodicSet) -> dict:
    return {"kind": "pset", "intervals": _ivs_to_json(A)}


def lineset_from_json(obj: dict) -> LineSet:
    return LineSet.of(*_ivs_from_json(obj["intervals"]),
                      window_exp=obj.get("window_exp", DEFAULT_WINDOW_EXP))


def pset_from_json(obj: dict) -> PeriodicSet:
    return PeriodicSet.of(*_ivs_from_json(obj["intervals"]))


def parse_pset(text: str) -> PeriodicSet:
    """Inline form ``"0:1/4,3/4:1"``."""
    try:
        parts = [p.split(":") for p in text.split(",") if p.strip()]
        return PeriodicSet.of(*[(dyadic(a.strip()), dyadic(b.strip())) for a, b in parts])
    except ValueError as exc:
        raise InputError(f"bad periodic set {text!r}: {exc}") from exc


# ---------------------------------------------------------------------------
# functions
# ---------------------------------------------------------------------------

def _pieces_to_json(pieces) -> list:
    return [{"a": dy_to_json(a), "b": dy_to_json(b), "re": v.real, "im": v.imag}
            for a, b, v in pieces]


def _pieces_from_json(items) -> list:
    return [(dy_from_json(it["a"]), dy_from_json(it["b"]), _cx(it)) for it in items]


def step_to_json(f: StepFunction) -> dict:
    return {"kind": "step", "char_exp": dy_to_json(f.char_exp), "window_exp": f.window_exp,
            "half_exp": f.half_exp, "pieces": _pieces_to_json(f.pieces)}


def pstep_to_json(m: PeriodicStepFunction, unimodular: Optional[bool] = None) -> dict:
    out = {"kind": "pstep", "char_exp": dy_to_json(m.char_exp), "pieces": _pieces_to_json(m.pieces)}
    if unimodular is not None:
        out["unimodular"] = unimodular
        out["periodicity"] = "1-periodic"
    return out


def step_from_json(obj: dict) -> StepFunction:
    if obj.get("kind") != "step":
        raise InputError(f"expected kind 'step', got {obj.get('kind')!r}")
    return StepFunction(tuple(_pieces_from_json(obj["pieces"])),
                        dy_from_json(obj.get("char_exp", 0)),
                        int(obj.get("window_exp", DEFAULT_WINDOW_EXP)),
                        int(obj.get("half_exp", 0)))


def pstep_from_json(obj: dict) -> PeriodicStepFunction:
    if obj.get("kind") != "pstep":
        raise InputError(f"expected kind 'pstep', got {obj.get('kind')!r}")
    return PeriodicStepFunction(tuple(_pieces_from_json(obj["pieces"])),
                                dy_from_json(obj.get("char_exp", 0)))


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

CATALOG: dict[str, tuple[str, Callable[[int], StepFunction]]] = {
    "shannon": ("scaling", lambda W: interval_indicator(Fraction(-1, 2), Fraction(1, 2), window_exp=W)),
    "phi_quarter": ("scaling", lambda W: interval_indicator(Fraction(-1, 4), Fraction(1, 4), window_exp=W)),
    "psi0": ("wavelet", lambda W: symmetric_indicator(Fraction(1, 2), Fraction(1), window_exp=W)),
    "psi1": ("wavelet", lambda W: symmetric_indicator(Fraction(1, 4), Fraction(1, 2), window_exp=W)),
}


def catalog(name: str, window_exp: int = DEFAULT_WINDOW_EXP) -> StepFunction:
    try:
        _, build = CATALOG[name]
    except KeyError:
        raise InputError(f"unknown catalog entry {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    return build(window_exp)


# ---------------------------------------------------------------------------
# sources
# ---------------------------------------------------------------------------

class Source:
    """A decoded input with its content hash."""

    def __init__(self, label: str, obj: Any, raw: bytes):
        self.label = label
        self.obj = _unwrap(obj)
        self.sha256 = hashlib.sha256(raw).hexdigest()

    def step(self, key: str = "phi") -> StepFunction:
        """The line function in the input: a bare step, or ``key`` of a bundle."""
        obj = self.obj
        if isinstance(obj, dict) and obj.get("kind") != "step" and key in obj:
            obj = obj[key]
        if not isinstance(obj, dict):
            raise InputError(f"{self.label}: no step function found")
        return step_from_json(obj)

    def pstep(self, key: str) -> PeriodicStepFunction:
        obj = self.obj
        if isinstance(obj, dict) and obj.get("kind") != "pstep":
            obj = obj.get(key)
        if not isinstance(obj, dict):
            raise InputError(f"{self.label}: no periodic function {key!r} found")
        return pstep_from_json(obj)

    def get(self, key: str, default=None):
        return self.obj.get(key, default) if isinstance(self.obj, dict) else default


def _unwrap(obj: Any) -> Any:
    """A command report stands for the bundle it carries."""
    if isinstance(obj, dict) and "ff-schema" in obj:
        for key in ("bundle", "wavelet", "filters", "function"):
            if isinstance(obj.get(key), dict):
                return obj[key]
    return obj


def read_source(ref: str, window_exp: int = DEFAULT_WINDOW_EXP) -> Source:
    """Resolve a catalog name, ``-`` (stdin) or a file path."""
    if ref in CATALOG:
        obj = step_to_json(catalog(ref, window_exp))
        return Source(ref, obj, dumps(obj).encode())
    if ref == "-":
        raw = sys.stdin.buffer.read()
        label = "<stdin>"
    else:
        try:
            with open(ref, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {ref!r}: {exc.strerror}; catalog names: "
                             f"{', '.join(sorted(CATALOG))}") from exc
        label = ref
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InputError(f"{label}: invalid JSON ({exc.msg})") from exc
    return Source(label, obj, raw)


def dumps(obj: Any) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2)
