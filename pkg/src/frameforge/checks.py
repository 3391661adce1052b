"""Verdict records and error types shared by the verification modules."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Optional

from .dyadic import num_exp


class VerificationError(ValueError):
    """Base class for inputs that fail a structural precondition."""

    def __init__(self, message: str, witness: Optional["Witness"] = None):
        super().__init__(message)
        self.witness = witness


class NotReductiveError(VerificationError):
    pass


class NonAnnularError(VerificationError):
    pass


class ProductError(VerificationError):
    pass


class DegenerateError(VerificationError):
    pass


@dataclass(frozen=True)
class Witness:
    """A point (and the piece containing it) where a check is decided."""

    xi: Fraction
    interval: Optional[tuple[Fraction, Fraction]] = None
    expected: Any = None
    got: Any = None
    note: str = ""

    def to_json(self) -> dict:
        out: dict = {"xi": _dy(self.xi)}
        if self.interval is not None:
            out["interval"] = [_dy(self.interval[0]), _dy(self.interval[1])]
        if self.expected is not None:
            out["expected"] = _val(self.expected)
        if self.got is not None:
            out["got"] = _val(self.got)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class Check:
    """Boolean verdict plus the largest deviation seen and a witness."""

    ok: bool
    max_dev: float = 0.0
    witness: Optional[Witness] = None
    detail: str = ""
    data: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok, "max_dev": self.max_dev}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.detail:
            out["detail"] = self.detail
        return out


def worst(items: Iterable[tuple[Fraction, Fraction, float]]) -> tuple[float, Optional[tuple]]:
    """Largest deviation over ``(a, b, dev)`` items.

    Ties go to the piece nearest the origin, positive side first, so that
    witnesses are stable and easy to read.
    """
    best_dev, best = 0.0, None
    for a, b, dev in items:
        key = (abs(a), a < 0)
        if best is None or dev > best_dev or (dev == best_dev and key < (abs(best[0]), best[0] < 0)):
            best_dev, best = dev, (a, b)
    return best_dev, best


def _dy(q: Fraction) -> dict:
    n, e = num_exp(Fraction(q))
    return {"num": n, "exp": e}


def _val(v: Any) -> Any:
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, Fraction):
        return _dy(v)
    return v
