"""Intervalos en nats y el centinela de divergencia.

Los infinitos matemáticos nunca viajan como `float('inf')` por la aritmética:
se devuelven como `Divergent` y se revisan antes de combinar.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from quenched_ldp.errors import InputError


@dataclass(frozen=True)
class Divergent:
    reason: str

    def to_json(self) -> dict:
        return {"value": "infinity", "reason": self.reason}


@dataclass(frozen=True)
class Interval:
    lower: float
    upper: float

    def __post_init__(self) -> None:
        if self.lower > self.upper + 1e-10:
            raise InputError(f"intervalo invertido: [{self.lower}, {self.upper}]")

    @classmethod
    def point(cls, x: float) -> "Interval":
        return cls(float(x), float(x))

    @property
    def width(self) -> float:
        return max(self.upper - self.lower, 0.0)

    @property
    def mid(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= x <= self.upper + tol

    def scale(self, c: float) -> "Interval":
        if c < 0:
            raise InputError("intervalo: solo se escalan coeficientes no negativos")
        return Interval(c * self.lower, c * self.upper)

    def shift(self, x: float) -> "Interval":
        return Interval(self.lower + x, self.upper + x)

    def clip_below(self, x: float) -> "Interval":
        return Interval(max(self.lower, x), max(self.upper, x))

    def __add__(self, other: "Interval | float") -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lower + other.lower, self.upper + other.upper)
        return self.shift(float(other))

    __radd__ = __add__

    def __sub__(self, other: "Interval | float") -> "Interval":
        if isinstance(other, Interval):
            return Interval(self.lower - other.upper, self.upper - other.lower)
        return self.shift(-float(other))

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "width": self.width}


Value = Union[float, Interval, Divergent]


def as_interval(v: "float | Interval") -> Interval:
    if isinstance(v, Divergent):
        raise InputError(f"no se puede combinar un valor divergente: {v.reason}")
    return v if isinstance(v, Interval) else Interval.point(v)


def first_divergent(*values: object) -> Divergent | None:
    for v in values:
        if isinstance(v, Divergent):
            return v
    return None


def to_jsonable(v: object) -> object:
    """Valor apto para JSON: floats tal cual, el resto por su `to_json`."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return v
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    return float(v)  # escalares de numpy
