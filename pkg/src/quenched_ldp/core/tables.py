"""
Tablas marginales exactas
=========================

Dos variantes comparten la misma clase:

* tablas de letras: distribución densa sobre E^L, indexada en orden
  lexicográfico según el orden declarado del alfabeto (claves perezosas);
* tablas de patrones de palabras: claves = serialización canónica de k
  palabras, ordenadas.
"""
from __future__ import annotations

import itertools
from collections import defaultdict
from fractions import Fraction
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np
import polars as pl

from quenched_ldp.errors import InputError


class MarginalTable:
    def __init__(
        self,
        depth: int,
        probs: np.ndarray,
        keys: Sequence[str] | None = None,
        symbols: str | None = None,
    ) -> None:
        if (keys is None) == (symbols is None):
            raise InputError("tabla: indicar claves de patrones o símbolos del alfabeto, no ambos")
        self.depth = int(depth)
        self.probs = np.asarray(probs, dtype=float)
        self.symbols = symbols
        self._keys: Tuple[str, ...] | None = tuple(keys) if keys is not None else None
        # solo las tablas empíricas guardan sus conteos
        self.counts: Dict[str, int] | None = None
        self.total_count: int | None = None
        if symbols is not None and self.probs.size != len(symbols) ** self.depth:
            raise InputError("tabla: tamaño incompatible con |E|^L")
        if self._keys is not None:
            self._index = {k: i for i, k in enumerate(self._keys)}

    # ─────────────────────────────────────────────
    # Constructores
    # ─────────────────────────────────────────────
    @classmethod
    def from_mapping(cls, depth: int, mapping: Mapping[str, float]) -> "MarginalTable":
        keys = sorted(mapping)
        return cls(depth, np.array([mapping[k] for k in keys], dtype=float), keys=keys)

    @classmethod
    def from_counts(cls, depth: int, counts: Mapping[str, int], total: int) -> "MarginalTable":
        tabla = cls.from_mapping(depth, {k: c / total for k, c in counts.items()})
        tabla.counts = {k: int(c) for k, c in counts.items()}
        tabla.total_count = int(total)
        return tabla

    # ─────────────────────────────────────────────
    # Acceso
    # ─────────────────────────────────────────────
    @property
    def is_letter_table(self) -> bool:
        return self.symbols is not None

    @property
    def keys(self) -> Tuple[str, ...]:
        if self._keys is None:
            self._keys = tuple(
                "".join(t) for t in itertools.product(self.symbols, repeat=self.depth)
            )
            self._index = {k: i for i, k in enumerate(self._keys)}
        return self._keys

    def __len__(self) -> int:
        return int(self.probs.size)

    def code(self, pattern: str) -> int:
        if len(pattern) != self.depth:
            raise InputError(f"tabla: el patrón '{pattern}' no tiene largo {self.depth}")
        base = len(self.symbols)
        c = 0
        for ch in pattern:
            i = self.symbols.find(ch)
            if i < 0:
                raise InputError(f"tabla: letra '{ch}' fuera del alfabeto")
            c = c * base + i
        return c

    def get(self, pattern: str, default: float = 0.0) -> float:
        if self.is_letter_table:
            return float(self.probs[self.code(pattern)])
        i = self._index.get(pattern)
        return default if i is None else float(self.probs[i])

    def __getitem__(self, pattern: str) -> float:
        return self.get(pattern)

    def as_dict(self) -> Dict[str, float]:
        return {k: float(p) for k, p in zip(self.keys, self.probs)}

    def total(self) -> float:
        return float(self.probs.sum())

    # ─────────────────────────────────────────────
    # Proyecciones (consistencia y estacionariedad)
    # ─────────────────────────────────────────────
    def project_prefix(self) -> "MarginalTable":
        """Marginal de los primeros depth−1 símbolos / palabras."""
        return self._project(keep_first=True)

    def project_suffix(self) -> "MarginalTable":
        """Marginal de los últimos depth−1 símbolos / palabras."""
        return self._project(keep_first=False)

    def _project(self, keep_first: bool) -> "MarginalTable":
        if self.depth < 2:
            raise InputError("tabla: no se puede proyectar una tabla de profundidad 1")
        if self.is_letter_table:
            forma = (len(self.symbols),) * self.depth
            arr = self.probs.reshape(forma)
            red = arr.sum(axis=self.depth - 1 if keep_first else 0)
            return MarginalTable(self.depth - 1, red.ravel(), symbols=self.symbols)
        acc: Dict[str, float] = defaultdict(float)
        for k, p in zip(self.keys, self.probs):
            partes = k.split(",")
            sub = partes[:-1] if keep_first else partes[1:]
            acc[",".join(sub)] += float(p)
        return MarginalTable.from_mapping(self.depth - 1, acc)

    def max_abs_diff(self, other: "MarginalTable") -> float:
        claves = set(self.keys) | set(other.keys)
        return max((abs(self.get(k) - other.get(k)) for k in claves), default=0.0)

    def exact_fractions(self) -> Dict[str, Fraction] | None:
        """Frecuencias exactas (solo tablas construidas desde conteos)."""
        if self.counts is None or self.total_count is None:
            return None
        return {k: Fraction(c, self.total_count) for k, c in self.counts.items()}

    # ─────────────────────────────────────────────
    # Salida
    # ─────────────────────────────────────────────
    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {"pattern": list(self.keys), "probability": self.probs.tolist()},
            schema={"pattern": pl.Utf8, "probability": pl.Float64},
        )

    def __repr__(self) -> str:
        tipo = "letras" if self.is_letter_table else "palabras"
        return f"MarginalTable({tipo}, depth={self.depth}, size={len(self)})"
