"""
Letras, palabras y oraciones
============================

Las palabras se representan como `str` (una letra = un carácter visible del
alfabeto) y las oraciones como tuplas de palabras. La serialización canónica de
una oración es la unión de sus palabras con comas, p. ej. ``"ab,c"``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence, Tuple

from quenched_ldp.core.tables import MarginalTable
from quenched_ldp.errors import InputError

Word = str
Sentence = Tuple[str, ...]


@dataclass(frozen=True)
class Alphabet:
    symbols: str

    def __post_init__(self) -> None:
        if not self.symbols:
            raise InputError("alphabet: el alfabeto no puede ser vacío")
        if len(set(self.symbols)) != len(self.symbols):
            raise InputError(f"alphabet: símbolos repetidos en '{self.symbols}'")
        if any(c in ", \n\t" for c in self.symbols):
            raise InputError("alphabet: los símbolos deben ser caracteres visibles sin comas")

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, letter: str) -> int:
        i = self.symbols.find(letter)
        if i < 0 or len(letter) != 1:
            raise InputError(f"alphabet: la letra '{letter}' no pertenece a '{self.symbols}'")
        return i

    def validate_word(self, w: Word) -> Word:
        if not w:
            raise InputError("word: las palabras tienen largo ≥ 1")
        extra = set(w) - set(self.symbols)
        if extra:
            raise InputError(f"word: letras {sorted(extra)} fuera del alfabeto '{self.symbols}'")
        return w

    def validate_sentence(self, s: Sequence[Word]) -> Sentence:
        if len(s) == 0:
            raise InputError("sentence: se requiere al menos una palabra")
        return tuple(self.validate_word(w) for w in s)

    def encode(self, x: str) -> list[int]:
        return [self.index(c) for c in x]


@dataclass(frozen=True)
class CutPoints:
    points: Tuple[int, ...]

    def __post_init__(self) -> None:
        pts = tuple(int(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise InputError("cut points: se requiere al menos un punto de corte")
        if pts[0] < 1:
            raise InputError("cut points: j_1 debe ser ≥ 1")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise InputError("cut points: deben ser estrictamente crecientes")

    def __len__(self) -> int:
        return len(self.points)

    @property
    def last(self) -> int:
        return self.points[-1]

    def increments(self) -> Tuple[int, ...]:
        prev = (0,) + self.points[:-1]
        return tuple(b - a for a, b in zip(prev, self.points))


def sentence_key(s: Sequence[Word]) -> str:
    return ",".join(s)


def concat(s: Sequence[Word]) -> str:
    return "".join(s)


def truncate(w: Word, tr: int) -> Word:
    if tr < 1:
        raise InputError(f"tr: debe ser ≥ 1 (recibido {tr})")
    return w[:tr]


def truncate_sentence(s: Sequence[Word], tr: int) -> Sentence:
    return tuple(truncate(w, tr) for w in s)


def cut(x: str, j: CutPoints) -> Sentence:
    """Corta la secuencia de letras `x` en los puntos j_1 < … < j_N."""
    if j.last > len(x):
        raise InputError(
            f"cut: el punto de corte {j.last} excede el largo de la secuencia ({len(x)})"
        )
    prev = (0,) + j.points[:-1]
    return tuple(x[a:b] for a, b in zip(prev, j.points))


def empirical_patterns(s: Sequence[Word], k: int) -> MarginalTable:
    """
    Marginal de k palabras de R_N: frecuencias sobre los N desplazamientos
    cíclicos de la extensión periódica de la oración.
    """
    n = len(s)
    if k < 1 or k > n:
        raise InputError(f"k: se requiere 1 ≤ k ≤ N (k={k}, N={n})")
    s = tuple(s)
    if k == 1:
        cuentas = Counter(s)
    else:
        ext = s + s[: k - 1]
        cuentas = Counter(sentence_key(ext[i:i + k]) for i in range(n))
    return MarginalTable.from_counts(k, cuentas, n)
