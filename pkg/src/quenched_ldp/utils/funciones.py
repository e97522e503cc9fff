from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Callable, Iterable, List, Sequence, TypeVar

import numpy as np
from scipy.special import logsumexp

from quenched_ldp.errors import InputError

T = TypeVar("T")
R = TypeVar("R")


# ─────────────────────────────────────────────────────────────
# 1. Utilidad: rangos tipo "1..40", "10,12,14" o "2..12:2"
# ─────────────────────────────────────────────────────────────
def parse_range(texto: str | int | Sequence[int], campo: str = "rango") -> List[int]:
    """
    Convierte un rango textual en una lista creciente de enteros.

    Ejemplos aceptados:
        "1..40"      → 1, 2, …, 40
        "10..30:5"   → 10, 15, 20, 25, 30
        "6,8,10"     → 6, 8, 10
    """
    if isinstance(texto, int):
        return [texto]
    if not isinstance(texto, str):
        valores = [int(v) for v in texto]
    else:
        texto = texto.strip()
        m = re.fullmatch(r"(\d+)\.\.(\d+)(?::(\d+))?", texto)
        if m:
            ini, fin = int(m.group(1)), int(m.group(2))
            paso = int(m.group(3)) if m.group(3) is not None else 1
            if paso < 1:
                raise InputError(f"{campo}: el paso debe ser ≥ 1")
            valores = list(range(ini, fin + 1, paso))
        elif re.fullmatch(r"\d+(\s*,\s*\d+)*", texto):
            valores = [int(v) for v in texto.split(",")]
        else:
            raise InputError(f"{campo}: no se pudo interpretar '{texto}'")
    if not valores:
        raise InputError(f"{campo}: rango vacío")
    if any(b <= a for a, b in zip(valores, valores[1:])):
        raise InputError(f"{campo}: los valores deben ser estrictamente crecientes")
    return valores


# ─────────────────────────────────────────────────────────────
# 2. Entropías con la convención 0 log 0 = 0
# ─────────────────────────────────────────────────────────────
def xlogx(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos])
    return out


def shannon(p: np.ndarray) -> float:
    """Entropía en nats de un vector de probabilidades (no se normaliza)."""
    return float(-xlogx(p).sum())


# ─────────────────────────────────────────────────────────────
# 3. Acumulación en dominio logarítmico
# ─────────────────────────────────────────────────────────────
def log_add(a: float, b: float) -> float:
    if a == -math.inf:
        return b
    if b == -math.inf:
        return a
    m = max(a, b)
    return m + math.log1p(math.exp(-abs(a - b)))


def log_sum(values: Iterable[float]) -> float:
    arr = np.fromiter(values, dtype=float)
    if arr.size == 0 or np.all(arr == -np.inf):
        return -math.inf
    return float(logsumexp(arr))


def fsum_ordered(values: Sequence[float]) -> float:
    # suma compensada en el orden recibido
    return math.fsum(values)


# ─────────────────────────────────────────────────────────────
# 4. Mapa paralelo con reducción en orden de índice
# ─────────────────────────────────────────────────────────────
def ordered_map(fn: Callable[[T], R], items: Sequence[T], threads: int = 1) -> List[R]:
    """
    Aplica `fn` a cada elemento usando hasta `threads` hilos y devuelve los
    resultados en el orden de `items`, sin importar el orden de término.
    """
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]

    resultados: dict[int, R] = {}
    with ThreadPoolExecutor(max_workers=threads) as ex:
        futures = {ex.submit(fn, it): i for i, it in enumerate(items)}
        for fut in as_completed(futures):
            resultados[futures[fut]] = fut.result()
    return [resultados[i] for i in range(len(items))]
