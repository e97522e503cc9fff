"""Flujos aleatorios divisibles basados en contador (Philox).

Cada flujo queda determinado por (semilla, claves); el número de hilos no
interviene, de modo que los resultados no dependen del reparto del trabajo.
"""
from __future__ import annotations

import numpy as np


def stream(seed: int, *keys: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=int(seed) & (2 ** 64 - 1), spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))
