"""
Tiempo de espera hasta un bloque típico
=======================================

σ_1 = primera posición (base 1) de X i.i.d. ν a partir de la cual empieza un
bloque de largo M cuyas frecuencias empíricas de letras están a distancia
≤ tol de ψ. Se estima (1/M)·E[log σ_1] por M y se ajusta la pendiente de
E[log σ_1] contra M, que se compara con h(ψ|ν) por letra.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import polars as pl
from scipy.stats import linregress

from quenched_ldp.config import WAITING_HORIZON_CAP
from quenched_ldp.core.entropy import rel_entropy
from quenched_ldp.core.intervals import Divergent, to_jsonable
from quenched_ldp.core.laws import LetterLaw
from quenched_ldp.errors import InputError
from quenched_ldp.utils.funciones import fsum_ordered, ordered_map
from quenched_ldp.utils.rng import stream

logger = logging.getLogger(__name__)

CHUNK = 1 << 14


def _typical_windows(bloque: np.ndarray, M: int, psi: np.ndarray, tol: float) -> np.ndarray:
    """Máscara de inicios de ventana de largo M con frecuencias dentro de tol de ψ."""
    n_ventanas = bloque.size - M + 1
    ok = np.ones(n_ventanas, dtype=bool)
    for c, objetivo in enumerate(psi):
        acum = np.concatenate(([0], np.cumsum(bloque == c)))
        cuenta = acum[M:] - acum[:-M]
        ok &= np.abs(cuenta - objetivo * M) <= tol * M + 1e-9
    return ok


def first_hit(nu: LetterLaw, psi: np.ndarray, M: int, tol: float, rng: np.random.Generator,
              horizon_cap: int = WAITING_HORIZON_CAP) -> Tuple[int, bool]:
    """
    (σ_1, censurado). Genera X por tramos que se solapan en M−1 letras hasta
    encontrar el bloque o agotar `horizon_cap` letras.
    """
    cola = np.empty(0, dtype=np.int64)
    generadas = 0
    tramo = max(CHUNK, 4 * M)
    while generadas < horizon_cap:
        n = min(tramo, horizon_cap - generadas)
        nuevo = nu.sample(n, rng)
        bloque = np.concatenate((cola, nuevo))
        desplazamiento = generadas - cola.size  # índice (base 0) del primer elemento de `bloque`
        generadas += n
        if bloque.size >= M:
            hits = np.flatnonzero(_typical_windows(bloque, M, psi, tol))
            if hits.size:
                return int(desplazamiento + hits[0] + 1), False
            cola = bloque[-(M - 1):] if M > 1 else np.empty(0, dtype=np.int64)
        else:
            cola = bloque
        tramo = min(2 * tramo, 1 << 22)
    return horizon_cap, True


@dataclass(frozen=True)
class WaitingRow:
    M: int
    mean_log_sigma: float
    per_letter: float
    censored: int
    trials: int


@dataclass(frozen=True)
class WaitingResult:
    rows: Tuple[WaitingRow, ...]
    slope: float
    intercept: float
    predicted: "float | Divergent"
    tol: float
    seed: int

    @property
    def relative_error(self) -> float | None:
        if isinstance(self.predicted, Divergent) or self.predicted == 0:
            return None
        return abs(self.slope - self.predicted) / self.predicted

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame(
            {
                "M": [r.M for r in self.rows],
                "mean_log_sigma": [r.mean_log_sigma for r in self.rows],
                "per_letter": [r.per_letter for r in self.rows],
                "censored": [r.censored for r in self.rows],
                "trials": [r.trials for r in self.rows],
            },
            schema={"M": pl.Int64, "mean_log_sigma": pl.Float64, "per_letter": pl.Float64,
                    "censored": pl.Int64, "trials": pl.Int64},
        )

    def to_json(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "predicted": to_jsonable(self.predicted),
                "tol": self.tol, "seed": self.seed}


def waiting_time(nu: LetterLaw, target: LetterLaw, m_list: Sequence[int], trials: int,
                 tol_typicality: float, seed: int, threads: int = 1,
                 horizon_cap: int = WAITING_HORIZON_CAP) -> WaitingResult:
    """
    Experimento de tiempo de espera.

    La tolerancia efectiva por M es max(tol, 1/(2M)), de modo que el conjunto de
    bloques típicos nunca es vacío. El ensayo t con largo M usa el flujo
    (seed, M, t); las medias se reducen en orden de ensayo.
    """
    if target.alphabet != nu.alphabet:
        raise InputError("waiting_time: ψ y ν deben compartir alfabeto")
    if trials < 1:
        raise InputError("trials: debe ser ≥ 1")
    ms = [int(m) for m in m_list]
    if not ms or ms[0] < 1 or any(b <= a for a, b in zip(ms, ms[1:])):
        raise InputError("M: la lista debe ser no vacía, creciente y de enteros ≥ 1")
    psi = target.probs

    filas: List[WaitingRow] = []
    for M in ms:
        tol = max(tol_typicality, 1.0 / (2 * M))

        def ensayo(t: int, M: int = M, tol: float = tol) -> Tuple[int, bool]:
            return first_hit(nu, psi, M, tol, stream(seed, M, t), horizon_cap)

        res = ordered_map(ensayo, list(range(trials)), threads)
        censurados = sum(1 for _, c in res if c)
        if censurados:
            logger.warning("⚠ M=%d: %d de %d ensayos censurados en %d letras", M, censurados, trials, horizon_cap)
        media = fsum_ordered([math.log(s) for s, _ in res]) / trials
        filas.append(WaitingRow(M, media, media / M, censurados, trials))

    if len(filas) >= 2:
        ajuste = linregress([r.M for r in filas], [r.mean_log_sigma for r in filas])
        pendiente, ordenada = float(ajuste.slope), float(ajuste.intercept)
    else:
        pendiente, ordenada = filas[0].per_letter, 0.0
    return WaitingResult(tuple(filas), pendiente, ordenada, rel_entropy(psi, nu.probs),
                         tol_typicality, seed)
