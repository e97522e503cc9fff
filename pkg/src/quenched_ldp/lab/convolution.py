"""Cota de cola para convoluciones: ρ^{*m}(n) ≤ (C_ρ ∨ 1)·m^{α+1}·n^{−α}."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import polars as pl

from quenched_ldp.config import PREMISE_RTOL
from quenched_ldp.core.laws import RenewalLaw, TailBoundary
from quenched_ldp.errors import InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConvTailResult:
    worst_ratio: float
    at_m: int
    at_n: int
    alpha: float
    c_rho: float
    m_max: int
    n_max: int

    @property
    def passes(self) -> bool:
        return self.worst_ratio <= 1.0 + 1e-12

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame([{
            "alpha": self.alpha, "c_rho": self.c_rho, "m_max": self.m_max, "n_max": self.n_max,
            "worst_ratio": self.worst_ratio, "at_m": self.at_m, "at_n": self.at_n, "passes": self.passes,
        }])


def conv_tail_check(rho: RenewalLaw, alpha: float | None = None, c_rho: float | None = None,
                    m_max: int = 5, n_max: int = 2000) -> ConvTailResult:
    """
    Verifica la premisa ρ(n) ≤ C_ρ n^{−α} sobre el soporte y luego calcula
    las m-convoluciones exactas (sumas directas) hasta n_max, devolviendo el
    peor cociente ρ^{*m}(n)·n^α / ((C_ρ ∨ 1)·m^{α+1}) y dónde ocurre.
    """
    alpha = rho.alpha if alpha is None else alpha
    if isinstance(alpha, TailBoundary) or not float(alpha) > 0:
        raise InputError(f"alpha: se requiere un exponente real (recibido {alpha})")
    alpha = float(alpha)
    c = rho.c_rho if c_rho is None else float(c_rho)
    if c is None or math.isnan(c):
        raise InputError("c_rho: la ley no declara C_ρ; pasarlo explícitamente")
    if m_max < 1 or n_max < 1:
        raise InputError("m_max y n_max deben ser ≥ 1")

    for n, p in zip(rho.atoms, rho.probs):
        if p > c * float(n) ** (-alpha) * (1.0 + PREMISE_RTOL):
            raise InputError(
                f"premisa violada en n={int(n)}: ρ(n) = {p:.6g} > C_ρ·n^(−α) = {c * float(n) ** (-alpha):.6g}"
            )

    base = rho.dense(n_max)
    ns = np.arange(n_max + 1, dtype=float)
    potencia = np.zeros(n_max + 1)
    potencia[1:] = ns[1:] ** alpha
    conv = base.copy()
    peor, en_m, en_n = 0.0, 1, 1
    for m in range(1, m_max + 1):
        if m > 1:
            conv = np.convolve(conv, base)[: n_max + 1]
        cociente = conv * potencia / (max(c, 1.0) * m ** (alpha + 1.0))
        j = int(np.argmax(cociente))
        if cociente[j] > peor:
            peor, en_m, en_n = float(cociente[j]), m, j
    logger.debug("conv tail α=%s: peor cociente %.6g en (m=%d, n=%d)", alpha, peor, en_m, en_n)
    return ConvTailResult(peor, en_m, en_n, alpha, c, m_max, n_max)
