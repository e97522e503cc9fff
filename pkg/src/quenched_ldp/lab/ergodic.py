"""Límite ergódico de R_N: frecuencias empíricas vs q_{ρ,ν}^{⊗k}."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import polars as pl

from quenched_ldp.config import PATTERN_BUDGET
from quenched_ldp.core.laws import LetterLaw, RenewalLaw, reference_law, sample_path
from quenched_ldp.core.words import empirical_patterns
from quenched_ldp.errors import BudgetError, InputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ErgodicGap:
    n_words: int
    k: int
    gap: float
    worst_pattern: str
    bound: float
    n_patterns: int
    seed: int

    @property
    def within_bound(self) -> bool:
        return self.gap <= self.bound

    def to_frame(self) -> pl.DataFrame:
        return pl.DataFrame([{
            "N": self.n_words, "k": self.k, "gap": self.gap, "bound": self.bound,
            "worst_pattern": self.worst_pattern, "n_patterns": self.n_patterns, "seed": self.seed,
        }])


def ergodic_gap(nu: LetterLaw, rho: RenewalLaw, n_words: int, k: int, seed: int) -> ErgodicGap:
    """
    max sobre patrones de k palabras de |R_N(patrón) − q_{ρ,ν}^{⊗k}(patrón)|.

    La cota informada es 5·max √(q^{⊗k}(patrón)/N), la escala del TCL.
    """
    if k not in (1, 2):
        raise InputError(f"k: solo se enumeran patrones de 1 o 2 palabras (recibido {k})")
    ref = reference_law(rho, nu)
    atomos = ref.enumerate()
    n_patrones = len(atomos) ** k
    if n_patrones > PATTERN_BUDGET:
        raise BudgetError(f"ergodic_gap: {len(atomos)}^{k} = {n_patrones} patrones > presupuesto {PATTERN_BUDGET}")

    _, _, oracion = sample_path(nu, rho, None, n_words, seed)
    emp = empirical_patterns(oracion, k).as_dict()

    peor, donde, cota = 0.0, "", 0.0
    for combo in itertools.product(atomos.items(), repeat=k):
        clave = ",".join(w for w, _ in combo)
        teo = math.prod(p for _, p in combo)
        d = abs(emp.get(clave, 0.0) - teo)
        if d > peor:
            peor, donde = d, clave
        cota = max(cota, 5.0 * math.sqrt(teo / n_words))
    fuera = set(emp) - {",".join(c) for c in itertools.product(atomos, repeat=k)}
    if fuera:
        # solo puede ocurrir si la oración contiene palabras fuera del soporte de q
        raise InputError(f"ergodic_gap: patrones empíricos fuera del soporte: {sorted(fuera)[:3]}")
    logger.debug("ergodic gap N=%d k=%d: %.3g en '%s'", n_words, k, peor, donde)
    return ErgodicGap(n_words, k, peor, donde, cota, n_patrones, seed)
