"""
Probabilidades templadas exactas
================================

P(R_N ∈ O | X) = Σ_{cortes} 1_O(R_N) Π ρ(j_i − j_{i−1}), con incrementos en
supp(ρ) ∩ [1, Jmax] y O dada por restricciones sobre frecuencias de una
palabra o de pares de palabras consecutivas (con vuelta periódica).

El DP recorre (posición, conteos de patrones seguidos, clase de la última
palabra, clase de la primera palabra) en dominio logarítmico. La versión
por fuerza bruta enumera todos los vectores de corte y sirve de oráculo.
"""
from __future__ import annotations

import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
import polars as pl
from scipy.special import gammaln, logsumexp

from quenched_ldp.config import ENUM_BUDGET
from quenched_ldp.core.intervals import Divergent, to_jsonable
from quenched_ldp.core.laws import LetterLaw, RenewalLaw
from quenched_ldp.core.rates import Neighbourhood, i_projection
from quenched_ldp.errors import BudgetError, InputError
from quenched_ldp.utils.funciones import log_add, ordered_map
from quenched_ldp.utils.rng import stream

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# Preparación común
# ─────────────────────────────────────────────
def _increments(rho: RenewalLaw, jmax: int) -> List[Tuple[int, float]]:
    if jmax < 1:
        raise InputError(f"jmax: debe ser ≥ 1 (recibido {jmax})")
    pasos = [(int(n), math.log(p)) for n, p in zip(rho.atoms, rho.probs) if n <= jmax and p > 0]
    if not pasos:
        raise InputError(f"jmax: ρ no tiene átomos ≤ {jmax}")
    return pasos


def _check_medium(x: str, n_words: int, jmax: int) -> None:
    if n_words < 1:
        raise InputError("N: debe ser ≥ 1")
    if n_words * jmax > len(x):
        raise InputError(f"medio: N·Jmax = {n_words * jmax} excede el largo de X ({len(x)})")


def _admitted(nbhd: Neighbourhood, single: Mapping[str, int], pairs: Mapping[Tuple[str, str], int],
              n_words: int) -> bool:
    for c in nbhd.single_word:
        if not c.admits(single.get(c.pattern[0], 0), n_words):
            return False
    for c in nbhd.pair:
        if not c.admits(pairs.get((c.pattern[0], c.pattern[1]), 0), n_words):
            return False
    return True


# ─────────────────────────────────────────────
# DP exacto
# ─────────────────────────────────────────────
def quenched_log_prob_enum(x: str, rho: RenewalLaw, n_words: int, nbhd: Neighbourhood,
                           jmax: int) -> "float | Divergent":
    """log P(R_N ∈ O | X), o `Divergent` si la probabilidad es 0."""
    _check_medium(x, n_words, jmax)
    pasos = _increments(rho, jmax)

    simples = sorted({c.pattern[0] for c in nbhd.single_word})
    pares = sorted({(c.pattern[0], c.pattern[1]) for c in nbhd.pair})
    idx_s = {w: i for i, w in enumerate(simples)}
    idx_p = {p: i for i, p in enumerate(pares)}
    clases = sorted({w for p in pares for w in p})
    idx_c = {w: i for i, w in enumerate(clases)}
    techo_s = [min(math.floor(min(c.upper for c in nbhd.single_word if c.pattern[0] == w) * n_words), n_words)
               for w in simples]
    techo_p = [min(math.floor(min(c.upper for c in nbhd.pair if (c.pattern[0], c.pattern[1]) == p) * n_words),
                   n_words) for p in pares]

    estimado = (n_words * jmax) * (n_words + 1) ** (len(simples) + len(pares)) * (len(clases) + 1) ** 2
    if estimado * n_words > ENUM_BUDGET:
        raise BudgetError(
            f"quenched_prob_enum: (N·Jmax)·(N+1)^{len(simples) + len(pares)}·(clases+1)²·N = "
            f"{n_words * jmax}·{n_words + 1}^{len(simples) + len(pares)}·{len(clases) + 1}²·{n_words} "
            f"= {estimado * n_words} > presupuesto {ENUM_BUDGET}"
        )

    def clase(w: str) -> int:
        return idx_c.get(w, -1)

    # estado: (pos, conteos simples, conteos de pares, última clase, primera clase)
    cero_s, cero_p = (0,) * len(simples), (0,) * len(pares)
    estados: Dict[tuple, float] = {(0, cero_s, cero_p, -2, -2): 0.0}
    for i in range(n_words):
        nuevos: Dict[tuple, float] = {}
        for (pos, cs, cp, ultima, primera), lw in estados.items():
            for n, lr in pasos:
                w = x[pos:pos + n]
                cs2 = cs
                if w in idx_s:
                    j = idx_s[w]
                    if cs[j] + 1 > techo_s[j]:
                        continue
                    cs2 = cs[:j] + (cs[j] + 1,) + cs[j + 1:]
                cw = clase(w)
                cp2 = cp
                if i > 0 and pares:
                    prev = clases[ultima] if ultima >= 0 else None
                    k = idx_p.get((prev, w)) if prev is not None else None
                    if k is not None:
                        if cp[k] + 1 > techo_p[k]:
                            continue
                        cp2 = cp[:k] + (cp[k] + 1,) + cp[k + 1:]
                clave = (pos + n, cs2, cp2, cw, cw if i == 0 else primera)
                previo = nuevos.get(clave)
                nuevos[clave] = lw + lr if previo is None else log_add(previo, lw + lr)
        estados = nuevos
        if len(estados) * n_words > ENUM_BUDGET:
            raise BudgetError(f"quenched_prob_enum: {len(estados)} estados × N={n_words} > presupuesto {ENUM_BUDGET}")

    acumulado: float | None = None
    for (_, cs, cp, ultima, primera), lw in estados.items():
        conteo_p = {p: cp[k] for p, k in idx_p.items()}
        if pares and ultima >= 0 and primera >= 0:
            cierre = (clases[ultima], clases[primera])
            if cierre in conteo_p:
                conteo_p[cierre] += 1
        conteo_s = {w: cs[k] for w, k in idx_s.items()}
        if _admitted(nbhd, conteo_s, conteo_p, n_words):
            acumulado = lw if acumulado is None else log_add(acumulado, lw)
    if acumulado is None:
        return Divergent(f"P(R_N ∈ O | X) = 0 para N={n_words}")
    return acumulado


def quenched_prob_enum(x: str, rho: RenewalLaw, n_words: int, nbhd: Neighbourhood, jmax: int) -> float:
    lp = quenched_log_prob_enum(x, rho, n_words, nbhd, jmax)
    return 0.0 if isinstance(lp, Divergent) else math.exp(lp)


def quenched_prob_brute(x: str, rho: RenewalLaw, n_words: int, nbhd: Neighbourhood, jmax: int) -> float:
    """Oráculo: enumera los |pasos|^N vectores de incrementos."""
    _check_medium(x, n_words, jmax)
    pasos = _increments(rho, jmax)
    terminos = []
    for combo in itertools.product(pasos, repeat=n_words):
        pos, palabras = 0, []
        for n, _ in combo:
            palabras.append(x[pos:pos + n])
            pos += n
        single: Dict[str, int] = defaultdict(int)
        pairs: Dict[Tuple[str, str], int] = defaultdict(int)
        for k, w in enumerate(palabras):
            single[w] += 1
            pairs[(w, palabras[(k + 1) % n_words])] += 1
        if _admitted(nbhd, single, pairs, n_words):
            terminos.append(math.exp(sum(lr for _, lr in combo)))
    return math.fsum(terminos)


# ─────────────────────────────────────────────
# Lado recocido a N finito
# ─────────────────────────────────────────────
def annealed_weights(rho: RenewalLaw, nu: LetterLaw, jmax: int) -> Dict[str, float]:
    """Pesos sin normalizar ρ(|w|)·ν(w) para |w| ≤ Jmax."""
    out: Dict[str, float] = {}
    for n, p in zip(rho.atoms, rho.probs):
        if n > jmax:
            break
        for t in itertools.product(nu.alphabet.symbols, repeat=int(n)):
            w = "".join(t)
            out[w] = float(p) * math.exp(nu.log_prob_word(w))
    return out


def annealed_prob_exact(ref_weights: Mapping[str, float], nbhd: Neighbourhood,
                        n_words: int) -> "float | Divergent":
    """
    log P_ann(R_N ∈ O) con palabras i.i.d. de pesos `ref_weights` (sin
    normalizar), para restricciones de una palabra: suma multinomial exacta.
    """
    if nbhd.pair:
        raise InputError("annealed_prob_exact: solo restricciones sobre una palabra")
    seguidas = sorted({c.pattern[0] for c in nbhd.single_word})
    logq = [math.log(ref_weights[w]) if ref_weights.get(w, 0.0) > 0 else None for w in seguidas]
    resto = sum(v for w, v in ref_weights.items() if w not in seguidas)
    log_resto = math.log(resto) if resto > 0 else None
    N = n_words
    terminos = []
    for cuentas in itertools.product(range(N + 1), repeat=len(seguidas)):
        libre = N - sum(cuentas)
        if libre < 0:
            continue
        if not _admitted(nbhd, dict(zip(seguidas, cuentas)), {}, N):
            continue
        t = gammaln(N + 1) - gammaln(libre + 1)
        ok = True
        for c, lq in zip(cuentas, logq):
            t -= gammaln(c + 1)
            if c > 0:
                if lq is None:
                    ok = False
                    break
                t += c * lq
        if libre > 0:
            if log_resto is None:
                ok = False
            else:
                t += libre * log_resto
        if ok:
            terminos.append(t)
    if not terminos:
        return Divergent(f"P_ann(R_N ∈ O) = 0 para N={N}")
    return float(logsumexp(terminos))


# ─────────────────────────────────────────────
# Serie de pendientes
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class SlopePoint:
    n_words: int
    log_prob: "float | Divergent"
    slope: "float | Divergent"
    annealed_finite: "float | Divergent | None"
    slack: float | None


@dataclass(frozen=True)
class SlopeSeries:
    points: Tuple[SlopePoint, ...]
    annealed_slope: "float | Divergent"
    jmax: int
    seed: int
    medium: str
    discarded_mass: float
    metadata: Dict[str, object] = field(default_factory=dict)

    def excess(self) -> List["float | Divergent"]:
        """Pendiente templada menos pendiente recocida, por N."""
        out: List[float | Divergent] = []
        for p in self.points:
            if isinstance(p.slope, Divergent):
                out.append(p.slope)
            elif isinstance(self.annealed_slope, Divergent):
                out.append(Divergent("pendiente recocida infinita"))
            else:
                out.append(p.slope - self.annealed_slope)
        return out

    def to_frame(self) -> pl.DataFrame:
        def num(v: object) -> float | None:
            return None if v is None or isinstance(v, Divergent) else float(v)

        return pl.DataFrame(
            {
                "N": [p.n_words for p in self.points],
                "log_prob": [num(p.log_prob) for p in self.points],
                "quenched_slope": [num(p.slope) for p in self.points],
                "quenched_infinite": [isinstance(p.slope, Divergent) for p in self.points],
                "annealed_slope": [num(self.annealed_slope)] * len(self.points),
                "annealed_finite": [num(p.annealed_finite) for p in self.points],
                "slack": [p.slack for p in self.points],
            },
            schema={"N": pl.Int64, "log_prob": pl.Float64, "quenched_slope": pl.Float64,
                    "quenched_infinite": pl.Boolean, "annealed_slope": pl.Float64,
                    "annealed_finite": pl.Float64, "slack": pl.Float64},
        )

    def to_json(self) -> dict:
        return {
            "annealed_slope": to_jsonable(self.annealed_slope),
            "jmax": self.jmax, "seed": self.seed, "medium_length": len(self.medium),
            "discarded_mass": self.discarded_mass,
            "points": [{"N": p.n_words, "slope": to_jsonable(p.slope), "slack": p.slack} for p in self.points],
        }


def sample_medium(nu: LetterLaw, length: int, seed: int) -> str:
    letras = np.array(list(nu.alphabet.symbols))
    return "".join(letras[nu.sample(length, stream(seed, 0))].tolist())


def annealed_slope(rho: RenewalLaw, nu: LetterLaw, nbhd: Neighbourhood, jmax: int) -> "float | Divergent":
    """Pendiente recocida asintótica: I-proyección sobre q_J normalizada − log masa_J."""
    pesos = annealed_weights(rho, nu, jmax)
    masa = sum(pesos.values())
    proy = i_projection({w: v / masa for w, v in pesos.items()}, nbhd)
    if isinstance(proy.value, Divergent):
        return proy.value
    return proy.value - math.log(masa)


def quenched_slope_series(nu_x: LetterLaw, rho: RenewalLaw, nbhd: Neighbourhood, n_list: Sequence[int],
                          jmax: int, seed: int, medium: str | None = None,
                          threads: int = 1) -> SlopeSeries:
    """
    Serie −(1/N)·log P(R_N ∈ O | X) sobre un único X fijo, junto con la
    pendiente recocida y la holgura de N finito.

    Args:
        nu_x: ley de las letras del medio.
        rho: ley de renovación (se restringe a [1, Jmax] sin renormalizar).
        nbhd: vecindad O.
        n_list: valores de N, estrictamente crecientes.
        jmax: salto máximo.
        seed: semilla del medio.
        medium: medio explícito (reemplaza al muestreado).
        threads: hilos para evaluar los N en paralelo.

    Returns:
        SlopeSeries con un punto por N, en el orden de `n_list`.
    """
    ns = [int(n) for n in n_list]
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise InputError("N: la lista debe ser no vacía y estrictamente creciente")
    x = medium if medium is not None else sample_medium(nu_x, ns[-1] * jmax, seed)
    anneal = annealed_slope(rho, nu_x, nbhd, jmax) if not nbhd.pair else Divergent("sin I-proyección para pares")
    pesos = annealed_weights(rho, nu_x, jmax)

    def punto(n: int) -> SlopePoint:
        lp = quenched_log_prob_enum(x, rho, n, nbhd, jmax)
        pend = lp if isinstance(lp, Divergent) else -lp / n
        fin: float | Divergent | None = None
        holgura = None
        if not nbhd.pair:
            lpa = annealed_prob_exact(pesos, nbhd, n)
            fin = lpa if isinstance(lpa, Divergent) else -lpa / n
            if not isinstance(fin, Divergent) and not isinstance(anneal, Divergent):
                holgura = anneal - fin
        return SlopePoint(n, lp, pend, fin, holgura)

    puntos = tuple(ordered_map(punto, ns, threads))
    descartada = 1.0 - rho.mass_up_to(jmax)
    if descartada > 0:
        logger.info("masa de ρ descartada por Jmax=%d: %.4g", jmax, descartada)
    return SlopeSeries(puntos, anneal, jmax, seed, x, descartada,
                       {"n_list": ns, "nbhd": nbhd.to_json()})
