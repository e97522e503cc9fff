"""
Laboratorio del lema central
============================

S_N(ω) = Σ_{0<j_1<…<j_N ≤ T, ω_{j_i}=1} Π (j_i − j_{i−1})^{−α},  j_0 = 0,

para ω i.i.d. Bernoulli(p). Se calcula exacto con el DP

    f_i(j) = ω_j · Σ_{j'<j} f_{i−1}(j')·(j − j')^{−α},

por convolución directa (T chico) o por FFT, reescalando cada paso por su
máximo y acumulando la escala en log. También: la media Monte Carlo de S_N,
las cotas de φ(α, p) y el oráculo por fuerza bruta.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
import polars as pl
from scipy import fft as sfft
from scipy.optimize import minimize_scalar
from scipy.special import zeta

from quenched_ldp.config import BATCH_ROWS, FFT_THRESHOLD
from quenched_ldp.core.intervals import Divergent, to_jsonable
from quenched_ldp.errors import InputError
from quenched_ldp.utils.funciones import fsum_ordered, ordered_map
from quenched_ldp.utils.rng import stream

logger = logging.getLogger(__name__)


# ─────────────────────────────────────────────
# ζ truncada y ω
# ─────────────────────────────────────────────
def zeta_partial(alpha: float, T: int) -> float:
    """ζ_T(α) = Σ_{n ≤ T} n^{−α}; vía Hurwitz para α > 1."""
    if T < 1:
        return 0.0
    if alpha > 1.0 and T > 1000:
        return float(zeta(alpha, 1) - zeta(alpha, T + 1))
    return float(np.sum(np.arange(1, T + 1, dtype=float) ** (-alpha)))


def bernoulli_marks(p: float, T: int, seed: int, *keys: int) -> np.ndarray:
    if not 0.0 < p <= 1.0:
        raise InputError(f"p: debe estar en (0, 1] (recibido {p})")
    return stream(seed, *keys).random(T) < p


def _as_marks(omega: Sequence[int] | np.ndarray, T: int) -> np.ndarray:
    w = np.asarray(omega, dtype=bool)
    if w.ndim != 1:
        raise InputError("ω: se espera un vector de bits")
    if w.size < T:
        raise InputError(f"ω: largo {w.size} menor que el horizonte T={T}")
    return w[:T]


def _kernel(alpha: float, T: int) -> np.ndarray:
    k = np.zeros(T + 1)
    k[1:] = np.arange(1, T + 1, dtype=float) ** (-alpha)
    return k


# ─────────────────────────────────────────────
# DP exacto
# ─────────────────────────────────────────────
def s_n_series(omega: Sequence[int] | np.ndarray, alpha: float, n_max: int, T: int
               ) -> List["float | Divergent"]:
    """log S_N para N = 1..n_max en una sola pasada del DP."""
    if T < 1 or n_max < 1:
        raise InputError("s_n_eval: se requiere T ≥ 1 y N ≥ 1")
    marcas = np.concatenate(([False], _as_marks(omega, T)))  # índice = posición j (0..T)
    k = _kernel(alpha, T)
    usar_fft = T > FFT_THRESHOLD
    if usar_fft:
        n_fft = sfft.next_fast_len(2 * T + 2, real=True)
        k_hat = sfft.rfft(k, n_fft)

    f = np.zeros(T + 1)
    f[0] = 1.0
    escala = 0.0
    disponibles = int(marcas.sum())
    out: List[float | Divergent] = []
    for i in range(1, n_max + 1):
        if i > disponibles:
            out.extend(Divergent(f"menos de {n} sitios marcados en [1, {T}]") for n in range(i, n_max + 1))
            break
        if usar_fft:
            g = sfft.irfft(sfft.rfft(f, n_fft) * k_hat, n_fft)[: T + 1]
        else:
            g = np.convolve(f, k)[: T + 1]
        g = np.where(marcas, np.maximum(g, 0.0), 0.0)
        tope = float(g.max())
        if tope <= 0.0:
            out.extend(Divergent(f"S_{n} = 0 en el horizonte {T}") for n in range(i, n_max + 1))
            break
        f = g / tope
        escala += math.log(tope)
        out.append(escala + math.log(float(f.sum())))
    return out


def s_n_eval(omega: Sequence[int] | np.ndarray, alpha: float, n_words: int, T: int) -> "float | Divergent":
    """log S_N(ω) exacto; `Divergent` (log S_N = −∞) si hay menos de N marcas."""
    if T < n_words:
        raise InputError(f"s_n_eval: se requiere T ≥ N (T={T}, N={n_words})")
    return s_n_series(omega, alpha, n_words, T)[-1]


def s_n_brute(omega: Sequence[int] | np.ndarray, alpha: float, n_words: int, T: int) -> "float | Divergent":
    """Oráculo: suma sobre todas las N-uplas crecientes de sitios marcados."""
    marcas = [j + 1 for j, b in enumerate(_as_marks(omega, T)) if b]
    terminos = []
    for js in itertools.combinations(marcas, n_words):
        prev, prod = 0, 1.0
        for j in js:
            prod *= (j - prev) ** (-alpha)
            prev = j
        terminos.append(prod)
    if not terminos:
        return Divergent(f"menos de {n_words} sitios marcados")
    return math.log(math.fsum(terminos))


def s_n_batch(marks: np.ndarray, alpha: float, n_words: int) -> np.ndarray:
    """
    S_N (escala lineal) para un lote de ω (filas), con rfft a lo largo del eje 1.
    Filas con menos de N marcas dan 0.
    """
    R, T = marks.shape
    m = np.concatenate((np.zeros((R, 1), dtype=bool), marks), axis=1)
    k = _kernel(alpha, T)
    n_fft = sfft.next_fast_len(2 * T + 2, real=True)
    k_hat = sfft.rfft(k, n_fft)
    f = np.zeros((R, T + 1))
    f[:, 0] = 1.0
    for _ in range(n_words):
        g = sfft.irfft(sfft.rfft(f, n_fft, axis=1) * k_hat, n_fft, axis=1)[:, : T + 1]
        f = np.where(m, np.maximum(g, 0.0), 0.0)
    return f.sum(axis=1)


def s_n_exact_mean(alpha: float, p: float, n_words: int, T: int) -> float:
    """E[S_N] con horizonte T: p^N · S_N(1…1)."""
    lg = s_n_eval(np.ones(T, dtype=bool), alpha, n_words, T)
    if isinstance(lg, Divergent):
        return 0.0
    return math.exp(n_words * math.log(p) + lg)


# ─────────────────────────────────────────────
# Cotas de φ(α, p)
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class PhiBounds:
    lower: float
    upper: float
    beta_star: float

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "beta_star": self.beta_star}


def phi_lower_at(alpha: float, p: float, beta: float) -> float:
    """−(1/β)·(log p + log ζ(αβ)), para β ∈ (1/α, 1]."""
    return -(math.log(p) + math.log(float(zeta(alpha * beta, 1)))) / beta


def phi_bounds(alpha: float, p: float) -> PhiBounds:
    """
    upper = α·log(1/p); lower = max_β −(1/β)(log p + log ζ(αβ)) sobre (1/α, 1],
    maximizado con búsqueda acotada de Brent (sección áurea + parábolas).
    """
    if not alpha > 1.0:
        raise InputError(f"alpha: debe ser > 1 (recibido {alpha})")
    if not 0.0 < p < 1.0:
        raise InputError(f"p: debe estar en (0, 1) (recibido {p})")
    a = 1.0 / alpha + 1e-9
    res = minimize_scalar(lambda b: -phi_lower_at(alpha, p, b), bounds=(a, 1.0),
                          method="bounded", options={"xatol": 1e-10})
    beta, lower = float(res.x), -float(res.fun)
    en_uno = phi_lower_at(alpha, p, 1.0)
    if en_uno > lower:
        beta, lower = 1.0, en_uno
    upper = alpha * math.log(1.0 / p)
    return PhiBounds(min(lower, upper), upper, beta)


# ─────────────────────────────────────────────
# Monte Carlo de E[S_N]
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class MeanCheck:
    n_words: int
    mean: float
    half_width: float
    target: float
    exact_mean: float
    trials: int

    @property
    def passes(self) -> bool:
        return abs(self.mean - self.target) <= 3.0 * self.half_width

    def to_row(self) -> dict:
        return {"N": self.n_words, "mc_mean": self.mean, "ci_half_width": self.half_width,
                "target": self.target, "exact_mean": self.exact_mean, "trials": self.trials,
                "passes": self.passes}


def s_n_mean_check(alpha: float, p: float, n_words: int, T: int, trials: int, seed: int,
                   threads: int = 1) -> MeanCheck:
    """
    Media Monte Carlo de S_N con IC al 95 % frente a (p·ζ_T(α))^N. El ensayo t
    usa el flujo (seed, N, t); los lotes se reducen en orden de ensayo.
    """
    if trials < 2:
        raise InputError("trials: se requieren al menos 2 ensayos")
    lotes = [list(range(s, min(s + BATCH_ROWS, trials))) for s in range(0, trials, BATCH_ROWS)]

    def lote(indices: List[int]) -> np.ndarray:
        marcas = np.stack([bernoulli_marks(p, T, seed, n_words, t) for t in indices])
        return s_n_batch(marcas, alpha, n_words)

    valores = np.concatenate(ordered_map(lote, lotes, threads)).tolist()
    media = fsum_ordered(valores) / trials
    var = fsum_ordered([(v - media) ** 2 for v in valores]) / (trials - 1)
    semi = 1.96 * math.sqrt(var / trials)
    objetivo = (p * zeta_partial(alpha, T)) ** n_words
    return MeanCheck(n_words, media, semi, objetivo, s_n_exact_mean(alpha, p, n_words, T), trials)


# ─────────────────────────────────────────────
# Corrida completa
# ─────────────────────────────────────────────
@dataclass(frozen=True)
class CoreLemmaRun:
    alpha: float
    p: float
    n_list: Tuple[int, ...]
    horizon: int
    samples: int
    seed: int
    log_s: Tuple[Tuple["float | Divergent", ...], ...]  # [muestra][índice en n_list]
    phi: PhiBounds
    mean_checks: Tuple[MeanCheck, ...] = field(default=())

    def slopes(self, i_sample: int) -> List["float | Divergent"]:
        return [v if isinstance(v, Divergent) else -v / n
                for n, v in zip(self.n_list, self.log_s[i_sample])]

    def median_slope(self, n: int) -> float | None:
        j = self.n_list.index(n)
        vals = [-fila[j] / n for fila in self.log_s if not isinstance(fila[j], Divergent)]
        return float(np.median(vals)) if vals else None

    def to_frame(self) -> pl.DataFrame:
        filas = []
        for s, fila in enumerate(self.log_s):
            for n, v in zip(self.n_list, fila):
                finito = not isinstance(v, Divergent)
                filas.append({
                    "sample": s, "N": n,
                    "log_S": v if finito else None,
                    "slope": -v / n if finito else None,
                    "ratio_to_upper": (-v / n) / self.phi.upper if finito else None,
                    "phi_lower": self.phi.lower, "phi_upper": self.phi.upper,
                })
        return pl.DataFrame(filas, schema={
            "sample": pl.Int64, "N": pl.Int64, "log_S": pl.Float64, "slope": pl.Float64,
            "ratio_to_upper": pl.Float64, "phi_lower": pl.Float64, "phi_upper": pl.Float64,
        })

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "p": self.p, "n_list": list(self.n_list), "horizon": self.horizon,
                "samples": self.samples, "seed": self.seed, "phi": self.phi.to_json(),
                "mean_checks": [m.to_row() for m in self.mean_checks],
                "median_slopes": {str(n): to_jsonable(self.median_slope(n)) for n in self.n_list}}


def core_lemma_run(alpha: float, p: float, n_list: Sequence[int], T: int, samples: int, seed: int,
                   mc_trials: int = 0, mc_n: Sequence[int] = (), mc_horizon: int = 10 ** 4,
                   threads: int = 1) -> CoreLemmaRun:
    """
    `samples` realizaciones ω (flujo (seed, s)) con log S_N exacto para cada N
    de `n_list`; opcionalmente el control de media para los N de `mc_n`.
    """
    ns = tuple(int(n) for n in n_list)
    if not ns or any(b <= a for a, b in zip(ns, ns[1:])):
        raise InputError("N: la lista debe ser no vacía y estrictamente creciente")
    if T < ns[-1]:
        raise InputError(f"horizon: se requiere T ≥ N (T={T}, N máx={ns[-1]})")

    def muestra(s: int) -> Tuple[float | Divergent, ...]:
        serie = s_n_series(bernoulli_marks(p, T, seed, s), alpha, ns[-1], T)
        return tuple(serie[n - 1] for n in ns)

    log_s = tuple(ordered_map(muestra, list(range(samples)), threads))
    chequeos = tuple(s_n_mean_check(alpha, p, n, mc_horizon, mc_trials, seed, threads)
                     for n in mc_n) if mc_trials else ()
    fi = phi_bounds(alpha, p) if p < 1.0 else PhiBounds(0.0, 0.0, 1.0)
    return CoreLemmaRun(alpha, p, ns, T, samples, seed, log_s, fi, chequeos)
