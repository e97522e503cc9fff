"""
Leyes de letras, de renovación y de procesos de palabras
========================================================

* `LetterLaw`      – ν sobre un alfabeto finito (soporte completo).
* `RenewalLaw`     – ρ sobre los enteros positivos, con soporte acotado por un
                     tope y exponente de cola declarado (real > 1, ONE o INFINITY).
* `IIDLaw`         – Q = q^{⊗ℕ}.
* `MarkovLaw`      – cadena de Markov estacionaria e irreducible sobre un
                     conjunto finito de palabras.
* `TruncatedMarkovLaw` – ley imagen [Q]_tr de una cadena de Markov cuando el
                     agrupamiento de estados no es markoviano.
* `ReferenceLaw`   – q_{ρ,ν}(w) = ρ(|w|) ν(w_1)…ν(w_n).

Todas las leyes son inmutables tras la construcción; el muestreo recibe un
generador explícito.
"""
from __future__ import annotations

import bisect
import itertools
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
from scipy.sparse.csgraph import connected_components
from scipy.special import zeta

from quenched_ldp.config import (
    MASS_TOL,
    MAX_MARKOV_WORDS,
    PATTERN_BUDGET,
    POWER_ITER_TOL,
    STATIONARY_TOL,
)
from quenched_ldp.core.words import Alphabet, CutPoints, Sentence, cut, sentence_key, truncate
from quenched_ldp.errors import BudgetError, InputError, LumpingError
from quenched_ldp.utils.rng import stream

logger = logging.getLogger(__name__)


class TailBoundary(str, Enum):
    ONE = "one"
    INFINITY = "infinity"


def _normalized(probs: Sequence[float], campo: str, tol: float = MASS_TOL) -> np.ndarray:
    p = np.asarray(probs, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InputError(f"{campo}: se requiere un vector no vacío de probabilidades")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InputError(f"{campo}: probabilidades negativas o no finitas")
    total = float(p.sum())
    if abs(total - 1.0) > tol:
        raise InputError(f"{campo}: las probabilidades suman {total!r}, no 1")
    return p / total


# ─────────────────────────────────────────────────────────────────────────────
# ν
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class LetterLaw:
    alphabet: Alphabet
    probs: np.ndarray
    full_support: bool = True

    def __post_init__(self) -> None:
        p = _normalized(self.probs, "letter law")
        if p.size != len(self.alphabet):
            raise InputError(
                f"letter law: {p.size} probabilidades para un alfabeto de {len(self.alphabet)} letras"
            )
        if self.full_support and np.any(p <= 0):
            raise InputError("letter law: ν debe tener soporte igual al alfabeto")
        object.__setattr__(self, "probs", p)

    @classmethod
    def uniform(cls, alphabet: Alphabet | str) -> "LetterLaw":
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        n = len(alphabet)
        return cls(alphabet, np.full(n, 1.0 / n))

    @classmethod
    def from_mapping(cls, alphabet: Alphabet | str, mapping: Mapping[str, float],
                     full_support: bool = True) -> "LetterLaw":
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        return cls(alphabet, np.array([mapping.get(c, 0.0) for c in alphabet.symbols]), full_support)

    def prob(self, letter: str) -> float:
        return float(self.probs[self.alphabet.index(letter)])

    @property
    def log_probs(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return np.log(self.probs)

    def log_prob_word(self, w: str) -> float:
        return float(sum(math.log(self.prob(c)) for c in w))

    def product_table(self, depth: int) -> np.ndarray:
        """ν^{⊗L} en orden lexicográfico (primer símbolo más significativo)."""
        out = np.ones(1)
        for _ in range(depth):
            out = np.kron(out, self.probs)
        return out

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return rng.choice(len(self.alphabet), size=n, p=self.probs)

    def to_json(self) -> dict:
        return {"alphabet": self.alphabet.symbols, "probs": self.probs.tolist()}


# ─────────────────────────────────────────────────────────────────────────────
# ρ
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class RenewalLaw:
    atoms: np.ndarray
    probs: np.ndarray
    alpha: "float | TailBoundary"
    c_rho: float = math.nan
    tail_mass: float = 0.0
    _lookup: Dict[int, float] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        atoms = np.asarray(self.atoms, dtype=np.int64)
        probs = _normalized(self.probs, "renewal law")
        if atoms.size != probs.size:
            raise InputError("renewal law: átomos y probabilidades de distinto largo")
        if atoms.size == 0 or np.any(atoms < 1):
            raise InputError("renewal law: el soporte debe ser no vacío y ⊂ {1, 2, …}")
        if np.any(np.diff(atoms) <= 0):
            raise InputError("renewal law: átomos repetidos o desordenados")
        keep = probs > 0
        atoms, probs = atoms[keep], probs[keep]
        if isinstance(self.alpha, (int, float)) and not isinstance(self.alpha, bool):
            if not float(self.alpha) > 1.0:
                raise InputError("renewal law: α real debe ser > 1 (usar ONE/INFINITY en los bordes)")
            object.__setattr__(self, "alpha", float(self.alpha))
        elif not isinstance(self.alpha, TailBoundary):
            object.__setattr__(self, "alpha", TailBoundary(self.alpha))
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "_lookup", {int(n): float(p) for n, p in zip(atoms, probs)})

    @property
    def support_cap(self) -> int:
        return int(self.atoms[-1])

    def pmf(self, n: int) -> float:
        return self._lookup.get(int(n), 0.0)

    def log_pmf(self, n: int) -> float | None:
        p = self.pmf(n)
        return math.log(p) if p > 0 else None

    def dense(self, n_max: int | None = None) -> np.ndarray:
        """Vector indexado por n = 0..n_max (entrada 0 nula)."""
        n_max = self.support_cap if n_max is None else int(n_max)
        out = np.zeros(n_max + 1)
        sel = self.atoms <= n_max
        out[self.atoms[sel]] = self.probs[sel]
        return out

    def mass_up_to(self, jmax: int) -> float:
        return float(self.probs[self.atoms <= jmax].sum())

    def restricted(self, jmax: int) -> "RenewalLaw":
        """ρ restringida a [1, jmax] y renormalizada."""
        sel = self.atoms <= jmax
        if not np.any(sel):
            raise InputError(f"renewal law: sin átomos ≤ {jmax}")
        p = self.probs[sel]
        return RenewalLaw(self.atoms[sel], p / p.sum(), self.alpha, self.c_rho, self.tail_mass)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return self.atoms[rng.choice(self.atoms.size, size=n, p=self.probs)]

    def mean(self) -> float:
        return float(np.dot(self.atoms, self.probs))

    def alpha_json(self) -> "float | str":
        return self.alpha.value if isinstance(self.alpha, TailBoundary) else self.alpha

    def to_json(self) -> dict:
        return {
            "atoms": [[int(n), float(p)] for n, p in zip(self.atoms, self.probs)],
            "alpha": self.alpha_json(),
            "c_rho": None if math.isnan(self.c_rho) else self.c_rho,
            "tail_mass": self.tail_mass,
        }


def make_algebraic_renewal(alpha: float, cap: int) -> RenewalLaw:
    """
    ρ(n) ∝ n^{-α} sobre {1, …, cap}.

    Registra C_ρ = 1/ζ_cap(α), de modo que ρ(n) = C_ρ n^{-α} en todo el
    soporte, y la masa de cola que se descarta respecto de la ley sin tope.
    """
    if cap < 1:
        raise InputError(f"cap: debe ser ≥ 1 (recibido {cap})")
    if not alpha > 1.0:
        raise InputError(f"alpha: el constructor algebraico requiere α > 1 (recibido {alpha})")
    n = np.arange(1, cap + 1, dtype=float)
    w = n ** (-float(alpha))
    z = float(w.sum())
    tail = max(0.0, 1.0 - z / float(zeta(alpha, 1)))
    if tail > 0.05:
        logger.warning("⚠ ρ algebraica (α=%s, cap=%d): se descarta %.3g de masa de cola", alpha, cap, tail)
    return RenewalLaw(n.astype(np.int64), w / z, float(alpha), c_rho=1.0 / z, tail_mass=tail)


def make_boundary_renewal(mode: TailBoundary | str, cap: int, rate: float = 1.0) -> RenewalLaw:
    """Casos de borde: ONE → ρ(n) ∝ 1/(n log²(n+1)); INFINITY → ρ(n) ∝ e^{-rate·n}."""
    mode = TailBoundary(mode)
    if cap < 1:
        raise InputError(f"cap: debe ser ≥ 1 (recibido {cap})")
    n = np.arange(1, cap + 1, dtype=float)
    if mode is TailBoundary.ONE:
        w = 1.0 / (n * np.log(n + 1.0) ** 2)
        tail = math.nan  # la suma infinita converge muy lento; no se informa
    else:
        if rate <= 0:
            raise InputError("rate: debe ser > 0")
        w = np.exp(-rate * (n - 1.0))
        tail = math.exp(-rate * cap)
    return RenewalLaw(n.astype(np.int64), w / w.sum(), mode, tail_mass=tail)


def renewal_from_atoms(atoms: Mapping[int, float] | Sequence[Sequence[float]],
                       alpha: "float | TailBoundary | str") -> RenewalLaw:
    """ρ con átomos explícitos (soportes con huecos permitidos)."""
    pares = sorted(atoms.items()) if isinstance(atoms, Mapping) else sorted((int(a), float(b)) for a, b in atoms)
    ns = np.array([int(a) for a, _ in pares], dtype=np.int64)
    ps = _normalized([float(b) for _, b in pares], "renewal atoms", tol=1e-9)
    if isinstance(alpha, (int, float)) and not isinstance(alpha, bool):
        c = float(np.max(ps * ns.astype(float) ** float(alpha)))
        return RenewalLaw(ns, ps, float(alpha), c_rho=c)
    return RenewalLaw(ns, ps, TailBoundary(alpha))


def uniform_renewal(n_max: int) -> RenewalLaw:
    ns = np.arange(1, n_max + 1, dtype=np.int64)
    return RenewalLaw(ns, np.full(n_max, 1.0 / n_max), TailBoundary.INFINITY)


# ─────────────────────────────────────────────────────────────────────────────
# Q: leyes estacionarias sobre sucesiones de palabras
# ─────────────────────────────────────────────────────────────────────────────
class WordProcessLaw(ABC):
    """
    Interfaz común. Un "estado-palabra" es un estado de la cadena subyacente;
    `states[i]` es la palabra que emite (puede repetirse en leyes imagen).
    """

    alphabet: Alphabet
    variant: str

    @property
    @abstractmethod
    def states(self) -> Tuple[str, ...]: ...

    @property
    @abstractmethod
    def state_probs(self) -> np.ndarray: ...

    @property
    @abstractmethod
    def state_kernel(self) -> np.ndarray: ...

    @property
    def lengths(self) -> np.ndarray:
        return np.array([len(w) for w in self.states], dtype=np.int64)

    @property
    def max_length(self) -> int:
        return int(self.lengths.max())

    def marginal(self) -> Dict[str, float]:
        """Ley de la primera palabra, agregada por palabra emitida."""
        out: Dict[str, float] = {}
        for w, p in zip(self.states, self.state_probs):
            if p > 0:
                out[w] = out.get(w, 0.0) + float(p)
        return dict(sorted(out.items()))

    def block_law(self, n_words: int) -> Dict[str, float]:
        """Marginal exacta de N palabras, claves = serialización canónica."""
        k = len(self.states)
        if k ** n_words > PATTERN_BUDGET:
            raise BudgetError(
                f"block_law: {k}^{n_words} = {k ** n_words} patrones > presupuesto {PATTERN_BUDGET}"
            )
        pi, P = self.state_probs, self.state_kernel
        probs = pi.copy()
        idx = [(i,) for i in range(k)]
        for _ in range(n_words - 1):
            probs = (probs[:, None] * P[[t[-1] for t in idx], :]).ravel()
            idx = [t + (j,) for t in idx for j in range(k)]
        out: Dict[str, float] = {}
        for t, p in zip(idx, probs):
            if p > 0:
                key = sentence_key(self.states[i] for i in t)
                out[key] = out.get(key, 0.0) + float(p)
        return dict(sorted(out.items()))

    def sample(self, n: int, rng: np.random.Generator) -> Sentence:
        states = self.states
        P = self.state_kernel
        cdfs = [np.cumsum(row).tolist() for row in P]
        u = rng.random(n).tolist()
        i = int(rng.choice(len(states), p=self.state_probs))
        out: List[str] = [states[i]]
        for t in range(1, n):
            cdf = cdfs[i]
            i = min(bisect.bisect_right(cdf, u[t] * cdf[-1]), len(cdf) - 1)
            out.append(states[i])
        return tuple(out)

    @abstractmethod
    def to_json(self) -> dict: ...


@dataclass(frozen=True, eq=False)
class IIDLaw(WordProcessLaw):
    alphabet: Alphabet
    words: Tuple[str, ...]
    probs: np.ndarray
    variant: str = "iid"

    def __post_init__(self) -> None:
        words = tuple(self.alphabet.validate_word(w) for w in self.words)
        if len(set(words)) != len(words):
            raise InputError("iid law: palabras repetidas")
        p = _normalized(self.probs, "iid law")
        if p.size != len(words):
            raise InputError("iid law: palabras y probabilidades de distinto largo")
        keep = p > 0
        object.__setattr__(self, "words", tuple(w for w, k in zip(words, keep) if k))
        object.__setattr__(self, "probs", p[keep])

    @classmethod
    def from_mapping(cls, alphabet: Alphabet | str, mapping: Mapping[str, float]) -> "IIDLaw":
        alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        words = tuple(mapping)
        return cls(alphabet, words, np.array([mapping[w] for w in words], dtype=float))

    @property
    def states(self) -> Tuple[str, ...]:
        return self.words

    @property
    def state_probs(self) -> np.ndarray:
        return self.probs

    @property
    def state_kernel(self) -> np.ndarray:
        return np.tile(self.probs, (len(self.words), 1))

    def sample(self, n: int, rng: np.random.Generator) -> Sentence:
        idx = rng.choice(len(self.words), size=n, p=self.probs)
        return tuple(self.words[i] for i in idx)

    def to_json(self) -> dict:
        return {"variant": "iid", "alphabet": self.alphabet.symbols,
                "words": list(self.words), "probs": self.probs.tolist()}


def stationary_row(P: np.ndarray) -> np.ndarray:
    """
    Fila estacionaria por iteración de potencias densa sobre la cadena
    perezosa (I+P)/2, que tiene la misma π y no sufre de periodicidad.
    """
    n = P.shape[0]
    lazy = 0.5 * (np.eye(n) + P)
    pi = np.full(n, 1.0 / n)
    for _ in range(200_000):
        nuevo = pi @ lazy
        nuevo /= nuevo.sum()
        if np.max(np.abs(nuevo - pi)) < POWER_ITER_TOL:
            pi = nuevo
            break
        pi = nuevo
    else:
        logger.warning("⚠ iteración de potencias sin converger a %g", POWER_ITER_TOL)
    return pi


@dataclass(frozen=True, eq=False)
class MarkovLaw(WordProcessLaw):
    alphabet: Alphabet
    words: Tuple[str, ...]
    transition: np.ndarray
    stationary: np.ndarray | None = None
    variant: str = "markov"

    def __post_init__(self) -> None:
        words = tuple(self.alphabet.validate_word(w) for w in self.words)
        if len(set(words)) != len(words):
            raise InputError("markov law: palabras repetidas")
        if len(words) > MAX_MARKOV_WORDS:
            raise BudgetError(f"markov law: {len(words)} palabras > tope {MAX_MARKOV_WORDS}")
        P = np.asarray(self.transition, dtype=float)
        if P.shape != (len(words), len(words)):
            raise InputError(f"markov law: la matriz debe ser {len(words)}×{len(words)}")
        if np.any(P < 0):
            raise InputError("markov law: transiciones negativas")
        filas = P.sum(axis=1)
        malas = np.flatnonzero(np.abs(filas - 1.0) > MASS_TOL)
        if malas.size:
            raise InputError(f"markov law: la fila de '{words[malas[0]]}' suma {filas[malas[0]]!r}")
        P = P / filas[:, None]
        n_comp, _ = connected_components(P > 0, directed=True, connection="strong")
        if n_comp != 1:
            raise InputError("markov law: la cadena no es irreducible")
        pi = stationary_row(P)
        if np.max(np.abs(pi @ P - pi)) > STATIONARY_TOL:
            raise InputError("markov law: πP ≠ π dentro de la tolerancia")
        object.__setattr__(self, "words", words)
        object.__setattr__(self, "transition", P)
        object.__setattr__(self, "stationary", pi)

    @property
    def states(self) -> Tuple[str, ...]:
        return self.words

    @property
    def state_probs(self) -> np.ndarray:
        return self.stationary

    @property
    def state_kernel(self) -> np.ndarray:
        return self.transition

    def to_json(self) -> dict:
        return {"variant": "markov", "alphabet": self.alphabet.symbols,
                "words": list(self.words), "transition": self.transition.tolist()}


@dataclass(frozen=True, eq=False)
class TruncatedMarkovLaw(WordProcessLaw):
    """[Q]_tr para Q de Markov cuando el agrupamiento no es markoviano."""

    base: MarkovLaw
    tr: int
    variant: str = "markov-image"

    def __post_init__(self) -> None:
        if self.tr < 1:
            raise InputError("tr: debe ser ≥ 1")

    @property
    def alphabet(self) -> Alphabet:  # type: ignore[override]
        return self.base.alphabet

    @property
    def states(self) -> Tuple[str, ...]:
        return tuple(truncate(w, self.tr) for w in self.base.words)

    @property
    def state_probs(self) -> np.ndarray:
        return self.base.stationary

    @property
    def state_kernel(self) -> np.ndarray:
        return self.base.transition

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(sorted(set(self.states)))

    def to_json(self) -> dict:
        return {"variant": "markov-image", "tr": self.tr, "base": self.base.to_json()}


# ─────────────────────────────────────────────────────────────────────────────
# m_Q y truncación
# ─────────────────────────────────────────────────────────────────────────────
def mean_length(Q: WordProcessLaw) -> float:
    return float(np.dot(Q.state_probs, Q.lengths))


def _classes(words: Sequence[str], tr: int) -> Tuple[List[str], np.ndarray]:
    etiquetas = [truncate(w, tr) for w in words]
    clases = sorted(set(etiquetas))
    pos = {c: i for i, c in enumerate(clases)}
    return clases, np.array([pos[e] for e in etiquetas], dtype=np.int64)


def truncate_process(Q: WordProcessLaw, tr: int) -> WordProcessLaw:
    """
    [Q]_tr. IID → IID con átomos fusionados; MARKOV → MARKOV agrupado si el
    agrupamiento es fuertemente agrupable, si no `LumpingError`.
    """
    if tr < 1:
        raise InputError(f"tr: debe ser ≥ 1 (recibido {tr})")
    if tr >= Q.max_length:
        return Q
    if isinstance(Q, IIDLaw):
        acc: Dict[str, float] = {}
        for w, p in zip(Q.words, Q.probs):
            t = truncate(w, tr)
            acc[t] = acc.get(t, 0.0) + float(p)
        return IIDLaw.from_mapping(Q.alphabet, acc)
    if isinstance(Q, TruncatedMarkovLaw):
        return TruncatedMarkovLaw(Q.base, min(tr, Q.tr))
    if isinstance(Q, MarkovLaw):
        clases, lab = _classes(Q.words, tr)
        k = len(clases)
        agg = np.zeros((len(Q.words), k))
        for j, c in enumerate(lab):
            agg[:, c] += Q.transition[:, j]
        P = np.zeros((k, k))
        for c in range(k):
            miembros = np.flatnonzero(lab == c)
            filas = agg[miembros]
            if np.max(np.abs(filas - filas[0])) > MASS_TOL:
                nombres = [Q.words[i] for i in miembros]
                raise LumpingError(
                    f"truncate_process: las palabras {nombres} se fusionan en '{clases[c]}' "
                    f"pero tienen filas agregadas distintas; [Q]_{tr} no es de Markov"
                )
            P[c] = filas[0]
        return MarkovLaw(Q.alphabet, tuple(clases), P)
    raise InputError(f"truncate_process: variante desconocida {type(Q).__name__}")


def truncated_image(Q: WordProcessLaw, tr: int) -> WordProcessLaw:
    """[Q]_tr exacta: ley agrupada si existe, si no la ley imagen sin agrupar."""
    try:
        return truncate_process(Q, tr)
    except LumpingError as e:
        logger.debug("ley imagen sin agrupar: %s", e)
        assert isinstance(Q, MarkovLaw)
        return TruncatedMarkovLaw(Q, tr)


def lumped_sampler(Q: MarkovLaw, tr: int) -> MarkovLaw:
    """
    Cadena agrupada con filas promediadas por π. Solo sirve para muestrear:
    sus marginales de N palabras coinciden con las de [Q]_tr únicamente para N = 1.
    """
    clases, lab = _classes(Q.words, tr)
    k = len(clases)
    P = np.zeros((k, k))
    masa = np.zeros(k)
    for i, c in enumerate(lab):
        for j, d in enumerate(lab):
            P[c, d] += Q.stationary[i] * Q.transition[i, j]
        masa[c] += Q.stationary[i]
    return MarkovLaw(Q.alphabet, tuple(clases), P / masa[:, None])


# ─────────────────────────────────────────────────────────────────────────────
# q_{ρ,ν}
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True, eq=False)
class ReferenceLaw:
    rho: RenewalLaw
    nu: LetterLaw

    @property
    def alphabet(self) -> Alphabet:
        return self.nu.alphabet

    def atom(self, w: str) -> float:
        return self.rho.pmf(len(w)) * math.exp(self.nu.log_prob_word(w))

    def log_atom(self, w: str) -> float | None:
        lr = self.rho.log_pmf(len(w))
        if lr is None:
            return None
        return lr + self.nu.log_prob_word(w)

    def words(self, max_len: int | None = None) -> List[str]:
        cap = self.rho.support_cap if max_len is None else min(max_len, self.rho.support_cap)
        total = sum(len(self.alphabet) ** int(n) for n in self.rho.atoms if n <= cap)
        if total > PATTERN_BUDGET:
            raise BudgetError(f"reference law: {total} palabras > presupuesto {PATTERN_BUDGET}")
        out: List[str] = []
        for n in self.rho.atoms:
            if n > cap:
                break
            out.extend("".join(t) for t in itertools.product(self.alphabet.symbols, repeat=int(n)))
        return out

    def enumerate(self) -> Dict[str, float]:
        return {w: self.atom(w) for w in self.words()}

    def as_process(self) -> IIDLaw:
        """q_{ρ,ν}^{⊗ℕ} como ley IID explícita."""
        tabla = self.enumerate()
        return IIDLaw(self.alphabet, tuple(tabla), np.array(list(tabla.values())))


def reference_law(rho: RenewalLaw, nu: LetterLaw) -> ReferenceLaw:
    return ReferenceLaw(rho, nu)


# ─────────────────────────────────────────────────────────────────────────────
# Muestreo de la secuencia de letras y de los cortes
# ─────────────────────────────────────────────────────────────────────────────
def sample_words(Q: WordProcessLaw, n: int, rng: np.random.Generator) -> Sentence:
    """N palabras consecutivas de Q (arranque estacionario)."""
    if n < 1:
        raise InputError("n: debe ser ≥ 1")
    return Q.sample(n, rng)


def sample_path(nu: LetterLaw, rho: RenewalLaw, n_letters: int | None, n_words: int,
                seed: int) -> Tuple[str, CutPoints, Sentence]:
    """
    X i.i.d. ν, incrementos i.i.d. ρ y la oración cortada en T_1..T_N.
    Si `n_letters` no alcanza para los N saltos se extiende X hasta T_N;
    con `n_letters=None` X mide exactamente T_N.
    """
    if n_words < 1:
        raise InputError("n_words: debe ser ≥ 1")
    tau = rho.sample(n_words, stream(seed, 0))
    T = np.cumsum(tau)
    largo = int(T[-1]) if n_letters is None else int(max(n_letters, T[-1]))
    if n_letters is not None and largo > n_letters:
        logger.warning("⚠ sample_path: X extendida de %d a %d letras para alojar %d saltos",
                       n_letters, largo, n_words)
    idx = nu.sample(largo, stream(seed, 1))
    letras = np.array(list(nu.alphabet.symbols))
    x = "".join(letras[idx].tolist())
    j = CutPoints(tuple(T.tolist()))
    return x, j, cut(x, j)
