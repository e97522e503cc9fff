"""
Motor de Ψ_Q
============

Ψ_Q es la ley de la concatenación de palabras de Q con el origen
aleatorizado (palabra sesgada por largo, fase uniforme). Sus marginales de L
letras se obtienen exactamente con un DP hacia adelante sobre una cadena
oculta cuya emisión es función del estado.

Dos cadenas ocultas:

* `hidden_chain`  – estados (palabra, fase); la que se usa para las marginales.
* `prefix_chain`  – estados (contexto, prefijo ya emitido de la palabra actual);
                    emite lo mismo pero con estados más gruesos, de modo que la
                    cota inferior condicionada de H(Ψ_Q) es más ajustada.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Hashable, List, Tuple

import numpy as np

from quenched_ldp.config import DP_BUDGET, RNU_TOL, TABLE_BUDGET
from quenched_ldp.core.laws import LetterLaw, WordProcessLaw
from quenched_ldp.core.tables import MarginalTable
from quenched_ldp.core.words import truncate
from quenched_ldp.errors import BudgetError, InputError
from quenched_ldp.utils.funciones import xlogx

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HiddenChain:
    states: Tuple[Hashable, ...]
    initial: np.ndarray
    transition: np.ndarray
    emissions: np.ndarray
    n_symbols: int

    def __len__(self) -> int:
        return len(self.states)

    def masks(self) -> np.ndarray:
        """masks[c, s] = 1 si el estado s emite el símbolo c."""
        out = np.zeros((self.n_symbols, len(self.states)))
        out[self.emissions, np.arange(len(self.states))] = 1.0
        return out

    def stationarity_error(self) -> float:
        return float(np.max(np.abs(self.initial @ self.transition - self.initial)))


# ─────────────────────────────────────────────────────────────────────────────
# Construcción de las cadenas
# ─────────────────────────────────────────────────────────────────────────────
def hidden_chain(Q: WordProcessLaw, tr: int | None = None) -> HiddenChain:
    """
    Cadena (w, k) de Ψ_Q, o de Ψ_{[Q]_tr} si se da `tr` (ley imagen tomada
    sobre la cadena sin truncar).

    Args:
        Q: ley del proceso de palabras.
        tr: nivel de truncación opcional.

    Returns:
        HiddenChain con Σ_w |[w]_tr| estados y distribución inicial
        estacionaria probs(w)/m.
    """
    palabras = Q.states if tr is None else tuple(truncate(w, tr) for w in Q.states)
    probs, K = Q.state_probs, Q.state_kernel
    largos = np.array([len(w) for w in palabras])
    m = float(np.dot(probs, largos))
    estados: List[Tuple[int, int]] = [(i, k) for i, w in enumerate(palabras) for k in range(len(w))]
    pos = {s: n for n, s in enumerate(estados)}
    n = len(estados)
    if n * n > DP_BUDGET:
        raise BudgetError(f"hidden chain: {n}² = {n * n} entradas > presupuesto {DP_BUDGET}")

    T = np.zeros((n, n))
    inicial = np.zeros(n)
    emis = np.zeros(n, dtype=np.int64)
    inicios = np.array([pos[(j, 0)] for j in range(len(palabras))])
    for (i, k), s in pos.items():
        inicial[s] = probs[i] / m
        emis[s] = Q.alphabet.index(palabras[i][k])
        if k + 1 < len(palabras[i]):
            T[s, pos[(i, k + 1)]] = 1.0
        else:
            T[s, inicios] += K[i]
    chain = HiddenChain(tuple(estados), inicial, T, emis, len(Q.alphabet))
    logger.debug("cadena oculta: %d estados, error de estacionariedad %.2e", n, chain.stationarity_error())
    return chain


def prefix_chain(Q: WordProcessLaw, tr: int | None = None) -> HiddenChain:
    """
    Cadena de prefijos: estado = (contexto, prefijo u emitido de la palabra
    actual). El contexto es el estado-palabra anterior (o único si las filas
    del núcleo coinciden, caso IID).
    """
    palabras = Q.states if tr is None else tuple(truncate(w, tr) for w in Q.states)
    probs, K = Q.state_probs, Q.state_kernel
    m = float(np.dot(probs, [len(w) for w in palabras]))
    iid = bool(np.all(np.abs(K - K[0]) <= 1e-15))
    contextos = [K[0]] if iid else [K[i] for i in range(len(palabras))]
    peso_ctx = np.ones(1) if iid else probs

    # masas de prefijo y de fin de palabra por contexto
    pref: List[Dict[str, float]] = []
    fin: List[Dict[str, float]] = []
    for fila in contextos:
        M: Dict[str, float] = {}
        E: Dict[str, float] = {}
        for j, w in enumerate(palabras):
            if fila[j] <= 0:
                continue
            for k in range(1, len(w) + 1):
                M[w[:k]] = M.get(w[:k], 0.0) + float(fila[j])
            E[w] = E.get(w, 0.0) + float(fila[j])
        pref.append(M)
        fin.append(E)

    estados = [(c, u) for c, M in enumerate(pref) for u in sorted(M)]
    pos = {s: n for n, s in enumerate(estados)}
    n = len(estados)
    if n * n > DP_BUDGET:
        raise BudgetError(f"prefix chain: {n}² = {n * n} entradas > presupuesto {DP_BUDGET}")

    T = np.zeros((n, n))
    inicial = np.zeros(n)
    emis = np.zeros(n, dtype=np.int64)
    for (c, u), s in pos.items():
        M, E = pref[c], fin[c]
        inicial[s] = peso_ctx[c] * M[u] / m
        emis[s] = Q.alphabet.index(u[-1])
        for letra in Q.alphabet.symbols:
            v = u + letra
            if v in M:
                T[s, pos[(c, v)]] += M[v] / M[u]
        if u in E:
            # fin de palabra: próximo estado-palabra j con palabras[j] == u
            for j, w in enumerate(palabras):
                if w != u or contextos[c][j] <= 0:
                    continue
                pj = contextos[c][j] / M[u]
                c2 = 0 if iid else j
                for v, mv in pref[c2].items():
                    if len(v) == 1:
                        T[s, pos[(c2, v)]] += pj * mv
    return HiddenChain(tuple(estados), inicial, T, emis, len(Q.alphabet))


def word_chain(Q: WordProcessLaw) -> Tuple[HiddenChain, Tuple[str, ...]]:
    """Cadena a nivel de palabras: estados subyacentes, emisión = palabra emitida."""
    simbolos = tuple(sorted(set(Q.states)))
    idx = {w: i for i, w in enumerate(simbolos)}
    emis = np.array([idx[w] for w in Q.states], dtype=np.int64)
    chain = HiddenChain(tuple(range(len(Q.states))), Q.state_probs.copy(), Q.state_kernel.copy(),
                        emis, len(simbolos))
    return chain, simbolos


# ─────────────────────────────────────────────────────────────────────────────
# DP hacia adelante
# ─────────────────────────────────────────────────────────────────────────────
def _step(alpha: np.ndarray, codes: np.ndarray, T: np.ndarray, masks: np.ndarray
          ) -> Tuple[np.ndarray, np.ndarray]:
    movido = alpha @ T
    bloques, claves = [], []
    base = masks.shape[0]
    for c in range(base):
        sub = movido * masks[c]
        vivo = sub.sum(axis=1) > 0
        if np.any(vivo):
            bloques.append(sub[vivo])
            claves.append(codes[vivo] * base + c)
    alpha = np.concatenate(bloques)
    codes = np.concatenate(claves)
    orden = np.argsort(codes, kind="stable")
    return alpha[orden], codes[orden]


def _check_budget(rows: int, chain: HiddenChain, quien: str) -> None:
    if rows * len(chain) > DP_BUDGET:
        raise BudgetError(
            f"{quien}: {rows} filas × {len(chain)} estados = {rows * len(chain)} > presupuesto {DP_BUDGET}"
        )


def forward_tables(chain: HiddenChain, depth: int):
    """
    Genera (d, codes, probs) para d = 1..depth, con `codes` el patrón de d
    símbolos (primer símbolo más significativo) y `probs` su masa; solo filas
    de masa positiva.
    """
    masks = chain.masks()
    alpha = chain.initial[None, :] * masks
    vivo = alpha.sum(axis=1) > 0
    alpha, codes = alpha[vivo], np.flatnonzero(vivo).astype(np.int64)
    yield 1, codes, alpha.sum(axis=1)
    for d in range(2, depth + 1):
        _check_budget(alpha.shape[0] * chain.n_symbols, chain, "forward DP")
        alpha, codes = _step(alpha, codes, chain.transition, masks)
        yield d, codes, alpha.sum(axis=1)


def _entropy(p: np.ndarray) -> float:
    return float(-xlogx(p).sum())


def block_entropies(chain: HiddenChain, depth: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Entropías de bloque de una función de una cadena de Markov.

    Returns:
        (H, G) con H[d-1] = H(Y_1..Y_d) y G[d-1] = H(S_1, Y_1..Y_d), d = 1..depth.
    """
    H = np.array([_entropy(p) for _, _, p in forward_tables(chain, depth)])

    masks = chain.masks()
    positivos = np.flatnonzero(chain.initial > 0)
    alpha = np.zeros((positivos.size, len(chain)))
    alpha[np.arange(positivos.size), positivos] = chain.initial[positivos]
    codes = np.arange(positivos.size, dtype=np.int64)
    G = [_entropy(alpha.sum(axis=1))]
    for _ in range(2, depth + 1):
        _check_budget(alpha.shape[0] * chain.n_symbols, chain, "forward DP condicionado")
        alpha, codes = _step(alpha, codes, chain.transition, masks)
        G.append(_entropy(alpha.sum(axis=1)))
    return H, np.array(G)


# ─────────────────────────────────────────────────────────────────────────────
# Marginales de Ψ_Q y test de R_ν
# ─────────────────────────────────────────────────────────────────────────────
def _table_guard(Q: WordProcessLaw, L: int) -> None:
    if L < 1:
        raise InputError(f"L: debe ser ≥ 1 (recibido {L})")
    tam = len(Q.alphabet) ** L
    if tam > TABLE_BUDGET:
        raise BudgetError(f"psi_marginal: |E|^L = {len(Q.alphabet)}^{L} = {tam} > presupuesto {TABLE_BUDGET}")


def psi_marginals(Q: WordProcessLaw, L_max: int, tr: int | None = None) -> List[MarginalTable]:
    """π_L Ψ_Q para L = 1..L_max en una sola pasada del DP."""
    _table_guard(Q, L_max)
    chain = hidden_chain(Q, tr)
    simbolos = Q.alphabet.symbols
    out = []
    for d, codes, p in forward_tables(chain, L_max):
        densa = np.zeros(len(simbolos) ** d)
        densa[codes] = p
        out.append(MarginalTable(d, densa, symbols=simbolos))
    return out


def psi_marginal(Q: WordProcessLaw, L: int, tr: int | None = None) -> MarginalTable:
    return psi_marginals(Q, L, tr)[-1]


@dataclass(frozen=True)
class RNuResult:
    member: bool
    max_deviation: float
    depth_reached: int

    def __bool__(self) -> bool:
        return self.member

    def to_json(self) -> dict:
        return {"member": self.member, "max_deviation": self.max_deviation,
                "depth_reached": self.depth_reached}


def r_nu_test(Q: WordProcessLaw, nu: LetterLaw, L_max: int, tol: float = RNU_TOL,
              tr: int | None = None) -> RNuResult:
    """¿Ψ_Q = ν^{⊗ℕ}? Compara π_L Ψ_Q con ν^{⊗L} para L ≤ L_max."""
    if Q.alphabet != nu.alphabet:
        raise InputError("r_nu_test: Q y ν tienen alfabetos distintos")
    peor = 0.0
    for tabla in psi_marginals(Q, L_max, tr):
        peor = max(peor, float(np.max(np.abs(tabla.probs - nu.product_table(tabla.depth)))))
    return RNuResult(peor <= tol, peor, L_max)

