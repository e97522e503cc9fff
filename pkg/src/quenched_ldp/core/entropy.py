"""
Motor de entropías
==================

Entropía relativa finita, tasas de entropía exactas de las variantes de Q,
entropía relativa específica respecto de q_{ρ,ν}^{⊗ℕ}, el intervalo de
H(Ψ_Q | ν^{⊗ℕ}), la entropía condicional H_{τ|K} obtenida por identidad y el
residuo de la identidad que liga todo.

Todo en nats. Los +∞ vuelven como `Divergent`.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import List, Mapping, Sequence

import numpy as np

from quenched_ldp.config import TABLE_BUDGET, WORD_DEPTH
from quenched_ldp.core.intervals import Divergent, Interval, first_divergent, to_jsonable
from quenched_ldp.core.laws import (
    IIDLaw,
    LetterLaw,
    MarkovLaw,
    ReferenceLaw,
    RenewalLaw,
    TruncatedMarkovLaw,
    WordProcessLaw,
    mean_length,
)
from quenched_ldp.core.psi import block_entropies, prefix_chain, word_chain
from quenched_ldp.core.words import truncate
from quenched_ldp.errors import BudgetError, InputError
from quenched_ldp.utils.funciones import shannon, xlogx

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EntropyBracket:
    lower: float
    upper: float
    depth_used: int

    def __post_init__(self) -> None:
        if self.lower > self.upper + 1e-10:
            raise InputError(f"bracket invertido a profundidad {self.depth_used}: [{self.lower}, {self.upper}]")

    @property
    def width(self) -> float:
        return max(self.upper - self.lower, 0.0)

    def as_interval(self) -> Interval:
        return Interval(self.lower, self.upper)

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lower - tol <= x <= self.upper + tol

    def to_json(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "depth_used": self.depth_used}


# ─────────────────────────────────────────────────────────────────────────────
# Entropías finitas
# ─────────────────────────────────────────────────────────────────────────────
def rel_entropy(mu: Mapping[str, float] | Sequence[float],
                lam: Mapping[str, float] | Sequence[float]) -> "float | Divergent":
    """
    h(μ|λ) = Σ μ log(μ/λ).

    Acepta mapas (átomo → masa) o vectores alineados. Si μ no es absolutamente
    continua respecto de λ devuelve `Divergent` nombrando el átomo.
    """
    if isinstance(mu, Mapping):
        lam_map = dict(lam) if isinstance(lam, Mapping) else None
        if lam_map is None:
            raise InputError("rel_entropy: μ y λ deben ser del mismo tipo")
        total = 0.0
        for k in sorted(mu):
            p = float(mu[k])
            if p <= 0:
                continue
            r = float(lam_map.get(k, 0.0))
            if r <= 0:
                return Divergent(f"μ({k}) = {p:.6g} > 0 pero λ({k}) = 0")
            total += p * math.log(p / r)
        return total
    p = np.asarray(mu, dtype=float)
    r = np.asarray(lam, dtype=float)
    if p.shape != r.shape:
        raise InputError("rel_entropy: vectores de distinto largo")
    malos = np.flatnonzero((p > 0) & (r <= 0))
    if malos.size:
        i = int(malos[0])
        return Divergent(f"μ[{i}] = {p[i]:.6g} > 0 pero λ[{i}] = 0")
    pos = p > 0
    return float(np.sum(p[pos] * (np.log(p[pos]) - np.log(r[pos]))))


def entropy_rate(Q: WordProcessLaw) -> float:
    """H(Q) en nats por palabra, forma cerrada para IID y Markov."""
    if isinstance(Q, IIDLaw):
        return shannon(Q.probs)
    if isinstance(Q, MarkovLaw):
        return float(-np.dot(Q.stationary, xlogx(Q.transition).sum(axis=1)))
    raise InputError("entropy_rate: ley imagen sin forma cerrada, usar entropy_rate_interval")


def entropy_rate_interval(Q: WordProcessLaw, depth: int = WORD_DEPTH) -> Interval:
    """
    H(Q) como intervalo. Exacto (degenerado) para IID y Markov; para leyes
    imagen [Q]_tr no agrupables, sándwich de función de cadena de Markov a
    nivel de palabras con `depth` palabras de contexto.
    """
    if not isinstance(Q, TruncatedMarkovLaw):
        return Interval.point(entropy_rate(Q))
    chain, _ = word_chain(Q)
    H, G = block_entropies(chain, depth + 1)
    lo = G[depth] - G[depth - 1]
    hi = H[depth] - H[depth - 1]
    return Interval(max(lo, 0.0), max(hi, lo))


def log_rho_mean(Q: WordProcessLaw, rho: RenewalLaw) -> "float | Divergent":
    """E_Q[log ρ(τ_1)]."""
    total = 0.0
    for w, p in zip(Q.states, Q.state_probs):
        if p <= 0:
            continue
        lr = rho.log_pmf(len(w))
        if lr is None:
            return Divergent(f"ρ({len(w)}) = 0 para la palabra '{w}' del soporte de Q")
        total += float(p) * lr
    return total


def log_nu_mean(Q: WordProcessLaw, nu: LetterLaw, tr: int | None = None) -> "float | Divergent":
    """E_{Ψ_Q}[log ν(X_1)] = (1/m_Q) Σ_w Q(w) Σ_k log ν(w_k)."""
    palabras = Q.states if tr is None else tuple(truncate(w, tr) for w in Q.states)
    m = float(np.dot(Q.state_probs, [len(w) for w in palabras]))
    total = 0.0
    for w, p in zip(palabras, Q.state_probs):
        if p <= 0:
            continue
        for c in w:
            pc = nu.prob(c)
            if pc <= 0:
                return Divergent(f"ν({c}) = 0 para una letra de Ψ_Q")
            total += float(p) * math.log(pc)
    return total / m


def _cross_term(Q: WordProcessLaw, ref: ReferenceLaw) -> "float | Divergent":
    """E_Q[log q_{ρ,ν}(Y_1)]."""
    total = 0.0
    for w, p in zip(Q.states, Q.state_probs):
        if p <= 0:
            continue
        la = ref.log_atom(w)
        if la is None:
            return Divergent(f"q_ρν('{w}') = 0: largo {len(w)} fuera del soporte de ρ")
        total += float(p) * la
    return total


def spec_rel_entropy(Q: WordProcessLaw, ref: ReferenceLaw) -> "float | Interval | Divergent":
    """
    H(Q | q_{ρ,ν}^{⊗ℕ}) = −H(Q) − E_Q[log q_{ρ,ν}(Y_1)].

    Float para IID/Markov, intervalo para leyes imagen sin forma cerrada.
    """
    if Q.alphabet != ref.alphabet:
        raise InputError("spec_rel_entropy: Q y ν tienen alfabetos distintos")
    cross = _cross_term(Q, ref)
    if isinstance(cross, Divergent):
        return cross
    if isinstance(Q, TruncatedMarkovLaw):
        hq = entropy_rate_interval(Q)
        return Interval(-hq.upper - cross, -hq.lower - cross)
    return -entropy_rate(Q) - cross


def block_rel_entropy(Q: WordProcessLaw, ref: ReferenceLaw, n_words: int) -> "float | Divergent":
    """(1/N)·h(Q_N | q_{ρ,ν}^{⊗N}) por enumeración exacta."""
    total = 0.0
    for clave, p in Q.block_law(n_words).items():
        lq = 0.0
        for w in clave.split(","):
            la = ref.log_atom(w)
            if la is None:
                return Divergent(f"q_ρν('{w}') = 0")
            lq += la
        total += p * (math.log(p) - lq)
    return total / n_words


# ─────────────────────────────────────────────────────────────────────────────
# H(Ψ_Q) y H(Ψ_Q | ν^{⊗ℕ})
# ─────────────────────────────────────────────────────────────────────────────
def psi_entropy_brackets(Q: WordProcessLaw, L_max: int, tr: int | None = None) -> List[EntropyBracket]:
    """
    Intervalos de H(Ψ_Q) para L = 1..L_max en una pasada:
    [H(X_{L+1} | X_1..X_L, S_1), H(X_1..X_L)/L].
    """
    if L_max < 1:
        raise InputError(f"L: debe ser ≥ 1 (recibido {L_max})")
    if len(Q.alphabet) == 1:
        return [EntropyBracket(0.0, 0.0, L) for L in range(1, L_max + 1)]
    tam = len(Q.alphabet) ** (L_max + 1)
    if tam > TABLE_BUDGET:
        raise BudgetError(
            f"psi bracket: |E|^(L+1) = {len(Q.alphabet)}^{L_max + 1} = {tam} > presupuesto {TABLE_BUDGET}"
        )
    H, G = block_entropies(prefix_chain(Q, tr), L_max + 1)
    out = []
    for L in range(1, L_max + 1):
        hi = H[L - 1] / L
        lo = min(max(G[L] - G[L - 1], 0.0), hi)
        out.append(EntropyBracket(lo, hi, L))
    return out


def psi_entropy_bracket(Q: WordProcessLaw, L: int, tr: int | None = None) -> EntropyBracket:
    return psi_entropy_brackets(Q, L, tr)[-1]


def _rel_from_entropy(b: EntropyBracket, e_nu: float) -> EntropyBracket:
    # H(Ψ|ν) = −H(Ψ) − e_ν, con e_ν = E_Ψ[log ν(X_1)]
    lo = max(-b.upper - e_nu, 0.0)
    hi = max(-b.lower - e_nu, lo)
    return EntropyBracket(lo, hi, b.depth_used)


def psi_rel_entropy_brackets(Q: WordProcessLaw, nu: LetterLaw, L_max: int,
                             tr: int | None = None) -> "List[EntropyBracket] | Divergent":
    e_nu = log_nu_mean(Q, nu, tr)
    if isinstance(e_nu, Divergent):
        return e_nu
    return [_rel_from_entropy(b, e_nu) for b in psi_entropy_brackets(Q, L_max, tr)]


def psi_rel_entropy_bracket(Q: WordProcessLaw, nu: LetterLaw, L: int,
                            tr: int | None = None) -> "EntropyBracket | Divergent":
    """
    Intervalo de H(Ψ_Q | ν^{⊗ℕ}) a profundidad L.

    Args:
        Q: ley del proceso de palabras.
        nu: ley de letras de referencia.
        L: profundidad; se usan marginales de L y L+1 letras.
        tr: truncación opcional (Ψ de la ley imagen).

    Returns:
        lower = h(π_L Ψ_Q | ν^{⊗L})/L y upper = −(cota inferior de H(Ψ_Q)) − E[log ν(X_1)].
    """
    res = psi_rel_entropy_brackets(Q, nu, L, tr)
    return res if isinstance(res, Divergent) else res[-1]


def h_tau_given_k(Q: WordProcessLaw, psi_bracket: EntropyBracket) -> Interval:
    """H_{τ|K}(Q) = H(Q) − m_Q·H(Ψ_Q), recortado en 0."""
    hq = entropy_rate_interval(Q)
    m = mean_length(Q)
    lo = max(hq.lower - m * psi_bracket.upper, 0.0)
    hi = max(hq.upper - m * psi_bracket.lower, 0.0)
    return Interval(lo, max(hi, lo))


def identity_residual(Q: WordProcessLaw, ref: ReferenceLaw, L: int) -> "Interval | Divergent":
    """
    H(Q|q^{⊗ℕ}) − (m_Q·H(Ψ_Q|ν^{⊗ℕ}) − H_{τ|K}(Q) − E_Q[log ρ(τ_1)]).

    H(Ψ_Q) entra en los tres términos; se evalúa en los extremos de su
    intervalo (y de H(Q) si es una ley imagen) y se toma la envolvente.
    """
    cross = _cross_term(Q, ref)
    e_rho = log_rho_mean(Q, ref.rho)
    e_nu = log_nu_mean(Q, ref.nu)
    div = first_divergent(cross, e_rho, e_nu)
    if div is not None:
        return div
    m = mean_length(Q)
    b = psi_entropy_bracket(Q, L)
    hq = entropy_rate_interval(Q)
    valores = []
    for hQ in {hq.lower, hq.upper}:
        h_rel = -hQ - cross
        for h in {b.lower, b.upper}:
            psi_rel = -h - e_nu
            htk = max(hQ - m * h, 0.0)
            valores.append(h_rel - (m * psi_rel - htk - e_rho))
    return Interval(min(valores), max(valores))


# ─────────────────────────────────────────────────────────────────────────────
# Reporte
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class EntropyReport:
    H_Q: "float | Interval"
    H_rel: "float | Interval | Divergent"
    m_Q: float
    psi_bracket: "EntropyBracket | Divergent"
    psi_entropy: EntropyBracket
    H_tau_given_K: Interval
    E_log_rho: "float | Divergent"
    E_log_nu: "float | Divergent"
    residual: "Interval | Divergent"
    depth: int

    def to_json(self) -> dict:
        return {k: to_jsonable(getattr(self, k)) for k in self.__dataclass_fields__}


def entropy_report(Q: WordProcessLaw, ref: ReferenceLaw, L: int) -> EntropyReport:
    hq = entropy_rate_interval(Q)
    b = psi_entropy_bracket(Q, L)
    rel = psi_rel_entropy_bracket(Q, ref.nu, L)
    logger.debug("reporte de entropías a profundidad %d: H(Ψ) ∈ [%.6g, %.6g]", L, b.lower, b.upper)
    return EntropyReport(
        H_Q=hq.lower if hq.width == 0 else hq,
        H_rel=spec_rel_entropy(Q, ref),
        m_Q=mean_length(Q),
        psi_bracket=rel,
        psi_entropy=b,
        H_tau_given_K=h_tau_given_k(Q, b),
        E_log_rho=log_rho_mean(Q, ref.rho),
        E_log_nu=log_nu_mean(Q, ref.nu),
        residual=identity_residual(Q, ref, L),
        depth=L,
    )
