"""
Funciones de tasa
=================

* I^ann(Q)  = H(Q | q_{ρ,ν}^{⊗ℕ})
* I^fin(Q)  = H(Q | q_{ρ,ν}^{⊗ℕ}) + (α−1)·m_Q·H(Ψ_Q | ν^{⊗ℕ})   (intervalo)
* I^que     = límite de I^fin([Q]_tr); se expone como escalera en tr
* α = 1     → I^ann;  α = ∞ (cola exponencial) → I^ann en R_ν, +∞ fuera

Más la proyección de información sobre vecindades de la primera palabra y la
cota superior por contracción para la marginal de una palabra.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from quenched_ldp.core.entropy import EntropyBracket, psi_rel_entropy_bracket, rel_entropy, spec_rel_entropy
from quenched_ldp.core.intervals import Divergent, Interval, as_interval, first_divergent, to_jsonable
from quenched_ldp.core.laws import (
    IIDLaw,
    ReferenceLaw,
    TailBoundary,
    WordProcessLaw,
    mean_length,
    truncated_image,
)
from quenched_ldp.core.psi import RNuResult, r_nu_test
from quenched_ldp.errors import InputError
from quenched_ldp.utils.funciones import ordered_map

logger = logging.getLogger(__name__)

RateValue = "Interval | Divergent"

MAX_DOBLADOS = 200


# ─────────────────────────────────────────────────────────────────────────────
# Vecindades
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class Constraint:
    pattern: Tuple[str, ...]
    lower: float
    upper: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "pattern", tuple(self.pattern))
        if len(self.pattern) not in (1, 2):
            raise InputError(f"restricción {self.pattern}: solo se admiten patrones de 1 o 2 palabras")
        if not (0.0 <= self.lower < self.upper <= 1.0):
            raise InputError(
                f"restricción {self.pattern}: se requiere 0 ≤ a < b ≤ 1 (a={self.lower}, b={self.upper})"
            )

    @property
    def depth(self) -> int:
        return len(self.pattern)

    @property
    def key(self) -> str:
        return ",".join(self.pattern)

    def admits(self, count: int, n: int) -> bool:
        """Pertenencia cerrada de la frecuencia count/n a [a, b], sin redondeo."""
        return self.lower * n <= count <= self.upper * n

    def to_json(self) -> dict:
        return {"pattern": list(self.pattern), "lower": self.lower, "upper": self.upper}


@dataclass(frozen=True)
class Neighbourhood:
    constraints: Tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "constraints", tuple(self.constraints))

    @classmethod
    def from_json(cls, items: Sequence[Mapping]) -> "Neighbourhood":
        return cls(tuple(
            Constraint(tuple(it["pattern"]), float(it.get("lower", 0.0)), float(it.get("upper", 1.0)))
            for it in items
        ))

    @property
    def single_word(self) -> Tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.depth == 1)

    @property
    def pair(self) -> Tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.depth == 2)

    def to_json(self) -> list:
        return [c.to_json() for c in self.constraints]


# ─────────────────────────────────────────────────────────────────────────────
# Proyección de información (restricciones de una palabra)
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class IProjection:
    q: Dict[str, float]
    value: "float | Divergent"

    def to_json(self) -> dict:
        return {"q": self.q, "value": to_jsonable(self.value)}


def _box(nbhd: Neighbourhood) -> Dict[str, Tuple[float, float]]:
    if nbhd.pair:
        raise InputError("i_projection: solo restricciones sobre la primera palabra (L_u = 1)")
    caja: Dict[str, Tuple[float, float]] = {}
    for c in nbhd.single_word:
        a, b = caja.get(c.key, (0.0, 1.0))
        a, b = max(a, c.lower), min(b, c.upper)
        if a > b:
            raise InputError(f"i_projection: restricciones incompatibles sobre '{c.key}'")
        caja[c.key] = (a, b)
    return caja


def i_projection(ref_marginal: Mapping[str, float], nbhd: Neighbourhood) -> IProjection:
    """
    Minimiza h(q | ref) sujeto a q(ζ_u) ∈ [a_u, b_u].

    La solución de KKT es q = c·ref en los átomos libres y
    q = clip(c·ref, a_u, b_u) en los restringidos; c se halla con `brentq`
    para que la masa total sea 1.
    """
    ref = {k: float(v) for k, v in ref_marginal.items() if v > 0}
    if not ref:
        raise InputError("i_projection: la marginal de referencia no tiene masa")
    caja = _box(nbhd)

    suma_a = sum(a for a, _ in caja.values())
    if suma_a > 1.0 + 1e-12:
        raise InputError(f"i_projection: restricciones infactibles (Σ a_u = {suma_a:.6g} > 1)")
    libre = sum(p for k, p in ref.items() if k not in caja)
    # átomos fuera del soporte de ref solo pueden recibir masa 0
    for k, (a, _) in caja.items():
        if k not in ref and a > 0:
            return IProjection({}, Divergent(f"q({k}) ≥ {a} pero ref({k}) = 0"))
    cajas_vivas = {k: ab for k, ab in caja.items() if k in ref}
    techo = sum(b for _, b in cajas_vivas.values())
    if libre <= 0 and techo < 1.0 - 1e-12:
        raise InputError(f"i_projection: restricciones infactibles (Σ b_u = {techo:.6g} < 1)")

    def masa(c: float) -> float:
        total = c * libre
        for k, (a, b) in cajas_vivas.items():
            total += min(max(c * ref[k], a), b)
        return total - 1.0

    total_ref = sum(ref.values())
    if all(a - 1e-12 <= ref.get(k, 0.0) / total_ref <= b + 1e-12 for k, (a, b) in caja.items()):
        # ref ya está dentro de la vecindad
        q0 = {k: p / total_ref for k, p in sorted(ref.items())}
        return IProjection(q0, 0.0)

    if libre <= 0 and techo < 1.0 + 1e-12:
        # todas las cajas saturan en su techo
        c = max(b / ref[k] for k, (_, b) in cajas_vivas.items())
    elif masa(0.0) >= 0.0:
        c = 0.0
    else:
        hi = 1.0
        for _ in range(MAX_DOBLADOS):
            if masa(hi) >= 0.0:
                break
            hi *= 2.0
        else:
            raise InputError(f"i_projection: no se encontró la constante de normalización (c > {hi:.3g})")
        c = brentq(masa, 0.0, hi, xtol=1e-15, rtol=1e-15, maxiter=500)

    q: Dict[str, float] = {}
    for k, r in sorted(ref.items()):
        if k in cajas_vivas:
            a, b = cajas_vivas[k]
            q[k] = min(max(c * r, a), b)
        else:
            q[k] = c * r
    total = sum(q.values())
    q = {k: v / total for k, v in q.items()}
    return IProjection(q, rel_entropy(q, ref))


# ─────────────────────────────────────────────────────────────────────────────
# Tasas
# ─────────────────────────────────────────────────────────────────────────────
def ann_rate(Q: WordProcessLaw, ref: ReferenceLaw) -> "float | Interval | Divergent":
    return spec_rel_entropy(Q, ref)


def _check_alpha(alpha: float) -> float:
    if isinstance(alpha, TailBoundary) or not float(alpha) > 1.0:
        raise InputError(f"alpha: fin_rate requiere α real > 1 (recibido {alpha})")
    return float(alpha)


def fin_rate(Q: WordProcessLaw, ref: ReferenceLaw, alpha: float, L: int) -> RateValue:
    """H(Q|q^{⊗ℕ}) + (α−1)·m_Q·[intervalo de H(Ψ_Q|ν^{⊗ℕ}) a profundidad L]."""
    alpha = _check_alpha(alpha)
    h_rel = spec_rel_entropy(Q, ref)
    bracket = psi_rel_entropy_bracket(Q, ref.nu, L)
    div = first_divergent(h_rel, bracket)
    if div is not None:
        return div
    return as_interval(h_rel) + bracket.as_interval().scale((alpha - 1.0) * mean_length(Q))


def que_rate_ladder(Q: WordProcessLaw, ref: ReferenceLaw, alpha: float, tr_list: Sequence[int],
                    L: int, threads: int = 1) -> List[Tuple[int, RateValue]]:
    """I^fin([Q]_tr) para cada tr de la lista (creciente); orden de salida fijo."""
    trs = [int(t) for t in tr_list]
    if not trs or any(b <= a for a, b in zip(trs, trs[1:])) or trs[0] < 1:
        raise InputError("tr_list: se requiere una lista estrictamente creciente de enteros ≥ 1")

    def nivel(tr: int) -> Tuple[int, RateValue]:
        return tr, fin_rate(truncated_image(Q, tr), ref, alpha, L)

    return ordered_map(nivel, trs, threads)


def boundary_rate(Q: WordProcessLaw, ref: ReferenceLaw, mode: TailBoundary | str, L: int) -> RateValue:
    """α = 1 → I^ann; α = ∞ → I^ann si Ψ_Q = ν^{⊗ℕ}, +∞ si no."""
    mode = TailBoundary(mode)
    ann = ann_rate(Q, ref)
    if isinstance(ann, Divergent):
        return ann
    if mode is TailBoundary.ONE:
        return as_interval(ann)
    test = r_nu_test(Q, ref.nu, L)
    if not test.member:
        return Divergent(f"Ψ_Q ≠ ν^⊗ℕ (desvío máximo {test.max_deviation:.3g} hasta L={L})")
    return as_interval(ann)


def exp_tail_rate(Q: WordProcessLaw, ref: ReferenceLaw, L: int) -> RateValue:
    """Tasa templada para colas de renovación más livianas que cualquier potencia."""
    return boundary_rate(Q, ref, TailBoundary.INFINITY, L)


def quenched_rate(Q: WordProcessLaw, ref: ReferenceLaw, L: int) -> RateValue:
    """Despacha según el exponente de cola declarado por ρ."""
    alpha = ref.rho.alpha
    if isinstance(alpha, TailBoundary):
        return boundary_rate(Q, ref, alpha, L)
    return fin_rate(Q, ref, alpha, L)


@dataclass(frozen=True)
class ContractionBound:
    value: RateValue
    exact: bool
    r_nu: RNuResult

    def to_json(self) -> dict:
        return {"value": to_jsonable(self.value), "exact": self.exact, "r_nu": self.r_nu.to_json()}


def contraction_upper(q: Mapping[str, float], ref: ReferenceLaw, alpha: float, L: int) -> ContractionBound:
    """
    Cota superior de I^que_1(q) evaluando I^fin en q^{⊗ℕ}. Si Ψ_{q^⊗ℕ} = ν^{⊗ℕ}
    la cota es exacta e igual a h(q | q_{ρ,ν}).
    """
    Q = IIDLaw.from_mapping(ref.alphabet, q)
    test = r_nu_test(Q, ref.nu, L)
    if test.member:
        atomos = {w: ref.atom(w) for w in Q.words}
        val = rel_entropy(dict(zip(Q.words, Q.probs.tolist())), atomos)
        return ContractionBound(val if isinstance(val, Divergent) else Interval.point(val), True, test)
    return ContractionBound(fin_rate(Q, ref, alpha, L), False, test)


# ─────────────────────────────────────────────────────────────────────────────
# Reporte
# ─────────────────────────────────────────────────────────────────────────────
@dataclass(frozen=True)
class RateResult:
    annealed: "float | Interval | Divergent"
    quenched_bracket: RateValue
    alpha: "float | TailBoundary"
    H_rel: "float | Interval | Divergent"
    m_Q: float
    psi_bracket: "EntropyBracket | Divergent"
    depth: int
    ladder: List[Tuple[int, RateValue]] | None = field(default=None)

    def to_json(self) -> dict:
        alpha = self.alpha.value if isinstance(self.alpha, TailBoundary) else self.alpha
        return {
            "annealed": to_jsonable(self.annealed),
            "quenched_bracket": to_jsonable(self.quenched_bracket),
            "alpha": alpha,
            "components": {
                "H_rel": to_jsonable(self.H_rel),
                "m_Q": self.m_Q,
                "psi_bracket": to_jsonable(self.psi_bracket),
            },
            "depth": self.depth,
            "ladder": None if self.ladder is None
            else [{"tr": tr, "value": to_jsonable(v)} for tr, v in self.ladder],
        }


def rate_report(Q: WordProcessLaw, ref: ReferenceLaw, alpha: "float | TailBoundary | None", L: int,
                tr_list: Sequence[int] | None = None, threads: int = 1) -> RateResult:
    """Arma el RateResult; `alpha=None` toma el exponente declarado por ρ."""
    alpha = ref.rho.alpha if alpha is None else alpha
    if isinstance(alpha, TailBoundary):
        quenched = boundary_rate(Q, ref, alpha, L)
    else:
        quenched = fin_rate(Q, ref, alpha, L)
    ladder = None
    if tr_list and not isinstance(alpha, TailBoundary):
        ladder = que_rate_ladder(Q, ref, alpha, tr_list, L, threads)
    logger.debug("tasas a profundidad %d: anneal=%s", L, to_jsonable(ann_rate(Q, ref)))
    return RateResult(
        annealed=ann_rate(Q, ref),
        quenched_bracket=quenched,
        alpha=alpha,
        H_rel=spec_rel_entropy(Q, ref),
        m_Q=mean_length(Q),
        psi_bracket=psi_rel_entropy_bracket(Q, ref.nu, L),
        depth=L,
        ladder=ladder,
    )


def affine_gap(mixture: RateValue, parts: Sequence[Tuple[float, RateValue]]) -> float:
    """|punto medio de la mezcla − Σ λ_i·punto medio de la componente i|."""
    div = first_divergent(mixture, *(v for _, v in parts))
    if div is not None:
        raise InputError(f"affine_gap: valor divergente ({div.reason})")
    combinada = float(np.sum([lam * as_interval(v).mid for lam, v in parts]))
    return abs(as_interval(mixture).mid - combinada)
