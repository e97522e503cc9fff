# experimentos.py
"""
Orquestación: una corrida = un experimento.

`RunConfig` junta las leyes (JSON), los parámetros del experimento, la
semilla y los hilos; `resolver_config` completa los valores por defecto y
valida; `ejecutar` despacha al experimento, escribe los artefactos y
devuelve la línea de resumen.
"""
from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple

import polars as pl

import quenched_ldp
from quenched_ldp.config import DEFAULT_SEED, DEFAULT_THREADS, RESULTS_DIR
from quenched_ldp.core.entropy import entropy_report
from quenched_ldp.core.intervals import Divergent, Interval, as_interval, to_jsonable
from quenched_ldp.core.laws import LetterLaw, RenewalLaw, TailBoundary, make_algebraic_renewal, reference_law, sample_path
from quenched_ldp.core.psi import psi_marginal, r_nu_test
from quenched_ldp.core.rates import i_projection, que_rate_ladder, rate_report
from quenched_ldp.errors import InputError
from quenched_ldp.io.readers import (
    letter_law_from_json,
    load_json,
    neighbourhood_from_json,
    process_from_json,
    renewal_from_json,
)
from quenched_ldp.io.writers import write_artifacts
from quenched_ldp.lab.convolution import conv_tail_check
from quenched_ldp.lab.core_lemma import core_lemma_run
from quenched_ldp.lab.ergodic import ergodic_gap
from quenched_ldp.lab.quenched import quenched_log_prob_enum, quenched_slope_series, sample_medium
from quenched_ldp.lab.waiting import waiting_time
from quenched_ldp.utils.funciones import parse_range

logger = logging.getLogger(__name__)

COMANDOS = (
    "simulate", "ergodic", "psi", "entropy", "rate", "ladder", "quench-enum",
    "quench-slopes", "waiting-time", "core-lemma", "conv-tail", "iproj",
)

# Parámetros por defecto por comando (los rangos se guardan como texto)
PARAM_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "simulate": {"n": 20, "n_letters": None},
    "ergodic": {"n": 100_000, "k": 1},
    "psi": {"depth": 4, "tr": None, "r_nu_depth": None},
    "entropy": {"depth": 8},
    "rate": {"alpha": None, "depth": 8, "tr": None},
    "ladder": {"alpha": 2.0, "depth": 8, "tr": "1..4"},
    "quench-enum": {"n": 6, "jmax": 4, "medium": None},
    "quench-slopes": {"n": "6,8,10", "jmax": 4, "medium": None},
    "waiting-time": {"m": "10..30", "trials": 200, "tol": 0.0, "horizon": None},
    "core-lemma": {"alpha": 2.0, "p": 0.1, "n": "1..40", "horizon": 200_000, "samples": 20,
                   "trials": 0, "mc_n": "1,2,3", "mc_horizon": 10_000},
    "conv-tail": {"alpha": 2.0, "cap": 2000, "m": 5, "n": 2000, "c_rho": None},
    "iproj": {},
}

# Columnas en nats (para la conversión a bits del resumen en pantalla)
NAT_FACTOR = {"nat": 1.0, "bit": 1.0 / math.log(2.0)}


# ─────────────────────────────────────────────────────────────────────────────
# Modelo de entrada
# ─────────────────────────────────────────────────────────────────────────────
@dataclass
class RunConfig:
    command: str
    letters: Optional[Dict[str, Any]] = None
    renewal: Optional[Dict[str, Any]] = None
    process: Optional[Dict[str, Any]] = None
    target: Optional[Dict[str, Any]] = None
    neighbourhood: Optional[List[Dict[str, Any]]] = None
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    threads: int = DEFAULT_THREADS
    out: Optional[Path] = None
    fmt: Literal["csv", "json"] = "csv"
    log_base: Literal["nat", "bit"] = "nat"

    @classmethod
    def from_file(cls, command: str, path: Path | str | None) -> "RunConfig":
        if path is None:
            return cls(command)
        doc = load_json(path)
        return cls(
            command,
            letters=doc.get("letters"),
            renewal=doc.get("renewal"),
            process=doc.get("process"),
            target=doc.get("target"),
            neighbourhood=doc.get("neighbourhood"),
            params=dict(doc.get("params", {})),
            seed=int(doc.get("seed", DEFAULT_SEED)),
            threads=int(doc.get("threads", DEFAULT_THREADS)),
        )


@dataclass(frozen=True)
class Resultado:
    frame: pl.DataFrame
    extra: Dict[str, Any]
    resumen: str


# ─────────────────────────────────────────────────────────────────────────────
# Validación y valores por defecto
# ─────────────────────────────────────────────────────────────────────────────
def resolver_config(cfg: RunConfig) -> RunConfig:
    if cfg.command not in COMANDOS:
        raise InputError(f"command: comando desconocido '{cfg.command}'")
    if cfg.threads < 1:
        raise InputError(f"threads: debe ser ≥ 1 (recibido {cfg.threads})")
    if not 0 <= int(cfg.seed) < 2 ** 64:
        raise InputError("seed: debe ser un entero de 64 bits sin signo")
    if cfg.fmt not in ("csv", "json"):
        raise InputError(f"format: '{cfg.fmt}' no soportado")
    params = dict(PARAM_DEFAULTS[cfg.command])
    params.update({k: v for k, v in cfg.params.items() if v is not None})
    out = cfg.out or RESULTS_DIR / f"{cfg.command}.{cfg.fmt}"
    return RunConfig(cfg.command, cfg.letters, cfg.renewal, cfg.process, cfg.target, cfg.neighbourhood,
                     params, int(cfg.seed), int(cfg.threads), Path(out), cfg.fmt, cfg.log_base)


# Entradas que lee cada comando (las demás quedan como vinieron)
USOS: Dict[str, Tuple[str, ...]] = {
    "simulate": ("letters", "renewal"),
    "ergodic": ("letters", "renewal"),
    "psi": ("letters", "renewal", "process"),
    "entropy": ("letters", "renewal", "process"),
    "rate": ("letters", "renewal", "process"),
    "ladder": ("letters", "renewal", "process"),
    "quench-enum": ("letters", "renewal", "neighbourhood"),
    "quench-slopes": ("letters", "renewal", "neighbourhood"),
    "waiting-time": ("letters", "target"),
    "core-lemma": (),
    "conv-tail": ("renewal",),
    "iproj": ("letters", "renewal", "neighbourhood"),
}


def leyes_resueltas(cfg: RunConfig) -> Dict[str, Any]:
    """Leyes efectivas de la corrida, con los valores por defecto explícitos."""
    usa = USOS[cfg.command]
    out: Dict[str, Any] = {}
    if "letters" in usa:
        out["letters"] = letter_law_from_json(cfg.letters).to_json()
    if "renewal" in usa:
        if cfg.command == "conv-tail" and cfg.renewal is None:
            rho = make_algebraic_renewal(_real(cfg.params, "alpha"), _entero(cfg.params, "cap"))
        else:
            rho = renewal_from_json(cfg.renewal)
        out["renewal"] = rho.to_json()
    if "process" in usa:
        if cfg.process is None or cfg.process.get("variant", "reference") == "reference":
            out["process"] = {"variant": "reference"}
        else:
            nu, rho = _leyes(cfg)
            out["process"] = process_from_json(cfg.process, nu, rho).to_json()
    if "target" in usa and cfg.target is not None:
        out["target"] = letter_law_from_json(cfg.target, full_support=False, donde="target").to_json()
    if "neighbourhood" in usa:
        out["neighbourhood"] = neighbourhood_from_json(cfg.neighbourhood).to_json()
    return out


def config_to_json(cfg: RunConfig) -> Dict[str, Any]:
    doc = asdict(cfg)
    doc.update(leyes_resueltas(cfg))
    doc["out"] = Path(cfg.out).name if cfg.out is not None else None
    return doc


def _rango(params: Dict[str, Any], clave: str) -> List[int]:
    return parse_range(params[clave], clave)


def _entero(params: Dict[str, Any], clave: str) -> int:
    try:
        return int(params[clave])
    except (TypeError, ValueError) as e:
        raise InputError(f"{clave}: se espera un entero (recibido {params[clave]!r})") from e


def _real(params: Dict[str, Any], clave: str) -> float:
    try:
        return float(params[clave])
    except (TypeError, ValueError) as e:
        raise InputError(f"{clave}: se espera un número (recibido {params[clave]!r})") from e


def _leyes(cfg: RunConfig) -> Tuple[LetterLaw, RenewalLaw]:
    return letter_law_from_json(cfg.letters), renewal_from_json(cfg.renewal)


def _fmt(v: Any, factor: float = 1.0) -> str:
    if isinstance(v, Divergent):
        return "+inf"
    if isinstance(v, Interval):
        return f"[{v.lower * factor:.6g}, {v.upper * factor:.6g}]"
    if hasattr(v, "lower") and hasattr(v, "upper"):
        return f"[{v.lower * factor:.6g}, {v.upper * factor:.6g}]"
    if isinstance(v, float):
        return f"{v * factor:.6g}"
    return str(v)


def _interval_rows(valores: Dict[str, Any]) -> pl.DataFrame:
    """Una fila por cantidad: (quantity, lower, upper, infinite)."""
    filas = []
    for nombre, v in valores.items():
        if isinstance(v, Divergent):
            filas.append({"quantity": nombre, "lower": None, "upper": None, "infinite": True})
        elif hasattr(v, "lower"):
            filas.append({"quantity": nombre, "lower": float(v.lower), "upper": float(v.upper), "infinite": False})
        else:
            filas.append({"quantity": nombre, "lower": float(v), "upper": float(v), "infinite": False})
    return pl.DataFrame(filas, schema={"quantity": pl.Utf8, "lower": pl.Float64, "upper": pl.Float64,
                                       "infinite": pl.Boolean})


# ─────────────────────────────────────────────────────────────────────────────
# Experimentos
# ─────────────────────────────────────────────────────────────────────────────
def exp_simulate(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    n = _entero(cfg.params, "n")
    n_letters = cfg.params.get("n_letters")
    x, cortes, oracion = sample_path(nu, rho, None if n_letters is None else int(n_letters), n, cfg.seed)
    inicios = (0,) + cortes.points[:-1]
    frame = pl.DataFrame({
        "index": list(range(1, n + 1)),
        "start": list(inicios),
        "end": list(cortes.points),
        "word": list(oracion),
    }, schema={"index": pl.Int64, "start": pl.Int64, "end": pl.Int64, "word": pl.Utf8})
    return Resultado(frame, {"letters_length": len(x)}, f"simulate: {n} palabras en {len(x)} letras")


def exp_ergodic(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    res = ergodic_gap(nu, rho, _entero(cfg.params, "n"), _entero(cfg.params, "k"), cfg.seed)
    return Resultado(res.to_frame(), {}, f"ergodic: gap = {res.gap:.4g} (cota {res.bound:.4g}) en '{res.worst_pattern}'")


def exp_psi(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    Q = process_from_json(cfg.process, nu, rho)
    L = _entero(cfg.params, "depth")
    tr = cfg.params.get("tr")
    tabla = psi_marginal(Q, L, None if tr is None else int(tr))
    test = r_nu_test(Q, nu, int(cfg.params.get("r_nu_depth") or L))
    extra = {"r_nu": test.to_json()}
    return Resultado(tabla.to_frame(), extra,
                     f"psi: {len(tabla)} patrones a profundidad {L}; R_ν = {test.member} (desvío {test.max_deviation:.3g})")


def exp_entropy(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    Q = process_from_json(cfg.process, nu, rho)
    rep = entropy_report(Q, reference_law(rho, nu), _entero(cfg.params, "depth"))
    frame = _interval_rows({
        "H_Q": rep.H_Q, "H_rel": rep.H_rel, "m_Q": rep.m_Q, "psi_rel_bracket": rep.psi_bracket,
        "psi_entropy": rep.psi_entropy, "H_tau_given_K": rep.H_tau_given_K,
        "E_log_rho": rep.E_log_rho, "E_log_nu": rep.E_log_nu, "identity_residual": rep.residual,
    })
    return Resultado(frame, {"report": rep.to_json()},
                     f"entropy: H(Q|q) = {_fmt(rep.H_rel, f)}, H(Ψ|ν) ∈ {_fmt(rep.psi_bracket, f)}, "
                     f"residuo {_fmt(rep.residual, f)}")


def _alpha_param(valor: Any) -> "float | TailBoundary | None":
    if valor is None:
        return None
    if isinstance(valor, str) and valor.lower() in ("one", "infinity"):
        return TailBoundary(valor.lower())
    try:
        return float(valor)
    except (TypeError, ValueError) as e:
        raise InputError(f"alpha: se espera número, 'one' o 'infinity' (recibido {valor!r})") from e


def exp_rate(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    Q = process_from_json(cfg.process, nu, rho)
    tr = cfg.params.get("tr")
    res = rate_report(Q, reference_law(rho, nu), _alpha_param(cfg.params.get("alpha")),
                      _entero(cfg.params, "depth"), None if tr is None else _rango(cfg.params, "tr"), cfg.threads)
    valores: Dict[str, Any] = {"annealed": res.annealed, "quenched": res.quenched_bracket,
                               "H_rel": res.H_rel, "m_Q": res.m_Q, "psi_rel_bracket": res.psi_bracket}
    for t, v in res.ladder or []:
        valores[f"ladder_tr{t}"] = v
    return Resultado(_interval_rows(valores), {"rate": res.to_json()},
                     f"rate: I^ann = {_fmt(res.annealed, f)}, I^que ∈ {_fmt(res.quenched_bracket, f)} (L={res.depth})")


def exp_ladder(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    Q = process_from_json(cfg.process, nu, rho)
    L = _entero(cfg.params, "depth")
    alpha = _alpha_param(cfg.params["alpha"])
    if not isinstance(alpha, float):
        raise InputError("alpha: la escalera necesita un exponente real > 1")
    escalera = que_rate_ladder(Q, reference_law(rho, nu), alpha, _rango(cfg.params, "tr"), L, cfg.threads)
    filas = []
    for t, v in escalera:
        if isinstance(v, Divergent):
            filas.append({"tr": t, "lower": None, "upper": None, "L": L, "width": None})
        else:
            v = as_interval(v)
            filas.append({"tr": t, "lower": v.lower, "upper": v.upper, "L": L, "width": v.width})
    frame = pl.DataFrame(filas, schema={"tr": pl.Int64, "lower": pl.Float64, "upper": pl.Float64,
                                        "L": pl.Int64, "width": pl.Float64})
    ultimo = escalera[-1][1]
    return Resultado(frame, {}, f"ladder: {len(escalera)} niveles, último I^fin ∈ {_fmt(ultimo, f)}")


def _medio(cfg: RunConfig, nu: LetterLaw, largo: int) -> str:
    medio = cfg.params.get("medium")
    if medio is not None:
        nu.alphabet.validate_word(str(medio))
        return str(medio)
    return sample_medium(nu, largo, cfg.seed)


def exp_quench_enum(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    nbhd = neighbourhood_from_json(cfg.neighbourhood)
    n, jmax = _entero(cfg.params, "n"), _entero(cfg.params, "jmax")
    x = _medio(cfg, nu, n * jmax)
    lp = quenched_log_prob_enum(x, rho, n, nbhd, jmax)
    finito = not isinstance(lp, Divergent)
    frame = pl.DataFrame([{
        "N": n, "jmax": jmax, "log_prob": lp if finito else None,
        "probability": math.exp(lp) if finito else 0.0, "medium_length": len(x),
    }], schema={"N": pl.Int64, "jmax": pl.Int64, "log_prob": pl.Float64, "probability": pl.Float64,
                "medium_length": pl.Int64})
    return Resultado(frame, {"medium": x},
                     f"quench-enum: P(R_N ∈ O | X) = {math.exp(lp) if finito else 0.0:.6g} (N={n}, Jmax={jmax})")


def exp_quench_slopes(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    nbhd = neighbourhood_from_json(cfg.neighbourhood)
    ns, jmax = _rango(cfg.params, "n"), _entero(cfg.params, "jmax")
    medio = cfg.params.get("medium")
    serie = quenched_slope_series(nu, rho, nbhd, ns, jmax, cfg.seed,
                                  None if medio is None else str(medio), cfg.threads)
    return Resultado(serie.to_frame(), {"series": serie.to_json()},
                     f"quench-slopes: {len(ns)} valores de N, pendiente recocida {_fmt(serie.annealed_slope, f)}")


def exp_waiting(cfg: RunConfig, f: float) -> Resultado:
    nu = letter_law_from_json(cfg.letters)
    if cfg.target is None:
        raise InputError("target: waiting-time necesita la ley objetivo ψ")
    psi = letter_law_from_json(cfg.target, full_support=False, donde="target")
    horizonte = cfg.params.get("horizon")
    kw = {} if horizonte is None else {"horizon_cap": int(horizonte)}
    res = waiting_time(nu, psi, _rango(cfg.params, "m"), _entero(cfg.params, "trials"),
                       _real(cfg.params, "tol"), cfg.seed, cfg.threads, **kw)
    return Resultado(res.to_frame(), {"fit": res.to_json()},
                     f"waiting-time: pendiente {_fmt(res.slope, f)} vs h(ψ|ν) = {_fmt(res.predicted, f)}")


def exp_core_lemma(cfg: RunConfig, f: float) -> Resultado:
    p = cfg.params
    run = core_lemma_run(_real(p, "alpha"), _real(p, "p"), _rango(p, "n"), _entero(p, "horizon"),
                         _entero(p, "samples"), cfg.seed, _entero(p, "trials"),
                         _rango(p, "mc_n") if _entero(p, "trials") else (), _entero(p, "mc_horizon"), cfg.threads)
    n_max = run.n_list[-1]
    mediana = run.median_slope(n_max)
    return Resultado(run.to_frame(), {"run": run.to_json()},
                     f"core-lemma: mediana −(1/N)log S_N = {_fmt(mediana, f)} en N={n_max}; "
                     f"φ ∈ [{_fmt(run.phi.lower, f)}, {_fmt(run.phi.upper, f)}]")


def exp_conv_tail(cfg: RunConfig, f: float) -> Resultado:
    p = cfg.params
    if cfg.renewal is not None:
        rho = renewal_from_json(cfg.renewal)
        alpha = None
    else:
        alpha = _real(p, "alpha")
        rho = make_algebraic_renewal(alpha, _entero(p, "cap"))
    c = p.get("c_rho")
    res = conv_tail_check(rho, alpha, None if c is None else float(c), _entero(p, "m"), _entero(p, "n"))
    return Resultado(res.to_frame(), {},
                     f"conv-tail: peor cociente {res.worst_ratio:.6g} en (m={res.at_m}, n={res.at_n})")


def exp_iproj(cfg: RunConfig, f: float) -> Resultado:
    nu, rho = _leyes(cfg)
    nbhd = neighbourhood_from_json(cfg.neighbourhood)
    ref = cfg.params.get("ref_marginal") or reference_law(rho, nu).enumerate()
    proy = i_projection(ref, nbhd)
    palabras = sorted(ref)
    frame = pl.DataFrame({
        "word": palabras,
        "ref": [float(ref[w]) for w in palabras],
        "q_star": [proy.q.get(w, 0.0) for w in palabras],
    }, schema={"word": pl.Utf8, "ref": pl.Float64, "q_star": pl.Float64})
    return Resultado(frame, {"value": to_jsonable(proy.value)}, f"iproj: valor {_fmt(proy.value, f)}")


EXPERIMENTOS: Dict[str, Callable[[RunConfig, float], Resultado]] = {
    "simulate": exp_simulate,
    "ergodic": exp_ergodic,
    "psi": exp_psi,
    "entropy": exp_entropy,
    "rate": exp_rate,
    "ladder": exp_ladder,
    "quench-enum": exp_quench_enum,
    "quench-slopes": exp_quench_slopes,
    "waiting-time": exp_waiting,
    "core-lemma": exp_core_lemma,
    "conv-tail": exp_conv_tail,
    "iproj": exp_iproj,
}


# ─────────────────────────────────────────────────────────────────────────────
# Función principal (usada por cli.py)
# ─────────────────────────────────────────────────────────────────────────────
def ejecutar(cfg: RunConfig) -> Tuple[Path, str]:
    """Resuelve la configuración, corre el experimento y escribe los artefactos."""
    cfg = resolver_config(cfg)
    logger.info("▶ %s (seed=%d, threads=%d)", cfg.command, cfg.seed, cfg.threads)
    res = EXPERIMENTOS[cfg.command](cfg, NAT_FACTOR[cfg.log_base])
    meta = {
        "command": cfg.command,
        "config": config_to_json(cfg),
        "seed": cfg.seed,
        "threads": cfg.threads,
        "version": quenched_ldp.__version__,
        "units": "nats",
        "result": res.extra,
    }
    # el artefacto no depende de threads
    meta["config"].pop("threads", None)
    meta.pop("threads")
    ruta = write_artifacts(res.frame, meta, cfg.out, cfg.fmt)
    unidad = "bits" if cfg.log_base == "bit" else "nats"
    return ruta, f"{res.resumen} [{unidad}]"
