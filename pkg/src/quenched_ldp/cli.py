# src/quenched_ldp/cli.py
"""
Superficie de línea de comandos: `quenched-ldp <comando> [opciones]`.

Códigos de salida: 0 éxito, 1 entrada inválida, 2 presupuesto excedido,
3 comando desconocido o uso incorrecto.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from quenched_ldp.errors import BudgetError, InputError
from quenched_ldp.services.experimentos import COMANDOS, RunConfig, ejecutar

logger = logging.getLogger("quenched_ldp")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3

AYUDA = {
    "simulate": "muestrea X, los cortes J y la oración Y_1..Y_N",
    "ergodic": "brecha entre frecuencias empíricas de palabras y q_{ρ,ν}",
    "psi": "marginal de Ψ_Q a profundidad L y test R_ν",
    "entropy": "H(Q), H(Q|q), H(Ψ_Q|ν) y residuo de la identidad",
    "rate": "tasas recocida y templada (intervalos)",
    "ladder": "escalera I^fin sobre niveles de truncación",
    "quench-enum": "P(R_N ∈ O | X) exacta por enumeración",
    "quench-slopes": "pendientes −(1/N)·log P(R_N ∈ O | X)",
    "waiting-time": "tiempo de espera de un bloque ψ-típico",
    "core-lemma": "S_N(ω) sobre marcas Bernoulli(p) y cotas de φ",
    "conv-tail": "cota de cola de convoluciones de ρ",
    "iproj": "I-proyección de q_{ρ,ν} sobre una vecindad",
}


class UsageError(Exception):
    """Uso incorrecto de la línea de comandos."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _opciones_comunes() -> argparse.ArgumentParser:
    comun = argparse.ArgumentParser(add_help=False)
    comun.add_argument("--config", type=Path, default=None, help="documento JSON con leyes y parámetros")
    comun.add_argument("--out", type=Path, default=None, help="ruta del artefacto (por defecto data/results/)")
    comun.add_argument("--seed", type=int, default=None, help="semilla de 64 bits")
    comun.add_argument("--threads", type=int, default=None, help="hilos de trabajo (no cambia resultados)")
    comun.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    comun.add_argument("--log-base", choices=("nat", "bit"), default="nat",
                       help="unidades del resumen en pantalla")
    comun.add_argument("-v", "--verbose", action="count", default=0)

    g = comun.add_argument_group("parámetros del experimento (reemplazan a params del JSON)")
    g.add_argument("--alpha", default=None, help="exponente de cola, 'one' o 'infinity'")
    g.add_argument("--depth", type=int, default=None, help="profundidad L")
    g.add_argument("--n", default=None, help="N o rango de N ('1..40', '6,8,10')")
    g.add_argument("--m", default=None, help="M o rango de M")
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--tr", default=None, help="nivel o rango de truncación")
    g.add_argument("--p", type=float, default=None)
    g.add_argument("--horizon", type=int, default=None)
    g.add_argument("--samples", type=int, default=None)
    g.add_argument("--trials", type=int, default=None)
    g.add_argument("--jmax", type=int, default=None)
    g.add_argument("--cap", type=int, default=None)
    g.add_argument("--tol", type=float, default=None)
    g.add_argument("--medium", default=None, help="medio X explícito")
    return comun


PARAM_FLAGS = ("alpha", "depth", "n", "m", "k", "tr", "p", "horizon", "samples", "trials", "jmax", "cap",
               "tol", "medium")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="quenched-ldp", description="Grandes desvíos templados y recocidos para palabras.")
    sub = parser.add_subparsers(dest="command", metavar="COMANDO", parser_class=_Parser)
    comun = _opciones_comunes()
    for nombre in COMANDOS:
        sub.add_parser(nombre, parents=[comun], help=AYUDA[nombre])
    return parser


def _configurar_logging(verbose: int) -> None:
    nivel = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=nivel, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def config_desde_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig.from_file(args.command, args.config)
    for clave in PARAM_FLAGS:
        valor = getattr(args, clave)
        if valor is not None:
            cfg.params[clave] = valor
    if args.seed is not None:
        cfg.seed = args.seed
    if args.threads is not None:
        cfg.threads = args.threads
    cfg.out = args.out
    cfg.fmt = args.fmt
    cfg.log_base = args.log_base
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
    except UsageError as e:
        print(f"uso: {e}", file=sys.stderr)
        return EXIT_USAGE
    if args.command is None:
        print("uso: falta el comando (" + ", ".join(COMANDOS) + ")", file=sys.stderr)
        return EXIT_USAGE

    _configurar_logging(args.verbose)
    try:
        ruta, resumen = ejecutar(config_desde_args(args))
    except BudgetError as e:
        print(f"❌ presupuesto: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except InputError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_INPUT
    print(resumen)
    logger.info("artefacto en %s", ruta)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
