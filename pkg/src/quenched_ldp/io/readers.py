from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Any, Dict, Mapping

import numpy as np

from quenched_ldp.config import DEFAULT_ALPHA, DEFAULT_ALPHABET, DEFAULT_CAP
from quenched_ldp.core.laws import (
    IIDLaw,
    LetterLaw,
    MarkovLaw,
    RenewalLaw,
    TailBoundary,
    WordProcessLaw,
    make_algebraic_renewal,
    make_boundary_renewal,
    reference_law,
    renewal_from_atoms,
    uniform_renewal,
)
from quenched_ldp.core.rates import Neighbourhood
from quenched_ldp.core.words import Alphabet
from quenched_ldp.errors import InputError

logger = logging.getLogger(__name__)


# -----------------------------------------------------------------------------
# CARGA DE ARCHIVOS
# -----------------------------------------------------------------------------
def load_json(path: Path | str) -> Dict[str, Any]:
    """Carga un documento JSON de configuración o de leyes.
       - Acepta str o Path.
       - Valida que exista y que el contenido sea un objeto (dict).
    """
    path = Path(path)
    if not path.exists():
        raise InputError(f"❌ No se encontró {path}")
    try:
        with path.open("r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise InputError(f"❌ {path.name} no es JSON válido: {e}") from e
    if not isinstance(data, dict):
        raise InputError(f"❌ {path.name} no contiene un objeto JSON")
    logger.debug("✓ configuración leída de %s", path)
    return data


def _campo(doc: Mapping[str, Any], clave: str, donde: str) -> Any:
    if clave not in doc:
        raise InputError(f"{donde}: falta el campo '{clave}'")
    return doc[clave]


def _alpha(valor: Any, donde: str) -> "float | TailBoundary":
    if isinstance(valor, str):
        try:
            return TailBoundary(valor.lower())
        except ValueError as e:
            raise InputError(f"{donde}.alpha: se espera número, 'one' o 'infinity' (recibido '{valor}')") from e
    try:
        return float(valor)
    except (TypeError, ValueError) as e:
        raise InputError(f"{donde}.alpha: valor inválido {valor!r}") from e


def _real(valor: Any, campo: str) -> float:
    try:
        return float(valor)
    except (TypeError, ValueError) as e:
        raise InputError(f"{campo}: se espera un número (recibido {valor!r})") from e


def _entero(valor: Any, campo: str) -> int:
    if isinstance(valor, bool) or (isinstance(valor, float) and not valor.is_integer()):
        raise InputError(f"{campo}: se espera un entero (recibido {valor!r})")
    try:
        return int(valor)
    except (TypeError, ValueError) as e:
        raise InputError(f"{campo}: se espera un entero (recibido {valor!r})") from e


def _numeros(valor: Any, campo: str) -> np.ndarray:
    try:
        return np.asarray(valor, dtype=float)
    except (TypeError, ValueError) as e:
        raise InputError(f"{campo}: se esperan números (recibido {valor!r})") from e


def _objeto(doc: Any, donde: str) -> Mapping[str, Any]:
    if not isinstance(doc, Mapping):
        raise InputError(f"{donde}: se espera un objeto JSON (recibido {doc!r})")
    return doc


def _atomos(valor: Any, donde: str) -> list:
    if not isinstance(valor, list) or not valor:
        raise InputError(f"{donde}.atoms: se espera una lista no vacía de pares [n, peso]")
    pares = []
    for i, par in enumerate(valor):
        if not isinstance(par, (list, tuple)) or len(par) != 2:
            raise InputError(f"{donde}.atoms[{i}]: se espera un par [n, peso] (recibido {par!r})")
        n = _entero(par[0], f"{donde}.atoms[{i}]")
        if n < 1:
            raise InputError(f"{donde}.atoms[{i}]: el largo debe ser ≥ 1 (recibido {n})")
        pares.append((n, _real(par[1], f"{donde}.atoms[{i}]")))
    return pares


# -----------------------------------------------------------------------------
# LEYES
# -----------------------------------------------------------------------------
def letter_law_from_json(doc: Mapping[str, Any] | None, full_support: bool = True,
                         donde: str = "letters") -> LetterLaw:
    if doc is None:
        return LetterLaw.uniform(DEFAULT_ALPHABET)
    doc = _objeto(doc, donde)
    alfabeto = Alphabet(str(_campo(doc, "alphabet", donde)))
    probs = doc.get("probs")
    if probs is None:
        return LetterLaw(alfabeto, np.full(len(alfabeto), 1.0 / len(alfabeto)), full_support)
    if isinstance(probs, Mapping):
        return LetterLaw.from_mapping(alfabeto, {k: _real(v, f"{donde}.probs.{k}") for k, v in probs.items()},
                                      full_support)
    return LetterLaw(alfabeto, _numeros(probs, f"{donde}.probs"), full_support)


def renewal_from_json(doc: Mapping[str, Any] | None, donde: str = "renewal") -> RenewalLaw:
    """
    Formas aceptadas:
        {"atoms": [[n, p], ...], "alpha": 2.0 | "one" | "infinity"}
        {"kind": "algebraic", "alpha": 2.0, "cap": 4}
        {"kind": "boundary", "alpha": "one" | "infinity", "cap": 50, "rate": 1.0}
        {"kind": "uniform", "n_max": 2}
    """
    if doc is None:
        return make_algebraic_renewal(DEFAULT_ALPHA, DEFAULT_CAP)
    doc = _objeto(doc, donde)
    if "atoms" in doc:
        return renewal_from_atoms(_atomos(doc["atoms"], donde), _alpha(_campo(doc, "alpha", donde), donde))
    tipo = doc.get("kind", "algebraic")
    if tipo == "algebraic":
        return make_algebraic_renewal(_real(doc.get("alpha", DEFAULT_ALPHA), f"{donde}.alpha"),
                                      _entero(doc.get("cap", DEFAULT_CAP), f"{donde}.cap"))
    if tipo == "boundary":
        return make_boundary_renewal(_alpha(_campo(doc, "alpha", donde), donde),
                                     _entero(doc.get("cap", DEFAULT_CAP), f"{donde}.cap"),
                                     _real(doc.get("rate", 1.0), f"{donde}.rate"))
    if tipo == "uniform":
        return uniform_renewal(_entero(_campo(doc, "n_max", donde), f"{donde}.n_max"))
    raise InputError(f"{donde}.kind: tipo desconocido '{tipo}'")


def process_from_json(doc: Mapping[str, Any] | None, nu: LetterLaw, rho: RenewalLaw,
                      donde: str = "process") -> WordProcessLaw:
    """
    {"variant": "iid", "words": [...], "probs": [...]} |
    {"variant": "markov", "words": [...], "transition": [[...], ...]} |
    {"variant": "reference"}  (Q = q_{ρ,ν}^{⊗ℕ})
    """
    if doc is not None:
        doc = _objeto(doc, donde)
    if doc is None or doc.get("variant", "reference") == "reference":
        return reference_law(rho, nu).as_process()
    variante = doc["variant"]
    palabras = tuple(str(w) for w in _campo(doc, "words", donde))
    if variante == "iid":
        return IIDLaw(nu.alphabet, palabras, _numeros(_campo(doc, "probs", donde), f"{donde}.probs"))
    if variante == "markov":
        return MarkovLaw(nu.alphabet, palabras, _numeros(_campo(doc, "transition", donde), f"{donde}.transition"))
    raise InputError(f"{donde}.variant: variante desconocida '{variante}'")


def neighbourhood_from_json(items: Any, donde: str = "neighbourhood") -> Neighbourhood:
    if items is None:
        return Neighbourhood()
    if not isinstance(items, list):
        raise InputError(f"{donde}: se espera una lista de restricciones")
    for i, it in enumerate(items):
        if not isinstance(it, Mapping) or "pattern" not in it:
            raise InputError(f"{donde}[{i}]: cada restricción necesita 'pattern', 'lower' y 'upper'")
    return Neighbourhood.from_json([
        {"pattern": it["pattern"],
         "lower": _real(it.get("lower", 0.0), f"{donde}[{i}].lower"),
         "upper": _real(it.get("upper", 1.0), f"{donde}[{i}].upper")}
        for i, it in enumerate(items)
    ])
