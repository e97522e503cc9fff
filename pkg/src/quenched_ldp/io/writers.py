from __future__ import annotations

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Literal

import polars as pl

from quenched_ldp.config import CSV_SEPARATOR

logger = logging.getLogger(__name__)


def _clean(obj: Any) -> Any:
    """NaN e infinitos pasan a null; tuplas a listas."""
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def _dump(obj: Any) -> str:
    # orden de claves fijo y sin marcas de tiempo
    return json.dumps(_clean(obj), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def sidecar_path(out: Path) -> Path:
    return out.with_name(out.name + ".json")


def write_artifacts(frame: pl.DataFrame, meta: Dict[str, Any], out: Path | str,
                    fmt: Literal["csv", "json"] = "csv") -> Path:
    """
    Escribe el resultado de un experimento.

    csv  → `out` con encabezado, separador ',' y fin de línea LF, más el
           sidecar `<out>.json` con la configuración resuelta.
    json → un único documento con `meta` y las filas de la tabla.
    """
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "csv":
        frame.write_csv(out, separator=CSV_SEPARATOR, include_header=True, line_terminator="\n")
        sidecar_path(out).write_text(_dump(meta), encoding="utf-8", newline="\n")
        logger.info("✓ %s (+ sidecar)", out)
    else:
        doc = dict(meta)
        doc["rows"] = frame.to_dicts()
        out.write_text(_dump(doc), encoding="utf-8", newline="\n")
        logger.info("✓ %s", out)
    return out
