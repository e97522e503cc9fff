import json
import math

import numpy as np
import polars as pl
import pytest

from quenched_ldp.core.laws import IIDLaw, MarkovLaw, TailBoundary
from quenched_ldp.errors import InputError
from quenched_ldp.io.readers import (
    letter_law_from_json,
    load_json,
    neighbourhood_from_json,
    process_from_json,
    renewal_from_json,
)
from quenched_ldp.io.writers import sidecar_path, write_artifacts


# ─────────────────────────────────────────────
# Lectura
# ─────────────────────────────────────────────
def test_load_json_archivo_inexistente(tmp_path):
    ruta = tmp_path / "no_esta.json"
    with pytest.raises(InputError, match="no_esta.json"):
        load_json(ruta)


def test_load_json_invalido(tmp_path):
    ruta = tmp_path / "roto.json"
    ruta.write_text("{nope", encoding="utf-8")
    with pytest.raises(InputError, match="JSON"):
        load_json(ruta)
    ruta.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(InputError, match="objeto"):
        load_json(ruta)


def test_load_json_ok(tmp_path):
    ruta = tmp_path / "q.json"
    ruta.write_text(json.dumps({"letters": {"alphabet": "01"}}), encoding="utf-8")
    assert load_json(str(ruta)) == {"letters": {"alphabet": "01"}}


def test_ley_de_letras():
    assert letter_law_from_json(None).alphabet.symbols == "ab"
    nu = letter_law_from_json({"alphabet": "01", "probs": {"0": 0.2, "1": 0.8}})
    np.testing.assert_allclose(nu.probs, [0.2, 0.8])
    nu2 = letter_law_from_json({"alphabet": "xyz"})
    np.testing.assert_allclose(nu2.probs, [1 / 3] * 3)
    with pytest.raises(InputError, match="alphabet"):
        letter_law_from_json({"probs": [0.5, 0.5]})


def test_ley_de_letras_sin_soporte_completo():
    with pytest.raises(InputError):
        letter_law_from_json({"alphabet": "01", "probs": [1.0, 0.0]})
    nu = letter_law_from_json({"alphabet": "01", "probs": [1.0, 0.0]}, full_support=False)
    assert nu.prob("1") == 0.0


@pytest.mark.parametrize(
    "doc, alpha",
    [
        (None, 2.0),
        ({"kind": "algebraic", "alpha": 3.0, "cap": 5}, 3.0),
        ({"kind": "boundary", "alpha": "one", "cap": 10}, TailBoundary.ONE),
        ({"kind": "boundary", "alpha": "INFINITY", "cap": 10, "rate": 0.5}, TailBoundary.INFINITY),
        ({"kind": "uniform", "n_max": 2}, TailBoundary.INFINITY),
        ({"atoms": [[1, 0.5], [3, 0.5]], "alpha": 2}, 2.0),
    ],
)
def test_renovaciones(doc, alpha):
    assert renewal_from_json(doc).alpha == alpha


@pytest.mark.parametrize(
    "doc, campo",
    [
        ({"kind": "zipf"}, "kind"),
        ({"atoms": [[1, 1.0]]}, "alpha"),
        ({"atoms": [[1, 1.0]], "alpha": "dos"}, "alpha"),
        ({"kind": "uniform"}, "n_max"),
        ({"kind": "algebraic", "alpha": "dos"}, r"renewal\.alpha"),
        ({"kind": "algebraic", "cap": "x"}, r"renewal\.cap"),
        ({"kind": "boundary", "alpha": "one", "cap": 10, "rate": "alta"}, r"renewal\.rate"),
        ({"kind": "uniform", "n_max": "dos"}, r"renewal\.n_max"),
        ({"kind": "uniform", "n_max": 2.5}, r"renewal\.n_max"),
        ({"atoms": [[1, "x"]], "alpha": 2}, r"renewal\.atoms\[0\]"),
        ({"atoms": [["a", 1.0]], "alpha": 2}, r"renewal\.atoms\[0\]"),
        ({"atoms": [[0, 1.0]], "alpha": 2}, r"renewal\.atoms\[0\]"),
        ({"atoms": [1, 2], "alpha": 2}, r"renewal\.atoms\[0\]"),
        ({"atoms": [], "alpha": 2}, r"renewal\.atoms"),
        ("zipf", "renewal"),
    ],
)
def test_renovaciones_invalidas(doc, campo):
    with pytest.raises(InputError, match=campo):
        renewal_from_json(doc)


def test_procesos(nu_ab, rho_default):
    ref = process_from_json(None, nu_ab, rho_default)
    assert isinstance(ref, IIDLaw) and len(ref.words) == 30
    iid = process_from_json({"variant": "iid", "words": ["a", "ab"], "probs": [0.5, 0.5]}, nu_ab, rho_default)
    assert iid.words == ("a", "ab")
    mk = process_from_json(
        {"variant": "markov", "words": ["a", "bb"], "transition": [[0, 1], [1, 0]]}, nu_ab, rho_default
    )
    assert isinstance(mk, MarkovLaw)


def test_procesos_invalidos(nu_ab, rho_default):
    with pytest.raises(InputError, match="variant"):
        process_from_json({"variant": "semi", "words": ["a"]}, nu_ab, rho_default)
    with pytest.raises(InputError, match="probs"):
        process_from_json({"variant": "iid", "words": ["a"]}, nu_ab, rho_default)


def test_vecindades():
    assert neighbourhood_from_json(None).constraints == ()
    nb = neighbourhood_from_json([{"pattern": ["b"], "lower": 0.9}, {"pattern": ["a", "b"], "upper": 0.5}])
    assert len(nb.single_word) == 1 and len(nb.pair) == 1
    assert nb.single_word[0].upper == 1.0
    with pytest.raises(InputError):
        neighbourhood_from_json({"pattern": ["b"]})
    with pytest.raises(InputError, match=r"neighbourhood\[0\]"):
        neighbourhood_from_json([{"lower": 0.1}])


# ─────────────────────────────────────────────
# Escritura
# ─────────────────────────────────────────────
def _tabla():
    return pl.DataFrame({"N": [1, 2], "value": [0.5, None]}, schema={"N": pl.Int64, "value": pl.Float64})


def test_csv_con_sidecar(tmp_path):
    out = tmp_path / "sub" / "res.csv"
    write_artifacts(_tabla(), {"command": "x", "seed": 1, "extra": math.nan}, out, "csv")
    texto = out.read_bytes()
    assert texto.startswith(b"N,value\n")
    assert b"\r\n" not in texto
    meta = json.loads(sidecar_path(out).read_text(encoding="utf-8"))
    assert meta == {"command": "x", "extra": None, "seed": 1}
    assert sidecar_path(out).name == "res.csv.json"


def test_json_unico(tmp_path):
    out = tmp_path / "res.json"
    write_artifacts(_tabla(), {"command": "x", "result": {"v": (1, 2)}}, out, "json")
    doc = json.loads(out.read_text(encoding="utf-8"))
    assert doc["rows"] == [{"N": 1, "value": 0.5}, {"N": 2, "value": None}]
    assert doc["result"]["v"] == [1, 2]
    assert not sidecar_path(out).exists()


def test_escritura_es_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    meta = {"z": 1, "a": [1.5, 2.5]}
    write_artifacts(_tabla(), meta, a)
    write_artifacts(_tabla(), dict(reversed(list(meta.items()))), b)
    assert a.read_bytes() == b.read_bytes()
    assert sidecar_path(a).read_bytes() == sidecar_path(b).read_bytes()


@pytest.mark.parametrize(
    "lector, doc, campo",
    [
        (letter_law_from_json, {"alphabet": "ab", "probs": {"a": "x", "b": 0.5}}, r"letters\.probs\.a"),
        (letter_law_from_json, {"alphabet": "ab", "probs": ["x", 0.5]}, r"letters\.probs"),
        (letter_law_from_json, ["a", "b"], "letters"),
        (neighbourhood_from_json, [{"pattern": ["a"], "lower": "bajo"}], r"neighbourhood\[0\]\.lower"),
        (neighbourhood_from_json, [{"pattern": ["a"], "upper": None}], r"neighbourhood\[0\]\.upper"),
    ],
)
def test_campos_mal_formados(lector, doc, campo):
    with pytest.raises(InputError, match=campo):
        lector(doc)


def test_proceso_con_numeros_mal_formados(nu_ab, rho_default):
    with pytest.raises(InputError, match=r"process\.probs"):
        process_from_json({"variant": "iid", "words": ["a", "b"], "probs": ["x", 0.5]}, nu_ab, rho_default)
    with pytest.raises(InputError, match=r"process\.transition"):
        process_from_json({"variant": "markov", "words": ["a", "b"], "transition": [["x"]]}, nu_ab, rho_default)
    with pytest.raises(InputError, match="process"):
        process_from_json("iid", nu_ab, rho_default)
