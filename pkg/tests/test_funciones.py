import math
import threading
import time

import numpy as np
import pytest
from hypothesis import given, strategies as st

from quenched_ldp.errors import InputError
from quenched_ldp.utils.funciones import log_add, log_sum, ordered_map, parse_range, shannon, xlogx
from quenched_ldp.utils.rng import stream


# ─────────────────────────────────────────────
# Rangos
# ─────────────────────────────────────────────
@pytest.mark.parametrize(
    "texto, esperado",
    [
        (7, [7]),
        ("1..4", [1, 2, 3, 4]),
        ("10..30:5", [10, 15, 20, 25, 30]),
        ("6, 8,10", [6, 8, 10]),
        ([2, 5], [2, 5]),
        (" 3..3 ", [3]),
    ],
)
def test_parse_range(texto, esperado):
    assert parse_range(texto) == esperado


@pytest.mark.parametrize("texto", ["5..1", "a..b", "1..4:0", "3,2", "", "1;2"])
def test_parse_range_invalido(texto):
    with pytest.raises(InputError, match="n:"):
        parse_range(texto, "n")


# ─────────────────────────────────────────────
# Entropías y dominio logarítmico
# ─────────────────────────────────────────────
def test_xlogx_cero():
    np.testing.assert_allclose(xlogx([0.0, 1.0, 0.5]), [0.0, 0.0, 0.5 * math.log(0.5)])
    assert shannon([0.25] * 4) == pytest.approx(math.log(4))
    assert shannon([1.0, 0.0]) == 0.0


def test_log_add_con_infinitos():
    assert log_add(-math.inf, 1.5) == 1.5
    assert log_add(2.0, -math.inf) == 2.0
    assert log_sum([]) == -math.inf
    assert log_sum([-math.inf, -math.inf]) == -math.inf


@given(st.lists(st.floats(min_value=-700, max_value=700), min_size=1, max_size=20))
def test_log_sum_coincide_con_log_add(xs):
    acumulado = -math.inf
    for x in xs:
        acumulado = log_add(acumulado, x)
    assert log_sum(xs) == pytest.approx(acumulado, rel=1e-12, abs=1e-12)


def test_log_sum_sin_desborde():
    assert log_sum([-1000.0, -1000.0]) == pytest.approx(-1000.0 + math.log(2))


# ─────────────────────────────────────────────
# Mapa paralelo y flujos aleatorios
# ─────────────────────────────────────────────
def test_ordered_map_respeta_el_orden():
    def lento(i):
        time.sleep(0.002 * (10 - i))
        return i * i, threading.get_ident()

    res = ordered_map(lento, list(range(10)), threads=4)
    assert [v for v, _ in res] == [i * i for i in range(10)]


def test_ordered_map_propaga_errores():
    def falla(i):
        if i == 3:
            raise InputError("x: malo")
        return i

    with pytest.raises(InputError):
        ordered_map(falla, list(range(6)), threads=3)


def test_flujos_reproducibles_e_independientes():
    a = stream(1, 0, 5).random(8)
    b = stream(1, 0, 5).random(8)
    c = stream(1, 0, 6).random(8)
    d = stream(2, 0, 5).random(8)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_flujo_con_semilla_grande():
    assert stream(2 ** 64 - 1).integers(0, 10) in range(10)
