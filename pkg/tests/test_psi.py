import numpy as np
import pytest
from hypothesis import given, settings

from quenched_ldp.core.laws import (
    IIDLaw,
    LetterLaw,
    MarkovLaw,
    make_algebraic_renewal,
    reference_law,
    sample_path,
    sample_words,
)
from quenched_ldp.core.psi import (
    block_entropies,
    hidden_chain,
    prefix_chain,
    psi_marginal,
    psi_marginals,
    r_nu_test,
)
from quenched_ldp.errors import BudgetError, InputError
from quenched_ldp.utils.rng import stream

from conftest import leyes_iid, leyes_markov


def test_cadena_oculta_de_palabra_unica():
    Q = IIDLaw.from_mapping("ab", {"ab": 1.0})
    chain = hidden_chain(Q)
    assert chain.states == ((0, 0), (0, 1))
    np.testing.assert_allclose(chain.initial, [0.5, 0.5])
    assert chain.stationarity_error() < 1e-15


def test_marginal_de_palabra_periodica():
    Q = IIDLaw.from_mapping("ab", {"ab": 1.0})
    t = psi_marginal(Q, 2)
    assert t.as_dict() == {"aa": 0.0, "ab": 0.5, "ba": 0.5, "bb": 0.0}


@pytest.mark.parametrize("probs", [{"a": 0.5, "b": 0.5}, {"a": 0.3, "b": 0.7}])
def test_referencia_da_producto_de_nu(probs):
    nu = LetterLaw.from_mapping("ab", probs)
    Q = reference_law(make_algebraic_renewal(2.0, 4), nu).as_process()
    for t in psi_marginals(Q, 6):
        np.testing.assert_allclose(t.probs, nu.product_table(t.depth), atol=1e-10)


def test_concatenacion_de_una_sola_letra(q_zero_doble):
    t = psi_marginal(q_zero_doble, 3)
    assert t["000"] == pytest.approx(1.0)
    assert t.total() == pytest.approx(1.0)


def test_marginal_de_ley_imagen_truncada():
    Q = IIDLaw.from_mapping("ab", {"ab": 0.5, "ba": 0.5})
    t = psi_marginal(Q, 1, tr=1)
    # [Q]_1 = IID {"a": ½, "b": ½}
    np.testing.assert_allclose(t.probs, [0.5, 0.5])


def test_presupuesto_de_tabla():
    Q = IIDLaw.from_mapping("ab", {"ab": 1.0})
    with pytest.raises(BudgetError, match="presupuesto"):
        psi_marginal(Q, 30)


def test_profundidad_invalida():
    with pytest.raises(InputError):
        psi_marginal(IIDLaw.from_mapping("ab", {"ab": 1.0}), 0)


@settings(max_examples=30, deadline=None)
@given(leyes_iid())
def test_marginales_consistentes_y_estacionarias_iid(Q):
    tablas = psi_marginals(Q, 5)
    for corta, larga in zip(tablas, tablas[1:]):
        assert larga.total() == pytest.approx(1.0)
        np.testing.assert_allclose(larga.project_prefix().probs, corta.probs, atol=1e-12)
        np.testing.assert_allclose(larga.project_suffix().probs, corta.probs, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(leyes_markov())
def test_marginales_consistentes_y_estacionarias_markov(Q):
    tablas = psi_marginals(Q, 4)
    for corta, larga in zip(tablas, tablas[1:]):
        np.testing.assert_allclose(larga.project_prefix().probs, corta.probs, atol=1e-10)
        np.testing.assert_allclose(larga.project_suffix().probs, corta.probs, atol=1e-10)


@settings(max_examples=20, deadline=None)
@given(leyes_markov())
def test_cadena_de_prefijos_emite_lo_mismo(Q):
    # ambas cadenas ocultas representan el mismo Ψ_Q
    H1, _ = block_entropies(hidden_chain(Q), 4)
    H2, _ = block_entropies(prefix_chain(Q), 4)
    np.testing.assert_allclose(H1, H2, atol=1e-10)
    assert prefix_chain(Q).stationarity_error() < 1e-10


def test_r_nu_ejemplos(ref_default, nu_ab):
    assert r_nu_test(ref_default.as_process(), nu_ab, 4).member

    Q = IIDLaw.from_mapping("ab", {"ab": 1.0})
    res = r_nu_test(Q, nu_ab, 2)
    assert not res
    assert res.max_deviation == pytest.approx(0.25)

    uno = LetterLaw.uniform("a")
    Q1 = IIDLaw.from_mapping("a", {"a": 0.4, "aaa": 0.6})
    assert r_nu_test(Q1, uno, 5).member


def test_r_nu_exige_mismo_alfabeto(nu_01):
    with pytest.raises(InputError):
        r_nu_test(IIDLaw.from_mapping("ab", {"ab": 1.0}), nu_01, 2)


def test_r_nu_markov_con_letras_independientes(nu_ab):
    # el largo sigue una cadena de Markov pero las letras son ν-aleatorias
    ws = ("a", "b", "aa", "ab", "ba", "bb")
    P = np.zeros((6, 6))
    P[:2, 2:] = 0.25
    P[2:, :2] = 0.5
    Q = MarkovLaw(nu_ab.alphabet, ws, P)
    assert r_nu_test(Q, nu_ab, 5).member


# ─────────────────────────────────────────────
# Ψ_Q contra frecuencias muestreadas
# ─────────────────────────────────────────────
def _frecuencias(x, simbolos, L):
    """Frecuencias de las ventanas de L letras de x, en orden lexicográfico."""
    lut = np.zeros(256, dtype=np.int64)
    for i, c in enumerate(simbolos):
        lut[ord(c)] = i
    codigos = lut[np.frombuffer(x.encode("ascii"), dtype=np.uint8)]
    base, n = len(simbolos), codigos.size - L + 1
    ventanas = np.zeros(n, dtype=np.int64)
    for j in range(L):
        ventanas = ventanas * base + codigos[j:j + n]
    return np.bincount(ventanas, minlength=base ** L) / n


@pytest.mark.parametrize(
    "n_palabras, tol",
    [(70_000, 1e-2), pytest.param(700_000, 3e-3, marks=pytest.mark.slow)],
)
def test_psi_de_referencia_contra_sample_path(n_palabras, tol):
    nu = LetterLaw.from_mapping("ab", {"a": 0.7, "b": 0.3})
    rho = make_algebraic_renewal(2.0, 4)
    x, _, _ = sample_path(nu, rho, None, n_palabras, 20090417)
    if n_palabras >= 700_000:
        assert len(x) >= 10 ** 6
    t = psi_marginal(reference_law(rho, nu).as_process(), 3)
    np.testing.assert_allclose(_frecuencias(x, "ab", 3), t.probs, atol=tol)


@pytest.mark.parametrize(
    "n_palabras, tol",
    [(50_000, 1.5e-2), pytest.param(500_000, 3e-3, marks=pytest.mark.slow)],
)
def test_psi_de_iid_contra_concatenacion(n_palabras, tol):
    Q = IIDLaw.from_mapping("ab", {"ab": 0.5, "aab": 0.3, "b": 0.2})
    x = "".join(sample_words(Q, n_palabras, stream(20090417, 0)))
    t = psi_marginal(Q, 3)
    # 'abb' solo surge al concatenar 'ab' con 'b'
    assert t["abb"] > 0
    np.testing.assert_allclose(_frecuencias(x, "ab", 3), t.probs, atol=tol)
