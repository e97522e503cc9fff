import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quenched_ldp.core.entropy import (
    block_rel_entropy,
    entropy_rate,
    entropy_rate_interval,
    entropy_report,
    h_tau_given_k,
    identity_residual,
    log_nu_mean,
    log_rho_mean,
    psi_entropy_bracket,
    psi_entropy_brackets,
    psi_rel_entropy_bracket,
    rel_entropy,
    spec_rel_entropy,
)
from quenched_ldp.core.intervals import Divergent, Interval
from quenched_ldp.core.laws import (
    IIDLaw,
    LetterLaw,
    MarkovLaw,
    make_algebraic_renewal,
    mean_length,
    reference_law,
    truncate_process,
    truncated_image,
    uniform_renewal,
)
from quenched_ldp.errors import InputError

from conftest import leyes_iid, leyes_letras, leyes_markov

LOG2 = math.log(2.0)


# ─────────────────────────────────────────────
# Entropía relativa finita y tasas
# ─────────────────────────────────────────────
def test_rel_entropy_ejemplos():
    mu = {"a": 0.2, "b": 0.8}
    assert rel_entropy(mu, mu) == 0.0
    assert rel_entropy({"a": 1.0}, {k: 0.25 for k in "abcd"}) == pytest.approx(math.log(4))
    res = rel_entropy({"a": 0.5, "b": 0.5}, {"a": 1.0})
    assert isinstance(res, Divergent)
    assert "b" in res.reason


def test_rel_entropy_vectores():
    assert rel_entropy([0.5, 0.5], [0.25, 0.75]) == pytest.approx(0.5 * math.log(2) + 0.5 * math.log(2 / 3))
    assert isinstance(rel_entropy([0.5, 0.5], [1.0, 0.0]), Divergent)
    with pytest.raises(InputError):
        rel_entropy([0.5, 0.5], [1.0])


def test_tasas_de_entropia(nu_ab):
    assert entropy_rate(IIDLaw.from_mapping("ab", {"a": 0.5, "ab": 0.5})) == pytest.approx(LOG2)
    ciclo = MarkovLaw(nu_ab.alphabet, ("a", "bb"), np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert entropy_rate(ciclo) == pytest.approx(0.0, abs=1e-12)
    cuatro = IIDLaw.from_mapping("ab", {w: 0.25 for w in ("a", "b", "ab", "ba")})
    assert entropy_rate(cuatro) == pytest.approx(math.log(4))


def test_tasa_de_ley_imagen_es_intervalo(nu_ab):
    P = np.array([[0.5, 0.25, 0.25], [0.1, 0.1, 0.8], [1 / 3, 1 / 3, 1 / 3]])
    Q = MarkovLaw(nu_ab.alphabet, ("a", "ab", "b"), P)
    imagen = truncated_image(Q, 1)
    with pytest.raises(InputError):
        entropy_rate(imagen)
    h = entropy_rate_interval(imagen)
    # 0 ≤ H([Q]_tr) ≤ H(Q), y la cota inferior no la supera
    assert 0.0 <= h.lower <= h.upper
    assert h.lower <= entropy_rate(Q) + 1e-12


# ─────────────────────────────────────────────
# H(Q | q^{⊗ℕ})
# ─────────────────────────────────────────────
def test_entropia_especifica_ejemplos(ref_default, ref_12, q_zero_doble, nu_01):
    assert spec_rel_entropy(ref_default.as_process(), ref_default) == pytest.approx(0.0, abs=1e-12)
    delta_a = IIDLaw.from_mapping("ab", {"a": 1.0})
    assert spec_rel_entropy(delta_a, ref_12) == pytest.approx(math.log(4))
    ref01 = reference_law(uniform_renewal(2), nu_01)
    assert spec_rel_entropy(q_zero_doble, ref01) == pytest.approx(0.5 * LOG2 + 0.5 * math.log(4))


def test_entropia_especifica_fuera_del_soporte(ref_12):
    res = spec_rel_entropy(IIDLaw.from_mapping("ab", {"aaa": 1.0}), ref_12)
    assert isinstance(res, Divergent)


@settings(max_examples=20, deadline=None)
@given(leyes_markov())
def test_entropia_de_bloques_acota_a_la_especifica(Q):
    # (1/N)·h(Q_N|q^N) crece hacia H(Q|q^{⊗ℕ})
    ref = reference_law(make_algebraic_renewal(2.0, 3), LetterLaw.uniform("ab"))
    h = spec_rel_entropy(Q, ref)
    bloques = [block_rel_entropy(Q, ref, n) for n in (1, 2, 3, 4)]
    assert all(a <= b + 1e-9 for a, b in zip(bloques, bloques[1:]))
    assert bloques[-1] <= h + 1e-9


@settings(deadline=None)
@given(leyes_iid(max_len=3))
def test_bloques_iid(Q):
    ref = reference_law(make_algebraic_renewal(2.0, 3), LetterLaw.uniform("ab"))
    assert block_rel_entropy(Q, ref, 2) == pytest.approx(spec_rel_entropy(Q, ref), abs=1e-9)


# ─────────────────────────────────────────────
# H(Ψ_Q) y H(Ψ_Q | ν^{⊗ℕ})
# ─────────────────────────────────────────────
def test_bracket_de_palabra_periodica(nu_ab):
    Q = IIDLaw.from_mapping("ab", {"ab": 1.0})
    b = psi_rel_entropy_bracket(Q, nu_ab, 4)
    assert b.lower == pytest.approx(LOG2 * (1 - 1 / 4), abs=1e-4)
    assert b.upper == pytest.approx(LOG2, abs=1e-4)


def test_bracket_nulo_cuando_psi_es_nu(ref_default, nu_ab):
    b = psi_rel_entropy_bracket(ref_default.as_process(), nu_ab, 1)
    assert b.lower == pytest.approx(0.0, abs=1e-9)
    assert b.upper == pytest.approx(0.0, abs=1e-9)


def test_bracket_con_una_sola_letra():
    Q = IIDLaw.from_mapping("a", {"a": 0.5, "aa": 0.5})
    b = psi_entropy_bracket(Q, 3)
    assert (b.lower, b.upper) == (0.0, 0.0)
    rel = psi_rel_entropy_bracket(Q, LetterLaw.uniform("a"), 3)
    assert (rel.lower, rel.upper) == (0.0, 0.0)


def test_bracket_divergente_si_nu_no_cubre():
    # ν sin soporte completo (solo se construye así para la prueba)
    nu = LetterLaw.from_mapping("ab", {"a": 1.0}, full_support=False)
    res = psi_rel_entropy_bracket(IIDLaw.from_mapping("ab", {"ab": 1.0}), nu, 2)
    assert isinstance(res, Divergent)


@settings(max_examples=25, deadline=None)
@given(leyes_iid(), st.integers(2, 6))
def test_bracket_monotono_iid(Q, L):
    bs = psi_entropy_brackets(Q, L)
    for a, b in zip(bs, bs[1:]):
        assert b.lower >= a.lower - 1e-10
        assert b.upper <= a.upper + 1e-10
    assert all(b.lower <= b.upper + 1e-10 for b in bs)


@settings(max_examples=15, deadline=None)
@given(leyes_markov())
def test_bracket_monotono_markov(Q):
    bs = psi_entropy_brackets(Q, 6)
    for a, b in zip(bs, bs[1:]):
        assert b.lower >= a.lower - 1e-10
        assert b.upper <= a.upper + 1e-10


# ─────────────────────────────────────────────
# H_{τ|K} y la identidad
# ─────────────────────────────────────────────
def test_h_tau_dado_k_de_concatenacion_unaria(q_zero_doble):
    b = psi_entropy_bracket(q_zero_doble, 4)
    h = h_tau_given_k(q_zero_doble, b)
    assert h.lower == pytest.approx(LOG2, abs=1e-12)
    assert h.upper == pytest.approx(LOG2, abs=1e-12)


def test_h_tau_dado_k_con_largos_deterministas():
    Q = IIDLaw.from_mapping("ab", {"ab": 0.5, "ba": 0.5})
    h = h_tau_given_k(Q, psi_entropy_bracket(Q, 6))
    assert h.contains(0.0)


def test_residuo_en_la_referencia(ref_default):
    r = identity_residual(ref_default.as_process(), ref_default, 4)
    assert isinstance(r, Interval)
    assert r.contains(0.0, tol=1e-9)


def test_residuo_exacto_en_concatenacion_unaria(q_zero_doble, nu_01):
    ref = reference_law(uniform_renewal(2), nu_01)
    r = identity_residual(q_zero_doble, ref, 3)
    assert r.lower == pytest.approx(0.0, abs=1e-12)
    assert r.upper == pytest.approx(0.0, abs=1e-12)


def _chequear_identidad(Q, nu, L):
    ref = reference_law(make_algebraic_renewal(2.0, 4), nu)
    r = identity_residual(Q, ref, L)
    b = psi_entropy_bracket(Q, L)
    assert r.contains(0.0, tol=1e-9)
    assert r.width <= mean_length(Q) * b.width + 1e-9


@settings(max_examples=30, deadline=None)
@given(leyes_iid(), leyes_letras())
def test_identidad_iid(Q, nu):
    _chequear_identidad(Q, nu, 6)


@settings(max_examples=15, deadline=None)
@given(leyes_markov(), leyes_letras())
def test_identidad_markov(Q, nu):
    _chequear_identidad(Q, nu, 5)


def test_identidad_ley_imagen(nu_ab):
    P = np.array([[0.5, 0.25, 0.25], [0.1, 0.1, 0.8], [1 / 3, 1 / 3, 1 / 3]])
    Q = truncated_image(MarkovLaw(nu_ab.alphabet, ("a", "ab", "b"), P), 1)
    ref = reference_law(make_algebraic_renewal(2.0, 4), nu_ab)
    assert identity_residual(Q, ref, 4).contains(0.0, tol=1e-9)


@pytest.mark.slow
@settings(max_examples=50, deadline=None)
@given(leyes_iid(), leyes_letras())
def test_identidad_iid_profundidad_12(Q, nu):
    _chequear_identidad(Q, nu, 12)
    bs = psi_entropy_brackets(Q, 12)
    for a, b in zip(bs, bs[1:]):
        assert b.lower >= a.lower - 1e-10 and b.upper <= a.upper + 1e-10


@pytest.mark.slow
@settings(max_examples=20, deadline=None)
@given(leyes_markov(), leyes_letras())
def test_identidad_markov_profundidad_12(Q, nu):
    _chequear_identidad(Q, nu, 12)
    bs = psi_entropy_brackets(Q, 12)
    for a, b in zip(bs, bs[1:]):
        assert b.lower >= a.lower - 1e-10 and b.upper <= a.upper + 1e-10


# ─────────────────────────────────────────────
# Continuidad bajo truncación
# ─────────────────────────────────────────────
FAMILIA_LARGA = {"ab": 0.3, "aabba": 0.25, "bbbaaab": 0.2, "abbabbaabbab": 0.15, "b": 0.1}


def test_continuidad_bajo_truncacion(nu_ab):
    Q = IIDLaw.from_mapping("ab", FAMILIA_LARGA)
    ref = reference_law(make_algebraic_renewal(2.0, 12), nu_ab)
    h_Q = spec_rel_entropy(Q, ref)
    psi_Q = psi_rel_entropy_bracket(Q, nu_ab, 3)
    serie_h, serie_psi = [], []
    for tr in range(2, 13):
        T = truncate_process(Q, tr)
        serie_h.append(spec_rel_entropy(T, ref))
        b = psi_rel_entropy_bracket(T, nu_ab, 3)
        m = mean_length(T)
        serie_psi.append((m * b.lower, m * b.upper))
    assert all(math.isfinite(h) for h in serie_h)
    assert serie_h[-1] == pytest.approx(h_Q, abs=1e-9)
    m_Q = mean_length(Q)
    assert serie_psi[-1][0] == pytest.approx(m_Q * psi_Q.lower, abs=1e-9)
    assert serie_psi[-1][1] == pytest.approx(m_Q * psi_Q.upper, abs=1e-9)
    # más allá del largo máximo la truncación no cambia nada
    assert spec_rel_entropy(truncate_process(Q, 20), ref) == pytest.approx(h_Q, abs=1e-12)


# ─────────────────────────────────────────────
# Reporte
# ─────────────────────────────────────────────
def test_reporte(q_zero_doble, nu_01):
    ref = reference_law(uniform_renewal(2), nu_01)
    rep = entropy_report(q_zero_doble, ref, 3)
    assert rep.H_Q == pytest.approx(LOG2)
    assert rep.m_Q == pytest.approx(1.5)
    assert rep.E_log_nu == pytest.approx(-LOG2)
    assert rep.E_log_rho == pytest.approx(log_rho_mean(q_zero_doble, ref.rho))
    assert log_nu_mean(q_zero_doble, nu_01) == pytest.approx(-LOG2)
    doc = rep.to_json()
    assert doc["depth"] == 3
    assert set(doc["psi_bracket"]) == {"lower", "upper", "depth_used"}
