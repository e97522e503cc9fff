import numpy as np
import pytest
from hypothesis import strategies as st

from quenched_ldp.core.laws import (
    IIDLaw,
    LetterLaw,
    MarkovLaw,
    make_algebraic_renewal,
    reference_law,
    uniform_renewal,
)


# ─────────────────────────────────────────────
# Leyes de uso frecuente
# ─────────────────────────────────────────────
@pytest.fixture
def nu_ab() -> LetterLaw:
    return LetterLaw.uniform("ab")


@pytest.fixture
def nu_01() -> LetterLaw:
    return LetterLaw.uniform("01")


@pytest.fixture
def rho_default():
    return make_algebraic_renewal(2.0, 4)


@pytest.fixture
def rho_12():
    """ρ uniforme sobre {1, 2}."""
    return uniform_renewal(2)


@pytest.fixture
def ref_default(rho_default, nu_ab):
    return reference_law(rho_default, nu_ab)


@pytest.fixture
def ref_12(rho_12, nu_ab):
    return reference_law(rho_12, nu_ab)


@pytest.fixture
def q_zero_doble(nu_01):
    """IID {"0": ½, "00": ½} sobre E = {0, 1}."""
    return IIDLaw.from_mapping(nu_01.alphabet, {"0": 0.5, "00": 0.5})


# ─────────────────────────────────────────────
# Estrategias de hypothesis
# ─────────────────────────────────────────────
def palabras(alfabeto: str = "ab", max_len: int = 4):
    return st.text(alphabet=alfabeto, min_size=1, max_size=max_len)


def oraciones(alfabeto: str = "ab", max_words: int = 8):
    return st.lists(palabras(alfabeto), min_size=1, max_size=max_words).map(tuple)


@st.composite
def cortes(draw, max_len: int = 30):
    """(x, puntos de corte) con x lo bastante largo."""
    incrementos = draw(st.lists(st.integers(1, 4), min_size=1, max_size=8))
    puntos = tuple(np.cumsum(incrementos).tolist())
    x = draw(st.text(alphabet="ab", min_size=puntos[-1], max_size=puntos[-1] + 5))
    return x, puntos


def _masas(draw, n: int) -> np.ndarray:
    w = np.array(draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)))
    return w / w.sum()


@st.composite
def leyes_iid(draw, alfabeto: str = "ab", max_words: int = 6, max_len: int = 4):
    ws = draw(st.lists(palabras(alfabeto, max_len), min_size=1, max_size=max_words, unique=True))
    return IIDLaw(LetterLaw.uniform(alfabeto).alphabet, tuple(ws), _masas(draw, len(ws)))


@st.composite
def leyes_markov(draw, alfabeto: str = "ab", max_words: int = 5, max_len: int = 3):
    ws = draw(st.lists(palabras(alfabeto, max_len), min_size=1, max_size=max_words, unique=True))
    P = np.stack([_masas(draw, len(ws)) for _ in ws])
    return MarkovLaw(LetterLaw.uniform(alfabeto).alphabet, tuple(ws), P)


@st.composite
def leyes_letras(draw, alfabeto: str = "ab"):
    return LetterLaw(LetterLaw.uniform(alfabeto).alphabet, _masas(draw, len(alfabeto)))
