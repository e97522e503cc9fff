from fractions import Fraction

import numpy as np
import pytest

from quenched_ldp.core.tables import MarginalTable
from quenched_ldp.errors import InputError


def test_tabla_de_letras_en_orden_lexicografico():
    t = MarginalTable(2, np.array([0.1, 0.2, 0.3, 0.4]), symbols="ab")
    assert t.keys == ("aa", "ab", "ba", "bb")
    assert t["ba"] == pytest.approx(0.3)
    assert t.code("bb") == 3


def test_proyecciones_de_tabla_de_letras():
    t = MarginalTable(2, np.array([0.1, 0.2, 0.3, 0.4]), symbols="ab")
    np.testing.assert_allclose(t.project_prefix().probs, [0.3, 0.7])
    np.testing.assert_allclose(t.project_suffix().probs, [0.4, 0.6])


def test_tabla_de_patrones():
    t = MarginalTable.from_mapping(2, {"b,a": 0.25, "a,b": 0.75})
    assert t.keys == ("a,b", "b,a")
    assert t.get("a,a") == 0.0
    assert t.project_prefix().as_dict() == {"a": 0.75, "b": 0.25}


def test_conteos_solo_en_tablas_empiricas():
    t = MarginalTable.from_counts(1, {"b": 1, "a": 3}, 4)
    assert t.counts == {"a": 3, "b": 1} and t.total_count == 4
    assert t.exact_fractions() == {"a": Fraction(3, 4), "b": Fraction(1, 4)}
    exacta = MarginalTable.from_mapping(1, {"a": 0.75, "b": 0.25})
    assert exacta.counts is None and exacta.total_count is None
    assert exacta.exact_fractions() is None


def test_tamano_incompatible():
    with pytest.raises(InputError):
        MarginalTable(2, np.ones(3) / 3, symbols="ab")


def test_claves_o_simbolos_pero_no_ambos():
    with pytest.raises(InputError):
        MarginalTable(1, np.ones(2) / 2, keys=("a", "b"), symbols="ab")


def test_to_frame():
    df = MarginalTable(1, np.array([0.5, 0.5]), symbols="ab").to_frame()
    assert df.columns == ["pattern", "probability"]
    assert df["pattern"].to_list() == ["a", "b"]
