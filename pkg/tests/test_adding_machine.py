from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from spiraltower import adding_machine as am
from spiraltower.errors import InvalidModulus, NotDivisor


def test_residue_arithmetic():
    r = am.residue(6, 11)
    assert r == am.Residue(6, 5)
    assert am.translate(r) == am.Residue(6, 0)
    assert r + 4 == am.Residue(6, 3)
    assert am.project(r, 3) == am.Residue(3, 2)


def test_errors():
    with pytest.raises(InvalidModulus):
        am.residue(0, 1)
    with pytest.raises(NotDivisor):
        am.project(am.Residue(6, 1), 4)
    with pytest.raises(ValueError):
        am.Residue(5, 7)


def test_tower_render_and_validation():
    t = am.tower_of(7, 4)
    assert t.render() == "0/1!, 1/2!, 1/3!, 7/4!"
    assert t.translate() == am.tower_of(8, 4)
    with pytest.raises(ValueError):
        am.FactorialTower((am.Residue(1, 0), am.Residue(2, 1), am.Residue(6, 2)))


def test_big_moduli_are_exact():
    M = factorial(25)
    r = am.residue(M, -1)
    assert r.value == M - 1
    assert am.translate(r).value == 0


@given(st.integers(1, 7), st.integers(-10**6, 10**6), st.integers(1, 7))
def test_translation_commutes_with_projection(k, x, j):
    d = factorial(min(j, k))
    r = am.residue(factorial(k), x)
    assert am.project(am.translate(r), d) == am.translate(am.project(r, d))
    assert am.project(r, d) == am.residue(d, x)
