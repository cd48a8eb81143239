from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bimatrix_games, games
from gamevalue.congestion import induce_game
from gamevalue.equilibria import Completeness, NashValue
from gamevalue.game import Game
from gamevalue.registry import aumann, example2, gamma_x, pd
from gamevalue.values import (
    INF,
    ExtendedRational,
    analyze,
    enforcement_value,
    mediation_value,
    mediation_value_from,
)

F = Fraction
ZERO = Game((2, 2), [0] * 8)


def test_ratio_conventions():
    assert ExtendedRational.ratio(F(0), F(0)) == 1
    assert ExtendedRational.ratio(F(3), F(0)) == INF
    assert ExtendedRational.ratio(F(3), F(2)) == F(3, 2)


def test_extended_ordering_and_rendering():
    assert INF > ExtendedRational(F(10**9))
    assert ExtendedRational(F(1)) < F(3, 2)
    assert str(INF) == "inf" and INF.to_json() == {"inf": True}
    assert str(ExtendedRational(F(10, 9))) == "10/9"
    assert ExtendedRational(F(10, 9)).to_json() == "10/9"
    assert INF != F(1)
    with pytest.raises(TypeError):
        INF < 1.0


def test_aumann_values():
    r = analyze(aumann())
    assert (r.v_n.value, r.v_c, r.opt, r.mv.value, r.ev) == (6, F(20, 3), 8, F(10, 9), F(6, 5))
    assert r.mv.exact


def test_gamma_mediation_value():
    assert mediation_value(gamma_x(4)).value == F(16, 15)
    x = F(7)
    assert mediation_value(gamma_x(x)).value == 4 * x / (3 * (x + 1))


def test_zero_game():
    assert mediation_value(ZERO).value == 1
    assert enforcement_value(ZERO) == 1


def test_infinite_mediation_value_convention():
    mv = mediation_value_from(F(5), NashValue(F(0), Completeness.COMPLETE))
    assert mv.value == INF and mv.exact
    mv = mediation_value_from(F(0), NashValue(F(0), Completeness.COMPLETE))
    assert mv.value == 1


def test_example2_enforcement_value():
    assert enforcement_value(induce_game(example2())) == 1


def test_prisoners_dilemma():
    r = analyze(pd(10))
    assert (r.v_c, r.opt, r.ev) == (2, 20, 10)
    assert r.mv.value == 1


def test_single_profile():
    r = analyze(Game((1, 1), (3, 4)))
    assert r.mv.value == 1 and r.ev == 1


def test_indeterminate_mv_is_never_zero():
    mv = mediation_value_from(F(5), NashValue(None, Completeness.PURE_ONLY))
    assert mv.indeterminate and not mv.exact


@settings(max_examples=150, deadline=None)
@given(bimatrix_games())
def test_values_at_least_one(g):
    r = analyze(g)
    assert r.mv.value >= 1
    assert r.ev >= 1


@settings(max_examples=150, deadline=None)
@given(bimatrix_games())
def test_product_identity(g):
    r = analyze(g)
    if r.mv.value.infinite or r.ev.infinite or r.v_n.value == 0:
        return
    assert r.mv.value.value * r.ev.value * r.v_n.value == r.opt


@settings(max_examples=100, deadline=None)
@given(games(max_players=2), st.fractions(min_value=F(1, 5), max_value=7, max_denominator=5))
def test_scaling_invariance(g, c):
    a, b = analyze(g), analyze(g.scaled(c))
    assert a.mv.value == b.mv.value
    assert a.ev == b.ev
