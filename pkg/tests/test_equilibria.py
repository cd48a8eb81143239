import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import bimatrix_games, games, mixed_profiles
from gamevalue.congestion import enumerate_A, induce_game
from gamevalue.equilibria import (
    Completeness,
    DualCertificate,
    best_regret,
    ce_constraint_keys,
    is_correlated_equilibrium,
    is_nash,
    max_surplus_ce,
    nash_equilibria,
    pure_nash,
    regret_table,
    support_enumeration_2p,
    v_c,
    v_n,
    verify_dual_certificate,
)
from gamevalue.game import CorrelatedStrategy, Game, GameError, MixedProfile, opt, product_distribution, surplus
from gamevalue.registry import aumann, example1, example2, gamma_x, pd

F = Fraction
HALF = MixedProfile.of([["1/2", "1/2"], ["1/2", "1/2"]])
UNIFORM_THREE = CorrelatedStrategy.uniform([(0, 0), (1, 0), (1, 1)])


# -- correlated equilibria ---------------------------------------------------


def test_regret_indifference_in_uniform_three():
    table = regret_table(aumann(), UNIFORM_THREE)
    # row player told a2 is indifferent to a1
    assert table[0, 1, 0] == 0
    assert all(v <= 0 for v in table.values())


def test_regret_point_mass_on_pure_nash():
    assert all(v <= 0 for v in regret_table(aumann(), CorrelatedStrategy.point((0, 0))).values())


def test_regret_uniform_four_is_all_zero():
    # uniform over all four profiles is the product of the mixed equilibrium,
    # so no recommendation leaves a strict gain (hand sums, row told a1:
    # 1/4 * ((4 - 5) + (1 - 0)) = 0)
    g = aumann()
    table = regret_table(g, CorrelatedStrategy.uniform(g.profiles()))
    assert set(table.values()) == {0}
    assert is_correlated_equilibrium(g, CorrelatedStrategy.uniform(g.profiles()))


def test_regret_profitable_deviation():
    g = aumann()
    mu = CorrelatedStrategy.uniform([(0, 0), (0, 1), (1, 0)])
    table = regret_table(g, mu)
    # row told a1 (b1, b2 equally): switching gives 1/3 * ((4 - 5) + (1 - 0)) = 0
    assert table[0, 0, 1] == 0
    # column told b2 (only at a1): switching to b1 gives 1/3 * (1 - 0)
    assert table[1, 1, 0] == F(1, 3)
    assert not is_correlated_equilibrium(g, mu)


def test_regret_table_keys():
    g = Game((3, 2), range(12))
    mu = CorrelatedStrategy.point((0, 0))
    assert sorted(regret_table(g, mu)) == sorted(ce_constraint_keys(g))
    assert len(ce_constraint_keys(g)) == 3 * 2 + 2 * 1


def test_uniform_three_is_ce():
    assert is_correlated_equilibrium(aumann(), UNIFORM_THREE)


def _xi(pi):
    form = example2()
    return induce_game(form), CorrelatedStrategy.uniform(enumerate_A(form, pi))


def test_example2_xi2_is_ce():
    g, xi2 = _xi((1, 5))
    assert is_correlated_equilibrium(g, xi2)
    assert surplus(g, xi2) == 24 == opt(g)


def test_example2_xi1_is_not_ce():
    g, xi1 = _xi((3, 3))
    assert not is_correlated_equilibrium(g, xi1)


def test_max_surplus_ce_values():
    assert v_c(aumann()) == F(20, 3)
    assert v_c(gamma_x(4)) == F(16, 3)
    single = Game((1, 1), (3, 2))
    res = max_surplus_ce(single)
    assert res.value == 5
    assert res.mu == CorrelatedStrategy.point((0, 0))


def test_max_surplus_ce_outputs_are_consistent():
    for g in (aumann(), gamma_x(4), pd(3), induce_game(example1())):
        res = max_surplus_ce(g)
        assert is_correlated_equilibrium(g, res.mu)
        assert surplus(g, res.mu) == res.value
        assert res.certificate.beta == res.value
        assert verify_dual_certificate(g, res.certificate)


def _zero_alpha(g, beta):
    return DualCertificate({(i, t, s): F(0) for i, s, t in ce_constraint_keys(g)}, F(beta))


def test_trivial_certificates():
    g = aumann()
    assert verify_dual_certificate(g, _zero_alpha(g, opt(g)))
    # (a2, b2) is the only profile with surplus 8
    assert not verify_dual_certificate(g, _zero_alpha(g, opt(g) - 1))


def test_certificate_index_mismatch():
    with pytest.raises(GameError):
        verify_dual_certificate(aumann(), DualCertificate({}, F(8)))


def test_negative_alpha_rejected():
    g = aumann()
    cert = _zero_alpha(g, 100)
    alpha = dict(cert.alpha)
    alpha[0, 1, 0] = F(-1)
    assert not verify_dual_certificate(g, DualCertificate(alpha, F(100)))


# -- Nash --------------------------------------------------------------------


def test_pure_nash():
    assert pure_nash(aumann()) == [(0, 0), (1, 1)]
    assert pure_nash(pd(4)) == [(1, 1)]
    eq = pure_nash(induce_game(example1()))
    assert sorted(eq) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_support_enumeration_aumann():
    ns = support_enumeration_2p(aumann())
    assert ns.completeness is Completeness.COMPLETE and not ns.degenerate
    found = {p.strategies: s for p, s in ns.equilibria}
    assert len(found) == 3
    assert found[HALF.strategies] == 5


def test_support_enumeration_gamma4():
    ns = support_enumeration_2p(gamma_x(4))
    mixed = [s for p, s in ns.equilibria if len(p.support(0)) == 2]
    assert mixed == [4]


def test_support_enumeration_constant_game_is_degenerate():
    g = Game((2, 2), [1] * 8)
    ns = support_enumeration_2p(g)
    assert ns.degenerate
    assert len(ns.equilibria) == 4  # the pure profiles are the extreme points
    assert v_n(g).value == 2


def test_support_enumeration_needs_two_players():
    with pytest.raises(GameError):
        support_enumeration_2p(induce_game(example1()))


def test_best_regret_examples():
    g = aumann()
    assert best_regret(g, MixedProfile.pure(g, (0, 0))) == 0
    assert best_regret(g, HALF) == 0
    assert best_regret(g, MixedProfile.pure(g, (0, 1))) == 1


def test_best_regret_example2_all_on_one_facility():
    # each player earns w(6) = 3; leaving for the empty facility pays w(1) = 3/2
    form = example2()
    g = induce_game(form)
    oracle = F(0)
    prof = (0,) * 6
    for i in range(6):
        moved = prof[:i] + (1,) + prof[i + 1 :]
        oracle = max(oracle, g.payoff(i, moved) - g.payoff(i, prof))
    assert oracle == 0
    assert best_regret(g, MixedProfile.pure(g, prof)) == oracle


def test_v_n_values():
    vn = v_n(aumann())
    assert (vn.value, vn.completeness) == (6, Completeness.COMPLETE)
    assert v_n(gamma_x(4)).value == 5
    vn = v_n(induce_game(example1()))
    assert (vn.value, vn.completeness) == (32, Completeness.PURE_ONLY)
    assert not vn.exact


def test_v_n_candidates_are_verified():
    g = induce_game(example1())
    # playing f with probability q earns 24(1 - q) against two such players
    symmetric = MixedProfile.of([["2/3", "1/3"]] * 3)
    uniform = MixedProfile.of([["1/2", "1/2"]] * 3)
    ns = nash_equilibria(g, [symmetric, uniform])
    assert ns.completeness is Completeness.PARTIAL
    found = {p.strategies: s for p, s in ns.equilibria}
    assert found[symmetric.strategies] == 24
    assert uniform.strategies not in found
    assert v_n(g, [symmetric]).value == 32
    assert nash_equilibria(g, [uniform]).completeness is Completeness.PURE_ONLY


def test_one_player_is_complete():
    vn = v_n(Game((3,), (1, 7, 7)))
    assert (vn.value, vn.completeness) == (7, Completeness.COMPLETE)


# -- properties --------------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(bimatrix_games())
def test_nash_subset_of_ce_and_sandwich(g):
    vc = v_c(g)
    ns = nash_equilibria(g)
    assert ns.equilibria
    for p, s in ns.equilibria:
        assert best_regret(g, p) == 0
        assert is_correlated_equilibrium(g, product_distribution(g, p))
        assert s <= vc
    assert v_n(g).value <= vc <= opt(g)


@settings(max_examples=100, deadline=None)
@given(games(max_players=3, max_strategies=2))
def test_certificate_duality(g):
    res = max_surplus_ce(g)
    assert res.certificate.beta == res.value
    assert verify_dual_certificate(g, res.certificate)
    for prof in pure_nash(g):
        assert g.profile_surplus(prof) <= res.value


@settings(max_examples=300, deadline=None)
@given(bimatrix_games(2, 2))
def test_two_by_two_ratio_bound(g):
    vn = v_n(g)
    assert vn.exact
    assert v_c(g) <= F(4, 3) * vn.value


@settings(max_examples=200, deadline=None)
@given(st.data())
def test_regret_consistency(data):
    g = data.draw(games(max_players=3, max_strategies=2))
    p = data.draw(mixed_profiles(g))
    assert is_correlated_equilibrium(g, product_distribution(g, p)) == (best_regret(g, p) == 0)


def _best_response_oracle(g):
    """Extreme equilibria on a grid: every profile with probabilities in {k/6}.

    Coarse but independent of the solver; any grid equilibrium's surplus is
    a lower bound for v_N.
    """
    grid = [F(k, 6) for k in range(7)]
    best = None
    m1, m2 = g.strategy_counts
    for x in itertools.product(grid, repeat=m1):
        if sum(x) != 1:
            continue
        for y in itertools.product(grid, repeat=m2):
            if sum(y) != 1:
                continue
            p = MixedProfile((x, y))
            if best_regret(g, p) == 0:
                s = surplus(g, product_distribution(g, p))
                best = s if best is None else max(best, s)
    return best


@settings(max_examples=60, deadline=None)
@given(bimatrix_games(values=st.integers(0, 4)))
def test_v_n_dominates_grid_equilibria(g):
    lower = _best_response_oracle(g)
    assert lower is None or v_n(g).value >= lower


@settings(max_examples=60, deadline=None)
@given(bimatrix_games(values=st.integers(0, 3)))
def test_degenerate_games_still_give_equilibria(g):
    ns = support_enumeration_2p(g)
    assert ns.equilibria
    assert ns.completeness is Completeness.COMPLETE
