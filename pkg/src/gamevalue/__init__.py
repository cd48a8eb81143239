"""Exact mediation and enforcement values of finite strategic-form games."""

from .congestion import CongestionForm, induce_game
from .equilibria import (
    Completeness,
    DualCertificate,
    NashSet,
    best_regret,
    is_correlated_equilibrium,
    max_surplus_ce,
    pure_nash,
    regret_table,
    support_enumeration_2p,
    v_n,
    verify_dual_certificate,
)
from .game import (
    CorrelatedStrategy,
    Dominance,
    Game,
    MixedProfile,
    dominance,
    expected_payoff,
    has_strictly_dominant_strategy,
    opt,
    product_distribution,
    surplus,
)
from .values import ExtendedRational, analyze, enforcement_value, mediation_value

__all__ = [name for name in dir() if not name.startswith("_")]
