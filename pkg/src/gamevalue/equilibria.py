"""Correlated and Nash equilibria.

The best correlated equilibrium comes from the LP whose feasible set is the
set of correlated equilibria; its optimal dual is returned as a certificate
that can be rechecked without trusting the solver.  Nash equilibria are
enumerated exactly for two players and by pure-profile scanning (plus
caller-supplied candidates) otherwise.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .game import (
    CorrelatedStrategy,
    Game,
    GameError,
    MixedProfile,
    Profile,
    product_distribution,
    surplus,
)
from .lp import EQ, LE, LinearProgram, check_point, solve, solve_linear_system

RegretKey = tuple[int, int, int]


class Completeness(enum.Enum):
    """How much of the Nash set an enumeration is known to cover.

    ``COMPLETE``: every extreme equilibrium was found, so the best surplus is
    exact.  ``PURE_ONLY``: only pure profiles were scanned.  ``PARTIAL``:
    pure profiles plus verified candidates.  The last two give lower bounds.
    """

    COMPLETE = "complete"
    PURE_ONLY = "pure-only"
    PARTIAL = "partial"


def regret_table(game: Game, mu: CorrelatedStrategy) -> dict[RegretKey, Fraction]:
    """Expected gain from deviating, keyed ``(player, recommended, deviation)``.

    Entry ``(i, s, t)`` is ``sum over s^-i of mu(s^-i, s) * (u_i(s^-i, t) - u_i(s^-i, s))``.
    Every entry is <= 0 exactly when ``mu`` is a correlated equilibrium.
    """
    mu.check_game(game)
    table = {
        (i, s, t): Fraction(0)
        for i, m in enumerate(game.strategy_counts)
        for s in range(m)
        for t in range(m)
        if s != t
    }
    for prof, w in mu.items():
        for i, m in enumerate(game.strategy_counts):
            s = prof[i]
            here = game.payoff(i, prof)
            for t in range(m):
                if t != s:
                    table[i, s, t] += w * (game.payoff(i, game.deviate(prof, i, t)) - here)
    return table


def is_correlated_equilibrium(game: Game, mu: CorrelatedStrategy) -> bool:
    return all(v <= 0 for v in regret_table(game, mu).values())


def ce_constraint_keys(game: Game) -> list[RegretKey]:
    return [
        (i, s, t)
        for i, m in enumerate(game.strategy_counts)
        for s in range(m)
        for t in range(m)
        if s != t
    ]


def ce_program(game: Game) -> LinearProgram:
    """The LP over profile weights whose feasible set is the set of CE.

    Variable ``k`` is the weight of ``game.profile_at(k)``.  Row 0 is the
    normalization; row ``1 + r`` is the incentive constraint for
    ``ce_constraint_keys(game)[r]``.
    """
    size = game.size
    rows = [([1] * size, EQ, 1)]
    for i, s, t in ce_constraint_keys(game):
        coeffs = [Fraction(0)] * size
        for k in range(size):
            prof = game.profile_at(k)
            if prof[i] == s:
                coeffs[k] = game.payoff(i, game.deviate(prof, i, t)) - game.payoff(i, prof)
        rows.append((coeffs, LE, 0))
    return LinearProgram.build(game.surplus_table, rows)


@dataclass(frozen=True)
class DualCertificate:
    """A feasible point of the dual of the CE program.

    ``alpha[(i, t, s)]`` is the multiplier on player ``i``'s constraint
    "recommended ``s``, do not switch to ``t``"; ``beta`` is the multiplier on
    the normalization and bounds the best CE surplus from above.
    """

    alpha: Mapping[tuple[int, int, int], Fraction]
    beta: Fraction


def verify_dual_certificate(game: Game, cert: DualCertificate) -> bool:
    """Recheck every dual constraint exactly, independent of the LP code."""
    expected = {(i, t, s) for i, s, t in ce_constraint_keys(game)}
    if set(cert.alpha) != expected:
        raise GameError("certificate multipliers do not match the game's strategy sets")
    if any(a < 0 for a in cert.alpha.values()):
        return False
    for prof in game.profiles():
        lhs = cert.beta
        for i, m in enumerate(game.strategy_counts):
            s = prof[i]
            here = game.payoff(i, prof)
            for t in range(m):
                if t != s:
                    a = cert.alpha[i, t, s]
                    if a:
                        lhs += a * (game.payoff(i, game.deviate(prof, i, t)) - here)
        if lhs < game.profile_surplus(prof):
            return False
    return True


@dataclass(frozen=True)
class CEResult:
    value: Fraction
    mu: CorrelatedStrategy
    certificate: DualCertificate


def max_surplus_ce(game: Game) -> CEResult:
    """Best correlated equilibrium surplus with a witness and a dual certificate."""
    lp = ce_program(game)
    out = solve(lp)
    if not out.optimal:
        raise ArithmeticError(f"CE program reported {out.status.value}; it is always feasible and bounded")
    assert check_point(lp, out.primal)
    mu = CorrelatedStrategy({game.profile_at(k): w for k, w in enumerate(out.primal) if w})
    keys = ce_constraint_keys(game)
    alpha = {(i, t, s): out.dual[1 + r] for r, (i, s, t) in enumerate(keys)}
    return CEResult(out.objective_value, mu, DualCertificate(alpha, out.dual[0]))


def v_c(game: Game) -> Fraction:
    return max_surplus_ce(game).value


# -- Nash ------------------------------------------------------------------


def deviation_payoffs(game: Game, p: MixedProfile, i: int) -> list[Fraction]:
    """Expected payoff of each pure strategy of ``i`` against ``p^-i``."""
    p.check_shape(game)
    m = game.strategy_counts[i]
    out = [Fraction(0)] * m
    supports = [p.support(j) if j != i else (0,) for j in range(game.n_players)]
    for rest in itertools.product(*supports):
        w = Fraction(1)
        for j, sj in enumerate(rest):
            if j != i:
                w *= p.strategies[j][sj]
        for t in range(m):
            prof = rest[:i] + (t,) + rest[i + 1 :]
            out[t] += w * game.payoff(i, prof)
    return out


def best_regret(game: Game, p: MixedProfile) -> Fraction:
    """Largest gain any player gets from a unilateral pure deviation; 0 iff Nash."""
    worst = Fraction(0)
    for i in range(game.n_players):
        dev = deviation_payoffs(game, p, i)
        current = sum((x * d for x, d in zip(p.strategies[i], dev)), Fraction(0))
        worst = max(worst, max(dev) - current)
    return worst


def is_nash(game: Game, p: MixedProfile) -> bool:
    return best_regret(game, p) == 0


def pure_nash(game: Game) -> list[Profile]:
    out = []
    for prof in game.profiles():
        ok = True
        for i, m in enumerate(game.strategy_counts):
            here = game.payoff(i, prof)
            if any(game.payoff(i, game.deviate(prof, i, t)) > here for t in range(m)):
                ok = False
                break
        if ok:
            out.append(prof)
    return out


def mixed_surplus(game: Game, p: MixedProfile) -> Fraction:
    return surplus(game, product_distribution(game, p))


@dataclass(frozen=True)
class NashSet:
    equilibria: tuple[tuple[MixedProfile, Fraction], ...]
    completeness: Completeness
    degenerate: bool = False

    @property
    def best(self) -> tuple[MixedProfile, Fraction] | None:
        if not self.equilibria:
            return None
        return max(self.equilibria, key=lambda e: e[1])


def _nonempty_subsets(m: int):
    for k in range(1, m + 1):
        yield from itertools.combinations(range(m), k)


def _indifference(mat, own: Sequence[int], other: Sequence[int], n_other: int):
    """Mix over ``other`` making every row in ``own`` earn the same value.

    ``mat[a][b]`` is the payoff to the ``own`` player.  Returns
    ``(mix, value, nullity)`` or ``None`` if no such mix exists.
    """
    k = len(other)
    rows = [[mat[a][b] for b in other] + [Fraction(-1)] for a in own]
    rows.append([Fraction(1)] * k + [Fraction(0)])
    rhs = [Fraction(0)] * len(own) + [Fraction(1)]
    sol = solve_linear_system(rows, rhs)
    if sol is None:
        return None
    x, nullity = sol
    mix = [Fraction(0)] * n_other
    for b, v in zip(other, x[:k]):
        mix[b] = v
    return mix, x[k], nullity


def _payoff_matrices(game: Game):
    m1, m2 = game.strategy_counts
    a = [[game.payoff(0, (r, c)) for c in range(m2)] for r in range(m1)]
    b = [[game.payoff(1, (r, c)) for c in range(m2)] for r in range(m1)]
    return a, b


def _dedupe(found):
    seen = {}
    for p in found:
        seen.setdefault(p.strategies, p)
    return [seen[k] for k in sorted(seen)]


def support_enumeration_2p(game: Game) -> NashSet:
    """All Nash equilibria of a two-player game.

    Every support pair is tried; the indifference systems are solved exactly.
    If any system has a non-unique solution the game is degenerate: the
    best-response polytopes are then vertex-enumerated, which yields every
    extreme equilibrium, and ``degenerate`` is set.
    """
    if game.n_players != 2:
        raise GameError("support enumeration needs exactly two players")
    m1, m2 = game.strategy_counts
    a, b = _payoff_matrices(game)
    bt = [list(col) for col in zip(*b)]
    found = []
    degenerate = False
    for rows in _nonempty_subsets(m1):
        for cols in _nonempty_subsets(m2):
            ys = _indifference(a, rows, cols, m2)
            xs = _indifference(bt, cols, rows, m1)
            if ys is None or xs is None:
                continue
            y, v, ny = ys
            x, u, nx = xs
            if ny or nx:
                degenerate = True
                continue
            if any(y[c] <= 0 for c in cols) or any(x[r] <= 0 for r in rows):
                continue
            row_pay = [sum((a[r][c] * y[c] for c in cols), Fraction(0)) for r in range(m1)]
            col_pay = [sum((b[r][c] * x[r] for r in rows), Fraction(0)) for c in range(m2)]
            if max(row_pay) > v or max(col_pay) > u:
                continue
            found.append(MixedProfile((tuple(x), tuple(y))))
    if degenerate:
        found.extend(_vertex_equilibria(a, b))
    eqs = _dedupe(found)
    for p in eqs:
        assert best_regret(game, p) == 0
    return NashSet(
        tuple((p, mixed_surplus(game, p)) for p in eqs),
        Completeness.COMPLETE,
        degenerate,
    )


def polytope_vertices(ineq_rows, ineq_rhs, dim: int):
    """Vertices of ``{z : ineq_rows . z <= ineq_rhs}`` by trying every basis.

    Brute force over ``dim``-subsets of constraints; fine for the handful of
    constraints a desk-scale bimatrix game produces.
    """
    out = {}
    for basis in itertools.combinations(range(len(ineq_rows)), dim):
        sol = solve_linear_system([ineq_rows[k] for k in basis], [ineq_rhs[k] for k in basis])
        if sol is None or sol[1]:
            continue
        z = sol[0]
        if all(
            sum((r * x for r, x in zip(row, z)), Fraction(0)) <= rhs
            for row, rhs in zip(ineq_rows, ineq_rhs)
        ):
            out[z] = None
    return list(out)


def _labels(z, rows, rhs):
    return frozenset(
        k for k, (row, c) in enumerate(zip(rows, rhs))
        if sum((r * x for r, x in zip(row, z)), Fraction(0)) == c
    )


def _vertex_equilibria(a, b) -> list[MixedProfile]:
    """Completely labelled vertex pairs of the best-response polytopes.

    P = {x >= 0, B'^T x <= 1}, Q = {y >= 0, A' y <= 1} with payoffs shifted
    positive.  Labels 0..m1-1 belong to row strategies, m1.. to columns.
    """
    m1, m2 = len(a), len(a[0])
    lo = min(min(min(r) for r in a), min(min(r) for r in b))
    shift = 1 - lo if lo <= 0 else Fraction(0)
    one, zero = Fraction(1), Fraction(0)

    # x-side constraints: -x_r <= 0 (label r), sum_r b'[r][c] x_r <= 1 (label m1 + c)
    p_rows = [[-one if k == r else zero for k in range(m1)] for r in range(m1)]
    p_rows += [[b[r][c] + shift for r in range(m1)] for c in range(m2)]
    p_rhs = [zero] * m1 + [one] * m2
    # y-side constraints: sum_c a'[r][c] y_c <= 1 (label r), -y_c <= 0 (label m1 + c)
    q_rows = [[a[r][c] + shift for c in range(m2)] for r in range(m1)]
    q_rows += [[-one if k == c else zero for k in range(m2)] for c in range(m2)]
    q_rhs = [one] * m1 + [zero] * m2

    xs = [(z, _labels(z, p_rows, p_rhs)) for z in polytope_vertices(p_rows, p_rhs, m1) if any(z)]
    ys = [(z, _labels(z, q_rows, q_rhs)) for z in polytope_vertices(q_rows, q_rhs, m2) if any(z)]
    full = frozenset(range(m1 + m2))
    out = []
    for x, lx in xs:
        for y, ly in ys:
            if lx | ly == full:
                sx, sy = sum(x), sum(y)
                out.append(MixedProfile((tuple(v / sx for v in x), tuple(v / sy for v in y))))
    return out


def nash_equilibria(game: Game, candidates: Iterable[MixedProfile] = ()) -> NashSet:
    """Nash equilibria by the best method available for the player count.

    One player: pure scan is complete.  Two: support enumeration.  More:
    pure scan plus each candidate that passes ``best_regret == 0``.
    """
    n = game.n_players
    if n == 2:
        return support_enumeration_2p(game)
    found = [MixedProfile.pure(game, s) for s in pure_nash(game)]
    verified = [p for p in candidates if is_nash(game, p)]
    found = _dedupe(found + verified)
    if n == 1:
        completeness = Completeness.COMPLETE
    else:
        completeness = Completeness.PARTIAL if verified else Completeness.PURE_ONLY
    return NashSet(tuple((p, mixed_surplus(game, p)) for p in found), completeness)


@dataclass(frozen=True)
class NashValue:
    """Best Nash surplus found.  ``value`` is None when nothing was found."""

    value: Fraction | None
    completeness: Completeness
    witness: MixedProfile | None = None
    degenerate: bool = False

    @property
    def exact(self) -> bool:
        return self.value is not None and self.completeness is Completeness.COMPLETE


def v_n(game: Game, candidates: Iterable[MixedProfile] = ()) -> NashValue:
    ns = nash_equilibria(game, candidates)
    best = ns.best
    if best is None:
        return NashValue(None, ns.completeness, None, ns.degenerate)
    return NashValue(best[1], ns.completeness, best[0], ns.degenerate)
