"""Finite strategic-form games with exact rational payoffs.

Payoffs live in one flat tuple, player-major: the payoff of player ``i`` at
the profile with row-major index ``k`` sits at ``i * size + k``.  The
row-major index of ``s = (s_1, .., s_n)`` is ``sum(s_i * stride_i)`` with
``stride_n = 1`` and ``stride_i = m_{i+1} * stride_{i+1}``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .lp import as_fraction

Profile = tuple[int, ...]


class GameError(ValueError):
    pass


class NegativePayoffError(GameError):
    """A payoff below zero was supplied where a nonnegative game is required."""


class Dominance(enum.Enum):
    STRICT = "strictly dominates"
    WEAK = "weakly dominates"
    EQUIVALENT = "equivalent"
    NONE = "none"


@dataclass(frozen=True, eq=True)
class Game:
    strategy_counts: tuple[int, ...]
    payoffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "strategy_counts", tuple(int(m) for m in self.strategy_counts))
        object.__setattr__(self, "payoffs", tuple(as_fraction(v) for v in self.payoffs))
        if not self.strategy_counts:
            raise GameError("a game needs at least one player")
        if any(m < 1 for m in self.strategy_counts):
            raise GameError("every player needs at least one strategy")
        expected = self.n_players * self.size
        if len(self.payoffs) != expected:
            raise GameError(f"expected {expected} payoffs, got {len(self.payoffs)}")
        for k, v in enumerate(self.payoffs):
            if v < 0:
                i, idx = divmod(k, self.size)
                raise NegativePayoffError(
                    f"payoff of player {i} at profile {self.profile_at(idx)} is {v}"
                )

    @classmethod
    def from_function(cls, strategy_counts: Sequence[int], payoff) -> "Game":
        """Build from ``payoff(profile) -> sequence of n payoffs``."""
        counts = tuple(strategy_counts)
        profiles = list(itertools.product(*(range(m) for m in counts)))
        table = [tuple(as_fraction(v) for v in payoff(s)) for s in profiles]
        n = len(counts)
        if any(len(t) != n for t in table):
            raise GameError("payoff function must return one value per player")
        return cls(counts, tuple(table[k][i] for i in range(n) for k in range(len(profiles))))

    @classmethod
    def bimatrix(cls, row, col) -> "Game":
        """Two-player game from row and column payoff matrices."""
        m1, m2 = len(row), len(row[0])
        if len(col) != m1 or any(len(r) != m2 for r in list(row) + list(col)):
            raise GameError("bimatrix payoff shapes disagree")
        return cls.from_function((m1, m2), lambda s: (row[s[0]][s[1]], col[s[0]][s[1]]))

    @property
    def n_players(self) -> int:
        return len(self.strategy_counts)

    @cached_property
    def size(self) -> int:
        return math.prod(self.strategy_counts)

    @cached_property
    def strides(self) -> tuple[int, ...]:
        out = []
        acc = 1
        for m in reversed(self.strategy_counts):
            out.append(acc)
            acc *= m
        return tuple(reversed(out))

    def index(self, s: Sequence[int]) -> int:
        if len(s) != self.n_players:
            raise GameError(f"profile {tuple(s)} has wrong length")
        k = 0
        for si, m, st in zip(s, self.strategy_counts, self.strides):
            if not 0 <= si < m:
                raise GameError(f"profile {tuple(s)} out of range")
            k += si * st
        return k

    def profile_at(self, k: int) -> Profile:
        return tuple((k // st) % m for st, m in zip(self.strides, self.strategy_counts))

    def profiles(self) -> Iterator[Profile]:
        return itertools.product(*(range(m) for m in self.strategy_counts))

    def payoff(self, i: int, s: Sequence[int]) -> Fraction:
        self._check_player(i)
        return self.payoffs[i * self.size + self.index(s)]

    def payoff_vector(self, s: Sequence[int]) -> tuple[Fraction, ...]:
        k = self.index(s)
        return tuple(self.payoffs[i * self.size + k] for i in range(self.n_players))

    @cached_property
    def surplus_table(self) -> tuple[Fraction, ...]:
        """Sum of payoffs at each profile, by row-major index."""
        n, size = self.n_players, self.size
        return tuple(
            sum((self.payoffs[i * size + k] for i in range(n)), Fraction(0))
            for k in range(size)
        )

    def profile_surplus(self, s: Sequence[int]) -> Fraction:
        return self.surplus_table[self.index(s)]

    def deviate(self, s: Sequence[int], i: int, t: int) -> Profile:
        s = list(s)
        s[i] = t
        return tuple(s)

    def scaled(self, c) -> "Game":
        c = as_fraction(c)
        return Game(self.strategy_counts, tuple(c * v for v in self.payoffs))

    def _check_player(self, i: int) -> None:
        if not 0 <= i < self.n_players:
            raise GameError(f"player {i} out of range for a {self.n_players}-player game")

    def _check_strategy(self, i: int, s: int) -> None:
        self._check_player(i)
        if not 0 <= s < self.strategy_counts[i]:
            raise GameError(f"strategy {s} out of range for player {i}")


@dataclass(frozen=True)
class MixedProfile:
    strategies: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        for i, p in enumerate(self.strategies):
            if any(x < 0 for x in p):
                raise GameError(f"negative probability in mixed strategy of player {i}")
            if sum(p) != 1:
                raise GameError(f"mixed strategy of player {i} sums to {sum(p)}")

    @classmethod
    def of(cls, strategies: Iterable[Iterable]) -> "MixedProfile":
        return cls(tuple(tuple(as_fraction(x) for x in p) for p in strategies))

    @classmethod
    def pure(cls, game: Game, s: Sequence[int]) -> "MixedProfile":
        game.index(s)
        return cls(
            tuple(
                tuple(Fraction(int(j == si)) for j in range(m))
                for si, m in zip(s, game.strategy_counts)
            )
        )

    def support(self, i: int) -> tuple[int, ...]:
        return tuple(j for j, x in enumerate(self.strategies[i]) if x)

    def check_shape(self, game: Game) -> None:
        if tuple(len(p) for p in self.strategies) != game.strategy_counts:
            raise GameError("mixed profile shape does not match the game")


class CorrelatedStrategy(Mapping[Profile, Fraction]):
    """A probability distribution over pure profiles; only nonzero weights stored."""

    __slots__ = ("_weights",)

    def __init__(self, weights: Mapping[Sequence[int], object] | Iterable[tuple]):
        items = weights.items() if isinstance(weights, Mapping) else weights
        acc: dict[Profile, Fraction] = {}
        for s, w in items:
            w = as_fraction(w)
            if w < 0:
                raise GameError(f"negative weight {w} on profile {tuple(s)}")
            if w:
                key = tuple(s)
                acc[key] = acc.get(key, Fraction(0)) + w
        total = sum(acc.values(), Fraction(0))
        if total != 1:
            raise GameError(f"correlated strategy weights sum to {total}")
        self._weights = dict(sorted(acc.items()))

    @classmethod
    def point(cls, s: Sequence[int]) -> "CorrelatedStrategy":
        return cls({tuple(s): 1})

    @classmethod
    def uniform(cls, profiles: Iterable[Sequence[int]]) -> "CorrelatedStrategy":
        support = sorted({tuple(s) for s in profiles})
        if not support:
            raise GameError("uniform distribution over an empty set")
        w = Fraction(1, len(support))
        return cls({s: w for s in support})

    def __getitem__(self, s) -> Fraction:
        return self._weights.get(tuple(s), Fraction(0))

    def __iter__(self):
        return iter(self._weights)

    def __len__(self):
        return len(self._weights)

    def __eq__(self, other):
        if isinstance(other, CorrelatedStrategy):
            return self._weights == other._weights
        return NotImplemented

    def __hash__(self):
        return hash(tuple(self._weights.items()))

    def __repr__(self):
        body = ", ".join(f"{s}: {w}" for s, w in self._weights.items())
        return f"CorrelatedStrategy({{{body}}})"

    def check_game(self, game: Game) -> None:
        for s in self._weights:
            game.index(s)

    def mix(self, other: "CorrelatedStrategy", t) -> "CorrelatedStrategy":
        """The convex combination ``(1 - t) * self + t * other``."""
        t = as_fraction(t)
        keys = set(self._weights) | set(other._weights)
        return CorrelatedStrategy({s: (1 - t) * self[s] + t * other[s] for s in keys})


def expected_payoff(game: Game, mu: CorrelatedStrategy, i: int) -> Fraction:
    """Expected payoff of player ``i`` when profiles are drawn from ``mu``."""
    game._check_player(i)
    return sum((game.payoff(i, s) * w for s, w in mu.items()), Fraction(0))


def surplus(game: Game, mu: CorrelatedStrategy) -> Fraction:
    return sum((expected_payoff(game, mu, i) for i in range(game.n_players)), Fraction(0))


def product_distribution(game: Game, p: MixedProfile) -> CorrelatedStrategy:
    p.check_shape(game)
    supports = [p.support(i) for i in range(game.n_players)]
    weights = {}
    for s in itertools.product(*supports):
        w = Fraction(1)
        for i, si in enumerate(s):
            w *= p.strategies[i][si]
        weights[s] = w
    return CorrelatedStrategy(weights)


def mixed_payoff(game: Game, p: MixedProfile, i: int) -> Fraction:
    return expected_payoff(game, product_distribution(game, p), i)


def opt(game: Game) -> Fraction:
    """Maximal surplus; a linear objective over the simplex peaks at a vertex."""
    return max(game.surplus_table)


def argmax_profiles(game: Game) -> list[Profile]:
    best = opt(game)
    return [game.profile_at(k) for k, v in enumerate(game.surplus_table) if v == best]


def _others(game: Game, i: int) -> Iterator[Profile]:
    counts = game.strategy_counts[:i] + game.strategy_counts[i + 1 :]
    return itertools.product(*(range(m) for m in counts))


def _with(rest: Profile, i: int, si: int) -> Profile:
    return rest[:i] + (si,) + rest[i:]


def dominance(game: Game, i: int, s: int, t: int) -> Dominance:
    """How strategy ``s`` of player ``i`` compares to ``t``."""
    game._check_strategy(i, s)
    game._check_strategy(i, t)
    if s == t:
        raise GameError("dominance needs two distinct strategies")
    diffs = [
        game.payoff(i, _with(rest, i, s)) - game.payoff(i, _with(rest, i, t))
        for rest in _others(game, i)
    ]
    if all(d > 0 for d in diffs):
        return Dominance.STRICT
    if all(d == 0 for d in diffs):
        return Dominance.EQUIVALENT
    if all(d >= 0 for d in diffs):
        return Dominance.WEAK
    return Dominance.NONE


def has_strictly_dominant_strategy(game: Game, i: int) -> bool:
    """Whether some strategy of ``i`` strictly dominates all others.

    A player with a single strategy counts as having one.
    """
    game._check_player(i)
    m = game.strategy_counts[i]
    return any(
        all(dominance(game, i, s, t) is Dominance.STRICT for t in range(m) if t != s)
        for s in range(m)
    )
