"""Seeded random search for games with a large mediation or enforcement value.

Randomness comes from SplitMix64.  Iteration ``t`` draws from its own stream
seeded with ``mix(seed + (t + 1) * GOLDEN)``, so any iteration can be
reproduced on its own and the transcript does not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .congestion import CongestionForm, induce_game
from .equilibria import Completeness, max_surplus_ce, pure_nash, v_n
from .game import Game, has_strictly_dominant_strategy, opt
from .values import ExtendedRational, ValueReport, analyze

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

GAME_CLASSES = ("general", "S", "SN", "I", "IN")


def mix64(z: int) -> int:
    z = (z + GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK

    def next(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            r = self.next()
            if r < limit:
                return r % n

    def choice(self, seq: Sequence):
        return seq[self.below(len(seq))]


def iteration_stream(seed: int, t: int) -> SplitMix64:
    return SplitMix64(mix64((seed + (t + 1) * GOLDEN) & MASK))


@dataclass(frozen=True)
class SearchConfig:
    """What to sample and what to look for.

    ``shape`` is the strategy counts for the general class and ``(n, m)``
    (players, facilities) for the congestion classes.
    """

    game_class: str = "general"
    shape: tuple[int, ...] = (2, 3)
    grid: tuple[Fraction, ...] = tuple(Fraction(k) for k in range(11))
    seed: int = 0
    iterations: int = 1000
    target: str = "mv"
    threshold: Fraction = Fraction(4, 3)
    linear: bool = False
    no_strict_dominance: bool = False
    allow_partial: bool = False
    max_resamples: int = 100

    def __post_init__(self):
        object.__setattr__(self, "grid", tuple(sorted({Fraction(g) for g in self.grid})))
        object.__setattr__(self, "shape", tuple(int(k) for k in self.shape))
        object.__setattr__(self, "threshold", Fraction(self.threshold))
        if self.game_class not in GAME_CLASSES:
            raise ValueError(f"unknown game class {self.game_class!r}")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if not self.grid:
            raise ValueError("payoff grid is empty")
        if any(g < 0 for g in self.grid):
            raise ValueError("payoff grid must be nonnegative")
        if self.target not in ("mv", "ev"):
            raise ValueError("target must be 'mv' or 'ev'")
        if self.game_class != "general" and len(self.shape) != 2:
            raise ValueError("congestion classes take shape (players, facilities)")
        if self.target == "mv" and self.n_players != 2 and not self.allow_partial:
            raise ValueError(
                "exact mediation values need two players; pass allow_partial to "
                "accept estimates from pure-equilibrium lower bounds"
            )

    @property
    def n_players(self) -> int:
        return len(self.shape) if self.game_class == "general" else self.shape[0]


def _sample_row(rng: SplitMix64, cfg: SearchConfig, n: int, decreasing: bool):
    if cfg.linear:
        a, b = rng.choice(cfg.grid), rng.choice(cfg.grid)
        if decreasing and a < b:
            a, b = b, a
        if n == 1:
            return (a,)
        return tuple(a + (b - a) * k / (n - 1) for k in range(n))
    row = [rng.choice(cfg.grid) for _ in range(n)]
    if decreasing:
        row.sort(reverse=True)
    return tuple(row)


def sample(cfg: SearchConfig, rng: SplitMix64) -> Game | CongestionForm:
    if cfg.game_class == "general":
        size = math.prod(cfg.shape)
        return Game(cfg.shape, tuple(rng.choice(cfg.grid) for _ in range(size * len(cfg.shape))))
    n, m = cfg.shape
    decreasing = cfg.game_class in ("SN", "IN")
    if cfg.game_class in ("I", "IN"):
        row = _sample_row(rng, cfg, n, decreasing)
        return CongestionForm(n, (row,) * m)
    return CongestionForm(n, tuple(_sample_row(rng, cfg, n, decreasing) for _ in range(m)))


def _as_game(obj) -> Game:
    return induce_game(obj) if isinstance(obj, CongestionForm) else obj


def draw(cfg: SearchConfig, t: int):
    """Instance of iteration ``t``, or None if the filter rejected every resample."""
    rng = iteration_stream(cfg.seed, t)
    for _ in range(cfg.max_resamples):
        obj = sample(cfg, rng)
        if not cfg.no_strict_dominance:
            return obj
        g = _as_game(obj)
        if not any(has_strictly_dominant_strategy(g, i) for i in range(g.n_players)):
            return obj
    return None


def target_value(cfg: SearchConfig, game: Game, beat: ExtendedRational | None):
    """Exact target value, or None when it provably cannot exceed ``beat``."""
    best = opt(game)
    if cfg.target == "ev":
        return ExtendedRational.ratio(best, max_surplus_ce(game).value)
    if beat is not None:
        pure = [game.profile_surplus(s) for s in pure_nash(game)]
        # v_C <= opt, so opt / (best pure Nash surplus) bounds MV from above
        if pure and max(pure) > 0 and ExtendedRational(best / max(pure)) <= beat:
            return None
    vn = v_n(game)
    if vn.value is None:
        return None
    return ExtendedRational.ratio(max_surplus_ce(game).value, vn.value)


@dataclass
class SearchResult:
    config: SearchConfig
    best: Game | CongestionForm | None
    best_iteration: int | None
    best_value: ExtendedRational | None
    report: ValueReport | None
    threshold_met: bool
    skipped: int
    transcript: list[tuple[int, str]] = field(default_factory=list)

    @property
    def estimate(self) -> bool:
        """MV from a lower-bound v_N; only an upper-bound estimate."""
        return (
            self.config.target == "mv"
            and self.report is not None
            and self.report.v_n.completeness is not Completeness.COMPLETE
        )


def witness_search(cfg: SearchConfig, progress=None) -> SearchResult:
    """Sample ``cfg.iterations`` instances and keep the best by the target.

    Only strict improvements are recorded, so the transcript is a
    deterministic function of the config.  The winner is re-analyzed from
    scratch and must reproduce the recorded value.
    """
    best_obj, best_t, best_val = None, None, None
    transcript = []
    skipped = 0
    for t in range(cfg.iterations):
        obj = draw(cfg, t)
        if obj is None:
            skipped += 1
            continue
        game = _as_game(obj)
        val = target_value(cfg, game, best_val)
        if val is not None and (best_val is None or val > best_val):
            best_obj, best_t, best_val = obj, t, val
            transcript.append((t, str(val)))
        if progress is not None:
            progress(t)
    report = None
    if best_obj is not None:
        report = analyze(_as_game(best_obj))
        check = report.ev if cfg.target == "ev" else report.mv.value
        if check != best_val:
            raise AssertionError(f"re-analysis gave {check}, search recorded {best_val}")
    met = best_val is not None and best_val > ExtendedRational(cfg.threshold)
    return SearchResult(cfg, best_obj, best_t, best_val, report, met, skipped, transcript)
