"""Simple congestion forms: each player picks one facility.

A user of facility ``j`` shared by ``k`` players receives ``w_j(k)``; by
convention ``w_j(0) = 0``.  Besides building the induced game this module
works directly with congestion vectors (occupancy counts), which determine
payoffs and surplus.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Sequence

from .equilibria import best_regret, is_correlated_equilibrium, max_surplus_ce
from .game import CorrelatedStrategy, Game, GameError, MixedProfile, Profile, product_distribution, surplus
from .lp import as_fraction

Vector = tuple[int, ...]


class NotApplicable(ValueError):
    """A construction's preconditions do not hold for this form."""


@dataclass(frozen=True)
class CongestionForm:
    """``w[j][k - 1]`` is the payoff to each of ``k`` users of facility ``j``."""

    n_players: int
    w: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        w = tuple(tuple(as_fraction(v) for v in row) for row in self.w)
        object.__setattr__(self, "w", w)
        if self.n_players < 1:
            raise GameError("a congestion form needs at least one player")
        if not w:
            raise GameError("a congestion form needs at least one facility")
        for j, row in enumerate(w):
            if len(row) != self.n_players:
                raise GameError(f"facility {j} has {len(row)} payoffs, expected {self.n_players}")
            if any(v < 0 for v in row):
                raise GameError(f"facility {j} has a negative payoff")

    @classmethod
    def symmetric_form(cls, n_facilities: int, w: Sequence) -> "CongestionForm":
        return cls(len(w), tuple(tuple(w) for _ in range(n_facilities)))

    @property
    def n_facilities(self) -> int:
        return len(self.w)

    def payoff(self, j: int, k: int) -> Fraction:
        return self.w[j][k - 1] if k else Fraction(0)

    @cached_property
    def symmetric(self) -> bool:
        return all(row == self.w[0] for row in self.w)

    @cached_property
    def non_increasing(self) -> bool:
        return all(a >= b for row in self.w for a, b in zip(row, row[1:]))

    @cached_property
    def linear(self) -> bool:
        return all(len({a - b for a, b in zip(row, row[1:])}) <= 1 for row in self.w)

    def decrement(self, j: int) -> Fraction:
        """The constant ``w_j(k) - w_j(k+1)`` of a linear facility."""
        if not self.linear:
            raise NotApplicable("facility payoffs are not linear")
        row = self.w[j]
        return row[0] - row[1] if len(row) > 1 else Fraction(0)

    def relabel(self, perm: Sequence[int]) -> "CongestionForm":
        """Form whose facility ``j`` is this form's facility ``perm[j]``."""
        return CongestionForm(self.n_players, tuple(self.w[p] for p in perm))


def induce_game(form: CongestionForm) -> Game:
    return Game.from_function(
        (form.n_facilities,) * form.n_players, lambda a: profile_payoffs(form, a)
    )


def vector_of_profile(form: CongestionForm, a: Sequence[int]) -> Vector:
    if len(a) != form.n_players or any(not 0 <= j < form.n_facilities for j in a):
        raise GameError(f"profile {tuple(a)} is not valid for this form")
    counts = [0] * form.n_facilities
    for j in a:
        counts[j] += 1
    return tuple(counts)


def profile_payoffs(form: CongestionForm, a: Sequence[int]) -> tuple[Fraction, ...]:
    counts = vector_of_profile(form, a)
    return tuple(form.payoff(j, counts[j]) for j in a)


def _check_vector(form: CongestionForm, pi: Sequence[int]) -> Vector:
    pi = tuple(int(x) for x in pi)
    if len(pi) != form.n_facilities or any(x < 0 for x in pi) or sum(pi) != form.n_players:
        raise GameError(f"{pi} is not a congestion vector for this form")
    return pi


def surplus_of_vector(form: CongestionForm, pi: Sequence[int]) -> Fraction:
    pi = _check_vector(form, pi)
    return sum((k * form.payoff(j, k) for j, k in enumerate(pi)), Fraction(0))


def congestion_vectors(n: int, m: int) -> Iterator[Vector]:
    """All ways to place ``n`` players on ``m`` facilities, lexicographically."""
    if m == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in congestion_vectors(n - first, m - 1):
            yield (first,) + rest


def opt_of_form(form: CongestionForm) -> Fraction:
    return max(surplus_of_vector(form, pi) for pi in congestion_vectors(form.n_players, form.n_facilities))


def count_B(pi: Sequence[int]) -> int:
    """Number of profiles with occupancy ``pi`` (a multinomial coefficient)."""
    out, left = 1, sum(pi)
    for k in pi:
        out *= math.comb(left, k)
        left -= k
    return out


def enumerate_B(form: CongestionForm, pi: Sequence[int]) -> list[Profile]:
    """Profiles realizing ``pi``, in lexicographic order."""
    pi = _check_vector(form, pi)
    n = form.n_players
    out = []

    def place(j: int, free: tuple[int, ...], assign: list[int]):
        if j == len(pi):
            out.append(tuple(assign))
            return
        for chosen in itertools.combinations(free, pi[j]):
            for p in chosen:
                assign[p] = j
            rest = tuple(p for p in free if p not in chosen)
            place(j + 1, rest, assign)

    place(0, tuple(range(n)), [0] * n)
    return sorted(out)


def enumerate_A(form: CongestionForm, pi: Sequence[int]) -> list[Profile]:
    """Union of ``enumerate_B`` over all facility permutations of ``pi``."""
    pi = _check_vector(form, pi)
    out = set()
    for tau_pi in set(itertools.permutations(pi)):
        out.update(enumerate_B(form, tau_pi))
    return sorted(out)


def vector_in_equilibrium(form: CongestionForm, pi: Sequence[int]) -> bool:
    """No user of any occupied facility gains by moving to another facility.

    Payoffs depend on counts only, so one member of B_pi decides for all.
    """
    pi = _check_vector(form, pi)
    for j, kj in enumerate(pi):
        if kj == 0:
            continue
        here = form.payoff(j, kj)
        for jj, kjj in enumerate(pi):
            if jj != j and form.payoff(jj, kjj + 1) > here:
                return False
    return True


def representative(pi: Sequence[int]) -> Profile:
    """The member of B_pi with players assigned to facilities in order."""
    return tuple(j for j, k in enumerate(pi) for _ in range(k))


def is_pure_equilibrium(form: CongestionForm, a: Sequence[int]) -> bool:
    counts = vector_of_profile(form, a)
    for j in a:
        here = form.payoff(j, counts[j])
        if any(form.payoff(jj, counts[jj] + 1) > here for jj in range(form.n_facilities) if jj != j):
            return False
    return True


def rosenthal_pure_eq(form: CongestionForm, start: Sequence[int] | None = None) -> Profile:
    """Pure equilibrium by better-response dynamics.

    Each round lets every player in turn switch to its best facility (lowest
    index on ties) if that strictly improves its payoff.  Rosenthal's
    potential strictly increases with every switch, so this terminates.
    """
    n, m = form.n_players, form.n_facilities
    a = list(start) if start is not None else [0] * n
    counts = list(vector_of_profile(form, a))
    budget = m**n * n
    steps = 0
    moved = True
    while moved:
        moved = False
        for i in range(n):
            j = a[i]
            here = form.payoff(j, counts[j])
            best, best_val = j, here
            for jj in range(m):
                if jj != j:
                    val = form.payoff(jj, counts[jj] + 1)
                    if val > best_val:
                        best, best_val = jj, val
            if best != j:
                counts[j] -= 1
                counts[best] += 1
                a[i] = best
                moved = True
                steps += 1
                if steps > budget:
                    raise RuntimeError("better-response dynamics failed to converge")
    return tuple(a)


# -- characterization of v_C = opt on facility-symmetric forms ----------------


@dataclass(frozen=True)
class UniformWitnessResult:
    """Outcome of the uniform-over-A_pi test.

    ``conclusive`` is True when the form's facilities are non-increasing, where
    a negative answer proves v_C < opt; otherwise a negative answer only means
    no uniform witness exists, and ``v_c`` carries the LP value when computed.
    """

    achieved: bool
    vector: Vector | None
    mu: CorrelatedStrategy | None
    conclusive: bool
    tried: tuple[Vector, ...] = ()
    v_c: Fraction | None = None


def thm410_check(form: CongestionForm, with_lp: bool = False) -> UniformWitnessResult:
    """Search optimal congestion vectors whose uniform A_pi distribution is a CE.

    Vectors are tried up to facility permutation (non-decreasing
    representatives, lexicographic order); the first success is returned.
    """
    if not form.symmetric:
        raise NotApplicable("the uniform-witness test needs a facility-symmetric form")
    game = induce_game(form)
    best = opt_of_form(form)
    tried = []
    for pi in congestion_vectors(form.n_players, form.n_facilities):
        if list(pi) != sorted(pi) or surplus_of_vector(form, pi) != best:
            continue
        tried.append(pi)
        mu = CorrelatedStrategy.uniform(enumerate_A(form, pi))
        if is_correlated_equilibrium(game, mu):
            return UniformWitnessResult(True, pi, mu, True, tuple(tried))
    vc = max_surplus_ce(game).value if with_lp else None
    return UniformWitnessResult(False, None, None, form.non_increasing, tuple(tried), vc)


# -- two facilities with linear non-increasing payoffs ------------------------


def _normalized(form: CongestionForm) -> tuple[CongestionForm, tuple[int, int]]:
    """Relabel so facility 0 has the larger single-user payoff."""
    if form.n_facilities != 2:
        raise NotApplicable("this construction needs exactly two facilities")
    perm = (0, 1) if form.payoff(0, 1) >= form.payoff(1, 1) else (1, 0)
    return form.relabel(perm), perm


def split_vector(n: int, k: int) -> Vector:
    """``k`` players on the second facility, ``n - k`` on the first."""
    return (n - k, k)


def largest_eq_split(form: CongestionForm) -> int:
    """Largest ``k`` with ``(n - k, k)`` in equilibrium, after normalization."""
    f, _ = _normalized(form)
    n = f.n_players
    for k in range(n, -1, -1):
        if vector_in_equilibrium(f, split_vector(n, k)):
            return k
    raise RuntimeError("no split is in equilibrium, which contradicts Rosenthal's theorem")


def claim1_check(form: CongestionForm) -> bool:
    """``u(n - j, j) <= u(n - s, s)`` for every ``j <= s``."""
    f, _ = _normalized(form)
    n = f.n_players
    s = largest_eq_split(form)
    top = surplus_of_vector(f, split_vector(n, s))
    return all(surplus_of_vector(f, split_vector(n, j)) <= top for j in range(s + 1))


def _check_linear_non_increasing(form: CongestionForm) -> None:
    if form.n_facilities != 2:
        raise NotApplicable("this construction needs exactly two facilities")
    if not (form.linear and form.non_increasing):
        raise NotApplicable("facilities must be linear and non-increasing")


def claim2_probability(form: CongestionForm, k: int) -> Fraction:
    """``(w_g(1) - w_f(n)) / ((k - 1)(d_f + d_g))`` in normalized labels."""
    _check_linear_non_increasing(form)
    f, _ = _normalized(form)
    n = f.n_players
    if not 2 <= k <= n:
        raise NotApplicable(f"k = {k} outside 2..{n}")
    if k <= largest_eq_split(form):
        raise NotApplicable(f"k = {k} does not exceed the largest equilibrium split")
    dsum = f.decrement(0) + f.decrement(1)
    if dsum == 0:
        raise NotApplicable("d_f + d_g = 0")
    p = (f.payoff(1, 1) - f.payoff(0, n)) / ((k - 1) * dsum)
    if not 0 <= p <= 1:
        raise NotApplicable(f"p_k = {p} is not a probability")
    return p


def claim2_profile(form: CongestionForm, k: int) -> MixedProfile:
    """Players ``0 .. n-k-1`` on the first facility, the other ``k`` mixing.

    The mixing players pick the second (lower single-user payoff) facility
    with probability ``claim2_probability(form, k)``.  Returned in the
    caller's facility labels.
    """
    p = claim2_probability(form, k)
    _, perm = _normalized(form)
    n = form.n_players
    big, small = perm  # caller's labels of the normalized first / second facility
    out = []
    for i in range(n):
        probs = [Fraction(0), Fraction(0)]
        if i < n - k:
            probs[big] = Fraction(1)
        else:
            probs[small] = p
            probs[big] += 1 - p
        out.append(tuple(probs))
    return MixedProfile(tuple(out))


def claim2_surplus(form: CongestionForm, k: int) -> Fraction:
    """Closed form ``n w_f(n) + p_k d_f ((n - k) k + k (k - 1))``."""
    p = claim2_probability(form, k)
    f, _ = _normalized(form)
    n = f.n_players
    return n * f.payoff(0, n) + p * f.decrement(0) * ((n - k) * k + k * (k - 1))


def le_golden_ratio_times(value: Fraction, bound: Fraction) -> bool:
    """Exact test of ``value <= (1 + sqrt 5) / 2 * bound`` for ``bound >= 0``."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    lhs = 2 * value - bound
    return lhs <= 0 or lhs * lhs <= 5 * bound * bound


@dataclass(frozen=True)
class PhiAudit:
    v_c: Fraction
    split: int
    split_surplus: Fraction
    mixed_surplus: Fraction | None
    bound: Fraction
    passed: bool

    @property
    def fallback(self) -> bool:
        """True when no valid mixed profile existed at ``split + 1``."""
        return self.mixed_surplus is None


def phi_bound_audit(form: CongestionForm) -> PhiAudit:
    """Check ``v_C <= phi * max(u(split), u(mixed profile at split + 1))`` exactly."""
    _check_linear_non_increasing(form)
    game = induce_game(form)
    vc = max_surplus_ce(game).value
    f, _ = _normalized(form)
    n = f.n_players
    s = largest_eq_split(form)
    us = surplus_of_vector(f, split_vector(n, s))
    uq = None
    try:
        q = claim2_profile(form, s + 1)
    except NotApplicable:
        pass
    else:
        uq = surplus(game, product_distribution(game, q))
    bound = us if uq is None else max(us, uq)
    return PhiAudit(vc, s, us, uq, bound, le_golden_ratio_times(vc, bound))


# -- concave symmetric forms ---------------------------------------------------


class ConcaveOutcome(enum.Enum):
    OPTIMAL_EQUILIBRIUM = "concave; optimal pure equilibrium found"
    NOT_CONCAVE = "not concave"
    VIOLATION = "concave but no optimal pure equilibrium"


def total_payoff_curve(form: CongestionForm) -> list[Fraction]:
    """``v(k) = k w(k)`` for ``k = 1..n`` of a symmetric form."""
    return [k * form.payoff(0, k) for k in range(1, form.n_players + 1)]


def is_concave(values: Sequence[Fraction]) -> bool:
    """Non-increasing increments: ``v(k+1) - v(k) <= v(k) - v(k-1)`` for k >= 2."""
    return all(values[k + 1] - values[k] <= values[k] - values[k - 1] for k in range(1, len(values) - 1))


@dataclass(frozen=True)
class ConcaveCheck:
    outcome: ConcaveOutcome
    profile: Profile | None = None


def thm47_check(form: CongestionForm) -> ConcaveCheck:
    """For concave symmetric non-increasing forms, find a pure equilibrium at opt.

    Concavity is tested first, so a non-concave curve is reported as such
    even when the facilities are not monotone.
    """
    if not form.symmetric:
        raise NotApplicable("needs a facility-symmetric form")
    if form.n_players < form.n_facilities:
        raise NotApplicable("needs at least as many players as facilities")
    if not is_concave(total_payoff_curve(form)):
        return ConcaveCheck(ConcaveOutcome.NOT_CONCAVE)
    if not form.non_increasing:
        raise NotApplicable("concave, but the facilities are not non-increasing")
    best = opt_of_form(form)
    for pi in congestion_vectors(form.n_players, form.n_facilities):
        if surplus_of_vector(form, pi) == best:
            a = representative(pi)
            if is_pure_equilibrium(form, a):
                return ConcaveCheck(ConcaveOutcome.OPTIMAL_EQUILIBRIUM, a)
    return ConcaveCheck(ConcaveOutcome.VIOLATION)


def claim2_regret(form: CongestionForm, k: int) -> Fraction:
    game = induce_game(form)
    return best_regret(game, claim2_profile(form, k))
