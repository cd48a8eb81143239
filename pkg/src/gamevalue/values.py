"""Mediation and enforcement values.

Both are ratios of best surpluses.  A zero denominator follows the usual
conventions: 0/0 is 1 and x/0 with x > 0 is infinite.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .equilibria import CEResult, Completeness, NashValue, max_surplus_ce, v_n
from .game import Game, MixedProfile, opt


@dataclass(frozen=True, eq=False)
class ExtendedRational:
    """A nonnegative rational or +infinity (``value is None``)."""

    value: Fraction | None

    @property
    def infinite(self) -> bool:
        return self.value is None

    @classmethod
    def ratio(cls, num: Fraction, den: Fraction) -> "ExtendedRational":
        if den == 0:
            return cls(Fraction(1)) if num == 0 else cls(None)
        return cls(Fraction(num) / den)

    def _key(self):
        return (1, 0) if self.value is None else (0, self.value)

    def __lt__(self, other):
        return self._key() < _coerce(other)._key()

    def __le__(self, other):
        return self._key() <= _coerce(other)._key()

    def __gt__(self, other):
        return self._key() > _coerce(other)._key()

    def __ge__(self, other):
        return self._key() >= _coerce(other)._key()

    def __eq__(self, other):
        try:
            return self._key() == _coerce(other)._key()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(self._key())

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def to_json(self):
        return {"inf": True} if self.value is None else str(self.value)


def _coerce(x) -> ExtendedRational:
    if isinstance(x, ExtendedRational):
        return x
    if isinstance(x, (int, Fraction, str)):
        return ExtendedRational(Fraction(x))
    raise TypeError(f"cannot compare ExtendedRational with {type(x).__name__}")


INF = ExtendedRational(None)


@dataclass(frozen=True)
class MediationValue:
    """MV plus how far it can be trusted.

    ``value`` is None when no Nash equilibrium was found by an incomplete
    method.  With a lower-bound v_N the ratio is an upper-bound estimate.
    """

    value: ExtendedRational | None
    completeness: Completeness

    @property
    def indeterminate(self) -> bool:
        return self.value is None

    @property
    def exact(self) -> bool:
        return self.value is not None and self.completeness is Completeness.COMPLETE


def mediation_value_from(vc: Fraction, vn: NashValue) -> MediationValue:
    if vn.value is None:
        return MediationValue(None, vn.completeness)
    return MediationValue(ExtendedRational.ratio(vc, vn.value), vn.completeness)


def mediation_value(game: Game, candidates: Iterable[MixedProfile] = ()) -> MediationValue:
    return mediation_value_from(max_surplus_ce(game).value, v_n(game, candidates))


def enforcement_value(game: Game) -> ExtendedRational:
    return ExtendedRational.ratio(opt(game), max_surplus_ce(game).value)


@dataclass(frozen=True)
class ValueReport:
    v_n: NashValue
    ce: CEResult
    opt: Fraction
    mv: MediationValue
    ev: ExtendedRational

    @property
    def v_c(self) -> Fraction:
        return self.ce.value


def analyze(game: Game, candidates: Iterable[MixedProfile] = ()) -> ValueReport:
    ce = max_surplus_ce(game)
    vn = v_n(game, candidates)
    best = opt(game)
    return ValueReport(
        v_n=vn,
        ce=ce,
        opt=best,
        mv=mediation_value_from(ce.value, vn),
        ev=ExtendedRational.ratio(best, ce.value),
    )
