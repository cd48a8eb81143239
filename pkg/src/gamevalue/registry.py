"""Named games and forms used throughout the tests and the CLI."""

from __future__ import annotations

from fractions import Fraction

from .congestion import CongestionForm
from .game import Game
from .lp import as_fraction

# strategy labels: row a1, a2 / column b1, b2 -> indices 0, 1
AUMANN_ROW = [[5, 0], [4, 1]]
AUMANN_COL = [[1, 0], [4, 5]]


def aumann() -> Game:
    return Game.bimatrix(AUMANN_ROW, AUMANN_COL)


def gamma_x(x) -> Game:
    """Aumann-like 2x2 family, defined for x > 1."""
    x = as_fraction(x)
    if not x > 1:
        raise ValueError("gamma_x needs x > 1")
    return Game.bimatrix([[x, 0], [x - 1, 1]], [[1, 0], [x - 1, x]])


def pd(x) -> Game:
    """Prisoner's Dilemma with temptation x + 1; strategy 0 = C, 1 = D.

    (C,C) = (x,x), (C,D) = (0,x+1), (D,C) = (x+1,0), (D,D) = (1,1).
    D strictly dominates C for both players when x > 1.
    """
    x = as_fraction(x)
    if not x > 1:
        raise ValueError("pd needs x > 1")
    return Game.bimatrix([[x, 0], [x + 1, 1]], [[x, x + 1], [0, 1]])


def example1() -> CongestionForm:
    """Three players, f = (24, 12, 0), g = (8, 8, 8)."""
    return CongestionForm(3, ((24, 12, 0), (8, 8, 8)))


def example2() -> CongestionForm:
    """Six players on two identical facilities, w = (1.5, 1, 4, 4.5, 4.5, 3)."""
    return CongestionForm.symmetric_form(2, [Fraction(3, 2), 1, 4, Fraction(9, 2), Fraction(9, 2), 3])


EXAMPLES = {
    "aumann": (aumann, False),
    "gamma_x": (gamma_x, True),
    "pd": (pd, True),
    "example1": (example1, False),
    "example2": (example2, False),
}


def example(name: str, param=None):
    """Look up ``name`` (optionally ``name:param``) in the registry."""
    if param is None and ":" in name:
        name, param = name.split(":", 1)
    if name not in EXAMPLES:
        raise KeyError(f"unknown example {name!r}; known: {', '.join(sorted(EXAMPLES))}")
    build, takes_param = EXAMPLES[name]
    if takes_param:
        if param is None:
            raise ValueError(f"example {name!r} needs a parameter, e.g. {name}:4")
        return build(param)
    if param is not None:
        raise ValueError(f"example {name!r} takes no parameter")
    return build()
