"""JSON file formats for games and congestion forms.

Numbers may be JSON integers, JSON decimals, decimal strings ("1.5") or
fraction strings ("3/2"); all are read exactly.  Saving writes integers as
integers and everything else as "p/q" strings.

Game file::

    {"players": 2, "strategies": [2, 2],
     "payoffs": [[5, 0, 4, 1], [1, 0, 4, 5]]}

``payoffs[i][k]`` is player i's payoff at the k-th profile in row-major
order (last player's strategy varies fastest).

Congestion file::

    {"players": 3, "facilities": 2, "w": [[24, 12, 0], [8, 8, 8]]}
"""

from __future__ import annotations

import json
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from .congestion import CongestionForm
from .game import Game, GameError, NegativePayoffError


class FormatError(ValueError):
    """Bad syntax, wrong shape or an invalid value in an input file."""


def parse_number(value, where: str) -> Fraction:
    if isinstance(value, bool):
        raise FormatError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"{where}: cannot read {value!r} as an exact number") from None
    raise FormatError(f"{where}: expected a number, got {value!r}")


def format_number(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _load_json(text: str, source: str):
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _int_field(data: dict, key: str, source: str) -> int:
    if key not in data:
        raise FormatError(f"{source}: missing field {key!r}")
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise FormatError(f"{source}: field {key!r} must be a positive integer")
    return v


def _list_field(data: dict, key: str, source: str) -> list:
    v = data.get(key)
    if not isinstance(v, list):
        raise FormatError(f"{source}: field {key!r} must be a list")
    return v


def game_from_dict(data, source: str = "<game>") -> Game:
    if not isinstance(data, dict):
        raise FormatError(f"{source}: top level must be an object")
    n = _int_field(data, "players", source)
    counts = _list_field(data, "strategies", source)
    if len(counts) != n or any(isinstance(m, bool) or not isinstance(m, int) or m < 1 for m in counts):
        raise FormatError(f"{source}: 'strategies' must list {n} positive integers")
    size = 1
    for m in counts:
        size *= m
    table = _list_field(data, "payoffs", source)
    if len(table) != n:
        raise FormatError(f"{source}: 'payoffs' has {len(table)} rows, expected one per player ({n})")
    flat = []
    for i, row in enumerate(table):
        if not isinstance(row, list) or len(row) != size:
            got = len(row) if isinstance(row, list) else type(row).__name__
            raise FormatError(f"{source}: payoffs[{i}] has {got} entries, expected {size}")
        for k, v in enumerate(row):
            x = parse_number(v, f"{source}: payoffs[{i}][{k}]")
            if x < 0:
                raise FormatError(f"{source}: payoffs[{i}][{k}] = {x} is negative")
            flat.append(x)
    try:
        return Game(tuple(counts), tuple(flat))
    except (GameError, NegativePayoffError) as exc:
        raise FormatError(f"{source}: {exc}") from None


def form_from_dict(data, source: str = "<form>") -> CongestionForm:
    if not isinstance(data, dict):
        raise FormatError(f"{source}: top level must be an object")
    n = _int_field(data, "players", source)
    m = _int_field(data, "facilities", source)
    w = _list_field(data, "w", source)
    if len(w) != m:
        raise FormatError(f"{source}: 'w' has {len(w)} rows, expected one per facility ({m})")
    rows = []
    for j, row in enumerate(w):
        if not isinstance(row, list) or len(row) != n:
            raise FormatError(f"{source}: w[{j}] must list {n} payoffs (loads 1..{n})")
        vals = []
        for k, v in enumerate(row):
            x = parse_number(v, f"{source}: w[{j}][{k}]")
            if x < 0:
                raise FormatError(f"{source}: w[{j}][{k}] = {x} is negative")
            vals.append(x)
        rows.append(tuple(vals))
    return CongestionForm(n, tuple(rows))


def is_form_dict(data) -> bool:
    return isinstance(data, dict) and "facilities" in data


def load_any(path) -> Game | CongestionForm:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"{path}: {exc.strerror}") from None
    data = _load_json(text, str(path))
    if is_form_dict(data):
        return form_from_dict(data, str(path))
    return game_from_dict(data, str(path))


def load_game(path) -> Game:
    obj = load_any(path)
    if not isinstance(obj, Game):
        raise FormatError(f"{path}: expected a game file, found a congestion form")
    return obj


def load_form(path) -> CongestionForm:
    obj = load_any(path)
    if not isinstance(obj, CongestionForm):
        raise FormatError(f"{path}: expected a congestion form file")
    return obj


def game_to_dict(game: Game) -> dict:
    size = game.size
    return {
        "players": game.n_players,
        "strategies": list(game.strategy_counts),
        "payoffs": [
            [format_number(v) for v in game.payoffs[i * size : (i + 1) * size]]
            for i in range(game.n_players)
        ],
    }


def form_to_dict(form: CongestionForm) -> dict:
    return {
        "players": form.n_players,
        "facilities": form.n_facilities,
        "w": [[format_number(v) for v in row] for row in form.w],
    }


def _render(data: dict, table_key: str) -> str:
    """Canonical text: one line per scalar field, one line per table row."""
    lines = ["{"]
    keys = list(data)
    for n, key in enumerate(keys):
        comma = "," if n < len(keys) - 1 else ""
        value = data[key]
        if key == table_key:
            lines.append(f'  "{key}": [')
            for r, row in enumerate(value):
                tail = "," if r < len(value) - 1 else ""
                lines.append(f"    {json.dumps(row)}{tail}")
            lines.append(f"  ]{comma}")
        else:
            lines.append(f'  "{key}": {json.dumps(value)}{comma}')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dumps(obj: Game | CongestionForm) -> str:
    if isinstance(obj, CongestionForm):
        return _render(form_to_dict(obj), "w")
    return _render(game_to_dict(obj), "payoffs")


def save(obj: Game | CongestionForm, path) -> None:
    Path(path).write_text(dumps(obj))
