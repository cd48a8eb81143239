"""Seeded search for games with large mediation or enforcement values.

Runs several classes in turn and writes one JSON record per run, e.g.

    python3 scripts/search_probe.py --iterations 2000 --out probes.jsonl
"""

import argparse
import json
import time
from fractions import Fraction

from gamevalue.io import dumps
from gamevalue.search import SearchConfig, witness_search

PROBES = [
    # (class, shape, target, extra)
    ("general", (2, 2), "mv", {}),
    ("general", (2, 3), "mv", {}),
    ("general", (3, 3), "mv", {"no_strict_dominance": True}),
    ("general", (2, 2), "ev", {}),
    ("S", (2, 3), "mv", {}),
    ("SN", (2, 3), "mv", {}),
    ("SN", (4, 2), "ev", {"linear": True}),
    ("I", (4, 2), "ev", {}),
]


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--iterations", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="append JSON lines here")
    args = p.parse_args()
    grid = tuple(Fraction(k) for k in range(11))
    for cls, shape, target, extra in PROBES:
        cfg = SearchConfig(game_class=cls, shape=shape, grid=grid, seed=args.seed,
                           iterations=args.iterations, target=target, **extra)
        start = time.perf_counter()
        res = witness_search(cfg)
        elapsed = time.perf_counter() - start
        shape_s = "x".join(map(str, shape))
        print(f"{cls:>7} {shape_s:>5} {target}: best {res.best_value} at t={res.best_iteration} "
              f"({elapsed:.1f}s){' estimate' if res.estimate else ''}")
        if args.out:
            record = {
                "class": cls, "shape": list(shape), "target": target, "extra": extra,
                "seed": args.seed, "iterations": args.iterations,
                "best": None if res.best_value is None else res.best_value.to_json(),
                "iteration": res.best_iteration, "seconds": round(elapsed, 2),
                "witness": None if res.best is None else json.loads(dumps(res.best)),
            }
            with open(args.out, "a") as fh:
                fh.write(json.dumps(record) + "\n")


if __name__ == "__main__":
    main()
