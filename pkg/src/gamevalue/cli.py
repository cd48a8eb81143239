"""Command-line interface.

Exit status: 0 success, 1 analysis indeterminate (no Nash equilibrium found
by an incomplete method), 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import congestion as cg
from .equilibria import (
    Completeness,
    max_surplus_ce,
    nash_equilibria,
    verify_dual_certificate,
)
from .game import Game, GameError, MixedProfile
from .io import FormatError, dumps, load_any, parse_number
from .registry import EXAMPLES, example
from .search import GAME_CLASSES, SearchConfig, witness_search
from .values import ExtendedRational, ValueReport, analyze

EXIT_OK, EXIT_INDETERMINATE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, ExtendedRational):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def jnum(x, approx: bool):
    """JSON value for an exact number; with ``approx`` a float rides alongside."""
    if isinstance(x, ExtendedRational):
        if x.infinite:
            return {"inf": True}
        x = x.value
    if approx:
        return {"exact": fmt(x), "approx": float(x)}
    return fmt(x)


def resolve(spec: str, param=None):
    """A file path, or a registry name such as ``aumann`` or ``gamma_x:4``."""
    if Path(spec).exists():
        return load_any(spec)
    name = spec.split(":", 1)[0]
    if name in EXAMPLES:
        try:
            return example(spec, param)
        except (ValueError, KeyError) as exc:
            raise InputError(str(exc)) from None
    raise InputError(f"{spec}: no such file or example")


def as_game(obj) -> Game:
    return cg.induce_game(obj) if isinstance(obj, cg.CongestionForm) else obj


def mixed_json(p: MixedProfile, approx: bool):
    return [[jnum(x, approx) for x in strat] for strat in p.strategies]


def mixed_text(p: MixedProfile) -> str:
    return " ; ".join("(" + ", ".join(fmt(x) for x in strat) + ")" for strat in p.strategies)


def report_json(game: Game, rep: ValueReport, approx: bool) -> dict:
    vn = rep.v_n
    return {
        "v_N": {
            "value": None if vn.value is None else jnum(vn.value, approx),
            "completeness": vn.completeness.value,
            "degenerate": vn.degenerate,
            "witness": None if vn.witness is None else mixed_json(vn.witness, approx),
        },
        "v_C": jnum(rep.v_c, approx),
        "opt": jnum(rep.opt, approx),
        "mv": None if rep.mv.value is None else jnum(rep.mv.value, approx),
        "mv_exact": rep.mv.exact,
        "ev": jnum(rep.ev, approx),
        "ce": [
            {"profile": list(s), "weight": jnum(w, approx)} for s, w in rep.ce.mu.items()
        ],
        "certificate": {
            "beta": jnum(rep.ce.certificate.beta, approx),
            "alpha": [
                {"player": i, "deviation": t, "recommended": s, "value": jnum(a, approx)}
                for (i, t, s), a in sorted(rep.ce.certificate.alpha.items())
                if a
            ],
            "verified": verify_dual_certificate(game, rep.ce.certificate),
        },
    }


def report_text(game: Game, rep: ValueReport, approx: bool) -> str:
    def num(x):
        s = fmt(x)
        if approx and isinstance(x, Fraction) and x.denominator != 1:
            s += f" (~{float(x):.6g}, approximate)"
        return s

    vn = rep.v_n
    lines = []
    if vn.value is None:
        lines.append(f"v_N  unknown ({vn.completeness.value})")
    else:
        note = "" if vn.completeness is Completeness.COMPLETE else " (lower bound)"
        lines.append(f"v_N  {num(vn.value)}  [{vn.completeness.value}]{note}")
    lines.append(f"v_C  {num(rep.v_c)}")
    lines.append(f"opt  {num(rep.opt)}")
    if rep.mv.value is None:
        lines.append("MV   indeterminate")
    else:
        mv = rep.mv.value
        est = "" if rep.mv.exact else "  (estimate: upper bound)"
        lines.append(f"MV   {num(mv.value) if not mv.infinite else 'inf'}{est}")
    lines.append(f"EV   {num(rep.ev.value) if not rep.ev.infinite else 'inf'}")
    lines.append("best correlated equilibrium:")
    for s, w in rep.ce.mu.items():
        lines.append(f"  {s}  {num(w)}")
    ok = verify_dual_certificate(game, rep.ce.certificate)
    lines.append(f"dual certificate: beta = {fmt(rep.ce.certificate.beta)}, verified = {ok}")
    if vn.witness is not None:
        lines.append(f"best Nash equilibrium: {mixed_text(vn.witness)}")
    return "\n".join(lines)


def emit(args, payload, text: str) -> None:
    out = json.dumps(payload, indent=2) + "\n" if args.format == "json" else text + "\n"
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)


def form_checks(form: cg.CongestionForm, checks, thm410: bool):
    data, lines = {}, []
    if thm410:
        r = cg.thm410_check(form, with_lp=True)
        if r.achieved:
            vec = "(" + ",".join(map(str, r.vector)) + ")"
            lines.append(f"uniform witness: Achieved, π={vec}")
            data["thm410"] = {"achieved": True, "vector": list(r.vector)}
        else:
            kind = "v_C < opt" if r.conclusive else "no uniform witness found"
            lines.append(f"uniform witness: NotAchieved ({kind}); LP v_C = {fmt(r.v_c)}")
            data["thm410"] = {"achieved": False, "conclusive": r.conclusive, "v_C": fmt(r.v_c)}
    for check in checks or ():
        if check == "phi":
            a = cg.phi_bound_audit(form)
            lines.append(
                f"phi audit: {'pass' if a.passed else 'FAIL'}  v_C = {fmt(a.v_c)}, "
                f"split s = {a.split}, bound base = {fmt(a.bound)}"
                + ("  (fallback: no mixed profile at s+1)" if a.fallback else "")
            )
            data["phi"] = {
                "pass": a.passed, "v_C": fmt(a.v_c), "split": a.split,
                "base": fmt(a.bound), "fallback": a.fallback,
            }
        elif check == "claim1":
            ok = cg.claim1_check(form)
            lines.append(f"claim1: {'pass' if ok else 'FAIL'}")
            data["claim1"] = ok
        elif check == "concave":
            c = cg.thm47_check(form)
            lines.append(f"concavity: {c.outcome.value}" + (f" {c.profile}" if c.profile else ""))
            data["concave"] = {"outcome": c.outcome.name, "profile": c.profile and list(c.profile)}
    return data, lines


def cmd_analyze(args) -> int:
    obj = resolve(args.input, args.param)
    game = as_game(obj)
    rep = analyze(game)
    payload = report_json(game, rep, args.float)
    text = report_text(game, rep, args.float)
    if isinstance(obj, cg.CongestionForm):
        data, lines = form_checks(obj, args.check, args.thm410)
        payload.update(data)
        if lines:
            text += "\n" + "\n".join(lines)
    elif args.check or args.thm410:
        raise InputError("--check and --thm410 apply to congestion forms only")
    emit(args, payload, text)
    return EXIT_INDETERMINATE if rep.mv.value is None else EXIT_OK


def cmd_nash(args) -> int:
    game = as_game(resolve(args.input, args.param))
    ns = nash_equilibria(game)
    payload = {
        "completeness": ns.completeness.value,
        "degenerate": ns.degenerate,
        "equilibria": [
            {"profile": mixed_json(p, args.float), "surplus": jnum(u, args.float)}
            for p, u in ns.equilibria
        ],
    }
    lines = [f"{len(ns.equilibria)} equilibria [{ns.completeness.value}]"
             + (" (degenerate game)" if ns.degenerate else "")]
    lines += [f"  {mixed_text(p)}   surplus {fmt(u)}" for p, u in ns.equilibria]
    emit(args, payload, "\n".join(lines))
    return EXIT_OK if ns.equilibria else EXIT_INDETERMINATE


def cmd_ce(args) -> int:
    game = as_game(resolve(args.input, args.param))
    res = max_surplus_ce(game)
    ok = verify_dual_certificate(game, res.certificate)
    payload = {
        "v_C": jnum(res.value, args.float),
        "ce": [{"profile": list(s), "weight": jnum(w, args.float)} for s, w in res.mu.items()],
        "certificate": {
            "beta": jnum(res.certificate.beta, args.float),
            "alpha": [
                {"player": i, "deviation": t, "recommended": s, "value": jnum(a, args.float)}
                for (i, t, s), a in sorted(res.certificate.alpha.items())
            ],
            "verified": ok,
        },
    }
    lines = [f"v_C = {fmt(res.value)}"]
    lines += [f"  {s}  {fmt(w)}" for s, w in res.mu.items()]
    lines.append(f"certificate beta = {fmt(res.certificate.beta)}, verified = {ok}")
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_congestion(args) -> int:
    obj = resolve(args.input, args.param)
    if not isinstance(obj, cg.CongestionForm):
        raise InputError("congestion needs a congestion form")
    f = obj
    best = cg.opt_of_form(f)
    vectors = []
    for pi in cg.congestion_vectors(f.n_players, f.n_facilities):
        vectors.append({
            "vector": list(pi),
            "surplus": fmt(cg.surplus_of_vector(f, pi)),
            "equilibrium": cg.vector_in_equilibrium(f, pi),
            "profiles": cg.count_B(pi),
        })
    eq = cg.rosenthal_pure_eq(f)
    payload = {
        "players": f.n_players,
        "facilities": f.n_facilities,
        "symmetric": f.symmetric,
        "non_increasing": f.non_increasing,
        "linear": f.linear,
        "opt": fmt(best),
        "vectors": vectors,
        "dynamics_equilibrium": list(eq),
    }
    lines = [
        f"{f.n_players} players, {f.n_facilities} facilities; symmetric={f.symmetric} "
        f"non_increasing={f.non_increasing} linear={f.linear}",
        f"opt = {fmt(best)}",
        "vector        surplus   equilibrium  |B|",
    ]
    for v in vectors:
        vec = "(" + ",".join(map(str, v["vector"])) + ")"
        lines.append(f"{vec:<13} {v['surplus']:<9} {str(v['equilibrium']):<12} {v['profiles']}")
    lines.append(f"better-response dynamics reach {eq}")
    data, extra = form_checks(f, args.check, args.thm410)
    payload.update(data)
    lines += extra
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_example(args) -> int:
    if args.name is None:
        emit(args, sorted(EXAMPLES), "\n".join(sorted(EXAMPLES)))
        return EXIT_OK
    try:
        obj = example(args.name, args.param)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc).strip("'\"")) from None
    text = dumps(obj)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _grid(spec: str):
    if ".." in spec and "," not in spec:
        lo, hi = spec.split("..")
        return tuple(Fraction(k) for k in range(int(lo), int(hi) + 1))
    return tuple(parse_number(x, "--grid") for x in spec.split(","))


def cmd_search(args) -> int:
    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("GAMEVALUE_SEED", "0"))
    try:
        cfg = SearchConfig(
            game_class=args.cls,
            shape=tuple(int(k) for k in args.shape.split("x")),
            grid=_grid(args.grid),
            seed=seed,
            iterations=args.iterations,
            target=args.target,
            threshold=parse_number(args.threshold, "--threshold"),
            linear=args.linear,
            no_strict_dominance=args.no_strict_dominance,
            allow_partial=args.allow_partial,
        )
    except (ValueError, FormatError) as exc:
        raise InputError(str(exc)) from None
    res = witness_search(cfg)
    best = res.best
    payload = {
        "seed": cfg.seed,
        "iterations": cfg.iterations,
        "skipped": res.skipped,
        "best_iteration": res.best_iteration,
        "best_value": None if res.best_value is None else res.best_value.to_json(),
        "estimate": res.estimate,
        "threshold": fmt(cfg.threshold),
        "threshold_met": res.threshold_met,
        "transcript": [{"iteration": t, "value": v} for t, v in res.transcript],
        "witness": None if best is None else json.loads(dumps(best)),
    }
    status = "met" if res.threshold_met else "not met (inconclusive)"
    lines = [
        f"searched {cfg.iterations} instances of class {cfg.game_class} {args.shape} (seed {cfg.seed})",
        f"best {cfg.target.upper()} = {res.best_value} at iteration {res.best_iteration}"
        + (" (estimate)" if res.estimate else ""),
        f"threshold {fmt(cfg.threshold)}: {status}",
    ]
    if best is not None:
        lines.append("witness:")
        lines.append(dumps(best).rstrip())
    emit(args, payload, "\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, suppress):
        # subcommands repeat the flags without defaults so they never mask
        # values given before the subcommand name
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        parser.add_argument("--format", choices=["text", "json"], default=d("text"))
        parser.add_argument("--out", default=d(None),
                            help="write output to this file instead of stdout")
        parser.add_argument("--seed", type=int, default=d(None),
                            help="PRNG seed (default: $GAMEVALUE_SEED or 0)")
        parser.add_argument("--float", action="store_true", default=d(False),
                            help="add approximate decimals next to exact values")

    common = argparse.ArgumentParser(add_help=False)
    global_flags(common, suppress=True)
    p = argparse.ArgumentParser(
        prog="gamevalue",
        description="Exact mediation and enforcement values of finite games.",
    )
    global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def with_input(name, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.add_argument("input", help="game/form JSON file or example name (e.g. gamma_x:4)")
        sp.add_argument("--param", help="parameter for parametric examples")
        return sp

    a = with_input("analyze", "v_N, v_C, opt, MV and EV with witnesses")
    a.add_argument("--check", action="append", choices=["phi", "claim1", "concave"],
                   help="extra audits for congestion forms (repeatable)")
    a.add_argument("--thm410", action="store_true",
                   help="search a uniform correlated equilibrium attaining opt (symmetric forms)")
    a.set_defaults(func=cmd_analyze)

    with_input("nash", "Nash equilibria").set_defaults(func=cmd_nash)
    with_input("ce", "best correlated equilibrium and dual certificate").set_defaults(func=cmd_ce)

    c = with_input("congestion", "congestion vectors, equilibria and audits")
    c.add_argument("--check", action="append", choices=["phi", "claim1", "concave"])
    c.add_argument("--thm410", action="store_true")
    c.set_defaults(func=cmd_congestion)

    e = sub.add_parser("example", help="print a registry example as JSON", parents=[common])
    e.add_argument("name", nargs="?")
    e.add_argument("--param")
    e.set_defaults(func=cmd_example)

    s = sub.add_parser("search", help="seeded random search for high MV/EV", parents=[common])
    s.add_argument("--class", dest="cls", choices=GAME_CLASSES, default="general")
    s.add_argument("--shape", default="2x3",
                   help="strategy counts (general) or PLAYERSxFACILITIES (congestion)")
    s.add_argument("--grid", default="0..10", help="'lo..hi' integers or comma-separated values")
    s.add_argument("--iterations", type=int, default=1000)
    s.add_argument("--target", choices=["mv", "ev"], default="mv")
    s.add_argument("--threshold", default="4/3")
    s.add_argument("--linear", action="store_true")
    s.add_argument("--no-strict-dominance", action="store_true")
    s.add_argument("--allow-partial", action="store_true")
    s.set_defaults(func=cmd_search)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, FormatError, GameError, cg.NotApplicable) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
