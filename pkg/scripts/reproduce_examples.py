"""Recompute the worked examples: Aumann's game, the Gamma_x family, Examples 1 and 2.

    python3 scripts/reproduce_examples.py [--x 2 3 4 100]
"""

import argparse
from fractions import Fraction

from gamevalue.congestion import (
    enumerate_A,
    induce_game,
    phi_bound_audit,
    surplus_of_vector,
    thm410_check,
    vector_in_equilibrium,
)
from gamevalue.equilibria import is_correlated_equilibrium, max_surplus_ce, pure_nash, v_n
from gamevalue.game import CorrelatedStrategy, surplus
from gamevalue.registry import aumann, example1, example2, gamma_x
from gamevalue.values import analyze


def show_report(name, game):
    r = analyze(game)
    print(f"{name}: v_N={r.v_n.value} [{r.v_n.completeness.value}]  v_C={r.v_c}  opt={r.opt}  "
          f"MV={r.mv.value}  EV={r.ev}")


def gamma_table(xs):
    print("\nGamma_x: measured v_C against the closed form 4x/3")
    print(f"{'x':>6} {'v_N':>6} {'v_C':>8} {'4x/3':>8} {'MV':>10} {'agrees':>7}")
    for x in xs:
        r = analyze(gamma_x(x))
        closed = 4 * x / 3
        print(f"{str(x):>6} {str(r.v_n.value):>6} {str(r.v_c):>8} {str(closed):>8} "
              f"{str(r.mv.value):>10} {str(r.v_c == closed):>7}")


def example1_details():
    form = example1()
    g = induce_game(form)
    print("\nExample 1 (w_f = 24,12,0; w_g = 8,8,8)")
    print("  pure equilibria:", pure_nash(g), "surplus", sorted({str(g.profile_surplus(s)) for s in pure_nash(g)}))
    mu = CorrelatedStrategy.uniform([s for s in g.profiles() if len(set(s)) > 1])
    print(f"  uniform over non-constant profiles: CE={is_correlated_equilibrium(g, mu)}, surplus={surplus(g, mu)}")
    print(f"  v_C={max_surplus_ce(g).value}, v_N (pure scan)={v_n(g).value}")
    a = phi_bound_audit(form)
    print(f"  phi audit: pass={a.passed}, split s={a.split}, base={a.bound}")


def example2_details():
    form = example2()
    g = induce_game(form)
    print("\nExample 2 (six players, w = 1.5,1,4,4.5,4.5,3 on both facilities)")
    for pi in [(3, 3), (1, 5)]:
        mu = CorrelatedStrategy.uniform(enumerate_A(form, pi))
        print(f"  pi={pi}: u={surplus_of_vector(form, pi)}, in equilibrium={vector_in_equilibrium(form, pi)}, "
              f"|A|={len(mu)}, uniform A is CE={is_correlated_equilibrium(g, mu)}")
    r = thm410_check(form, with_lp=True)
    print(f"  uniform witness: achieved={r.achieved}, pi={r.vector}")
    show_report("  induced game", g)


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--x", nargs="*", default=["2", "3", "4", "10", "100"])
    args = p.parse_args()
    show_report("Aumann", aumann())
    gamma_table([Fraction(x) for x in args.x])
    example1_details()
    example2_details()


if __name__ == "__main__":
    main()
