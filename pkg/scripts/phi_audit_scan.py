"""Audit the golden-ratio bound on random linear non-increasing two-facility forms.

Reports how often the mixed profile at s+1 exists, how often the audit falls
back to u(pi_s) alone, and the largest observed v_C / bound ratio.

    python3 scripts/phi_audit_scan.py --count 300 --max-players 6
"""

import argparse
from fractions import Fraction

from gamevalue.congestion import claim1_check, phi_bound_audit
from gamevalue.search import SearchConfig, SplitMix64, sample


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--max-players", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()
    rng = SplitMix64(args.seed)
    grid = tuple(Fraction(k) for k in range(11))
    fallback = failures = 0
    worst, worst_form = Fraction(0), None
    for _ in range(args.count):
        n = 2 + rng.below(args.max_players - 1)
        cfg = SearchConfig(game_class="SN", shape=(n, 2), grid=grid, linear=True, target="ev")
        form = sample(cfg, rng)
        assert claim1_check(form)
        audit = phi_bound_audit(form)
        fallback += audit.fallback
        failures += not audit.passed
        if audit.bound and audit.v_c / audit.bound > worst:
            worst, worst_form = audit.v_c / audit.bound, form
    print(f"forms: {args.count}, audit failures: {failures}, fallback used: {fallback}")
    print(f"largest v_C / bound: {worst} (~{float(worst):.4f}; golden ratio ~1.6180)")
    if worst_form is not None:
        print(f"  attained at n={worst_form.n_players}, w={[list(map(str, r)) for r in worst_form.w]}")


if __name__ == "__main__":
    main()
