"""Certify a family of candidate Poisson bivectors and fuzz random ones.

Usage: python3 scripts/certify_bivectors.py [--seed N] [--fuzz N]

The fixed family covers the first KdV structure, the rescaled second
structure, and single-term deformations a*b*b_x for small coefficients a.
For each certified structure the square of its differential is probed on
a panel of densities; --fuzz additionally draws random bivectors and
reports how many happen to be Poisson.
"""

import argparse

from varschouten import (
    GeneratorConfig,
    bracket_poisson,
    format_polynomial,
    is_poisson,
    multivector,
    normalize_to_bA_form,
    parse_polynomial,
    q_differential_check,
    random_multivector,
)

FAMILY = [
    "b*b_x",
    "b*b_xxx",
    "b*b_xxx + q*b*b_x",
    "q*b*b_x",
    "q_x*b*b_x",
    "q^2*b*b_x",
    "x*b*b_x",
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--fuzz", type=int, default=0, help="also try N random bivectors")
    args = ap.parse_args()
    cfg = GeneratorConfig(seed=args.seed)
    g = cfg.geometry

    for text in FAMILY:
        p = multivector(parse_polynomial(text, g))
        ok, witness = is_poisson(p)
        if ok:
            squared = q_differential_check(p)
            print(f"{text}: Poisson (differential squares to zero on probes: {squared})")
        else:
            shown = format_polynomial(normalize_to_bA_form(witness.density))
            print(f"{text}: not Poisson, witness class {shown}")

    if args.fuzz:
        poisson = 0
        for i in range(args.fuzz):
            p = random_multivector(cfg, 2, salt=f"fuzz:{i}")
            ok, _ = is_poisson(p)
            poisson += ok
            self_bracket = bracket_poisson(p, p)
            assert ok == self_bracket.zero
        print(f"fuzz: {poisson}/{args.fuzz} random bivectors were Poisson (seed {args.seed})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
