#!/usr/bin/env python3
"""Sweep the string-diagram identity list over a family of base groupoids.

Usage:
    python3 scripts/identity_sweep.py
    python3 scripts/identity_sweep.py --random 5 --seed 7

Checks the comonoid laws, both zig-zags, the flip relations, and the
pairing/diagonal absorption identities on each base, printing one row per
(base, identity) pair. Exit code 1 if anything fails.
"""

import argparse
import random
import sys

from bibucalc import DiagramEnv, check_identity
from bibucalc.generators import random_groupoid, standard_groupoid

IDENTITIES = [
    ("delta ; (delta * id)", "delta ; (id * delta)"),
    ("delta ; (eps * id)", "id"),
    ("delta ; (id * eps)", "id"),
    ("(cv * id) ; (id * ev)", "id"),
    ("(id * cv) ; (ev * id)", "id"),
    ("tau ; tau", "id * id"),
    ("delta ; tau", "delta"),
    ("tau ; ev", "ev"),
    ("cv ; tau", "cv"),
    ("cv ; (delta * eps)", "cv"),
    ("cv ; (eps * delta)", "cv"),
]

DEFAULT_BASES = [
    ("trivial(2)", lambda: standard_groupoid("trivial", 2)),
    ("pair(3)", lambda: standard_groupoid("pair", 3)),
    ("cyclic(4)", lambda: standard_groupoid("cyclic", 4)),
    ("action(3)", lambda: standard_groupoid("action", 3)),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--random", type=int, default=0, metavar="K",
                    help="also sweep K random bases")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    bases = [(name, mk()) for name, mk in DEFAULT_BASES]
    rng = random.Random(args.seed)
    for k in range(args.random):
        bases.append((f"random#{k}", random_groupoid(rng, max_objects=3, max_isotropy=2)))

    width = max(len(lhs) + len(rhs) for lhs, rhs in IDENTITIES) + 4
    bad = 0
    for name, G in bases:
        env = DiagramEnv(G)
        print(f"-- {name}: {len(G.objects)} objects, {len(G.arrows)} arrows")
        for lhs, rhs in IDENTITIES:
            rep = check_identity(env, lhs, rhs)
            mark = "ok" if rep.ok else "FAIL"
            print(f"   {lhs} == {rhs:<{width - len(lhs)}} {mark}")
            bad += not rep.ok
    print(f"{len(bases) * len(IDENTITIES)} checks, {bad} failures")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
