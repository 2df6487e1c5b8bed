#!/usr/bin/env python3
"""Print the horn-filling grid of a nerve and what it classifies as.

Usage:
    python3 scripts/kan_classify.py --family cyclic --size 3
    python3 scripts/kan_classify.py --family poset --size 3 --k 3
    python3 scripts/kan_classify.py --file my_groupoid.json

For each (n, i) with 2 <= n <= k the grid shows whether every horn fills
(weak Kan) and fills uniquely (strict Kan); inner horns sit between the
outer columns. Categories fill inner horns strictly but miss outer ones;
groupoid nerves fill everything uniquely.
"""

import argparse
import sys

from bibucalc import classify, kan_check, nerve, poset_category, truncated_free_monoid
from bibucalc.generators import standard_groupoid
from bibucalc import io as bio


def build(args):
    if args.file:
        kind, obj = bio.load_typed(args.file)
        if kind not in ("groupoid", "category"):
            raise SystemExit(f"need a groupoid or category file, got {kind}")
        return obj
    if args.family == "poset":
        return poset_category(args.size)
    if args.family == "monoid":
        return truncated_free_monoid(args.size)
    return standard_groupoid(args.family, args.size)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--family", default="cyclic",
                    choices=["trivial", "pair", "cyclic", "action", "poset", "monoid"])
    ap.add_argument("--size", type=int, default=3)
    ap.add_argument("--k", type=int, default=3, help="truncation level of the nerve")
    ap.add_argument("--file", help="groupoid/category JSON instead of a named family")
    args = ap.parse_args()

    C = build(args)
    X = nerve(C, args.k)
    sizes = " ".join(f"|X_{n}|={len(X.levels[n])}" for n in range(args.k + 1))
    print(f"nerve levels: {sizes}")

    for n in range(2, args.k + 1):
        cells = []
        for i in range(n + 1):
            weak = kan_check(X, n, i).ok
            strict = kan_check(X, n, i, strict=True).ok
            cells.append(f"({n},{i}): {'Kan! ' if strict else 'Kan  ' if weak else 'open '}")
        print("  " + "  ".join(cells))

    rep = classify(X)
    print(f"category nerve: {rep.is_nerve_of_category}")
    print(f"groupoid nerve: {rep.is_1_groupoid_nerve}")
    if rep.group_candidates:
        print(f"n-group evidence from level {min(rep.group_candidates)} "
              f"(single vertex: {rep.single_vertex})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
