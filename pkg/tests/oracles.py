"""Independent oracles used by the test suite.

These deliberately avoid the code paths they are checking: the pairing oracle
derives the table by constraint propagation from the axioms, not by the
search compute_pairing uses, and the orbit oracle quotients pairs with a
union-find rather than the composer's walk.
"""
from __future__ import annotations

from bibucalc.bibundle import Bibundle, check_pairing_axioms, Pairing


def pairing_solutions(M: Bibundle) -> list[dict]:
    """All total pairing tables satisfying the defining property and the
    pairing axioms. By propagation from the diagonal the answer is always
    zero or one table; zero exactly when freeness or transitivity fails."""
    H = M.right_groupoid
    fibers: dict[str, list[str]] = {}
    for m in M.carrier:
        fibers.setdefault(M.lmap[m], []).append(m)
    table: dict[tuple[str, str], str] = {}
    for fiber in fibers.values():
        for m in fiber:
            row: dict[str, str] = {m: H.unit[M.rmap[m]]}
            frontier = [m]
            while frontier:
                b = frontier.pop()
                for h2 in H.l_fiber(M.rmap[b]):
                    b2 = M.act_right(b, h2)
                    val = H.comp[(row[b], h2)]
                    if b2 in row:
                        if row[b2] != val:
                            return []  # freeness fails: the row is overdetermined
                    else:
                        row[b2] = val
                        frontier.append(b2)
            if set(row) != set(fiber):
                return []  # transitivity fails: unreachable fiber points
            for b, h in row.items():
                table[(m, b)] = h
    if not check_pairing_axioms(M, Pairing(table)).ok:
        return []
    return [table]


def orbit_quotient(pairs, moves) -> dict:
    """Union-find quotient of `pairs` under the moves; returns the map from
    each pair to the least element of its class (in `pairs` order)."""
    index = {p: i for i, p in enumerate(pairs)}
    parent = list(range(len(pairs)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for p in pairs:
        for q in moves(p):
            a, b = find(index[p]), find(index[q])
            if a != b:
                # keep the least index as the representative
                lo, hi = min(a, b), max(a, b)
                parent[hi] = lo
    return {p: pairs[find(i)] for p, i in index.items()}
