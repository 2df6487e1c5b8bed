"""Bibundles: finite sets with commuting left and right groupoid actions.

A G-H bibundle M carries moment maps lmap: M -> G_0 and rmap: M -> H_0.
act_left(g, m) is defined when r(g) == lmap(m); it moves the left moment to
l(g) and keeps the right moment. act_right(m, h) mirrors this on the other
side. The two actions commute.

Actions live behind accessors. Small hand-built bundles use plain dict
tables; products and composites plug in closures so that large intermediate
tables are never stored. left_table()/right_table() materialise either kind.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .core import (
    FinGroupoid,
    FinSet,
    StructuralError,
    ValidationReport,
    Violation,
    finset,
)

ActFn = Callable[[str, str], str]


@dataclass(frozen=True, eq=False)
class Bibundle:
    left_groupoid: FinGroupoid
    right_groupoid: FinGroupoid
    carrier: FinSet
    lmap: Mapping[str, str]
    rmap: Mapping[str, str]
    left_fn: ActFn = field(repr=False)
    right_fn: ActFn = field(repr=False)

    def act_left(self, g: str, m: str) -> str:
        if m not in self.carrier:
            raise StructuralError(f"{m!r} is not a carrier point")
        if self.left_groupoid.r.get(g) != self.lmap[m]:
            raise StructuralError(
                f"left action undefined: r({g!r}) != lmap({m!r})"
            )
        return self.left_fn(g, m)

    def act_right(self, m: str, h: str) -> str:
        if m not in self.carrier:
            raise StructuralError(f"{m!r} is not a carrier point")
        if self.right_groupoid.l.get(h) != self.rmap[m]:
            raise StructuralError(
                f"right action undefined: l({h!r}) != rmap({m!r})"
            )
        return self.right_fn(m, h)

    def left_table(self) -> dict[tuple[str, str], str]:
        G = self.left_groupoid
        out = {}
        for m in self.carrier:
            for g in G.r_fiber(self.lmap[m]):
                out[(g, m)] = self.left_fn(g, m)
        return out

    def right_table(self) -> dict[tuple[str, str], str]:
        H = self.right_groupoid
        out = {}
        for m in self.carrier:
            for h in H.l_fiber(self.rmap[m]):
                out[(m, h)] = self.right_fn(m, h)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bibundle):
            return NotImplemented
        return (
            self.left_groupoid == other.left_groupoid
            and self.right_groupoid == other.right_groupoid
            and self.carrier == other.carrier
            and dict(self.lmap) == dict(other.lmap)
            and dict(self.rmap) == dict(other.rmap)
            and self.left_table() == other.left_table()
            and self.right_table() == other.right_table()
        )

    __hash__ = None  # type: ignore[assignment]


def bibundle_from_tables(
    G: FinGroupoid,
    H: FinGroupoid,
    carrier: FinSet | Iterable[str],
    lmap: Mapping[str, str],
    rmap: Mapping[str, str],
    left_table: Mapping[tuple[str, str], str],
    right_table: Mapping[tuple[str, str], str],
) -> Bibundle:
    """Build a bibundle from explicit action tables (no validation here)."""
    cset = carrier if isinstance(carrier, FinSet) else finset(list(carrier))
    lt = dict(left_table)
    rt = dict(right_table)

    def left_fn(g: str, m: str) -> str:
        try:
            return lt[(g, m)]
        except KeyError:
            raise StructuralError(f"left action table missing ({g!r}, {m!r})") from None

    def right_fn(m: str, h: str) -> str:
        try:
            return rt[(m, h)]
        except KeyError:
            raise StructuralError(f"right action table missing ({m!r}, {h!r})") from None

    return Bibundle(G, H, cset, dict(lmap), dict(rmap), left_fn, right_fn)


def validate_bibundle(M: Bibundle) -> ValidationReport:
    out: list[Violation] = []
    G, H = M.left_groupoid, M.right_groupoid
    for m in M.carrier:
        if M.lmap.get(m) not in G.objects:
            out.append(Violation("structural", "lmap", "left moment misses G objects", (m,)))
        if M.rmap.get(m) not in H.objects:
            out.append(Violation("structural", "rmap", "right moment misses H objects", (m,)))
    for m in M.lmap:
        if m not in M.carrier:
            out.append(Violation("structural", "lmap-domain", "left moment defined off the carrier", (m,)))
    for m in M.rmap:
        if m not in M.carrier:
            out.append(Violation("structural", "rmap-domain", "right moment defined off the carrier", (m,)))
    if out:
        return ValidationReport(tuple(out))

    lt = M.left_table()
    rt = M.right_table()
    for (g, m), m2 in lt.items():
        if m2 not in M.carrier:
            out.append(Violation("structural", "left-act-range", "left action leaves the carrier", (g, m, m2)))
            continue
        if M.lmap[m2] != G.l[g]:
            out.append(Violation("axiom", "left-act-lmap", "left action moves lmap wrongly", (g, m)))
        if M.rmap[m2] != M.rmap[m]:
            out.append(Violation("axiom", "left-act-rmap", "left action must fix rmap", (g, m)))
    for (m, h), m2 in rt.items():
        if m2 not in M.carrier:
            out.append(Violation("structural", "right-act-range", "right action leaves the carrier", (m, h, m2)))
            continue
        if M.rmap[m2] != H.r[h]:
            out.append(Violation("axiom", "right-act-rmap", "right action moves rmap wrongly", (m, h)))
        if M.lmap[m2] != M.lmap[m]:
            out.append(Violation("axiom", "right-act-lmap", "right action must fix lmap", (m, h)))
    if out:
        return ValidationReport(tuple(out))

    for m in M.carrier:
        if lt[(G.unit[M.lmap[m]], m)] != m:
            out.append(Violation("axiom", "left-unit", "left unit action is not the identity", (m,)))
        if rt[(m, H.unit[M.rmap[m]])] != m:
            out.append(Violation("axiom", "right-unit", "right unit action is not the identity", (m,)))
    # composition laws and commutation
    for m in M.carrier:
        for g2 in G.r_fiber(M.lmap[m]):
            m2 = lt[(g2, m)]
            for g1 in G.r_fiber(G.l[g2]):
                if lt[(g1, m2)] != lt[(G.comp[(g1, g2)], m)]:
                    out.append(Violation("axiom", "left-assoc", "left action is not associative", (g1, g2, m)))
        for h1 in H.l_fiber(M.rmap[m]):
            m2 = rt[(m, h1)]
            for h2 in H.l_fiber(H.r[h1]):
                if rt[(m2, h2)] != rt[(m, H.comp[(h1, h2)])]:
                    out.append(Violation("axiom", "right-assoc", "right action is not associative", (m, h1, h2)))
        for g in G.r_fiber(M.lmap[m]):
            for h in H.l_fiber(M.rmap[m]):
                if rt[(lt[(g, m)], h)] != lt[(g, rt[(m, h)])]:
                    out.append(Violation("axiom", "commute", "left and right actions do not commute", (g, m, h)))
    return ValidationReport(tuple(out))


@dataclass(frozen=True)
class PrincipalityReport:
    side: str  # "left" or "right"
    surjective: bool
    free: bool
    transitive: bool
    witnesses: dict = field(default_factory=dict)
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.surjective and self.free and self.transitive


def _fibers(M: Bibundle, moment: Mapping[str, str]) -> dict[str, list[str]]:
    out: dict[str, list[str]] = {}
    for m in M.carrier:
        out.setdefault(moment[m], []).append(m)
    return out


def check_principal(M: Bibundle, side: str = "right") -> PrincipalityReport:
    """Right principality: lmap surjective, right action free and transitive
    on the lmap fibers. The left version mirrors the roles.
    """
    if side not in ("left", "right"):
        raise StructuralError(f"side must be 'left' or 'right', not {side!r}")
    witnesses: dict = {}
    note = ""
    if side == "right":
        base_objects = M.left_groupoid.objects
        fiber_of = _fibers(M, M.lmap)
        acting = M.right_groupoid
        moment = M.rmap

        def move(m: str, k: str) -> str:
            return M.act_right(m, k)

        def arrows_at(m: str) -> tuple[str, ...]:
            return acting.l_fiber(moment[m])
    else:
        base_objects = M.right_groupoid.objects
        fiber_of = _fibers(M, M.rmap)
        acting = M.left_groupoid
        moment = M.lmap

        def move(m: str, k: str) -> str:
            return M.act_left(k, m)

        def arrows_at(m: str) -> tuple[str, ...]:
            return acting.r_fiber(moment[m])

    surjective = True
    for x in base_objects:
        if not fiber_of.get(x):
            surjective = False
            witnesses["surjective"] = x
            break
    free = True
    for m in M.carrier:
        if not free:
            break
        u = acting.unit[moment[m]]
        for k in arrows_at(m):
            if k != u and move(m, k) == m:
                free = False
                witnesses["free"] = (m, k)
                break
    transitive = True
    empty_seen = False
    for x, fiber in ((x, fiber_of.get(x, [])) for x in base_objects):
        if not fiber:
            empty_seen = True
            continue
        m0 = fiber[0]
        for m in fiber[1:]:
            if not any(move(m, k) == m0 for k in arrows_at(m)):
                transitive = False
                witnesses["transitive"] = (m, m0)
                break
        if not transitive:
            break
    if empty_seen and transitive:
        note = "some fibers are empty; transitivity holds vacuously there"
    return PrincipalityReport(side, surjective, free, transitive, witnesses, note)


@dataclass(frozen=True)
class Pairing:
    """The H-valued pairing of a G-H bibundle: <m, m2> is the unique arrow
    with m . <m, m2> == m2, defined for pairs in the same lmap fiber."""

    table: Mapping[tuple[str, str], str]


@dataclass(frozen=True)
class NoPairing:
    reason: str  # "free" or "transitive"
    witness: tuple


def compute_pairing(M: Bibundle) -> Pairing | NoPairing:
    """Unique pairing when the right action is free and fiberwise transitive;
    otherwise a refusal carrying a counterexample (freeness ones preferred)."""
    H = M.right_groupoid
    for m in M.carrier:
        u = H.unit[M.rmap[m]]
        for h in H.l_fiber(M.rmap[m]):
            if h != u and M.act_right(m, h) == m:
                return NoPairing("free", (m, h))
    table: dict[tuple[str, str], str] = {}
    fibers = _fibers(M, M.lmap)
    for fiber in fibers.values():
        for m in fiber:
            for m2 in fiber:
                found = None
                for h in H.l_fiber(M.rmap[m]):
                    if M.act_right(m, h) == m2:
                        found = h
                        break
                if found is None:
                    return NoPairing("transitive", (m, m2))
                table[(m, m2)] = found
    return Pairing(table)


def check_pairing_axioms(M: Bibundle, P: Pairing) -> ValidationReport:
    """The four pairing laws plus injectivity of each row.

    H1: <m, m2 . h> == <m, m2> . h
    H2: <m, m2> == inv(<m2, m>)
    H3: <m, m> == unit(rmap(m)) and m2 |-> <m, m2> is injective
    H4: <g . m, m2> == <m, inv(g) . m2>
    """
    out: list[Violation] = []
    G, H = M.left_groupoid, M.right_groupoid
    t = P.table
    fibers = _fibers(M, M.lmap)
    for x, fiber in fibers.items():
        for m in fiber:
            for m2 in fiber:
                if (m, m2) not in t:
                    out.append(Violation("structural", "pairing-missing", "pairing undefined on a fiber pair", (m, m2)))
    if out:
        return ValidationReport(tuple(out))
    for (m, m2), h in t.items():
        if M.act_right(m, h) != m2:
            out.append(Violation("axiom", "pairing-def", "m . <m, m2> != m2", (m, m2)))
    for x, fiber in fibers.items():
        for m in fiber:
            u = H.unit[M.rmap[m]]
            if t[(m, m)] != u:
                out.append(Violation("axiom", "H3", "<m, m> is not the unit", (m,)))
            seen: dict[str, str] = {}
            for m2 in fiber:
                h = t[(m, m2)]
                if h in seen:
                    out.append(Violation("axiom", "H3", "row of the pairing is not injective", (m, seen[h], m2)))
                seen[h] = m2
            for m2 in fiber:
                if t[(m, m2)] != H.inv[t[(m2, m)]]:
                    out.append(Violation("axiom", "H2", "<m, m2> != inv(<m2, m>)", (m, m2)))
                for h in H.l_fiber(M.rmap[m2]):
                    if t[(m, M.act_right(m2, h))] != H.comp[(t[(m, m2)], h)]:
                        out.append(Violation("axiom", "H1", "<m, m2 . h> != <m, m2> . h", (m, m2, h)))
    for m in M.carrier:
        for g in G.r_fiber(M.lmap[m]):
            gi = G.inv[g]
            for m2 in fibers.get(G.l[g], []):
                if t[(M.act_left(g, m), m2)] != t[(m, M.act_left(gi, m2))]:
                    out.append(Violation("axiom", "H4", "<g.m, m2> != <m, inv(g).m2>", (g, m, m2)))
    return ValidationReport(tuple(out))
