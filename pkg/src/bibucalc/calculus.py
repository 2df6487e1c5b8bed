"""Composition calculus for bibundles.

Composition of a G-H bibundle M with an H-K bibundle N is the fiber product
over H_0 divided by the diagonal H-action (m, n) ~ (m.h, inv(h).n). Instead
of keeping raw orbits around, every composite stores one canonical
representative per orbit: the lexicographically least pair in carrier order.
project(m, n) sends any composable pair to its representative, so actions on
the composite are "act on one leg, then project".

Two strategies compute representatives. When the right H-action on M is free
and transitive on each lmap fiber (checked per fiber, not assumed), the
unique arrow into the fiber-least element gives an O(1) projection. The
orbit walk below handles everything else. Both give the same representative,
so callers never see which one ran.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping, Sequence

from .bibundle import Bibundle, PrincipalityReport, check_principal
from .core import (
    FinGroupoid,
    FinSet,
    GroupoidHom,
    StructuralError,
    ValidationReport,
    Violation,
    finset,
    power_groupoid,
    product_groupoid,
    swap_hom,
    trivial_groupoid,
)
from .labels import tup, untup


def _same_groupoid(A: FinGroupoid, B: FinGroupoid) -> bool:
    return A is B or A == B


# ---------------------------------------------------------------------------
# generator bibundles


def identity_bibundle(G: FinGroupoid) -> Bibundle:
    """G acting on its own arrows by composition on both sides."""
    return Bibundle(
        G, G, G.arrows, dict(G.l), dict(G.r),
        lambda g, m: G.comp[(g, m)],
        lambda m, h: G.comp[(m, h)],
    )


def diagonal_bibundle(G: FinGroupoid) -> Bibundle:
    """The G-(GxG) bibundle of pairs of arrows with a common left object."""
    P = power_groupoid(G, 2)
    carrier = []
    lmap = {}
    rmap = {}
    for g1 in G.arrows:
        for g2 in G.arrows:
            if G.l[g1] != G.l[g2]:
                continue
            m = tup(g1, g2)
            carrier.append(m)
            lmap[m] = G.l[g1]
            rmap[m] = tup(G.r[g1], G.r[g2])

    def left_fn(g: str, m: str) -> str:
        g1, g2 = untup(m)
        return tup(G.comp[(g, g1)], G.comp[(g, g2)])

    def right_fn(m: str, h: str) -> str:
        g1, g2 = untup(m)
        h1, h2 = untup(h)
        return tup(G.comp[(g1, h1)], G.comp[(g2, h2)])

    return Bibundle(G, P, finset(carrier), lmap, rmap, left_fn, right_fn)


def terminal_bibundle(G: FinGroupoid) -> Bibundle:
    """G_0 as a bibundle from G to the empty power; the left action moves along l."""
    T = power_groupoid(G, 0)
    return Bibundle(
        G, T, G.objects,
        {x: x for x in G.objects}, {x: "()" for x in G.objects},
        lambda g, x: G.l[g],
        lambda x, h: x,
    )


def ev_bibundle(G: FinGroupoid) -> Bibundle:
    """Arrows of G as a bibundle from GxG to the empty power; (g1,g2).m = g1 m inv(g2)."""
    P = power_groupoid(G, 2)
    T = power_groupoid(G, 0)

    def left_fn(gg: str, m: str) -> str:
        g1, g2 = untup(gg)
        return G.comp[(G.comp[(g1, m)], G.inv[g2])]

    return Bibundle(
        P, T, G.arrows,
        {m: tup(G.l[m], G.r[m]) for m in G.arrows},
        {m: "()" for m in G.arrows},
        left_fn,
        lambda m, h: m,
    )


def cv_bibundle(G: FinGroupoid) -> Bibundle:
    """Arrows of G as a bibundle from the empty power to GxG; m.(h1,h2) = inv(h1) m h2."""
    P = power_groupoid(G, 2)
    T = power_groupoid(G, 0)

    def right_fn(m: str, hh: str) -> str:
        h1, h2 = untup(hh)
        return G.comp[(G.comp[(G.inv[h1], m)], h2)]

    return Bibundle(
        T, P, G.arrows,
        {m: "()" for m in G.arrows},
        {m: tup(G.l[m], G.r[m]) for m in G.arrows},
        lambda g, m: m,
        right_fn,
    )


def bundlize(phi: GroupoidHom) -> Bibundle:
    """The right-principal bibundle of a homomorphism phi: G -> H.

    Carrier points are (x, h) with phi0(x) == l(h); G acts through phi on the
    left leg, H composes on the right leg.
    """
    G, H = phi.source, phi.target
    carrier = []
    lmap = {}
    rmap = {}
    for x in G.objects:
        for h in H.l_fiber(phi.f0[x]):
            m = tup(x, h)
            carrier.append(m)
            lmap[m] = x
            rmap[m] = H.r[h]

    def left_fn(g: str, m: str) -> str:
        x, h = untup(m)
        return tup(G.l[g], H.comp[(phi.f1[g], h)])

    def right_fn(m: str, h2: str) -> str:
        x, h = untup(m)
        return tup(x, H.comp[(h, h2)])

    return Bibundle(G, H, finset(carrier), lmap, rmap, left_fn, right_fn)


def flip_bibundle(G: FinGroupoid, H: FinGroupoid) -> Bibundle:
    return bundlize(swap_hom(G, H))


def opposite_bibundle(M: Bibundle) -> Bibundle:
    """Same carrier, swapped moments, actions through the inverses."""
    G, H = M.left_groupoid, M.right_groupoid
    left_fn = M.left_fn
    right_fn = M.right_fn
    Ginv, Hinv = G.inv, H.inv
    return Bibundle(
        H, G, M.carrier, dict(M.rmap), dict(M.lmap),
        lambda h, m: right_fn(m, Hinv[h]),
        lambda m, g: left_fn(Ginv[g], m),
    )


def tensor_bibundle(M: Bibundle, N: Bibundle) -> Bibundle:
    """(GxG')-(HxH') bibundle of pairs with componentwise actions."""
    G = product_groupoid([M.left_groupoid, N.left_groupoid])
    H = product_groupoid([M.right_groupoid, N.right_groupoid])
    carrier = []
    lmap = {}
    rmap = {}
    for m in M.carrier:
        for n in N.carrier:
            p = tup(m, n)
            carrier.append(p)
            lmap[p] = tup(M.lmap[m], N.lmap[n])
            rmap[p] = tup(M.rmap[m], N.rmap[n])
    mleft, nleft = M.left_fn, N.left_fn
    mright, nright = M.right_fn, N.right_fn

    def left_fn(gg: str, p: str) -> str:
        g1, g2 = untup(gg)
        m, n = untup(p)
        return tup(mleft(g1, m), nleft(g2, n))

    def right_fn(p: str, hh: str) -> str:
        h1, h2 = untup(hh)
        m, n = untup(p)
        return tup(mright(m, h1), nright(n, h2))

    return Bibundle(G, H, finset(carrier), lmap, rmap, left_fn, right_fn)


def relabel_bibundle(M: Bibundle, rename: Mapping[str, str]) -> Bibundle:
    """Rename carrier points through a bijection (tables are materialised)."""
    if sorted(rename) != sorted(M.carrier.elements) or len(set(rename.values())) != len(rename):
        raise StructuralError("rename must be a bijection on the carrier")
    inv = {v: k for k, v in rename.items()}
    carrier = finset([rename[m] for m in M.carrier])
    lmap = {rename[m]: M.lmap[m] for m in M.carrier}
    rmap = {rename[m]: M.rmap[m] for m in M.carrier}
    lt = {(g, rename[m]): rename[v] for (g, m), v in M.left_table().items()}
    rt = {(rename[m], h): rename[v] for (m, h), v in M.right_table().items()}
    return Bibundle(
        M.left_groupoid, M.right_groupoid, carrier, lmap, rmap,
        lambda g, m: lt[(g, m)],
        lambda m, h: rt[(m, h)],
    )


# ---------------------------------------------------------------------------
# composition


@dataclass(frozen=True, eq=False)
class ComposedBibundle(Bibundle):
    factors: tuple[Bibundle, Bibundle] = field(repr=False, default=())
    project_fn: Callable[[str, str], str] = field(repr=False, default=None)

    def project(self, m: str, n: str) -> str:
        """Canonical representative of the orbit of the pair (m, n)."""
        return self.project_fn(m, n)


def _rp_column(M: Bibundle) -> dict[str, tuple[str, str]] | None:
    """For each m, the unique h with m.h == fiber-least element, if the right
    action is free and transitive on every lmap fiber; else None. Cached."""
    cached = getattr(M, "_rp_column_cache", "unset")
    if cached != "unset":
        return cached
    H = M.right_groupoid
    fibers: dict[str, list[str]] = {}
    for m in M.carrier:
        fibers.setdefault(M.lmap[m], []).append(m)
    column: dict[str, tuple[str, str]] = {}
    ok = True
    right_fn = M.right_fn
    for fiber in fibers.values():
        m0 = fiber[0]
        for m in fiber:
            found = None
            for h in H.l_fiber(M.rmap[m]):
                if right_fn(m, h) == m0:
                    if found is not None:
                        found = None
                        break
                    found = h
            if found is None:
                ok = False
                break
            column[m] = (m0, found)
        if not ok:
            break
    result = column if ok else None
    object.__setattr__(M, "_rp_column_cache", result)
    return result


def compose(M: Bibundle, N: Bibundle) -> ComposedBibundle:
    """M . N with canonical (lex-least) orbit representatives."""
    if not _same_groupoid(M.right_groupoid, N.left_groupoid):
        raise StructuralError("compose: right groupoid of M differs from left groupoid of N")
    G = M.left_groupoid
    H = M.right_groupoid
    K = N.right_groupoid
    n_by_obj: dict[str, list[str]] = {}
    for n in N.carrier:
        n_by_obj.setdefault(N.lmap[n], []).append(n)

    column = _rp_column(M)
    carrier: list[str] = []
    lmap: dict[str, str] = {}
    rmap: dict[str, str] = {}

    if column is not None:
        Hinv = H.inv
        nleft = N.left_fn

        def project(m: str, n: str) -> str:
            m0, h = column[m]
            if m0 == m:
                return tup(m, n)
            return tup(m0, nleft(Hinv[h], n))

        for m in M.carrier:
            if column[m][0] != m:
                continue
            for n in n_by_obj.get(M.rmap[m], []):
                rep = tup(m, n)
                carrier.append(rep)
                lmap[rep] = M.lmap[m]
                rmap[rep] = N.rmap[n]
    else:
        reps: dict[tuple[str, str], str] = {}
        mright, nleft = M.right_fn, N.left_fn
        Hinv = H.inv
        for m in M.carrier:
            for n in n_by_obj.get(M.rmap[m], []):
                if (m, n) in reps:
                    continue
                rep = tup(m, n)
                stack = [(m, n)]
                orbit = {(m, n)}
                while stack:
                    a, b = stack.pop()
                    for h in H.l_fiber(M.rmap[a]):
                        nxt = (mright(a, h), nleft(Hinv[h], b))
                        if nxt not in orbit:
                            orbit.add(nxt)
                            stack.append(nxt)
                for pair in orbit:
                    reps[pair] = rep
                carrier.append(rep)
                lmap[rep] = M.lmap[m]
                rmap[rep] = N.rmap[n]

        def project(m: str, n: str) -> str:
            try:
                return reps[(m, n)]
            except KeyError:
                raise StructuralError(
                    f"pair ({m!r}, {n!r}) is not composable in this composite"
                ) from None

    mleft = M.left_fn
    nright = N.right_fn

    def left_fn(g: str, rep: str) -> str:
        m, n = untup(rep)
        return project(mleft(g, m), n)

    def right_fn(rep: str, k: str) -> str:
        m, n = untup(rep)
        return project(m, nright(n, k))

    return ComposedBibundle(
        G, K, finset(carrier), lmap, rmap, left_fn, right_fn,
        factors=(M, N), project_fn=project,
    )


# ---------------------------------------------------------------------------
# 2-isomorphism witnesses


@dataclass(frozen=True, eq=False)
class IsoWitness:
    """A biequivariant bijection between bibundles over the same groupoids."""

    source: Bibundle
    target: Bibundle
    forward: Mapping[str, str]
    backward: Mapping[str, str]


def validate_iso(w: IsoWitness) -> ValidationReport:
    out: list[Violation] = []
    M, N = w.source, w.target
    if not _same_groupoid(M.left_groupoid, N.left_groupoid) or not _same_groupoid(
        M.right_groupoid, N.right_groupoid
    ):
        out.append(Violation("structural", "iso-groupoids", "witness endpoints live over different groupoids", ()))
        return ValidationReport(tuple(out))
    if sorted(w.forward) != sorted(M.carrier.elements) or sorted(w.backward) != sorted(N.carrier.elements):
        out.append(Violation("structural", "iso-domain", "forward/backward are not total", ()))
        return ValidationReport(tuple(out))
    for m, n in w.forward.items():
        if w.backward.get(n) != m:
            out.append(Violation("structural", "iso-bijection", "backward does not invert forward", (m, n)))
            return ValidationReport(tuple(out))
    G, H = M.left_groupoid, M.right_groupoid
    for m in M.carrier:
        n = w.forward[m]
        if M.lmap[m] != N.lmap[n] or M.rmap[m] != N.rmap[n]:
            out.append(Violation("axiom", "iso-moment", "moments are not preserved", (m,)))
            continue
        for g in G.r_fiber(M.lmap[m]):
            if w.forward[M.act_left(g, m)] != N.act_left(g, n):
                out.append(Violation("axiom", "iso-left", "left equivariance fails", (g, m)))
        for h in H.l_fiber(M.rmap[m]):
            if w.forward[M.act_right(m, h)] != N.act_right(n, h):
                out.append(Violation("axiom", "iso-right", "right equivariance fails", (m, h)))
    return ValidationReport(tuple(out))


def identity_witness(M: Bibundle) -> IsoWitness:
    ident = {m: m for m in M.carrier}
    return IsoWitness(M, M, ident, dict(ident))


def invert_witness(w: IsoWitness) -> IsoWitness:
    return IsoWitness(w.target, w.source, dict(w.backward), dict(w.forward))


def chain_witnesses(*ws: IsoWitness) -> IsoWitness:
    """Compose witnesses along a path (checks that carriers meet)."""
    if not ws:
        raise StructuralError("empty witness chain")
    out = ws[0]
    for w in ws[1:]:
        if out.target.carrier != w.source.carrier:
            raise StructuralError("witness chain: carriers do not meet")
        forward = {m: w.forward[v] for m, v in out.forward.items()}
        backward = {n: out.backward[v] for n, v in w.backward.items()}
        out = IsoWitness(out.source, w.target, forward, backward)
    return out


def _bijection_witness(source: Bibundle, target: Bibundle, forward: dict[str, str]) -> IsoWitness:
    if len(forward) != len(source.carrier) or len(set(forward.values())) != len(forward):
        raise StructuralError("canonical witness construction failed to be a bijection")
    backward = {v: k for k, v in forward.items()}
    if len(backward) != len(target.carrier):
        raise StructuralError("canonical witness construction is not onto")
    return IsoWitness(source, target, forward, backward)


def assoc_witness(
    M: Bibundle, N: Bibundle, L: Bibundle,
    MN: ComposedBibundle | None = None,
    NL: ComposedBibundle | None = None,
    left: ComposedBibundle | None = None,
    right: ComposedBibundle | None = None,
) -> IsoWitness:
    """(M.N).L ~ M.(N.L), [[m,n],l] |-> [m,[n,l]]."""
    MN = MN if MN is not None else compose(M, N)
    NL = NL if NL is not None else compose(N, L)
    left = left if left is not None else compose(MN, L)
    right = right if right is not None else compose(M, NL)
    forward = {}
    for rep in left.carrier:
        mn, lp = untup(rep)
        m, n = untup(mn)
        forward[rep] = right.project(m, NL.project(n, lp))
    return _bijection_witness(left, right, forward)


def lunit_witness(M: Bibundle, composed: ComposedBibundle | None = None) -> IsoWitness:
    """Id_G . M ~ M, [g, m] |-> g.m."""
    if composed is None:
        composed = compose(identity_bibundle(M.left_groupoid), M)
    forward = {}
    for rep in composed.carrier:
        g, m = untup(rep)
        forward[rep] = M.left_fn(g, m)
    return _bijection_witness(composed, M, forward)


def runit_witness(M: Bibundle, composed: ComposedBibundle | None = None) -> IsoWitness:
    """M . Id_H ~ M, [m, h] |-> m.h."""
    if composed is None:
        composed = compose(M, identity_bibundle(M.right_groupoid))
    forward = {}
    for rep in composed.carrier:
        m, h = untup(rep)
        forward[rep] = M.right_fn(m, h)
    return _bijection_witness(composed, M, forward)


def comp_witness(
    w1: IsoWitness, w2: IsoWitness,
    source: ComposedBibundle | None = None,
    target: ComposedBibundle | None = None,
) -> IsoWitness:
    """Whisker two witnesses along composition: w1 . w2 on M1.N1 -> M2.N2."""
    source = source if source is not None else compose(w1.source, w2.source)
    target = target if target is not None else compose(w1.target, w2.target)
    f1, f2 = w1.forward, w2.forward
    forward = {}
    for rep in source.carrier:
        m, n = untup(rep)
        forward[rep] = target.project(f1[m], f2[n])
    return _bijection_witness(source, target, forward)


def tensor_witness(
    w1: IsoWitness, w2: IsoWitness,
    source: Bibundle | None = None,
    target: Bibundle | None = None,
) -> IsoWitness:
    """Tensor two witnesses componentwise."""
    source = source if source is not None else tensor_bibundle(w1.source, w2.source)
    target = target if target is not None else tensor_bibundle(w1.target, w2.target)
    f1, f2 = w1.forward, w2.forward
    forward = {}
    for rep in source.carrier:
        m, n = untup(rep)
        forward[rep] = tup(f1[m], f2[n])
    return _bijection_witness(source, target, forward)


def interchange_witness(
    A: Bibundle, B: Bibundle, C: Bibundle, D: Bibundle,
    source: ComposedBibundle | None = None,
    target: Bibundle | None = None,
    AC: ComposedBibundle | None = None,
    BD: ComposedBibundle | None = None,
) -> IsoWitness:
    """(A x B).(C x D) ~ (A.C) x (B.D), [(a,b),(c,d)] |-> ([a,c],[b,d])."""
    source = source if source is not None else compose(tensor_bibundle(A, B), tensor_bibundle(C, D))
    AC = AC if AC is not None else compose(A, C)
    BD = BD if BD is not None else compose(B, D)
    target = target if target is not None else tensor_bibundle(AC, BD)
    forward = {}
    for rep in source.carrier:
        ab, cd = untup(rep)
        a, b = untup(ab)
        c, d = untup(cd)
        forward[rep] = tup(AC.project(a, c), BD.project(b, d))
    return _bijection_witness(source, target, forward)


# ---------------------------------------------------------------------------
# isomorphism search


def _signatures(M: Bibundle) -> dict[str, tuple]:
    G, H = M.left_groupoid, M.right_groupoid
    sig = {}
    for m in M.carrier:
        lstab = sum(1 for g in G.r_fiber(M.lmap[m]) if M.left_fn(g, m) == m)
        rstab = sum(1 for h in H.l_fiber(M.rmap[m]) if M.right_fn(m, h) == m)
        sig[m] = (M.lmap[m], M.rmap[m], lstab, rstab)
    return sig


def _iso_search(M: Bibundle, N: Bibundle) -> Iterator[dict[str, str]]:
    """Depth-first enumeration of biequivariant bijections, lex-least first."""
    if not _same_groupoid(M.left_groupoid, N.left_groupoid):
        return
    if not _same_groupoid(M.right_groupoid, N.right_groupoid):
        return
    if len(M.carrier) != len(N.carrier):
        return
    sigM = _signatures(M)
    sigN = _signatures(N)
    cand: dict[tuple, list[str]] = {}
    for n in N.carrier:
        cand.setdefault(sigN[n], []).append(n)
    order = list(M.carrier)
    cand_for = []
    for m in order:
        cs = cand.get(sigM[m], [])
        cand_for.append(cs)
        if not cs:
            return
    G, H = M.left_groupoid, M.right_groupoid
    mleft, mright = M.left_fn, M.right_fn
    nleft, nright = N.left_fn, N.right_fn
    assign: dict[str, str] = {}
    used: set[str] = set()

    def consistent(m: str, n: str) -> bool:
        for g in G.r_fiber(M.lmap[m]):
            m2 = mleft(g, m)
            n2 = assign.get(m2)
            if n2 is not None and nleft(g, n) != n2:
                return False
        for h in H.l_fiber(M.rmap[m]):
            m2 = mright(m, h)
            n2 = assign.get(m2)
            if n2 is not None and nright(n, h) != n2:
                return False
        return True

    size = len(order)
    pos = 0
    idx = [0] * size
    if size == 0:
        yield {}
        return
    while pos >= 0:
        if pos == size:
            yield dict(assign)
            pos -= 1
            m = order[pos]
            used.discard(assign.pop(m))
            continue
        m = order[pos]
        cs = cand_for[pos]
        i = idx[pos]
        advanced = False
        while i < len(cs):
            n = cs[i]
            i += 1
            if n in used:
                continue
            assign[m] = n
            used.add(n)
            if consistent(m, n):
                idx[pos] = i
                pos += 1
                advanced = True
                break
            used.discard(n)
            del assign[m]
        if not advanced:
            idx[pos] = 0
            pos -= 1
            if pos >= 0:
                used.discard(assign.pop(order[pos]))


def find_iso(M: Bibundle, N: Bibundle) -> IsoWitness | None:
    """Least biequivariant isomorphism in carrier order, or None.

    Bibundles over different groupoids are never isomorphic, so None comes
    back for those rather than an error.
    """
    for forward in _iso_search(M, N):
        return IsoWitness(M, N, forward, {v: k for k, v in forward.items()})
    return None


def all_isos(M: Bibundle, N: Bibundle, limit: int = 10_000) -> Iterator[IsoWitness]:
    for forward in itertools.islice(_iso_search(M, N), limit):
        yield IsoWitness(M, N, forward, {v: k for k, v in forward.items()})


# ---------------------------------------------------------------------------
# weak isomorphisms (Morita equivalences)


@dataclass(frozen=True)
class WeakIso:
    ok: bool
    inverse: Bibundle | None = None
    left_identity: IsoWitness | None = None  # M . op(M) ~ Id_G
    right_identity: IsoWitness | None = None  # op(M) . M ~ Id_H
    failure: PrincipalityReport | None = None


def is_weak_isomorphism(M: Bibundle) -> WeakIso:
    """M is weakly invertible iff it is biprincipal; then op(M) inverts it."""
    right = check_principal(M, "right")
    if not right.ok:
        return WeakIso(False, failure=right)
    left = check_principal(M, "left")
    if not left.ok:
        return WeakIso(False, failure=left)
    inv = opposite_bibundle(M)
    w1 = find_iso(compose(M, inv), identity_bibundle(M.left_groupoid))
    w2 = find_iso(compose(inv, M), identity_bibundle(M.right_groupoid))
    if w1 is None or w2 is None:
        raise StructuralError("biprincipal bibundle failed to invert; this is a bug")
    return WeakIso(True, inv, w1, w2, None)
