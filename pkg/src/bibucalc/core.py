"""Finite groupoids and categories stored as explicit tables.

Conventions used throughout the package:

* an arrow g runs from the object r(g) to the object l(g);
* comp(g, g2) is defined exactly when r(g) == l(g2), and then
  l(comp(g, g2)) == l(g) and r(comp(g, g2)) == r(g2).

Labels are opaque strings; the order of a finite set is its list order.
Two groupoids are equal when all their tables are equal.
"""
from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .labels import tup, untup


class StructuralError(Exception):
    """Data used outside its declared domain (never silently ignored)."""


@dataclass(frozen=True)
class Violation:
    kind: str  # "structural" or "axiom"
    code: str
    message: str
    witness: tuple = ()


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.entries

    def structural(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.entries if v.kind == "structural")

    def axiom(self) -> tuple[Violation, ...]:
        return tuple(v for v in self.entries if v.kind == "axiom")

    def first(self) -> Violation | None:
        return self.entries[0] if self.entries else None


@dataclass(frozen=True)
class FinSet:
    """A finite ordered set of string labels."""

    elements: tuple[str, ...]

    def __post_init__(self) -> None:
        index: dict[str, int] = {}
        for i, x in enumerate(self.elements):
            if not isinstance(x, str):
                raise StructuralError(f"FinSet labels must be strings, got {x!r}")
            if x in index:
                raise StructuralError(f"duplicate label {x!r} in FinSet")
            index[x] = i
        object.__setattr__(self, "_index", index)

    def index(self, x: str) -> int:
        try:
            return self._index[x]  # type: ignore[attr-defined]
        except KeyError:
            raise StructuralError(f"label {x!r} not in FinSet") from None

    def __contains__(self, x: object) -> bool:
        return x in self._index  # type: ignore[attr-defined]

    def __iter__(self) -> Iterator[str]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


def finset(elements: Sequence[str]) -> FinSet:
    return FinSet(tuple(elements))


# Above this many composable pairs a product groupoid keeps its composition
# table as a lazy mapping; entries are computed per lookup instead of being
# stored up front. Lookups and equality behave like a dict either way.
_LAZY_COMP_THRESHOLD = 200_000


class _ProductComp(Mapping):
    """Composition table of a product groupoid, computed on demand."""

    def __init__(self, factors: tuple["FinGroupoid", ...]):
        self._factors = factors
        self._len = 1
        for f in factors:
            self._len *= len(f.comp)

    def __getitem__(self, key: tuple[str, str]) -> str:
        g, g2 = key
        parts = untup(g)
        parts2 = untup(g2)
        if len(parts) != len(self._factors) or len(parts2) != len(self._factors):
            raise KeyError(key)
        out = []
        for f, a, b in zip(self._factors, parts, parts2):
            try:
                out.append(f.comp[(a, b)])
            except KeyError:
                raise KeyError(key) from None
        return tup(*out)

    def __iter__(self) -> Iterator[tuple[str, str]]:
        pair_lists = [list(f.comp.keys()) for f in self._factors]
        for combo in itertools.product(*pair_lists):
            yield (tup(*(p[0] for p in combo)), tup(*(p[1] for p in combo)))

    def __len__(self) -> int:
        return self._len

    def __eq__(self, other: object) -> bool:
        if isinstance(other, _ProductComp) and self._factors == other._factors:
            return True
        if not isinstance(other, Mapping):
            return NotImplemented
        if len(other) != len(self):
            return False
        return all(other.get(k, object()) == v for k, v in self.items())

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=True)
class FinGroupoid:
    """A finite groupoid: objects, arrows and all structure maps as tables.

    comp is keyed by the composable pairs (r(g) == l(g2)) and is total there.
    """

    objects: FinSet
    arrows: FinSet
    l: Mapping[str, str]
    r: Mapping[str, str]
    comp: Mapping[tuple[str, str], str]
    inv: Mapping[str, str]
    unit: Mapping[str, str]

    def __post_init__(self) -> None:
        lf: dict[str, list[str]] = {x: [] for x in self.objects}
        rf: dict[str, list[str]] = {x: [] for x in self.objects}
        for g in self.arrows:
            lx = self.l.get(g)
            rx = self.r.get(g)
            if lx in lf:
                lf[lx].append(g)
            if rx in rf:
                rf[rx].append(g)
        object.__setattr__(self, "_l_fibers", {x: tuple(v) for x, v in lf.items()})
        object.__setattr__(self, "_r_fibers", {x: tuple(v) for x, v in rf.items()})

    # -- lookup helpers; all raise StructuralError outside the domain --

    def mul(self, g: str, g2: str) -> str:
        try:
            return self.comp[(g, g2)]
        except KeyError:
            raise StructuralError(
                f"comp undefined on ({g!r}, {g2!r}); r(g)={self.r.get(g)!r}, "
                f"l(g2)={self.l.get(g2)!r}"
            ) from None

    def inverse(self, g: str) -> str:
        try:
            return self.inv[g]
        except KeyError:
            raise StructuralError(f"inv undefined on {g!r}") from None

    def unit_at(self, x: str) -> str:
        try:
            return self.unit[x]
        except KeyError:
            raise StructuralError(f"unit undefined on object {x!r}") from None

    def l_fiber(self, x: str) -> tuple[str, ...]:
        """Arrows g with l(g) == x, in arrow order."""
        try:
            return self._l_fibers[x]  # type: ignore[attr-defined]
        except KeyError:
            raise StructuralError(f"object {x!r} not in groupoid") from None

    def r_fiber(self, x: str) -> tuple[str, ...]:
        try:
            return self._r_fibers[x]  # type: ignore[attr-defined]
        except KeyError:
            raise StructuralError(f"object {x!r} not in groupoid") from None

    def is_composable(self, g: str, g2: str) -> bool:
        return self.r.get(g) is not None and self.r[g] == self.l.get(g2)


@dataclass(frozen=True, eq=True)
class FinCategory:
    """A finite category; same table layout as FinGroupoid minus inverses."""

    objects: FinSet
    arrows: FinSet
    l: Mapping[str, str]
    r: Mapping[str, str]
    comp: Mapping[tuple[str, str], str]
    unit: Mapping[str, str]

    def mul(self, g: str, g2: str) -> str:
        try:
            return self.comp[(g, g2)]
        except KeyError:
            raise StructuralError(f"comp undefined on ({g!r}, {g2!r})") from None


def as_category(G: FinGroupoid) -> FinCategory:
    return FinCategory(G.objects, G.arrows, G.l, G.r, G.comp, G.unit)


# ---------------------------------------------------------------------------
# validation


def _check_tables(
    C: FinGroupoid | FinCategory, out: list[Violation], with_inv: bool
) -> None:
    """Structural checks shared by categories and groupoids."""
    arrows = set(C.arrows.elements)
    objects = set(C.objects.elements)
    for name, m in (("l", C.l), ("r", C.r)):
        for g in C.arrows:
            if g not in m:
                out.append(Violation("structural", f"{name}-missing", f"{name} undefined on arrow", (g,)))
            elif m[g] not in objects:
                out.append(Violation("structural", f"{name}-range", f"{name}({g!r}) is not an object", (g, m[g])))
        for g in m:
            if g not in arrows:
                out.append(Violation("structural", f"{name}-domain", f"{name} defined on non-arrow", (g,)))
    for x in C.objects:
        if x not in C.unit:
            out.append(Violation("structural", "unit-missing", "unit undefined on object", (x,)))
        elif C.unit[x] not in arrows:
            out.append(Violation("structural", "unit-range", "unit value is not an arrow", (x, C.unit[x])))
    for x in C.unit:
        if x not in objects:
            out.append(Violation("structural", "unit-domain", "unit defined on non-object", (x,)))
    if with_inv:
        inv = C.inv  # type: ignore[union-attr]
        for g in C.arrows:
            if g not in inv:
                out.append(Violation("structural", "inv-missing", "inv undefined on arrow", (g,)))
            elif inv[g] not in arrows:
                out.append(Violation("structural", "inv-range", "inv value is not an arrow", (g, inv[g])))
        for g in inv:
            if g not in arrows:
                out.append(Violation("structural", "inv-domain", "inv defined on non-arrow", (g,)))
    # composition keys
    for key in C.comp:
        g, g2 = key
        if g not in arrows or g2 not in arrows:
            out.append(Violation("structural", "comp-domain", "comp key is not a pair of arrows", key))
        elif C.l.get(g2) != C.r.get(g):
            out.append(Violation("structural", "comp-noncomposable", "comp defined on a non-composable pair", key))
        elif C.comp[key] not in arrows:
            out.append(Violation("structural", "comp-range", "comp value is not an arrow", (*key, C.comp[key])))
    for g in C.arrows:
        rg = C.r.get(g)
        if rg is None:
            continue
        for g2 in C.arrows:
            if C.l.get(g2) == rg and (g, g2) not in C.comp:
                out.append(Violation("structural", "comp-missing", "comp undefined on composable pair", (g, g2)))


def _check_category_axioms(C: FinGroupoid | FinCategory, out: list[Violation]) -> None:
    for x in C.objects:
        u = C.unit.get(x)
        if u is None or u not in C.arrows:
            continue
        if C.l.get(u) != x or C.r.get(u) != x:
            out.append(Violation("axiom", "unit-moment", "unit arrow is not an endo-arrow at its object", (x, u)))
    for g in C.arrows:
        ul = C.unit.get(C.l.get(g, ""), None)
        ur = C.unit.get(C.r.get(g, ""), None)
        if ul is not None and C.comp.get((ul, g)) != g:
            out.append(Violation("axiom", "unit-law", "left unit law fails", (g,)))
        if ur is not None and C.comp.get((g, ur)) != g:
            out.append(Violation("axiom", "unit-law", "right unit law fails", (g,)))
    for (g, g2), h in C.comp.items():
        if h not in C.arrows:
            continue
        if C.l.get(h) != C.l.get(g) or C.r.get(h) != C.r.get(g2):
            out.append(Violation("axiom", "comp-moment", "composite has wrong endpoints", (g, g2, h)))
    # associativity over all composable triples
    for (g, g2) in C.comp:
        h = C.comp[(g, g2)]
        for g3 in C.arrows:
            if C.l.get(g3) != C.r.get(g2):
                continue
            left = C.comp.get((h, g3))
            inner = C.comp.get((g2, g3))
            right = C.comp.get((g, inner)) if inner is not None else None
            if left != right or left is None:
                out.append(Violation("axiom", "assoc", "associativity fails", (g, g2, g3)))


def validate_category(C: FinCategory) -> ValidationReport:
    out: list[Violation] = []
    _check_tables(C, out, with_inv=False)
    if not any(v.kind == "structural" for v in out):
        _check_category_axioms(C, out)
    return ValidationReport(tuple(out))


def validate_groupoid(G: FinGroupoid) -> ValidationReport:
    out: list[Violation] = []
    _check_tables(G, out, with_inv=True)
    if any(v.kind == "structural" for v in out):
        return ValidationReport(tuple(out))
    _check_category_axioms(G, out)
    for g in G.arrows:
        gi = G.inv.get(g)
        if gi is None or gi not in G.arrows:
            continue
        if G.l.get(gi) != G.r.get(g) or G.r.get(gi) != G.l.get(g):
            out.append(Violation("axiom", "inv-moment", "inverse has wrong endpoints", (g, gi)))
            continue
        if G.comp.get((g, gi)) != G.unit.get(G.l[g]):
            out.append(Violation("axiom", "inv-law", "g . inv(g) is not a unit", (g,)))
        if G.comp.get((gi, g)) != G.unit.get(G.r[g]):
            out.append(Violation("axiom", "inv-law", "inv(g) . g is not a unit", (g,)))
    return ValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# constructors


def _labels(n_or_labels: int | Sequence[str]) -> tuple[str, ...]:
    if isinstance(n_or_labels, int):
        return tuple(str(i) for i in range(n_or_labels))
    return tuple(n_or_labels)


def trivial_groupoid(n_or_labels: int | Sequence[str] = 1) -> FinGroupoid:
    """Only unit arrows; n objects."""
    xs = _labels(n_or_labels)
    ident = {x: x for x in xs}
    comp = {(x, x): x for x in xs}
    return FinGroupoid(finset(xs), finset(xs), dict(ident), dict(ident), comp, dict(ident), dict(ident))


def pair_groupoid(n_or_labels: int | Sequence[str]) -> FinGroupoid:
    """Exactly one arrow (i,j) from j to i, for every pair of objects."""
    xs = _labels(n_or_labels)
    arrows = [tup(i, j) for i in xs for j in xs]
    l = {tup(i, j): i for i in xs for j in xs}
    r = {tup(i, j): j for i in xs for j in xs}
    comp = {
        (tup(i, j), tup(j, k)): tup(i, k) for i in xs for j in xs for k in xs
    }
    inv = {tup(i, j): tup(j, i) for i in xs for j in xs}
    unit = {i: tup(i, i) for i in xs}
    return FinGroupoid(finset(xs), finset(arrows), l, r, comp, inv, unit)


def one_object_groupoid(elements: Sequence[str], mul: Mapping[tuple[str, str], str], obj: str = "*") -> FinGroupoid:
    """The groupoid of a finite group given by its multiplication table."""
    elts = tuple(elements)
    eset = set(elts)
    unit_elt = None
    for e in elts:
        if all(mul.get((e, x)) == x for x in elts):
            unit_elt = e
            break
    if unit_elt is None:
        raise StructuralError("multiplication table has no unit element")
    inv = {}
    for x in elts:
        found = [y for y in elts if mul.get((x, y)) == unit_elt]
        if len(found) != 1:
            raise StructuralError(f"element {x!r} has no unique inverse")
        inv[x] = found[0]
    for x in elts:
        for y in elts:
            if mul.get((x, y)) not in eset:
                raise StructuralError(f"multiplication not closed at ({x!r}, {y!r})")
    comp = {(x, y): mul[(x, y)] for x in elts for y in elts}
    return FinGroupoid(
        finset([obj]), finset(elts),
        {x: obj for x in elts}, {x: obj for x in elts},
        comp, inv, {obj: unit_elt},
    )


def cyclic_groupoid(n: int) -> FinGroupoid:
    """Z/n as a one-object groupoid, arrows labelled 0..n-1."""
    if n < 1:
        raise StructuralError("cyclic groupoid needs n >= 1")
    elts = [str(i) for i in range(n)]
    mul = {(str(i), str(j)): str((i + j) % n) for i in range(n) for j in range(n)}
    return FinGroupoid(
        finset(["*"]), finset(elts),
        {e: "*" for e in elts}, {e: "*" for e in elts},
        mul, {str(i): str((-i) % n) for i in range(n)}, {"*": "0"},
    )


def action_groupoid(
    group: FinGroupoid,
    points: FinSet | Sequence[str],
    act: Mapping[tuple[str, str], str] | Callable[[str, str], str],
) -> FinGroupoid:
    """Action groupoid of a one-object groupoid acting on a finite set.

    Arrows are (k, z) with r = z and l = act(k, z); composition multiplies the
    group parts: (k1, z1) . (k2, z2) = (k1 k2, z2) when z1 == act(k2, z2).
    """
    if len(group.objects) != 1:
        raise StructuralError("action_groupoid needs a one-object groupoid")
    zs = points if isinstance(points, FinSet) else finset(points)
    if callable(act):
        table = {(k, z): act(k, z) for k in group.arrows for z in zs}
    else:
        table = dict(act)
    star = group.objects.elements[0]
    uk = group.unit[star]
    for z in zs:
        if table.get((uk, z)) != z:
            raise StructuralError(f"action does not fix {z!r} under the unit")
    for k in group.arrows:
        for z in zs:
            if table.get((k, z)) not in zs:
                raise StructuralError(f"action leaves the point set at ({k!r}, {z!r})")
    for (k1, k2), k12 in group.comp.items():
        for z in zs:
            if table[(k12, z)] != table[(k1, table[(k2, z)])]:
                raise StructuralError(f"action law fails at ({k1!r}, {k2!r}, {z!r})")
    arrows = [tup(k, z) for k in group.arrows for z in zs]
    l = {tup(k, z): table[(k, z)] for k in group.arrows for z in zs}
    r = {tup(k, z): z for k in group.arrows for z in zs}
    comp = {}
    for k1 in group.arrows:
        for k2 in group.arrows:
            k12 = group.comp[(k1, k2)]
            for z in zs:
                comp[(tup(k1, table[(k2, z)]), tup(k2, z))] = tup(k12, z)
    inv = {tup(k, z): tup(group.inv[k], table[(k, z)]) for k in group.arrows for z in zs}
    unit = {z: tup(uk, z) for z in zs}
    return FinGroupoid(zs if isinstance(zs, FinSet) else finset(zs), finset(arrows), l, r, comp, inv, unit)


def product_groupoid(factors: Sequence[FinGroupoid]) -> FinGroupoid:
    """Product of groupoids with flat tuple labels (n factors, n components)."""
    fs = tuple(factors)
    if not fs:
        return trivial_groupoid(["()"])
    objects = [tup(*combo) for combo in itertools.product(*(f.objects for f in fs))]
    arrows = [tup(*combo) for combo in itertools.product(*(f.arrows for f in fs))]
    l = {}
    r = {}
    inv = {}
    for combo in itertools.product(*(f.arrows for f in fs)):
        a = tup(*combo)
        l[a] = tup(*(f.l[g] for f, g in zip(fs, combo)))
        r[a] = tup(*(f.r[g] for f, g in zip(fs, combo)))
        inv[a] = tup(*(f.inv[g] for f, g in zip(fs, combo)))
    unit = {}
    for combo in itertools.product(*(f.objects for f in fs)):
        unit[tup(*combo)] = tup(*(f.unit[x] for f, x in zip(fs, combo)))
    n_pairs = 1
    for f in fs:
        n_pairs *= len(f.comp)
    comp: Mapping[tuple[str, str], str]
    if n_pairs > _LAZY_COMP_THRESHOLD:
        comp = _ProductComp(fs)
    else:
        comp = {}
        for combo in itertools.product(*(f.comp.items() for f in fs)):
            key1 = tup(*(kv[0][0] for kv in combo))
            key2 = tup(*(kv[0][1] for kv in combo))
            comp[(key1, key2)] = tup(*(kv[1] for kv in combo))
    return FinGroupoid(finset(objects), finset(arrows), l, r, comp, inv, unit)


def power_groupoid(G: FinGroupoid, n: int) -> FinGroupoid:
    """G^n with flat labels; G^0 is the one-point groupoid labelled (), G^1 is G."""
    if n < 0:
        raise StructuralError("negative power")
    if n == 0:
        return trivial_groupoid(["()"])
    if n == 1:
        return G
    return product_groupoid([G] * n)


def opposite_groupoid(G: FinGroupoid) -> FinGroupoid:
    comp = {(g2, g): h for (g, g2), h in G.comp.items()}
    return FinGroupoid(G.objects, G.arrows, dict(G.r), dict(G.l), comp, dict(G.inv), dict(G.unit))


def connected_components(G: FinGroupoid) -> list[tuple[str, ...]]:
    """Orbits of objects under arrow reachability, each in object order."""
    parent = {x: x for x in G.objects}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in G.arrows:
        a, b = find(G.l[g]), find(G.r[g])
        if a != b:
            parent[a] = b
    groups: dict[str, list[str]] = {}
    for x in G.objects:
        groups.setdefault(find(x), []).append(x)
    seen = set()
    out = []
    for x in G.objects:
        root = find(x)
        if root not in seen:
            seen.add(root)
            out.append(tuple(groups[root]))
    return out


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True)
class GroupoidHom:
    source: FinGroupoid
    target: FinGroupoid
    f0: Mapping[str, str]
    f1: Mapping[str, str]


def check_hom(phi: GroupoidHom) -> ValidationReport:
    out: list[Violation] = []
    S, T = phi.source, phi.target
    for x in S.objects:
        if phi.f0.get(x) not in T.objects:
            out.append(Violation("structural", "f0", "object map misses the target", (x,)))
    for g in S.arrows:
        if phi.f1.get(g) not in T.arrows:
            out.append(Violation("structural", "f1", "arrow map misses the target", (g,)))
    if out:
        return ValidationReport(tuple(out))
    for g in S.arrows:
        if T.l[phi.f1[g]] != phi.f0[S.l[g]]:
            out.append(Violation("axiom", "hom-l", "l is not preserved", (g,)))
        if T.r[phi.f1[g]] != phi.f0[S.r[g]]:
            out.append(Violation("axiom", "hom-r", "r is not preserved", (g,)))
    for x in S.objects:
        if phi.f1[S.unit[x]] != T.unit[phi.f0[x]]:
            out.append(Violation("axiom", "hom-unit", "units are not preserved", (x,)))
    for (g, g2), h in S.comp.items():
        if T.comp.get((phi.f1[g], phi.f1[g2])) != phi.f1[h]:
            out.append(Violation("axiom", "hom-comp", "composition is not preserved", (g, g2)))
    return ValidationReport(tuple(out))


def identity_hom(G: FinGroupoid) -> GroupoidHom:
    return GroupoidHom(G, G, {x: x for x in G.objects}, {g: g for g in G.arrows})


def compose_homs(phi: GroupoidHom, psi: GroupoidHom) -> GroupoidHom:
    """phi followed by psi."""
    if phi.target != psi.source:
        raise StructuralError("hom composition: target/source mismatch")
    return GroupoidHom(
        phi.source, psi.target,
        {x: psi.f0[y] for x, y in phi.f0.items()},
        {g: psi.f1[h] for g, h in phi.f1.items()},
    )


def diagonal_hom(G: FinGroupoid) -> GroupoidHom:
    P = product_groupoid([G, G])
    return GroupoidHom(G, P, {x: tup(x, x) for x in G.objects}, {g: tup(g, g) for g in G.arrows})


def swap_hom(G: FinGroupoid, H: FinGroupoid) -> GroupoidHom:
    P = product_groupoid([G, H])
    Q = product_groupoid([H, G])
    f0 = {tup(x, y): tup(y, x) for x in G.objects for y in H.objects}
    f1 = {tup(g, h): tup(h, g) for g in G.arrows for h in H.arrows}
    return GroupoidHom(P, Q, f0, f1)


def terminal_hom(G: FinGroupoid) -> GroupoidHom:
    T = power_groupoid(G, 0)
    return GroupoidHom(G, T, {x: "()" for x in G.objects}, {g: "()" for g in G.arrows})


def point_hom(G: FinGroupoid, x: str) -> GroupoidHom:
    """Trivial(1) -> G picking the object x."""
    if x not in G.objects:
        raise StructuralError(f"{x!r} is not an object")
    T = power_groupoid(G, 0)
    return GroupoidHom(T, G, {"()": x}, {"()": G.unit[x]})


def product_hom(phis: Sequence[GroupoidHom]) -> GroupoidHom:
    """Componentwise hom between the product groupoids."""
    fs = tuple(phis)
    S = product_groupoid([p.source for p in fs])
    T = product_groupoid([p.target for p in fs])
    f0 = {}
    for combo in itertools.product(*(p.source.objects for p in fs)):
        f0[tup(*combo)] = tup(*(p.f0[x] for p, x in zip(fs, combo)))
    f1 = {}
    for combo in itertools.product(*(p.source.arrows for p in fs)):
        f1[tup(*combo)] = tup(*(p.f1[g] for p, g in zip(fs, combo)))
    return GroupoidHom(S, T, f0, f1)
