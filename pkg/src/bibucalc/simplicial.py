"""Truncated simplicial sets, nerves and Kan conditions.

A simplicial set is stored up to a finite level k: the sets X_0..X_k together
with all face and degeneracy tables between them. The nerve of a finite
category stores composable arrow chains; horn spaces are enumerated directly
from the compatibility equations, and the Kan conditions compare the
restriction map X_n -> horn_set(n, i) for surjectivity (weak) or bijectivity
(strict). Over finite sets a surjection always has a section, so the weak
condition is implemented as plain surjectivity.

Classification at a truncation level is evidence, not proof: the reports say
which Kan patterns hold on the stored levels only.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import (
    FinCategory,
    FinGroupoid,
    FinSet,
    StructuralError,
    ValidationReport,
    Violation,
    finset,
)
from .labels import tup, untup


@dataclass(frozen=True)
class TruncatedSSet:
    """Levels X_0..X_k with face maps (n, i): X_n -> X_{n-1} for 1 <= n <= k
    and degeneracy maps (n, j): X_n -> X_{n+1} for 0 <= n < k."""

    levels: tuple[FinSet, ...]
    face: Mapping[tuple[int, int], Mapping[str, str]]
    degen: Mapping[tuple[int, int], Mapping[str, str]]

    @property
    def k(self) -> int:
        return len(self.levels) - 1

    def level(self, n: int) -> FinSet:
        if not 0 <= n <= self.k:
            raise StructuralError(f"level {n} not stored (k = {self.k})")
        return self.levels[n]

    def d(self, n: int, i: int, x: str) -> str:
        try:
            return self.face[(n, i)][x]
        except KeyError:
            raise StructuralError(f"face d_{i} undefined on level {n} at {x!r}") from None

    def s(self, n: int, j: int, x: str) -> str:
        try:
            return self.degen[(n, j)][x]
        except KeyError:
            raise StructuralError(f"degeneracy s_{j} undefined on level {n} at {x!r}") from None


def validate_sset(X: TruncatedSSet) -> ValidationReport:
    """Check totality of the tables and the five simplicial identity families
    on every stored level."""
    out: list[Violation] = []
    k = X.k

    def bad(code: str, msg: str, witness) -> None:
        out.append(Violation("structural", code, msg, witness))

    for n in range(1, k + 1):
        for i in range(n + 1):
            t = X.face.get((n, i))
            if t is None:
                bad("face-missing", f"no face table d_{i} at level {n}", (n, i))
                continue
            for x in X.levels[n]:
                y = t.get(x)
                if y is None or y not in X.levels[n - 1]:
                    bad("face-range", f"d_{i} leaves level {n - 1}", (n, i, x))
    for n in range(k):
        for j in range(n + 1):
            t = X.degen.get((n, j))
            if t is None:
                bad("degen-missing", f"no degeneracy table s_{j} at level {n}", (n, j))
                continue
            for x in X.levels[n]:
                y = t.get(x)
                if y is None or y not in X.levels[n + 1]:
                    bad("degen-range", f"s_{j} leaves level {n + 1}", (n, j, x))
    if out:
        return ValidationReport(tuple(out))

    def ax(code: str, msg: str, witness) -> None:
        out.append(Violation("axiom", code, msg, witness))

    # d_i d_j = d_{j-1} d_i  (i < j)
    for n in range(2, k + 1):
        for j in range(n + 1):
            for i in range(j):
                for x in X.levels[n]:
                    if X.d(n - 1, i, X.d(n, j, x)) != X.d(n - 1, j - 1, X.d(n, i, x)):
                        ax("dd", "face maps do not commute", (n, i, j, x))
    # s_i s_j = s_{j+1} s_i  (i <= j)
    for n in range(k - 1):
        for j in range(n + 1):
            for i in range(j + 1):
                for x in X.levels[n]:
                    if X.s(n + 1, i, X.s(n, j, x)) != X.s(n + 1, j + 1, X.s(n, i, x)):
                        ax("ss", "degeneracies do not commute", (n, i, j, x))
    for n in range(k):
        for j in range(n + 1):
            for x in X.levels[n]:
                sx = X.s(n, j, x)
                # d_j s_j = id = d_{j+1} s_j
                if X.d(n + 1, j, sx) != x:
                    ax("ds-id", "d_j s_j is not the identity", (n, j, x))
                if X.d(n + 1, j + 1, sx) != x:
                    ax("ds-id", "d_{j+1} s_j is not the identity", (n, j, x))
                # d_i s_j = s_{j-1} d_i  (i < j), needs n >= 1
                for i in range(j):
                    if n >= 1 and X.d(n + 1, i, sx) != X.s(n - 1, j - 1, X.d(n, i, x)):
                        ax("ds-lt", "d_i s_j != s_{j-1} d_i", (n, i, j, x))
                # d_i s_j = s_j d_{i-1}  (i > j + 1)
                for i in range(j + 2, n + 2):
                    if n >= 1 and X.d(n + 1, i, sx) != X.s(n - 1, j, X.d(n, i - 1, x)):
                        ax("ds-gt", "d_i s_j != s_j d_{i-1}", (n, i, j, x))
    return ValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# nerves


def _chain_label(chain: Sequence[str]) -> str:
    if len(chain) == 1:
        return chain[0]
    return tup(*chain)


def _chain_parts(label: str, n: int) -> tuple[str, ...]:
    if n == 1:
        return (label,)
    parts = untup(label)
    if len(parts) != n:
        raise StructuralError(f"label {label!r} is not a {n}-chain")
    return parts


def nerve(C: FinCategory | FinGroupoid, k: int = 3) -> TruncatedSSet:
    """The chains-of-composable-arrows simplicial set of a finite category,
    stored up to level k. An n-chain (g_1, ..., g_n) runs through vertices
    x_0 -> x_1 -> ... -> x_n with g_i an arrow from x_{i-1} to x_i; inner
    faces compose adjacent arrows, outer faces drop an end, degeneracies
    insert identity arrows."""
    if k < 2:
        raise StructuralError("nerve needs truncation level k >= 2")
    chains: list[list[tuple[str, ...]]] = [[()]]
    chains.append([(g,) for g in C.arrows])
    for n in range(2, k + 1):
        nxt = [ch + (g,) for ch in chains[n - 1] for g in C.arrows
               if C.l[ch[-1]] == C.r[g]]
        chains.append(nxt)

    levels = [finset(list(C.objects))]
    for n in range(1, k + 1):
        levels.append(finset([_chain_label(ch) for ch in chains[n]]))

    face: dict[tuple[int, int], dict[str, str]] = {}
    degen: dict[tuple[int, int], dict[str, str]] = {}

    for g in C.arrows:
        face.setdefault((1, 0), {})[g] = C.l[g]
        face.setdefault((1, 1), {})[g] = C.r[g]
    for n in range(2, k + 1):
        for ch in chains[n]:
            x = _chain_label(ch)
            face.setdefault((n, 0), {})[x] = _chain_label(ch[1:])
            face.setdefault((n, n), {})[x] = _chain_label(ch[:-1])
            for i in range(1, n):
                glued = ch[:i - 1] + (C.comp[(ch[i], ch[i - 1])],) + ch[i + 1:]
                face.setdefault((n, i), {})[x] = _chain_label(glued)

    for obj in C.objects:
        degen.setdefault((0, 0), {})[obj] = C.unit[obj]
    for n in range(1, k):
        for ch in chains[n]:
            x = _chain_label(ch)
            for j in range(n + 1):
                vertex = C.r[ch[0]] if j == 0 else C.l[ch[j - 1]]
                stretched = ch[:j] + (C.unit[vertex],) + ch[j:]
                degen.setdefault((n, j), {})[x] = _chain_label(stretched)

    X = TruncatedSSet(tuple(levels), face, degen)
    rep = validate_sset(X)
    if not rep.ok:
        raise StructuralError(f"nerve violates simplicial identities: {rep.first()}")
    return X


# ---------------------------------------------------------------------------
# horns and Kan conditions


@dataclass(frozen=True)
class HornFiller:
    """The faces of an (n, i)-horn: one (n-1)-simplex for every index j != i,
    satisfying d_a(face_b) = d_{b-1}(face_a) for a < b."""

    n: int
    i: int
    faces: tuple[tuple[int, str], ...]

    def face(self, j: int) -> str:
        for jj, x in self.faces:
            if jj == j:
                return x
        raise StructuralError(f"horn has no face {j}")


def _check_horn(X: TruncatedSSet, h: HornFiller) -> bool:
    idx = [j for j, _ in h.faces]
    for a in idx:
        for b in idx:
            if a < b and X.d(h.n - 1, a, h.face(b)) != X.d(h.n - 1, b - 1, h.face(a)):
                return False
    return True


def horn_set(X: TruncatedSSet, n: int, i: int) -> tuple[HornFiller, ...]:
    """All compatible (n, i)-horns, enumerated by backtracking over the face
    indices j != i in increasing order. Deterministic output order."""
    if not (2 <= n <= X.k) or not (0 <= i <= n):
        raise StructuralError(f"horn index ({n}, {i}) out of range for k = {X.k}")
    indices = [j for j in range(n + 1) if j != i]
    lower = X.levels[n - 1]
    out: list[HornFiller] = []

    def extend(pos: int, chosen: list[tuple[int, str]]) -> None:
        if pos == len(indices):
            out.append(HornFiller(n, i, tuple(chosen)))
            return
        b = indices[pos]
        for cand in lower:
            ok = True
            for a, xa in chosen:
                if X.d(n - 1, a, cand) != X.d(n - 1, b - 1, xa):
                    ok = False
                    break
            if ok:
                chosen.append((b, cand))
                extend(pos + 1, chosen)
                chosen.pop()

    extend(0, [])
    return tuple(out)


def _restriction(X: TruncatedSSet, n: int, i: int, x: str) -> tuple[tuple[int, str], ...]:
    return tuple((j, X.d(n, j, x)) for j in range(n + 1) if j != i)


@dataclass(frozen=True)
class KanReport:
    n: int
    i: int
    strict: bool
    ok: bool
    unfilled: HornFiller | None = None
    overfilled: tuple[HornFiller, tuple[str, ...]] | None = None
    horn_count: int = 0
    simplex_count: int = 0


def kan_check(X: TruncatedSSet, n: int, i: int, strict: bool = False) -> KanReport:
    """Weak Kan: every (n, i)-horn is the restriction of some n-simplex.
    Strict Kan: of exactly one. Failures carry the offending horn."""
    horns = horn_set(X, n, i)
    fillers: dict[tuple[tuple[int, str], ...], list[str]] = {}
    for x in X.levels[n]:
        fillers.setdefault(_restriction(X, n, i, x), []).append(x)
    unfilled = None
    overfilled = None
    for h in horns:
        got = fillers.get(h.faces, [])
        if not got and unfilled is None:
            unfilled = h
        if len(got) > 1 and overfilled is None:
            overfilled = (h, tuple(got))
    ok = unfilled is None and (not strict or overfilled is None)
    return KanReport(n, i, strict, ok, unfilled, overfilled if strict else None,
                     len(horns), len(X.levels[n]))


@dataclass(frozen=True)
class ClassifyReport:
    """Which Kan patterns hold on the stored levels. Truncated evidence: a
    pattern holding up to level k says nothing about higher levels."""

    level: int
    is_nerve_of_category: bool
    is_1_groupoid_nerve: bool
    single_vertex: bool
    group_candidates: tuple[int, ...]
    note: str = "evidence up to the stored truncation level only"

    @property
    def is_group_candidate(self) -> bool:
        return bool(self.group_candidates)


def classify(X: TruncatedSSet, k: int | None = None) -> ClassifyReport:
    """Test the category / 1-groupoid / n-group Kan patterns on levels 2..k.

    Category pattern: strict inner Kan. 1-groupoid pattern: strict Kan at
    every index. n-group candidates: a single 0-simplex, weak Kan everywhere
    up to level n and strict Kan everywhere above, checked on stored levels.
    """
    if k is None:
        k = X.k
    if k < 3:
        raise StructuralError("classification needs truncation level k >= 3")
    k = min(k, X.k)
    weak: dict[tuple[int, int], bool] = {}
    strict: dict[tuple[int, int], bool] = {}
    for n in range(2, k + 1):
        for i in range(n + 1):
            rep = kan_check(X, n, i, strict=True)
            strict[(n, i)] = rep.ok
            weak[(n, i)] = rep.ok or kan_check(X, n, i, strict=False).ok

    cat = all(strict[(n, i)] for n in range(2, k + 1) for i in range(1, n))
    grpd = all(strict[(n, i)] for n in range(2, k + 1) for i in range(n + 1))
    single = len(X.levels[0]) == 1
    candidates = []
    if single:
        for n in range(1, k + 1):
            low = all(weak[(c, i)] for c in range(2, min(n, k) + 1) for i in range(c + 1))
            high = all(strict[(c, i)] for c in range(n + 1, k + 1) for i in range(c + 1))
            if low and high:
                candidates.append(n)
    return ClassifyReport(k, cat, grpd, single, tuple(candidates))


# ---------------------------------------------------------------------------
# small non-groupoid categories for the Kan tests


def poset_category(n: int = 2) -> FinCategory:
    """The linear order 0 < 1 < ... < n-1 as a category: one arrow j -> i
    whenever j <= i, labelled tup(i, j)."""
    if n < 1:
        raise StructuralError("poset needs n >= 1")
    xs = [str(i) for i in range(n)]
    arrows = [tup(xs[i], xs[j]) for i in range(n) for j in range(i + 1)]
    l = {tup(xs[i], xs[j]): xs[i] for i in range(n) for j in range(i + 1)}
    r = {tup(xs[i], xs[j]): xs[j] for i in range(n) for j in range(i + 1)}
    comp = {}
    for i in range(n):
        for j in range(i + 1):
            for m in range(j + 1):
                comp[(tup(xs[i], xs[j]), tup(xs[j], xs[m]))] = tup(xs[i], xs[m])
    unit = {xs[i]: tup(xs[i], xs[i]) for i in range(n)}
    return FinCategory(finset(xs), finset(arrows), l, r, comp, unit)


def truncated_free_monoid(m: int = 4) -> FinCategory:
    """Powers a^0..a^{m-1} of one generator with saturating product
    a^i a^j = a^min(i+j, m-1); a one-object category that is not a groupoid."""
    if m < 2:
        raise StructuralError("need at least two powers")
    els = [f"a{i}" for i in range(m)]
    comp = {(f"a{i}", f"a{j}"): f"a{min(i + j, m - 1)}"
            for i in range(m) for j in range(m)}
    ident = {e: "*" for e in els}
    return FinCategory(finset(["*"]), finset(els), dict(ident), dict(ident),
                       comp, {"*": "a0"})
