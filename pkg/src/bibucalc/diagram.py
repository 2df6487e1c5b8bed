"""A small textual language for wiring bibundles over one base groupoid.

Expressions denote bibundles between powers of a fixed base G. Generators:

    id    : 1 -> 1   arrows of G acting on themselves
    tau   : 2 -> 2   the swap
    delta : 1 -> 2   pairs of arrows sharing their left object
    eps   : 1 -> 0   objects of G over the point
    ev    : 2 -> 0   arrows as a (GxG)-point bundle, (g1,g2).m = g1 m g2^-1
    cv    : 0 -> 2   arrows as a point-(GxG) bundle, m.(h1,h2) = h1^-1 m h2

plus any names bound in the environment (their arities are read off from
their groupoids). `*` is juxtaposition (side by side), `;` is composition
(top to bottom), and `*` binds tighter. Names may use primes, e.g. mu'.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

from .bibundle import Bibundle
from .calculus import (
    IsoWitness,
    bundlize,
    compose,
    cv_bibundle,
    diagonal_bibundle,
    ev_bibundle,
    find_iso,
    identity_bibundle,
    terminal_bibundle,
)
from .core import FinGroupoid, StructuralError, finset, power_groupoid, swap_hom
from .labels import tup, untup

Span = tuple[int, int]


class DiagramError(StructuralError):
    """Parse or wiring failure; span is a (start, end) offset into the text."""

    def __init__(self, message: str, span: Span | None = None):
        self.span = span
        if span is not None:
            message = f"{message} (at {span[0]}..{span[1]})"
        super().__init__(message)


@dataclass(frozen=True)
class Gen:
    name: str
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Tensor:
    parts: tuple
    span: Span = field(default=(0, 0), compare=False)


@dataclass(frozen=True)
class Seq:
    parts: tuple
    span: Span = field(default=(0, 0), compare=False)


Ast = Union[Gen, Tensor, Seq]

_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<sym>[;*()]))")


def tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip()
            if not rest:
                break
            at = len(text) - len(rest)
            raise DiagramError(f"unexpected character {rest[0]!r}", (at, at + 1))
        if m.group("name"):
            out.append(("name", m.group("name"), m.start("name")))
        else:
            out.append((m.group("sym"), m.group("sym"), m.start("sym")))
        pos = m.end()
    return out


def parse(text: str) -> Ast:
    toks = tokenize(text)
    end = len(text)
    i = 0

    def peek() -> tuple[str, str, int] | None:
        return toks[i] if i < len(toks) else None

    def factor() -> Ast:
        nonlocal i
        tok = peek()
        if tok is None:
            raise DiagramError("expected a name or '('", (end, end))
        kind, val, at = tok
        if kind == "name":
            i += 1
            return Gen(val, (at, at + len(val)))
        if kind == "(":
            i += 1
            inner = expr()
            closing = peek()
            if closing is None or closing[0] != ")":
                where = (closing[2], closing[2] + 1) if closing else (end, end)
                raise DiagramError("expected ')'", where)
            i += 1
            return inner
        raise DiagramError(f"expected a name or '(', found {val!r}", (at, at + 1))

    def term() -> Ast:
        nonlocal i
        parts = [factor()]
        while (tok := peek()) and tok[0] == "*":
            i += 1
            parts.append(factor())
        if len(parts) == 1:
            return parts[0]
        return Tensor(tuple(parts), (parts[0].span[0], parts[-1].span[1]))

    def expr() -> Ast:
        nonlocal i
        parts = [term()]
        while (tok := peek()) and tok[0] == ";":
            i += 1
            parts.append(term())
        if len(parts) == 1:
            return parts[0]
        return Seq(tuple(parts), (parts[0].span[0], parts[-1].span[1]))

    ast = expr()
    if (tok := peek()) is not None:
        raise DiagramError(f"unexpected {tok[1]!r} after expression", (tok[2], tok[2] + 1))
    return ast


def to_text(ast: Ast) -> str:
    if isinstance(ast, Gen):
        return ast.name
    if isinstance(ast, Tensor):
        bits = []
        for p in ast.parts:
            t = to_text(p)
            bits.append(f"({t})" if isinstance(p, (Seq, Tensor)) else t)
        return " * ".join(bits)
    if isinstance(ast, Seq):
        bits = []
        for p in ast.parts:
            t = to_text(p)
            bits.append(f"({t})" if isinstance(p, Seq) else t)
        return " ; ".join(bits)
    raise DiagramError(f"not a diagram node: {ast!r}")


@dataclass(frozen=True)
class Wired:
    """A bibundle together with its arities over the base."""
    bib: Bibundle
    m: int
    n: int


class DiagramEnv:
    """Evaluation context: the base groupoid, bound names, cached powers."""

    def __init__(self, base: FinGroupoid,
                 bindings: Mapping[str, Bibundle] | None = None,
                 max_arity: int = 6):
        self.base = base
        self.bindings = dict(bindings or {})
        self.max_arity = max_arity
        self._powers: dict[int, FinGroupoid] = {1: base}
        self._cache: dict[str, Wired] = {}

    def power(self, k: int) -> FinGroupoid:
        if k not in self._powers:
            self._powers[k] = power_groupoid(self.base, k)
        return self._powers[k]

    def _arity_of(self, K: FinGroupoid, span: Span | None) -> int:
        nO, nA = len(self.base.objects), len(self.base.arrows)
        for k in range(self.max_arity + 1):
            if len(K.objects) != nO ** k or len(K.arrows) != nA ** k:
                continue
            P = self.power(k)
            if K is P or K == P:
                return k
        raise DiagramError(
            f"groupoid is not a power of the base up to arity {self.max_arity}", span)

    def wire(self, bib: Bibundle, span: Span | None = None) -> Wired:
        """Pin a bibundle onto the cached power groupoids."""
        m = self._arity_of(bib.left_groupoid, span)
        n = self._arity_of(bib.right_groupoid, span)
        if bib.left_groupoid is self.power(m) and bib.right_groupoid is self.power(n):
            return Wired(bib, m, n)
        pinned = Bibundle(self.power(m), self.power(n), bib.carrier,
                          bib.lmap, bib.rmap, bib.left_fn, bib.right_fn)
        return Wired(pinned, m, n)

    def resolve(self, name: str, span: Span | None = None) -> Wired:
        if name in self._cache:
            return self._cache[name]
        G = self.base
        if name in self.bindings:
            w = self.wire(self.bindings[name], span)
        elif name == "id":
            w = Wired(identity_bibundle(G), 1, 1)
        elif name == "tau":
            w = self.wire(bundlize(swap_hom(G, G)), span)
        elif name == "delta":
            w = self.wire(diagonal_bibundle(G), span)
        elif name == "eps":
            w = self.wire(terminal_bibundle(G), span)
        elif name == "ev":
            w = self.wire(ev_bibundle(G), span)
        elif name == "cv":
            w = self.wire(cv_bibundle(G), span)
        else:
            raise DiagramError(f"unbound name {name!r}", span)
        self._cache[name] = w
        return w


def _as_ast(expr: str | Ast) -> Ast:
    return parse(expr) if isinstance(expr, str) else expr


def typecheck(env: DiagramEnv, expr: str | Ast) -> tuple[int, int]:
    """Arity (inputs, outputs) of the expression; raises DiagramError."""
    ast = _as_ast(expr)
    if isinstance(ast, Gen):
        w = env.resolve(ast.name, ast.span)
        return (w.m, w.n)
    if isinstance(ast, Tensor):
        ms, ns = 0, 0
        for p in ast.parts:
            m, n = typecheck(env, p)
            ms += m
            ns += n
        return (ms, ns)
    if isinstance(ast, Seq):
        m0, n = typecheck(env, ast.parts[0])
        for p in ast.parts[1:]:
            m2, n2 = typecheck(env, p)
            if m2 != n:
                raise DiagramError(
                    f"cannot compose: {n} output wire(s) against {m2} input wire(s)",
                    p.span)
            n = n2
        return (m0, n)
    raise DiagramError(f"not a diagram node: {ast!r}")


def _split(label: str, k: int) -> list[str]:
    if k == 0:
        return []
    if k == 1:
        return [label]
    parts = untup(label)
    if len(parts) != k:
        raise StructuralError(f"label {label!r} does not have {k} components")
    return list(parts)


def _join(parts: Sequence[str]) -> str:
    if not parts:
        return "()"
    if len(parts) == 1:
        return parts[0]
    return tup(*parts)


def tensor_wired(env: DiagramEnv, parts: Sequence[Wired]) -> Wired:
    """Side-by-side juxtaposition, flattened onto a single power groupoid.

    The binary product would nest wire bundles ((G^2) x G instead of G^3);
    here arrow labels are split and regrouped so the result always lives over
    env.power(total).
    """
    ws = list(parts)
    if not ws:
        raise DiagramError("empty juxtaposition")
    if len(ws) == 1:
        return ws[0]
    msizes = [w.m for w in ws]
    nsizes = [w.n for w in ws]
    m_total, n_total = sum(msizes), sum(nsizes)
    GL, GR = env.power(m_total), env.power(n_total)
    carrier = []
    lmap: dict[str, str] = {}
    rmap: dict[str, str] = {}
    for combo in itertools.product(*(w.bib.carrier for w in ws)):
        p = tup(*combo)
        carrier.append(p)
        lparts: list[str] = []
        rparts: list[str] = []
        for w, c in zip(ws, combo):
            lparts.extend(_split(w.bib.lmap[c], w.m))
            rparts.extend(_split(w.bib.rmap[c], w.n))
        lmap[p] = _join(lparts)
        rmap[p] = _join(rparts)

    def left_fn(gg: str, p: str) -> str:
        comps = _split(gg, m_total)
        cs = untup(p)
        out = []
        at = 0
        for w, c in zip(ws, cs):
            chunk = _join(comps[at:at + w.m])
            at += w.m
            out.append(w.bib.left_fn(chunk, c))
        return tup(*out)

    def right_fn(p: str, hh: str) -> str:
        comps = _split(hh, n_total)
        cs = untup(p)
        out = []
        at = 0
        for w, c in zip(ws, cs):
            chunk = _join(comps[at:at + w.n])
            at += w.n
            out.append(w.bib.right_fn(c, chunk))
        return tup(*out)

    bib = Bibundle(GL, GR, finset(carrier), lmap, rmap, left_fn, right_fn)
    return Wired(bib, m_total, n_total)


def wired_tensor_witness(env: DiagramEnv,
                         entries: Sequence[tuple[IsoWitness, Wired, Wired]]) -> IsoWitness:
    """Juxtapose witnesses componentwise between flattened tensors.

    Each entry is (witness, source wiring, target wiring); the wirings must
    carry the same carriers as the witness endpoints.
    """
    if not entries:
        raise DiagramError("empty witness juxtaposition")
    if len(entries) == 1:
        return entries[0][0]
    source = tensor_wired(env, [s for _, s, _ in entries])
    target = tensor_wired(env, [t for _, _, t in entries])
    fwds = [w.forward for w, _, _ in entries]
    forward = {}
    for rep in source.bib.carrier:
        cs = untup(rep)
        forward[rep] = tup(*(f[c] for f, c in zip(fwds, cs)))
    backward = {v: k for k, v in forward.items()}
    if len(backward) != len(forward):
        raise StructuralError("juxtaposed witnesses are not a bijection")
    return IsoWitness(source.bib, target.bib, forward, backward)


def _tensor_label(atoms: Sequence[str]) -> str:
    if len(atoms) == 1:
        return atoms[0]
    return tup(*atoms)


def interchange_blocks(env: DiagramEnv,
                       top: Sequence[Wired],
                       bottom: Sequence[Wired],
                       blocks: Sequence[tuple[int, int]],
                       source: Bibundle | None = None,
                       block_composites: Sequence[Bibundle] | None = None,
                       ) -> tuple[IsoWitness, list[Wired]]:
    """Regroup a two-layer composite into side-by-side vertical blocks.

    `blocks` lists (top atom count, bottom atom count) for consecutive runs;
    each block's top output arity must equal its bottom input arity. Returns
    a witness from compose(tensor(top), tensor(bottom)) to the juxtaposition
    of the per-block composites, together with those block composites.
    """
    if sum(kt for kt, _ in blocks) != len(top) or sum(kb for _, kb in blocks) != len(bottom):
        raise DiagramError("blocks do not partition the layers")
    if source is None:
        source = compose(tensor_wired(env, list(top)).bib,
                         tensor_wired(env, list(bottom)).bib)
    comps: list[Wired] = []
    at_t, at_b = 0, 0
    spans = []
    for kt, kb in blocks:
        t_slice = list(top[at_t:at_t + kt])
        b_slice = list(bottom[at_b:at_b + kb])
        t_out = sum(w.n for w in t_slice)
        b_in = sum(w.m for w in b_slice)
        if t_out != b_in:
            raise DiagramError(
                f"block mismatch: {t_out} output wire(s) against {b_in} input wire(s)")
        spans.append((at_t, kt, at_b, kb))
        at_t += kt
        at_b += kb
        if block_composites is not None:
            bib = block_composites[len(spans) - 1]
        else:
            bib = compose(tensor_wired(env, t_slice).bib, tensor_wired(env, b_slice).bib)
        comps.append(Wired(bib, sum(w.m for w in t_slice), sum(w.n for w in b_slice)))
    target = tensor_wired(env, comps)
    forward = {}
    for rep in source.carrier:
        t_elt, b_elt = untup(rep)
        t_parts = list(untup(t_elt)) if len(top) > 1 else [t_elt]
        b_parts = list(untup(b_elt)) if len(bottom) > 1 else [b_elt]
        vals = []
        for (t0, kt, b0, kb), blk in zip(spans, comps):
            t_sub = _tensor_label(t_parts[t0:t0 + kt])
            b_sub = _tensor_label(b_parts[b0:b0 + kb])
            vals.append(blk.bib.project(t_sub, b_sub))
        forward[rep] = _tensor_label(vals)
    backward = {v: k for k, v in forward.items()}
    if len(backward) != len(forward) or len(forward) != len(target.bib.carrier):
        raise StructuralError("block regrouping failed to be a bijection")
    return IsoWitness(source, target.bib, forward, backward), comps


def evaluate_wired(env: DiagramEnv, expr: str | Ast) -> Wired:
    ast = _as_ast(expr)
    if isinstance(ast, Gen):
        return env.resolve(ast.name, ast.span)
    if isinstance(ast, Tensor):
        return tensor_wired(env, [evaluate_wired(env, p) for p in ast.parts])
    if isinstance(ast, Seq):
        acc = evaluate_wired(env, ast.parts[0])
        for p in ast.parts[1:]:
            nxt = evaluate_wired(env, p)
            if nxt.m != acc.n:
                raise DiagramError(
                    f"cannot compose: {acc.n} output wire(s) against {nxt.m} input wire(s)",
                    p.span)
            acc = Wired(compose(acc.bib, nxt.bib), acc.m, nxt.n)
        return acc
    raise DiagramError(f"not a diagram node: {ast!r}")


def evaluate(env: DiagramEnv, expr: str | Ast) -> Bibundle:
    return evaluate_wired(env, expr).bib


@dataclass(frozen=True)
class IdentityCheck:
    ok: bool
    witness: IsoWitness | None
    lhs: Bibundle
    rhs: Bibundle
    reason: str = ""


def check_identity(env: DiagramEnv,
                   lhs: str | Ast,
                   rhs: str | Ast | Bibundle | Wired) -> IdentityCheck:
    """Evaluate both sides and search for an equivariant bijection."""
    lw = evaluate_wired(env, lhs)
    if isinstance(rhs, Wired):
        rw = rhs
    elif isinstance(rhs, Bibundle):
        rw = env.wire(rhs)
    else:
        rw = evaluate_wired(env, rhs)
    if (lw.m, lw.n) != (rw.m, rw.n):
        return IdentityCheck(False, None, lw.bib, rw.bib,
                             reason=f"arities differ: {(lw.m, lw.n)} vs {(rw.m, rw.n)}")
    w = find_iso(lw.bib, rw.bib)
    if w is None:
        return IdentityCheck(False, None, lw.bib, rw.bib, reason="no equivariant bijection")
    return IdentityCheck(True, w, lw.bib, rw.bib)
