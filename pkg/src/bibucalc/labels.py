"""Tuple-structured string labels.

Everything in this package names objects, arrows and carrier points by opaque
strings. Constructions that build elements out of several parts (products,
action groupoids, composed carriers) need a way to pack parts into one label
that is deterministic, readable, and collision free. tup/untup below are that
encoding: parts are escaped and joined with commas inside parentheses, so
labels nest without ambiguity.
"""
from __future__ import annotations

from functools import lru_cache

_SPECIAL = {"\\", ",", "(", ")"}


def esc(part: str) -> str:
    if part == "":
        return "\\0"
    out = []
    for ch in part:
        if ch in _SPECIAL:
            out.append("\\")
        out.append(ch)
    return "".join(out)


def tup(*parts: str) -> str:
    """Pack parts into a single label. Injective over tuples of strings."""
    return "(" + ",".join(esc(p) for p in parts) + ")"


@lru_cache(maxsize=1 << 20)
def untup(label: str) -> tuple[str, ...]:
    """Inverse of tup. Raises ValueError for labels not produced by tup."""
    if len(label) < 2 or label[0] != "(" or label[-1] != ")":
        raise ValueError(f"not a tuple label: {label!r}")
    body = label[1:-1]
    if body == "":
        return ()
    parts: list[str] = []
    cur: list[str] = []
    i = 0
    n = len(body)
    while i < n:
        ch = body[i]
        if ch == "\\":
            if i + 1 >= n:
                raise ValueError(f"dangling escape in {label!r}")
            nxt = body[i + 1]
            if nxt in _SPECIAL:
                cur.append(nxt)
            elif nxt == "0":
                pass  # marker for the empty part
            else:
                raise ValueError(f"bad escape \\{nxt} in {label!r}")
            i += 2
        elif ch == ",":
            parts.append("".join(cur))
            cur = []
            i += 1
        elif ch in "()":
            raise ValueError(f"unescaped {ch!r} inside {label!r}")
        else:
            cur.append(ch)
            i += 1
    parts.append("".join(cur))
    return tuple(parts)
