"""JSON interchange for every object the calculus produces.

All carriers are label lists, all maps explicit JSON objects, all binary
tables sorted triple lists; dumps() output is byte-stable (sorted keys,
two-space indent, trailing newline) so repeated runs diff clean. Wherever a
sub-object is referenced, either an inline JSON object or a path string
relative to the referencing file is accepted.

Loaders validate on ingest by default and raise StructuralError on the first
violation; pass validate=False to get the raw object for inspection.
"""
from __future__ import annotations

import hashlib
import json
import os
from typing import Any, Mapping

from .bibundle import Bibundle, bibundle_from_tables, validate_bibundle
from .core import (
    FinCategory,
    FinGroupoid,
    GroupoidHom,
    StructuralError,
    check_hom,
    finset,
    validate_category,
    validate_groupoid,
)
from .groups import StackyGroupData
from .simplicial import TruncatedSSet, validate_sset


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def save_json(path: str, obj: Any) -> str:
    with open(path, "w") as fh:
        fh.write(dumps(obj))
    return path


def load_json(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)


def sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def _triples(table: Mapping[tuple[str, str], str]) -> list[list[str]]:
    return [[a, b, v] for (a, b), v in sorted(table.items())]


def _untriples(rows, what: str) -> dict[tuple[str, str], str]:
    out = {}
    for row in rows:
        if not isinstance(row, list) or len(row) != 3:
            raise StructuralError(f"{what} rows must be [a, b, value] triples")
        out[(row[0], row[1])] = row[2]
    return out


def _deref(ref: Any, base: str | None, loader, what: str):
    if isinstance(ref, str):
        path = ref if os.path.isabs(ref) or base is None else os.path.join(base, ref)
        try:
            obj = load_json(path)
        except OSError as exc:
            raise StructuralError(f"cannot read {what} reference {ref!r}: {exc}") from None
        return loader(obj, os.path.dirname(path) or ".")
    if isinstance(ref, dict):
        return loader(ref, base)
    raise StructuralError(f"{what} reference must be a path or an inline object")


# ---------------------------------------------------------------------------
# groupoids and categories


def groupoid_to_json(G: FinGroupoid) -> dict:
    return {
        "objects": list(G.objects),
        "arrows": list(G.arrows),
        "l": dict(G.l),
        "r": dict(G.r),
        "comp": _triples(G.comp),
        "inv": dict(G.inv),
        "unit": dict(G.unit),
    }


def groupoid_from_json(obj: Any, base: str | None = None, validate: bool = True) -> FinGroupoid:
    if not isinstance(obj, dict):
        raise StructuralError("groupoid file must hold a JSON object")
    missing = {"objects", "arrows", "l", "r", "comp", "inv", "unit"} - set(obj)
    if missing:
        raise StructuralError(f"groupoid file missing keys: {sorted(missing)}")
    G = FinGroupoid(
        finset(obj["objects"]), finset(obj["arrows"]),
        dict(obj["l"]), dict(obj["r"]),
        _untriples(obj["comp"], "comp"), dict(obj["inv"]), dict(obj["unit"]),
    )
    if validate:
        rep = validate_groupoid(G)
        if not rep.ok:
            raise StructuralError(f"groupoid file invalid: {rep.first()}")
    return G


def category_to_json(C: FinCategory) -> dict:
    return {
        "objects": list(C.objects),
        "arrows": list(C.arrows),
        "l": dict(C.l),
        "r": dict(C.r),
        "comp": _triples(C.comp),
        "unit": dict(C.unit),
    }


def category_from_json(obj: Any, base: str | None = None, validate: bool = True) -> FinCategory:
    if not isinstance(obj, dict):
        raise StructuralError("category file must hold a JSON object")
    missing = {"objects", "arrows", "l", "r", "comp", "unit"} - set(obj)
    if missing:
        raise StructuralError(f"category file missing keys: {sorted(missing)}")
    C = FinCategory(
        finset(obj["objects"]), finset(obj["arrows"]),
        dict(obj["l"]), dict(obj["r"]),
        _untriples(obj["comp"], "comp"), dict(obj["unit"]),
    )
    if validate:
        rep = validate_category(C)
        if not rep.ok:
            raise StructuralError(f"category file invalid: {rep.first()}")
    return C


# ---------------------------------------------------------------------------
# bibundles and homomorphisms


def bibundle_to_json(M: Bibundle, provenance: str | None = None) -> dict:
    out = {
        "leftGroupoid": groupoid_to_json(M.left_groupoid),
        "rightGroupoid": groupoid_to_json(M.right_groupoid),
        "carrier": list(M.carrier),
        "lM": dict(M.lmap),
        "rM": dict(M.rmap),
        "leftAct": _triples(M.left_table()),
        "rightAct": _triples(M.right_table()),
    }
    if provenance is not None:
        out["provenance"] = provenance
    return out


def bibundle_from_json(obj: Any, base: str | None = None, validate: bool = True) -> Bibundle:
    if not isinstance(obj, dict):
        raise StructuralError("bibundle file must hold a JSON object")
    missing = {"leftGroupoid", "rightGroupoid", "carrier", "lM", "rM",
               "leftAct", "rightAct"} - set(obj)
    if missing:
        raise StructuralError(f"bibundle file missing keys: {sorted(missing)}")
    G = _deref(obj["leftGroupoid"], base,
               lambda o, b: groupoid_from_json(o, b, validate), "left groupoid")
    H = _deref(obj["rightGroupoid"], base,
               lambda o, b: groupoid_from_json(o, b, validate), "right groupoid")
    M = bibundle_from_tables(
        G, H, obj["carrier"], dict(obj["lM"]), dict(obj["rM"]),
        _untriples(obj["leftAct"], "leftAct"), _untriples(obj["rightAct"], "rightAct"),
    )
    if validate:
        rep = validate_bibundle(M)
        if not rep.ok:
            raise StructuralError(f"bibundle file invalid: {rep.first()}")
    return M


def hom_to_json(phi: GroupoidHom) -> dict:
    return {
        "source": groupoid_to_json(phi.source),
        "target": groupoid_to_json(phi.target),
        "f0": dict(phi.f0),
        "f1": dict(phi.f1),
    }


def hom_from_json(obj: Any, base: str | None = None, validate: bool = True) -> GroupoidHom:
    if not isinstance(obj, dict):
        raise StructuralError("hom file must hold a JSON object")
    missing = {"source", "target", "f0", "f1"} - set(obj)
    if missing:
        raise StructuralError(f"hom file missing keys: {sorted(missing)}")
    S = _deref(obj["source"], base,
               lambda o, b: groupoid_from_json(o, b, validate), "source groupoid")
    T = _deref(obj["target"], base,
               lambda o, b: groupoid_from_json(o, b, validate), "target groupoid")
    phi = GroupoidHom(S, T, dict(obj["f0"]), dict(obj["f1"]))
    if validate:
        rep = check_hom(phi)
        if not rep.ok:
            raise StructuralError(f"hom file invalid: {rep.first()}")
    return phi


# ---------------------------------------------------------------------------
# simplicial sets


def sset_to_json(X: TruncatedSSet) -> dict:
    face: dict[str, dict[str, dict]] = {}
    for (n, i), t in sorted(X.face.items()):
        face.setdefault(str(n), {})[str(i)] = dict(t)
    degen: dict[str, dict[str, dict]] = {}
    for (n, j), t in sorted(X.degen.items()):
        degen.setdefault(str(n), {})[str(j)] = dict(t)
    return {"levels": [list(L) for L in X.levels], "face": face, "degen": degen}


def sset_from_json(obj: Any, base: str | None = None, validate: bool = True) -> TruncatedSSet:
    if not isinstance(obj, dict):
        raise StructuralError("simplicial set file must hold a JSON object")
    missing = {"levels", "face", "degen"} - set(obj)
    if missing:
        raise StructuralError(f"simplicial set file missing keys: {sorted(missing)}")
    levels = tuple(finset(L) for L in obj["levels"])
    face = {(int(n), int(i)): dict(t)
            for n, per in obj["face"].items() for i, t in per.items()}
    degen = {(int(n), int(j)): dict(t)
             for n, per in obj["degen"].items() for j, t in per.items()}
    X = TruncatedSSet(levels, face, degen)
    if validate:
        rep = validate_sset(X)
        if not rep.ok:
            raise StructuralError(f"simplicial set file invalid: {rep.first()}")
    return X


# ---------------------------------------------------------------------------
# stacky-group specs


def group_spec_to_json(data: StackyGroupData) -> dict:
    out = {
        "groupoid": groupoid_to_json(data.base),
        "mu": bibundle_to_json(data.mu),
        "e": bibundle_to_json(data.e),
    }
    if data.i is not None:
        out["i"] = bibundle_to_json(data.i)
    return out


def group_spec_from_json(obj: Any, base: str | None = None,
                         validate: bool = True) -> StackyGroupData:
    if not isinstance(obj, dict):
        raise StructuralError("group spec file must hold a JSON object")
    missing = {"groupoid", "mu", "e"} - set(obj)
    if missing:
        raise StructuralError(f"group spec file missing keys: {sorted(missing)}")
    G = _deref(obj["groupoid"], base,
               lambda o, b: groupoid_from_json(o, b, validate), "base groupoid")
    mu = _deref(obj["mu"], base,
                lambda o, b: bibundle_from_json(o, b, validate), "mu")
    e = _deref(obj["e"], base,
               lambda o, b: bibundle_from_json(o, b, validate), "e")
    i = None
    if "i" in obj:
        i = _deref(obj["i"], base,
                   lambda o, b: bibundle_from_json(o, b, validate), "i")
    return StackyGroupData(base=G, mu=mu, e=e, i=i)


# ---------------------------------------------------------------------------
# kind sniffing, for the `validate` verb


def detect_kind(obj: Any) -> str:
    if not isinstance(obj, dict):
        raise StructuralError("expected a JSON object at the top level")
    keys = set(obj)
    if {"carrier", "leftAct"} <= keys:
        return "bibundle"
    if {"levels", "face"} <= keys:
        return "sset"
    if {"f0", "f1"} <= keys:
        return "hom"
    if {"groupoid", "mu", "e"} <= keys:
        return "group-spec"
    if "inv" in keys and "objects" in keys:
        return "groupoid"
    if {"objects", "comp"} <= keys:
        return "category"
    raise StructuralError("unrecognized file kind")


_LOADERS = {
    "groupoid": groupoid_from_json,
    "category": category_from_json,
    "bibundle": bibundle_from_json,
    "hom": hom_from_json,
    "sset": sset_from_json,
    "group-spec": group_spec_from_json,
}


def load_typed(path: str, validate: bool = True):
    """Load any known file kind; returns (kind, object)."""
    obj = load_json(path)
    kind = detect_kind(obj)
    loaded = _LOADERS[kind](obj, os.path.dirname(path) or ".", validate)
    return kind, loaded
