import json
import os
import random

import pytest
from hypothesis import given, settings, strategies as st

from bibucalc import io
from bibucalc.calculus import compose, diagonal_bibundle, identity_bibundle
from bibucalc.cli import main
from bibucalc.core import (
    StructuralError,
    GroupoidHom,
    cyclic_groupoid,
    pair_groupoid,
    validate_groupoid,
)
from bibucalc.generators import random_groupoid
from bibucalc.groups import kronecker_finite
from bibucalc.simplicial import nerve, poset_category


def test_groupoid_round_trip_and_stability():
    G = pair_groupoid(3)
    d = io.groupoid_to_json(G)
    assert io.groupoid_from_json(d) == G
    assert io.dumps(d) == io.dumps(io.groupoid_to_json(io.groupoid_from_json(d)))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_random_groupoid_round_trip(seed):
    G = random_groupoid(random.Random(seed), max_objects=3, max_isotropy=3)
    assert io.groupoid_from_json(io.groupoid_to_json(G)) == G


def test_bibundle_round_trip_with_provenance():
    M = compose(identity_bibundle(cyclic_groupoid(3)), identity_bibundle(cyclic_groupoid(3)))
    d = io.bibundle_to_json(M, provenance="id ; id")
    assert d["provenance"] == "id ; id"
    M2 = io.bibundle_from_json(d)
    assert M2.carrier == M.carrier
    assert M2.left_table() == M.left_table()


def test_sset_round_trip():
    X = nerve(poset_category(2), 3)
    X2 = io.sset_from_json(io.sset_to_json(X))
    assert X2.levels == X.levels
    assert X2.face == X.face
    assert X2.degen == X.degen


def test_hom_round_trip():
    G = cyclic_groupoid(4)
    phi = GroupoidHom(G, G, {"*": "*"}, {str(k): str((2 * k) % 4) for k in range(4)})
    phi2 = io.hom_from_json(io.hom_to_json(phi))
    assert phi2.f1 == phi.f1


def test_group_spec_round_trip():
    data = kronecker_finite(2, 1)
    data2 = io.group_spec_from_json(io.group_spec_to_json(data))
    assert data2.base == data.base
    assert data2.i is not None


def test_path_references(tmp_path):
    G = cyclic_groupoid(2)
    io.save_json(str(tmp_path / "g.json"), io.groupoid_to_json(G))
    d = io.bibundle_to_json(identity_bibundle(G))
    d["leftGroupoid"] = "g.json"
    d["rightGroupoid"] = "g.json"
    path = io.save_json(str(tmp_path / "m.json"), d)
    kind, M = io.load_typed(path)
    assert kind == "bibundle"
    assert M == identity_bibundle(G)


def test_loader_rejects_invalid():
    d = io.groupoid_to_json(cyclic_groupoid(2))
    d["inv"]["1"] = "0"
    with pytest.raises(StructuralError):
        io.groupoid_from_json(d)
    assert validate_groupoid(io.groupoid_from_json(d, validate=False)).ok is False


def test_detect_kind():
    assert io.detect_kind(io.groupoid_to_json(cyclic_groupoid(2))) == "groupoid"
    assert io.detect_kind(io.category_to_json(poset_category(2))) == "category"
    assert io.detect_kind(io.bibundle_to_json(identity_bibundle(cyclic_groupoid(2)))) == "bibundle"
    assert io.detect_kind(io.sset_to_json(nerve(poset_category(2), 2))) == "sset"
    assert io.detect_kind(io.group_spec_to_json(kronecker_finite(2, 1))) == "group-spec"
    with pytest.raises(StructuralError):
        io.detect_kind({"what": "ever"})


# ---------------------------------------------------------------------------
# CLI


@pytest.fixture
def idg(tmp_path):
    G = cyclic_groupoid(2)
    gpath = str(tmp_path / "g.json")
    io.save_json(gpath, io.groupoid_to_json(G))
    mpath = str(tmp_path / "idg.json")
    io.save_json(mpath, io.bibundle_to_json(identity_bibundle(G)))
    return gpath, mpath


def test_cli_principal_ok(idg):
    _, mpath = idg
    assert main(["principal", "--bibundle", mpath, "--side", "right"]) == 0
    assert main(["principal", "--bibundle", mpath, "--side", "left"]) == 0


def test_cli_morita_failure_writes_witness(tmp_path):
    dpath = str(tmp_path / "delta.json")
    io.save_json(dpath, io.bibundle_to_json(diagonal_bibundle(cyclic_groupoid(2))))
    assert main(["morita", "--bibundle", dpath, "--out", str(tmp_path)]) == 1
    witness = json.load(open(tmp_path / "morita_witness.json"))
    assert witness["ok"] is False


def test_cli_compose_and_validate(idg, tmp_path):
    _, mpath = idg
    assert main(["compose", "--left", mpath, "--right", mpath, "--out", str(tmp_path)]) == 0
    out = str(tmp_path / "composed.json")
    assert main(["validate", out]) == 0
    assert json.load(open(out))["provenance"].startswith("compose(")


def test_cli_validate_catches_broken_file(tmp_path):
    d = io.groupoid_to_json(cyclic_groupoid(2))
    d["inv"]["1"] = "0"
    bad = str(tmp_path / "bad.json")
    io.save_json(bad, d)
    assert main(["validate", bad, "--out", str(tmp_path)]) == 1
    assert (tmp_path / "validate_witness.json").exists()


def test_cli_check_identity(idg, tmp_path):
    gpath, _ = idg
    assert main(["check", "--groupoid", gpath, "--lhs", "tau ; tau",
                 "--rhs", "id * id", "--out", str(tmp_path)]) == 0
    assert main(["check", "--groupoid", gpath, "--lhs", "delta ; ev",
                 "--rhs", "id", "--out", str(tmp_path)]) == 1


def test_cli_eval_diagram_with_binding(idg, tmp_path):
    gpath, mpath = idg
    assert main(["eval-diagram", "--groupoid", gpath, "--bind", f"M={mpath}",
                 "M ; M", "--out", str(tmp_path)]) == 0
    kind, got = io.load_typed(str(tmp_path / "diagram.json"))
    assert kind == "bibundle"
    assert json.load(open(tmp_path / "diagram.json"))["provenance"] == "M ; M"


def test_cli_kan_poset_witness(tmp_path):
    spath = str(tmp_path / "nerve_poset.json")
    io.save_json(spath, io.sset_to_json(nerve(poset_category(2), 3)))
    assert main(["kan", "--sset", spath, "--n", "2", "--i", "1", "--strict"]) == 0
    assert main(["kan", "--sset", spath, "--n", "2", "--i", "0", "--out", str(tmp_path)]) == 1
    witness = json.load(open(tmp_path / "kan_witness.json"))
    assert witness["unfilled_horn"] == {"1": "(0,0)", "2": "(1,0)"}


def test_cli_kan_accepts_groupoid_file(idg):
    gpath, _ = idg
    assert main(["kan", "--sset", gpath, "--n", "3", "--i", "0", "--strict"]) == 0


def test_cli_gen_fixture_families(tmp_path):
    for argv in (["gen-fixture", "--family", "pair", "--n", "3"],
                 ["gen-fixture", "--family", "action", "--n", "2"],
                 ["gen-fixture", "--family", "random-groupoid", "--seed", "5"],
                 ["gen-fixture", "--family", "random-right-principal-bibundle", "--seed", "7"]):
        assert main(argv + ["--out", str(tmp_path)]) == 0
    produced = sorted(os.listdir(tmp_path))
    assert "pair3.json" in produced
    for name in produced:
        assert main(["validate", str(tmp_path / name)]) == 0
    assert len(json.load(open(tmp_path / "pair3.json"))["arrows"]) == 9


def test_cli_gen_fixture_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert main(["gen-fixture", "--family", "random-groupoid", "--seed", "11",
                     "--out", str(out)]) == 0
    fa, fb = (sorted(os.listdir(p))[0] for p in (a, b))
    assert open(a / fa).read() == open(b / fb).read()


def test_cli_check_group_kronecker(tmp_path, capsys):
    assert main(["gen-fixture", "--family", "kronecker_finite", "--n", "2", "--q", "1",
                 "--out", str(tmp_path)]) == 0
    spec = str(tmp_path / "kronecker_2_1.json")
    capsys.readouterr()
    assert main(["check-group", "--spec", spec, "--json"]) == 0
    first = capsys.readouterr().out
    report = json.loads(first)
    assert report["verdicts"]["group"] is True
    assert spec in report["inputs"]
    assert main(["check-group", "--spec", spec, "--json"]) == 0
    assert capsys.readouterr().out == first


def test_cli_preinverse_and_coherence(tmp_path):
    assert main(["gen-fixture", "--family", "kronecker_finite", "--n", "2", "--q", "1",
                 "--out", str(tmp_path)]) == 0
    spec = str(tmp_path / "kronecker_2_1.json")
    assert main(["preinverse", "--spec", spec, "--out", str(tmp_path)]) == 0
    kind, s = io.load_typed(str(tmp_path / "preinverse.json"))
    assert kind == "bibundle"
    assert main(["coherence", "--spec", spec]) == 0


def test_cli_linking_verbs(idg, tmp_path):
    _, mpath = idg
    assert main(["linking", "--bibundle", mpath, "--category", "--out", str(tmp_path)]) == 0
    assert main(["linking", "--bibundle", mpath, "--groupoid", "--out", str(tmp_path)]) == 0
    kind, L = io.load_typed(str(tmp_path / "linking_groupoid.json"))
    assert kind == "groupoid"
    dpath = str(tmp_path / "delta.json")
    io.save_json(dpath, io.bibundle_to_json(diagonal_bibundle(cyclic_groupoid(2))))
    assert main(["linking", "--bibundle", dpath, "--groupoid", "--out", str(tmp_path)]) == 1


def test_cli_pairing_and_bundlize(idg, tmp_path):
    _, mpath = idg
    assert main(["pairing", "--bibundle", mpath, "--out", str(tmp_path)]) == 0
    G = cyclic_groupoid(2)
    phi = GroupoidHom(G, G, {"*": "*"}, {"0": "0", "1": "1"})
    hpath = str(tmp_path / "phi.json")
    io.save_json(hpath, io.hom_to_json(phi))
    assert main(["bundlize", "--hom", hpath, "--out", str(tmp_path)]) == 0
    assert main(["validate", str(tmp_path / "bundlized.json")]) == 0


def test_cli_usage_errors(tmp_path):
    garbage = str(tmp_path / "garbage.json")
    with open(garbage, "w") as fh:
        fh.write("nope")
    assert main(["principal", "--bibundle", garbage]) == 2
    assert main(["principal", "--bibundle", str(tmp_path / "missing.json")]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    gpath = str(tmp_path / "g.json")
    io.save_json(gpath, io.groupoid_to_json(cyclic_groupoid(2)))
    assert main(["compose", "--left", gpath, "--right", gpath]) == 2
