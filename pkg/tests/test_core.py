import pytest
from hypothesis import given, strategies as st

from bibucalc import (
    StructuralError,
    action_groupoid,
    check_hom,
    connected_components,
    cyclic_groupoid,
    diagonal_hom,
    finset,
    identity_hom,
    one_object_groupoid,
    opposite_groupoid,
    pair_groupoid,
    power_groupoid,
    product_groupoid,
    swap_hom,
    trivial_groupoid,
    validate_groupoid,
)
from bibucalc.labels import tup, untup


@given(st.lists(st.text(max_size=6), max_size=5))
def test_tup_untup_roundtrip(parts):
    assert untup(tup(*parts)) == tuple(parts)


def test_tup_nests_without_collisions():
    inner = tup("a", "b")
    assert untup(tup(inner, "c")) == (inner, "c")
    assert tup() != tup("")
    assert untup(tup("")) == ("",)
    with pytest.raises(ValueError):
        untup("plain")


def test_finset_rejects_duplicates():
    with pytest.raises(StructuralError):
        finset(["a", "a"])


@pytest.mark.parametrize(
    "G",
    [
        trivial_groupoid(3),
        pair_groupoid(3),
        cyclic_groupoid(4),
        product_groupoid([pair_groupoid(2), cyclic_groupoid(3)]),
        opposite_groupoid(pair_groupoid(3)),
    ],
)
def test_standard_groupoids_validate(G):
    assert validate_groupoid(G).ok


def test_pair_groupoid_composition_orientation():
    G = pair_groupoid(3)
    # an arrow (i,j) runs from j to i
    assert G.l[tup("0", "1")] == "0"
    assert G.r[tup("0", "1")] == "1"
    assert G.mul(tup("0", "1"), tup("1", "2")) == tup("0", "2")
    with pytest.raises(StructuralError):
        G.mul(tup("0", "1"), tup("2", "1"))


def test_validation_flags_broken_tables():
    G = cyclic_groupoid(3)
    bad_comp = dict(G.comp)
    bad_comp[("1", "1")] = "0"  # should be 2
    broken = type(G)(G.objects, G.arrows, G.l, G.r, bad_comp, G.inv, G.unit)
    report = validate_groupoid(broken)
    assert not report.ok
    assert any(v.kind == "axiom" for v in report.entries)

    missing = type(G)(G.objects, G.arrows, {}, G.r, G.comp, G.inv, G.unit)
    report2 = validate_groupoid(missing)
    assert report2.entries and report2.entries[0].kind == "structural"


def test_action_groupoid_of_z2_swap():
    Z2 = cyclic_groupoid(2)
    A = action_groupoid(Z2, ["a", "b"], lambda k, z: z if k == "0" else ("b" if z == "a" else "a"))
    assert validate_groupoid(A).ok
    assert len(A.arrows) == 4
    assert A.l[tup("1", "a")] == "b"
    assert A.r[tup("1", "a")] == "a"


def test_action_groupoid_rejects_non_action():
    Z2 = cyclic_groupoid(2)
    with pytest.raises(StructuralError):
        # not an action: the non-unit element acts by a non-involution
        action_groupoid(Z2, ["a", "b", "c"], {("0", "a"): "a", ("0", "b"): "b", ("0", "c"): "c",
                                              ("1", "a"): "b", ("1", "b"): "c", ("1", "c"): "a"})


def test_power_groupoid_degenerate_cases():
    G = cyclic_groupoid(3)
    assert power_groupoid(G, 0) == trivial_groupoid(["()"])
    assert power_groupoid(G, 1) == G
    P = power_groupoid(G, 2)
    assert len(P.arrows) == 9
    assert validate_groupoid(P).ok


def test_opposite_is_involutive():
    G = product_groupoid([pair_groupoid(2), cyclic_groupoid(2)])
    assert opposite_groupoid(opposite_groupoid(G)) == G


def test_one_object_groupoid_from_table():
    s3 = ["e", "r", "rr", "f", "fr", "frr"]
    # dihedral-free sanity: use Z/6 written multiplicatively instead
    mul = {}
    for i in range(6):
        for j in range(6):
            mul[(s3[i], s3[j])] = s3[(i + j) % 6]
    G = one_object_groupoid(s3, mul)
    assert validate_groupoid(G).ok
    assert G.unit["*"] == "e"


def test_homs_and_diagonal():
    G = cyclic_groupoid(4)
    assert check_hom(identity_hom(G)).ok
    d = diagonal_hom(G)
    assert check_hom(d).ok
    sw = swap_hom(G, pair_groupoid(2))
    assert check_hom(sw).ok


def test_connected_components():
    G = product_groupoid([trivial_groupoid(2), cyclic_groupoid(2)])
    comps = connected_components(G)
    assert len(comps) == 2
    P = pair_groupoid(4)
    assert len(connected_components(P)) == 1


@given(st.integers(1, 4), st.integers(1, 4))
def test_product_groupoid_counts(n, m):
    P = product_groupoid([pair_groupoid(n), cyclic_groupoid(m)])
    assert len(P.arrows) == n * n * m
    assert len(P.objects) == n
