import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bibucalc import bundlize, connected_components, find_iso, validate_bibundle
from bibucalc.diagram import (
    DiagramEnv,
    DiagramError,
    Gen,
    Seq,
    Tensor,
    check_identity,
    evaluate,
    evaluate_wired,
    parse,
    tensor_wired,
    to_text,
    typecheck,
)
from bibucalc.generators import random_groupoid, random_hom, standard_groupoid


def test_parse_shapes_and_precedence():
    ast = parse("delta ; (id * eps)")
    assert isinstance(ast, Seq) and len(ast.parts) == 2
    assert isinstance(ast.parts[1], Tensor)
    # '*' binds tighter than ';'
    assert parse("a ; b * c") == Seq((Gen("a"), Tensor((Gen("b"), Gen("c")))))
    assert parse("(a ; b) * c") == Tensor((Seq((Gen("a"), Gen("b"))), Gen("c")))
    assert parse("mu'") == Gen("mu'")


def test_parse_round_trip():
    for text in [
        "delta ; (delta * id)",
        "(cv * id) ; (id * ev)",
        "a ; b * c ; d",
        "x * (y ; z) * w",
        "cv ; (eps * delta)",
    ]:
        ast = parse(text)
        assert parse(to_text(ast)) == ast


def test_parse_errors_carry_spans():
    with pytest.raises(DiagramError) as e:
        parse("(a ; b")
    assert e.value.span == (6, 6)
    with pytest.raises(DiagramError) as e:
        parse("a & b")
    assert e.value.span == (2, 3)
    with pytest.raises(DiagramError) as e:
        parse("a b")
    assert e.value.span == (2, 3)
    with pytest.raises(DiagramError):
        parse("a ; ; b")
    with pytest.raises(DiagramError):
        parse("")


def test_typecheck_arities():
    env = DiagramEnv(standard_groupoid("cyclic", 3))
    assert typecheck(env, "delta ; (id * delta)") == (1, 3)
    assert typecheck(env, "cv ; (eps * eps)") == (0, 0)
    assert typecheck(env, "ev") == (2, 0)
    with pytest.raises(DiagramError):
        typecheck(env, "ev ; ev")
    with pytest.raises(DiagramError):
        typecheck(env, "nope")


BASES = [
    standard_groupoid("cyclic", 3),
    standard_groupoid("pair", 2),
    standard_groupoid("action", 2),
]


@pytest.mark.parametrize("G", BASES)
def test_comultiplication_is_coassociative(G):
    env = DiagramEnv(G)
    assert check_identity(env, "delta ; (delta * id)", "delta ; (id * delta)").ok


@pytest.mark.parametrize("G", BASES)
def test_counit_laws(G):
    env = DiagramEnv(G)
    assert check_identity(env, "delta ; (eps * id)", "id").ok
    assert check_identity(env, "delta ; (id * eps)", "id").ok


@pytest.mark.parametrize("G", BASES)
def test_zig_zags_straighten(G):
    env = DiagramEnv(G)
    assert check_identity(env, "(cv * id) ; (id * ev)", "id").ok
    assert check_identity(env, "(id * cv) ; (ev * id)", "id").ok


@pytest.mark.parametrize("G", BASES)
def test_swap_is_an_involution_and_commutes(G):
    env = DiagramEnv(G)
    assert check_identity(env, "tau ; tau", "id * id").ok
    assert check_identity(env, "delta ; tau", "delta").ok
    assert check_identity(env, "tau ; ev", "ev").ok
    assert check_identity(env, "cv ; tau", "cv").ok


@pytest.mark.parametrize("G", BASES)
def test_pairing_absorbs_the_diagonal(G):
    env = DiagramEnv(G)
    assert check_identity(env, "cv ; (delta * eps)", "cv").ok
    assert check_identity(env, "cv ; (eps * delta)", "cv").ok


@pytest.mark.parametrize("G", BASES)
def test_closed_loop_counts_components(G):
    env = DiagramEnv(G)
    loop = evaluate(env, "cv ; (eps * eps)")
    assert validate_bibundle(loop).ok
    assert len(loop.carrier) == len(connected_components(G))


@pytest.mark.parametrize("G", BASES)
def test_diagonal_then_ev_is_the_isotropy_bundle(G):
    env = DiagramEnv(G)
    iso = evaluate(env, "delta ; ev")
    assert validate_bibundle(iso).ok
    loops = [g for g in G.arrows if G.l[g] == G.r[g]]
    assert len(iso.carrier) == len(loops)
    counts: dict[str, int] = {}
    for p in iso.carrier:
        counts[iso.lmap[p]] = counts.get(iso.lmap[p], 0) + 1
    expected: dict[str, int] = {}
    for g in loops:
        expected[G.l[g]] = expected.get(G.l[g], 0) + 1
    assert counts == expected


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**9))
def test_swap_is_natural_for_bound_bundles(seed):
    rng = random.Random(seed)
    G = random_groupoid(rng, max_objects=2, max_isotropy=3, n_comps=1)
    M = bundlize(random_hom(rng, G, G))
    N = bundlize(random_hom(rng, G, G))
    env = DiagramEnv(G, bindings={"M": M, "N": N})
    assert check_identity(env, "(M * N) ; tau", "tau ; (N * M)").ok


def test_bound_names_get_arities_from_their_groupoids():
    from bibucalc import diagonal_bibundle
    G = standard_groupoid("cyclic", 2)
    env = DiagramEnv(G, bindings={"q": diagonal_bibundle(G)})
    assert typecheck(env, "q") == (1, 2)
    assert check_identity(env, "q ; (eps * id)", "id").ok


def test_tensor_wired_flattens_to_one_power():
    G = standard_groupoid("cyclic", 2)
    env = DiagramEnv(G)
    w = evaluate_wired(env, "id * id * id")
    assert w.bib.left_groupoid is env.power(3)
    assert w.bib.right_groupoid is env.power(3)
    assert len(w.bib.carrier) == len(G.arrows) ** 3


def test_identity_check_reports_arity_mismatch():
    env = DiagramEnv(standard_groupoid("cyclic", 2))
    rep = check_identity(env, "delta", "id")
    assert not rep.ok
    assert "arities differ" in rep.reason


def test_failing_identity_is_reported_not_raised():
    env = DiagramEnv(standard_groupoid("cyclic", 3))
    rep = check_identity(env, "delta ; ev", "eps")
    assert not rep.ok
