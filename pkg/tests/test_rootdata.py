import itertools
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fjshintani.algebra import SymbolicField
from fjshintani.rootdata import (
    Cocharacter,
    Kind,
    Root,
    RootDataError,
    build_case,
    check_negative_cone,
    coroot_pairing,
    delta_character,
    delta_exponent,
    dominance_leq,
    embed_lambda_r,
    enumerate_Lambda_r_plusplus,
    is_antidominant_W,
    is_dominant_V,
    is_in_Lambda_r_plusplus,
    longest_element,
    positive_roots,
    project_lambda_X,
    simple_reflections,
    simple_roots,
    weyl_act,
    weyl_elements,
)

CASES = [
    ("split", 1, 1), ("split", 2, 2), ("split", 3, 1), ("split", 4, 2),
    ("inert", 2, 2), ("inert", 4, 2), ("inert", 3, 1), ("inert", 3, 3), ("inert", 5, 3),
]


def test_build_case_split():
    c = build_case("split", 3, 1)
    assert (c.r, c.rprime, c.n_minus, c.m_minus) == (1, 2, 3, 1)


def test_build_case_inert_even():
    c = build_case("inert", 4, 2)
    assert (c.r, c.n_minus, c.n_plus, c.m_minus, c.m_plus) == (1, 2, 2, 1, 1)
    assert c.kind is Kind.INERT_EVEN


def test_build_case_inert_odd():
    c = build_case("inert", 3, 1)
    assert (c.r, c.n_minus, c.n_plus, c.m_minus, c.m_plus) == (1, 1, 2, 0, 1)
    assert c.kind is Kind.INERT_ODD


@pytest.mark.parametrize("args", [("split", 3, 2), ("inert", 1, 3), ("ramified", 2, 2), ("split", -1, -1)])
def test_build_case_rejects(args):
    with pytest.raises(RootDataError):
        build_case(*args)


@pytest.mark.parametrize(
    "kind,n,m,group,size",
    [("split", 3, 1, "V", 6), ("inert", 4, 2, "V", 8), ("inert", 3, 1, "V", 2), ("split", 1, 1, "W", 1)],
)
def test_weyl_group_orders(kind, n, m, group, size):
    assert len(weyl_elements(build_case(kind, n, m), group)) == size


@pytest.mark.parametrize("args", CASES)
def test_weyl_group_order_formula(args):
    c = build_case(*args)
    k = c.n_minus
    expected = math.factorial(k) * (2**k if c.is_inert else 1)
    assert len(weyl_elements(c, "V")) == expected


def test_weyl_act_examples():
    F = SymbolicField.standard(2, 0)
    a, b = F.var("x1"), F.var("x2")
    c = build_case("split", 2, 2)
    swap = simple_reflections(c, "V")[0]
    assert weyl_act(swap, (a, b)) == (b, a)
    ci = build_case("inert", 2, 2)
    flip = simple_reflections(ci, "V")[-1]
    assert weyl_act(flip, (a,)) == (a**-1,)
    ident = next(w for w in weyl_elements(c, "V") if w.is_identity())
    assert weyl_act(ident, (a, b)) == (a, b)


@pytest.mark.parametrize("args", CASES)
def test_weyl_group_closed_under_composition(args):
    c = build_case(*args)
    elems = weyl_elements(c, "V")
    keys = {(w.perm, w.signs) for w in elems}
    for w1, w2 in itertools.product(elems[:6], elems[:6]):
        prod = w1 * w2
        assert (prod.perm, prod.signs) in keys
        assert (w1 * w1.inverse()).is_identity()


@pytest.mark.parametrize("args", CASES)
def test_longest_element_sends_positive_roots_negative(args):
    c = build_case(*args)
    w0 = longest_element(c, "V")
    for root in positive_roots(c, "V"):
        assert not root.act(w0).is_positive()


@pytest.mark.parametrize("args", CASES)
def test_action_composes(args):
    c = build_case(*args)
    F = SymbolicField.standard(c.n_minus, 0)
    chars = tuple(F.var(f"x{i + 1}") for i in range(c.n_minus))
    elems = weyl_elements(c, "V")
    for w1, w2 in itertools.product(elems[:4], elems[:4]):
        assert weyl_act(w1 * w2, chars) == weyl_act(w1, weyl_act(w2, chars))


def test_coroot_pairing_examples():
    F = SymbolicField.standard(2, 0)
    x1, x2 = F.var("x1"), F.var("x2")
    split = build_case("split", 2, 2)
    assert coroot_pairing(split, (x1, x2), Root((1, -1))) == x1 * x2**-1
    even = build_case("inert", 4, 2)
    assert coroot_pairing(even, (x1, x2), Root((2, 0))) == x1
    odd = build_case("inert", 5, 3)
    assert coroot_pairing(odd, (x1, x2), Root((1, 0))) == x1**2
    assert coroot_pairing(odd, (x1, x2), Root((1, 0)), short_root_coroot="plain") == x1


def test_coroot_pairing_rejects_foreign_root():
    F = SymbolicField.standard(2, 0)
    with pytest.raises(RootDataError):
        coroot_pairing(build_case("split", 2, 2), (F.var("x1"), F.var("x2")), Root((2, 0)))


@pytest.mark.parametrize("args", CASES)
def test_simple_roots_are_positive_and_count(args):
    c = build_case(*args)
    simple = simple_roots(c, "V")
    assert len(simple) == (c.n_minus if c.is_inert else max(c.n_minus - 1, 0))
    assert all(r in positive_roots(c, "V") for r in simple)


def test_delta_examples():
    F = SymbolicField.standard(2, 1)
    v = F.var("v")
    assert delta_character(build_case("split", 1, 1), "B_J", (1,), F) == v**-2
    assert delta_character(build_case("split", 2, 2), "B_V", (1, 0), F) == v**-2
    c = build_case("split", 3, 1)
    for which in ("B_V", "B_r", "P_X", "P"):
        assert delta_character(c, which, (0, 0, 0), F) == 1
    assert delta_character(c, "B_plus", Cocharacter.zero(c), F) == 1


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_delta_is_a_character(a, b):
    c = build_case("split", 3, 1)
    s = tuple(x + y for x, y in zip(a, b))
    assert delta_exponent(c, "B_V", s) == delta_exponent(c, "B_V", a) + delta_exponent(c, "B_V", b)


def test_dominance_examples():
    c = build_case("split", 2, 2)
    assert dominance_leq(c, (1, 1), (2, 0))
    assert not dominance_leq(c, (2, 0), (1, 1))
    assert dominance_leq(c, (3, -1), (3, -1))


@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.lists(st.integers(-3, 3), min_size=2, max_size=2))
def test_dominance_is_antisymmetric(a, b):
    c = build_case("inert", 4, 2)
    if dominance_leq(c, a, b) and dominance_leq(c, b, a):
        assert list(a) == list(b)


def test_project_lambda_X_examples():
    c = build_case("split", 3, 1)
    assert project_lambda_X(c, Cocharacter.of((2, 1, 0), (1,))) == (2, 0, 0)
    assert project_lambda_X(c, Cocharacter.of((2, 1, 0), (0,))) == (2, 1, 0)


def test_project_lambda_X_rejects_point_outside_cone():
    # (0, -1) is not antidominant for GL_2, so the input is refused.
    c = build_case("split", 2, 2)
    with pytest.raises(RootDataError):
        project_lambda_X(c, Cocharacter.of((1, 0), (0, -1)))


@pytest.mark.parametrize(
    "kind,n,m,lv,lw,ok",
    [
        ("split", 2, 2, (1, 0), (0, 1), True),
        ("split", 2, 2, (0, 1), (0, 0), False),
        ("inert", 4, 2, (2, 1), (-1,), True),
        ("inert", 4, 2, (1, -1), (0,), False),
        ("inert", 4, 2, (1, 0), (1,), False),
    ],
)
def test_negative_cone_membership(kind, n, m, lv, lw, ok):
    c = build_case(kind, n, m)
    assert (is_dominant_V(c, lv) and is_antidominant_W(c, lw)) == ok
    if not ok:
        with pytest.raises(RootDataError):
            check_negative_cone(c, Cocharacter.of(lv, lw))


@pytest.mark.parametrize("args", [("split", 3, 1), ("inert", 3, 1), ("split", 4, 2), ("inert", 5, 1)])
def test_lambda_r_enumeration(args):
    c = build_case(*args)
    found = enumerate_Lambda_r_plusplus(c, 3)
    assert found[0] == (0,) * len(found[0])
    assert len(set(found)) == len(found)
    for lam in found:
        assert is_in_Lambda_r_plusplus(c, lam)
        assert is_dominant_V(c, embed_lambda_r(c, lam))
