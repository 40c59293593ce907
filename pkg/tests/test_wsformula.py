import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fjshintani.algebra import SymbolicField
from fjshintani.dualgroup import SatakeParam, generic_S_r, satake_from_characters
from fjshintani.lfactors import ONE, CharacterTuple, local_L
from fjshintani.rootdata import (
    Cocharacter,
    RootDataError,
    build_case,
    embed_lambda_r,
    enumerate_Lambda_r_plusplus,
    weyl_elements,
)
from fjshintani.verify import is_regular, sample_lambda, weyl_substitution
from fjshintani.wsformula import (
    FormulaError,
    WSQuery,
    final_l_identity_parts,
    final_l_identity_sides,
    ii_constant,
    l_unfold_sides,
    lemma_unfolding_sides,
    ws_cross,
    ws_cross_summands,
    ws_normalized,
    ws_unfolded_r,
)

SMALL = [("split", 1, 1), ("split", 2, 2), ("split", 3, 1), ("inert", 2, 2), ("inert", 3, 1), ("inert", 3, 3), ("inert", 4, 2)]


@pytest.mark.parametrize("args", SMALL)
@pytest.mark.parametrize("route", ["b", "det"])
def test_value_at_origin_is_one(make_setup, args, route):
    case, F, ch = make_setup(*args)
    assert ws_normalized(WSQuery(case, ch, Cocharacter.zero(case)), route) == 1


@given(st.integers(-4, 4), st.integers(-4, 4))
def test_rank_one_split_is_a_monomial(a, b):
    case = build_case("split", 1, 1)
    F = SymbolicField.standard(1, 1)
    ch = CharacterTuple.generic(case, F)
    value = ws_normalized(WSQuery(case, ch, Cocharacter.of((a,), (b,))))
    assert value == F.var("x1") ** a * F.var("y1") ** b


def test_rejects_points_outside_the_cone(make_setup):
    case, F, ch = make_setup("split", 2, 2)
    with pytest.raises(RootDataError):
        WSQuery(case, ch, Cocharacter.of((0, 1), (0, 0)))


@given(st.sampled_from([("split", 2, 2), ("split", 3, 1), ("inert", 2, 2), ("inert", 3, 3)]), st.integers(0, 10**6))
def test_weyl_invariance_and_regularity(args, seed):
    case = build_case(*args)
    F = SymbolicField.standard(case.n_minus, case.m_minus)
    ch = CharacterTuple.generic(case, F)
    lam = sample_lambda(case, random.Random(seed))
    f = ws_normalized(WSQuery(case, ch, lam))
    assert is_regular(f)
    for wV in weyl_elements(case, "V"):
        for wW in weyl_elements(case, "W"):
            sub = {**weyl_substitution(wV, "x"), **weyl_substitution(wW, "y")}
            assert f.substitute_monomial(sub) == f


def test_invariance_by_reevaluation(make_setup):
    case, F, ch = make_setup("split", 2, 2)
    lam = Cocharacter.of((2, 0), (-1, 1))
    f = ws_normalized(WSQuery(case, ch, lam))
    for wV in weyl_elements(case, "V"):
        for wW in weyl_elements(case, "W"):
            assert ws_normalized(WSQuery(case, ch.act(wV, wW), lam)) == f


@pytest.mark.parametrize(
    "args,lv,lw",
    [(("split", 2, 2), (1, 0), (0, 1)), (("split", 3, 1), (2, 1, 0), (1,)), (("inert", 4, 2), (2, 1), (-1,)), (("inert", 3, 3), (1,), (-2,))],
)
def test_routes_agree(make_setup, args, lv, lw):
    case, F, ch = make_setup(*args)
    q = WSQuery(case, ch, Cocharacter.of(lv, lw))
    assert ws_normalized(q, "b") == ws_normalized(q, "det")


def test_regular_values_have_only_v_in_denominator(make_setup):
    case, F, ch = make_setup("inert", 2, 2)
    f = ws_normalized(WSQuery(case, ch, Cocharacter.of((1,), (-1,))))
    assert is_regular(f)
    assert f.denominator.terms.keys() <= {(2, 0, 0, 0, 0), (0, 0, 0, 0, 0)}


# --- cross formula ------------------------------------------------------------------------


def test_cross_rank_one_example(make_setup):
    case, F, ch = make_setup("split", 1, 1)
    v, u, x1, y1 = F.var("v"), F.var("u"), F.var("x1"), F.var("y1")
    value = ws_cross(WSQuery(case, ch, Cocharacter.zero(case)))
    assert value == local_L(case, "zeta_F", ONE, field=F) * (1 - v**-1 * x1 * y1 / u)


@pytest.mark.parametrize("args", [("split", 1, 1), ("split", 2, 2), ("split", 3, 1)])
def test_cross_routes_agree(make_setup, args):
    case, F, ch = make_setup(*args)
    for seed in range(2):
        lam = sample_lambda(case, random.Random(seed))
        q = WSQuery(case, ch, lam)
        assert ws_cross(q, "det") == ws_cross(q, "b")
        # the two routes enumerate W_W in orders differing by w_0, so compare multisets
        det_terms = sorted(t.to_string() for t in ws_cross_summands(q, "det"))
        b_terms = sorted(t.to_string() for t in ws_cross_summands(q, "b"))
        assert det_terms == b_terms


def test_cross_regular_at_origin(make_setup):
    case, F, ch = make_setup("split", 2, 2)
    assert is_regular(ws_cross(WSQuery(case, ch, Cocharacter.zero(case))))


def test_cross_is_split_only(make_setup):
    case, F, ch = make_setup("inert", 2, 2)
    with pytest.raises(FormulaError):
        ws_cross(WSQuery(case, ch, Cocharacter.zero(case)))


# --- unfolding ----------------------------------------------------------------------------


@pytest.mark.parametrize("args", [("split", 3, 1), ("inert", 3, 1), ("inert", 4, 2)])
def test_unfolded_at_zero_is_one(make_setup, args):
    case, F, ch = make_setup(*args)
    zero = enumerate_Lambda_r_plusplus(case, 0)[0]
    assert ws_unfolded_r(case, ch, zero) == 1


@pytest.mark.parametrize("args,max_degree", [(("split", 3, 1), 2), (("inert", 3, 1), 2), (("inert", 4, 2), 2)])
def test_unfolded_matches_normalized(make_setup, args, max_degree):
    case, F, ch = make_setup(*args)
    for lam_r in enumerate_Lambda_r_plusplus(case, max_degree):
        lam = Cocharacter.of(embed_lambda_r(case, lam_r), (0,) * case.m_minus)
        assert ws_unfolded_r(case, ch, lam_r) == ws_normalized(WSQuery(case, ch, lam)), lam_r


def test_unfolded_needs_doubly_dominant(make_setup):
    case, F, ch = make_setup("inert", 3, 1)
    with pytest.raises(FormulaError):
        ws_unfolded_r(case, ch, (-1,))
    case, F, ch = make_setup("split", 2, 2)
    with pytest.raises(FormulaError):
        ws_unfolded_r(case, ch, ())


@pytest.mark.parametrize("args", [("split", 3, 1), ("inert", 3, 1), ("split", 4, 2), ("inert", 4, 2)])
def test_lemma_unfolding(make_setup, args):
    case, F, ch = make_setup(*args, nz=2 * (args[1] - args[2]) // 2)
    lhs, rhs = lemma_unfolding_sides(case, ch, generic_S_r(case, F))
    assert lhs == rhs


@pytest.mark.parametrize("args,order", [(("split", 3, 1), 4), (("inert", 3, 1), 4), (("inert", 4, 2), 3)])
def test_l_unfold_series(make_setup, args, order):
    case, F, ch = make_setup(*args, nz=2 * case_r(args))
    lhs, rhs = l_unfold_sides(case, ch, generic_S_r(case, F), order)
    assert lhs.coeffs[0] == 1 and rhs.coeffs[0] == 1
    assert lhs.coeffs == rhs.coeffs


def case_r(args):
    return (args[1] - args[2]) // 2


def test_l_unfold_order_limit(make_setup):
    case, F, ch = make_setup("split", 3, 1, 2)
    with pytest.raises(FormulaError):
        l_unfold_sides(case, ch, generic_S_r(case, F), 9)


# --- final identity and the Ichino-Ikeda constant ------------------------------------------


@pytest.mark.parametrize("args", [("split", 3, 1), ("inert", 3, 1), ("inert", 4, 2)])
def test_final_identity(make_setup, args):
    case, F, ch = make_setup(*args, nz=2 * case_r(args))
    S_V, S_W = satake_from_characters(case, ch)
    lhs, rhs = final_l_identity_sides(case, S_V, S_W, generic_S_r(case, F), ch.mu_unit)
    assert lhs == rhs


@pytest.mark.parametrize("z", [(2, 3), (-1, 5), (7, 1)])
def test_final_identity_at_specialized_parameter(make_setup, z):
    case, F, ch = make_setup("split", 3, 1)
    S_V, S_W = satake_from_characters(case, ch)
    S_r = SatakeParam(case, "G", tuple(F.const(a) for a in z))
    lhs, rhs, f = final_l_identity_parts(case, S_V, S_W, S_r, ch.mu_unit, F.var("v"))
    S_r_bar = SatakeParam(case, "G", tuple(F.const(a) ** -1 for a in z))
    _, _, f_at_bar = final_l_identity_parts(case, S_V, S_W, S_r_bar, ch.mu_unit, F.var("v"))
    conj = {n: (n, -1) for n in F.varset.names if n[0] in "xyu"}
    assert lhs == rhs * f * f_at_bar.substitute_monomial(conj)


def test_final_identity_sides_need_symbolic_input():
    from fjshintani.algebra import ModularField

    case = build_case("split", 3, 1)
    F = ModularField({n: i + 2 for i, n in enumerate(SymbolicField.standard(3, 1, 2).varset.names)})
    ch = CharacterTuple.generic(case, F)
    S_V, S_W = satake_from_characters(case, ch)
    with pytest.raises(FormulaError):
        final_l_identity_sides(case, S_V, S_W, generic_S_r(case, F), ch.mu_unit)


def test_ii_constant_rank_one(make_setup):
    case, F, ch = make_setup("split", 1, 1)
    v, u, x, y = F.var("v"), F.var("u"), F.var("x1"), F.var("y1")
    zeta = local_L(case, "zeta_F", ONE, field=F)
    expected = zeta * (1 - v**-2) ** 2 / ((1 - v**-1 * x * y / u) * (1 - v**-1 * u / (x * y)))
    assert ii_constant(case, ch) == expected


def test_ii_constant_numerator_factorizes(make_setup):
    case, F, ch = make_setup("split", 2, 2)
    v, u = F.var("v"), F.var("u")
    x = [F.var("x1"), F.var("x2")]
    y = [F.var("y1"), F.var("y2")]
    L_inv = F.one
    for a in x:
        for b in y:
            L_inv = L_inv * (1 - v**-1 * a * b / u) * (1 - v**-1 * u / (a * b))
    ad = F.one
    for t in (x, y):
        for a in t:
            for b in t:
                ad = ad * (1 - v**-2 * a / b)
    from fjshintani.lfactors import delta_const

    assert ii_constant(case, ch) == delta_const(case, "U_V", F) * ad / L_inv
