import json
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fjshintani.algebra import SymbolicField
from fjshintani.dualgroup import select_satake_filling
from fjshintani.lfactors import (
    HALF,
    ONE,
    CharacterTuple,
    FactorError,
    HalfInteger,
    apply_reflection,
    b_factor,
    c_factor,
    d_factor,
    delta_const,
    gamma_factors,
    gamma_pairing_value,
    local_L,
)
from fjshintani.rootdata import Root, build_case, longest_element, simple_reflections, weyl_elements
from fjshintani.verify import GAMMA_GRID, SuiteConfig, evaluate_numeric, gamma_cases, gamma_variant_outcome

GOLDEN = json.loads((Path(__file__).parent / "golden" / "conventions.json").read_text())


def test_half_integer():
    assert HalfInteger.of("1/2") == HALF
    assert str(HalfInteger.of(1)) == "1" and ONE.twice == 2
    with pytest.raises(FactorError):
        HalfInteger.of(0.3)


def test_local_factor_examples(make_setup):
    case, F, _ = make_setup("split", 1, 1)
    v = F.var("v")
    zeta = local_L(case, "zeta_F", ONE, field=F)
    assert str(evaluate_numeric(zeta, {}, 3)) == "3/2"
    assert local_L(case, "L_F", ONE, -F.one, F) == (1 + v**-2) ** -1
    assert local_L(case, "L_E", HALF, F.zero, F) == 1
    with pytest.raises(FactorError):
        local_L(case, "L_F", ONE, None, F)


def test_delta_constant_examples(make_setup):
    case, F, _ = make_setup("split", 2, 2)
    assert delta_const(case, "G_k", F, 1) == local_L(case, "zeta_E", ONE, field=F)
    z1 = local_L(case, "zeta_F", ONE, field=F)
    z2 = local_L(case, "zeta_F", HalfInteger(4), field=F)
    assert delta_const(case, "U_W", F) == z1 * z2


@pytest.mark.parametrize("args", [("inert", 2, 2), ("inert", 4, 4), ("inert", 3, 1), ("inert", 5, 3), ("split", 3, 3)])
def test_torus_constants_two_forms_agree(make_setup, args):
    case, F, _ = make_setup(*args)
    assert delta_const(case, "T_W", F) == delta_const(case, "T_W_gross", F)


def test_b_factor_examples(make_setup):
    case, F, ch = make_setup("split", 1, 1)
    assert b_factor(case, ch) == 1
    case, F, ch = make_setup("split", 3, 1)
    v = F.var("v")
    x1, x3, y1 = F.var("x1"), F.var("x3"), F.var("y1")
    assert b_factor(case, ch) == (1 - x1 * y1 * v**-1) * (1 - x3**-1 * y1**-1 * v**-1)
    case, F, ch = make_setup("inert", 2, 2)
    assert b_factor(case, ch) == 1 - F.var("x1") * F.var("y1") * F.var("v") ** -2


def test_cross_variant_is_split_only(make_setup):
    case, _, ch = make_setup("inert", 2, 2)
    with pytest.raises(FactorError):
        b_factor(case, ch, "cross")


def test_d_factor_examples(make_setup):
    case, F, ch = make_setup("split", 2, 2)
    x1, x2 = F.var("x1"), F.var("x2")
    assert d_factor(case, ch, "V") == 1 / (1 - x1 / x2)
    case, F, ch = make_setup("inert", 2, 2)
    assert d_factor(case, ch, "V") == 1 / (1 - F.var("x1"))
    case, F, ch = make_setup("split", 1, 1)
    assert d_factor(case, ch, "V") == 1


def test_c_factor_examples(make_setup):
    case, F, ch = make_setup("split", 2, 2)
    x1, x2, v = F.var("x1"), F.var("x2"), F.var("v")
    root = Root((1, -1))
    expected = (1 - v**-2 * x1 / x2) / (1 - x1 / x2)
    assert c_factor(case, ch.chi, "V", root, F) == expected
    ident = next(w for w in weyl_elements(case, "V") if w.is_identity())
    assert c_factor(case, ch.chi, "V", ident, F) == 1
    assert c_factor(case, ch.chi, "V", "w0", F) == expected


def test_gamma_factor_examples(make_setup):
    case, F, ch = make_setup("split", 1, 1)
    x1, y1 = F.var("x1"), F.var("y1")
    assert gamma_factors(case, ch, "Gamma2") == local_L(case, "L_F", HALF, x1 * y1, F)
    assert gamma_factors(case, ch, "Gamma1_V") == 1
    case, F, ch = make_setup("split", 3, 1)
    expected = local_L(case, "zeta_F", ONE, field=F) ** -1 * local_L(case, "L_F", HALF, F.var("y1") * F.var("x2"), F)
    assert gamma_factors(case, ch, "Pi") == expected


def test_gamma_pairing_examples(make_setup):
    case, F, ch = make_setup("split", 3, 1)
    v = F.var("v")
    x1, x2, x3, y1 = (F.var(n) for n in ("x1", "x2", "x3", "y1"))
    qF = v**2
    assert gamma_pairing_value(case, ch, ("alpha", 1)) == qF * (1 - v**-2 * x1 / x2)
    # middle range i = 2 = r': the corrected index r'+1-i = 1 in both factors
    mid = gamma_pairing_value(case, ch, ("alpha", 2))
    LF = lambda s, x: local_L(case, "L_F", s, x, F)  # noqa: E731
    assert mid == (qF - 1) * LF(HALF, x2 * y1) * LF(HALF, x3**-1 * y1**-1) / LF(ONE, x2 / x3)
    with pytest.raises(FactorError):
        gamma_pairing_value(case, ch, ("alpha", 2), alpha_indices="printed")
    case, F, ch = make_setup("inert", 4, 2)
    v = F.var("v")
    assert gamma_pairing_value(case, ch, ("alpha", 2)) == v**2 * (1 - v**-2 * F.var("x2"))


@pytest.mark.parametrize("args", GAMMA_GRID)
def test_gamma_functional_equation(make_setup, args):
    case, F, ch = make_setup(*args)
    for kind, group in (("alpha", "V"), ("beta", "W")):
        for i in range(1, len(simple_reflections(case, group)) + 1):
            refl = (kind, i)
            s = apply_reflection(case, ch, refl)
            lhs = gamma_pairing_value(case, s, refl) / gamma_pairing_value(case, ch, refl)
            assert lhs == gamma_factors(case, s) / gamma_factors(case, ch), (args, refl)


def test_gamma_readings_match_golden():
    outcomes = {"alpha": set(), "beta": set()}
    for case in gamma_cases(SuiteConfig()):
        n_alpha = len(simple_reflections(case, "V"))
        for i in range(1, n_alpha + 1):
            if case.is_split and case.r < i <= case.rprime:
                outcomes["alpha"].add(gamma_variant_outcome(case, ("alpha", i), "alpha"))
        if case.is_inert and case.m_minus:
            outcomes["beta"].add(gamma_variant_outcome(case, ("beta", case.m_minus), "beta"))
    assert sorted(outcomes["alpha"]) == GOLDEN["gamma_alpha_split_middle_range"]["printed_outcomes"]
    assert sorted(outcomes["beta"]) == GOLDEN["gamma_beta_inert_last"]["printed_outcomes"]


@pytest.mark.parametrize("args", [("inert", 2, 2), ("inert", 4, 2), ("inert", 3, 1), ("inert", 3, 3)])
def test_satake_filling_matches_golden(args):
    assert select_satake_filling(build_case(*args)) == GOLDEN["inert_satake_filling"]


@given(st.sampled_from(GAMMA_GRID), st.data())
def test_reflections_are_involutions(args, data):
    case = build_case(*args)
    F = SymbolicField.standard(case.n_minus, case.m_minus)
    ch = CharacterTuple.generic(case, F)
    group = data.draw(st.sampled_from(["V", "W"]))
    count = len(simple_reflections(case, group))
    if count == 0:
        return
    i = data.draw(st.integers(1, count))
    refl = ("alpha" if group == "V" else "beta", i)
    twice = apply_reflection(case, apply_reflection(case, ch, refl), refl)
    assert twice.chi == ch.chi and twice.eta == ch.eta


def test_character_tuple_twists(make_setup):
    case, F, ch = make_setup("split", 2, 2)
    u = F.var("u")
    assert ch.twist("mu").eta == tuple(u * e for e in ch.eta)
    assert ch.twist("mu").twist("mu_bar").eta == ch.eta
    w0 = longest_element(case, "V")
    assert ch.act(w0).chi == tuple(reversed(ch.chi))
    case, F, ch = make_setup("inert", 2, 2)
    assert ch.mu_unit == -1 and ch.mu_bar == -1
