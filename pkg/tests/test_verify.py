import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fjshintani.algebra import ModularField, SymbolicField, VarSet
from fjshintani.rootdata import Cocharacter, RootDataError, build_case
from fjshintani.verify import (
    NORMALIZATION_GRID,
    SUITES,
    CheckResult,
    EvalRequest,
    SuiteConfig,
    SuiteError,
    SuiteReport,
    cauchy_series,
    check_identity,
    eval_ws,
    evaluate_numeric,
    fingerprint,
    is_regular,
    lambda_grid,
    request_from_dict,
    resolved,
    run_suite,
    sample_lambda,
    table_ws,
    weyl_cost,
)


def test_normalization_suite_all_pass():
    rep = run_suite("normalization", SuiteConfig(mode="symbolic"))
    assert rep.passed
    assert len(rep.cases) == len(NORMALIZATION_GRID) == 8
    assert {c.status for c in rep.checks} == {"pass"}


def test_weyl_symmetry_trivial_group():
    rep = run_suite("weyl_symmetry", SuiteConfig(cases=(("split", 1, 1),)))
    assert rep.passed and rep.cases == ["split (n=1, m=1)"]


def test_unknown_suite():
    with pytest.raises(SuiteError):
        run_suite("bogus")
    with pytest.raises(SuiteError):
        run_suite("normalization", SuiteConfig(mode="numeric"))


@pytest.mark.parametrize("suite", ["normalization", "gamma_ratio", "cross_split", "lemma_unfolding", "final_identity"])
def test_modular_reports_are_deterministic(suite):
    cfg = SuiteConfig(mode="modular", trials=4, seed=11, max_rank=2)
    a = run_suite(suite, cfg).to_json()
    b = run_suite(suite, cfg).to_json()
    assert a == b
    assert json.loads(a)["schema"] == 1 and json.loads(a)["passed"]


def test_seed_changes_modular_digests():
    a = run_suite("normalization", SuiteConfig(mode="modular", trials=3, seed=1, max_rank=1))
    b = run_suite("normalization", SuiteConfig(mode="modular", trials=3, seed=2, max_rank=1))
    assert [c.lhs for c in a.checks if c.name.startswith("weyl_sum_equals")] != [
        c.lhs for c in b.checks if c.name.startswith("weyl_sum_equals")
    ]


def test_timing_is_opt_in():
    rep = run_suite("cauchy", SuiteConfig(max_rank=1))
    assert "wall_time" not in rep.to_dict()
    assert "wall_time" in rep.to_dict(include_timing=True)


def test_max_rank_filters_cases():
    rep = run_suite("satake_reform", SuiteConfig(max_rank=1))
    assert all(build_case(*_parse(label)).n_minus <= 1 for label in rep.cases)


def _parse(label):
    kind = label.split()[0]
    n = int(label.split("n=")[1].split(",")[0])
    m = int(label.split("m=")[1].rstrip(")"))
    return "split" if kind == "split" else "inert", n, m


def test_auto_mode_resolution():
    small, big = build_case("split", 2, 2), build_case("split", 4, 4)
    assert weyl_cost(small) < weyl_cost(big)
    assert resolved(small, SuiteConfig(mode="auto")).mode == "symbolic"
    assert resolved(big, SuiteConfig(mode="auto")).mode == "modular"
    assert resolved(big, SuiteConfig(mode="symbolic")).mode == "symbolic"


# --- failing checks carry fingerprints and replay -----------------------------------------


def _bad_build(fld):
    x = fld.var("x1")
    return x + 1, x * 1


@pytest.mark.parametrize("mode", ["symbolic", "modular"])
def test_failing_check_carries_both_sides(mode):
    vs = VarSet.standard(1, 0)
    res = check_identity("bad", "toy", vs, _bad_build, SuiteConfig(mode=mode, trials=3))
    assert res.status == "fail" and res.lhs and res.rhs and res.lhs != res.rhs


def test_modular_failure_replays():
    vs = VarSet.standard(1, 0)
    res = check_identity("bad", "toy", vs, _bad_build, SuiteConfig(mode="modular", trials=3, seed=4))
    lhs, rhs = _bad_build(ModularField(res.witness))
    assert (str(int(lhs)), str(int(rhs))) == (res.lhs, res.rhs)


def test_domain_error_becomes_failure():
    def build(fld):
        raise RootDataError("boom")

    res = check_identity("err", "toy", VarSet.standard(1, 0), build, SuiteConfig())
    assert res.status == "fail" and "boom" in res.detail and res.lhs


def test_report_status_validation():
    with pytest.raises(SuiteError):
        CheckResult("a", "b", "maybe")
    rep = SuiteReport("x", "symbolic", 0, 0, checks=[CheckResult("a", "b", "skipped")])
    assert rep.passed and rep.counts()["skipped"] == 1


def test_fingerprint_is_stable():
    F = SymbolicField.standard(1, 1)
    f = F.var("x1") + F.var("y1")
    assert fingerprint(f) == fingerprint(F.var("y1") + F.var("x1"))
    assert fingerprint(f).endswith(":x1 + y1")


# --- Cauchy and regularity helpers ------------------------------------------------------


@pytest.mark.parametrize("r", [1, 2, 3])
def test_cauchy_truncation(r):
    F = SymbolicField.standard(r, r)
    lhs, rhs = cauchy_series(r, 4, F)
    assert lhs.coeffs == rhs.coeffs
    tr_a = sum((F.var(f"x{i}") for i in range(1, r + 1)), F.zero)
    tr_b = sum((F.var(f"y{i}") for i in range(1, r + 1)), F.zero)
    assert lhs.coeffs[1] == tr_a * tr_b


def test_is_regular():
    F = SymbolicField.standard(1, 1)
    v, x = F.var("v"), F.var("x1")
    assert is_regular(x / (v**2 + 1))
    assert not is_regular(1 / (1 - x))


@given(st.sampled_from(NORMALIZATION_GRID), st.integers(0, 10**6))
def test_sampled_lambdas_lie_in_the_cone(args, seed):
    case = build_case(*args)
    lam = sample_lambda(case, random.Random(seed))
    from fjshintani.rootdata import in_negative_cone

    assert in_negative_cone(case, lam)


# --- evaluation ---------------------------------------------------------------------------


def test_eval_examples():
    case = build_case("split", 1, 1)
    assert eval_ws(EvalRequest(case, Cocharacter.of((1,), (0,))))["canonical"] == "x1"
    assert eval_ws(EvalRequest(case, Cocharacter.zero(case)))["canonical"] == "1"
    with pytest.raises(RootDataError):
        eval_ws(EvalRequest(build_case("split", 2, 2), Cocharacter.of((0, 1), (0, 0))))


def test_eval_numeric_values():
    case = build_case("split", 1, 1)
    req = EvalRequest(case, Cocharacter.of((2,), (-1,)), (Fraction(2),), (Fraction(3),), Fraction(5), Fraction(4))
    assert eval_ws(req)["value"] == "4/3"
    case = build_case("split", 2, 2)
    req = EvalRequest(case, Cocharacter.of((1, 0), (0, 0)), (Fraction(2), Fraction(1, 2)), (Fraction(3), Fraction(1)),
                      Fraction(1), Fraction(2))
    assert eval_ws(req)["value"] == "5/6*sqrt(2)"


def test_quadratic_evaluation_matches_float():
    F = SymbolicField.standard(1, 1)
    v, x = F.var("v"), F.var("x1")
    f = (1 - v**-1 * x) / (1 + v**-3)
    val = evaluate_numeric(f, {"x1": Fraction(2)}, Fraction(3))
    s = 3**0.5
    assert float(val.a) + float(val.b) * s == pytest.approx((1 - 2 / s) / (1 + s**-3))


def test_eval_validation():
    case = build_case("inert", 2, 2)
    with pytest.raises(SuiteError):
        eval_ws(EvalRequest(case, Cocharacter.of((1, 0), (0,))))
    with pytest.raises(SuiteError):
        eval_ws(EvalRequest(case, Cocharacter.zero(case), mu_unit=Fraction(2)))
    with pytest.raises(SuiteError):
        eval_ws(EvalRequest(case, Cocharacter.zero(case), q=Fraction(1)))


def test_request_from_dict():
    req = request_from_dict({"schema": 1, "case": "split", "n": 1, "m": 1, "lambda_v": "2", "lambda_w": [-1],
                             "chi": [2], "eta": "3", "mu_unit": 5, "q": 4})
    assert eval_ws(req)["value"] == "4/3"
    with pytest.raises(SuiteError):
        request_from_dict({"schema": 2, "case": "split", "n": 1, "m": 1})
    with pytest.raises(SuiteError):
        request_from_dict({"case": "split", "n": 1})


# --- tables ---------------------------------------------------------------------------------


def test_table_single_zero_row():
    case = build_case("split", 1, 1)
    out = table_ws(case, [Cocharacter.zero(case)])
    assert out.splitlines() == ["lambda_v,lambda_w,canonical,value", "0,0,1,"]


def test_table_is_byte_identical():
    case = build_case("split", 2, 2)
    grid = [Cocharacter.of(lv, lw) for lv, lw in [((0, 0), (0, 0)), ((1, 0), (0, 0)), ((1, 1), (0, 0)), ((2, 0), (-1, 0))]]
    a, b = table_ws(case, grid), table_ws(case, grid)
    assert a == b and len(a.splitlines()) == 5


def test_table_empty_grid():
    assert table_ws(build_case("split", 1, 1), []) == "lambda_v,lambda_w,canonical,value\n"


def test_lambda_grid():
    case = build_case("split", 2, 2)
    grid = lambda_grid(case, 1)
    assert Cocharacter.zero(case) in grid
    # six nonincreasing pairs from {-1, 0, 1} on each side
    assert len(grid) == len(set(grid)) == 6 * 6


def test_suite_names():
    assert len(SUITES) == 11
