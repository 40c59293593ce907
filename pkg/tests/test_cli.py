import json

import pytest
from click.testing import CliRunner

from fjshintani.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, input=None):
        return runner.invoke(main, list(args), input=input)

    return invoke


def test_eval_symbolic(run):
    res = run("eval", "--case", "split", "--n", "1", "--m", "1", "--lambda-v", "1", "--lambda-w", "0")
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["canonical"] == "x1" and doc["schema"] == 1


def test_eval_zero(run):
    res = run("eval", "--case", "inert", "--n", "3", "--m", "1", "--lambda-v", "0")
    assert res.exit_code == 0 and json.loads(res.output)["canonical"] == "1"


def test_eval_numeric_csv(run):
    res = run("eval", "--case", "split", "--n", "1", "--m", "1", "--lambda-v", "2", "--lambda-w", "-1",
              "--chi", "2", "--eta", "3", "--mu-unit", "5", "--q", "4", "--format", "csv")
    assert res.exit_code == 0
    assert res.output.splitlines() == ["lambda_v,lambda_w,canonical,value", "2,-1,x1^2*y1^-1,4/3"]


def test_eval_domain_error(run):
    res = run("eval", "--case", "split", "--n", "2", "--m", "2", "--lambda-v", "0,1", "--lambda-w", "0,0")
    assert res.exit_code == 1
    assert "not dominant" in res.output


@pytest.mark.parametrize(
    "args",
    [
        ("eval", "--case", "split", "--n", "2"),
        ("eval", "--case", "ramified", "--n", "1", "--m", "1"),
        ("eval", "--case", "split", "--n", "2", "--m", "1"),
        ("eval", "--case", "split", "--n", "1", "--m", "1", "--lambda-v", "a"),
        ("eval", "--case", "split", "--n", "1", "--m", "1", "--lambda-v", "0,0", "--lambda-w", "0"),
        ("eval", "--case", "split", "--n", "1", "--m", "1", "--lambda-v", "0", "--lambda-w", "0", "--q", "x"),
        ("verify", "--suite", "bogus"),
        ("verify", "--mode", "numeric"),
        ("table", "--case", "split", "--n", "1", "--m", "1", "--point", "0"),
    ],
)
def test_usage_errors_exit_2(run, args):
    assert run(*args).exit_code == 2


def test_eval_json_input(run):
    doc = {"schema": 1, "case": "split", "n": 1, "m": 1, "lambda_v": [0], "lambda_w": [0]}
    res = run("eval", "--input", "-", input=json.dumps(doc))
    assert res.exit_code == 0 and json.loads(res.output)["canonical"] == "1"
    assert run("eval", "--input", "-", input="{not json").exit_code == 2
    assert run("eval", "--input", "-", input=json.dumps({"case": "split"})).exit_code == 2
    shifted = dict(doc, lambda_v=[1], lambda_w=[2])
    bad_cone = {"schema": 1, "case": "split", "n": 2, "m": 2, "lambda_v": [0, 1], "lambda_w": [0, 0]}
    assert run("eval", "--input", "-", input=json.dumps(shifted)).exit_code == 0
    assert run("eval", "--input", "-", input=json.dumps(bad_cone)).exit_code == 1


def test_table_points(run):
    args = ("table", "--case", "split", "--n", "2", "--m", "2", "--point", "0,0;0,0", "--point", "1,0;0,0")
    a, b = run(*args), run(*args)
    assert a.exit_code == 0 and a.output == b.output
    lines = a.output.splitlines()
    assert lines[0] == "lambda_v,lambda_w,canonical,value"
    assert lines[1] == '"0,0","0,0",1,'
    assert len(lines) == 3


def test_table_empty_and_json(run):
    res = run("table", "--case", "split", "--n", "1", "--m", "1")
    assert res.output == "lambda_v,lambda_w,canonical,value\n"
    res = run("table", "--case", "split", "--n", "1", "--m", "1", "--max-norm", "1", "--format", "json")
    rows = json.loads(res.output)["rows"]
    assert len(rows) == 9


def test_verify_json_and_exit_code(run):
    res = run("verify", "--suite", "normalization", "--max-rank", "1")
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["passed"] and doc["suite"] == "normalization" and "wall_time" not in doc


def test_verify_modular_is_deterministic(run):
    args = ("verify", "--suite", "gamma_ratio", "--mode", "modular", "--trials", "3", "--seed", "7", "--max-rank", "2")
    a, b = run(*args), run(*args)
    assert a.exit_code == 0 and a.output == b.output


def test_verify_csv(run):
    res = run("verify", "--suite", "cauchy", "--max-rank", "1", "--format", "csv")
    lines = res.output.splitlines()
    assert lines[0] == "suite,case,check,status,lhs,rhs,detail"
    assert all(",pass," in line for line in lines[1:])
