from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from triform.cli import run
from triform.exact_arith import QComplex
from triform.params import from_alpha


def cli(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("TRIFORM_SEED", None)
    full_env.update(env or {})
    proc = subprocess.run(
        [sys.executable, "-m", "triform", *args], capture_output=True, text=True, env=full_env, timeout=600
    )
    return proc.returncode, proc.stdout, proc.stderr


def doc(*args, **kw):
    code, out, _ = cli(*args, **kw)
    return code, json.loads(out)


def test_classify_zero_set_example():
    code, d = doc("classify", "--n", "4", "--alpha", "-3,-3,5")
    assert code == 0 and d["result"]["in_zero_set"] is True
    assert d["config"]["alpha"] == ["-3", "-3", "5"]


def test_dimension_error():
    code, d = doc("classify", "--n", "3", "--alpha", "0,0,0")
    assert code == 3 and d["error"]["kind"] == "DimensionTooSmall"


def test_bidiff_example():
    code, d = doc("bidiff", "--n", "4", "--k", "1", "--lambda1", "0", "--lambda2", "0")
    assert code == 0 and d["result"]["nullity"] == 1
    basis = {(e["r"], e["t"]): e["c"] for e in d["result"]["basis"][0]}
    assert basis == {(0, 0): "1", (1, 0): "-3/4", (0, 1): "-3/4"}


@pytest.mark.parametrize(
    "args, code, kind",
    [
        (["classify", "--n", "4", "--alpha", "1,2"], 2, "ParseError"),
        (["classify", "--n", "4", "--alpha", "a,b,c"], 2, "ParseError"),
        (["classify", "--n", "4"], 2, "UsageError"),
        (["frobnicate"], 2, "UsageError"),
        (["brint", "--n", "4", "--alpha", "-3,0,0"], 3, "IsAPole"),
        (["mc", "--n", "4", "--alpha", "-4,0,0", "--samples", "5000"], 3, "DivergentRegion"),
        (["eval", "--n", "4", "--alpha", "0,0,0", "--a", "1,-1,0"], 2, "ParseError"),
        (["mc", "--n", "4", "--alpha", "0,0,0", "--seed", "xyz"], 2, "ParseError"),
    ],
)
def test_error_codes(args, code, kind):
    rc, out, err = cli(*args)
    assert rc == code
    assert json.loads(out)["error"]["kind"] == kind
    assert kind in err


def test_json_round_trips_through_parsers():
    code, d = doc("classify", "--n", "5", "--lambda", "1/2+1i,-3/2,7")
    assert code == 0
    point = d["result"]["point"]
    p = from_alpha(5, [QComplex.parse(s) for s in point["alpha"]])
    assert [str(v) for v in p.lam] == point["lambda"] == ["1/2+1i", "-3/2", "7"]
    code, d = doc("bidiff", "--n", "4", "--k", "2", "--lambda1", "1/2+1i", "--lambda2", "0")
    for e in d["result"]["basis"][0]:
        assert str(QComplex.parse(e["c"])) == e["c"]


def test_eval_and_witness():
    code, d = doc("eval", "--n", "4", "--alpha", "0,0,0", "--a", "1,0,0")
    assert code == 0 and d["result"]["value"][0] == pytest.approx(1.907565482749495, rel=1e-12)
    code, d = doc("witness", "--n", "4", "--alpha", "-2,-2,-2")
    assert d["result"]["witness"] == "0,0,0" and d["config"]["max_order"] == 12
    code, d = doc("witness", "--n", "4", "--alpha", "-3,-3,5", "--max-order", "6")
    assert d["result"]["witness"] is None and d["result"]["in_zero_set"] is True


def test_float_snapping_is_recorded():
    code, d = doc("classify", "--n", "4", "--float", "--alpha", "-3.0000000001,0.3333333333,0.5")
    assert d["config"]["alpha"] == ["-3", "1/3", "1/2"]
    assert d["config"]["float_input"]["values"] == ["-3.0000000001", "0.3333333333", "0.5"]
    assert d["config"]["float_input"]["snap_tol"] == 1e-9


def test_mc_determinism_and_env_seed():
    args = ("mc", "--n", "4", "--alpha", "-1/2,0,1", "--samples", "70000")
    c1, o1, _ = cli(*args, "--seed", "42")
    c2, o2, _ = cli(*args, "--seed", "42")
    c3, o3, _ = cli(*args, env={"TRIFORM_SEED": "42"})
    assert c1 == c2 == c3 == 0 and o1 == o2 == o3
    assert json.loads(o1)["config"]["seed"] == 42
    c4, o4, _ = cli(*args, "--seed", "43")
    assert o4 != o1
    d = json.loads(o1)["result"]
    assert d["ratio_closed_over_mc"] == pytest.approx(1.3277, rel=0.05)


def test_mc_invariance_mode():
    code, d = doc("mc", "--n", "4", "--alpha", "-1,-1,-1", "--samples", "50000", "--invariance-t", "0")
    assert code == 0 and d["result"]["zscore"] == 0.0


def test_text_output():
    code, out, _ = cli("--output", "text", "classify", "--n", "4", "--alpha", "-2,-2,-2")
    assert code == 0
    assert 'result.pole.label: "II"' in out.splitlines()
    code, out, _ = cli("classify", "--n", "4", "--alpha", "-2,-2,-2", "--output", "text")
    assert 'result.in_zero_set: false' in out.splitlines()


def test_verify_single_suite(capsys):
    code = run(["verify", "--suite", "specfun"])
    out = capsys.readouterr()
    d = json.loads(out.out)
    assert code == 0 and d["result"]["passed"] and len(d["result"]["checks"]) == 5
    assert "[PASS]" in out.err


def test_verify_failure_exit_code(monkeypatch, capsys):
    import triform.verify as v

    monkeypatch.setitem(v.SUITES, "specfun", lambda *a: [v.Check("forced", False)])
    assert run(["verify", "--suite", "specfun"]) == 1
    assert json.loads(capsys.readouterr().out)["result"]["passed"] is False
