import io
import json
import subprocess
import sys

import jsonschema
import pytest

from qexpand.cli import run
from qexpand.schema import envelope_schema


def call(*argv):
    buf = io.StringIO()
    status = run(list(argv), buf)
    return status, buf.getvalue()


def call_json(*argv):
    status, text = call(*argv, "--format", "json")
    doc = json.loads(text)
    jsonschema.validate(doc, envelope_schema(argv[0]))
    return status, doc


@pytest.mark.parametrize("argv", [
    ("value", "01^2(10)^inf"),
    ("orbit", "01^2(01)(10)^inf", "--word", "0001"),
    ("orbit", "0.5,0,0,0"),
    ("count", "0^2(01)^3(10)^inf"),
    ("count", "(1001)^inf", "--tree", "json", "--tree-depth", "8"),
    ("classify", "01^2(01)(10)^inf"),
    ("escape", "--m", "2", "--k", "1", "--shape", "type10"),
    ("escape", "--m", "2", "--limit"),
    ("table1",),
    ("constants",),
])
def test_json_output_validates(argv):
    status, doc = call_json(*argv)
    assert status == 0 and doc["base"] == "q2"


def test_value_decimal():
    _, doc = call_json("value", "01^2(10)^inf", "--precision", "6")
    assert doc["result"]["decimal"] == "0.718895"


def test_orbit_landing_and_order():
    _, doc = call_json("orbit", "01^2(01)(10)^inf", "--word", "0001", "--precision", "6")
    assert doc["result"]["landing"] == "0.734788"
    assert [s["digit"] for s in doc["result"]["steps"]] == [1, 0, 0, 0]
    status, _ = call("orbit", "01^2(01)(10)^inf", "--word", "0001", "--order", "forward")
    assert status == 2


def test_orbit_outside_domain_is_usage_error():
    # eps_3 lies below the switch region, so T1 cannot act on it
    status, _ = call("orbit", "(01)^2(01)^1(10)^inf", "--word", "0001")
    assert status == 2


def test_count_labels():
    _, doc = call_json("count", "(0110)^inf")
    assert doc["result"]["count"]["label"] == "InfiniteWitness"
    status, text = call("count", "0^2(01)^3(10)^inf")
    assert status == 0 and "Exact(2)" in text


def test_count_tree_dot():
    status, text = call("count", "01(10)^inf", "--tree", "dot", "--tree-depth", "6")
    assert status == 0 and "digraph" in text


def test_escape_certificate():
    _, doc = call_json("escape", "--m", "1", "--k", "3")
    r = doc["result"]
    assert r["verified"] and r["word"] == "10100001"


@pytest.mark.parametrize("argv", [
    ("value", "01("),
    ("value", "0101"),
    ("nosuch",),
    ("count", "0^inf", "--base", "nope"),
    ("classify", "0^inf", "--base", "qG"),
    ("escape", "--m", "1", "--k", "1", "--shape", "type10"),
    ("escape", "--m", "7", "--k", "1"),
    ("value", "0^inf", "--precision", "0"),
    ("count", "5,0,0,0"),
])
def test_usage_errors_exit_2(argv):
    status, _ = call(*argv)
    assert status == 2


def test_escape_not_found_exits_1():
    status, _ = call("escape", "--m", "2", "--k", "1", "--shape", "type10", "--max-len", "0")
    assert status == 1


def test_other_bases():
    _, doc = call_json("value", "(10)^inf", "--base", "qG", "--precision", "10")
    assert doc["base"] == "qG" and doc["result"]["decimal"] == "1.0000000000"
    _, doc = call_json("value", "1^inf", "--minpoly", "1,-1,-1", "--precision", "6")
    assert doc["result"]["decimal"] == "1.618034"


def test_precision_env(monkeypatch):
    monkeypatch.setenv("QEXPAND_PRECISION", "8")
    _, doc = call_json("value", "01^2(10)^inf")
    assert doc["result"]["decimal"] == "0.71889481"
    monkeypatch.setenv("QEXPAND_PRECISION", "x")
    assert call("value", "0^inf")[0] == 2


def test_text_and_json_carry_the_same_facts():
    _, doc = call_json("classify", "01^2(01)(10)^inf", "--precision", "8")
    _, text = call("classify", "01^2(01)(10)^inf", "--precision", "8")
    r = doc["result"]
    assert r["x"] in text and r["branch_class"]["kind"] in text and r["A2_in_J"]["match"] in text
    _, doc = call_json("table1")
    _, text = call("table1")
    for iv in doc["result"]["H"]:
        assert iv["lo"][:8] in text


def test_output_is_deterministic():
    a = call("escape", "--m", "3", "--k", "2", "--format", "json")
    b = call("escape", "--m", "3", "--k", "2", "--format", "json")
    assert a == b


def test_verify_small_bounds():
    status, text = call("verify", "--k-max", "2", "--m-max", "2", "--word-len", "8")
    assert status == 0
    assert text.splitlines()[-1].endswith("0 failed")


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "qexpand", "value", "0^inf"], capture_output=True, text=True)
    assert out.returncode == 0 and "decimal: 0" in out.stdout


def test_verify_json_validates():
    status, doc = call_json("verify", "--k-max", "2", "--m-max", "2", "--word-len", "8")
    assert status == 0 and doc["result"]["summary"]["fail"] == 0
