import json

import pytest

from qexpand import CONSTANTS, Q2, to_decimal
from qexpand.classify import CTX
from qexpand.dynamics import apply_word
from qexpand.paperlab import (
    CONCRETE_LANDINGS, PARAMETRIC_CLAIMS, Bounds, CheckResult, check_a1_root_grid, check_concrete, check_table1,
    concrete_landing, final_assembly, matches_printed, parametric_image, report_json, report_text, run_escapes,
    verify_all, verify_parametric_identity,
)
from qexpand.words import value

q = Q2.gen()
SMALL = Bounds(k_max=3, m_max=2, depth=128, word_len=8, scan=10, grid=4, parametric_k=6)


def test_matches_printed_is_one_ulp():
    x = (2 * q - 1) / (q ** 3 - q)  # 0.7347881953...
    assert matches_printed(x, "0.734788")
    assert matches_printed(x, "0.734789")
    assert not matches_printed(x, "0.734787")
    assert not matches_printed(x, "0.734790")


def test_bounds_validation():
    with pytest.raises(ValueError):
        Bounds(k_max=0)


@pytest.mark.parametrize("cid", sorted(PARAMETRIC_CLAIMS))
def test_parametric_expression_matches_direct_word(cid):
    claim = PARAMETRIC_CLAIMS[cid]
    expr = parametric_image(claim)
    for k in range(claim.k_min, claim.k_min + 4):
        direct = apply_word(value(claim.start(k), Q2), claim.concrete_word(k), CTX, "paper")
        assert direct == expr.evaluate(k)


@pytest.mark.parametrize("cid", sorted(PARAMETRIC_CLAIMS))
def test_parametric_claims_pass(cid):
    res = verify_parametric_identity(cid, k_max=12)
    assert res.ok, res.details


def test_identity_coefficient_vanishes_only_at_q2():
    claim = PARAMETRIC_CLAIMS["L4.4-E1"]
    assert parametric_image(claim).B.is_zero()
    for name in ("qf", "qG", "qaleph0"):
        spec = CONSTANTS[name]
        e = parametric_image(claim, spec)
        assert not e.B.is_zero()
        assert e.B == claim.printed_B(spec.gen())


def test_limit_claim_direction():
    e = parametric_image(PARAMETRIC_CLAIMS["L4.5-E2"])
    assert e.step == -2 and e.B > 0
    assert e.A == (q ** 3 - q - 2) / (q * q - 1)


def test_mismatched_printed_k_term_is_informational():
    res = verify_parametric_identity("L4.5-10m4", k_max=5)
    assert res.ok and res.details["printed_k_term_matches"] is False


def test_concrete_landings():
    assert check_concrete(SMALL).ok
    assert to_decimal(concrete_landing(*CONCRETE_LANDINGS[0][:2]), 6) == "0.734788"


def test_table1_annotation():
    res = check_table1(SMALL)
    assert res.ok
    assert any("m=1 column=2" in n for n in res.details["annotations"])


def test_root_grid_small():
    res = check_a1_root_grid(Bounds(grid=4), cells=8)
    assert res.ok and res.details["q2_equals_q_1_3"] is True


def test_run_escapes_small():
    s = run_escapes(2, 8)
    assert not s.failures
    assert all(c.verify() for c in s.certificates)
    assert [m["point"] for m in s.paper_misses] == ["10^2 eps_1"]


def test_final_assembly_reports_missing():
    res = final_assembly([CheckResult("escapes", "pass")])
    assert not res.ok and res.details["depends_on"]["h-cover"] == "missing"


@pytest.fixture(scope="module")
def small_results():
    return verify_all(SMALL)


def test_verify_all_small(small_results):
    bad = [r.claim_id for r in small_results if not r.ok]
    assert bad == []
    assert small_results[-1].claim_id == "q2-not-in-B_aleph0"
    assert len({r.claim_id for r in small_results}) == len(small_results)


def test_reports_are_deterministic(small_results):
    again = verify_all(SMALL)
    assert report_json(small_results, SMALL) == report_json(again, SMALL)
    doc = json.loads(report_json(small_results, SMALL))
    assert doc["summary"]["fail"] == 0 and doc["bounds"]["k_max"] == 3
    text = report_text(small_results)
    assert text.splitlines()[-1] == f"{len(small_results)} checks, 0 failed"
    assert "note: stated word 110 leaves J for 10^2 eps_1" in text
