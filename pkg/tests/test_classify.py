import pytest

from qexpand import Q2, to_decimal
from qexpand.classify import (
    CTX, EXCLUDED_WORDS, NotFound, a1_points, a2_in_j_members, a2_member_exact, branch_class,
    escape_search, family_point, forced_orbit, h_cover, in_j, j_interval, m1_member, m2_family, m2_member,
    paper_escape_word, solve_a1_equation,
)
from qexpand.dynamics import apply_word
from qexpand.words import FiniteWord, epsilon, family_word, parse_word, value

q = Q2.gen()
D = CTX.domain_hi


def v(text):
    return value(parse_word(text), Q2)


# --- M1 / M2 ---------------------------------------------------------------------

@pytest.mark.parametrize("text", ["1^4(01)^inf", "0^inf", "1^inf", "0^3(10)^inf", "(10)^inf"])
def test_m1_members(text):
    assert m1_member(v(text)) == parse_word(text)


@pytest.mark.parametrize("text", ["01(10)^inf", "10(01)^inf", "0^2(01)^3(10)^inf", "(1001)^inf"])
def test_m1_non_members(text):
    assert m1_member(v(text)) is None


def test_m2_examples():
    pair = m2_member(v("1^3(01)^2(10)^inf"))
    assert pair is not None and parse_word("1^3(01)^2(10)^inf") in pair
    refl = m2_member(D - v("0^2(01)(10)^inf"))
    assert refl is not None and parse_word("0^2(01)(10)^inf").reflect() in refl
    assert m2_member(Q2.zero()) is None
    assert m2_member(v("01^2(01)(10)^inf")) is None


def test_m2_family_labels():
    assert m2_family(v("0^2(01)^3(10)^inf")) == ("0^m eps_k", 2, 3)
    assert m2_family(v("0^inf")) is None


def test_forced_orbit_of_m2_point_hits_a1():
    orb = forced_orbit(v("0^2(01)^3(10)^inf"))
    assert orb.outcome == "switch"
    assert orb.hit in a1_points()


# --- A1 / A2 / A3 ---------------------------------------------------------------

def test_branch_class_examples():
    assert branch_class(v("10(01)^inf")).kind == "A1"
    assert branch_class(v("01(10)^inf")).kind == "A1"
    assert branch_class(v("01^2(01)(10)^inf")).kind == "A2"
    assert branch_class(Q2.zero()).kind == "NotInSwitch"


def test_branch_class_a3_point():
    # (1001)^inf lies in the switch region and both images have infinitely many expansions
    bc = branch_class(v("(1001)^inf"))
    assert bc.kind == "A3"
    assert [e.finite for e in bc.evidence] == [False, False]
    assert bc.evidence[1].witness is not None and bc.evidence[1].witness.kind == "infinite"


def test_a1_points_have_two_expansions():
    a, b = a1_points()
    assert a == v("01(10)^inf") and b == v("10(01)^inf")
    assert a == v("1000(01)^inf") and b == v("0111(10)^inf")


def test_solve_a1_equation():
    assert solve_a1_equation(50, 50) == [(1, 3), (3, 1)]
    assert solve_a1_equation(1, 1) == []
    assert solve_a1_equation(3, 3) == [(1, 3), (3, 1)]
    f11 = 2 / q + q * q - q - 2
    assert to_decimal(f11, 4) == "0.3848"


# --- J, H, enumeration -------------------------------------------------------------

def test_j_interval():
    lo, hi = j_interval()
    assert (to_decimal(lo, 6), to_decimal(hi, 6)) == ("0.613089", "0.794085")
    assert lo == (q + q * q) / (q ** 4 - 1) and hi == (1 + q ** 3) / (q ** 4 - 1)
    assert in_j(lo) and in_j(hi) and not in_j(hi + q ** -40)


def test_h_cover_table():
    table = h_cover()
    assert len(table.h) == 8
    assert all(iv.lo < iv.hi for iv in table.h)
    first = {(iv.m, iv.column): (to_decimal(iv.lo, 6), to_decimal(iv.hi, 6)) for iv in table.h}
    assert first[1, 1] == ("0.602117", "0.670382")
    assert first[3, 2] == ("0.636592", "0.659920")
    assert first[4, 1] == ("0.778554", "0.792191")
    text = table.format_table()
    assert "0.805057" in text and len(text.splitlines()) == 5


def test_a2_members_enumeration():
    members = a2_in_j_members(4)
    labels = {p.label for p in members}
    assert "01^2(10)^inf" in labels and "01^4(10)^inf" in labels
    assert "10^1 eps_1" not in labels and "10^3 eps_1" in labels
    assert all(in_j(p.value) and CTX.in_switch(p.value) for p in members)
    assert family_word(1, 1, "type10") in EXCLUDED_WORDS
    assert len(members) == 2 * (2 + 4 * 4 * 2 - 1)


def test_excluded_point_lies_outside_j():
    assert not in_j(value(family_word(1, 1, "type10"), Q2))


def test_a2_symmetry():
    for p in a2_in_j_members(3, verify=False):
        assert a2_member_exact(D - p.value).member
        assert p.mirror().mirror() == p


def test_a2_member_exact_examples():
    assert not a2_member_exact((2 * q - 1) / (q ** 3 - q)).member
    dec = a2_member_exact(value(family_word(3, 2, "type10"), Q2))
    assert dec.member and "k=2" in dec.match
    x = apply_word(value(family_word(2, 4, "type01"), Q2), FiniteWord.of("001"), CTX, "paper")
    dec = a2_member_exact(x)
    assert to_decimal(x, 6) == "0.675327" and not dec.member
    assert any(e["status"] == "between" for e in dec.record)
    with pytest.raises(ValueError):
        a2_member_exact(Q2.zero())


def test_a2_member_exact_on_limits():
    assert a2_member_exact(v("01^2(10)^inf")).member
    assert not a2_member_exact(v("01^3(10)^inf")).member  # an A1 point, not in A2


def test_a2_member_exact_agrees_with_branch_class_on_sample():
    for bits in range(64):
        x = v(format(bits, "06b") + "(01)^2(10)^inf")
        if not in_j(x):
            continue
        assert a2_member_exact(x).member == (branch_class(x, certify=False).kind == "A2")


# --- escapes -------------------------------------------------------------------------

def test_paper_word_e1():
    for k in (1, 2, 7):
        p = family_point(1, k, "type01")
        w = paper_escape_word(p)
        assert str(w) == "10" * (k - 1) + "0001"
        cert = escape_search(p)
        assert cert.source == "paper" and cert.landing == (2 * q - 1) / (q ** 3 - q)


def test_paper_word_10_4():
    cert = escape_search(family_point(4, 3, "type10"))
    assert cert.source == "paper" and str(cert.word) == "0110"
    assert cert.verify()


def test_reflected_point_reuses_mirror():
    cert = escape_search(family_point(1, 2, "type01", reflected=True))
    assert cert.source == "reflected"
    assert cert.word == FiniteWord.of("100001").reflect() == FiniteWord.of("011110")
    assert cert.verify()


def test_10_2_eps_1_needs_search():
    p = family_point(2, 1, "type10")
    landing = apply_word(p.value, paper_escape_word(p), CTX, "paper")
    assert not in_j(landing)
    cert = escape_search(p)
    assert cert.source == "search" and cert.verify()
    assert cert.landing == v("01(10)^inf")


def test_escape_not_found_is_reported():
    with pytest.raises(NotFound):
        escape_search(family_point(2, 1, "type10"), max_len=0)


def test_certificate_dict():
    d = escape_search(family_point(2, None, "limit")).to_dict()
    assert d["word"] == "001" and d["landing"][:9] == "0.6723859"
    assert d["in_J"] == [1, 1] and d["in_H"] is None


def test_tampered_certificate_fails_verification():
    from dataclasses import replace
    cert = escape_search(family_point(3, 1, "type01"))
    assert cert.verify()
    assert not replace(cert, landing=cert.landing + 1).verify()


def test_epsilon_family_word_consistency():
    assert family_word(2, 3, "type01") == FiniteWord((0, 1, 1, 1)) + epsilon(3)
