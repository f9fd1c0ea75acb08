import json

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from qexpand import Q2, to_decimal
from qexpand._kernels import count_prefixes
from qexpand.dynamics import (
    DomainViolation, apply_digit, apply_word, context, count_expansions, count_word, default_depth,
    expansion_tree, greedy_digits, inverse_map, tree_to_dot, tree_to_json,
)
from qexpand.words import FiniteWord, PeriodicWord, epsilon, parse_word, value

from .strategies import finite_words, periodic_words

CTX = context(Q2)
q = CTX.q
D = CTX.domain_hi


def v(text):
    return value(parse_word(text), Q2)


def test_context_bounds():
    assert CTX.switch_lo == 1 / q
    assert CTX.switch_hi == 1 / (q * q - q)
    assert CTX.allowed_digits(Q2.zero()) == (0,)
    assert CTX.allowed_digits(D) == (1,)
    assert CTX.allowed_digits(CTX.switch_lo) == (0, 1)
    assert CTX.allowed_digits(CTX.switch_hi) == (0, 1)


def test_apply_digit_example():
    y = apply_digit(v("01^2(01)(10)^inf"), 1, CTX)
    assert to_decimal(y, 6) == "0.146786"


def test_apply_digit_domain():
    with pytest.raises(DomainViolation):
        apply_digit(Q2.zero(), 1, CTX)
    with pytest.raises(DomainViolation):
        apply_digit(D, 0, CTX)
    with pytest.raises(ValueError):
        apply_digit(Q2.zero(), 2, CTX)


def test_apply_word_orders():
    x = v("01^2(01)(10)^inf")
    w = FiniteWord.of("0001")
    assert to_decimal(apply_word(x, w, CTX, "paper"), 6) == "0.734788"
    with pytest.raises(DomainViolation) as exc:
        apply_word(x, w, CTX, "forward")
    assert exc.value.prefix is not None
    assert apply_word(x, FiniteWord(), CTX) == x
    with pytest.raises(ValueError):
        apply_word(x, w, CTX, "sideways")


def test_apply_word_strips_prefix():
    # composition order T_{0^3 1}: digit 1 first, then three zeros
    x = v("1000(01)^inf")
    assert apply_word(x, FiniteWord.of("0001"), CTX, "paper") == v("(01)^inf")


def test_inverse_map():
    assert inverse_map(v("01(10)^inf"), 1, CTX) == v("101(10)^inf")
    assert to_decimal(inverse_map(v("01(10)^inf"), 1, CTX), 6) == "0.961742"
    assert inverse_map(v("(01)^2(10)^inf"), 0, CTX) == v("0(01)^2(10)^inf")
    with pytest.raises(DomainViolation):
        inverse_map(D + 1, 0, CTX)


def test_greedy_digits():
    assert greedy_digits(Q2.zero(), CTX, 10) == FiniteWord((0,) * 10)
    assert greedy_digits(D, CTX, 10) == FiniteWord((1,) * 10)
    assert str(greedy_digits(Q2.one(), CTX, 2)) == "11"


@given(st.integers(0, 2 ** 12 - 1))
def test_greedy_partial_sum_bound(bits):
    x = v(format(bits, "012b") + "(10)^inf")
    n = 16
    w = greedy_digits(x, CTX, n)
    partial = sum((d * q ** -(i + 1) for i, d in enumerate(w.digits)), Q2.zero())
    assert Q2.zero() <= x - partial <= q ** -n * D


def test_default_depth():
    assert default_depth() == 256
    assert default_depth(parse_word("000(10)^inf")) == 4 * (2 + 2) + 64  # canonical 00(01)^inf


@pytest.mark.parametrize("text, label", [
    ("000(10)^inf", "Exact(1)"),
    ("0^2(01)^3(10)^inf", "Exact(2)"),
    ("(1001)^inf", "InfiniteWitness"),
    ("(0110)^inf", "InfiniteWitness"),
    ("0^inf", "Exact(1)"),
])
def test_count_examples(text, label):
    res = count_word(parse_word(text), CTX)
    assert str(res) == label
    for c in res.certificates:
        assert value(c, Q2) == v(text)
    assert len(set(res.certificates)) == len(res.certificates)


def test_count_continuum_point_is_inconclusive():
    res = count_expansions(v("01^2(01)(10)^inf"), CTX, max_depth=32, max_nodes=2000)
    assert res.kind in ("inconclusive", "infinite")


def test_count_domain():
    with pytest.raises(DomainViolation):
        count_expansions(D + 1, CTX)


def test_count_result_dict():
    d = count_word(parse_word("0^2(01)^3(10)^inf"), CTX).to_dict()
    assert d["kind"] == "exact" and d["n"] == 2 and len(d["certificates"]) == 2


def _family_words(m_max=3, k_max=3):
    out = []
    for m in range(m_max + 1):
        for k in range(1, k_max + 1):
            for s in (0, 1):
                w = FiniteWord((s,) * m) + epsilon(k)
                out += [w, w.reflect()]
        out += [parse_word(f"{'0' * m}(10)^inf"), parse_word(f"{'1' * m}(01)^inf")]
    return sorted(set(out), key=str)


@pytest.mark.parametrize("w", _family_words(), ids=str)
def test_count_matches_float_prefix_oracle(w):
    x = value(w, Q2)
    res = count_word(w, CTX)
    assert res.kind == "exact"
    assert count_prefixes(float(x), float(q), 25) == res.n


@given(periodic_words)
def test_shift_property(w):
    x = value(w, Q2)
    s = w.digit(0)
    assume(s in CTX.allowed_digits(x))
    assert apply_digit(x, s, CTX) == value(w.shift(1), Q2)


@given(periodic_words, st.integers(0, 1))
def test_reflection_conjugacy(w, s):
    x = value(w, Q2)
    assume(s in CTX.allowed_digits(x))
    assert apply_digit(D - x, 1 - s, CTX) == D - apply_digit(x, s, CTX)


@given(periodic_words, finite_words)
def test_order_identity(w, word):
    x = value(w, Q2)
    try:
        a = apply_word(x, word, CTX, "paper_subscript")
    except DomainViolation:
        with pytest.raises(DomainViolation):
            apply_word(x, word.reversed(), CTX, "first_symbol_first")
        return
    assert a == apply_word(x, word.reversed(), CTX, "first_symbol_first")


def test_tree_of_zero():
    root = expansion_tree(Q2.zero(), CTX, max_depth=10)
    assert root.end == "absorbing" and not root.children


def test_tree_of_a1_point():
    root = expansion_tree(v("01(10)^inf"), CTX, max_depth=40)
    assert root.in_switch and [s for s, _ in root.children] == [0, 1]
    for _, child in root.children:
        nodes = list(child.iter_nodes())
        assert not any(n.in_switch for n in nodes)
        assert any(n.end in ("cycle", "absorbing") for n in nodes)


def test_tree_of_period_four_point_revisits_switch():
    root = expansion_tree(v("(1001)^inf"), CTX, max_depth=12)
    assert any(n.end == "switch_cycle" for n in root.iter_nodes())


def test_tree_exports():
    root = expansion_tree(v("0^2(01)^3(10)^inf"), CTX, max_depth=30)
    doc = json.loads(tree_to_json(root))
    assert set(doc) >= {"word", "decimal", "coeffs", "in_switch"}
    dot = tree_to_dot(root)
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")


def test_tree_depth_cutoff():
    root = expansion_tree(v("01^2(01)(10)^inf"), CTX, max_depth=3)
    assert all(len(n.word_applied) <= 3 for n in root.iter_nodes())
    assert any(n.end == "depth" for n in root.iter_nodes())


def test_periodic_word_certificate_values():
    res = count_word(PeriodicWord((0, 0, 0), (1, 0)), CTX)
    assert res.certificates == (parse_word("000(10)^inf"),)
