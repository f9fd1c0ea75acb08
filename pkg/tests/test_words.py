from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qexpand import Q2, to_decimal
from qexpand.words import (
    EmptyPeriod, FiniteWord, PeriodicWord, WordSyntaxError, closed_form_family, epsilon, family_word,
    format_word, parse_word, reflect, value,
)

from .strategies import finite_words, periodic_words

q = Q2.gen()
D = 1 / (q - 1)


def _series(w: PeriodicWord, n: int = 400) -> mpmath.mpf:
    """Independent oracle: truncated digit sum at 50 digits, tail < q^-400."""
    with mpmath.workdps(50):
        qq = mpmath.findroot(lambda x: x ** 4 - 2 * x ** 2 - x - 1, 1.7)
        return mpmath.fsum(w.digit(i) * qq ** -(i + 1) for i in range(n))


# --- parsing -----------------------------------------------------------------

@pytest.mark.parametrize("text, pre, per", [
    ("(01)^2(10)^inf", (0, 1, 0, 1), (1, 0)),
    ("0^inf", (), (0,)),
    ("01^2(10)^inf", (0, 1, 1), (1, 0)),
    ("0 1 ( 1 0 ) ^ inf", (0, 1), (1, 0)),
    ("((01)^2 1)^2 0^inf", (0, 1, 0, 1, 1, 0, 1, 0, 1, 1), (0,)),
])
def test_parse_periodic(text, pre, per):
    assert parse_word(text) == PeriodicWord(pre, per)


def test_parse_finite_and_empty():
    assert parse_word("0^3 1") == FiniteWord((0, 0, 0, 1))
    assert parse_word("") == FiniteWord(())
    assert parse_word("(10)^0") == FiniteWord(())


@pytest.mark.parametrize("text, pos", [("01(", 3), ("2", 0), ("0^", 2), ("(01)^inf1", 8), ("((0)^inf)", 5)])
def test_parse_errors_report_position(text, pos):
    with pytest.raises(WordSyntaxError) as exc:
        parse_word(text)
    assert exc.value.position == pos


def test_empty_period_rejected():
    with pytest.raises(EmptyPeriod):
        parse_word("01()^inf")


def test_of_constructors_check_kind():
    with pytest.raises(ValueError):
        FiniteWord.of("(01)^inf")
    with pytest.raises(ValueError):
        PeriodicWord.of("01")


# --- canonical form ---------------------------------------------------------------

def test_canonical_form_is_unique():
    assert PeriodicWord((0, 1, 1, 0), (1, 0)) == PeriodicWord((0, 1), (1, 0))
    assert PeriodicWord((), (1, 0, 1, 0)) == PeriodicWord((), (1, 0))
    assert PeriodicWord((1,), (0, 1)) == PeriodicWord((), (1, 0))
    assert format_word(PeriodicWord((0, 1, 1, 0), (1, 0, 1, 0))) == "01(10)^inf"


def test_format_word():
    assert format_word(parse_word("0^3 0^inf")) == "0^inf"
    assert format_word(parse_word("(01)^2(10)^inf")) == "0101(10)^inf"
    assert str(FiniteWord((1, 0, 0))) == "100"


def test_shift_prefix_digit():
    w = parse_word("011(10)^inf")
    assert w.prefix(5) == FiniteWord((0, 1, 1, 1, 0))
    assert w.shift(1) == parse_word("11(10)^inf")
    assert w.shift(4) == parse_word("(01)^inf")
    assert w.digit(100) == 0


@given(periodic_words)
def test_parser_round_trip(w):
    assert parse_word(format_word(w)) == w


@given(finite_words)
def test_finite_round_trip(w):
    assert parse_word(str(w)) == w


@given(periodic_words, st.integers(0, 30))
def test_shift_matches_digits(w, n):
    s = w.shift(n)
    assert all(s.digit(i) == w.digit(n + i) for i in range(20))


# --- values -----------------------------------------------------------------------

def test_value_examples_against_series_oracle():
    # oracle: 400-term digit sums at 50 digits
    assert to_decimal(value(parse_word("01^2(10)^inf"), Q2), 6) == "0.718895"
    assert abs(float(value(parse_word("01^2(10)^inf"), Q2)) - float(_series(parse_word("01^2(10)^inf")))) < 1e-15
    assert to_decimal(value(parse_word("(0110)^inf"), Q2), 6) == "0.613089"
    assert to_decimal(value(parse_word("(1001)^inf"), Q2), 6) == "0.794085"


def test_value_of_constant_words():
    assert value(parse_word("0^inf"), Q2).is_zero()
    assert value(parse_word("1^inf"), Q2) == D
    assert value(parse_word("1 0^inf"), Q2) == 1 / q


def test_value_rejects_finite_words():
    with pytest.raises(TypeError):
        value(FiniteWord((0, 1)), Q2)


@given(periodic_words)
def test_value_against_series(w):
    assert abs(float(value(w, Q2)) - float(_series(w))) < 1e-12


@given(periodic_words)
def test_reflection_identity(w):
    assert value(reflect(w), Q2) == D - value(w, Q2)


@given(st.integers(0, 6), st.integers(1, 12), st.sampled_from(["type01", "type10"]))
def test_closed_form_matches_word(m, k, shape):
    assert closed_form_family(m, k, shape, Q2) == value(family_word(m, k, shape), Q2)


def test_family_words():
    assert family_word(1, 1, "type01") == parse_word("011(01)(10)^inf")
    assert family_word(2, 3, "type10") == parse_word("100(01)^3(10)^inf")
    assert epsilon(2) == parse_word("(01)^2(10)^inf")
    with pytest.raises(ValueError):
        epsilon(0)
    with pytest.raises(ValueError):
        family_word(1, 1, "type11")


@pytest.mark.parametrize("m, k, shape, dec", [
    (1, 1, "type01", "0.670382"),
    (1, 1, "type10", "0.805057"),
    (4, 1, "type10", "0.628620"),
])
def test_closed_form_decimals(m, k, shape, dec):
    assert to_decimal(closed_form_family(m, k, shape, Q2), 6) == dec


def test_finite_word_ops():
    w = FiniteWord.of("0^2 1")
    assert w + FiniteWord((1,)) == FiniteWord((0, 0, 1, 1))
    assert w * 2 == FiniteWord((0, 0, 1, 0, 0, 1))
    assert w.reversed() == FiniteWord((1, 0, 0))
    assert w.reflect() == FiniteWord((1, 1, 0))
    assert (w + parse_word("(10)^inf")) == parse_word("001(10)^inf")
    with pytest.raises(ValueError):
        FiniteWord((0, 2))


def test_rational_digit_sums_exact():
    # 1/q + 1/q^3 + ... for (10)^inf equals q/(q^2-1)
    assert value(parse_word("(10)^inf"), Q2) == q / (q * q - 1)
    assert value(parse_word("0^inf"), Q2) == Q2(Fraction(0))
