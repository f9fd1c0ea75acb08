"""Finite and eventually periodic binary words.

Text notation (whitespace ignored)::

    word  := atom+ tail?
    atom  := '0' | '1' | '(' word ')'    optionally followed by '^' INT
    tail  := atom '^inf'

so ``"(01)^2(10)^inf"`` is ``0101`` followed by ``10`` repeated forever.
A trailing ``^inf`` yields a :class:`PeriodicWord`, otherwise a :class:`FiniteWord`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Union

from .algebraic import FieldElement, FieldSpec


class WordSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class EmptyPeriod(WordSyntaxError):
    pass


def _check_digits(digits) -> tuple[int, ...]:
    digits = tuple(int(d) for d in digits)
    if any(d not in (0, 1) for d in digits):
        raise ValueError(f"digits must be 0 or 1, got {digits}")
    return digits


@dataclass(frozen=True)
class FiniteWord:
    digits: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "digits", _check_digits(self.digits))

    @classmethod
    def of(cls, text: str) -> FiniteWord:
        w = parse_word(text)
        if not isinstance(w, FiniteWord):
            raise ValueError(f"{text!r} is not a finite word")
        return w

    def __len__(self):
        return len(self.digits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.digits)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return FiniteWord(self.digits[i])
        return self.digits[i]

    def __add__(self, other):
        if isinstance(other, FiniteWord):
            return FiniteWord(self.digits + other.digits)
        if isinstance(other, PeriodicWord):
            return PeriodicWord(self.digits + other.preperiod, other.period)
        return NotImplemented

    def __mul__(self, n: int) -> FiniteWord:
        return FiniteWord(self.digits * n)

    def reversed(self) -> FiniteWord:
        return FiniteWord(self.digits[::-1])

    def reflect(self) -> FiniteWord:
        return FiniteWord(tuple(1 - d for d in self.digits))

    def __str__(self):
        return "".join(map(str, self.digits))


def _primitive_root(period: tuple[int, ...]) -> tuple[int, ...]:
    n = len(period)
    for p in range(1, n + 1):
        if n % p == 0 and period[:p] * (n // p) == period:
            return period[:p]
    return period


@dataclass(frozen=True)
class PeriodicWord:
    """``preperiod`` followed by ``period`` repeated forever, kept canonical.

    Canonical means the period is primitive and the preperiod cannot be
    shortened by rotating its last digit into the period, so two instances
    describe the same infinite sequence exactly when they compare equal.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        pre = _check_digits(self.preperiod.digits if isinstance(self.preperiod, FiniteWord) else self.preperiod)
        per = _check_digits(self.period.digits if isinstance(self.period, FiniteWord) else self.period)
        if not per:
            raise ValueError("period must be nonempty")
        per = _primitive_root(per)
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def of(cls, text: str) -> PeriodicWord:
        w = parse_word(text)
        if not isinstance(w, PeriodicWord):
            raise ValueError(f"{text!r} is not an infinite word")
        return w

    def digit(self, i: int) -> int:
        """Digit at 0-based position ``i``."""
        if i < len(self.preperiod):
            return self.preperiod[i]
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> FiniteWord:
        return FiniteWord(tuple(self.digit(i) for i in range(n)))

    def shift(self, n: int = 1) -> PeriodicWord:
        """Drop the first ``n`` digits."""
        pre, per = self.preperiod, self.period
        if n <= len(pre):
            return PeriodicWord(pre[n:], per)
        r = (n - len(pre)) % len(per)
        return PeriodicWord((), per[r:] + per[:r])

    def reflect(self) -> PeriodicWord:
        return PeriodicWord(tuple(1 - d for d in self.preperiod), tuple(1 - d for d in self.period))

    def __str__(self):
        return format_word(self)


Word = Union[FiniteWord, PeriodicWord]


def reflect(w: Word) -> Word:
    return w.reflect()


def format_word(w: Word) -> str:
    if isinstance(w, FiniteWord):
        return str(w)
    pre = "".join(map(str, w.preperiod))
    per = "".join(map(str, w.period))
    if len(per) == 1:
        return f"{pre}{per}^inf"
    return f"{pre}({per})^inf"


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise WordSyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def parse(self) -> Word:
        digits, period = self.word(top=True)
        if self.peek():
            raise WordSyntaxError(f"unexpected {self.peek()!r}", self.pos)
        if period is None:
            return FiniteWord(digits)
        return PeriodicWord(digits, period)

    def word(self, top: bool) -> tuple[tuple[int, ...], tuple[int, ...] | None]:
        out: list[int] = []
        count = 0
        while self.peek() in ("0", "1", "("):
            start = self.pos
            body = self.atom()
            if self.peek() == "^":
                self.pos += 1
                self._skip()
                if self.text.startswith("inf", self.pos):
                    if not top:
                        raise WordSyntaxError("'^inf' only allowed at the end of a word", self.pos)
                    self.pos += 3
                    if not body:
                        raise EmptyPeriod("empty period", start)
                    if self.peek():
                        raise WordSyntaxError("'^inf' must end the word", self.pos)
                    return tuple(out), body
                n = self.integer()
                body = body * n
            elif not body:
                raise WordSyntaxError("empty group", start)
            out.extend(body)
            count += 1
        if count == 0 and (not top or self.peek()):
            raise WordSyntaxError("expected '0', '1' or '('", self.pos)
        return tuple(out), None

    def atom(self) -> tuple[int, ...]:
        ch = self.peek()
        if ch in ("0", "1"):
            self.pos += 1
            return (int(ch),)
        self.expect("(")
        if self.peek() == ")":
            self.pos += 1
            return ()
        body, _ = self.word(top=False)
        self.expect(")")
        return body

    def integer(self) -> int:
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise WordSyntaxError("expected exponent", start)
        return int(self.text[start:self.pos])


def parse_word(text: str) -> Word:
    """Parse word notation; the empty string is the empty finite word."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _digit_poly(digits: tuple[int, ...], inv_q: FieldElement) -> FieldElement:
    """sum_i digits[i] * inv_q^(i+1)."""
    acc = inv_q.field.zero()
    for d in reversed(digits):
        acc = (acc + d) * inv_q
    return acc


def value(w: PeriodicWord, spec: FieldSpec) -> FieldElement:
    """Exact value of ``sum d_i q^-i`` via the geometric closed form."""
    if not isinstance(w, PeriodicWord):
        raise TypeError("finite words have no value; apply them as maps instead")
    q = spec.gen()
    inv_q = q.inverse()
    head = _digit_poly(w.preperiod, inv_q)
    n = len(w.period)
    # period block P(1/q) / (1 - q^-n) == (sum_j d_j q^(n-1-j)) / (q^n - 1)
    block = spec.zero()
    for d in w.period:
        block = block * q + d
    tail = block / (q ** n - 1)
    return head + tail * inv_q ** len(w.preperiod)


def epsilon(k: int) -> PeriodicWord:
    """``(01)^k (10)^inf``."""
    if k < 1:
        raise ValueError("k >= 1")
    return PeriodicWord((0, 1) * k, (1, 0))


def family_word(m: int, k: int, shape: str) -> PeriodicWord:
    """``0 1^(m+1) eps_k`` for ``type01`` and ``1 0^m eps_k`` for ``type10``."""
    if shape == "type01":
        head = (0,) + (1,) * (m + 1)
    elif shape == "type10":
        head = (1,) + (0,) * m
    else:
        raise ValueError(f"unknown shape {shape!r}")
    return FiniteWord(head) + epsilon(k)


def closed_form_family(m: int, k: int, shape: str, spec: FieldSpec) -> FieldElement:
    """Closed-form value of :func:`family_word` without summing digits."""
    if m < 0 or k < 1:
        raise ValueError("need m >= 0 and k >= 1")
    q = spec.gen()
    if shape == "type01":
        num = q ** (m + 2 * k + 2) + q ** (m + 2 * k + 1) - q ** (2 * k + 1) + q - 1
        return num / (q ** (m + 2 * k + 2) * (q * q - 1))
    if shape == "type10":
        num = q ** (m + 2 * k + 2) - q ** (m + 2 * k) + q ** (2 * k) + q - 1
        return num / (q ** (m + 2 * k + 1) * (q * q - 1))
    raise ValueError(f"unknown shape {shape!r}")
