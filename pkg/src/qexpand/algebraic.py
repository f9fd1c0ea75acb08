"""Exact arithmetic in a real algebraic number field Q(q).

Elements are stored in the power basis ``1, q, ..., q^(d-1)`` as an integer
numerator vector over a single positive denominator.  Signs are decided by
evaluating the element on a dyadic enclosure of the designated real root and
tightening the enclosure until zero is excluded; this terminates for nonzero
elements because the minimal polynomial is assumed irreducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from numbers import Rational
from threading import Lock
from typing import Iterable, Sequence


class AlgebraicError(ArithmeticError):
    pass


class NoRoot(AlgebraicError):
    pass


class AmbiguousRoot(AlgebraicError):
    pass


class FieldMismatch(AlgebraicError):
    pass


class DivisionByZero(AlgebraicError, ZeroDivisionError):
    pass


# ---------------------------------------------------------------------------
# rational polynomials (ascending coefficient lists of Fractions)
# ---------------------------------------------------------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = [Fraction(c) for c in a]
    b = _trim([Fraction(c) for c in b])
    if not b:
        raise DivisionByZero("polynomial division by zero")
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(_trim(a)) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        quot[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a.pop()
    return _trim(quot), a


def _poly_deriv(p: Sequence) -> list:
    return [i * c for i, c in enumerate(p)][1:]


def _poly_eval(p: Sequence, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _poly_gcd(a: list, b: list) -> list:
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    while b:
        a, b = b, _poly_divmod(a, b)[1]
    if not a:
        return a
    return [c / a[-1] for c in a]


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def sturm_sequence(poly_desc: Sequence[int]) -> list[list[Fraction]]:
    """Sturm chain of a polynomial given in descending coefficient order."""
    p0 = _trim([Fraction(c) for c in reversed(poly_desc)])
    chain = [p0, _trim(_poly_deriv(p0))]
    while chain[-1]:
        rem = _poly_divmod(chain[-2], chain[-1])[1]
        if not rem:
            break
        chain.append([-c for c in rem])
    return [p for p in chain if p]


def _variations(chain: list[list[Fraction]], x: Fraction) -> int:
    signs = [s for s in (_sign(_poly_eval(p, x)) for p in chain) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(poly_desc: Sequence[int], lo, hi) -> int:
    """Number of distinct real roots in the half-open interval ``(lo, hi]``."""
    chain = sturm_sequence(poly_desc)
    return _variations(chain, Fraction(lo)) - _variations(chain, Fraction(hi))


def _squarefree(poly_desc: Sequence[int]) -> tuple[int, ...]:
    asc = [Fraction(c) for c in reversed(poly_desc)]
    g = _poly_gcd(asc, _poly_deriv(asc))
    if len(g) > 1:
        asc = _poly_divmod(asc, g)[0]
    den = 1
    for c in asc:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in asc]
    g = 0
    for c in ints:
        g = gcd(g, c)
    ints = [c // g for c in ints]
    if ints[-1] < 0:
        ints = [-c for c in ints]
    return tuple(reversed(ints))


def isolate_root(minpoly: Sequence[int], search_range) -> tuple[Fraction, Fraction]:
    """Return ``(lo, hi)`` inside ``search_range`` holding exactly one real root.

    The endpoints are not roots and the (square-free part of the) polynomial
    takes strictly opposite signs at them.  Raises :class:`NoRoot` when the
    range holds no root and :class:`AmbiguousRoot` when it holds several.
    """
    poly = _squarefree(minpoly)
    if len(poly) < 2:
        raise NoRoot("constant polynomial has no roots")
    lo, hi = (Fraction(v) for v in search_range)
    if not lo < hi:
        raise ValueError("empty search range")
    asc = list(reversed(poly))
    n = count_roots(poly, lo, hi) + (_poly_eval(asc, lo) == 0)
    if n == 0:
        raise NoRoot(f"no real root of {list(minpoly)} in [{lo}, {hi}]")
    if n > 1:
        raise AmbiguousRoot(f"{n} real roots of {list(minpoly)} in [{lo}, {hi}]")
    for r in (lo, hi):
        if _poly_eval(asc, r) == 0:
            return _around_rational_root(poly, r)
    # square-free with one root inside: endpoint signs differ
    return lo, hi


def _around_rational_root(poly: tuple[int, ...], r: Fraction) -> tuple[Fraction, Fraction]:
    asc = list(reversed(poly))
    delta = Fraction(1)
    while True:
        a, b = r - delta, r + delta
        if _poly_eval(asc, a) and _poly_eval(asc, b) and count_roots(poly, a, b) == 1:
            return a, b
        delta /= 2


# ---------------------------------------------------------------------------
# field specification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """A real root of an integer polynomial, used as the generator of Q(q).

    ``minpoly`` is in descending order, e.g. ``(1, 0, -2, -1, -1)`` for
    ``x^4 - 2x^2 - x - 1``.  It must be irreducible over Q; this is assumed,
    not checked.
    """

    minpoly: tuple[int, ...]
    isolating_interval: tuple[Fraction, Fraction]
    name: str = "q"
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)
    _lock: Lock = field(default_factory=Lock, compare=False, hash=False, repr=False)

    def __post_init__(self):
        poly = tuple(int(c) for c in self.minpoly)
        while poly and poly[0] == 0:
            poly = poly[1:]
        if len(poly) < 2:
            raise ValueError("minimal polynomial must be nonconstant")
        lo, hi = (Fraction(v) for v in self.isolating_interval)
        object.__setattr__(self, "minpoly", poly)
        object.__setattr__(self, "isolating_interval", (lo, hi))
        asc = self._asc
        if not _sign(_poly_eval(asc, lo)) * _sign(_poly_eval(asc, hi)) < 0:
            raise ValueError(f"{self.name}: minpoly does not change sign on [{lo}, {hi}]")

    @classmethod
    def from_range(cls, minpoly: Sequence[int], search_range, name: str = "q") -> FieldSpec:
        return cls(tuple(minpoly), isolate_root(minpoly, search_range), name)

    @property
    def degree(self) -> int:
        return len(self.minpoly) - 1

    @property
    def _asc(self) -> tuple[int, ...]:
        return tuple(reversed(self.minpoly))

    # element constructors
    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field.name} vs {self.name}")
            return value
        return FieldElement.from_coeffs(self, [value])

    def gen(self) -> FieldElement:
        if self.degree == 1:
            return self(Fraction(-self.minpoly[1], self.minpoly[0]))
        return FieldElement.from_coeffs(self, [0, 1])

    def zero(self) -> FieldElement:
        return self(0)

    def one(self) -> FieldElement:
        return self(1)

    # root refinement --------------------------------------------------------
    def _refined(self, bits: int) -> tuple[Fraction, Fraction]:
        """Root enclosure ``[lo, hi]`` of width at most ``2^-bits`` (cached)."""
        with self._lock:
            lo, hi = self._cache.get("root", self.isolating_interval)
            asc = self._asc
            if len(asc) == 2:
                lo = hi = Fraction(-asc[0], asc[1])
            target = Fraction(1, 1 << bits)
            s_lo = _sign(_poly_eval(asc, lo))
            while hi - lo > target:
                mid = (lo + hi) / 2
                s_mid = _sign(_poly_eval(asc, mid))
                if s_mid == 0:
                    lo = hi = mid
                elif s_mid == s_lo:
                    lo = mid
                else:
                    hi = mid
            self._cache["root"] = (lo, hi)
            return lo, hi

    def power_bounds(self, bits: int) -> tuple[tuple[int, int], ...]:
        """Integer bounds ``L_i <= q^i * 2^bits <= U_i`` for ``i < degree``."""
        key = ("pow", bits)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        d = self.degree
        lo0, hi0 = self.isolating_interval
        mag = max(abs(lo0), abs(hi0), Fraction(1))
        extra = d * (int(mag).bit_length() + 1) + d.bit_length() + 4
        lo, hi = self._refined(bits + extra)
        if lo <= 0 <= hi and lo != hi:
            lo, hi = self._refined(bits + extra + 64)
        scale = 1 << bits
        out = []
        for i in range(d):
            p, r = lo ** i, hi ** i
            pl, pu = min(p, r), max(p, r)
            out.append(((pl * scale).__floor__(), (pu * scale).__ceil__()))
        result = tuple(out)
        self._cache[key] = result
        return result

    def table_row(self, digits: int = 20) -> str:
        lo, hi = self.isolating_interval
        return f"{self.name}\t{list(self.minpoly)}\t[{lo}, {hi}]\t{to_decimal(self.gen(), digits)}"


# ---------------------------------------------------------------------------
# field elements
# ---------------------------------------------------------------------------

def _reduce(spec: FieldSpec, nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    asc = spec._asc
    d = len(asc) - 1
    lc = asc[-1]
    nums = list(nums)
    for top in range(len(nums) - 1, d - 1, -1):
        t = nums[top]
        if not t:
            continue
        if lc != 1:
            nums = [lc * c for c in nums]
            den *= lc
        # nums[top] is now a multiple of lc
        t = nums[top] // lc
        shift = top - d
        for i in range(d + 1):
            nums[shift + i] -= t * asc[i]
    nums = nums[:d] + [0] * (d - len(nums))
    if den < 0:
        nums = [-c for c in nums]
        den = -den
    g = den
    for c in nums:
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        nums = [c // g for c in nums]
        den //= g
    return tuple(nums), den


class FieldElement:
    """Immutable element of Q(q) for a given :class:`FieldSpec`."""

    __slots__ = ("field", "_nums", "_den", "_hash")

    def __init__(self, spec: FieldSpec, nums: tuple[int, ...], den: int = 1, _reduced: bool = False):
        if not _reduced:
            nums, den = _reduce(spec, list(nums), den)
        self.field = spec
        self._nums = nums
        self._den = den
        self._hash = None

    @classmethod
    def from_coeffs(cls, spec: FieldSpec, coeffs: Iterable) -> FieldElement:
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        return cls(spec, tuple(int(c * den) for c in fr), den)

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._nums)

    def is_zero(self) -> bool:
        return not any(self._nums)

    def is_rational(self) -> bool:
        return not any(self._nums[1:])

    # coercion ------------------------------------------------------------
    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field.name} vs {other.field.name}")
            return other
        if isinstance(other, (int, Rational)):
            return FieldElement.from_coeffs(self.field, [other])
        return NotImplemented

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self._den, o._den
        nums = [a * d2 + b * d1 for a, b in zip(self._nums, o._nums)]
        return FieldElement(self.field, tuple(nums), d1 * d2)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, tuple(-c for c in self._nums), self._den, _reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self._nums, o._nums
        prod = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        return FieldElement(self.field, tuple(prod), self._den * o._den)

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        # extended Euclid: s*a + t*m = g with g a nonzero constant
        m = [Fraction(c) for c in self.field._asc]
        a = _trim([Fraction(c, self._den) for c in self._nums])
        r0, r1 = m, a
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            prod = _poly_mul(q, s1)
            s_new = _poly_sub(s0, prod)
            r0, r1 = r1, r
            s0, s1 = s1, s_new
            if not r1:
                raise DivisionByZero("element shares a factor with the minimal polynomial")
        inv = [c / r1[0] for c in s1]
        return FieldElement.from_coeffs(self.field, inv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.is_zero():
            raise DivisionByZero("division by zero in the field")
        if o.is_rational():
            c = Fraction(o._nums[0], o._den)
            return FieldElement(self.field, tuple(n * c.denominator for n in self._nums), self._den * c.numerator)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self._nums == other._nums and self._den == other._den
        if isinstance(other, (int, Rational)):
            return self.is_rational() and Fraction(self._nums[0], self._den) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._nums[0], self._den))
            else:
                self._hash = hash((self.field.minpoly, self._nums, self._den))
        return self._hash

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare FieldElement with {type(other).__name__}")
        return sign(self - o)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self):
        lo, hi = enclose(self, 64)
        return float((lo + hi) / 2)

    def __repr__(self):
        return f"FieldElement({self.field.name}, {[str(c) for c in self.coeffs]})"

    def __str__(self):
        return to_decimal(self, 20)


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


# ---------------------------------------------------------------------------
# sign, enclosure, decimals
# ---------------------------------------------------------------------------

def _scaled_bounds(a: FieldElement, bits: int) -> tuple[int, int]:
    """Integer bounds on ``a * den * 2^bits``."""
    bounds = a.field.power_bounds(bits)
    lo = hi = 0
    for c, (pl, pu) in zip(a._nums, bounds):
        if c > 0:
            lo += c * pl
            hi += c * pu
        elif c < 0:
            lo += c * pu
            hi += c * pl
    return lo, hi


def enclose(a: FieldElement, bits: int) -> tuple[Fraction, Fraction]:
    """Rational interval containing ``a``; width shrinks like ``2^-bits``."""
    lo, hi = _scaled_bounds(a, bits)
    scale = a._den << bits
    return Fraction(lo, scale), Fraction(hi, scale)


def sign(a: FieldElement) -> int:
    """Exact sign of ``a`` evaluated at the designated real root."""
    if a.is_zero():
        return 0
    if a.is_rational():
        return _sign(a._nums[0])
    bits = 64
    while True:
        lo, hi = _scaled_bounds(a, bits)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        bits *= 2


def _format_scaled(n: int, digits: int) -> str:
    neg = n < 0
    ip, fp = divmod(abs(n), 10 ** digits)
    return f"{'-' if neg else ''}{ip}.{fp:0{digits}d}"


def to_decimal(a: FieldElement, digits: int) -> str:
    """Correctly rounded (half-to-even) decimal string with ``digits`` places."""
    if digits < 1:
        raise ValueError("digits must be positive")
    scale10 = 10 ** digits
    if a.is_rational():
        return _format_scaled(round(Fraction(a._nums[0], a._den) * scale10), digits)
    bits = max(64, int(digits * 3.33) + 16)
    while True:
        lo, hi = _scaled_bounds(a, bits)
        den = a._den << bits
        # round(x) for x = v/den, v in [lo, hi]: floor((2*v*10^d + den) / (2*den))
        r_lo = (2 * lo * scale10 + den) // (2 * den)
        r_hi = (2 * hi * scale10 + den) // (2 * den)
        if r_lo == r_hi:
            return _format_scaled(r_lo, digits)
        bits *= 2


def to_sig_figs(a: FieldElement, figs: int) -> str:
    """Decimal with ``figs`` significant figures (for values in (0.1, 10))."""
    s = to_decimal(a, figs + 4)
    lead = len(s.lstrip("-").split(".")[0].lstrip("0"))
    places = figs - lead if lead else figs
    return to_decimal(a, max(places, 1))


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

# All polynomials below are irreducible over Q (assumed; see module docstring).
_REGISTRY_POLYS = {
    "q2": (1, 0, -2, -1, -1),
    "qf": (1, -2, 1, -1),
    "qG": (1, -1, -1),
    "qaleph0": (1, 0, -1, -1, -2, -1, -1),
}


def _build_registry() -> dict[str, FieldSpec]:
    return {name: FieldSpec.from_range(poly, (1, 2), name) for name, poly in _REGISTRY_POLYS.items()}


CONSTANTS: dict[str, FieldSpec] = _build_registry()
Q2: FieldSpec = CONSTANTS["q2"]


def constants_table(digits: int = 20) -> str:
    lines = ["name\tminpoly\tisolating_interval\tdecimal"]
    lines += [spec.table_row(digits) for spec in CONSTANTS.values()]
    return "\n".join(lines)


def parse_base(base: str | None = None, minpoly: str | None = None, interval: str | None = None) -> FieldSpec:
    """Resolve a registry name or a raw ``"c0,c1,..."`` polynomial (descending) to a FieldSpec."""
    if minpoly:
        coeffs = [int(c) for c in minpoly.replace(" ", "").split(",") if c]
        rng = (1, 2) if not interval else tuple(Fraction(v) for v in interval.split(","))
        spec = FieldSpec.from_range(coeffs, rng, name=base or "custom")
    else:
        name = base or "q2"
        if name not in CONSTANTS:
            raise KeyError(f"unknown base {name!r}; choose from {sorted(CONSTANTS)}")
        spec = CONSTANTS[name]
    g = spec.gen()
    if not (1 < g < 2):
        raise ValueError(f"base {spec.name} is not in (1, 2)")
    return spec


def compare_roots(poly_a: Sequence[int], iv_a, poly_b: Sequence[int], iv_b) -> int:
    """Compare the root of ``poly_a`` isolated in ``iv_a`` with that of ``poly_b`` in ``iv_b``.

    Returns -1, 0 or +1.  Equality is decided exactly through the gcd of
    the two polynomials; otherwise both intervals are bisected until they
    separate.
    """
    pa, pb = _squarefree(poly_a), _squarefree(poly_b)
    asc_a, asc_b = list(reversed(pa)), list(reversed(pb))
    (a_lo, a_hi), (b_lo, b_hi) = (tuple(map(Fraction, iv_a)), tuple(map(Fraction, iv_b)))
    g = _poly_gcd([Fraction(c) for c in asc_a], [Fraction(c) for c in asc_b])
    if len(g) > 1:
        lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
        if lo <= hi:
            g_desc = [int(c * _lcm_den(g)) for c in reversed(g)]
            n = count_roots(g_desc, lo, hi) + (_poly_eval(g, lo) == 0)
            if n and count_roots(pa, lo, hi) + (_poly_eval(asc_a, lo) == 0) >= 1 \
                    and count_roots(pb, lo, hi) + (_poly_eval(asc_b, lo) == 0) >= 1:
                # a common root lies where both isolated roots live; it is both of them
                return 0

    def bisect(asc, lo, hi):
        mid = (lo + hi) / 2
        s_lo, s_mid = _sign(_poly_eval(asc, lo)), _sign(_poly_eval(asc, mid))
        if s_mid == 0:
            return mid, mid
        return (mid, hi) if s_mid == s_lo else (lo, mid)

    while True:
        if a_hi < b_lo:
            return -1
        if b_hi < a_lo:
            return 1
        if a_hi - a_lo >= b_hi - b_lo:
            a_lo, a_hi = bisect(asc_a, a_lo, a_hi)
        else:
            b_lo, b_hi = bisect(asc_b, b_lo, b_hi)


def _lcm_den(coeffs) -> int:
    den = 1
    for c in coeffs:
        den = den * Fraction(c).denominator // gcd(den, Fraction(c).denominator)
    return den
