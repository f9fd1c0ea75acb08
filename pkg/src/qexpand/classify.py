"""Membership and classification at the base q2 (root of x^4 = 2x^2 + x + 1).

Finiteness facts used here: at q2 a point has finitely many expansions
exactly when it has one or two (q2 is below the smallest base admitting
three), so "finite" means membership in M1 (unique expansion) or M2 (two).
M1 and M2 are decided from the forced orbit and cross-checked against the
explicit word families; any disagreement raises :class:`ConsistencyError`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Literal

from .algebraic import Q2, FieldElement, sign, to_decimal
from .dynamics import (
    CountResult,
    DomainViolation,
    SystemContext,
    apply_digit,
    apply_word,
    context,
    count_expansions,
)
from .words import FiniteWord, PeriodicWord, closed_form_family, epsilon, family_word, format_word, value


class Inconclusive(ArithmeticError):
    pass


class ConsistencyError(RuntimeError):
    """Two independent decision routes disagreed."""


class NotFound(LookupError):
    pass


CTX: SystemContext = context(Q2)
FORCED_DEPTH = 512


def _ctx(ctx: SystemContext | None) -> SystemContext:
    if ctx is None:
        return CTX
    if ctx.field != Q2:
        raise ValueError("classification is only implemented at q2")
    return ctx


@lru_cache(maxsize=None)
def _v(text: str) -> FieldElement:
    return value(PeriodicWord.of(text), Q2)


def j_interval() -> tuple[FieldElement, FieldElement]:
    return _v("(0110)^inf"), _v("(1001)^inf")


def in_j(x: FieldElement) -> bool:
    lo, hi = j_interval()
    return lo <= x <= hi


# the two points of A1, each with its pair of expansions
A1_EXPANSIONS: dict[str, tuple[str, str]] = {
    "01(10)^inf": ("01(10)^inf", "1000(01)^inf"),
    "10(01)^inf": ("0111(10)^inf", "10(01)^inf"),
}


def a1_points() -> tuple[FieldElement, FieldElement]:
    return tuple(_v(w) for w in A1_EXPANSIONS)  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# forced orbit (outside the switch region only one digit is admissible)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ForcedOrbit:
    outcome: Literal["cycle", "switch", "depth"]
    digits: tuple[int, ...]
    loop_start: int | None = None
    hit: FieldElement | None = None


def forced_orbit(x: FieldElement, ctx: SystemContext | None = None, depth: int = FORCED_DEPTH) -> ForcedOrbit:
    """Follow forced digits until the switch region is hit or a value repeats."""
    ctx = _ctx(ctx)
    if not ctx.in_domain(x):
        raise DomainViolation("x must lie in [0, 1/(q-1)]")
    seen: dict[FieldElement, int] = {}
    digits: list[int] = []
    v = x
    while len(digits) <= depth:
        if v in seen:
            return ForcedOrbit("cycle", tuple(digits), seen[v])
        allowed = ctx.allowed_digits(v)
        if len(allowed) == 2:
            return ForcedOrbit("switch", tuple(digits), hit=v)
        seen[v] = len(digits)
        s = allowed[0]
        digits.append(s)
        v = ctx.q * v - s
    return ForcedOrbit("depth", tuple(digits))


# ---------------------------------------------------------------------------
# M1
# ---------------------------------------------------------------------------

def _m1_family_match(x: FieldElement, ctx: SystemContext) -> PeriodicWord | None:
    """Match against {0^inf, 1^inf, 0^k(10)^inf, 1^k(01)^inf}."""
    if x == 0:
        return PeriodicWord((), (0,))
    if x == ctx.domain_hi:
        return PeriodicWord((), (1,))
    inv_q = 1 / ctx.q
    base = _v("(10)^inf")
    for t, flip in ((x, False), (ctx.domain_hi - x, True)):
        # q^-k * base decreases strictly to 0
        y, k = base, 0
        while y >= t:
            if y == t:
                w = PeriodicWord((0,) * k, (1, 0))
                return w.reflect() if flip else w
            y, k = y * inv_q, k + 1
    return None


def m1_member(x: FieldElement, ctx: SystemContext | None = None) -> PeriodicWord | None:
    """The unique expansion of ``x`` if it has exactly one, else ``None``."""
    ctx = _ctx(ctx)
    orbit = forced_orbit(x, ctx)
    family = _m1_family_match(x, ctx)
    if orbit.outcome == "depth":
        return family
    dyn = None
    if orbit.outcome == "cycle":
        dyn = PeriodicWord(orbit.digits[:orbit.loop_start], orbit.digits[orbit.loop_start:])
    if dyn != family:
        raise ConsistencyError(f"M1 routes disagree at {to_decimal(x, 12)}: dynamics {dyn}, family {family}")
    return dyn


# ---------------------------------------------------------------------------
# M2
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _eps_value(k: int) -> FieldElement:
    return value(epsilon(k), Q2)


def _first_index(y: FieldElement, g: Callable[[int], FieldElement], limit: FieldElement,
                 k_min: int = 1) -> tuple[str, int | None]:
    """Locate ``y`` in a strictly monotone sequence ``g(k_min), g(k_min+1), ... -> limit``.

    Returns ``("equal", k)``, ``("between", k)`` meaning strictly between
    ``g(k)`` and ``g(k+1)``, ``("limit", None)``, or ``("outside", None)``.
    """
    first = g(k_min)
    up = sign(limit - first)  # +1: increasing sequence
    gap = y - limit
    if gap == 0:
        return "limit", None
    # closure is between first and limit
    if sign(y - first) == -up or sign(gap) == up:
        return ("equal", k_min) if y == first else ("outside", None)
    if y == first:
        return "equal", k_min
    # find hi with g(hi) past y (strictly closer to the limit)
    lo, hi = k_min, k_min + 1
    while sign(g(hi) - y) == -up:
        lo, hi = hi, 2 * hi
    if g(hi) == y:
        return "equal", hi
    # invariant: g(lo) before y, g(hi) past y
    while hi - lo > 1:
        mid = (lo + hi) // 2
        s = sign(g(mid) - y)
        if s == 0:
            return "equal", mid
        if s == -up:
            lo = mid
        else:
            hi = mid
    return "between", lo


def _m2_family_match(x: FieldElement, ctx: SystemContext) -> tuple[str, int, int] | None:
    """Match against 0^m eps_k, 1^m eps_k and their reflections (m >= 0, k >= 1)."""
    D = ctx.domain_hi
    e_lim = _v("(01)^inf")
    r_lim = D - e_lim

    def e(k):
        return _eps_value(k)

    def r(k):
        return D - _eps_value(k)

    combos = (
        ("0^m eps_k", x, e, e_lim),
        ("1^m eps_k", D - x, r, r_lim),
        ("refl(0^m eps_k)", D - x, e, e_lim),
        ("refl(1^m eps_k)", x, r, r_lim),
    )
    for name, t, g, lim in combos:
        if t <= 0:
            continue
        top = max(g(1), lim)
        y, m = t, 0
        while y <= top:
            status, k = _first_index(y, g, lim)
            if status == "equal":
                return name, m, k
            y, m = y * ctx.q, m + 1
    return None


def m2_member(x: FieldElement, ctx: SystemContext | None = None) -> tuple[PeriodicWord, PeriodicWord] | None:
    """Both expansions of ``x`` if it has exactly two, else ``None``.

    Decided by the forced orbit: ``x`` has two expansions iff its first
    visit to the switch region lands exactly on one of the two A1 points.
    """
    ctx = _ctx(ctx)
    orbit = forced_orbit(x, ctx)
    if orbit.outcome == "depth":
        raise Inconclusive(f"forced orbit of {to_decimal(x, 12)} unresolved after {FORCED_DEPTH} digits")
    dyn = None
    if orbit.outcome == "switch":
        for point, (w0, w1) in A1_EXPANSIONS.items():
            if orbit.hit == _v(point):
                head = FiniteWord(orbit.digits)
                dyn = (head + PeriodicWord.of(w0), head + PeriodicWord.of(w1))
                break
    family = _m2_family_match(x, ctx)
    if (dyn is None) != (family is None):
        raise ConsistencyError(f"M2 routes disagree at {to_decimal(x, 12)}: dynamics {dyn}, family {family}")
    return dyn


def m2_family(x: FieldElement) -> tuple[str, int, int] | None:
    """Which M2 family (name, m, k) contains ``x``, if any."""
    return _m2_family_match(x, CTX)


# ---------------------------------------------------------------------------
# A1 / A2 / A3
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImageEvidence:
    digit: int
    finite: bool
    membership: str  # "M1", "M2" or "infinite"
    words: tuple[PeriodicWord, ...] = ()
    witness: CountResult | None = None

    def to_dict(self) -> dict:
        out = {"digit": self.digit, "finite": self.finite, "membership": self.membership}
        if self.words:
            out["expansions"] = [format_word(w) for w in self.words]
        if self.witness is not None:
            out["count"] = self.witness.to_dict()
        return out


@dataclass(frozen=True)
class BranchClass:
    kind: Literal["A1", "A2", "A3", "NotInSwitch"]
    evidence: tuple[ImageEvidence, ...] = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "evidence": [e.to_dict() for e in self.evidence]}


def _image_evidence(y: FieldElement, s: int, ctx: SystemContext, certify: bool) -> ImageEvidence:
    w1 = m1_member(y, ctx)
    if w1 is not None:
        return ImageEvidence(s, True, "M1", (w1,))
    w2 = m2_member(y, ctx)
    if w2 is not None:
        return ImageEvidence(s, True, "M2", w2)
    witness = None
    if certify:
        res = count_expansions(y, ctx, max_depth=24, max_nodes=400)
        if res.kind == "exact":
            raise ConsistencyError(f"{to_decimal(y, 12)} is outside M1 and M2 but counts {res}")
        if res.kind == "infinite":
            witness = res
    return ImageEvidence(s, False, "infinite", (), witness)


def branch_class(x: FieldElement, ctx: SystemContext | None = None, certify: bool = True) -> BranchClass:
    """Classify a point of the switch region by the finiteness of its two images."""
    ctx = _ctx(ctx)
    if not ctx.in_switch(x):
        return BranchClass("NotInSwitch")
    ev = tuple(_image_evidence(apply_digit(x, s, ctx), s, ctx, certify) for s in (0, 1))
    n_finite = sum(e.finite for e in ev)
    return BranchClass({2: "A1", 1: "A2", 0: "A3"}[n_finite], ev)


def solve_a1_equation(j_max: int, k_max: int) -> list[tuple[int, int]]:
    """All ``(j, k)`` with ``q2^-j + q2^-k + q2^2 - q2 - 2 == 0`` exactly."""
    q = Q2.gen()
    inv = [Q2.one()]
    inv_q = q.inverse()
    for _ in range(max(j_max, k_max)):
        inv.append(inv[-1] * inv_q)
    c = q * q - q - 2
    return [(j, k) for j in range(1, j_max + 1) for k in range(1, k_max + 1)
            if (inv[j] + inv[k] + c).is_zero()]


# ---------------------------------------------------------------------------
# A2 inside J: the families E_m and their reflections
# ---------------------------------------------------------------------------

EXCLUDED_WORDS = frozenset({family_word(1, 1, "type10")})  # (10 eps_1), removed from E_1 and E_3 as printed
LIMIT_M = (2, 4)


@dataclass(frozen=True)
class FamilyPoint:
    family: str  # "E1".."E4"
    shape: Literal["type01", "type10", "limit"]
    m: int
    k: int | None
    reflected: bool
    word: PeriodicWord
    value: FieldElement = field(compare=False)

    @property
    def label(self) -> str:
        if self.shape == "limit":
            base = f"01^{self.m}(10)^inf"
        elif self.shape == "type01":
            base = f"01^{self.m + 1} eps_{self.k}"
        else:
            base = f"10^{self.m} eps_{self.k}"
        return f"refl({base})" if self.reflected else base

    def mirror(self) -> FamilyPoint:
        return FamilyPoint(self.family, self.shape, self.m, self.k, not self.reflected,
                           self.word.reflect(), CTX.domain_hi - self.value)

    def to_dict(self) -> dict:
        return {"family": self.family, "label": self.label, "m": self.m, "k": self.k,
                "reflected": self.reflected, "word": format_word(self.word),
                "decimal": to_decimal(self.value, 20)}


def family_point(m: int, k: int | None, shape: str, reflected: bool = False) -> FamilyPoint:
    if shape == "limit":
        word = PeriodicWord((0,) + (1,) * m, (1, 0))
        val = value(word, Q2)
    else:
        word = family_word(m, k, shape)
        val = _family_value(m, shape, k)
    p = FamilyPoint(f"E{m}", shape, m, k, False, word, val)  # type: ignore[arg-type]
    return p.mirror() if reflected else p


@lru_cache(maxsize=None)
def _family_value(m: int, shape: str, k: int) -> FieldElement:
    return closed_form_family(m, k, shape, Q2)


def _family_limit(m: int, shape: str) -> FieldElement:
    if shape == "type01":
        return _v(f"0{'1' * m}(10)^inf")
    return _v(f"1{'0' * m}(01)^inf")


def a2_in_j_members(k_max: int = 30, verify: bool = True) -> list[FamilyPoint]:
    """Enumerate A2 ∩ J for parameters ``k <= k_max``, both orientations.

    With ``verify`` each point is checked exactly to lie in J and the switch
    region and to classify as A2; a failure raises :class:`ConsistencyError`.
    """
    if k_max < 1:
        raise ValueError("k_max >= 1")
    base: list[FamilyPoint] = []
    for m in range(1, 5):
        if m in LIMIT_M:
            base.append(family_point(m, None, "limit"))
        for k in range(1, k_max + 1):
            for shape in ("type01", "type10"):
                p = family_point(m, k, shape)
                if m in (1, 3) and p.word in EXCLUDED_WORDS:
                    continue
                base.append(p)
    out = base + [p.mirror() for p in base]
    if verify:
        for p in out:
            if p.value != value(p.word, Q2):
                raise ConsistencyError(f"{p.label}: closed form differs from word value")
            if not in_j(p.value) or not CTX.in_switch(p.value):
                raise ConsistencyError(f"{p.label} is not in J and the switch region")
            bc = branch_class(p.value, certify=False)
            if bc.kind != "A2":
                raise ConsistencyError(f"{p.label} classifies as {bc.kind}, expected A2")
    return out


# ---------------------------------------------------------------------------
# the cover H and the region table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoverInterval:
    m: int
    column: int  # 1: [refl(10^m eps_1), 01^(m+1) eps_1]; 2: [refl(01^(m+1) eps_1), 10^m eps_1]
    lo: FieldElement
    hi: FieldElement
    lo_word: PeriodicWord
    hi_word: PeriodicWord

    def contains(self, x: FieldElement) -> bool:
        return self.lo <= x <= self.hi

    def to_dict(self, figs: int = 6) -> dict:
        return {"m": self.m, "column": self.column,
                "lo": to_decimal(self.lo, figs), "hi": to_decimal(self.hi, figs),
                "lo_word": format_word(self.lo_word), "hi_word": format_word(self.hi_word)}


@dataclass(frozen=True)
class RegionTable:
    j: tuple[FieldElement, FieldElement]
    h: tuple[CoverInterval, ...]

    def in_h(self, x: FieldElement) -> CoverInterval | None:
        return next((iv for iv in self.h if iv.contains(x)), None)

    def to_dict(self) -> dict:
        return {"J": [to_decimal(v, 6) for v in self.j], "H": [iv.to_dict() for iv in self.h]}

    def format_table(self) -> str:
        rows = ["m | [refl(10^m eps_1), 01^(m+1) eps_1] | [refl(01^(m+1) eps_1), 10^m eps_1]"]
        for m in range(1, 5):
            a, b = (iv for iv in self.h if iv.m == m)
            rows.append(f"{m} | [{to_decimal(a.lo, 6)}, {to_decimal(a.hi, 6)}] "
                        f"| [{to_decimal(b.lo, 6)}, {to_decimal(b.hi, 6)}]")
        return "\n".join(rows)


@lru_cache(maxsize=1)
def h_cover() -> RegionTable:
    ivs = []
    for m in range(1, 5):
        w01 = family_word(m, 1, "type01")
        w10 = family_word(m, 1, "type10")
        for col, (lo_w, hi_w) in ((1, (w10.reflect(), w01)), (2, (w01.reflect(), w10))):
            lo, hi = value(lo_w, Q2), value(hi_w, Q2)
            if not lo < hi:
                raise ConsistencyError(f"empty cover interval for m={m}")
            ivs.append(CoverInterval(m, col, lo, hi, lo_w, hi_w))
    return RegionTable(j_interval(), tuple(ivs))


# ---------------------------------------------------------------------------
# exact membership in A2 ∩ J
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class A2Decision:
    member: bool
    match: str | None
    record: tuple[dict, ...]

    def __bool__(self):
        return self.member


def a2_member_exact(x: FieldElement, ctx: SystemContext | None = None) -> A2Decision:
    """Decide ``x ∈ A2 ∩ J`` exactly.

    Every family ``k -> value`` is strictly monotone with a known limit, so
    at most one ``k`` can match; it is bracketed by doubling and bisection
    using exact comparisons only.  The record lists, per family, how ``x``
    was matched or excluded.
    """
    ctx = _ctx(ctx)
    if not in_j(x):
        raise ValueError(f"{to_decimal(x, 12)} is not in J")
    D = ctx.domain_hi
    record: list[dict] = []
    match = None
    for m in range(1, 5):
        for shape in ("type01", "type10"):
            for refl in (False, True):
                name = ("refl(" if refl else "") + (f"01^{m + 1} eps_k" if shape == "type01" else f"10^{m} eps_k") + (")" if refl else "")
                if refl:
                    def g(k, m=m, shape=shape):
                        return D - _family_value(m, shape, k)
                    lim = D - _family_limit(m, shape)
                else:
                    def g(k, m=m, shape=shape):
                        return _family_value(m, shape, k)
                    lim = _family_limit(m, shape)
                status, k = _first_index(x, g, lim)
                entry = {"family": name, "status": status}
                if status == "equal":
                    entry["k"] = k
                    if m in (1, 3) and family_word(m, k, shape) in EXCLUDED_WORDS:
                        entry["status"] = "excluded"
                    else:
                        match = match or f"{name} k={k}"
                elif status == "between":
                    entry["k"] = [k, k + 1]
                    entry["bracket"] = [to_decimal(g(k), 8), to_decimal(g(k + 1), 8)]
                elif status == "limit":
                    is_member = shape == "type01" and m in LIMIT_M
                    entry["status"] = "limit-member" if is_member else "limit-excluded"
                    if is_member:
                        match = match or f"{name} limit"
                else:
                    lo, hi = min(g(1), lim), max(g(1), lim)
                    entry["closure"] = [to_decimal(lo, 8), to_decimal(hi, 8)]
                record.append(entry)
    return A2Decision(match is not None, match, tuple(record))


# ---------------------------------------------------------------------------
# escape certificates
# ---------------------------------------------------------------------------

def paper_escape_word(p: FamilyPoint) -> FiniteWord | None:
    """Known escape word (composition order) for a non-reflected family point."""
    m, k = p.m, p.k
    if p.shape == "limit":
        return {2: FiniteWord.of("001"), 4: FiniteWord.of("1001")}.get(m)
    if p.shape == "type01":
        if m == 1:
            return FiniteWord((1, 0) * (k - 1) + (0, 0, 0, 1))
        if m == 2:
            return FiniteWord.of("001")
        if m == 3:
            return FiniteWord((1, 0) * (k + 1) + (0, 1))
        if m == 4:
            return FiniteWord.of("1001")
    else:
        if m == 1 and k >= 2:
            return FiniteWord((1, 0) * (k - 2) + (1, 1, 1, 1, 0))
        if m == 2:
            return FiniteWord.of("110")
        if m == 3:
            return FiniteWord((1, 0) * k + (1, 1, 0))
        if m == 4:
            return FiniteWord.of("0110")
    return None


@dataclass(frozen=True)
class EscapeCertificate:
    start: FamilyPoint
    word: FiniteWord  # composition order: rightmost digit acts first
    landing: FieldElement
    in_j: tuple[int, int]  # signs of landing - J_lo and J_hi - landing
    not_in_a2: A2Decision
    source: str  # paper | search | reflected

    def verify(self) -> bool:
        """Recheck everything from scratch with exact arithmetic."""
        landing = apply_word(self.start.value, self.word, CTX, "paper")
        if landing != self.landing:
            return False
        lo, hi = j_interval()
        if not (sign(landing - lo) >= 0 and sign(hi - landing) >= 0):
            return False
        return not a2_member_exact(landing).member

    def to_dict(self) -> dict:
        return {
            "start": self.start.to_dict(),
            "word": str(self.word),
            "order": "paper",
            "landing": to_decimal(self.landing, 20),
            "landing_coeffs": [str(c) for c in self.landing.coeffs],
            "in_J": list(self.in_j),
            "in_H": _h_label(self.landing),
            "not_in_A2": list(self.not_in_a2.record),
            "source": self.source,
        }


def _h_label(x: FieldElement) -> str | None:
    iv = h_cover().in_h(x)
    return None if iv is None else f"m={iv.m} column={iv.column}"


def _certify(p: FamilyPoint, word: FiniteWord, source: str) -> EscapeCertificate | None:
    try:
        landing = apply_word(p.value, word, CTX, "paper")
    except DomainViolation:
        return None
    if not in_j(landing):
        return None
    decision = a2_member_exact(landing)
    if decision.member:
        return None
    lo, hi = j_interval()
    return EscapeCertificate(p, word, landing, (sign(landing - lo), sign(hi - landing)), decision, source)


def escape_search(p: FamilyPoint, max_len: int = 12) -> EscapeCertificate:
    """A digit word moving ``p`` into ``J \\ A2``.

    Tries the known word for the family first; reflected points reuse their
    mirror's word reflected; otherwise breadth-first search by word length.
    """
    if p.reflected:
        mirror = escape_search(p.mirror(), max_len)
        cert = _certify(p, mirror.word.reflect(), "reflected")
        if cert is not None:
            return cert
    else:
        w = paper_escape_word(p)
        if w is not None:
            cert = _certify(p, w, "paper")
            if cert is not None:
                return cert
    # breadth-first over forward digit sequences; record in composition order
    frontier: list[tuple[FieldElement, tuple[int, ...]]] = [(p.value, ())]
    for _ in range(max_len):
        nxt = []
        for v, seq in frontier:
            for s in CTX.allowed_digits(v):
                w = CTX.q * v - s
                seq2 = seq + (s,)
                if in_j(w) and not a2_member_exact(w).member:
                    lo, hi = j_interval()
                    return EscapeCertificate(p, FiniteWord(seq2[::-1]), w, (sign(w - lo), sign(hi - w)),
                                             a2_member_exact(w), "search")
                nxt.append((w, seq2))
        frontier = nxt
    raise NotFound(f"no escape word of length <= {max_len} for {p.label}")
