"""Digit maps ``T_0(x) = qx`` and ``T_1(x) = qx - 1`` and the expansions they generate.

A point ``x`` in ``[0, 1/(q-1)]`` has one expansion per infinite admissible
path of digit applications.  Outside the switch region ``[1/q, 1/(q^2-q)]``
exactly one digit is admissible; inside it both are.  All values are exact
:class:`~qexpand.algebraic.FieldElement` instances, so orbit repeats are
detected by equality.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

from .algebraic import FieldElement, FieldSpec, to_decimal
from .words import FiniteWord, PeriodicWord, format_word, value as word_value

Order = Literal["paper", "forward", "paper_subscript", "first_symbol_first"]

DEFAULT_VALUE_DEPTH = 256
DEFAULT_MAX_NODES = 20000


class DomainViolation(ValueError):
    def __init__(self, message: str, prefix: FiniteWord | None = None):
        super().__init__(message)
        self.prefix = prefix


@dataclass(frozen=True)
class SystemContext:
    field: FieldSpec
    q: FieldElement
    switch_lo: FieldElement
    switch_hi: FieldElement
    domain_hi: FieldElement

    def in_domain(self, x: FieldElement) -> bool:
        return 0 <= x <= self.domain_hi

    def in_switch(self, x: FieldElement) -> bool:
        return self.switch_lo <= x <= self.switch_hi

    def allowed_digits(self, x: FieldElement) -> tuple[int, ...]:
        return tuple(s for s, ok in ((0, x <= self.switch_hi), (1, x >= self.switch_lo)) if ok)


@lru_cache(maxsize=None)
def context(spec: FieldSpec) -> SystemContext:
    q = spec.gen()
    if not 1 < q < 2:
        raise ValueError(f"base {spec.name} must lie in (1, 2)")
    ctx = SystemContext(spec, q, 1 / q, 1 / (q * q - q), 1 / (q - 1))
    assert 0 < ctx.switch_lo < ctx.switch_hi < ctx.domain_hi
    return ctx


def apply_digit(x: FieldElement, s: int, ctx: SystemContext) -> FieldElement:
    if s == 0:
        if not 0 <= x:
            raise DomainViolation("T_0 needs x >= 0")
        if not x <= ctx.switch_hi:
            raise DomainViolation("T_0 needs x <= 1/(q^2-q)")
    elif s == 1:
        if not ctx.switch_lo <= x:
            raise DomainViolation("T_1 needs x >= 1/q")
        if not x <= ctx.domain_hi:
            raise DomainViolation("T_1 needs x <= 1/(q-1)")
    else:
        raise ValueError(f"digit must be 0 or 1, got {s}")
    return ctx.q * x - s


def _forward(w: FiniteWord, order: str) -> tuple[int, ...]:
    if order in ("forward", "first_symbol_first"):
        return w.digits
    if order in ("paper", "paper_subscript"):
        return w.digits[::-1]
    raise ValueError(f"unknown order {order!r}")


def apply_word(x: FieldElement, w: FiniteWord, ctx: SystemContext, order: Order = "paper") -> FieldElement:
    """Apply the digit maps named by ``w``.

    ``order="paper"`` composes like ``T_{d1...dn} = T_{d1} o ... o T_{dn}``,
    i.e. the rightmost digit acts first; ``order="forward"`` applies digits
    left to right.  The empty word is the identity.
    """
    done: list[int] = []
    for s in _forward(w, order):
        try:
            x = apply_digit(x, s, ctx)
        except DomainViolation as exc:
            raise DomainViolation(f"{exc} after applying {FiniteWord(tuple(done)) or 'no digits'}",
                                  FiniteWord(tuple(done))) from None
        done.append(s)
    return x


def inverse_map(x: FieldElement, s: int, ctx: SystemContext) -> FieldElement:
    """``(x + s) / q``, the branch of ``T_s^-1`` (prepends digit ``s``)."""
    if not ctx.in_domain(x):
        raise DomainViolation("inverse map needs x in [0, 1/(q-1)]")
    return (x + s) / ctx.q


def greedy_digits(x: FieldElement, ctx: SystemContext, n: int) -> FiniteWord:
    if not ctx.in_domain(x):
        raise DomainViolation("greedy expansion needs x in [0, 1/(q-1)]")
    out = []
    for _ in range(n):
        s = 1 if x >= ctx.switch_lo else 0
        x = ctx.q * x - s
        out.append(s)
    return FiniteWord(tuple(out))


def default_depth(w: PeriodicWord | None = None) -> int:
    if w is None:
        return DEFAULT_VALUE_DEPTH
    return 4 * (len(w.preperiod) + len(w.period)) + 64


# ---------------------------------------------------------------------------
# counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CountResult:
    kind: Literal["exact", "infinite", "inconclusive"]
    n: int | None = None
    certificates: tuple[PeriodicWord, ...] = ()
    witness_prefix: FiniteWord | None = None
    witness_loop: FiniteWord | None = None
    depth: int = 0

    @property
    def is_finite(self) -> bool:
        return self.kind == "exact"

    def __str__(self):
        if self.kind == "exact":
            return f"Exact({self.n})"
        if self.kind == "infinite":
            return "InfiniteWitness"
        return f"Inconclusive(depth={self.depth})"

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "label": str(self)}
        if self.kind == "exact":
            out["n"] = self.n
            out["certificates"] = [format_word(c) for c in self.certificates]
        elif self.kind == "infinite":
            out["witness"] = {"prefix": str(self.witness_prefix), "loop": str(self.witness_loop)}
        else:
            out["depth"] = self.depth
        return out


def count_expansions(x: FieldElement, ctx: SystemContext, max_depth: int | None = None,
                     max_nodes: int = DEFAULT_MAX_NODES) -> CountResult:
    """Count the expansions of ``x`` by depth-first search over admissible digits.

    A path ends when its value repeats.  A repeat whose loop passes through
    the switch region proves infinitely many expansions; a loop avoiding it
    closes one eventually periodic expansion.  The search deepens
    iteratively (16, 32, ... up to ``max_depth``) so short witnesses are not
    hidden behind deep non-periodic branches; when the deepest round still
    has open paths the result is inconclusive.
    """
    if not ctx.in_domain(x):
        raise DomainViolation("x must lie in [0, 1/(q-1)]")
    if max_depth is None:
        max_depth = DEFAULT_VALUE_DEPTH
    limit = min(16, max_depth)
    while True:
        result = _bounded_count(x, ctx, limit, max_nodes)
        if result.kind != "inconclusive" or limit >= max_depth:
            return result
        limit = min(2 * limit, max_depth)


def _bounded_count(x: FieldElement, ctx: SystemContext, max_depth: int, max_nodes: int) -> CountResult:
    vals: list[FieldElement] = []
    sw: list[bool] = []
    digits: list[int] = []
    pos: dict[FieldElement, int] = {}
    leaves: list[PeriodicWord] = []
    truncated = False
    nodes = 0
    stack: list[tuple[FieldElement, int, int]] = [(x, -1, 0)]
    while stack:
        v, d, depth = stack.pop()
        while len(vals) > depth:
            del pos[vals.pop()]
            sw.pop()
        del digits[max(depth - 1, 0):]
        if d >= 0:
            digits.append(d)
        start = pos.get(v)
        if start is not None:
            if any(sw[start:]):
                return CountResult("infinite", witness_prefix=FiniteWord(tuple(digits[:start])),
                                   witness_loop=FiniteWord(tuple(digits[start:])), depth=depth)
            leaves.append(PeriodicWord(tuple(digits[:start]), tuple(digits[start:])))
            continue
        if depth >= max_depth or nodes >= max_nodes:
            truncated = True
            continue
        nodes += 1
        allowed = ctx.allowed_digits(v)
        vals.append(v)
        sw.append(len(allowed) == 2)
        pos[v] = depth
        qv = ctx.q * v
        for s in reversed(allowed):
            stack.append((qv - s, s, depth + 1))
    if truncated:
        return CountResult("inconclusive", depth=max_depth)
    return CountResult("exact", len(leaves), tuple(leaves))


def count_word(w: PeriodicWord, ctx: SystemContext, **kw) -> CountResult:
    kw.setdefault("max_depth", default_depth(w))
    return count_expansions(word_value(w, ctx.field), ctx, **kw)


# ---------------------------------------------------------------------------
# expansion trees
# ---------------------------------------------------------------------------

@dataclass
class OrbitNode:
    value: FieldElement
    word_applied: FiniteWord
    in_switch: bool
    forced_digit: int | None
    children: list[tuple[int, OrbitNode]] = field(default_factory=list)
    end: str | None = None  # cycle | switch_cycle | absorbing | depth | budget
    cycle_to: FiniteWord | None = None

    def iter_nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(child for _, child in reversed(node.children))

    def to_dict(self, digits: int = 20) -> dict:
        out = {
            "word": str(self.word_applied),
            "decimal": to_decimal(self.value, digits),
            "coeffs": [str(c) for c in self.value.coeffs],
            "in_switch": self.in_switch,
        }
        if self.end:
            out["end"] = self.end
        if self.cycle_to is not None:
            out["cycle_to"] = str(self.cycle_to)
        if self.children:
            out["children"] = [{"digit": s, "node": c.to_dict(digits)} for s, c in self.children]
        return out


def expansion_tree(x: FieldElement, ctx: SystemContext, max_depth: int | None = None,
                   max_nodes: int = DEFAULT_MAX_NODES) -> OrbitNode:
    """Tree of admissible digit choices from ``x``.

    Nodes in the switch region have two children, other nodes one.  A branch
    stops at a value already on its path (``end="cycle"`` or
    ``"switch_cycle"`` if the loop meets the switch region), at the fixed
    points ``0`` / ``1/(q-1)`` (``"absorbing"``) or at ``max_depth``.
    """
    if not ctx.in_domain(x):
        raise DomainViolation("x must lie in [0, 1/(q-1)]")
    if max_depth is None:
        max_depth = DEFAULT_VALUE_DEPTH
    budget = [max_nodes]

    def make(v: FieldElement, word: tuple[int, ...]) -> OrbitNode:
        allowed = ctx.allowed_digits(v)
        return OrbitNode(v, FiniteWord(word), len(allowed) == 2, allowed[0] if len(allowed) == 1 else None)

    root = make(x, ())
    # iterative DFS; the path is the chain of (node, value) pairs leading here
    stack = [(root, [root])]
    while stack:
        node, path = stack.pop()
        v = node.value
        if v == 0 or v == ctx.domain_hi:
            node.end = "absorbing"
            node.cycle_to = node.word_applied
            continue
        if len(node.word_applied) >= max_depth:
            node.end = "depth"
            continue
        if budget[0] <= 0:
            node.end = "budget"
            continue
        budget[0] -= 1
        allowed = ctx.allowed_digits(v)
        for s in allowed:
            w = ctx.q * v - s
            child = make(w, node.word_applied.digits + (s,))
            node.children.append((s, child))
            hit = next((i for i, p in enumerate(path) if p.value == w), None)
            if hit is not None:
                loop = path[hit:]
                child.end = "switch_cycle" if any(p.in_switch for p in loop) else "cycle"
                child.cycle_to = path[hit].word_applied
                continue
            stack.append((child, path + [child]))
        node.children.sort(key=lambda c: c[0])
    return root


def tree_to_json(root: OrbitNode, digits: int = 20) -> str:
    return json.dumps(root.to_dict(digits), indent=2, sort_keys=True)


def tree_to_dot(root: OrbitNode, digits: int = 8) -> str:
    lines = ["digraph expansions {", '  node [shape=box, fontname="monospace"];']
    ids: dict[int, str] = {}
    for i, node in enumerate(root.iter_nodes()):
        ids[id(node)] = f"n{i}"
        label = f"{node.word_applied or 'ε'}\\n{to_decimal(node.value, digits)}"
        style = ", style=filled, fillcolor=lightyellow" if node.in_switch else ""
        if node.end:
            label += f"\\n[{node.end}]"
        lines.append(f'  n{i} [label="{label}"{style}];')
    for node in root.iter_nodes():
        for s, child in node.children:
            lines.append(f'  {ids[id(node)]} -> {ids[id(child)]} [label="{s}"];')
    lines.append("}")
    return "\n".join(lines)
