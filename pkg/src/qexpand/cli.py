"""Command-line front end: ``qexpand <command> ...``.

Exit status is 0 on success, 1 when a verification check fails and 2 for
usage errors (bad arguments, unparsable words, points outside the domain).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Callable

from .algebraic import CONSTANTS, AlgebraicError, FieldElement, FieldSpec, parse_base, to_decimal
from .dynamics import DomainViolation, apply_word, context, count_expansions, expansion_tree, tree_to_dot
from .words import FiniteWord, PeriodicWord, WordSyntaxError, format_word, parse_word, value

PRECISION_ENV = "QEXPAND_PRECISION"


class UsageError(Exception):
    pass


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV, "20")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"{PRECISION_ENV} must be positive")
    return n


def _resolve_base(args) -> FieldSpec:
    try:
        return parse_base(args.base, args.minpoly, args.interval)
    except (KeyError, ValueError, AlgebraicError) as exc:
        raise UsageError(str(exc.args[0] if isinstance(exc, KeyError) else exc)) from None


def _require_q2(spec: FieldSpec, command: str):
    if spec != CONSTANTS["q2"]:
        raise UsageError(f"{command} is only defined at base q2")


def _point(text: str, spec: FieldSpec) -> tuple[FieldElement, str | None]:
    """An eventually periodic word, or comma-separated power-basis coefficients."""
    try:
        w = parse_word(text)
    except WordSyntaxError as exc:
        w, word_error = None, exc
    else:
        word_error = None
        if isinstance(w, PeriodicWord):
            return value(w, spec), format_word(w)
    try:
        coeffs = [Fraction(c) for c in text.strip("[] ").split(",") if c.strip()]
    except (ValueError, ZeroDivisionError):
        coeffs = []
    if not coeffs or len(coeffs) > spec.degree:
        if word_error is not None:
            raise UsageError(f"not a word or coefficient list: {word_error}")
        raise UsageError(f"{text!r} is a finite word; points need an infinite word or coefficients")
    return FieldElement.from_coeffs(spec, coeffs), None


def _coeffs(x: FieldElement) -> list[str]:
    return [str(c) for c in x.coeffs]


# ---------------------------------------------------------------------------
# commands: each returns (result dict, exit status)
# ---------------------------------------------------------------------------

def cmd_value(args, spec):
    w = parse_word(args.word)
    if not isinstance(w, PeriodicWord):
        raise UsageError("value needs an infinite word ending in ^inf")
    x = value(w, spec)
    return {"word": format_word(w), "coeffs": _coeffs(x), "decimal": to_decimal(x, args.precision)}, 0


def cmd_orbit(args, spec):
    ctx = context(spec)
    x, _ = _point(args.point, spec)
    w = FiniteWord.of(args.word) if args.word else FiniteWord()
    digits = w.digits[::-1] if args.order == "paper" else w.digits
    steps, y = [], x
    for s in digits:
        y = apply_word(y, FiniteWord((s,)), ctx, "forward")
        steps.append({"digit": s, "decimal": to_decimal(y, args.precision), "in_switch": ctx.in_switch(y)})
    landing = apply_word(x, w, ctx, args.order)
    return {"start": to_decimal(x, args.precision), "word": str(w), "order": args.order, "steps": steps,
            "landing": to_decimal(landing, args.precision), "coeffs": _coeffs(landing)}, 0


def cmd_count(args, spec):
    ctx = context(spec)
    x, _ = _point(args.point, spec)
    res = count_expansions(x, ctx, max_depth=args.depth)
    out = {"x": to_decimal(x, args.precision), "count": res.to_dict()}
    if args.tree == "json":
        out["tree"] = expansion_tree(x, ctx, max_depth=args.tree_depth).to_dict(args.precision)
    elif args.tree == "dot":
        out["tree"] = tree_to_dot(expansion_tree(x, ctx, max_depth=args.tree_depth))
    return out, 0


def cmd_classify(args, spec):
    from .classify import a2_member_exact, branch_class, in_j, m1_member, m2_member

    _require_q2(spec, "classify")
    x, _ = _point(args.point, spec)
    ctx = context(spec)
    if not ctx.in_domain(x):
        raise DomainViolation("x must lie in [0, 1/(q-1)]")
    m1 = m1_member(x)
    m2 = m2_member(x)
    out = {"x": to_decimal(x, args.precision), "branch_class": branch_class(x).to_dict(),
           "M1": None if m1 is None else format_word(m1),
           "M2": None if m2 is None else [format_word(w) for w in m2],
           "in_J": in_j(x)}
    if out["in_J"]:
        dec = a2_member_exact(x)
        out["A2_in_J"] = {"member": dec.member, "match": dec.match}
    return out, 0


def cmd_escape(args, spec):
    from .classify import NotFound, escape_search, family_point

    _require_q2(spec, "escape")
    shape = "limit" if args.limit else args.shape
    if shape == "limit":
        if args.m not in (2, 4):
            raise UsageError("limit points exist for m = 2 and 4 only")
        k = None
    else:
        if args.k is None or args.k < 1:
            raise UsageError("--k >= 1 is required")
        k = args.k
    if not 1 <= args.m <= 4:
        raise UsageError("--m must be between 1 and 4")
    if shape == "type10" and args.m in (1, 3) and k == 1:
        raise UsageError("10 eps_1 is excluded from the family")
    p = family_point(args.m, k, shape, args.reflected)
    try:
        cert = escape_search(p, args.max_len)
    except NotFound as exc:
        print(f"qexpand: {exc}", file=sys.stderr)
        return {"error": str(exc)}, 1
    out = cert.to_dict()
    out["start"]["label"] = p.label
    out["verified"] = cert.verify()
    return out, 0 if out["verified"] else 1


def cmd_table1(args, spec):
    from .classify import h_cover

    _require_q2(spec, "table1")
    return h_cover().to_dict(), 0


def cmd_verify(args, spec):
    from .paperlab import Bounds, report_json, verify_all

    _require_q2(spec, "verify")
    bounds = Bounds(k_max=args.k_max, m_max=args.m_max, depth=args.depth, word_len=args.word_len)
    results = verify_all(bounds)
    doc = json.loads(report_json(results, bounds))
    doc["_results"] = results
    return doc, 1 if any(r.status == "fail" for r in results) else 0


def cmd_constants(args, spec):
    rows = [{"name": s.name, "minpoly": list(s.minpoly),
             "interval": [str(v) for v in s.isolating_interval],
             "decimal": to_decimal(s.gen(), args.precision)} for s in CONSTANTS.values()]
    return {"constants": rows}, 0


COMMANDS: dict[str, Callable] = {
    "value": cmd_value, "orbit": cmd_orbit, "count": cmd_count, "classify": cmd_classify,
    "escape": cmd_escape, "table1": cmd_table1, "verify": cmd_verify, "constants": cmd_constants,
}


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def _text_generic(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    for key, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{key}:")
            lines += _text_generic(v, indent + 1)
        elif isinstance(v, list) and v and all(isinstance(i, dict) for i in v):
            lines.append(f"{pad}{key}:")
            for item in v:
                lines.append(f"{pad}  - " + ", ".join(f"{k}={_scalar(x)}" for k, x in item.items()))
        elif isinstance(v, list):
            lines.append(f"{pad}{key}: " + " ".join(_scalar(i) for i in v))
        else:
            lines.append(f"{pad}{key}: {_scalar(v)}")
    return lines


def _scalar(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def render_text(command: str, result: dict) -> str:
    if command == "count":
        c = result["count"]
        lines = [f"x: {result['x']}", c["label"]]
        lines += [f"  {w}" for w in c.get("certificates", [])]
        if "witness" in c:
            lines.append(f"  witness prefix {c['witness']['prefix']} loop {c['witness']['loop']}")
        tree = result.get("tree")
        if isinstance(tree, str):
            lines.append(tree.rstrip("\n"))
        elif tree is not None:
            lines.append(json.dumps(tree, indent=2, sort_keys=True))
        return "\n".join(lines) + "\n"
    if command == "table1":
        from .classify import h_cover
        lo, hi = result["J"]
        return f"J = [{lo}, {hi}]\n{h_cover().format_table()}\n"
    if command == "verify":
        from .paperlab import report_text
        return report_text(result["_results"])
    if command == "constants":
        lines = ["name\tminpoly\tinterval\tdecimal"]
        lines += [f"{r['name']}\t{r['minpoly']}\t[{', '.join(r['interval'])}]\t{r['decimal']}"
                  for r in result["constants"]]
        return "\n".join(lines) + "\n"
    return "\n".join(_text_generic(result)) + "\n"


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", help=f"named constant ({', '.join(CONSTANTS)}); default q2")
    common.add_argument("--minpoly", help="raw minimal polynomial, descending integer coefficients")
    common.add_argument("--interval", help="'lo,hi' search range for --minpoly (default 1,2)")
    common.add_argument("--precision", type=int, default=None, help=f"decimal digits (default ${PRECISION_ENV} or 20)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="qexpand", description="Exact dynamics of expansions in non-integer bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("value", parents=[common], help="exact value of an infinite word")
    p.add_argument("word")

    p = sub.add_parser("orbit", parents=[common], help="apply digit maps to a point")
    p.add_argument("point", help="infinite word or coefficient list 'c0,c1,...'")
    p.add_argument("--word", default="", help="finite word of digit maps")
    p.add_argument("--order", choices=("paper", "forward"), default="paper",
                   help="paper: rightmost digit acts first; forward: leftmost first")

    p = sub.add_parser("count", parents=[common], help="count expansions with certificates")
    p.add_argument("point")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--tree", choices=("json", "dot"))
    p.add_argument("--tree-depth", type=int, default=24)

    p = sub.add_parser("classify", parents=[common], help="A1/A2/A3 class and M1/M2 membership (q2)")
    p.add_argument("point")

    p = sub.add_parser("escape", parents=[common], help="escape certificate for a family point (q2)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--shape", choices=("type01", "type10"), default="type01")
    p.add_argument("--limit", action="store_true", help="the limit word 01^m(10)^inf")
    p.add_argument("--reflected", action="store_true")
    p.add_argument("--max-len", type=int, default=12)

    sub.add_parser("table1", parents=[common], help="the cover intervals H and J (q2)")

    p = sub.add_parser("verify", parents=[common], help="run the full verification battery (q2)")
    p.add_argument("--k-max", type=int, default=12)
    p.add_argument("--m-max", type=int, default=5)
    p.add_argument("--depth", type=int, default=256)
    p.add_argument("--word-len", type=int, default=12)

    sub.add_parser("constants", parents=[common], help="list the constants registry")
    return parser


def run(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        if args.precision is None:
            args.precision = _default_precision()
        elif args.precision < 1:
            raise UsageError("--precision must be positive")
        spec = _resolve_base(args)
        result, status = COMMANDS[args.command](args, spec)
    except (UsageError, WordSyntaxError, DomainViolation, ValueError) as exc:
        print(f"qexpand: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        result.pop("_results", None)
        doc = {"command": args.command, "base": spec.name, "result": result}
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        out.write(render_text(args.command, result))
    return status


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
