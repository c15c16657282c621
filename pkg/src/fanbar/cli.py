"""Command-line harness: the Kleene experiment, bar and cover converters, real arithmetic.

Reports are JSON with a schema version and no timestamps; a one-line summary
goes to standard output.  Exit codes: 0 ok, 1 contract failure, 2 parse
error, 3 budget exhausted.
"""

import argparse
import ast
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import csets, heineborel, kleene, reals
from .contfun import apply_n
from .errors import BudgetExceeded, FanbarError, InvalidInput, PreconditionError, WitnessViolation
from .seqcode import decode, encode, format_finseq, is_binary_seq, parse_finseq
from .streams import DecidableSet, EnumerableSet, SeqOracle

SCHEMA_VERSION = 1

EXIT_OK, EXIT_CONTRACT, EXIT_PARSE, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    budget_enum: int = 4096
    budget_steps: int = 10_000
    depth: int = 8
    precision: int = 20
    seed: int = 0
    inp: str = None
    out: str = None
    emit: str = None

    def validate(self):
        for name in ("budget_enum", "budget_steps", "depth", "precision"):
            if getattr(self, name) <= 0:
                raise BudgetExceeded(f"{name.replace('_', '-')} must be positive")


# text formats

def parse_bar(text):
    """One sequence per line, as [a,b,...] or as a decimal code; blank lines and # comments skipped."""
    out = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            out.append(decode(int(line)) if line.isdigit() else parse_finseq(line))
        except (InvalidInput, ValueError) as exc:
            raise InvalidInput(f"line {ln}: {exc}") from None
    return out


def format_bar(bar):
    return "".join(format_finseq(s) + "\n" for s in bar)


# subcommands

def _leaves(depth):
    return [tuple((k >> (depth - 1 - i)) & 1 for i in range(depth)) for k in range(1 << depth)]


def _bars_leaves(members, depth):
    """Every binary word of the given length has an initial part among members."""
    members = set(members)
    for leaf in _leaves(depth):
        if not any(leaf[:i] in members for i in range(depth + 1)):
            return False, format_finseq(leaf)
    return True, None


def _binary_upto(depth):
    return [w for L in range(depth + 1) for w in _leaves(L)]


def cmd_kleene(cfg):
    rep = kleene.experiment(depth=cfg.depth, step_budget=cfg.budget_steps,
                            search_cap=cfg.budget_enum, seed=cfg.seed)
    missing = [h.name for h in rep.hits if h.hit_depth is None]
    body = {
        "hits": [{"name": h.name, "index": h.index, "hit_depth": h.hit_depth,
                  "witness_j": h.witness_j, "witness_z": h.witness_z,
                  "bound_checked": h.bound_checked, "note": h.note} for h in rep.hits],
        "avoidance": [{"length": a.length, "prefix": format_finseq(a.prefix),
                       "verified": a.verified} for a in rep.avoidance],
        "measure": [{"subset": [format_finseq(s) for s in m.subset], "total": str(m.total),
                     "bound": str(m.bound), "holds": m.holds} for m in rep.measure],
        "ok": rep.ok,
    }
    if missing:
        return EXIT_BUDGET, body, f"kleene: no hit within the search budget for {', '.join(missing)}"
    hits = sum(h.bound_checked for h in rep.hits)
    summary = (f"kleene: {hits}/{len(rep.hits)} catalog hits verified, "
               f"{sum(a.verified for a in rep.avoidance)}/{len(rep.avoidance)} avoidances, "
               f"{sum(m.holds for m in rep.measure)}/{len(rep.measure)} measure bounds")
    return (EXIT_OK if rep.ok else EXIT_CONTRACT), body, summary


def _convert_enum2dec(bar, cfg):
    E = EnumerableSet.from_list(bar, "input enumeration")
    dec = csets.enum_bar_to_dec_bar(E)
    members = [s for s in _binary_upto(cfg.depth) if dec.contains(s)]
    minimal = [s for s in members if not any(s[:i] in set(members) for i in range(len(s)))]
    ok_in, _ = _bars_leaves(bar, cfg.depth)
    ok_out, gap = _bars_leaves(members, cfg.depth)
    # independent restatement: s is in the result iff a listed stage j < len(s) is a proper head of s
    agree = all((s in set(members)) == any(j < len(s) and len(bar[j]) < len(s) and s[:len(bar[j])] == bar[j]
                                           for j in range(len(bar))) for s in _binary_upto(cfg.depth))
    return format_bar(minimal), {"input_bars": ok_in, "output_bars": ok_out, "gap": gap,
                                 "agrees_with_definition": agree}, ok_out or not ok_in


def _walk(Y, depth):
    """Minimal members of Y met by a depth-first walk of the binary tree, and a gap if any."""
    minimal, stack = [], [()]
    while stack:
        t = stack.pop()
        if Y.contains(t):
            minimal.append(t)
        elif len(t) >= depth:
            return minimal, t
        else:
            stack.extend([t + (1,), t + (0,)])
    return sorted(minimal, key=lambda t: (len(t), t)), None


def _convert_bounded(bar, cfg):
    X = DecidableSet.finite(bar)
    Y = csets.bounded_subbar(X)
    # members of Y have length equal to the code of their head in X
    depth = max([encode(s) for s in bar] + [cfg.depth])
    if depth > 24:
        raise BudgetExceeded(f"the bounded subbar reaches depth {depth}; walking it is too costly")
    minimal, gap = _walk(Y, depth)
    ok_in, _ = _bars_leaves(bar, max(map(len, bar), default=0))
    inside = all(any(s[:len(h)] == h and len(s) == encode(h) for h in bar) for s in minimal)
    ok_out = gap is None
    return format_bar(minimal), {"input_bars": ok_in, "output_bars": ok_out,
                                 "gap": None if gap is None else format_finseq(gap),
                                 "lengths_match_codes": inside}, (ok_out or not ok_in) and inside


def _convert_firsthit(bar, cfg):
    B = DecidableSet.finite(bar)
    phi = csets.first_hit_fn(B, csets.cantor())
    lines, bad = [], []
    for leaf in _leaves(cfg.depth):
        alpha = SeqOracle.from_prefix(leaf)
        try:
            p = apply_n(phi, alpha, budget=cfg.budget_enum).value
        except BudgetExceeded:
            p = None
        want = next((i for i in range(len(leaf) + 1) if leaf[:i] in set(bar)), None)
        if p != want:
            bad.append(format_finseq(leaf))
        lines.append(f"{format_finseq(leaf)} {p if p is not None else '-'}\n")
    return "".join(lines), {"leaves": 1 << cfg.depth, "mismatches": bad}, not bad


def _convert_dini(bar, cfg):
    B = DecidableSet.finite(bar)
    phis = csets.dini_build(B, csets.cantor())
    lines, bad = [], []
    for n in range(cfg.depth + 1):
        pos = 0
        for leaf in _leaves(cfg.depth):
            v = apply_n(phis(n), SeqOracle.from_prefix(leaf), budget=cfg.budget_enum).value
            hit = next((i for i in range(len(leaf) + 1) if leaf[:i] in set(bar)), None)
            if hit is not None and v != max(hit - n, 0):
                bad.append((n, format_finseq(leaf)))
            pos += bool(v)
        lines.append(f"{n} {pos}\n")
    return "".join(lines), {"levels": cfg.depth + 1, "mismatches": [list(b) for b in bad]}, not bad


def _convert_bar2cover(bar, cfg):
    for s in bar:
        if not is_binary_seq(s):
            raise PreconditionError(f"{format_finseq(s)} is not binary")
    cover = heineborel.bar_to_special(bar)
    verdict = heineborel.special_validate(cover, resolution=max(cfg.depth, max(map(len, bar)) + 2))
    back = heineborel.special_to_bar(cover)
    same = sorted(set(bar)) == sorted(back)
    return heineborel.format_cover(cover), {"special": verdict.valid, "reason": verdict.reason,
                                 "round_trip": same}, verdict.valid and same


def _convert_cover2bar(cover, cfg):
    verdict = heineborel.special_validate(cover, resolution=cfg.depth)
    if not verdict.valid:
        raise PreconditionError(f"not a special covering: {verdict.reason}")
    bar = heineborel.special_to_bar(cover)
    depth = max(map(len, bar), default=0)
    ok, gap = _bars_leaves(bar, depth)
    free = all(not (s != t and t[:len(s)] == s) for s in bar for t in bar)
    same = sorted(heineborel.bar_to_special(bar), key=lambda s: (s.lo, s.hi)) == \
        sorted(cover, key=lambda s: (s.lo, s.hi))
    return format_bar(bar), {"bars": ok, "gap": gap, "prefix_free": free, "round_trip": same}, \
        ok and free and same


CONVERTERS = {
    "enum2dec": (parse_bar, _convert_enum2dec),
    "bounded": (parse_bar, _convert_bounded),
    "firsthit": (parse_bar, _convert_firsthit),
    "dini": (parse_bar, _convert_dini),
    "bar2cover": (parse_bar, _convert_bar2cover),
    "cover2bar": (heineborel.parse_cover, _convert_cover2bar),
}


def cmd_convert(kind, text, cfg):
    parse, run = CONVERTERS[kind]
    data = parse(text)
    out, appendix, ok = run(data, cfg)
    body = {"kind": kind, "output": out, "verification": appendix, "ok": ok}
    return (EXIT_OK if ok else EXIT_CONTRACT), body, f"convert {kind}: {'verified' if ok else 'verification failed'}"


# real expressions

def _fixture_cantor_zero():
    a = lambda n: reals.real_from_rat(Fraction(-1, n + 1))
    b = lambda n: reals.real_from_rat(Fraction(1, n + 1))
    return reals.cantor_intersection(a, b, lambda n: 2 ** (n + 1))


def _fixture_cantor_third():
    a = lambda n: reals.real_from_rat(Fraction(1 - Fraction(1, 4 ** n), 3))
    b = lambda n: reals.real_from_rat(Fraction(1 - Fraction(1, 4 ** n), 3) + Fraction(1, 4 ** n))
    return reals.cantor_intersection(a, b, lambda n: n // 2 + 1)


FIXTURES = {"cantor_zero": _fixture_cantor_zero, "cantor_third": _fixture_cantor_third}


def _rational(node):
    """A rational literal: an integer, a quotient of literals, or a negation of one."""
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Fraction(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        q = _rational(node.operand)
        return None if q is None else -q
    if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
        p, q = _rational(node.left), _rational(node.right)
        if p is None or q is None:
            return None
        if q == 0:
            raise InvalidInput("division by zero")
        return p / q
    return None


def _build(node):
    q = _rational(node)
    if q is not None:
        return reals.real_from_rat(q)
    if isinstance(node, ast.BinOp):
        ops = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*"}
        op = ops.get(type(node.op))
        if op is None:
            raise InvalidInput("only + - * between reals; / only between rational literals")
        return reals.real_arith(op, _build(node.left), _build(node.right))
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
        return -_build(node.operand)
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and not node.keywords:
        fn = {"sup": reals.real_sup, "inf": reals.real_inf}.get(node.func.id)
        if fn is None or len(node.args) != 2:
            raise InvalidInput(f"unknown function {node.func.id!r}; use sup(x, y) or inf(x, y)")
        return fn(_build(node.args[0]), _build(node.args[1]))
    if isinstance(node, ast.Name) and node.id in FIXTURES:
        return FIXTURES[node.id]()
    raise InvalidInput(f"unsupported expression: {ast.dump(node)}")


def parse_real(expr):
    try:
        tree = ast.parse(expr.strip(), mode="eval")
    except SyntaxError as exc:
        raise InvalidInput(f"cannot parse {expr!r}: {exc.msg}") from None
    return _build(tree.body)


def cmd_real(expr, cfg):
    x = parse_real(expr)
    s = x.at(cfg.precision)
    ok = s.width <= 2 * reals.pow2(cfg.precision)
    digits = max(1, int(cfg.precision * 0.30103))
    lo, hi = reals.dec_str(x, digits)
    body = {"expr": expr, "precision": cfg.precision, "lo": str(s.lo), "hi": str(s.hi),
            "decimal": [lo, hi], "width_ok": ok, "ok": ok}
    return (EXIT_OK if ok else EXIT_CONTRACT), body, f"[{lo}, {hi}]"


# entry point

def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-enum", type=int, default=4096)
    common.add_argument("--budget-steps", type=int, default=10_000)
    common.add_argument("--depth", type=int, default=None)
    common.add_argument("--precision", type=int, default=20)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--in", dest="inp")
    common.add_argument("--out")

    p = argparse.ArgumentParser(prog="fanbar", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    k = sub.add_parser("kleene", parents=[common], help="run the Kleene bar experiment")
    k.set_defaults(depth_default=32)
    c = sub.add_parser("convert", parents=[common], help="convert bars and covers")
    c.add_argument("kind", choices=sorted(CONVERTERS))
    c.add_argument("--emit", help="write the converted bar or cover in its text format")
    c.set_defaults(depth_default=8)
    r = sub.add_parser("real", parents=[common], help="evaluate a real expression")
    r.add_argument("expr")
    r.set_defaults(depth_default=8)
    return p


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def main(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    cfg = RunConfig(args.budget_enum, args.budget_steps,
                    args.depth if args.depth is not None else args.depth_default,
                    args.precision, args.seed, args.inp, args.out, getattr(args, "emit", None))
    try:
        cfg.validate()
        if args.command == "kleene":
            code, body, summary = cmd_kleene(cfg)
        elif args.command == "convert":
            if cfg.inp is None:
                text = sys.stdin.read()
            else:
                with open(cfg.inp, encoding="utf-8") as fh:
                    text = fh.read()
            code, body, summary = cmd_convert(args.kind, text, cfg)
            if cfg.emit:
                _write(cfg.emit, body["output"])
        else:
            code, body, summary = cmd_real(args.expr, cfg)
    except InvalidInput as exc:
        code, body, summary = EXIT_PARSE, {"error": "parse", "message": str(exc)}, f"parse error: {exc}"
    except BudgetExceeded as exc:
        code, body, summary = EXIT_BUDGET, {"error": "budget", "message": str(exc)}, f"budget exhausted: {exc}"
    except (PreconditionError, WitnessViolation, FanbarError) as exc:
        code, body, summary = EXIT_CONTRACT, {"error": "contract", "message": str(exc)}, f"contract failure: {exc}"
    except OSError as exc:
        code, body, summary = EXIT_PARSE, {"error": "io", "message": str(exc)}, f"cannot read input: {exc}"
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, "exit_code": code,
              "config": {"budget_enum": cfg.budget_enum, "budget_steps": cfg.budget_steps,
                         "depth": cfg.depth, "precision": cfg.precision, "seed": cfg.seed},
              **body}
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        _write(cfg.out, text)
    print(summary)
    return code


if __name__ == "__main__":
    sys.exit(main())
