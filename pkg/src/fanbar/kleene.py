"""A register machine, its T predicate, and Kleene's bars on Cantor space.

Machines have registers r0, r1, ... (all zero at the start, except r1 which
holds the input) and three instructions:

    INC r        r += 1
    DECJZ r l    if r == 0 jump to l, otherwise r -= 1 and fall through
    HALT

Running off the end of the program also halts.  The output is r0.

Instruction codes: HALT = J(0,0), INC r = J(1,r), DECJZ r l = J(2, J(r,l)).
A program's index is the sequence code of its instruction codes.  An index
that does not decode to a well-formed program behaves like the empty program
(halts at once with output 0), so every natural is an index.

A halting computation is summarized by z = J(t, out) where t is the number
of instructions executed.  T(e, n, z) re-runs the machine for t steps, so it
is a bounded check and z is unique for each (e, n).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import random

from .errors import BudgetExceeded, InvalidInput
from .seqcode import decode, encode, is_binary_seq, pair, unpair
from .streams import UNKNOWN, SeqOracle


HALT, INC, DECJZ = "HALT", "INC", "DECJZ"


def instr_code(ins):
    op = ins[0]
    if op == HALT:
        return pair(0, 0)
    if op == INC:
        return pair(1, ins[1])
    if op == DECJZ:
        return pair(2, pair(ins[1], ins[2]))
    raise InvalidInput(f"unknown instruction {ins!r}")


def instr_from_code(c):
    op, arg = unpair(c)
    if op == 0 and arg == 0:
        return (HALT,)
    if op == 1:
        return (INC, arg)
    if op == 2:
        r, l = unpair(arg)
        return (DECJZ, r, l)
    return None


@dataclass(frozen=True)
class Program:
    instructions: tuple = ()

    def __post_init__(self):
        for ins in self.instructions:
            if ins[0] == DECJZ and ins[2] > len(self.instructions):
                raise InvalidInput(f"jump target {ins[2]} past the end")

    @property
    def code(self):
        return encode(instr_code(i) for i in self.instructions)

    @classmethod
    def parse(cls, text):
        out = []
        for raw in text.splitlines():
            line = raw.split("#")[0].strip()
            if not line:
                continue
            parts = line.split()
            op = parts[0].upper()
            try:
                args = tuple(int(x) for x in parts[1:])
            except ValueError:
                raise InvalidInput(f"bad operand in {raw!r}") from None
            if (op, len(args)) not in ((HALT, 0), (INC, 1), (DECJZ, 2)) or min(args, default=0) < 0:
                raise InvalidInput(f"bad instruction {raw!r}")
            out.append((op,) + args)
        return cls(tuple(out))

    def text(self):
        return "\n".join(" ".join(str(x) for x in ins) for ins in self.instructions)


@lru_cache(maxsize=1 << 14)
def program_of(e):
    """The program with index e; malformed indices give the empty program."""
    ins = []
    for c in decode(e):
        i = instr_from_code(c)
        if i is None:
            return Program(())
        ins.append(i)
    if any(i[0] == DECJZ and i[2] > len(ins) for i in ins):
        return Program(())
    return Program(tuple(ins))


def is_wellformed(e):
    return program_of(e).code == e


@dataclass(frozen=True)
class Halted:
    output: int
    steps: int

    @property
    def z(self):
        return pair(self.steps, self.output)


class _Divergent:
    def __repr__(self):
        return "DIVERGENT"

    def __bool__(self):
        return False


DIVERGENT = _Divergent()


def _as_program(e):
    return e if isinstance(e, Program) else program_of(e)


def run_bounded(e, n, max_steps):
    """Run index (or Program) e on input n; Halted or DIVERGENT (so far)."""
    prog = _as_program(e).instructions
    regs = {1: n}
    pc = 0
    steps = 0
    while True:
        if pc >= len(prog):
            return Halted(regs.get(0, 0), steps)
        if steps >= max_steps:
            return DIVERGENT
        ins = prog[pc]
        steps += 1
        if ins[0] == HALT:
            return Halted(regs.get(0, 0), steps)
        if ins[0] == INC:
            regs[ins[1]] = regs.get(ins[1], 0) + 1
            pc += 1
        else:
            _, r, l = ins
            if regs.get(r, 0) == 0:
                pc = l
            else:
                regs[r] -= 1
                pc += 1


def trace(e, n, max_steps):
    """The configurations (pc, registers) visited, for inspection."""
    prog = _as_program(e).instructions
    regs = {1: n}
    pc = 0
    out = [(pc, dict(regs))]
    for _ in range(max_steps):
        if pc >= len(prog) or prog[pc][0] == HALT:
            break
        ins = prog[pc]
        if ins[0] == INC:
            regs[ins[1]] = regs.get(ins[1], 0) + 1
            pc += 1
        elif regs.get(ins[1], 0) == 0:
            pc = ins[2]
        else:
            regs[ins[1]] -= 1
            pc += 1
        out.append((pc, dict(regs)))
    return out


def T(e, n, z):
    t, out = unpair(z)
    r = run_bounded(e, n, t)
    return bool(r) and r.steps == t and r.output == out


def U(z):
    return unpair(z)[1]


def program_oracle(e, max_steps):
    """n -> output of e on n; refuses (BudgetExceeded) if e runs too long."""

    def fn(n):
        r = run_bounded(e, n, max_steps)
        if not r:
            raise BudgetExceeded(f"program did not halt on {n} within {max_steps} steps")
        return r.output

    return SeqOracle(fn, f"program {_as_program(e).text()!r}")


def _max_steps_below(bound):
    """Largest t with J(t, 0) < bound, or -1."""
    t = -1
    while pair(t + 1, 0) < bound:
        t += 1
    return t


@lru_cache(maxsize=None)
def _run_cached(e, n, max_steps):
    return run_bounded(e, n, max_steps)


def halts_below(e, n, bound):
    """Halted(out, t) if T(e, n, z) for some z < bound, else None."""
    t = _max_steps_below(bound)
    if t < 0:
        return None
    r = _run_cached(e, n, t)
    if r and r.z < bound:
        return r
    return None


def diagonal_halts(bound):
    """All (j, Halted) with j < bound and z < bound for machine j on input j."""
    out = []
    for j in range(bound):
        r = halts_below(j, j, bound)
        if r is not None:
            out.append((j, r))
    return out


def _binary(s):
    s = decode(s) if isinstance(s, int) else tuple(s)
    if not is_binary_seq(s):
        raise InvalidInput("Kleene's bars live in Cantor space; got a non-binary sequence")
    return s


def bar_B(s):
    s = _binary(s)
    n = len(s)
    return any(s[j] == r.output for j, r in diagonal_halts(n))


def avoid_finite(n):
    """A binary sequence of length n none of whose initial parts is in B."""
    s = [0] * n
    for j, r in diagonal_halts(n):
        s[j] = max(0, 1 - r.output)
    return tuple(s)


def avoid_point(m):
    """A computable point whose initial parts of length <= m all miss B."""
    return SeqOracle.from_prefix(avoid_finite(m))


def bar_D(s):
    s = _binary(s)
    L = len(s)
    if L == 0:
        return False
    for n in range(L):
        if all((r := halts_below(n, j, L)) is not None and r.output == s[j]
               for j in range(n + 1)):
            return True
    return False


def bar_C(s, budget):
    """Semi-decide membership in C: the stage (step bound) found, or UNKNOWN."""
    s = _binary(s)
    if not s:
        return UNKNOWN
    n = len(s) - 1
    worst = 0
    for j in range(n + 1):
        r = _run_cached(n, j, budget)
        if not r or r.output != s[j]:
            return UNKNOWN
        worst = max(worst, r.steps)
    return worst


def k_sets(i, bound):
    if i not in (0, 1):
        raise InvalidInput("K_i is defined for i < 2")
    return {j for j, r in diagonal_halts(bound) if r.output == i}


# catalog of total programs with 0/1 values

def _p(text):
    return Program.parse(text)


CATALOG = {
    "empty": _p(""),
    "halt": _p("HALT"),
    "one": _p("INC 0"),
    "one-then-halt": _p("INC 0\nHALT"),
    "is-zero": _p("DECJZ 1 2\nHALT\nINC 0"),
    "is-positive": _p("DECJZ 1 3\nINC 0\nHALT"),
    "odd": _p("DECJZ 1 5\nDECJZ 0 3\nDECJZ 2 0\nINC 0\nDECJZ 2 0"),
    "even": _p("INC 0\nDECJZ 1 6\nDECJZ 0 4\nDECJZ 2 1\nINC 0\nDECJZ 2 1"),
    "below-two": _p("INC 0\nDECJZ 1 5\nDECJZ 1 5\nDECJZ 0 5\nHALT"),
    "at-least-two": _p("DECJZ 1 4\nDECJZ 1 4\nINC 0\nHALT"),
    "is-one": _p("DECJZ 1 4\nDECJZ 1 3\nHALT\nINC 0"),
    "zero-by-loop": _p("DECJZ 1 2\nDECJZ 2 0"),
}


@dataclass
class CatalogHit:
    name: str
    index: int
    hit_depth: object  # int, or None if the search ran out
    witness_j: object = None
    witness_z: object = None
    bound_checked: bool = False
    note: str = ""


@dataclass
class AvoidanceResult:
    length: int
    prefix: tuple
    verified: bool


@dataclass
class MeasureCheck:
    subset: tuple
    total: Fraction
    bound: Fraction

    @property
    def holds(self):
        return self.total <= self.bound


@dataclass
class ExperimentReport:
    hits: list = field(default_factory=list)
    avoidance: list = field(default_factory=list)
    measure: list = field(default_factory=list)

    @property
    def ok(self):
        return (all(h.hit_depth is not None and h.bound_checked for h in self.hits)
                and all(a.verified for a in self.avoidance)
                and all(m.holds for m in self.measure))


def least_hit(alpha, search_cap):
    """Least n with alpha-bar(n) in B, found by scanning diagonal halts.

    Returns (depth, j, z) or None when no hit shows up below search_cap.
    """
    best = None
    j = 0
    while j < search_cap and (best is None or j + 1 < best[0]):
        cap = best[0] if best else search_cap
        r = halts_below(j, j, cap)
        if r is not None and alpha(j) == r.output:
            d = max(j, r.z) + 1
            if best is None or d < best[0]:
                best = (d, j, r.z)
        j += 1
    return best


def catalog_hit(name, prog, search_cap, step_budget):
    e = prog.code
    alpha = program_oracle(prog, step_budget)
    try:
        found = least_hit(alpha, search_cap)
    except BudgetExceeded as exc:
        return CatalogHit(name, e, None, note=f"diverged: {exc}")
    if found is None:
        return CatalogHit(name, e, None, note="no hit below search cap")
    depth, j, z = found
    # the hit is re-checked directly against the bar, and minimality with it
    pre = alpha.prefix(depth)
    if not bar_B(pre) or bar_B(pre[:-1]):
        return CatalogHit(name, e, depth, j, z, note="direct bar check disagrees")
    if depth <= e + 1:
        return CatalogHit(name, e, depth, j, z, bound_checked=True)
    r = run_bounded(prog, e, step_budget)
    if not r:
        return CatalogHit(name, e, depth, j, z, note="could not run program on its own index")
    return CatalogHit(name, e, depth, j, z, bound_checked=depth <= max(e, r.z) + 1)


def minimal_D_elements(max_len):
    """Binary sequences of length <= max_len in D with no proper initial part in D."""
    out = []
    frontier = [()]
    while frontier:
        nxt = []
        for s in frontier:
            for b in (0, 1):
                t = s + (b,)
                if bar_D(t):
                    out.append(t)
                elif len(t) < max_len:
                    nxt.append(t)
        frontier = nxt
    return out


def D_level(length):
    """All members of D of the given length (a prefix-free family)."""
    out = []
    for k in range(2 ** length):
        s = tuple((k >> (length - 1 - i)) & 1 for i in range(length))
        if bar_D(s):
            out.append(s)
    return out


def harvest_antichains(max_len, count, rng):
    """Prefix-free finite subsets of D: minimal elements, whole levels, random picks."""
    found = [tuple(minimal_D_elements(max_len))]
    levels = [D_level(L) for L in range(1, max_len + 1)]
    found.extend(tuple(lv) for lv in levels if lv)
    while len(found) < count:
        lv = rng.choice([lv for lv in levels if lv])
        found.append(tuple(sorted(rng.sample(lv, rng.randint(1, len(lv))))))
    seen, out = set(), []
    for sub in found:
        if sub and sub not in seen:
            seen.add(sub)
            out.append(sub)
    return out


def measure_check(subset):
    total = sum((Fraction(1, 2 ** len(s)) for s in subset), Fraction(0))
    return MeasureCheck(tuple(subset), total, 1 - Fraction(1, 2 ** len(subset)))


def experiment(catalog=None, depth=32, step_budget=10_000, search_cap=4096,
               seed=0, harvest_len=8, harvest_count=8):
    catalog = CATALOG if catalog is None else catalog
    rep = ExperimentReport()
    for name, prog in catalog.items():
        rep.hits.append(catalog_hit(name, prog, search_cap, step_budget))
    for m in range(depth + 1):
        s = avoid_finite(m)
        ok = len(s) == m and is_binary_seq(s) and not any(bar_B(s[:k]) for k in range(m + 1))
        rep.avoidance.append(AvoidanceResult(m, s, ok))
    if harvest_count:
        rng = random.Random(seed)
        subsets = harvest_antichains(harvest_len, harvest_count, rng)
        rep.measure = [measure_check(sub) for sub in subsets]
    return rep
