"""Rational segments and constructive reals as nested-segment oracles.

A ``Real`` carries ``approx`` (n ↦ Seg, each strictly inside the previous one)
and an explicit ``modulus``: approx(modulus(n)) has width at most 2^-n.
Equality is never decided; comparisons report a separation found at some
index, or that none was found up to a precision.
"""

from dataclasses import dataclass
from fractions import Fraction as Rat
import math

from .errors import BudgetExceeded, PreconditionError, WitnessViolation
from .seqcode import pair, unpair
from .streams import EnumerableSet, SeqOracle


def rat(x):
    """A Fraction from an int, Fraction, or text like "3/4" or "-0.25"."""
    if isinstance(x, Rat):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a string or Fraction")
    return Rat(x)


def pow2(n):
    return Rat(1, 1 << n) if n >= 0 else Rat(1 << -n)


@dataclass(frozen=True)
class Seg:
    lo: Rat
    hi: Rat

    def __post_init__(self):
        object.__setattr__(self, "lo", rat(self.lo))
        object.__setattr__(self, "hi", rat(self.hi))
        if self.lo > self.hi:
            raise PreconditionError(f"segment with lo {self.lo} > hi {self.hi}")

    @classmethod
    def point(cls, q):
        return cls(q, q)

    @property
    def width(self):
        return self.hi - self.lo

    length = width

    @property
    def mid(self):
        return (self.lo + self.hi) / 2

    def __add__(self, t):
        return Seg(self.lo + t.lo, self.hi + t.hi)

    def __sub__(self, t):
        return Seg(self.lo - t.hi, self.hi - t.lo)

    def __neg__(self):
        return Seg(-self.hi, -self.lo)

    def __mul__(self, t):
        ps = (self.lo * t.lo, self.lo * t.hi, self.hi * t.lo, self.hi * t.hi)
        return Seg(min(ps), max(ps))

    def widen(self, e):
        return Seg(self.lo - e, self.hi + e)

    # relations
    def lt(self, t):
        return self.hi < t.lo

    def le(self, t):
        return self.lo <= t.hi

    def apart(self, t):
        return self.lt(t) or t.lt(self)

    def touches(self, t):
        return self.le(t) and t.le(self)

    def strictly_inside(self, t):
        return t.lo < self.lo and self.hi < t.hi

    def inside(self, t):
        return t.lo <= self.lo and self.hi <= t.hi

    def contains_rat(self, q):
        return self.lo < q < self.hi

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


def seg_min(s, t):
    if s.hi < t.lo:
        return s
    if t.hi < s.lo:
        return t
    return Seg(min(s.lo, t.lo), max(s.hi, t.hi))


def seg_max(s, t):
    if s.hi < t.lo:
        return t
    if t.hi < s.lo:
        return s
    return Seg(min(s.lo, t.lo), max(s.hi, t.hi))


_SEG_OPS = {
    "+": lambda s, t: s + t,
    "-": lambda s, t: s - t,
    "*": lambda s, t: s * t,
    "min": seg_min,
    "max": seg_max,
}


def seg_arith(op, s, t):
    try:
        return _SEG_OPS[op](s, t)
    except KeyError:
        raise PreconditionError(f"unknown segment operation {op!r}") from None


@dataclass(frozen=True)
class SegRelation:
    lt: bool
    le: bool
    apart: bool
    touches: bool
    strictly_inside: bool
    inside: bool


def seg_relate(s, t):
    return SegRelation(s.lt(t), s.le(t), s.apart(t), s.touches(t),
                       s.strictly_inside(t), s.inside(t))


def midpoint(s):
    return s.mid


def double_seg(s):
    return Seg(s.mid - s.width, s.mid + s.width)


def parse_seg(text):
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise PreconditionError(f"not a segment: {text!r}")
    lo, hi = body[1:-1].split(",")
    return Seg(Rat(lo.strip()), Rat(hi.strip()))


# reals

class Real:
    def __init__(self, approx, modulus, name=None):
        self.approx = approx if isinstance(approx, SeqOracle) else SeqOracle(approx)
        self.modulus = modulus
        self.name = name or "real"

    def __call__(self, n):
        return self.approx(n)

    def at(self, n):
        """A segment of width at most 2^-n around the real."""
        return self.approx(self.modulus(n))

    def estimate(self, n):
        return self.at(n).mid

    def check(self, depth):
        """Nesting and width invariants on the first depth indices."""
        for n in range(depth):
            if not self.approx(n + 1).strictly_inside(self.approx(n)):
                return False
        return all(self.at(n).width <= pow2(n) for n in range(depth))

    def __repr__(self):
        return f"Real({self.name} ≈ {float(self.estimate(20)):.6g})"

    def __add__(self, y):
        return real_arith("+", self, y)

    def __sub__(self, y):
        return real_arith("-", self, y)

    def __mul__(self, y):
        return real_arith("*", self, y)

    def __neg__(self):
        return real_arith("-", real_from_rat(0), self)


def real_from_rat(q):
    q = rat(q)
    return Real(lambda n: Seg(q - pow2(n), q + pow2(n)), lambda n: n + 1, name=str(q))


def _bound_exp(x):
    """e with |x| < 2^e, read off approx(0)."""
    s = x.approx(0)
    m = max(abs(s.lo), abs(s.hi))
    return max(0, math.ceil(math.log2(m + 1))) if m else 0


def real_arith(op, x, y):
    f = _SEG_OPS.get(op)
    if f is None:
        raise PreconditionError(f"unknown real operation {op!r}")
    approx = SeqOracle(lambda n: f(x.approx(n), y.approx(n)), f"{x.name} {op} {y.name}")
    if op == "*":
        # width of a product ≤ (|x| + |y| + 1) · max width, once widths are ≤ 1
        e = max(_bound_exp(x), _bound_exp(y)) + 2
        base = max(x.modulus(0), y.modulus(0))
        modulus = lambda n: max(base, x.modulus(n + e), y.modulus(n + e))
    else:
        modulus = lambda n: max(x.modulus(n + 1), y.modulus(n + 1))
    return Real(approx, modulus, name=f"({x.name} {op} {y.name})")


def real_sup(x, y):
    return real_arith("max", x, y)


def real_inf(x, y):
    return real_arith("min", x, y)


@dataclass(frozen=True)
class Separation:
    verdict: str   # "lt", "gt", or "unsep"
    index: object = None


def real_compare(x, y, n):
    """Look for an index k <= the precision-n index with x(k), y(k) apart."""
    top = max(x.modulus(n), y.modulus(n))
    for k in range(top + 1):
        a, b = x.approx(k), y.approx(k)
        if a.lt(b):
            return Separation("lt", k)
        if b.lt(a):
            return Separation("gt", k)
    return Separation("unsep", None)


def real_le_at(x, y, n):
    """No witness of y < x up to precision n."""
    return real_compare(x, y, n).verdict != "gt"


def cauchy_to_real(alpha, gamma, check=64):
    """The real β(m) = [α(γ(m)) − 2^(1−m), α(γ(m)) + 2^(1−m)].

    alpha and gamma are callables.  Strict nesting of consecutive segments is
    checked as they are produced; a failure means gamma is not a modulus.
    """

    def seg(m):
        c = rat(alpha(gamma(m)))
        return Seg(c - 2 * pow2(m), c + 2 * pow2(m))

    def approx(m):
        s = seg(m)
        if m and not s.strictly_inside(seg(m - 1)):
            raise WitnessViolation(f"segments {m - 1} and {m} are not nested; bad modulus")
        return s

    x = Real(approx, lambda n: n + 2, name="limit")
    for m in range(min(check, 8)):
        x.approx(m)
    return x


def cantor_intersection(a, b, delta, check=6):
    """The real squeezed between a^n (increasing) and b^n (decreasing).

    delta(n) is an index p with b^p − a^p ≤ 2^-n.  At precision n the result
    is [lo − 2^-n, hi + 2^-n] where lo, hi are endpoints of a^p, b^p read at
    precision n+2, p = delta(n+2).
    """
    for n in range(check):
        for u, v in ((a(n), a(n + 1)), (a(n + 1), b(n + 1)), (b(n + 1), b(n))):
            if not real_le_at(u, v, check + 4):
                raise PreconditionError(f"the sequences are not nested at index {n}")

    def approx(n):
        p = delta(n + 2)
        lo = a(p).at(n + 2).lo
        hi = b(p).at(n + 2).hi
        if lo > hi + pow2(n + 1):
            raise PreconditionError(f"a^{p} exceeds b^{p}")
        return Seg(lo - pow2(n), max(lo, hi) + pow2(n))

    return Real(approx, lambda n: n + 2, name="intersection")


# closed-and-separable subsets of R

class CSReal:
    """H generated by a family of reals m ↦ member(m)."""

    def __init__(self, member, name=None, size=None):
        self._member = member
        self._cache = {}
        self.name = name or "CS subset of R"
        self.size = size  # number of distinct generators, when finite and known

    def member(self, m):
        if m not in self._cache:
            self._cache[m] = self._member(m)
        return self._cache[m]

    @classmethod
    def from_rats(cls, qs, name=None):
        qs = [rat(q) for q in qs]
        return cls(lambda m: real_from_rat(qs[m % len(qs)]), name=name or f"closure of {qs}",
                   size=len(qs))

    @classmethod
    def from_reals(cls, xs, name=None):
        xs = list(xs)
        return cls(lambda m: xs[m % len(xs)], name=name, size=len(xs))

    def contains_member(self, s, budget=64, depth=40):
        """Index m < budget of a generator lying in s (strictly, at some approximation)."""
        for m in range(budget if self.size is None else min(budget, self.size)):
            x = self.member(m)
            for k in range(depth):
                if x.approx(k).strictly_inside(s):
                    return m
                if x.approx(k).apart(s):
                    break
        return None


def dyadic_unit_point(m):
    """0, 1, 1/2, 1/4, 3/4, 1/8, ...: the dyadics of [0,1] breadth first."""
    if m < 2:
        return Rat(m)
    L = (m - 1).bit_length()
    return Rat(2 * (m - (1 << (L - 1)) - 1) + 1, 1 << L)


def dyadic_unit_interval():
    return CSReal(lambda m: real_from_rat(dyadic_unit_point(m)), name="[0,1]")


def _zigzag(z):
    return (z + 1) // 2 if z % 2 else -(z // 2)


def dyadic_seg(k):
    """k-th segment [i/2^l, (i+w)/2^l] over all levels l, integers i and w ≥ 0."""
    l, r = unpair(k)
    i, w = unpair(r)
    return Seg(Rat(_zigzag(i), 1 << l), Rat(_zigzag(i) + w, 1 << l))


def centered_seg(k):
    """Stage J(l, z): the segment of width 2^(1−l) centered at j/2^l, j the z-th integer.

    Each level overlaps by halves, so every real lies strictly inside one segment per level.
    """
    l, z = unpair(k)
    j = _zigzag(z)
    return Seg(Rat(j - 1, 1 << l), Rat(j + 1, 1 << l))


def real_frame_enum(H):
    """Stage J(J(m, n), u) lists the u-th dyadic segment if it strictly contains member(m)'s n-th approximation."""

    def en(k):
        mn, u = unpair(k)
        m, n = unpair(mn)
        s = dyadic_seg(u)
        return s if H.member(m).approx(n).strictly_inside(s) else None

    return EnumerableSet(en, f"frame of {H.name}")


def clamp_real(u, x, y):
    return real_inf(y, real_sup(x, u))


def clamp_intersect(H, x, y, check=12):
    if real_compare(x, y, check).verdict == "gt":
        raise PreconditionError("clamp needs x <= y")
    return CSReal(lambda m: clamp_real(H.member(m), x, y), name=f"{H.name} ∩ [x, y]", size=H.size)


@dataclass
class TBVerdict:
    passed: bool
    failure: object = None  # (m, i) with no j < delta(m) close enough to generator i


def _close(x, y, m):
    """|x − y| < 2^-m, witnessed at some approximation up to precision m+4."""
    d = real_arith("-", x, y)
    for k in range(d.modulus(m + 4) + 1):
        s = d.approx(k)
        if -pow2(m) < s.lo and s.hi < pow2(m):
            return True
    return False


def totally_bounded_check(gamma, delta, m_max, samples=16):
    for m in range(m_max + 1):
        dm = delta(m)
        for i in range(dm + 1, dm + 1 + samples):
            if not any(_close(gamma(i), gamma(j), m) for j in range(dm)):
                return TBVerdict(False, (m, i))
    return TBVerdict(True)


def validate_located(H, decide, pairs, budget=64):
    """Check a dichotomy oracle: decide(s, t) = 1 means t contains an element of H,
    0 means s contains none.  Only finite H can be checked for the second claim."""
    for s, t in pairs:
        v = decide(s, t)
        if v == 1 and H.contains_member(t, budget) is None:
            return False, (s, t)
        if v == 0 and H.contains_member(s, budget) is not None:
            return False, (s, t)
    return True, None


def extremum(H, covers, which="min", check=8, budget=64):
    """Least (or largest) element of H from level covers.

    covers(n) lists segments of width exactly 2^-n, each containing an element
    of H, that together cover H.  β(n) is the segment of level n reaching
    furthest down (up, for max), and the result is n ↦ double(β(2n)).
    """
    if which not in ("min", "max"):
        raise PreconditionError("which is 'min' or 'max'")
    levels = {}

    def beta(n):
        if n not in levels:
            segs = list(covers(n))
            if not segs:
                raise WitnessViolation(f"level {n} is empty")
            for s in segs:
                if s.width != pow2(n):
                    raise WitnessViolation(f"segment {s} at level {n} does not have width 2^-{n}")
            levels[n] = min(segs, key=lambda s: s.lo) if which == "min" else max(segs, key=lambda s: s.hi)
        return levels[n]

    for n in range(check):
        if H.contains_member(beta(n), budget) is None:
            raise WitnessViolation(f"{beta(n)} contains no generator found within {budget}")
    return Real(lambda n: double_seg(beta(2 * n)), lambda n: (n + 2) // 2, name=f"{which} of {H.name}")


# partial continuous functions from R to R

class PartialRealFun:
    """Given by a monotone interval extension ext: Seg ↦ Seg or None.

    ext(r) must contain f(u) for every u in r where f is defined, and shrink as
    r shrinks.  The graph lists entries (r, ext(r)) for the segments of
    ``centered_seg``.
    """

    def __init__(self, ext, name=None, graph=None):
        self.ext = ext
        self.name = name or "partial real function"
        if graph is None:
            def en(k):
                r = centered_seg(k)
                s = ext(r)
                return None if s is None else (r, s)

            graph = EnumerableSet(en, f"graph of {self.name}")
        self.graph = graph

    @classmethod
    def identity(cls):
        return cls(lambda r: r, name="identity")

    @classmethod
    def affine(cls, a, b, lo=None, hi=None):
        """t ↦ a·t + b, defined on segments inside [lo, hi] when bounds are given."""
        a, b = rat(a), rat(b)

        def ext(r):
            if (lo is not None and r.lo < rat(lo)) or (hi is not None and r.hi > rat(hi)):
                return None
            return Seg(a * r.lo + b, a * r.hi + b) if a >= 0 else Seg(a * r.hi + b, a * r.lo + b)

        return cls(ext, name=f"{a}·t + {b}")

    @classmethod
    def empty(cls):
        return cls(lambda r: None, name="empty", graph=EnumerableSet.empty())

    @classmethod
    def from_entries(cls, entries, name=None):
        """A finite graph; ext(r) is the intersection of outputs of entries whose input contains r."""
        entries = [(r, s) for r, s in entries]

        def ext(r):
            outs = [s for u, s in entries if r.inside(u)]
            if not outs:
                return None
            lo = max(s.lo for s in outs)
            hi = min(s.hi for s in outs)
            return Seg(lo, hi) if lo <= hi else None

        return cls(ext, name=name, graph=EnumerableSet.from_list(entries))


def real_apply(phi, x, budget=200):
    """φ(x): y(n) is ext(x(m)) widened by 2^-(n+3) for the least m (not below the
    one used for n−1) with ext(x(m)) narrower than 2^-(n+2)."""
    used = {}

    def index(n):
        if n in used:
            return used[n]
        start = index(n - 1) if n else 0
        for m in range(start, start + budget):
            s = phi.ext(x.approx(m))
            if s is not None and s.width < pow2(n + 2):
                used[n] = m
                return m
        raise BudgetExceeded(f"{phi.name}: precision {n} not reached within {budget} approximations")

    def approx(n):
        return phi.ext(x.approx(index(n))).widen(pow2(n + 3))

    return Real(approx, lambda n: n, name=f"{phi.name}({x.name})")


def real_apply_enum(phi, x, budget=2000, depth=64):
    """φ(x) by least-stage selection in the graph.

    y(0) is the output of the first entry ⟨r, s⟩ with some x(k) ⊑ r and
    length(s) < 1; y(n+1) is the output of the first such entry with
    length(s) < 2^-(n+1) and s ⊏ y(n).
    """
    chosen = []

    def fits(r):
        for k in range(depth):
            xk = x.approx(k)
            if xk.inside(r):
                return True
            if xk.apart(r):
                return False
        return False

    def approx(n):
        while len(chosen) <= n:
            i = len(chosen)
            for p in range(budget):
                e = phi.graph(p)
                if e is None:
                    continue
                r, s = e
                if s.width < pow2(i) and (i == 0 or s.strictly_inside(chosen[-1])) and fits(r):
                    chosen.append(s)
                    break
            else:
                raise BudgetExceeded(f"{phi.name}: no entry for precision {i} within {budget} stages")
        return chosen[n]

    return Real(approx, lambda n: n, name=f"{phi.name}({x.name})")


def real_restrict(phi, H, budget=64):
    """φ on segments that contain a generator of H."""

    def ext(r):
        return phi.ext(r) if H.contains_member(r, budget) is not None else None

    return PartialRealFun(ext, name=f"{phi.name} on {H.name}")


def real_extend_clamp(phi, H, x, y):
    """ψ(u) = φ(inf(sup(u, x), y)), on segment inputs."""

    def ext(r):
        j = 60 if r.width == 0 else max(0, -math.floor(math.log2(r.width)))
        k = max(x.modulus(j), y.modulus(j))
        return phi.ext(seg_min(seg_max(r, x.approx(k)), y.approx(k)))

    return PartialRealFun(ext, name=f"{phi.name} clamped")


def dec_str(x, digits):
    """Decimal enclosure of x with the given number of digits, rounded outward."""
    n = math.ceil(digits * math.log2(10)) + 1
    s = x.at(n)
    scale = 10 ** digits
    lo = math.floor(s.lo * scale)
    hi = math.ceil(s.hi * scale)

    def fmt(v):
        sign = "-" if v < 0 else ""
        v = abs(v)
        return f"{sign}{v // scale}.{v % scale:0{digits}d}" if digits else f"{sign}{v}"

    return fmt(lo), fmt(hi)
