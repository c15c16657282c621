"""Coverings of subsets of R by rational segments, and their translation to bars.

"x is contained in s" always means strict containment: some approximation
x(n) lies strictly inside s.  So a point is never covered by a segment it is
an endpoint of, and grid checks on [0,1] run over an interior region.
"""

from dataclasses import dataclass, field
from fractions import Fraction as Rat
import math
import re

from .errors import BudgetExceeded, InvalidInput, PreconditionError, WitnessViolation
from .reals import (PartialRealFun, Real, Seg, pow2, rat, real_apply, real_compare,
                    real_from_rat)
from .seqcode import is_binary_seq, is_prefix, unpair
from .streams import EnumerableSet


def cover_of(segs, name=None):
    """A finite cover listed in order."""
    return EnumerableSet.from_list(list(segs), name or "finite cover")


def _listed(C, budget):
    out = []
    for k in range(budget):
        s = C(k)
        if s is not None:
            out.append((k, s))
    return out


def _is_finite(C, budget):
    return hasattr(C, "elements") and len(C.elements) <= budget


@dataclass
class Containment:
    sample: int
    seg: object = None     # None when no listed segment was found
    stage: object = None
    approx_index: object = None


@dataclass
class CoverReport:
    hits: list = field(default_factory=list)

    @property
    def all_covered(self):
        return all(h.seg is not None for h in self.hits)


def cover_check(H, C, samples=16, precision=30, budget=256):
    xs = [H.member(m) for m in range(samples)] if isinstance(samples, int) else list(samples)
    segs = _listed(C, budget)
    rep = CoverReport()
    for i, x in enumerate(xs):
        hit = Containment(i)
        for n in range(precision + 1):
            xn = x.approx(n)
            found = next(((k, s) for k, s in segs if xn.strictly_inside(s)), None)
            if found:
                hit = Containment(i, found[1], found[0], n)
                break
        rep.hits.append(hit)
    return rep


def interior_cells(resolution):
    """Closed cells [k/2^r, (k+1)/2^r] covering [2^-r, 1 − 2^-r]."""
    d = 1 << resolution
    return [Seg(Rat(k, d), Rat(k + 1, d)) for k in range(1, d - 1)]


@dataclass
class SubcoverResult:
    segs: object = None       # a finite subcover (tuple of Segs, in listing order)
    survivor: object = None   # a cell no listed segment contains
    refuted: bool = False     # True when the cover is finite and fully listed


def finite_subcover_search(C, resolution=6, budget=1024):
    """Search a finite subcover of the interior region of [0,1] at a resolution."""
    segs = _listed(C, budget)
    used = {}
    for cell in interior_cells(resolution):
        found = next(((k, s) for k, s in segs if cell.strictly_inside(s)), None)
        if found is None:
            return SubcoverResult(survivor=cell, refuted=_is_finite(C, budget))
        used[found[0]] = found[1]
    return SubcoverResult(segs=tuple(used[k] for k in sorted(used)))


def _covers_region(segs, resolution):
    return all(any(c.strictly_inside(s) for s in segs) for c in interior_cells(resolution))


def lebesgue_number(B, resolution=6, max_q=40):
    """p such that points of the interior region closer than 2^-p share a segment of B.

    The margin ε = 2^-q is the smallest power of two found with the ε-shrunken
    segments still covering the region; then p = q.
    """
    B = list(B)
    if not _covers_region(B, resolution):
        raise PreconditionError("the segments do not cover the interior of [0,1] at this resolution")
    for q in range(max_q + 1):
        e = pow2(q)
        shrunk = [Seg(s.lo + e, s.hi - e) for s in B if s.width > 2 * e]
        if _covers_region(shrunk, resolution):
            return q
    raise BudgetExceeded(f"no margin down to 2^-{max_q}")


def verify_lebesgue(B, p, resolution=6):
    """Brute force on the grid of spacing 2^-(p+3) inside the interior region."""
    B = list(B)
    step = pow2(p + 3)
    lo, hi = pow2(resolution), 1 - pow2(resolution)
    pts = []
    x = math.ceil(lo / step) * step
    while x <= hi:
        pts.append(x)
        x += step
    reach = 1 << 3  # points closer than 2^-p are fewer than 8 grid steps apart
    for i, x in enumerate(pts):
        for y in pts[i: i + reach]:
            if abs(x - y) < pow2(p) and not any(s.contains_rat(x) and s.contains_rat(y) for s in B):
                return False, (x, y)
    return True, None


# refinement and envelopes

class RefinedCover:
    """Each listed segment ⟨p, q⟩ of β, at stage k, is split at N+1 equally
    spaced points p = p_0 < ... < p_N = q and replaced by the pieces
    ⟨p_i, p_(i+2)⟩, where N is the least number ≥ 2 with 2(q−p)/N < 2^-k.
    An empty stage of β becomes one empty stage.
    """

    def __init__(self, beta):
        self.beta = beta
        self._blocks = []   # (start stage in γ, pieces)
        self._end = 0
        self.enum = EnumerableSet(self._stage, "refined cover")

    @staticmethod
    def split(s, k):
        w = s.width
        if w == 0:
            return []
        N = max(2, math.floor(2 * w * (1 << k)) + 1)
        pts = [s.lo + w * i / N for i in range(N + 1)]
        return [Seg(pts[i], pts[i + 2]) for i in range(N - 1)]

    def _grow(self):
        k = len(self._blocks)
        s = self.beta(k)
        pieces = (self.split(s, k) if s is not None else []) or [None]
        self._blocks.append((self._end, pieces))
        self._end += len(pieces)

    def _stage(self, i):
        while self._end <= i:
            self._grow()
        for start, pieces in reversed(self._blocks):
            if start <= i:
                return pieces[i - start]
        raise AssertionError("unreachable")

    def __call__(self, i):
        return self.enum(i)

    def block(self, k):
        while len(self._blocks) <= k:
            self._grow()
        return self._blocks[k][1]

    def schedule(self, m):
        """A stage after which every listed piece is narrower than 2^-m."""
        while len(self._blocks) < m + 1:
            self._grow()
        return self._blocks[m][0]

    def pieces_before(self, m):
        out = []
        for k in range(m):
            out.extend(p for p in self.block(k) if p is not None)
        return out


def refine_cover(beta):
    return RefinedCover(beta)


def _tent_value(s, x):
    return max(Rat(0), min(x - s.lo, s.hi - x))


def tent_range(s, r):
    """Exact range of x ↦ max(0, min(x − p, q − x)) over r."""
    lo = min(_tent_value(s, r.lo), _tent_value(s, r.hi))
    peak = min(max(s.mid, r.lo), r.hi)
    return Seg(lo, _tent_value(s, peak))


def tent(s):
    return PartialRealFun(lambda r: tent_range(s, r), name=f"tent over {s}")


def envelope(cover, max_blocks=40):
    """The supremum of the tents over a cover.

    cover is a finite list of segments, or a RefinedCover.  For the latter, an
    input segment of width about 2^-m only looks at blocks below m+1; the tents
    of later pieces stay below 2^-(m+1).
    """
    if isinstance(cover, RefinedCover):
        def ext(r):
            m = max_blocks if r.width == 0 else min(max_blocks, max(0, -math.floor(math.log2(r.width))))
            segs = cover.pieces_before(m + 1)
            ranges = [tent_range(s, r) for s in segs]
            lo = max((g.lo for g in ranges), default=Rat(0))
            hi = max([g.hi for g in ranges] + [pow2(m + 1)])
            return Seg(lo, hi)
    else:
        segs = list(cover)

        def ext(r):
            ranges = [tent_range(s, r) for s in segs]
            if not ranges:
                return Seg(0, 0)
            return Seg(max(g.lo for g in ranges), max(g.hi for g in ranges))

    return PartialRealFun(ext, name="envelope")


def reciprocal_demo(phi, m, samples=(), precision=20):
    """x ↦ 1/φ(x), given that φ stays above 2^-m.

    Sample inputs are checked first; a value not shown to exceed 2^-m is
    rejected.  Segment reciprocals use the bound: ⟨1/q, 1/max(p, 2^-m)⟩.
    """
    floor_ = pow2(m)
    bound = real_from_rat(floor_)
    for x in samples:
        y = real_apply(phi, x)
        if real_compare(bound, y, precision).verdict != "lt":
            raise WitnessViolation(f"{phi.name} is not shown to exceed 2^-{m} at a sample")

    def ext(r):
        s = phi.ext(r)
        if s is None:
            return None
        if s.hi <= floor_:
            raise WitnessViolation(f"{phi.name} has a value at most 2^-{m} on {r}")
        return Seg(1 / s.hi, 1 / max(s.lo, floor_))

    return PartialRealFun(ext, name=f"1/{phi.name}")


# dyadic segments and special covers

def is_dyadic(q):
    d = rat(q).denominator
    return d & (d - 1) == 0


def dyadic_map(b):
    """Bisect ⟨0,1⟩ left for 0 and right for 1."""
    b = tuple(b)
    if not is_binary_seq(b):
        raise InvalidInput(f"{b} is not binary")
    lo, hi = Rat(0), Rat(1)
    for d in b:
        mid = (lo + hi) / 2
        lo, hi = (lo, mid) if d == 0 else (mid, hi)
    return Seg(lo, hi)


def dyadic_unmap(s):
    """The binary sequence b with dyadic_map(b) = s, or InvalidInput."""
    w = s.width
    if w <= 0 or w.numerator != 1 or not is_dyadic(w):
        raise InvalidInput(f"{s} is not a dyadic bisection segment")
    n = w.denominator.bit_length() - 1
    k = s.lo * (1 << n)
    if k.denominator != 1 or not 0 <= k < (1 << n):
        raise InvalidInput(f"{s} is not a dyadic bisection segment")
    k = int(k)
    return tuple((k >> (n - 1 - i)) & 1 for i in range(n))


@dataclass
class SpecialVerdict:
    valid: bool
    reason: str = ""


def special_validate(X, resolution=8):
    X = list(X)
    for s in X:
        if not (is_dyadic(s.lo) and is_dyadic(s.hi)):
            return SpecialVerdict(False, f"{s} has a non-dyadic endpoint")
    for i, s in enumerate(X):
        for t in X[i + 1:]:
            if s != t and not (s.hi <= t.lo or t.hi <= s.lo):
                return SpecialVerdict(False, f"{s} and {t} overlap in more than an endpoint")
    d = 1 << resolution
    for k in range(3 * d):
        x = Rat(2 * k + 1, 6 * d)  # never dyadic
        if not any(s.contains_rat(x) for s in X):
            return SpecialVerdict(False, f"{x} lies in no element")
    for k in range(d + 1):
        x = Rat(k, d)
        if any(s.contains_rat(x) for s in X):
            continue
        ends = sum((s.lo == x) + (s.hi == x) for s in X)
        need = 1 if k in (0, d) else 2
        if ends != need:
            return SpecialVerdict(False, f"{x} is an endpoint of {ends} elements, expected {need}")
    return SpecialVerdict(True)


def _bridges(X):
    return [Seg((s.lo + s.hi) / 2, (t.lo + t.hi) / 2) for s in X for t in X if s.hi == t.lo and s != t]


def x_plus(X):
    """X together with a bridge ⟨(p+q)/2, (q+r)/2⟩ for each ⟨p,q⟩, ⟨q,r⟩ in X."""
    if isinstance(X, EnumerableSet):
        def en(k):
            i, j = unpair(k)
            if i == 0:
                return X(j)
            a, b = unpair(i - 1)
            s, t = X(a), X(b)
            if s is None or t is None or s.hi != t.lo or s == t:
                return None
            return Seg((s.lo + s.hi) / 2, (t.lo + t.hi) / 2)

        return EnumerableSet(en, "bridged cover")
    X = list(X)
    return X + [b for b in _bridges(X) if b not in X]


def bar_to_special(X):
    X = [tuple(s) for s in X]
    for i, s in enumerate(X):
        if not is_binary_seq(s):
            raise InvalidInput(f"{s} is not binary")
        for t in X[i + 1:]:
            if is_prefix(s, t) or is_prefix(t, s):
                raise PreconditionError(f"{s} and {t} are comparable; keep only minimal elements")
    return sorted({dyadic_map(s) for s in X}, key=lambda s: (s.lo, s.hi))


def special_to_bar(Y):
    return sorted({dyadic_unmap(s) for s in Y}, key=lambda b: (len(b), b))


@dataclass
class MidpointWitness:
    point: Rat
    real: Real
    apart_at: dict  # segment -> index n with x(n) apart from it


def midpoint_witness(Y, prefix, max_index=200):
    """The midpoint of dyadic_map(prefix), shown apart from every element of Y."""
    x = real_from_rat(dyadic_map(prefix).mid)
    apart = {}
    for s in Y:
        n = next((n for n in range(max_index) if x.approx(n).apart(s)), None)
        if n is None:
            raise WitnessViolation(f"the midpoint is not apart from {s}")
        apart[s] = n
    return MidpointWitness(dyadic_map(prefix).mid, x, apart)


# text form: one segment per line as [p, q], endpoints written k/2^n

_DYADIC = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(?:2\s*\^\s*(\d+)|(\d+)))?\s*$")


def parse_dyadic(text):
    m = _DYADIC.match(text)
    if not m:
        raise InvalidInput(f"not a dyadic rational: {text!r}")
    num, exp, den = m.groups()
    q = Rat(int(num), 1 << int(exp) if exp else int(den) if den else 1)
    if not is_dyadic(q):
        raise InvalidInput(f"not a dyadic rational: {text!r}")
    return q


def format_dyadic(q):
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/2^{q.denominator.bit_length() - 1}"


def parse_cover(text):
    out = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if not (line.startswith("[") and line.endswith("]")) or line.count(",") != 1:
            raise InvalidInput(f"line {ln}: expected [p, q]")
        p, q = (parse_dyadic(x) for x in line[1:-1].split(","))
        if p > q:
            raise InvalidInput(f"line {ln}: {p} > {q}")
        out.append(Seg(p, q))
    return out


def format_cover(cover):
    return "".join(f"[{format_dyadic(s.lo)}, {format_dyadic(s.hi)}]\n" for s in cover)
