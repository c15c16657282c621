"""Closed-and-separable subsets of Baire space, spreads, fans, and bars.

A ``CSSet`` is given by a generator oracle whose coordinate sequences
(``project(gen, m)``) form a dense family.  A ``Spread`` is given by a
decidable frame (the admissible finite sequences); with a branching bound it
is a fan, and a ``ManifestFan`` also lists its levels.

Bars are sets of finite sequences (tuples).  Functions produced here are
``PartialNFun`` graphs from ``contfun``.
"""

from dataclasses import dataclass, field
import math

from .contfun import PartialNFun
from .errors import BudgetExceeded, NoInhabitant, PreconditionError
from .seqcode import bin_decode_seq, encode, is_prefix, pair, unpair
from .streams import UNKNOWN, DecidableSet, EnumerableSet, SeqOracle, project


# enumerations of finite sequences

def binary_word(m):
    """m-th binary sequence in length-then-lexicographic order."""
    L = (m + 1).bit_length() - 1
    r = m + 1 - (1 << L)
    return tuple((r >> (L - 1 - i)) & 1 for i in range(L))


def binary_index(s):
    r = 0
    for b in s:
        r = 2 * r + b
    return (1 << len(s)) - 1 + r


def word(m):
    """m-th finite sequence of naturals, ordered by length + sum of items."""
    if m == 0:
        return ()
    L = m.bit_length()
    r = m - (1 << (L - 1))
    bits = tuple((r >> (L - 2 - i)) & 1 for i in range(L - 1)) + (1,)
    return bin_decode_seq(bits)[0]


def binary_words(length):
    return [binary_word(m) for m in range((1 << length) - 1, (1 << (length + 1)) - 1)]


# spreads and fans

class Spread:
    """A spread given by its admissibility predicate on finite sequences.

    ``width`` (an int, or a function of the node) bounds the values of
    admissible immediate prolongations; when given, the spread is a fan.
    ``search`` caps the child search of spreads without such a bound.
    """

    def __init__(self, admissible, width=None, name=None, search=64):
        self._admissible = admissible
        self._width = width
        self.name = name or "spread"
        self.search = search
        self.frame = DecidableSet(admissible, name=f"frame of {self.name}")
        self._nodes = None

    @classmethod
    def from_frame(cls, frame, width=None, name=None):
        return cls(frame.contains, width=width, name=name or frame.name)

    @property
    def is_fan(self):
        return self._width is not None

    def width(self, s):
        w = self._width
        return w(s) if callable(w) else w

    def admissible(self, s):
        return bool(self._admissible(tuple(s)))

    __contains__ = admissible

    def children(self, s):
        s = tuple(s)
        bound = self.width(s) if self.is_fan else self.search
        return [s + (i,) for i in range(bound) if self._admissible(s + (i,))]

    def least_child(self, s):
        s = tuple(s)
        bound = self.width(s) if self.is_fan else self.search
        for i in range(bound):
            if self._admissible(s + (i,)):
                return s + (i,)
        raise BudgetExceeded(f"no admissible prolongation of {s} below {bound}")

    def path_through(self, s):
        """The member that passes through s and then always takes the least child."""
        cells = list(s)

        def fn(n):
            while len(cells) <= n:
                cells.extend(self.least_child(tuple(cells))[len(cells):])
            return cells[n]

        return SeqOracle(fn, f"path of {self.name} through {tuple(s)}")

    def node(self, k):
        """k-th admissible node (breadth first for fans), or None if k is not admissible."""
        if not self.is_fan:
            s = word(k)
            return s if self._admissible(s) else None
        if self._nodes is None:
            self._nodes = [()] if self._admissible(()) else []
            self._frontier = list(self._nodes)
        while len(self._nodes) <= k and self._frontier:
            nxt = [c for s in self._frontier for c in self.children(s)]
            self._nodes.extend(nxt)
            self._frontier = nxt
        return self._nodes[k] if k < len(self._nodes) else None

    def frame_enum(self):
        return EnumerableSet(self.node, f"frame of {self.name}")

    def to_cs(self):
        """The spread as a CS set: member k runs through the k-th node."""

        def member(k):
            s = self.node(k)
            return self.path_through(s if s is not None else ())

        return CSSet.from_family(member, name=self.name)

    def check_frame_law(self, depth):
        """Every admissible node up to depth has an admissible child; ⟨⟩ admissible."""
        if not self._admissible(()):
            return False
        level = [()]
        for _ in range(depth):
            nxt = []
            for s in level:
                kids = self.children(s)
                if not kids:
                    return False
                nxt.extend(kids if self.is_fan else kids[:2])
            level = nxt
        return True


class ManifestFan(Spread):
    """A fan whose levels are listed; levels are computed and checked lazily."""

    def __init__(self, admissible, width, name=None, width_bound=None):
        if width is None:
            raise PreconditionError("a manifest fan needs a branching bound")
        super().__init__(admissible, width=width, name=name)
        self.width_bound = width_bound
        self._levels = [frozenset([()]) if self._admissible(()) else frozenset()]
        self._delta = {}

    def level(self, n):
        while len(self._levels) <= n:
            prev = self._levels[-1]
            nxt = frozenset(c for s in prev for c in self.children(s))
            if self.width_bound is not None and len(nxt) > self.width_bound:
                raise BudgetExceeded(
                    f"level {len(self._levels)} of {self.name} has {len(nxt)} nodes, "
                    f"over the bound {self.width_bound}")
            self._levels.append(nxt)
        return self._levels[n]

    def sorted_level(self, n):
        return sorted(self.level(n))

    def delta(self, n):
        """Largest value at position n among admissible sequences of length n+1."""
        if n not in self._delta:
            self._delta[n] = max(s[n] for s in self.level(n + 1))
        return self._delta[n]

    def level_code(self, n, limit=10 ** 6):
        """The number b with D_b = codes of level n, when that number is small."""
        codes = [encode(s) for s in self.level(n)]
        top = max(codes)
        if top > limit:
            raise BudgetExceeded(f"level {n} codes reach {top}; the level code is astronomically large")
        return encode(1 if k in set(codes) else 0 for k in range(top + 1))

    def cross_check(self, depth):
        """Levels agree with the frame predicate on all sequences of bounded width."""
        for n in range(depth + 1):
            lv = self.level(n)
            if any(not self.admissible(s) or len(s) != n for s in lv):
                return False
            for s in self.level(n - 1) if n else ():
                for i in range(self.width(s) + 1):
                    if self.admissible(s + (i,)) != (s + (i,) in lv):
                        return False
        return True


def fan_manifest(fan, width_bound, depth):
    mf = ManifestFan(fan.admissible, fan._width, name=fan.name, width_bound=width_bound)
    mf.level(depth)
    return mf


def bounded_fan(width, name=None):
    """All sequences with values below width (width 2 gives Cantor space)."""
    return ManifestFan(lambda s: all(x < width for x in s), width,
                       name=name or f"{width}-ary fan")


def cantor():
    return bounded_fan(2, "Cantor space")


def truncated_fan(width, depth, name=None):
    """Values below width before position depth, zeros afterwards."""
    return ManifestFan(lambda s: all(x < width if i < depth else x == 0 for i, x in enumerate(s)),
                       width, name=name or f"{width}-ary fan cut at {depth}")


def singleton_fan(point=None):
    """The fan whose only member is point (default: all zeros)."""
    point = point or SeqOracle.zero()
    return ManifestFan(lambda s: all(x == point(i) for i, x in enumerate(s)),
                       lambda s: point(len(s)) + 1, name="singleton fan")


def baire():
    return Spread(lambda s: True, name="Baire space")


def spread_of(pred, width=None, name=None):
    if width is None:
        return Spread(pred, name=name)
    return ManifestFan(pred, width, name=name)


# CS sets

class CSSet:
    def __init__(self, gen, name=None, family=None):
        self.gen = gen
        self.name = name or "CS set"
        self._family = family
        self._members = {}

    @classmethod
    def from_family(cls, member, name=None):
        """member(m) is the m-th element of the dense family (a SeqOracle)."""
        cache = {}

        def get(m):
            if m not in cache:
                cache[m] = member(m)
            return cache[m]

        def gen(k):
            m, n = unpair(k)
            return get(m)(n)

        cs = cls(SeqOracle(gen, f"gen of {name}"), name=name, family=get)
        return cs

    def member(self, m):
        if self._family is not None:
            return self._family(m)
        if m not in self._members:
            self._members[m] = project(self.gen, m)
        return self._members[m]

    def frame_enum(self):
        """Stage J(m, n) lists the length-n prefix of the m-th family member."""

        def en(k):
            m, n = unpair(k)
            return self.member(m).prefix(n)

        return EnumerableSet(en, f"frame of {self.name}")


def frame_enum(F):
    return F.frame_enum()


def cs_from_frame(E, budget=10_000, name=None):
    """A CS set whose family runs through every listed frame element.

    Member n starts with the n-th listed element (or the first listed one when
    stage n lists nothing) and is then prolonged again and again by the
    earliest listed immediate prolongation.
    """
    first = E.find(lambda x: True, budget)
    if first is UNKNOWN:
        raise NoInhabitant(f"nothing listed in the first {budget} stages")
    start = E(first)
    scanned = [0]
    earliest = {}

    def prolong(s):
        if s in earliest:
            return earliest[s]
        while scanned[0] < budget:
            k = scanned[0]
            scanned[0] += 1
            x = E(k)
            if x is not None and x:
                parent = x[:-1]
                earliest.setdefault(parent, x)
                if parent == s:
                    return x
        raise BudgetExceeded(f"no listed prolongation of {s} within {budget} stages")

    def member(n):
        x = E(n)
        cells = list(x if x is not None else start)

        def fn(i):
            while len(cells) <= i:
                cells[:] = prolong(tuple(cells))
            return cells[i]

        return SeqOracle(fn, f"member {n}")

    return CSSet.from_family(member, name=name or f"CS set of {E.name}")


# bars

@dataclass
class PathVerdict:
    index: int
    hit_depth: object  # None when no prefix was found in the bar
    prefix: object = None


@dataclass
class BarReport:
    verdicts: list = field(default_factory=list)

    @property
    def all_hit(self):
        return all(v.hit_depth is not None for v in self.verdicts)

    @property
    def exhausted(self):
        return sum(v.hit_depth is None for v in self.verdicts)

    @property
    def max_depth(self):
        return max((v.hit_depth for v in self.verdicts if v.hit_depth is not None), default=None)


def _membership(B, budget):
    if isinstance(B, EnumerableSet):
        listed = B.truncate(budget)
        return lambda s: s in listed
    return B.contains


def bar_check(F, B, samples=16, depth=12, budget=1000):
    """For each sample path, the least n <= depth with its length-n prefix in B.

    samples is a count of family members of F, or an explicit list of oracles.
    """
    cs = F.to_cs() if isinstance(F, Spread) else F
    paths = [cs.member(m) for m in range(samples)] if isinstance(samples, int) else list(samples)
    inb = _membership(B, budget)
    rep = BarReport()
    for i, alpha in enumerate(paths):
        hit = None
        for n in range(depth + 1):
            s = alpha.prefix(n)
            if inb(s):
                hit = PathVerdict(i, n, s)
                break
        rep.verdicts.append(hit or PathVerdict(i, None))
    return rep


def enum_bar_to_dec_bar(E):
    """s is in the result iff some E(j), j < length(s), is a proper initial part of s."""

    def pred(s):
        L = len(s)
        heads = {s[:k] for k in range(L)}
        return any(E(j) in heads for j in range(L))

    return DecidableSet(pred, name=f"decidable version of {E.name}")


def bounded_subbar(X):
    """s is in the result iff some initial part of s is in X and has code length(s)."""

    def pred(s):
        L = len(s)
        for i in range(L + 1):
            c = encode(s[:i])
            if c > L:
                return False
            if c == L and X.contains(s[:i]):
                return True
        return False

    return DecidableSet(pred, name=f"bounded subbar of {X.name}")


def first_hit_local(B):
    def local(a):
        for p in range(len(a) + 1):
            if B.contains(a[:p]):
                return p
        return None

    return local


def _universe(F):
    if isinstance(F, Spread):
        return F.node
    if isinstance(F, CSSet):
        fe = F.frame_enum()
        return fe
    return word


def first_hit_fn(B, F=None):
    """φ(α) = least p with ᾱp in B; graph entries ⟨s, length(s)⟩ for minimal s in B."""
    universe = _universe(F)

    def en(k):
        s = universe(k)
        if s is None or not B.contains(s):
            return None
        if any(B.contains(s[:i]) for i in range(len(s))):
            return None
        return (s, len(s))

    return PartialNFun(EnumerableSet(en, f"first hit of {B.name}"), local=first_hit_local(B),
                       name=f"first hit of {B.name}")


class DiniSequence:
    """φ⁰ is the first-hit function, φⁿ⁺¹ = max(φⁿ − 1, 0)."""

    def __init__(self, B, F=None):
        self.B = B
        self.universe = _universe(F)
        self._hit = first_hit_local(B)
        self._cache = {}

    def __call__(self, n):
        if n not in self._cache:
            self._cache[n] = self._build(n)
        return self._cache[n]

    def _build(self, n):
        B, universe, hit = self.B, self.universe, self._hit

        def en(k):
            s = universe(k)
            if s is None or not B.contains(s) or any(B.contains(s[:i]) for i in range(len(s))):
                return None
            return (s, max(len(s) - n, 0))

        def local(a):
            p = hit(a)
            return None if p is None else max(p - n, 0)

        return PartialNFun(EnumerableSet(en), local=local, name=f"Dini function {n}")


def dini_build(B, F=None):
    return DiniSequence(B, F)


def positive_failure_witness(F, B_finite, depth, budget=1000):
    """A depth-length admissible prefix with no initial part in B_finite, else None."""
    bar = {tuple(b) for b in B_finite}
    if isinstance(F, Spread):
        stack = [()]
        while stack:
            s = stack.pop()
            if s in bar:
                continue
            if len(s) == depth:
                return s
            kids = F.children(s)
            stack.extend(reversed(kids))
        return None
    for m in range(budget):
        s = F.member(m).prefix(depth)
        if not any(s[:i] in bar for i in range(depth + 1)):
            return s
    return None


class DiniCounterexample:
    """φⁿ(α) = 0 if some ᾱj, j <= n, lies in X, else 1 (α in a manifest fan)."""

    def __init__(self, X, F, check_depth):
        self.X = X
        self.F = F
        self.witnesses = {}
        for n in range(check_depth + 1):
            layer = [s for k in range(n + 1) for s in F.level(k) if X.contains(s)]
            w = positive_failure_witness(F, layer, n)
            if w is None:
                raise PreconditionError(
                    f"the part of X of length <= {n} bars the fan; no positive failure")
            self.witnesses[n] = w
        self._cache = {}

    def value(self, s, n):
        return 0 if any(self.X.contains(s[:j]) for j in range(n + 1)) else 1

    def __call__(self, n):
        if n not in self._cache:
            F = self.F

            def en(k):
                lv = F.sorted_level(n)
                return (lv[k], self.value(lv[k], n)) if k < len(lv) else None

            def local(a):
                return self.value(a[:n], n) if len(a) >= n else None

            self._cache[n] = PartialNFun(EnumerableSet(en), local=local,
                                         name=f"Dini counterexample {n}")
        return self._cache[n]


def dini_counterexample(X, F, check_depth=6):
    return DiniCounterexample(X, F, check_depth)


@dataclass
class SubbarResult:
    bar: object = None       # sorted tuple of minimal hits, when every branch hits
    survivor: object = None  # an admissible prefix of length depth_cap that avoids B


def finite_subbar_bruteforce(fan, B, depth_cap):
    hits = []
    level = fan.sorted_level(0)
    for n in range(depth_cap + 1):
        alive = []
        for s in level:
            if B.contains(s):
                hits.append(s)
            else:
                alive.append(s)
        if not alive:
            return SubbarResult(bar=tuple(sorted(hits, key=lambda s: (len(s), s))))
        if n == depth_cap:
            return SubbarResult(survivor=alive[0])
        level = sorted(c for s in alive for c in fan.children(s))
        if fan.width_bound is not None and len(level) > fan.width_bound:
            raise BudgetExceeded(f"{len(level)} live nodes at depth {n + 1}")
    raise AssertionError("unreachable")


def perfect_witness(F, s, budget=1000):
    """Two incompatible admissible extensions of s, or UNKNOWN."""
    s = tuple(s)
    if isinstance(F, Spread):
        queue = [s]
        seen = 0
        while queue and seen < budget:
            t = queue.pop(0)
            seen += 1
            kids = F.children(t)
            if len(kids) >= 2:
                return kids[0], kids[1]
            queue.extend(kids)
        return UNKNOWN
    through = []
    horizon = len(s) + budget
    for m in range(budget):
        alpha = F.member(m)
        if alpha.prefix(len(s)) != s:
            continue
        for beta in through:
            for i in range(len(s), horizon):
                if alpha(i) != beta(i):
                    return alpha.prefix(i + 1), beta.prefix(i + 1)
        through.append(alpha)
    return UNKNOWN


def eventually_zero_cs():
    """All binary sequences that are eventually zero: member m spells m in binary."""

    def member(m):
        bits = tuple(int(b) for b in bin(m)[2:][::-1]) if m else ()
        return SeqOracle.from_prefix(bits)

    return CSSet.from_family(member, name="eventually zero binary sequences")


def uniform_bar(depth, width=2):
    return DecidableSet(lambda s: len(s) == depth and all(x < width for x in s),
                        name=f"all sequences of length {depth}")


def minimal_bars(max_depth):
    """All finite prefix-free sets of binary words of length <= max_depth that bar Cantor space."""
    if max_depth == 0:
        return [((),)]
    out = [((),)]
    sub = minimal_bars(max_depth - 1)
    for left in sub:
        for right in sub:
            out.append(tuple((0,) + s for s in left) + tuple((1,) + s for s in right))
    return out
