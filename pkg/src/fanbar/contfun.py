"""Enumerable partial continuous functions from Baire space to ℕ and to Baire space.

A graph is an ``EnumerableSet`` whose elements are entries ``(a, v)``: a finite
input sequence a and a value v (a natural for ``PartialNFun``, a finite output
sequence for ``PartialSeqFun``).  Any α passing through a gets value v.

Graphs may also carry ``local``: a function from a finite input to the value it
already determines (or None).  It has to agree with the graph; it only makes
evaluation fast, since scanning graph stages is hopeless for deep inputs.
"""

from dataclasses import dataclass

from .errors import BudgetExceeded, CorruptGraph, PreconditionError, WitnessViolation
from .seqcode import bin_decode_seq, decode, encode, is_prefix, pair, unpair
from .streams import UNKNOWN, EnumerableSet, SeqOracle


class PartialNFun:
    def __init__(self, graph, local=None, name=None):
        self.graph = graph if isinstance(graph, EnumerableSet) else EnumerableSet(graph)
        self.local = local
        self.name = name or "partial function to N"

    @classmethod
    def from_entries(cls, entries, name=None):
        entries = [(tuple(a), v) for a, v in entries]

        def local(s):
            for a, v in entries:
                if is_prefix(a, s):
                    return v
            return None

        return cls(EnumerableSet.from_list(entries), local=local, name=name)

    @classmethod
    def constant(cls, value):
        return cls.from_entries([((), value)], name=f"constant {value}")

    def __call__(self, alpha, budget=64):
        res = apply_n(self, alpha, budget)
        if not res.ok:
            raise BudgetExceeded(f"{self.name} undefined within {budget}", res.consumed)
        return res.value


class PartialSeqFun:
    def __init__(self, graph, local=None, name=None):
        self.graph = graph if isinstance(graph, EnumerableSet) else EnumerableSet(graph)
        self.local = local
        self.name = name or "partial function to Baire space"

    @classmethod
    def from_entries(cls, entries, name=None):
        entries = [(tuple(a), tuple(c)) for a, c in entries]

        def local(s):
            best = None
            for a, c in entries:
                if is_prefix(a, s) and (best is None or len(c) > len(best)):
                    best = c
            return best

        return cls(EnumerableSet.from_list(entries), local=local, name=name)

    @classmethod
    def identity(cls, universe=None):
        from .csets import word
        universe = universe or word
        return cls(EnumerableSet(lambda k: (universe(k), universe(k))), local=lambda s: tuple(s),
                   name="identity")

    def __call__(self, alpha, budget=256):
        return apply_seq(self, alpha, budget)


@dataclass
class ApplyResult:
    value: object = None
    entry: object = None       # the graph entry used (input prefix, value)
    index: object = None       # its enumeration stage, when found by scanning the graph
    prefix_len: object = None  # how much of the input the value depends on
    consumed: int = 0

    @property
    def ok(self):
        return self.entry is not None


def _scan_consistency(X, budget):
    entries = [e for e in (X.graph(k) for k in range(budget)) if e is not None]
    for i, (a, p) in enumerate(entries):
        for b, q in entries[i + 1:]:
            if is_prefix(a, b) or is_prefix(b, a):
                if isinstance(p, tuple):
                    ok = is_prefix(p, q) or is_prefix(q, p)
                else:
                    ok = p == q
                if not ok:
                    raise CorruptGraph(f"{X.name}: entries {(a, p)} and {(b, q)} disagree",
                                       (a, p), (b, q))


def check_consistency(X, budget):
    """Raise CorruptGraph if two entries among the first budget stages conflict."""
    _scan_consistency(X, budget)
    return True


def apply_n(X, alpha, budget=64, strict=False):
    """X(α): a value with its certificate, or an empty result after budget.

    With a local view the budget bounds the input prefix length; otherwise it
    bounds the number of graph stages scanned.  strict also scans the whole
    graph budget for inconsistent entries.
    """
    if strict:
        _scan_consistency(X, budget)
    if X.local is not None:
        for m in range(budget + 1):
            s = alpha.prefix(m)
            v = X.local(s)
            if v is not None:
                return ApplyResult(v, (s, v), None, m, m)
        return ApplyResult(consumed=budget)
    for k in range(budget):
        e = X.graph(k)
        if e is None:
            continue
        a, p = e
        if alpha.prefix(len(a)) == a:
            return ApplyResult(p, e, k, len(a), k + 1)
    return ApplyResult(consumed=budget)


def apply_seq(X, alpha, budget=256):
    """The lazy output X|α; index n needs an entry whose output is longer than n."""

    def out(n):
        if X.local is not None:
            for m in range(budget + 1):
                c = X.local(alpha.prefix(m))
                if c is not None and len(c) > n:
                    return c[n]
        else:
            for k in range(budget):
                e = X.graph(k)
                if e is None:
                    continue
                a, c = e
                if len(c) > n and alpha.prefix(len(a)) == a:
                    return c[n]
        raise BudgetExceeded(f"{X.name}: output index {n} not determined within {budget}", budget)

    return SeqOracle(out, f"{X.name}|{alpha.name}")


# adapters between the two kinds

def head(X):
    """The N-valued function α ↦ (X|α)(0)."""

    def en(k):
        e = X.graph(k)
        if e is None or not e[1]:
            return None
        return (e[0], e[1][0])

    local = None
    if X.local is not None:
        def local(s):
            c = X.local(s)
            return c[0] if c else None

    return PartialNFun(EnumerableSet(en), local=local, name=f"head of {X.name}")


def pad(X):
    """The Baire-valued function α ↦ ⟨X(α)⟩ followed by zeros."""

    def en(k):
        i, j = unpair(k)
        e = X.graph(i)
        if e is None:
            return None
        return (e[0], (e[1],) + (0,) * j)

    local = None
    if X.local is not None:
        def local(s):
            p = X.local(s)
            return None if p is None else (p,) + (0,) * len(s)

    return PartialSeqFun(EnumerableSet(en), local=local, name=f"padded {X.name}")


# composition

def comp_enum(alpha, beta):
    """Numeric enumeration of the composite relation.

    alpha and beta are oracles listing codes of pairs (value = code + 1, or 0).
    Stage m emits the least code ⟨a, c⟩, a, c < m, not emitted before, such that
    beta lists ⟨a, b⟩ and alpha lists ⟨b, c⟩ at stages below m, with b < m.
    So the result lists pairs ⟨a, c⟩ with ⟨a, b⟩ listed by beta and ⟨b, c⟩
    listed by alpha.
    """
    emitted = []
    done = set()

    def pairs(orc, m):
        out = []
        for i in range(m):
            v = orc(i)
            if v:
                s = decode(v - 1)
                if len(s) == 2:
                    out.append(s)
        return out

    def fill(m):
        while len(emitted) <= m:
            k = len(emitted)
            first = [(a, b) for a, b in pairs(beta, k) if a < k and b < k]
            second = [(b, c) for b, c in pairs(alpha, k) if b < k and c < k]
            cands = {encode((a, c)) for a, b in first for b2, c in second if b == b2}
            cands -= done
            if cands:
                best = min(cands)
                done.add(best)
                emitted.append(best + 1)
            else:
                emitted.append(0)

    def gamma(m):
        fill(m)
        return emitted[m]

    return SeqOracle(gamma, f"composite of {beta.name} then {alpha.name}")


def compose(X, Y):
    """X after Y, for Y Baire-valued: stage J(i, j) pairs Y's i-th entry ⟨a, b⟩ with
    X's j-th entry ⟨b', c⟩ whenever b' is an initial part of b."""

    def en(k):
        i, j = unpair(k)
        e, f = Y.graph(i), X.graph(j)
        if e is None or f is None:
            return None
        (a, b), (b2, c) = e, f
        return (a, c) if is_prefix(b2, b) else None

    local = None
    if X.local is not None and Y.local is not None:
        def local(s):
            b = Y.local(s)
            return None if b is None else X.local(b)

    kind = PartialSeqFun if isinstance(X, PartialSeqFun) else PartialNFun
    return kind(EnumerableSet(en), local=local, name=f"{X.name} after {Y.name}")


# restriction, retraction, covers

def restrict_to_cs(phi, F):
    """Keep φ only on F: stage J(m, n) pairs φ's m-th entry ⟨s, p⟩ with the n-th
    listed frame element t of F when s ⊑ t (and, for sequence values, p is no
    longer than t)."""
    frame = F.frame_enum()
    seqval = isinstance(phi, PartialSeqFun)

    def en(k):
        m, n = unpair(k)
        e, t = phi.graph(m), frame(n)
        if e is None or t is None:
            return None
        s, p = e
        if not is_prefix(s, t) or (seqval and len(t) < len(p)):
            return None
        return (t, p)

    local = None
    if phi.local is not None and hasattr(F, "admissible"):
        def local(t):
            if not F.admissible(t):
                return None
            v = phi.local(t)
            if v is not None and seqval:
                v = v[: len(t)]
            return v

    kind = PartialSeqFun if seqval else PartialNFun
    return kind(EnumerableSet(en), local=local, name=f"{phi.name} on {F.name}")


def frame_inclusion(F, G, depth):
    """Admissible nodes of F up to depth are admissible in G."""
    level = [()]
    for _ in range(depth + 1):
        if any(not G.admissible(s) for s in level):
            return False
        level = [c for s in level for c in F.children(s)]
    return True


class Retraction(PartialSeqFun):
    """Maps G onto its subspread F, fixing F pointwise.

    r(⟨⟩) = ⟨⟩, and r(b∗⟨i⟩) is r(b)∗⟨i⟩ when that is admissible in F, else
    r(b)∗⟨i0⟩ for the least admissible i0.  Entries are ⟨b∗c, r(b)⟩ for b∗c
    admissible in G.
    """

    def __init__(self, F, G, check_depth=None):
        if check_depth is not None and not frame_inclusion(F, G, check_depth):
            raise PreconditionError(f"{F.name} is not a subspread of {G.name}")
        self.F, self.G = F, G
        self._r = {(): ()}

        def en(k):
            i, j = unpair(k)
            t = G.node(i)
            if t is None or j > len(t):
                return None
            return (t, self.r(t[: len(t) - j]))

        def local(t):
            return self.r(t) if G.admissible(t) else None

        super().__init__(EnumerableSet(en), local=local, name=f"retraction of {G.name} onto {F.name}")

    def r(self, b):
        b = tuple(b)
        if b in self._r:
            return self._r[b]
        base = self.r(b[:-1])
        i = b[-1]
        if self.F.admissible(base + (i,)):
            out = base + (i,)
        else:
            try:
                out = self.F.least_child(base)
            except BudgetExceeded as exc:
                raise PreconditionError(f"frame law fails at {base}: {exc}") from exc
        self._r[b] = out
        return out


def retraction(F, G, check_depth=6):
    return Retraction(F, G, check_depth)


def cantor_cover_domain(F):
    """The binary spread of codes D(a)∗0^k that can still grow into a member of F."""
    from .csets import Spread

    def admissible(b):
        if any(x > 1 for x in b):
            return False
        a, k = bin_decode_seq(b)
        if not F.admissible(a):
            return False
        top = F.delta(len(a))
        return any(F.admissible(a + (i,)) for i in range(k, top + 1))

    return Spread(admissible, width=2, name=f"binary codes of {F.name}")


def fan_to_cantor_cover(F):
    """A map from Cantor space onto the manifest fan F.

    A binary input is first retracted onto the domain of the decoding map
    D(a)∗c ↦ a, then decoded.
    """
    from .csets import binary_word, cantor

    dom = cantor_cover_domain(F)
    R = Retraction(dom, cantor())

    def local(b):
        if any(x > 1 for x in b):
            return None
        return bin_decode_seq(R.r(b))[0]

    def en(k):
        b = binary_word(k)
        return (b, local(b))

    return PartialSeqFun(EnumerableSet(en), local=local, name=f"Cantor space onto {F.name}")


class PerfectCover(PartialSeqFun):
    """Maps a perfect spread onto Cantor space.

    The splitting tree starts at ⟨⟩ and gives each node s the children γ(s),
    δ(s); ζ sends γ(s) to ζ(s)∗⟨0⟩ and δ(s) to ζ(s)∗⟨1⟩.  An admissible node
    below some splitting node keeps the ζ of the last splitting node it extends
    while it stays inside the tree, and appends a 0 per step once it leaves.
    """

    def __init__(self, F, gamma=None, delta=None, budget=256):
        from .csets import perfect_witness

        self.F = F
        if gamma is None or delta is None:
            def split(s):
                w = perfect_witness(F, s, budget)
                if w is UNKNOWN:
                    raise WitnessViolation(f"no splitting above {s} in {F.name}")
                return w

            gamma = lambda s: split(s)[0]
            delta = lambda s: split(s)[1]
        self.gamma, self.delta = gamma, delta
        self._children = {}
        self._zeta = {(): ()}

        def en(k):
            s = F.node(k)
            return None if s is None else (s, self.zeta(s))

        def local(s):
            return self.zeta(s) if F.admissible(s) else None

        super().__init__(EnumerableSet(en), local=local, name=f"{F.name} onto Cantor space")

    def split(self, s):
        if s not in self._children:
            g, d = tuple(self.gamma(s)), tuple(self.delta(s))
            ok = (is_prefix(s, g) and is_prefix(s, d) and len(g) > len(s) and len(d) > len(s)
                  and not is_prefix(g, d) and not is_prefix(d, g)
                  and self.F.admissible(g) and self.F.admissible(d))
            if not ok:
                raise WitnessViolation(f"bad splitting {g}, {d} of {s}")
            self._children[s] = (g, d)
        return self._children[s]

    def zeta(self, s):
        s = tuple(s)
        if s in self._zeta:
            return self._zeta[s]
        node = ()
        z = ()
        while True:
            g, d = self.split(node)
            if is_prefix(g, s):
                node, z = g, z + (0,)
            elif is_prefix(d, s):
                node, z = d, z + (1,)
            elif is_prefix(s, g) or is_prefix(s, d):
                break  # strictly between node and a child
            else:
                z = z + (0,) * (len(s) - len(node) - self._inside(node, s))
                break
        self._zeta[s] = z
        return z

    def _inside(self, node, s):
        """Length of the part of s beyond node that still lies inside the tree."""
        g, d = self.split(node)
        n = len(node)
        while n < len(s) and (is_prefix(s[: n + 1], g) or is_prefix(s[: n + 1], d)):
            n += 1
        return n - len(node)


def perfect_spread_onto_cantor(F, gamma=None, delta=None, budget=256):
    return PerfectCover(F, gamma, delta, budget)


@dataclass
class UCResult:
    modulus: object = None
    pair: object = None   # ((t, X(t)), (u, X(u))): t, u agree on the first `depth` places
    depth: object = None


def uc_modulus_search(X, F, depth_cap, explore_depth=None, budget=64):
    """Least n <= depth_cap such that members of F agreeing up to n get equal values.

    Values below a node are collected by walking the fan until X's value is
    determined, down to explore_depth.  If no n works, the result carries the
    violating pair found at the deepest level; BudgetExceeded if there is none.
    """
    explore_depth = explore_depth if explore_depth is not None else depth_cap + 2
    if X.local is None:
        def value(s):
            r = apply_n(X, SeqOracle.from_prefix(s), budget)
            return r.value if r.ok and r.prefix_len <= len(s) else None
    else:
        value = X.local
    memo = {}

    def below(s):
        """Map value -> a node reaching it, for nodes under s; flag open branches."""
        if s in memo:
            return memo[s]
        v = value(s)
        if v is not None:
            res = ({v: s}, False)
        elif len(s) >= explore_depth:
            res = ({}, True)
        else:
            vals, open_ = {}, False
            for c in F.children(s):
                cv, co = below(c)
                for k, w in cv.items():
                    vals.setdefault(k, w)
                open_ = open_ or co
            res = (vals, open_)
        memo[s] = res
        return res

    found = None
    for n in range(depth_cap + 1):
        good = True
        for s in F.sorted_level(n):
            vals, open_ = below(s)
            if len(vals) > 1:
                (v1, t1), (v2, t2) = sorted(vals.items())[:2]
                found = UCResult(pair=((t1, v1), (t2, v2)), depth=n)
                good = False
                break
            if open_:
                good = False
        if good:
            return UCResult(modulus=n)
    if found is None:
        raise BudgetExceeded(f"no modulus up to {depth_cap} and no violating pair found")
    return found
