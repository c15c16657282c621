"""Infinite sequences as memoizing oracles, and the sets they present.

A ``SeqOracle`` wraps a total function on the naturals.  Answers are cached
and every queried index is recorded, so callers can audit which finite part of
the sequence an output depended on.

``DecidableSet`` and ``EnumerableSet`` present subsets through oracles.  An
enumeration returns ``None`` for "nothing at this stage" (numerically 0)
and the element itself otherwise (numerically n+1).  Elements of sets of
finite sequences are tuples; ``as_oracle`` recovers the numeric view.
"""

import threading

from .errors import BudgetExceeded
from .seqcode import code_of, decode, encode, pair


class _Unknown:
    """Result of a bounded semi-decision that found nothing."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "UNKNOWN"


UNKNOWN = _Unknown()


class SeqOracle:
    def __init__(self, fn, name=None):
        self._fn = fn
        self._memo = {}
        self._trace = set()
        self._lock = threading.Lock()
        self.name = name or getattr(fn, "__name__", "oracle")

    def __call__(self, n):
        if n < 0:
            raise IndexError(n)
        with self._lock:
            self._trace.add(n)
            if n in self._memo:
                return self._memo[n]
        v = self._fn(n)
        with self._lock:
            # a concurrent fill may have landed first; keep the first answer
            return self._memo.setdefault(n, v)

    @property
    def trace(self):
        with self._lock:
            return frozenset(self._trace)

    def reset_trace(self):
        with self._lock:
            self._trace.clear()

    def prefix(self, n):
        return tuple(self(i) for i in range(n))

    def code(self, n):
        return encode(self.prefix(n))

    def __repr__(self):
        return f"SeqOracle({self.name})"

    # builders

    @classmethod
    def zero(cls):
        return cls(lambda n: 0, "zero")

    @classmethod
    def constant(cls, c):
        return cls(lambda n: c, f"constant {c}")

    @classmethod
    def identity(cls):
        return cls(lambda n: n, "identity")

    @classmethod
    def periodic(cls, pattern):
        pattern = tuple(pattern)
        if not pattern:
            raise ValueError("empty period")
        return cls(lambda n: pattern[n % len(pattern)], f"periodic {pattern}")

    @classmethod
    def from_table(cls, table, default=0):
        table = tuple(table)
        return cls(lambda n: table[n] if n < len(table) else default,
                   f"table {table} then {default}")

    @classmethod
    def from_prefix(cls, s, tail=None):
        """s followed by ``tail`` (an oracle, default all zeros)."""
        s = tuple(s)
        tail = tail or cls.zero()
        return cls(lambda n: s[n] if n < len(s) else tail(n - len(s)),
                   f"{s} then {tail.name}")


def oracle_prefix(alpha, n):
    """Code of the first n values."""
    return encode(alpha.prefix(n))


def project(alpha, n):
    """The n-th member of the family coded by alpha: m -> alpha(J(n, m))."""
    return SeqOracle(lambda m: alpha(pair(n, m)), f"{alpha.name}^{n}")


def budgeted(alpha, max_queries):
    """A view of alpha that refuses to answer more than max_queries indices."""
    seen = set()
    lock = threading.Lock()

    def fn(n):
        with lock:
            if n not in seen:
                if len(seen) >= max_queries:
                    raise BudgetExceeded(f"more than {max_queries} queries", len(seen))
                seen.add(n)
        return alpha(n)

    return SeqOracle(fn, f"budgeted {alpha.name}")


def dec_truncate(beta, n):
    return {k for k in range(n) if beta(k) == 1}


def enum_truncate(beta, n):
    return {beta(m) - 1 for m in range(n) if beta(m) > 0}


class DecidableSet:
    """A subset decided by a predicate.

    ``contains`` takes the natural element, or a tuple when the set is a set of
    finite sequences (then integers passed in are decoded first).
    """

    def __init__(self, pred, over_seqs=True, name=None):
        self._pred = pred
        self.over_seqs = over_seqs
        self.name = name or "decidable set"
        self.chi = SeqOracle(self._chi, f"chi {self.name}")

    def _chi(self, n):
        return 1 if self.contains(n) else 0

    def contains(self, x):
        if self.over_seqs and isinstance(x, int):
            x = decode(x)
        elif self.over_seqs:
            x = tuple(x)
        return bool(self._pred(x))

    __contains__ = contains

    def truncate(self, n):
        return dec_truncate(self.chi, n)

    @classmethod
    def from_chi(cls, chi, name=None):
        """D_beta for a 0/1-valued oracle over naturals."""
        return cls(lambda n: chi(n) == 1, over_seqs=False, name=name)

    @classmethod
    def of_codes(cls, chi, name=None):
        """D_beta read as a set of finite sequences, beta indexed by codes."""
        return cls(lambda s: chi(encode(s)) == 1, over_seqs=True, name=name)

    @classmethod
    def finite(cls, elements, over_seqs=True, name=None):
        if over_seqs:
            elems = frozenset(tuple(e) if not isinstance(e, int) else decode(e)
                              for e in elements)
        else:
            elems = frozenset(elements)
        ds = cls(lambda x: x in elems, over_seqs=over_seqs, name=name or "finite set")
        ds.elements = elems
        return ds

    @classmethod
    def empty(cls, over_seqs=True):
        return cls.finite((), over_seqs=over_seqs, name="empty")

    def to_enumerable(self, universe=None):
        """Every decidable set is enumerable: stage m offers the m-th candidate."""
        if universe is None:
            universe = decode if self.over_seqs else (lambda m: m)

        def en(m):
            x = universe(m)
            return x if self.contains(x) else None

        return EnumerableSet(en, name=f"enum {self.name}")


class EnumerableSet:
    """A set listed by an oracle whose value at stage m is an element or None."""

    def __init__(self, en, name=None):
        self.name = name or "enumerable set"
        self.en = en if isinstance(en, SeqOracle) else SeqOracle(en, f"en {self.name}")

    def __call__(self, m):
        return self.en(m)

    def truncate(self, n):
        return {x for x in (self.en(m) for m in range(n)) if x is not None}

    def member_within(self, x, budget):
        """Stage at which x is listed, or UNKNOWN if it is not listed before budget."""
        if isinstance(x, list):
            x = tuple(x)
        for m in range(budget):
            if self.en(m) == x:
                return m
        return UNKNOWN

    def find(self, pred, budget):
        """First stage m < budget whose element satisfies pred, or UNKNOWN."""
        for m in range(budget):
            x = self.en(m)
            if x is not None and pred(x):
                return m
        return UNKNOWN

    def as_oracle(self):
        """The numeric view beta: 0 for nothing, code + 1 for an element."""
        return SeqOracle(lambda m: 0 if self.en(m) is None else code_of(self.en(m)) + 1,
                         f"codes of {self.name}")

    @classmethod
    def from_oracle(cls, beta, over_seqs=True, name=None):
        """E_beta from a numeric oracle; codes are decoded when over_seqs."""

        def en(m):
            v = beta(m)
            if v == 0:
                return None
            return decode(v - 1) if over_seqs else v - 1

        return cls(en, name)

    @classmethod
    def from_list(cls, elements, name=None):
        """Enumerate a finite list, then nothing."""
        elems = [tuple(e) if isinstance(e, (list, tuple)) else e for e in elements]
        es = cls(lambda m: elems[m] if m < len(elems) else None, name or "finite list")
        es.elements = tuple(elems)
        return es

    @classmethod
    def empty(cls):
        return cls.from_list((), "empty")


def enum_member_within(E, k, budget):
    return E.member_within(k, budget)
