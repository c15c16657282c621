"""Prime-power coding of finite sequences, Cantor pairing, binary coding.

A finite sequence (m0, ..., m_{k-1}) is coded as

    2**m0 * 3**m1 * ... * p(k-1)**(m_{k-1} + 1) - 1

so the empty sequence gets 0 and every natural codes exactly one sequence.
Sequences are plain tuples of non-negative ints; codes are Python ints.
"""

from functools import lru_cache
import math
import re

from sympy import factorint, primepi, sieve

from .errors import InvalidInput, PreconditionError


def prime(i):
    """The i-th prime, counting from p(0) = 2."""
    return int(sieve[i + 1])


def encode(s):
    s = tuple(s)
    if not s:
        return 0
    acc = 1
    for i, m in enumerate(s[:-1]):
        if m < 0:
            raise InvalidInput(f"negative item {m}")
        if m:
            acc *= prime(i) ** m
    last = s[-1]
    if last < 0:
        raise InvalidInput(f"negative item {last}")
    return acc * prime(len(s) - 1) ** (last + 1) - 1


@lru_cache(maxsize=1 << 16)
def decode(a):
    if a < 0:
        raise InvalidInput(f"negative code {a}")
    if a == 0:
        return ()
    exps = factorint(a + 1)
    top = max(exps)
    k = int(primepi(top))
    items = [exps.get(prime(i), 0) for i in range(k)]
    items[-1] -= 1
    return tuple(items)


def length_code(a):
    return len(decode(a))


def item(a, i):
    s = decode(a)
    if not 0 <= i < len(s):
        raise PreconditionError(f"index {i} outside a sequence of length {len(s)}")
    return s[i]


def concat(a, b):
    return encode(decode(a) + decode(b))


def prefix(a, n):
    s = decode(a)
    if not 0 <= n <= len(s):
        raise PreconditionError(f"prefix length {n} exceeds length {len(s)}")
    return encode(s[:n])


def is_prefix(s, t):
    """Tuple version of the initial-segment relation."""
    return len(s) <= len(t) and tuple(t[: len(s)]) == tuple(s)


def comparable(s, t):
    return is_prefix(s, t) or is_prefix(t, s)


def is_initial(a, b):
    return is_prefix(decode(a), decode(b))


def incompatible(a, b):
    """a and b code sequences neither of which extends the other."""
    return not comparable(decode(a), decode(b))


def pair(m, n):
    if m < 0 or n < 0:
        raise InvalidInput("pair takes naturals")
    return (m + n) * (m + n + 1) // 2 + m


def unpair(k):
    if k < 0:
        raise InvalidInput("unpair takes a natural")
    w = (math.isqrt(8 * k + 1) - 1) // 2
    m = k - w * (w + 1) // 2
    return m, w - m


def proj_seq(s, n):
    """The n-th coordinate sequence read off a finite prefix s of a generator."""
    out = []
    m = 0
    while pair(n, m) < len(s):
        out.append(s[pair(n, m)])
        m += 1
    return tuple(out)


def proj_code(s, n):
    return encode(proj_seq(decode(s), n))


def is_binary_seq(s):
    return all(x in (0, 1) for x in s)


def is_binary(a):
    return is_binary_seq(decode(a))


def bin_encode_seq(s):
    out = []
    for n in s:
        out.extend([0] * n)
        out.append(1)
    return tuple(out)


def bin_encode(a):
    return encode(bin_encode_seq(decode(a)))


def bin_decode_seq(b):
    """Split b as D(a) * 0^k; return (a, k)."""
    a = []
    run = 0
    for x in b:
        if x == 0:
            run += 1
        elif x == 1:
            a.append(run)
            run = 0
        else:
            raise InvalidInput(f"non-binary item {x}")
    return tuple(a), run


def sharp_seq(b):
    if not is_binary_seq(b):
        raise InvalidInput("sharp needs a binary sequence")
    return sum(b)


def sharp(b):
    return sharp_seq(decode(b))


def code_of(x):
    """Numeric code of a nested tuple structure; ints code themselves."""
    if isinstance(x, int):
        return x
    return encode(code_of(y) for y in x)


_FINSEQ = re.compile(r"^\s*\[\s*(\d+(\s*,\s*\d+)*)?\s*\]\s*$")


def parse_finseq(text):
    if not _FINSEQ.match(text):
        raise InvalidInput(f"not a finite sequence: {text!r}")
    body = text.strip()[1:-1].strip()
    if not body:
        return ()
    return tuple(int(x) for x in body.split(","))


def format_finseq(s):
    return "[" + ",".join(str(x) for x in s) + "]"
