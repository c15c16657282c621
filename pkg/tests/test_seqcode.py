from itertools import product

import pytest
from hypothesis import given, strategies as st

from fanbar.errors import InvalidInput, PreconditionError
from fanbar.seqcode import (bin_decode_seq, bin_encode, bin_encode_seq, concat, decode, encode,
                            format_finseq, is_initial, item, length_code, pair, parse_finseq,
                            prefix, prime, proj_code, proj_seq, sharp, unpair)

PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def oracle_encode(s):
    # direct product formula, with a hand-written prime list
    if not s:
        return 0
    v = 1
    for i, m in enumerate(s):
        v *= PRIMES[i] ** (m + (i == len(s) - 1))
    return v - 1


def oracle_decode(a):
    # trial division by the hand-written primes
    if a == 0:
        return ()
    n, exps = a + 1, []
    for p in PRIMES:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        exps.append(e)
    assert n == 1
    k = max(i for i, e in enumerate(exps) if e) + 1
    return tuple(exps[:k - 1]) + (exps[k - 1] - 1,)


@pytest.mark.parametrize("s,code", [((), 0), ((0,), 1), ((1,), 3), ((0, 0), 2), ((1, 0), 5),
                                    ((2, 0), 11)])
def test_encode_examples(s, code):
    assert encode(s) == code == oracle_encode(s)


def test_one_zero_codes_to_five():
    # 2^1 * 3^(0+1) - 1; the value 11 belongs to (2,0)
    assert encode((1, 0)) == 5
    assert decode(11) == (2, 0)


@pytest.mark.parametrize("a,n", [(0, 0), (1, 1), (2, 2), (5, 2), (11, 2)])
def test_length_examples(a, n):
    assert length_code(a) == n


def test_decode_examples():
    assert decode(0) == ()
    assert decode(3) == (1,)
    assert decode(5) == (1, 0)


def test_decode_matches_trial_division():
    checked = 0
    for a in range(3000):
        n = a + 1
        for p in PRIMES:
            while n % p == 0:
                n //= p
        if n == 1:  # a + 1 is smooth over the hand-written primes
            assert decode(a) == oracle_decode(a)
            checked += 1
    assert checked > 300


def test_concat_examples():
    for x in range(101):
        assert concat(0, x) == x and concat(x, 0) == x
    assert concat(encode((0,)), encode((0,))) == 2
    assert concat(encode((1,)), encode((0,))) == 5


def test_prefix_examples():
    for x in range(60):
        assert prefix(x, 0) == 0
        assert prefix(x, length_code(x)) == x
    assert prefix(encode((1, 0)), 1) == 3
    with pytest.raises(PreconditionError):
        prefix(encode((1, 0)), 3)


def test_is_initial_examples():
    for x in range(60):
        assert is_initial(0, x)
    assert is_initial(encode((1,)), encode((1, 0)))
    assert not is_initial(encode((0,)), encode((1, 0)))


def test_item():
    assert item(encode((4, 0, 2)), 2) == 2
    with pytest.raises(PreconditionError):
        item(0, 0)


def test_pairing():
    assert pair(0, 0) == 0
    assert pair(1, 0) == 2
    assert unpair(pair(7, 11)) == (7, 11)
    assert sorted(pair(m, n) for m in range(30) for n in range(30) if m + n < 30) == list(range(465))


@given(st.integers(0, 10 ** 6), st.integers(0, 10 ** 6))
def test_pair_roundtrip(m, n):
    assert unpair(pair(m, n)) == (m, n)


@given(st.integers(0, 10 ** 9))
def test_unpair_roundtrip(k):
    assert pair(*unpair(k)) == k


def test_projection_bruteforce():
    assert all(proj_code(0, n) == 0 for n in range(5))
    s = (4, 7, 9)
    for n in range(4):
        # maximal t with pair(n, t-1) < 3, found by search
        t = max(t for t in range(5) if all(pair(n, i) < len(s) for i in range(t)))
        assert proj_seq(s, n) == tuple(s[pair(n, i)] for i in range(t))
    assert proj_code(encode(s), 5) == 0


def test_binary_coding():
    assert bin_encode(0) == 0
    assert bin_encode_seq((2,)) == (0, 0, 1)
    assert bin_encode_seq((1, 0)) == (0, 1, 1)
    assert bin_encode(encode((1, 0))) == encode((0, 1, 1))
    assert sharp(encode((0, 1, 1))) == 2
    with pytest.raises(InvalidInput):
        sharp(encode((2,)))


@given(st.lists(st.integers(0, 6), max_size=8), st.integers(0, 5))
def test_bin_decode_inverts(s, k):
    assert bin_decode_seq(bin_encode_seq(s) + (0,) * k) == (tuple(s), k)


@given(st.lists(st.integers(0, 6), max_size=6), st.lists(st.integers(0, 6), max_size=6))
def test_concat_is_tuple_concat(s, t):
    assert decode(concat(encode(s), encode(t))) == tuple(s) + tuple(t)


def test_roundtrips_small():
    for L in range(4):
        for s in product(range(5), repeat=L):
            assert decode(encode(s)) == s
            assert encode(s) == oracle_encode(s)
    for a in range(1500):
        assert encode(decode(a)) == a


def test_prime():
    assert [prime(i) for i in range(10)] == PRIMES


def test_text_form():
    assert parse_finseq("[1,0]") == (1, 0)
    assert parse_finseq(" [ ] ") == ()
    assert format_finseq((3, 4)) == "[3,4]"
    for bad in ("1,0", "[1,-1]", "[a]", "[1,]"):
        with pytest.raises(InvalidInput):
            parse_finseq(bad)
    with pytest.raises(InvalidInput):
        decode(-1)
    with pytest.raises(InvalidInput):
        encode((1, -2))
