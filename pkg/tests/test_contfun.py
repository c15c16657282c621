import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from fanbar.contfun import (PartialNFun, PartialSeqFun, apply_n, apply_seq, check_consistency,
                            comp_enum, compose, fan_to_cantor_cover, head, pad,
                            perfect_spread_onto_cantor, restrict_to_cs, retraction,
                            uc_modulus_search)
from fanbar.csets import (baire, cantor, first_hit_fn, singleton_fan, spread_of, truncated_fan,
                          uniform_bar)
from fanbar.errors import BudgetExceeded, CorruptGraph, PreconditionError, WitnessViolation
from fanbar.kleene import bar_D
from fanbar.seqcode import decode, encode
from fanbar.streams import DecidableSet, EnumerableSet, SeqOracle

binary_seqs = st.lists(st.integers(0, 1), max_size=12).map(tuple)


def rel_oracle(pairs):
    """Numeric listing of a finite relation: stage i lists code(⟨a, b⟩) + 1."""
    codes = [encode(p) + 1 for p in pairs]
    return SeqOracle(lambda i: codes[i] if i < len(codes) else 0)


def listed(orc, n):
    return {decode(orc(i) - 1) for i in range(n) if orc(i)}


# application

def test_apply_constant_graph():
    f = PartialNFun(EnumerableSet.from_list([((), 7)]))
    for a in (SeqOracle.zero(), SeqOracle.identity()):
        r = apply_n(f, a)
        assert r.value == 7 and r.prefix_len == 0 and r.index == 0


def test_apply_first_hit():
    phi = first_hit_fn(uniform_bar(3), cantor())
    r = apply_n(phi, SeqOracle.zero())
    assert r.value == 3 and r.prefix_len == 3


def test_apply_empty_graph():
    r = apply_n(PartialNFun(EnumerableSet.empty()), SeqOracle.zero(), budget=30)
    assert not r.ok and r.consumed == 30
    with pytest.raises(BudgetExceeded):
        PartialNFun(EnumerableSet.empty())(SeqOracle.zero())


def test_strict_mode_detects_conflicts():
    bad = PartialNFun(EnumerableSet.from_list([((0,), 1), ((0, 1), 2)]))
    with pytest.raises(CorruptGraph):
        apply_n(bad, SeqOracle.zero(), strict=True)
    ok = PartialNFun(EnumerableSet.from_list([((0,), 1), ((0, 1), 1), ((1,), 5)]))
    assert check_consistency(ok, 10)


@settings(max_examples=60)
@given(st.dictionaries(binary_seqs.filter(lambda s: len(s) <= 4), st.integers(0, 9), max_size=6),
       binary_seqs)
def test_apply_matches_bruteforce(entries, alpha_bits):
    # keep a prefix-free part so the graph is consistent
    keys = sorted(entries, key=len)
    free = [k for i, k in enumerate(keys) if not any(k[:len(j)] == j for j in keys[:i])]
    graph = [(k, entries[k]) for k in free]
    alpha = SeqOracle.from_prefix(alpha_bits)
    want = next((v for k, v in graph if alpha.prefix(len(k)) == k), None)
    r = apply_n(PartialNFun(EnumerableSet.from_list(graph)), alpha, budget=len(graph) + 1)
    assert r.value == want
    r2 = apply_n(PartialNFun.from_entries(graph), alpha, budget=20)
    assert r2.value == want


def test_apply_seq_identity():
    ident = PartialSeqFun.identity()
    a = SeqOracle.periodic((2, 0, 1))
    assert apply_seq(ident, a).prefix(20) == a.prefix(20)
    scan_only = PartialSeqFun(ident.graph)
    b = SeqOracle.periodic((1, 0))
    assert apply_seq(scan_only, b, budget=5000).prefix(4) == b.prefix(4)


def test_pad_and_head():
    phi = first_hit_fn(DecidableSet.finite([(0,), (1, 0), (1, 1)]), cantor())
    padded = pad(phi)
    for bits in ((0, 1, 1), (1, 0, 0), (1, 1, 0)):
        a = SeqOracle.from_prefix(bits)
        out = apply_seq(padded, a)
        assert out(0) == apply_n(phi, a).value and out.prefix(5)[1:] == (0,) * 4
        assert apply_n(head(padded), a).value == apply_n(phi, a).value


def test_apply_seq_empty_graph():
    out = apply_seq(PartialSeqFun(EnumerableSet.empty()), SeqOracle.zero(), budget=20)
    with pytest.raises(BudgetExceeded):
        out(0)


# composition

def test_comp_enum_empty():
    g = comp_enum(SeqOracle.zero(), SeqOracle.zero())
    assert all(g(m) == 0 for m in range(30))


def test_comp_enum_single_pair():
    beta = rel_oracle([(1, 2)])
    alpha = rel_oracle([(2, 3)])
    assert listed(comp_enum(alpha, beta), 10) == {(1, 3)}


def test_comp_enum_identity():
    ident = SeqOracle(lambda m: encode((m, m)) + 1)
    got = listed(comp_enum(ident, ident), 50)
    assert all(a == c for a, c in got)
    assert {(k, k) for k in range(40)} <= got


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=6),
       st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=6))
def test_comp_enum_is_relational_composition(r1, r2):
    beta, alpha = rel_oracle(r1), rel_oracle(r2)
    want = {(a, c) for a, b in r1 for b2, c in r2 if b == b2}
    # every candidate is available from stage 7 on; one is emitted per stage
    assert listed(comp_enum(alpha, beta), 8 + len(want)) == want


def test_structural_compose():
    ident = PartialSeqFun.identity()
    phi = first_hit_fn(uniform_bar(2), cantor())
    comp = compose(phi, ident)
    assert apply_n(comp, SeqOracle.periodic((1, 0))).value == 2
    scan = compose(PartialNFun(phi.graph), PartialSeqFun(ident.graph))
    assert apply_n(scan, SeqOracle.zero(), budget=400).value == 2


# restriction

def test_restrict_constant():
    f = restrict_to_cs(PartialNFun.constant(4), cantor())
    rng = random.Random(1)
    for _ in range(10):
        a = SeqOracle.from_prefix(tuple(rng.randint(0, 1) for _ in range(10)))
        assert apply_n(f, a).value == 4


def test_restrict_identity_to_cantor():
    f = restrict_to_cs(PartialSeqFun.identity(), cantor())
    rng = random.Random(2)
    for _ in range(10):
        a = SeqOracle.from_prefix(tuple(rng.randint(0, 1) for _ in range(20)))
        assert apply_seq(f, a).prefix(15) == a.prefix(15)
    with pytest.raises(BudgetExceeded):
        apply_seq(f, SeqOracle.constant(2), budget=30)(0)


def test_restricted_graph_entries_are_admissible():
    F = cantor()
    f = restrict_to_cs(first_hit_fn(uniform_bar(2), baire()), F)
    entries = [e for e in (f.graph(k) for k in range(400)) if e is not None]
    assert entries and all(F.admissible(t) for t, _ in entries)


# retraction

def test_retraction_identity_on_cantor():
    R = retraction(cantor(), cantor())
    for bits in product((0, 1), repeat=6):
        assert R.r(bits) == bits


def test_retraction_onto_singleton():
    R = retraction(singleton_fan(), cantor())
    for bits in product((0, 1), repeat=5):
        assert R.r(bits) == (0,) * 5


def test_retraction_first_digit_one():
    F = spread_of(lambda s: all(x < 2 for x in s) and (not s or s[0] == 1), 2)
    R = retraction(F, cantor())
    out = apply_seq(R, SeqOracle.from_prefix((0, 1, 0, 1)))
    assert out.prefix(4) == (1, 1, 0, 1)


def test_retraction_rejects_non_subspread():
    with pytest.raises(PreconditionError):
        retraction(truncated_fan(3, 2), cantor())


@settings(max_examples=50)
@given(st.lists(st.integers(0, 1), min_size=8, max_size=8).map(tuple))
def test_retraction_idempotent(bits):
    F = spread_of(lambda s: all(x < 2 for x in s) and all(s[i] <= s[i + 1] for i in range(len(s) - 1)), 2)
    R = retraction(F, cantor())
    once = R.r(bits)
    assert F.admissible(once) and R.r(once) == once


# covers of fans and perfect spreads

def test_cover_of_cantor():
    f = fan_to_cantor_cover(cantor())
    hit = {f.local(b)[:4] for L in range(4, 9) for b in product((0, 1), repeat=L)
           if len(f.local(b)) >= 4}
    assert hit == set(product((0, 1), repeat=4))


def test_cover_of_singleton():
    f = fan_to_cantor_cover(singleton_fan())
    assert {f.local(b) for b in product((0, 1), repeat=6)} <= {(0,) * k for k in range(7)}


def test_cover_of_ternary():
    F = truncated_fan(3, 3)
    f = fan_to_cantor_cover(F)
    hit = set()
    for L in range(10):
        for b in product((0, 1), repeat=L):
            a = f.local(b)
            assert F.admissible(a)
            if len(a) >= 3:
                hit.add(a[:3])
    assert hit == set(product(range(3), repeat=3))


def test_perfect_cover_cantor_is_identity():
    P = perfect_spread_onto_cantor(cantor(), lambda s: s + (0,), lambda s: s + (1,))
    for s in product((0, 1), repeat=5):
        assert P.zeta(s) == s


def test_perfect_cover_baire_is_onto():
    P = perfect_spread_onto_cantor(baire(), lambda s: s + (0,), lambda s: s + (1,))
    image = {P.zeta(s)[:5] for s in product(range(3), repeat=5)}
    assert set(product((0, 1), repeat=5)) <= image
    assert P.zeta((0, 2, 1)) == (0, 0, 0)


def test_perfect_cover_default_witnesses():
    P = perfect_spread_onto_cantor(truncated_fan(3, 4))
    assert len({P.zeta(s) for s in product(range(3), repeat=3)}) > 4


def test_perfect_cover_rejects_singleton():
    P = perfect_spread_onto_cantor(singleton_fan(), budget=50)
    with pytest.raises(WitnessViolation):
        P.zeta((0, 0))


def test_perfect_cover_rejects_bad_splitting():
    P = perfect_spread_onto_cantor(cantor(), lambda s: s + (0,), lambda s: s + (0,))
    with pytest.raises(WitnessViolation):
        P.zeta((1,))


# uniform continuity

def test_uc_constant():
    assert uc_modulus_search(PartialNFun.constant(3), cantor(), 4).modulus == 0


def test_uc_first_coordinate():
    first = PartialNFun.from_entries([((0,), 0), ((1,), 1)])
    assert uc_modulus_search(first, cantor(), 4).modulus == 1


def test_uc_kleene_first_hit():
    phi = first_hit_fn(DecidableSet(bar_D), cantor())
    res = uc_modulus_search(phi, cantor(), 8)
    assert res.modulus is None
    (t, v), (u, w) = res.pair
    assert v != w and t[:res.depth] == u[:res.depth]
    assert v == len(t) and w == len(u)
