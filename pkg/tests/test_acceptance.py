"""Acceptance criteria 1-9, one test each.

Each test records PASS or FAIL with a short detail; the lines are printed in
the pytest terminal summary and when this file is run directly.
"""

from fractions import Fraction as Q
from itertools import product
import random

from fanbar import cli, csets, heineborel, kleene, reals
from fanbar.contfun import apply_n, fan_to_cantor_cover, perfect_spread_onto_cantor, retraction
from fanbar.seqcode import decode, encode
from fanbar.streams import DecidableSet, EnumerableSet, SeqOracle

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def leaves(depth):
    return list(product((0, 1), repeat=depth))


def test_criterion_1_coding():
    seqs = [s for L in range(6) for s in product(range(6), repeat=L)]
    bad = [s for s in seqs if decode(encode(s)) != s]
    bad += [a for a in range(5000) if encode(decode(a)) != a]
    record(1, not bad, f"{len(seqs)} sequences and 5000 codes round-trip, {len(bad)} failures")


def test_criterion_2_kleene():
    rep = kleene.experiment(depth=32, seed=0)
    hits_ok = len(rep.hits) >= 10 and all(h.bound_checked for h in rep.hits)
    avoid_ok = len(rep.avoidance) == 33 and all(a.verified for a in rep.avoidance)
    unique_ok = all(sum(kleene.T(e, n, z) for z in range(400)) <= 1 for e in range(24) for n in range(4))
    measure_ok = len(rep.measure) >= 5 and all(m.holds for m in rep.measure)
    record(2, hits_ok and avoid_ok and unique_ok and measure_ok,
           f"{sum(h.bound_checked for h in rep.hits)} catalog hits within max(e,z)+1, "
           f"avoidance n<=32 {'ok' if avoid_ok else 'broken'}, T unique {unique_ok}, "
           f"{sum(m.holds for m in rep.measure)}/{len(rep.measure)} measure bounds")


def _walk_bars(member, limit):
    """Depth-first walk of the binary tree pruned at members; False if a node at limit survives."""
    stack = [()]
    while stack:
        t = stack.pop()
        if member(t):
            continue
        if len(t) >= limit:
            return False
        stack += [t + (0,), t + (1,)]
    return True


def _bounded_hits(Y, alpha, depth=4):
    # a member of Y has length equal to the code of one of its initial parts
    cands = sorted({encode(alpha.prefix(i)) for i in range(depth + 1)})
    return any(Y.contains(alpha.prefix(c)) for c in cands)


def test_criterion_3_bar_converters():
    bars = csets.minimal_bars(4)
    failures = 0
    F = csets.cantor()
    for bar in bars:
        dec = csets.enum_bar_to_dec_bar(EnumerableSet.from_list(bar))
        ok = _walk_bars(dec.contains, len(bar) + 5)
        Y = csets.bounded_subbar(DecidableSet.finite(bar))
        phi = csets.first_hit_fn(DecidableSet.finite(bar), F)
        for leaf in leaves(4):
            for tail in (SeqOracle.zero(), SeqOracle.constant(1)):
                alpha = SeqOracle.from_prefix(leaf, tail)
                ok = ok and _bounded_hits(Y, alpha)
                r = apply_n(phi, alpha, budget=4)
                ok = ok and r.ok and leaf[:r.value] in bar
        failures += not ok
    record(3, failures == 0, f"{len(bars)} minimal bars of depth <= 4, {failures} not preserved")


def test_criterion_4_dini():
    F = csets.cantor()
    ok = True
    for n in range(9):
        seq = csets.dini_build(csets.uniform_bar(n), F)
        paths = [SeqOracle.from_prefix(s) for s in leaves(n)]
        ok = ok and all(apply_n(seq(n), a).value == 0 for a in paths)
        if n:
            ok = ok and any(apply_n(seq(n - 1), a).value > 0 for a in paths)
    dc = csets.dini_counterexample(DecidableSet(kleene.bar_D), F, check_depth=6)
    wit = all(apply_n(dc(n), SeqOracle.from_prefix(dc.witnesses[n])).value == 1 for n in range(7))
    record(4, ok and wit, f"uniform bars n <= 8 {'ok' if ok else 'broken'}, "
           f"Kleene D witnesses for n <= 6 {'found' if wit else 'missing'}")


def test_criterion_5_reals():
    rng = random.Random(2024)
    rq = lambda: Q(rng.randint(-1000, 1000), rng.randint(1, 1000))
    bad = 0
    for _ in range(500):
        p, q, r = rq(), rq(), rq()
        x, y, z = (reals.real_from_rat(v) for v in (p, q, r))
        for val, exact in ((x + y, p + q), (x - z, p - r), (x * y + z, p * q + r)):
            s = val.at(30)
            bad += not (s.lo <= exact <= s.hi and s.width <= reals.pow2(30))
    cap = reals.cantor_intersection(lambda n: reals.real_from_rat(Q(-1, n + 1)),
                                    lambda n: reals.real_from_rat(Q(1, n + 1)), lambda n: 2 ** (n + 1))
    unsep = reals.real_compare(cap, reals.real_from_rat(0), 20).verdict == "unsep"
    viol = 0
    for _ in range(1000):
        a, b, c, d = sorted([rq(), rq()]) + sorted([rq(), rq()])
        s, t = reals.Seg(a, b), reals.Seg(c, d)
        op = rng.choice(["+", "-", "*", "min", "max"])
        u, v = a + (b - a) * Q(rng.randint(0, 8), 8), c + (d - c) * Q(rng.randint(0, 8), 8)
        val = {"+": u + v, "-": u - v, "*": u * v, "min": min(u, v), "max": max(u, v)}[op]
        res = reals.seg_arith(op, s, t)
        viol += not (res.lo <= val <= res.hi)
    record(5, bad == 0 and unsep and viol == 0,
           f"{bad} arithmetic misses in 500 triples, intersection unseparated from 0: {unsep}, "
           f"{viol} containment violations in 1000 cases")


def test_criterion_6_covering():
    pair = [reals.Seg(0, Q(3, 5)), reals.Seg(Q(2, 5), 1)]
    sub = heineborel.finite_subcover_search(heineborel.cover_of(pair), resolution=6)
    p = heineborel.lebesgue_number(pair)
    verified, _ = heineborel.verify_lebesgue(pair, p)
    env = reals.real_apply(heineborel.envelope(pair), reals.real_from_rat(Q(1, 2))).at(15)
    env_ok = abs(env.mid - Q(1, 10)) <= reals.pow2(15) and env.lo <= Q(1, 10) <= env.hi
    record(6, sub.segs == tuple(pair) and verified and env_ok,
           f"subcover {'found' if sub.segs else 'missing'}, Lebesgue p = {p} verified {verified}, "
           f"envelope(1/2) in [{float(env.lo):.7f}, {float(env.hi):.7f}]")


def test_criterion_7_translation():
    bars = csets.minimal_bars(4)
    bad = 0
    for bar in bars:
        Y = heineborel.bar_to_special(bar)
        bad += not heineborel.special_validate(Y, resolution=6).valid
        bad += heineborel.special_to_bar(Y) != sorted(bar, key=lambda b: (len(b), b))
    rng = random.Random(7)
    scenarios = 0
    while scenarios < 20:
        depth = rng.randint(2, 6)
        frag = sorted({tuple(rng.randint(0, 1) for _ in range(rng.randint(1, depth)))
                       for _ in range(rng.randint(1, 6))}, key=len)
        frag = [s for i, s in enumerate(frag) if not any(s[:len(t)] == t for t in frag[:i])]
        survivor = csets.positive_failure_witness(csets.cantor(), frag, depth)
        if survivor is None:
            continue
        w = heineborel.midpoint_witness(heineborel.bar_to_special(frag), survivor)
        bad += not all(w.real.approx(n).apart(s) for s, n in w.apart_at.items())
        bad += len(w.apart_at) != len(frag)
        scenarios += 1
    record(7, bad == 0, f"{len(bars)} bars round-trip and validate, 20 midpoint scenarios, {bad} failures")


def test_criterion_8_covering_maps():
    tern = csets.truncated_fan(3, 3)
    f = fan_to_cantor_cover(tern)
    hit = {a[:3] for L in range(10) for b in product((0, 1), repeat=L)
           if len(a := f.local(b)) >= 3}
    P = perfect_spread_onto_cantor(csets.baire(), lambda s: s + (0,), lambda s: s + (1,))
    image = {P.zeta(s)[:5] for s in product(range(3), repeat=5)}
    onto = set(leaves(5)) <= image
    F = csets.spread_of(lambda s: all(x < 2 for x in s) and (not s or s[0] == 1), 2)
    R = retraction(F, csets.cantor())
    rng = random.Random(8)
    idem = 0
    for _ in range(50):
        b = tuple(rng.randint(0, 1) for _ in range(12))
        once = R.r(b)
        idem += F.admissible(once) and R.r(once) == once
    record(8, len(hit) == 27 and onto and idem == 50,
           f"ternary cover hits {len(hit)}/27, Baire onto 32 depth-5 prefixes: {onto}, "
           f"retraction idempotent on {idem}/50 paths")


def test_criterion_9_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["kleene", "--seed", "11", "--out", str(a)])
    cli.main(["kleene", "--seed", "11", "--out", str(b)])
    same = a.read_bytes() == b.read_bytes()
    record(9, same, f"two seeded runs {'byte-identical' if same else 'differ'} ({a.stat().st_size} bytes)")


if __name__ == "__main__":
    import pathlib
    import tempfile

    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion"):
            try:
                if "tmp_path" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                    with tempfile.TemporaryDirectory() as d:
                        fn(pathlib.Path(d))
                else:
                    fn()
            except AssertionError:
                pass
