from __future__ import annotations

import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from surforbit import groupexpr as gx
from surforbit import seqcalc as sc
from surforbit.errors import BuildError, ParseError
from surforbit.groupexpr import ONE, ZZ, Prod, WrZ, WrZmod, Zmod, normalize
from surforbit.seqcalc import SeqFamily, TRIV, product, wr, wr2, z, z2


def seqs(ms=(1, 2, 3), max_leaves=5):
    leaf = st.one_of(st.just(TRIV), st.sampled_from(ms).map(z))
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            st.lists(kids, min_size=2, max_size=3).map(lambda p: product(*p)),
            st.tuples(kids, st.sampled_from(ms)).map(lambda t: wr(*t)),
        ),
        max_leaves=max_leaves)


def garside_seqs():
    return st.one_of(
        seqs(),
        st.tuples(seqs(max_leaves=3), st.integers(1, 3)).map(lambda t: sc.garside_quotient(wr(*t))),
        st.lists(st.tuples(seqs(max_leaves=2), st.integers(1, 3)).map(lambda t: wr(*t)),
                 min_size=1, max_size=3).map(sc.diag_garside),
        st.tuples(seqs(max_leaves=3), st.integers(1, 3), st.integers(1, 3)).map(lambda t: wr2(*t)),
    )


def kernel_rank(s):
    return gx.free_rank(s.kernel)


# ------------------------------------------------------------------ examples

def test_special_sequences():
    assert z(3).triple == (ZZ, ZZ, Zmod(3))
    assert z(3).index == 3
    assert sc.special("triv").triple == (ONE, ONE, ONE)
    assert sc.special("z1").triple == (ZZ, ZZ, ONE)
    assert z2(2, 3).triple == (Prod(ZZ, ZZ), Prod(ZZ, ZZ), Prod(Zmod(2), Zmod(3)))
    with pytest.raises(BuildError):
        sc.special("nope")


def test_products():
    s = z(4)
    assert product(TRIV, s).triple == s.triple
    assert sc.seq_equiv(product(TRIV, s), s)
    assert product(z(2), z(3)).triple == z2(2, 3).triple
    p = product(wr(z(1), 2), wr(TRIV, 3))
    assert [type(q.build) for q in p.build.parts] == [sc.BWr, sc.BWr]


def test_wreath_sequences():
    assert wr(TRIV, 2).triple == z(2).triple
    assert sc.seq_equiv(wr(TRIV, 2), z(2))
    w = wr(z(3), 2)
    assert w.triple == (Prod(ZZ, ZZ, ZZ), WrZ(ZZ, 2), WrZmod(Zmod(3), 2))
    assert wr2(TRIV, 2, 3).triple == z2(2, 3).triple
    assert wr(z(5), 1).middle == Prod(ZZ, ZZ)


def test_garside_quotients():
    g = sc.garside_quotient(wr(TRIV, 2))
    assert g.triple == (ONE, Zmod(2), Zmod(2))
    assert sc.garside_quotient(wr(z(1), 1)).triple == (ZZ, ZZ, ONE)
    with pytest.raises(BuildError):
        sc.garside_quotient(z(2))
    with pytest.raises(BuildError):
        sc.diag_garside([])
    single = sc.diag_garside([wr(TRIV, 2)])
    assert single == sc.garside_quotient(wr(TRIV, 2))
    d = sc.diag_garside([wr(TRIV, 2), wr(TRIV, 2)])
    assert d.kernel == ZZ
    assert d.middle == Prod(ZZ, Zmod(2))
    assert d.quotient == Prod(Zmod(2), Zmod(2))


def test_natural_and_split():
    top, bottom = sc.natural(z(4))
    assert top.triple == (ZZ, ZZ, ONE)
    assert bottom.triple == (ONE, Zmod(4), Zmod(4))
    d = sc.split(TRIV, TRIV)
    assert all(r.triple == (ONE, ONE, ONE) for r in (d.top, d.middle, d.bottom))
    assert sc.split(z(1), TRIV).middle.triple == z(1).triple
    assert d.columns == [(ONE, ONE, ONE)] * 3


def test_family_examples():
    for m in range(1, 6):
        assert sc.seq_in_family(z(m), SeqFamily.gssZBP)
    for m in range(2, 6):
        assert sc.is_nearly_bieberbach(z(m))
        assert sc.is_crystallographic(z(m)) is False
    assert sc.is_crystallographic(z(1)) is True
    assert sc.seq_in_family(wr(wr(TRIV, 2), 2), SeqFamily.ssZBtPt)
    assert not sc.seq_in_family(wr(TRIV, 3), SeqFamily.ssZBtPt)
    assert sc.seq_in_family(wr(TRIV, 3), SeqFamily.ssZBP)
    assert sc.seq_in_family(product(z(1), z(1)), SeqFamily.ZZI)
    assert not sc.seq_in_family(z(2), SeqFamily.ZZI)
    g = sc.garside_quotient(wr(TRIV, 2))
    assert not sc.seq_in_family(g, SeqFamily.ssZBP)


# Frozen values: counts found by the brute-force closure below (kept in the
# test as an independent enumerator that does not use ``canonical``).
FROZEN_COUNTS = {("ZZI", 3, 1): 5, ("ssZBtPt", 3, 2): 35, ("ssZBP", 3, 3): 140,
                 ("ssZBtPt", 2, 2): 8}


def _brute_key(s):
    """Isomorphism key of a product/wreath build, written from scratch:
    a multiset of factors where wr(q, 1) splits off a z(1) and trivial
    factors disappear."""
    b = s.build
    if isinstance(b, sc.BTriv) or (isinstance(b, sc.BZ) and b.m == 0):
        return frozenset()
    if isinstance(b, sc.BZ):
        return frozenset(Counter({("w", frozenset(), b.m): 1}).items())
    if isinstance(b, sc.BProd):
        c = Counter()
        for p in b.parts:
            c.update(dict(_brute_key(p)))
        return frozenset(c.items())
    if isinstance(b, sc.BWr):
        inner = _brute_key(b.inner)
        if b.m == 1:
            c = Counter(dict(inner))
            c[("w", frozenset(), 1)] += 1
            return frozenset(c.items())
        return frozenset({(("w", inner, b.m), 1)})
    raise TypeError(b)


def _brute_depth(key):
    if not key:
        return 0
    ds = []
    for (tag, inner, m), k in key:
        ds.extend([_brute_depth(inner) + 1] * k)
    ds.sort()
    while len(ds) > 1:
        a, b = ds.pop(0), ds.pop(0)
        ds.append(max(a, b) + 1)
        ds.sort()
    return ds[0]


def _brute_family(ms, depth, zzi=False):
    items = {frozenset(): TRIV}
    for _ in range(depth):
        cur = list(items.values())
        for a in cur:
            for b in cur:
                p = product(a, b)
                items.setdefault(_brute_key(p), p)
            for m in ms:
                if zzi and _brute_key(a):
                    continue
                w = wr(a, m)
                items.setdefault(_brute_key(w), w)
    return {k for k in items if _brute_depth(k) <= depth}


@pytest.mark.parametrize("fam,depth,param", list(FROZEN_COUNTS))
def test_enumeration_counts_frozen(fam, depth, param):
    items = sc.enumerate_seq_family(fam, depth, param)
    assert len(items) == FROZEN_COUNTS[(fam, depth, param)]
    assert len({sc.canonical(s) for s in items}) == len(items)


@pytest.mark.parametrize("fam,depth,param", [("ZZI", 3, 1), ("ssZBtPt", 3, 2), ("ssZBP", 3, 3)])
def test_enumeration_matches_brute_force(fam, depth, param):
    ms = {"ZZI": [1], "ssZBtPt": [1, 2], "ssZBP": list(range(1, param + 1))}[fam]
    brute = _brute_family(ms, depth, zzi=fam == "ZZI")
    assert len(brute) == FROZEN_COUNTS[(fam, depth, param)]
    ours = {_brute_key(s) for s in sc.enumerate_seq_family(fam, depth, param)}
    assert ours == brute


def test_depth3_enumeration_properties():
    for s in sc.enumerate_seq_family("ssZBP", 3, 3):
        assert sc.seq_in_family(s, "ssZBP") and sc.seq_in_family(s, "gssZBP")
        assert sc.is_nearly_crystallographic(s) and sc.is_nearly_bieberbach(s)
        assert gx.in_family(s.kernel, "ccZ")
        assert gx.in_family(s.middle, "ccB")
        assert gx.in_family(s.quotient, "ccP")
        a, b, c = sc.shadow_orders(s, 12)
        assert a * c == b


def test_text_and_json_round_trip():
    rng = random.Random(5)
    items = sc.enumerate_seq_family("ssZBP", 2, 3)
    items += [sc.garside_quotient(wr(z(2), 3)), sc.diag_garside([wr(TRIV, 2), wr(z(1), 3)]),
              *sc.natural(wr(z(2), 2)), wr2(z(1), 2, 3), z2(2, 2)]
    rng.shuffle(items)
    for s in items:
        t = sc.parse_seq(sc.to_text(s))
        assert t.triple == s.triple and sc.seq_equiv(t, s)
        assert sc.from_json(sc.to_json(s)).triple == s.triple
        assert sc.from_json({"build": sc.to_json(s)["build"]}).triple == s.triple


def test_parse_errors():
    for bad in ["wr(triv)", "frob(triv)", "wr(triv, 2", "z(2) z(3)", "prod(triv,"]:
        with pytest.raises(ParseError):
            sc.evaluate_script(bad)
    with pytest.raises(ParseError):
        sc.parse_seq("Z -> Z ->> Z_3 [build: z(2)]")


def test_shadow_needs_divisible_modulus():
    with pytest.raises(BuildError):
        sc.shadow_orders(z(5), 12)


# ------------------------------------------------------------------ properties

@settings(max_examples=300, deadline=None)
@given(seqs(), st.integers(1, 4))
def test_wr_beta1_bookkeeping(s, m):
    w = wr(s, m)
    assert kernel_rank(w) == kernel_rank(s) * m + 1
    assert gx.beta1(w.middle) == gx.beta1(s.middle) + 1


@settings(max_examples=300, deadline=None)
@given(seqs())
def test_family_chain(s):
    if sc.seq_in_family(s, "ZZI"):
        assert sc.seq_in_family(s, "ssZBtPt")
    if sc.seq_in_family(s, "ssZBtPt"):
        assert sc.seq_in_family(s, "ssZBP")
    if sc.seq_in_family(s, "ssZBP"):
        assert sc.seq_in_family(s, "gssZBP")
        assert sc.is_nearly_crystallographic(s) and sc.is_nearly_bieberbach(s)


@settings(max_examples=300, deadline=None)
@given(garside_seqs())
def test_shadow_identity(s):
    a, b, c = sc.shadow_orders(s, 12)
    assert a * c == b
    assert c == gx.order(s.quotient)


@settings(max_examples=200, deadline=None)
@given(seqs(max_leaves=3), st.integers(1, 3))
def test_garside_drops_one_kernel_rank(s, m):
    w = wr(s, m)
    g = sc.garside_quotient(w)
    assert kernel_rank(g) == kernel_rank(w) - 1
    assert g.quotient == w.quotient


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(seqs(max_leaves=2), st.integers(1, 3)), min_size=2, max_size=3))
def test_diag_garside_beta1(parts):
    ws = [wr(s, m) for s, m in parts]
    d = sc.diag_garside(ws)
    assert kernel_rank(d) == sum(kernel_rank(w) for w in ws) - 1
    if gx.is_torsion_free(d.middle):
        assert gx.beta1(d.middle) == sum(gx.beta1(w.middle) for w in ws) - 1


@settings(max_examples=200, deadline=None)
@given(seqs())
def test_canonical_rebuild(s):
    c = sc.canonical(s)
    t = sc.from_canonical(c)
    assert sc.canonical(t) == c
    assert t.triple == s.triple
