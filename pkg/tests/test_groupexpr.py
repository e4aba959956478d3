from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from surforbit import groupexpr as gx
from surforbit.errors import FamilyError, ParseError
from surforbit.groupexpr import (ONE, ZZ, DiagQuot, GroupFamily, Prod, WrZ, WrZ2, WrZmod,
                                 Zmod, beta1, center_rank, normalize)

# random words over the alphabet; torsion-free ones live in B u B'
def b_words(max_leaves=6):
    leaf = st.sampled_from([ONE, ZZ])
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            st.lists(kids, min_size=2, max_size=3).map(lambda fs: Prod(*fs)),
            st.tuples(kids, st.integers(1, 4)).map(lambda t: WrZ(*t)),
        ),
        max_leaves=max_leaves)

def bprime_words():
    return st.tuples(b_words(4), st.integers(1, 3), st.integers(1, 3)).map(lambda t: WrZ2(*t))

def p_words():
    leaf = st.one_of(st.just(ONE), st.integers(1, 4).map(Zmod))
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            st.lists(kids, min_size=2, max_size=3).map(lambda fs: Prod(*fs)),
            st.tuples(kids, st.integers(1, 3)).map(lambda t: WrZmod(*t)),
        ),
        max_leaves=4)

# ------------------------------------------------------------------ examples

def test_normalize_examples():
    assert normalize(Prod(ONE, ZZ)) == ZZ
    assert normalize(WrZ(ONE, 5)) == ZZ
    assert normalize(Prod(ZZ, Prod(ZZ, ONE))) == Prod(ZZ, ZZ)
    assert normalize(Zmod(1)) == ONE
    assert normalize(WrZmod(ONE, 3)) == Zmod(3)
    assert normalize(Prod()) == ONE
    assert normalize(WrZ(ZZ, 1)) == Prod(ZZ, ZZ)

def test_beta1_examples():
    assert beta1(Prod(ZZ, WrZ(ONE, 7))) == 2
    assert beta1(WrZ2(ONE, 2, 3)) == 2
    e = Prod(WrZ(WrZ(Prod(ZZ, ZZ, ZZ), 2), 5), WrZ(ZZ, 18))
    assert beta1(e) == 7
    assert center_rank(e) == 7
    with pytest.raises(FamilyError):
        beta1(Prod(ZZ, Zmod(2)))

def test_center_rank_examples():
    assert center_rank(ZZ) == 1
    assert center_rank(WrZ(Prod(ZZ, ZZ), 3)) == 3
    assert center_rank(WrZ2(ZZ, 2, 2)) == 3
    with pytest.raises(FamilyError):
        center_rank(WrZmod(ZZ, 2))

def test_abelianization_examples():
    assert gx.abelianization(WrZ(ZZ, 4)) == Prod(ZZ, ZZ)
    assert gx.abelianization(ONE) == ONE
    assert gx.free_rank(gx.abelianization(WrZ2(Prod(ZZ, ZZ), 2, 3))) == 4
    with pytest.raises(FamilyError):
        gx.abelianization(Zmod(3))

def test_family_examples():
    e = Prod(WrZ(WrZ(Prod(ZZ, ZZ, ZZ), 2), 7), WrZ(ZZ, 18))
    assert gx.in_family(e, GroupFamily.ccB)
    assert not gx.in_family(e, GroupFamily.clsBt)
    assert gx.in_family(WrZmod(Zmod(2), 2), GroupFamily.clsGt)
    assert not gx.in_family(WrZ(ZZ, 3), GroupFamily.clsBt)
    assert gx.in_family(WrZ2(ZZ, 2, 3), GroupFamily.ccBprime)
    assert gx.in_family(Prod(ZZ, ZZ), GroupFamily.ccZ)

def test_torsion_and_order_examples():
    assert gx.is_torsion_free(WrZ(ZZ, 2))
    assert not gx.is_torsion_free(Zmod(4))
    assert not gx.is_torsion_free(Prod(ZZ, WrZmod(ZZ, 2)))
    assert gx.order(WrZmod(Zmod(2), 3)) == 24
    assert gx.order(ONE) == 1
    assert gx.order(WrZ(ONE, 9)) == gx.INFINITE

def test_diag_quotient():
    # Z^2 / <(2, 2)> = Z x Z_2
    assert normalize(DiagQuot(((ONE, 2), (ONE, 2)))) == Prod(ZZ, Zmod(2))
    d = DiagQuot(((ZZ, 2), (ONE, 3)))
    assert beta1(d) == 2
    assert gx.is_torsion_free(d)
    assert not gx.is_torsion_free(DiagQuot(((ZZ, 2), (ZZ, 4))))

def test_enumeration_examples():
    assert set(gx.enumerate_family("ccZ", 1, 1)) == {ONE, ZZ}
    gt = set(gx.enumerate_family("clsGt", 2, 2))
    assert WrZmod(Zmod(2), 2) in gt
    b = set(gx.enumerate_family("ccB", 2, 2))
    assert {WrZ(ZZ, 2), Prod(ZZ, ZZ), ZZ, ONE} <= b

@pytest.mark.parametrize("fam", list(GroupFamily))
def test_enumeration_unique_and_in_family(fam):
    items = list(gx.enumerate_family(fam, 3, 2))
    assert len(items) == len(set(items))
    for e in items:
        assert normalize(e) == e
        assert gx.in_family(e, fam)

def _brute_b(depth, max_param):
    """Independent closure: all words of depth <= d, normalized afterwards."""
    words = {0: {ONE}}
    for d in range(1, depth + 1):
        prev = set().union(*words.values())
        new = set(prev)
        for a in prev:
            for m in range(1, max_param + 1):
                new.add(WrZ(a, m))
            for b in prev:
                new.add(Prod(a, b))
        words[d] = {normalize(w) for w in new}
    return words[depth]

def test_enumeration_matches_brute_force_closure():
    assert set(gx.enumerate_family("ccB", 3, 2)) == _brute_b(3, 2)

def test_text_round_trip_and_errors():
    for s in ["1", "Z", "Z_3", "(Z x Z)", "(Z wr[2] Z)", "((Z x Z) wr[2,3] Z2)", "(Z_2 wr Z_2)"]:
        e = gx.parse(s)
        assert gx.parse(gx.to_text(e)) == e
    for bad in ["(Z x", "Z wr[0] Z", "Q", "(Z x Z))"]:
        with pytest.raises(ParseError):
            gx.parse(bad)

# ------------------------------------------------------------------ properties

@settings(max_examples=300, deadline=None)
@given(b_words())
def test_normalize_idempotent(e):
    n = normalize(e)
    assert normalize(n) == n
    assert gx.parse(gx.to_text(n)) == n

@settings(max_examples=300, deadline=None)
@given(st.one_of(b_words(), bprime_words()))
def test_beta1_equals_center_and_abelianization_rank(e):
    b = beta1(e)
    assert b == center_rank(e)
    assert b == gx.free_rank(gx.abelianization(e))
    assert b == beta1(normalize(e))

@settings(max_examples=300, deadline=None)
@given(st.one_of(b_words(), bprime_words(), p_words()))
def test_family_inclusions(e):
    if gx.in_family(e, "clsBt"):
        assert gx.in_family(e, "ccB")
    if gx.in_family(e, "clsGt"):
        assert gx.in_family(e, "ccP")
    if gx.in_family(e, "ccB") or gx.in_family(e, "ccBprime"):
        assert gx.is_torsion_free(e)
    if gx.in_family(e, "ccP"):
        assert gx.is_finite(e)

def _rewrite(e, rule, a, b):
    """Apply one of the four Z^2-realization rewrites at every matching spot."""
    if isinstance(e, Prod):
        fs = tuple(_rewrite(f, rule, a, b) for f in e.factors)
        if rule == "unit":
            return Prod(*fs, ONE)
        if rule == "assoc" and len(fs) >= 3:
            return Prod(Prod(fs[0], fs[1]), *fs[2:])
        if rule == "z2" and len(fs) == 2 and fs == (ZZ, ZZ):
            return WrZ2(ONE, a, b)
        return Prod(*fs)
    if isinstance(e, WrZ):
        return WrZ(_rewrite(e.inner, rule, a, b), e.m)
    if isinstance(e, WrZ2):
        return WrZ2(_rewrite(e.inner, rule, a, b), e.m, e.n)
    if isinstance(e, type(ZZ)) and rule == "zleaf":
        return WrZ(ONE, a)
    return e

@settings(max_examples=300, deadline=None)
@given(b_words(), st.sampled_from(["unit", "zleaf", "assoc", "z2"]),
       st.integers(1, 4), st.integers(1, 4))
def test_beta1_invariant_under_rewrites(e, rule, a, b):
    assert beta1(_rewrite(e, rule, a, b)) == beta1(e)

def test_four_words_for_Z2():
    words = [Prod(ZZ, ZZ), Prod(ZZ, WrZ(ONE, 3)), WrZ2(ONE, 2, 5), Prod(Prod(ZZ, ONE), ZZ)]
    assert [beta1(w) for w in words] == [2, 2, 2, 2]
    assert all(gx.abelianization(w) == Prod(ZZ, ZZ) for w in words)
