from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from surforbit import corpus
from surforbit import groupexpr as gx
from surforbit import orbitcalc as oc
from surforbit import reebmodel as rm
from surforbit import seqcalc as sc
from surforbit.errors import (NotExceptional, UnannotatedTorusSymmetry, UnsupportedAdaptedSet)
from surforbit.groupexpr import ONE, ZZ, Prod, Zmod

import golden_models as gm


def triple(r):
    return r.seq.triple


# ------------------------------------------------------------ base cases

def test_cylinder_without_critical_points():
    r = oc.compute(gm.cylinder_plain(), ["b1"])
    assert triple(r) == (ONE, ONE, ONE) and r.pi1_orbit == ONE
    r = oc.compute(gm.cylinder_plain())
    assert r.seq.middle == ONE and r.pi0_full_stab == ZZ
    assert oc.compute(gm.cylinder_plain(), []).homotopy.stabilizer_id == "circle"


def test_disk_one_extreme():
    r = oc.compute(gm.disk_one_extreme())
    assert triple(r) == (ONE, ONE, ONE) and r.betti1 == 0
    assert oc.stabilizer_homotopy(gm.disk_one_extreme(), []) == "circle"
    assert oc.stabilizer_homotopy(gm.disk_one_extreme(), ["b"]) == "contractible"


@pytest.mark.parametrize("m", [2, 4, 6])
def test_disk_degenerate_extreme(m):
    model = gm.disk_deg_extreme(m)
    r = oc.compute(model)
    assert sc.seq_equiv(r.seq, sc.z(m))
    assert r.pi1_orbit == ZZ
    assert oc.forget_boundary(r, model).triple == (ONE, Zmod(m), Zmod(m))
    assert oc.compute(model, []).seq.triple == (ONE, Zmod(m), Zmod(m))


def test_generic_saddle():
    r = oc.compute(gm.disk_one_saddle())
    assert sc.seq_equiv(r.seq, sc.z(1))
    assert r.pi1_orbit == ZZ
    assert rm.pi0_delta_rank(gm.disk_one_saddle(), ["b"]) == 1
    assert oc.forget_boundary(r, gm.disk_one_saddle()).triple == (ONE, ONE, ONE)
    h = r.homotopy
    assert (h.stabilizer_id, h.diffid_factor, h.weak_equiv_torus_rank) == ("contractible", "point", 1)


def test_symmetric_saddle():
    r = oc.compute(gm.disk_symmetric_saddle())
    assert sc.seq_equiv(r.seq, sc.z(2))
    assert triple(r) == (ZZ, ZZ, Zmod(2))
    assert sc.seq_in_family(r.seq, "ssZBtPt")
    assert r.homotopy.weak_equiv_torus_rank is None


def test_ribbon_symmetry_gives_wreath():
    r = oc.compute(gm.ribbon_leaf(4))
    assert sc.seq_equiv(r.seq, sc.wr(sc.TRIV, 4))


def test_two_generic_saddles():
    r = oc.compute(gm.disk_two_saddles_generic())
    assert sc.seq_in_family(r.seq, "ZZI")
    assert r.pi1_orbit == Prod(ZZ, ZZ)
    assert r.homotopy.weak_equiv_torus_rank == 2


# ------------------------------------------------------------ chi < 0

def test_pants():
    model = gm.pants()
    r = oc.compute(model)
    assert isinstance(r.seq.build, sc.BProd) and len(r.seq.build.parts) == 3
    assert triple(r) == (ONE, ONE, ONE)
    assert oc.forget_boundary(r, model) == r.seq


def test_negative_chi_generic_is_zzi():
    rng = corpus.default_rng(12)
    for _ in range(30):
        m = corpus.negative_chi_model(rng, generic=True)
        r = oc.compute(m)
        assert sc.seq_in_family(r.seq, "ZZI")
        assert gx.in_family(r.pi1_orbit, "ccZ")


# ------------------------------------------------------------ torus

@pytest.mark.parametrize("m", [1, 2, 3, 5])
def test_torus_fibration(m):
    r = oc.compute(gm.torus_fibration(m))
    assert r.seq.middle == gx.normalize(Zmod(m))
    assert r.pi1_orbit == ZZ
    assert r.homotopy.stabilizer_id == "circle"
    assert oc.exceptional_lookup(gm.torus_fibration(m)).seq.middle == r.seq.middle


def test_torus_cycle_one_saddle():
    r = oc.compute(gm.torus_one_saddle())
    assert r.pi1_orbit == Prod(ZZ, ZZ)
    assert isinstance(r.orbit_seq.build, sc.BWr) and r.orbit_seq.build.m == 1
    assert r.homotopy.diffid_factor == "T2"


def test_torus_tree_trivial_action():
    m = rm.from_dict({"surface": "torus", "vertices": [
        {"id": "c", "kind": "CriticalLeaf", "crit_points": [2]},
        {"id": "x", "kind": "NonDegExtreme"}], "edges": [["c", "x"]]})
    r = oc.compute(m)
    assert r.pi1_orbit == Prod(ZZ, ZZ)
    assert triple(r) == (ONE, ONE, ONE)


def test_torus_tree_annotated():
    rng = corpus.default_rng(2)
    r = oc.compute(corpus.torus_tree(rng, 2, 2, 1))
    w = r.seq.build.of.build
    assert isinstance(w, sc.BWr2) and (w.m, w.n) == (2, 2)
    assert gx.order(r.seq.quotient) % 4 == 0
    assert gx.free_rank(r.seq.kernel) == 4 * gx.free_rank(w.inner.kernel)
    r = oc.compute(corpus.torus_tree(rng, 2, 3, 2))
    assert isinstance(r.pi1_orbit, gx.WrZ2) and (r.pi1_orbit.m, r.pi1_orbit.n) == (2, 3)


def test_torus_tree_needs_annotation():
    m = rm.from_dict({"surface": "torus", "vertices": [
        {"id": "c", "kind": "CriticalLeaf", "crit_points": [2, 2]},
        {"id": "x", "kind": "NonDegExtreme"}, {"id": "y", "kind": "NonDegExtreme"}],
        "edges": [["c", "x"], ["c", "y"]]})
    assert rm.validate(m) == []
    with pytest.raises(UnannotatedTorusSymmetry):
        oc.compute(m)


def test_simple_torus_orbit_is_wreath():
    rng = corpus.default_rng(6)
    for _ in range(20):
        r = oc.compute(corpus.simple_morse_torus(rng))
        b = r.orbit_seq.build
        assert isinstance(b, sc.BWr)
        assert sc.seq_in_family(b.inner, "ssZBtPt")
        assert isinstance(r.seq.build, sc.BGarside)


# ------------------------------------------------------------ errors & lookup

def test_unsupported_adapted_sets():
    with pytest.raises(UnsupportedAdaptedSet):
        oc.compute(gm.disk_one_saddle(), ["b", "x1"])
    with pytest.raises(UnsupportedAdaptedSet):
        oc.compute(rm.from_dict({**rm.to_dict(gm.torus_one_saddle()), "X": ["x"]}))


def test_exceptional_types():
    assert oc.exceptional_type(gm.disk_one_extreme(X=())) == "B"
    assert oc.exceptional_type(gm.cylinder_plain(X=())) == "C"
    assert oc.exceptional_type(gm.torus_fibration(2)) == "D"
    assert oc.exceptional_type(gm.disk_one_saddle()) is None
    with pytest.raises(NotExceptional):
        oc.exceptional_lookup(gm.disk_one_saddle())
    r = oc.exceptional_lookup(gm.cylinder_plain(X=()))
    assert r.homotopy.stabilizer_id == "circle" and r.pi1_orbit == ONE


def test_homotopy_table():
    assert oc.diffid_factor(gm.disk_one_saddle(), ["b"]) == "point"
    assert oc.diffid_factor(gm.disk_one_saddle(), []) == "circle"
    assert oc.diffid_factor(gm.torus_one_saddle(), []) == "T2"
    assert oc.diffid_factor(gm.cylinder_plain(), ["b1"]) == "point"
    for m in [gm.disk_one_saddle(), gm.disk_symmetric_saddle(), gm.pants(), gm.torus_one_saddle()]:
        assert oc.stabilizer_homotopy(m, m.X) == "contractible"


def test_trace_names_each_node():
    d = oc.compute(gm.disk_one_saddle(), []).as_dict(trace=True)
    assert any("case A" in line for line in d["trace"])
    assert any("Garside" in line for line in d["trace"])


# ------------------------------------------------------------ properties

@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_generic_disk_rank_equals_internal_edges(seed):
    rng = random.Random(seed)
    m = corpus.generic_morse_disk(rng)
    r = oc.compute(m)
    assert gx.in_family(r.pi1_orbit, "ccZ")
    assert gx.beta1(r.pi1_orbit) == rm.pi0_delta_rank(m, m.X)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_arbitrary_results_in_ssZBP(seed):
    rng = random.Random(seed)
    m = corpus.arbitrary_model(rng)
    r = oc.compute(m)
    assert r.betti1 == gx.beta1(r.pi1_orbit) == gx.center_rank(r.pi1_orbit)
    if m.surface.kind != "torus" and m.X:
        assert sc.seq_in_family(r.seq, "ssZBP")
        assert gx.in_family(r.seq.kernel, "ccZ")
        assert gx.in_family(r.seq.quotient, "ccP")
        assert gx.is_torsion_free(r.seq.middle)
        if m.euler < len(m.X):
            assert r.pi1_orbit == r.seq.middle


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 31))
def test_forget_boundary_rows(seed):
    rng = random.Random(seed)
    m = corpus.simple_morse_disk(rng)
    if not m.has_critical_data:
        return
    full = oc.compute(m, m.boundary_vertices)
    free = oc.compute(m, [])
    assert free.seq == oc.forget_boundary(full, m)
    assert free.seq.quotient == full.seq.quotient
    assert gx.free_rank(free.seq.kernel) == gx.free_rank(full.seq.kernel) - 1
