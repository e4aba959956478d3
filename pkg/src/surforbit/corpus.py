"""Random Reeb models for property tests and census runs.

Generators:
  generic_morse_disk     Morse, all critical values distinct
  simple_morse_disk      Morse, symmetric copies allowed at equal levels
  simple_morse_cylinder  as above on the annulus; ``equal_signs`` makes both
                         boundary circles local minima levels
  simple_morse_torus     S1-valued, the graph is one cycle with hanging disks,
                         repeated periodically
  arbitrary_model        degenerate saddles, multi-point leaves with explicit
                         annotations, degenerate extremes, surfaces with chi < 0
  realize_sequence       a disk model whose sequence is a given product/wreath build

Seeds come from ``ORBITCALC_SEED`` when set (see ``default_rng``).
"""

from __future__ import annotations

import os
import random
from dataclasses import replace
from fractions import Fraction
from typing import Optional

from . import reebmodel as rm
from . import seqcalc as sc


def default_rng(seed: Optional[int] = None) -> random.Random:
    if seed is None:
        seed = int(os.environ.get("ORBITCALC_SEED", "20240601"))
    return random.Random(seed)


class _Builder:
    def __init__(self, target="R"):
        self.vertices = []
        self.edges = []
        self.symmetry = {}
        self.ribbon = {}
        self.target = target
        self.n = 0

    def vertex(self, kind, level=None, m=None, crit=(), prefix=None):
        self.n += 1
        vid = f"{prefix or kind[0].lower()}{self.n}"
        self.vertices.append(rm.Vertex(vid, kind, m, tuple(crit), level))
        return vid

    def edge(self, u, v):
        self.edges.append(rm.Edge(len(self.edges), u, v))
        return len(self.edges) - 1

    def model(self, X=(), surface=None, name="", **kw):
        m = rm.ReebModel(rm.SurfaceSpec("disk", 0, 1), self.target, tuple(self.vertices),
                         tuple(self.edges), dict(self.ribbon), dict(self.symmetry), tuple(X),
                         name=name, **kw)
        if surface is None:
            g, b = rm.surface_counts(m)
            surface = rm.SurfaceSpec.from_counts(int(g), b)
        return replace(m, surface=surface)


def _step(rng):
    return Fraction(rng.randint(1, 9), rng.randint(1, 4))


# --------------------------------------------------------------- generic Morse

def generic_morse_disk(rng: random.Random, n_saddles: Optional[int] = None) -> rm.ReebModel:
    """Boundary circle plus a random binary tree of saddles; critical values distinct."""
    if n_saddles is None:
        n_saddles = rng.randint(0, 7)
    b = _Builder()
    # tree shape: kinds and parent pointers, plus which side of its parent each child lies on
    kinds, parent, up = ["B"], [None], [None]
    open_slots = [(0, rng.choice([True, False]))]  # (parent index, child above parent?)
    saddles = 0
    while open_slots:
        pi, above = open_slots.pop(rng.randrange(len(open_slots)))
        idx = len(kinds)
        parent.append(pi)
        up.append(above)
        if saddles < n_saddles and (rng.random() < 0.6 or len(open_slots) == 0):
            kinds.append("S")
            saddles += 1
            if rng.random() < 0.5:
                open_slots += [(idx, above), (idx, above)]
            else:
                open_slots += [(idx, above), (idx, not above)]
        else:
            kinds.append("E")
    # orient edges low -> high and take a random linear extension
    n = len(kinds)
    succ = {i: [] for i in range(n)}
    indeg = [0] * n
    for i in range(1, n):
        lo, hi = (parent[i], i) if up[i] else (i, parent[i])
        succ[lo].append(hi)
        indeg[hi] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    level = {}
    k = 0
    while ready:
        i = ready.pop(rng.randrange(len(ready)))
        level[i] = Fraction(k)
        k += 1
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    ids = []
    for i, kd in enumerate(kinds):
        if kd == "B":
            ids.append(b.vertex(rm.BOUNDARY, level[i]))
        elif kd == "S":
            ids.append(b.vertex(rm.LEAF, level[i], crit=(2,)))
        else:
            ids.append(b.vertex(rm.NONDEG, level[i]))
    for i in range(1, n):
        b.edge(ids[parent[i]], ids[i])
    return b.model(X=(ids[0],), name="generic-morse-disk")


# ---------------------------------------------------------------- simple Morse

def _simple_subtree(b: _Builder, rng, parent_id, parent_level, direction, depth, sym_prob=0.5,
                    template=None):
    """Grow a disk region below/above parent; returns the id of its top vertex.

    ``template`` replays a previously grown subtree (same shape and levels)."""
    if template is None:
        template = _simple_template(rng, parent_level, direction, depth, sym_prob)
    return _replay(b, parent_id, template)


def _simple_template(rng, parent_level, direction, depth, sym_prob):
    level = parent_level + direction * _step(rng)
    if depth <= 0 or rng.random() < 0.3:
        return ("E", level)
    if rng.random() < sym_prob:
        child = _simple_template(rng, level, direction, depth - 1, sym_prob)
        return ("S", level, [child, child])
    if rng.random() < 0.5:
        kids = [_simple_template(rng, level, direction, depth - 1, sym_prob),
                _simple_template(rng, level, direction, depth - 1, sym_prob)]
    else:
        kids = [_simple_template(rng, level, direction, depth - 1, sym_prob),
                _simple_template(rng, level, -direction, depth - 1, sym_prob)]
    return ("S", level, kids)


def _replay(b: _Builder, parent_id, t):
    if t[0] == "E":
        v = b.vertex(rm.NONDEG, t[1])
        b.edge(parent_id, v)
        return v
    v = b.vertex(rm.LEAF, t[1], crit=(2,))
    b.edge(parent_id, v)
    for c in t[2]:
        _replay(b, v, c)
    return v


def simple_morse_disk(rng: random.Random, depth: int = 4) -> rm.ReebModel:
    b = _Builder()
    root = b.vertex(rm.BOUNDARY, Fraction(0))
    _simple_subtree(b, rng, root, Fraction(0), rng.choice([1, -1]), depth)
    return b.model(X=(root,), name="simple-morse-disk")


def simple_morse_cylinder(rng: random.Random, depth: int = 3, equal_signs: bool = False,
                          path_len: Optional[int] = None) -> rm.ReebModel:
    """Path of saddles between two boundary circles, each with one hanging disk."""
    b = _Builder()
    k = path_len if path_len is not None else rng.randint(0 if not equal_signs else 1, 4)
    b1 = b.vertex(rm.BOUNDARY, Fraction(0))
    levels = sorted({Fraction(rng.randint(1, 40), rng.randint(1, 3)) for _ in range(k)})
    while len(levels) < k:
        levels.append(levels[-1] + 1 if levels else Fraction(1))
    rng.shuffle(levels)
    if equal_signs:
        end_level = Fraction(0)
    else:
        end_level = rng.choice([Fraction(0), max(levels, default=Fraction(0)) + 1])
    prev, prev_level = b1, Fraction(0)
    path_levels = [Fraction(0)] + levels + [end_level]
    for i in range(1, k + 1):
        lv = path_levels[i]
        s = b.vertex(rm.LEAF, lv, crit=(2,))
        b.edge(prev, s)
        lo, hi = path_levels[i - 1], path_levels[i + 1]
        if lo < lv and hi < lv:
            d = 1
        elif lo > lv and hi > lv:
            d = -1
        else:
            d = rng.choice([1, -1])
        _simple_subtree(b, rng, s, lv, d, depth)
        prev = s
    if k == 0 and end_level == 0:
        end_level = Fraction(1)
    b2 = b.vertex(rm.BOUNDARY, end_level)
    b.edge(prev, b2)
    return b.model(X=(b1, b2), name="simple-morse-cylinder")


def simple_morse_torus(rng: random.Random, period: Optional[int] = None,
                       copies: Optional[int] = None, depth: int = 2) -> rm.ReebModel:
    """S1-valued function whose graph is a cycle of saddles with hanging disks;
    one period of the cycle is repeated ``copies`` times at equal levels."""
    b = _Builder(target="S1")
    k = period or rng.randint(1, 3)
    m = copies or rng.randint(1, 3)
    temps = []
    for i in range(k):
        lv = Fraction(i + 1, k + 1)
        temps.append((lv, _simple_template(rng, lv, rng.choice([1, -1]), depth, 0.5)))
    cyc = []
    for _ in range(m):
        for lv, t in temps:
            s = b.vertex(rm.LEAF, lv, crit=(2,))
            _replay(b, s, t)
            cyc.append(s)
    for i, s in enumerate(cyc):
        b.edge(s, cyc[(i + 1) % len(cyc)])
    return b.model(surface=rm.SurfaceSpec("torus", 1, 0), name="simple-morse-torus")


# ------------------------------------------------------------ arbitrary models

def _arb_subtree(b: _Builder, rng, parent_id, depth):
    """Disk region with degenerate points; every leaf symmetric or not carries
    an explicit annotation."""
    r = rng.random()
    if depth <= 0 or r < 0.25:
        if rng.random() < 0.3:
            v = b.vertex(rm.DEG, m=rng.choice([2, 4, 6]))
        else:
            v = b.vertex(rm.NONDEG)
        b.edge(parent_id, v)
        return v
    v = b.vertex(rm.LEAF)
    via = b.edge(parent_id, v)
    shape = rng.random()
    if shape < 0.35:
        # Z_m-symmetric leaf: m points, optional fixed centre, k orbits of size m
        m = rng.choice([2, 2, 3, 4])
        k = rng.randint(1, 2)
        centre = rng.random() < 0.5
        reps = []
        for _ in range(k):
            reps.append(_template_of(b, rng, depth - 1))
        orbits = []
        for t in reps:
            orbit = []
            for _ in range(m):
                w = _replay_arb(b, v, t)
                orbit.append(_edge_to(b, v, w))
            orbits.append(tuple(orbit))
        fixed = [via]
        if centre:
            c = _arb_subtree(b, rng, v, depth - 1)
            fixed.append(_edge_to(b, v, c))
        deg = 1 + m * k + (1 if centre else 0)
        crit = (1 + (deg - 2) // m,) * m if (deg - 2) % m == 0 else (deg - 1,)
        _set_crit(b, v, crit)
        b.symmetry[v] = rm.SymAnn(v, m, tuple(fixed), tuple(orbits))
    else:
        # asymmetric leaf: one point of p branches or several saddle points
        nk = rng.randint(1, 3)
        for _ in range(nk):
            _arb_subtree(b, rng, v, depth - 1)
        deg = nk + 1
        if rng.random() < 0.5 or deg < 3:
            crit = (deg - 1,)
        else:
            crit = (2,) * (deg - 2)
        _set_crit(b, v, crit)
        b.symmetry[v] = rm.SymAnn(v, 1, (via,))
    return v


def _edge_to(b: _Builder, u, w):
    for e in reversed(b.edges):
        if {e.u, e.v} == {u, w}:
            return e.id
    raise KeyError((u, w))


def _template_of(b: _Builder, rng, depth):
    """Grow a subtree in a scratch builder and return it as a replayable template."""
    scratch = _Builder()
    scratch.n = 0
    root = scratch.vertex(rm.BOUNDARY)
    top = _arb_subtree(scratch, rng, root, depth)
    return (scratch, top)


def _replay_arb(b: _Builder, parent_id, t):
    scratch, top = t
    smap = {v.id: v for v in scratch.vertices}
    ren = {}

    def copy(vid, par, via_old):
        vx = smap[vid]
        nv = b.vertex(vx.kind, vx.level, vx.m, vx.crit_points)
        ren[vid] = nv
        new_via = b.edge(par, nv)
        emap = {}
        emap[via_old] = new_via
        for e in scratch.edges:
            if e.id == via_old or vid not in (e.u, e.v):
                continue
            w = e.other(vid)
            if w in ren:
                continue
            copy(w, nv, e.id)
            emap[e.id] = _edge_to(b, nv, ren[w])
        if vid in scratch.symmetry:
            a = scratch.symmetry[vid]
            b.symmetry[nv] = rm.SymAnn(nv, a.m, tuple(emap[e] for e in a.fixed),
                                       tuple(tuple(emap[e] for e in o) for o in a.orbits), a.n)
        return nv

    root_edge = next(e for e in scratch.edges if top in (e.u, e.v) and
                     smap[e.other(top)].kind == rm.BOUNDARY)
    return copy(top, parent_id, root_edge.id)


def arbitrary_disk(rng: random.Random, depth: int = 3) -> rm.ReebModel:
    b = _Builder()
    root = b.vertex(rm.BOUNDARY)
    _arb_subtree(b, rng, root, depth)
    return b.model(X=(root,), name="arbitrary-disk")


def arbitrary_cylinder(rng: random.Random, depth: int = 2) -> rm.ReebModel:
    b = _Builder()
    b1 = b.vertex(rm.BOUNDARY)
    prev = b1
    for _ in range(rng.randint(0, 3)):
        v = b.vertex(rm.LEAF)
        via = b.edge(prev, v)
        nk = rng.randint(0, 2)
        for _ in range(nk):
            _arb_subtree(b, rng, v, depth)
        deg = nk + 2
        _set_crit(b, v, (deg - 1,) if deg > 2 or rng.random() < 0.5 else (1,))
        prev = v
        b.symmetry[v] = rm.SymAnn(v, 1, (via,))
    b2 = b.vertex(rm.BOUNDARY)
    b.edge(prev, b2)
    X = (b1, b2) if rng.random() < 0.7 else (b1,)
    return b.model(X=X, name="arbitrary-cylinder")


def _set_crit(b: _Builder, v, crit):
    i = [x.id for x in b.vertices].index(v)
    b.vertices[i] = rm.Vertex(v, rm.LEAF, None, tuple(crit), b.vertices[i].level)


def negative_chi_model(rng: random.Random, handles: Optional[int] = None,
                       extra_boundaries: Optional[int] = None,
                       generic: bool = True) -> rm.ReebModel:
    """Start from a generic Morse disk and add handles (pairs of saddles joined
    by two edges) and boundary circles (replacing extremes) until chi < 0."""
    for _ in range(100):
        base = generic_morse_disk(rng, rng.randint(2, 6)) if generic else simple_morse_disk(rng, 3)
        h = handles if handles is not None else rng.randint(0, 2)
        nb = extra_boundaries if extra_boundaries is not None else rng.randint(0, 2)
        verts = list(base.vertices)
        edges = list(base.edges)
        levels = {v.id: v.level for v in verts}
        used = set(levels.values())
        nid = [0]

        def fresh(lo, hi):
            for _ in range(1000):
                x = lo + (hi - lo) * Fraction(rng.randint(1, 999), 1000)
                if x not in used:
                    used.add(x)
                    return x
            raise RuntimeError("no fresh level")

        for _ in range(h):
            cand = [e for e in edges if all(x.kind == rm.LEAF for x in verts if x.id in (e.u, e.v))
                    and e.u != e.v] or [e for e in edges]
            e = rng.choice(cand)
            lo, hi = levels[e.u], levels[e.v]
            a, c = sorted([fresh(min(lo, hi), max(lo, hi)), fresh(min(lo, hi), max(lo, hi))])
            if lo > hi:
                a, c = c, a
            nid[0] += 1
            ha, hb = f"ha{nid[0]}", f"hb{nid[0]}"
            verts += [rm.Vertex(ha, rm.LEAF, None, (2,), a), rm.Vertex(hb, rm.LEAF, None, (2,), c)]
            levels[ha], levels[hb] = a, c
            edges.remove(e)
            base_id = max(x.id for x in edges + [e]) + 1
            edges += [rm.Edge(e.id, e.u, ha), rm.Edge(base_id, ha, hb),
                      rm.Edge(base_id + 1, ha, hb), rm.Edge(base_id + 2, hb, e.v)]
        extremes = [v for v in verts if v.kind == rm.NONDEG]
        rng.shuffle(extremes)
        for v in extremes[:nb]:
            verts[verts.index(v)] = rm.Vertex(v.id, rm.BOUNDARY, None, (), v.level)
        m = replace(base, vertices=tuple(verts), edges=tuple(sorted(edges, key=lambda e: e.id)))
        g, bd = rm.surface_counts(m)
        if 2 - 2 * g - bd >= 0:
            continue
        bds = m.boundary_vertices
        choice = rng.random()
        if choice < 0.6:
            X = tuple(bds)
        elif choice < 0.85:
            X = tuple(x for x in bds if rng.random() < 0.5) or (bds[0],)
        else:
            X = ()
        m = replace(m, surface=rm.SurfaceSpec.from_counts(int(g), bd), X=X,
                    name="negative-chi" + ("-generic" if generic else ""))
        return m
    raise RuntimeError("could not produce a surface with chi < 0")


def arbitrary_model(rng: random.Random) -> rm.ReebModel:
    r = rng.random()
    if r < 0.45:
        return arbitrary_disk(rng)
    if r < 0.75:
        return arbitrary_cylinder(rng)
    return negative_chi_model(rng, generic=rng.random() < 0.5)


# ------------------------------------------------------------------ tori

def torus_tree(rng: random.Random, m: int = 1, n: int = 1, reps: int = 1) -> rm.ReebModel:
    """Torus whose graph is a tree: one leaf of genus 1 with m*n*reps hanging disks."""
    b = _Builder()
    v = b.vertex(rm.LEAF)
    temps = [_template_of(b, rng, 1) for _ in range(reps)]
    orbits = []
    for t in temps:
        orbit = []
        for _ in range(m * n):
            w = _replay_arb(b, v, t)
            orbit.append(_edge_to(b, v, w))
        orbits.append(tuple(orbit))
    deg = m * n * reps
    # genus 1 with deg holes: chi(K) = -deg, met by deg saddle points
    _set_crit(b, v, (2,) * deg)
    b.symmetry[v] = rm.SymAnn(v, m, (), tuple(orbits), n)
    return b.model(surface=rm.SurfaceSpec("torus", 1, 0), name="torus-tree")


def vertical_torus(rng: random.Random) -> rm.ReebModel:
    """Height function of an upright torus: min, two saddles joined twice, max."""
    b = _Builder()
    lo = b.vertex(rm.NONDEG, Fraction(0))
    s1 = b.vertex(rm.LEAF, Fraction(1), crit=(2,))
    s2 = b.vertex(rm.LEAF, Fraction(2), crit=(2,))
    hi = b.vertex(rm.NONDEG, Fraction(3))
    b.edge(lo, s1)
    b.edge(s1, s2)
    b.edge(s1, s2)
    b.edge(s2, hi)
    return b.model(surface=rm.SurfaceSpec("torus", 1, 0), name="vertical-torus")


def torus_fibration(m: int) -> rm.ReebModel:
    return rm.ReebModel(rm.SurfaceSpec("torus", 1, 0), "S1", (), (), fibration_degree=m,
                        name="torus-fibration")


# ---------------------------------------------------------- realization

def realize_sequence(seq_or_canon) -> rm.ReebModel:
    """A disk model with X = boundary whose sequence has the given canonical
    build (products and wr(., m) only)."""
    c = seq_or_canon if isinstance(seq_or_canon, tuple) else sc.canonical(seq_or_canon)
    b = _Builder()
    root = b.vertex(rm.BOUNDARY)
    _realize(b, root, c)
    return b.model(X=(root,), name="realized")


def _atoms(c):
    return list(c[1]) if c[0] == "prod" else [c]


def _realize(b: _Builder, parent, c):
    atoms = _atoms(c)
    for a in atoms:
        if a[0] != "wr":
            raise ValueError(f"cannot realize {a[0]} atoms")
    if not atoms:
        v = b.vertex(rm.NONDEG)
        b.edge(parent, v)
        return v
    v = b.vertex(rm.LEAF)
    via = b.edge(parent, v)
    if sc._Z1 in atoms:
        # case A: the leaf contributes the z(1); other atoms hang off it, plus one extreme
        rest = list(atoms)
        rest.remove(sc._Z1)
        for a in rest:
            _realize(b, v, ("prod", (a,)))
        e = b.vertex(rm.NONDEG)
        b.edge(v, e)
        _set_crit(b, v, (len(rest) + 1,))
        b.symmetry[v] = rm.SymAnn(v, 1, (via,))
        return v
    first, rest = atoms[0], atoms[1:]
    _, inner, m = first
    reps = _atoms(inner) or [None]
    orbits = []
    for a in reps:
        orbit = []
        for _ in range(m):
            w = _realize(b, v, ("prod", (a,)) if a is not None else ("prod", ()))
            orbit.append(_edge_to(b, v, w))
        orbits.append(tuple(orbit))
    fixed = [via]
    if rest:
        w = _realize(b, v, ("prod", tuple(rest)))
        fixed.append(_edge_to(b, v, w))
    k = len(reps)
    deg = 1 + m * k + (1 if rest else 0)
    if (deg - 2) % m == 0 and deg > 2:
        crit = (1 + (deg - 2) // m,) * m
    else:
        crit = (deg - 1,)
    _set_crit(b, v, crit)
    b.symmetry[v] = rm.SymAnn(v, m, tuple(fixed), tuple(orbits))
    return v
