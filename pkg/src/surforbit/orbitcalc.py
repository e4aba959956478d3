"""Bieberbach sequences pi0 Delta'(f,X) -> pi0 S'(f,X) ->> G'(f,X) from Reeb models.

Disks and cylinders are handled by a recursion that starts at a boundary circle
in X and walks into the graph.  At each critical leaf the incident regions are
split into fixed ones (the region we came from, and the one leading to the far
boundary of a cylinder) and orbits of size m of the remaining ones:

    m = 1:  seq = wr(product of all children, 1)
    m > 1:  seq = [child(far side) x] wr(product of one child per orbit, m)

Surfaces with negative Euler characteristic are cut along their negative
critical leaves into disks and cylinders.  On the torus the graph either has a
unique cycle (cycle case) or a distinguished leaf whose complement is a union
of disks (tree case).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import groupexpr as gx
from . import reebmodel as rm
from . import seqcalc as sc
from .errors import (InternalInvariantError, ModelError, NotExceptional, UnannotatedTorusSymmetry,
                     UnsupportedAdaptedSet, UnsupportedSurface)


@dataclass(frozen=True)
class HomotopyDescriptor:
    stabilizer_id: str             # "contractible" | "circle"
    diffid_factor: str             # "point" | "circle" | "T2" | "SO3"
    orbit_aspherical: bool
    weak_equiv_torus_rank: Optional[int] = None

    def as_dict(self):
        return {"stabilizer_id": self.stabilizer_id, "diffid_factor": self.diffid_factor,
                "orbit_aspherical": self.orbit_aspherical,
                "weak_equiv_torus_rank": self.weak_equiv_torus_rank}


@dataclass(frozen=True)
class OrbitResult:
    seq: sc.SeqExpr
    pi1_orbit: gx.GroupExpr
    betti1: int
    homotopy: HomotopyDescriptor
    provenance: tuple = ()
    orbit_seq: Optional[sc.SeqExpr] = None      # torus: the wreath sequence before the Garside quotient
    pi0_full_stab: Optional[gx.GroupExpr] = None  # pi0 S(f, X) where it is determined

    def as_dict(self, trace: bool = True) -> dict:
        out = {"seq": sc.to_json(self.seq), "seq_text": sc.to_text(self.seq),
               "pi1": gx.to_text(self.pi1_orbit), "betti1": self.betti1,
               "homotopy": self.homotopy.as_dict()}
        if self.orbit_seq is not None:
            out["orbit_seq"] = sc.to_text(self.orbit_seq)
        if self.pi0_full_stab is not None:
            out["pi0_full_stab"] = gx.to_text(self.pi0_full_stab)
        if trace:
            out["trace"] = list(self.provenance)
        return out


@dataclass
class _Trace:
    lines: list = field(default_factory=list)

    def add(self, depth, msg):
        self.lines.append("  " * depth + msg)


# ------------------------------------------------------------- disk / cylinder

def _child_seq(model: rm.ReebModel, v: str, via: int, tr: _Trace, depth: int) -> sc.SeqExpr:
    vx = model.vmap[v]
    if vx.kind == rm.NONDEG:
        tr.add(depth, f"{v}: non-degenerate extreme -> triv")
        return sc.TRIV
    if vx.kind == rm.DEG:
        tr.add(depth, f"{v}: degenerate extreme of symmetry index {vx.m} -> z({vx.m})")
        return sc.z(vx.m)
    if vx.kind == rm.BOUNDARY:
        tr.add(depth, f"{v}: far boundary circle -> triv")
        return sc.TRIV
    a = rm.infer_leaf_symmetry(model, v, via)
    far = [e for e in a.fixed if e != via]
    if a.m == 1:
        tr.add(depth, f"{v}: all regions invariant (case A) -> wr(prod(children), 1)")
        kids = [_child_seq(model, model.emap[e].other(v), e, tr, depth + 1)
                for e in model.incident_edges(v) if e != via]
        return sc.wr(sc.product(*kids), 1)
    tr.add(depth, f"{v}: Z_{a.m} acting with {len(a.orbits)} orbit(s), "
                  f"{len(a.fixed)} fixed region(s) (case B)")
    reps = [_child_seq(model, model.emap[o[0]].other(v), o[0], tr, depth + 1) for o in a.orbits]
    a_seq = sc.wr(sc.product(*reps), a.m)
    if far:
        x1 = _child_seq(model, model.emap[far[0]].other(v), far[0], tr, depth + 1)
        return sc.product(x1, a_seq)
    return a_seq


def _root_for(model: rm.ReebModel, X) -> str:
    for x in X:
        if model.vmap[x].kind == rm.BOUNDARY:
            return x
    raise UnsupportedAdaptedSet("X must contain a boundary circle")


def compute_disk_cylinder(model: rm.ReebModel, X: Optional[Iterable[str]] = None,
                          trace: Optional[_Trace] = None) -> sc.SeqExpr:
    X = tuple(model.X if X is None else X)
    tr = trace if trace is not None else _Trace()
    if model.surface.kind not in ("disk", "cylinder"):
        raise UnsupportedSurface("compute_disk_cylinder needs a disk or a cylinder")
    _check_X(model, X)
    if not X:
        raise UnsupportedAdaptedSet("the recursion starts from a boundary circle in X")
    root = _root_for(model, X)
    (eid, w), = model.neighbours(root)
    tr.add(0, f"{model.surface.kind} recursion from boundary {root}")
    return _child_seq(model, w, eid, tr, 1)


def _check_X(model: rm.ReebModel, X):
    for x in X:
        if x not in model.vmap:
            raise UnsupportedAdaptedSet(f"X refers to unknown vertex {x!r}")
        if model.vmap[x].kind != rm.BOUNDARY:
            raise UnsupportedAdaptedSet("adapted sets with point components are not supported")


def forget_boundary(result, model: rm.ReebModel) -> sc.SeqExpr:
    """Pass from X = boundary to X = empty: divide by the diagonal Garside element."""
    seq = result.seq if isinstance(result, OrbitResult) else result
    if model.euler < 0:
        return seq
    factors = _flatten(seq)
    wrs, others = [], []
    for f in factors:
        b = f.build
        if isinstance(b, sc.BWr):
            wrs.append(f)
        elif isinstance(b, sc.BZ) and b.m > 0:
            wrs.append(sc.wr(sc.TRIV, b.m))
        elif isinstance(b, sc.BZ2):
            wrs.extend([sc.wr(sc.TRIV, b.m), sc.wr(sc.TRIV, b.n)])
        else:
            others.append(f)
    if not wrs:
        return seq
    d = sc.diag_garside(wrs)
    return sc.product(*others, d) if others else d


def _flatten(seq):
    if isinstance(seq.build, sc.BProd):
        out = []
        for p in seq.build.parts:
            out.extend(_flatten(p))
        return out
    if isinstance(seq.build, sc.BTriv):
        return []
    return [seq]


# ---------------------------------------------------------------- negative chi

def compute_negchi(model: rm.ReebModel, X: Optional[Iterable[str]] = None,
                   trace: Optional[_Trace] = None) -> sc.SeqExpr:
    X = tuple(model.X if X is None else X)
    tr = trace if trace is not None else _Trace()
    if model.euler >= 0:
        raise UnsupportedSurface("compute_negchi needs chi < 0")
    _check_X(model, X)
    pieces = rm.reduce(model, X)
    tr.add(0, f"chi={model.euler}: cut along {sorted({c for p in pieces for c in p.cut_at})} "
              f"into {len(pieces)} piece(s)")
    seqs = []
    for p in pieces:
        if p.kind not in ("disk", "cylinder"):
            raise InternalInvariantError(f"piece of kind {p.kind} after cutting")
        seqs.append(compute_disk_cylinder(p.model, p.X, tr))
    return sc.product(*seqs)


# ----------------------------------------------------------------- torus

def _torus_cycle(model: rm.ReebModel, tr: _Trace):
    vs, es = rm.find_cycle(model)
    L = len(vs)
    words = []
    on_cycle = set(es)
    for v in vs:
        hang = []
        for eid, w in model.neighbours(v):
            if eid in on_cycle:
                continue
            hang.append(rm.canonical_code(model, eid, w))
        vx = model.vmap[v]
        words.append(rm._label(model, vx, None, "strict") + "".join(sorted(hang)))
    if model.cycle_symmetry is not None:
        m = model.cycle_symmetry
        r = L // m
        if any(words[i] != words[(i + r) % L] for i in range(L)):
            raise ModelError([rm.Diagnostic("BAD_CYCLE_SYMMETRY", "cycle_symmetry",
                                            "cycle is not invariant under the stated rotation")])
    else:
        r = rm._rotation_period(words)
        m = L // r
    tr.add(0, f"torus, cycle case: {L} leaf(s) on the cycle, rotation of order {m}")
    # Q: one period of the cycle with its hanging trees; es[i] joins vs[i] and vs[i+1]
    seen = set(vs[:r])
    stack = list(vs[:r])
    while stack:
        x = stack.pop()
        for eid, y in model.neighbours(x):
            if eid in on_cycle or y in seen:
                continue
            seen.add(y)
            stack.append(y)
    max_id = max(e.id for e in model.edges)
    b_in, b_out = f"{vs[0]}/in", f"{vs[r - 1]}/out"
    verts = [v for v in model.vertices if v.id in seen]
    verts += [rm.Vertex(b_in, rm.BOUNDARY), rm.Vertex(b_out, rm.BOUNDARY)]
    edges = [e for e in model.edges if e.u in seen and e.v in seen and e.id not in on_cycle]
    edges += [model.emap[es[i]] for i in range(r - 1)]
    edges += [rm.Edge(max_id + 1, b_in, vs[0]), rm.Edge(max_id + 2, vs[r - 1], b_out)]
    vids = {v.id for v in verts}
    Q = rm.ReebModel(rm.SurfaceSpec("cylinder", 0, 2), model.target, tuple(verts), tuple(edges),
                     {k: v for k, v in model.ribbon.items() if k in vids},
                     {k: a for k, a in model.symmetry.items() if k in vids},
                     (b_in, b_out), name=model.name)
    bad = [d for d in rm.validate(Q) if d.severity == "error"]
    if bad:
        raise InternalInvariantError(f"cycle piece is not a cylinder: {bad}")
    seq_q = compute_disk_cylinder(Q, Q.X, tr)
    orbit_seq = sc.wr(seq_q, m)
    seq = sc.garside_quotient(sc.wr(forget_boundary(seq_q, Q), m))
    return seq, orbit_seq, orbit_seq.middle


def _torus_tree(model: rm.ReebModel, tr: _Trace):
    special = [v.id for v in model.vertices
               if v.kind == rm.LEAF and model.vertex_genus(v.id) == 1]
    if len(special) != 1:
        raise InternalInvariantError("tree on a torus needs exactly one leaf of genus 1")
    leaf = special[0]
    inc = model.incident_edges(leaf)
    if leaf in model.symmetry:
        a = model.symmetry[leaf]
        m, n, orbits = a.m, a.n or 1, a.orbits or tuple((e,) for e in inc)
        if a.order == 1:
            orbits = tuple((e,) for e in inc)
    else:
        codes = [rm.canonical_code(model, e, model.emap[e].other(leaf)) for e in inc]
        if len(set(codes)) != len(codes):
            raise UnannotatedTorusSymmetry(
                f"leaf {leaf}: isomorphic disks around the special leaf need an explicit "
                f"(m, n) annotation")
        m, n, orbits = 1, 1, tuple((e,) for e in inc)
    tr.add(0, f"torus, tree case: special leaf {leaf}, Z_{m} x Z_{n} with {len(orbits)} orbit(s)")
    reps = [_child_seq(model, model.emap[o[0]].other(leaf), o[0], tr, 1) for o in orbits]
    orbit_seq = sc.wr2(sc.product(*reps), m, n)
    return sc.garside_quotient(orbit_seq), orbit_seq, orbit_seq.middle


def compute_torus(model: rm.ReebModel) -> OrbitResult:
    if model.surface.kind != "torus":
        raise UnsupportedSurface("compute_torus needs a torus")
    if model.is_fibration:
        return exceptional_lookup(model)
    tr = _Trace()
    if rm.cycle_rank(model) == 1:
        seq, oseq, pi1 = _torus_cycle(model, tr)
    else:
        seq, oseq, pi1 = _torus_tree(model, tr)
    return _assemble(model, (), seq, pi1, tr, orbit_seq=oseq)


# ----------------------------------------------------------------- exceptional cases

def exceptional_type(model: rm.ReebModel) -> Optional[str]:
    if model.is_fibration:
        return "D"
    kinds = sorted(v.kind for v in model.vertices)
    if model.surface.kind == "disk" and kinds == sorted([rm.BOUNDARY, rm.NONDEG]):
        return "B"
    if model.surface.kind == "cylinder" and kinds == [rm.BOUNDARY, rm.BOUNDARY]:
        return "C"
    return None


def exceptional_lookup(model: rm.ReebModel) -> OrbitResult:
    t = exceptional_type(model)
    if t is None:
        raise NotExceptional("model is not one of the exceptional types")
    if t == "D":
        m = model.fibration_degree
        seq = sc.natural(sc.z(m))[1]
        h = HomotopyDescriptor("circle", "T2", True, None)
        return OrbitResult(seq, gx.ZZ, 1, h,
                           (f"torus fibration of degree {m}: stabilizer S1 x Z_{m}, orbit ~ S1",),
                           pi0_full_stab=gx.Zmod(m) if m > 1 else gx.ONE)
    name = {"B": "disk with one non-degenerate extreme", "C": "cylinder without critical points"}[t]
    h = HomotopyDescriptor("circle", "circle", True, None)
    return OrbitResult(sc.TRIV, gx.ONE, 0, h, (f"{name}, X empty: stabilizer ~ S1, orbit ~ point",),
                       pi0_full_stab=gx.ONE)


# ----------------------------------------------------------------- homotopy

def stabilizer_homotopy(model: rm.ReebModel, X: Optional[Iterable[str]] = None) -> str:
    X = tuple(model.X if X is None else X)
    one_dim = any(model.vmap[x].kind == rm.BOUNDARY for x in X if x in model.vmap)
    if model.has_critical_data or one_dim or len(X) > model.euler:
        return "contractible"
    return "circle"


def diffid_factor(model: rm.ReebModel, X) -> str:
    if X:
        return "point"
    return {"torus": "T2", "disk": "circle", "cylinder": "circle"}.get(model.surface.kind, "point")


def homotopy_descriptor(model: rm.ReebModel, X, seq: sc.SeqExpr) -> HomotopyDescriptor:
    rank = gx.beta1(seq.kernel) if gx.order(seq.quotient) == 1 else None
    return HomotopyDescriptor(stabilizer_homotopy(model, X), diffid_factor(model, X), True, rank)


# ----------------------------------------------------------------- dispatcher

def _assemble(model, X, seq, pi1, tr, orbit_seq=None, full=None):
    pi1 = gx.normalize(pi1)
    return OrbitResult(seq, pi1, gx.beta1(pi1), homotopy_descriptor(model, X, seq),
                       tuple(tr.lines), orbit_seq, full)


def compute(model: rm.ReebModel, X: Optional[Iterable[str]] = None) -> OrbitResult:
    X = tuple(model.X if X is None else X)
    rm.check(model.with_X(X))
    if model.surface.kind == "torus":
        if X:
            raise UnsupportedAdaptedSet("the torus has no boundary")
        return compute_torus(model)
    _check_X(model, X)
    tr = _Trace()
    if model.euler < 0:
        seq = compute_negchi(model, X, tr)
        return _assemble(model, X, seq, seq.middle, tr)
    if not X:
        if exceptional_type(model):
            return exceptional_lookup(model)
        bX = tuple(model.boundary_vertices)
        full = compute_disk_cylinder(model, bX, tr)
        seq = forget_boundary(full, model)
        tr.add(0, "X empty: divide by the diagonal Garside element")
        return _assemble(model, X, seq, full.middle, tr)
    seq = compute_disk_cylinder(model, X, tr)
    full = seq.middle
    if model.surface.kind == "cylinder" and len(X) == 2:
        full = gx.normalize(gx.Prod(seq.middle, gx.ZZ))
    return _assemble(model, X, seq, seq.middle, tr, full=full)
