"""Decorated Kronrod-Reeb graphs of functions on surfaces.

A model is a multigraph whose vertices are boundary circles, local extremes and
critical leaves.  Edges carry stable integer ids (their index in the JSON edge
list unless given explicitly) so that submodels produced by cutting keep
referring to the same regions; symmetry annotations and ribbon orders are
written in terms of those ids.

Euler characteristic bookkeeping: a neighbourhood of an extreme is a disk
(chi = 1), of a boundary circle a collar (chi = 0), of a critical leaf K a
surface with chi(K) = V - sum(p) where V is the number of critical points on K
and p their branch counts.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

from .errors import AmbiguousSymmetry, ModelError, ParseError, UnsupportedSurface

BOUNDARY = "BoundaryCircle"
NONDEG = "NonDegExtreme"
DEG = "DegExtreme"
LEAF = "CriticalLeaf"
KINDS = (BOUNDARY, NONDEG, DEG, LEAF)
EXTREMES = (NONDEG, DEG)


@dataclass(frozen=True)
class SurfaceSpec:
    kind: str
    genus: int
    boundary: int

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - self.boundary

    @classmethod
    def make(cls, kind: str, genus: Optional[int] = None, boundary: Optional[int] = None,
             orientable: bool = True) -> "SurfaceSpec":
        if not orientable:
            raise UnsupportedSurface("non-orientable surfaces are out of scope")
        named = {"disk": (0, 1), "cylinder": (0, 2), "torus": (1, 0)}
        if kind == "sphere":
            raise UnsupportedSurface("the sphere is out of scope")
        if kind in named:
            g, b = named[kind]
            if (genus is not None and genus != g) or (boundary is not None and boundary != b):
                raise ParseError(f"{kind} has genus {g} and {b} boundary circles")
            return cls(kind, g, b)
        if kind != "generic":
            raise ParseError(f"unknown surface kind {kind!r}")
        if genus is None or boundary is None or genus < 0 or boundary < 0:
            raise ParseError("generic surface needs genus >= 0 and boundary >= 0")
        if (genus, boundary) == (0, 0):
            raise UnsupportedSurface("the sphere is out of scope")
        return cls("generic", genus, boundary)

    @classmethod
    def from_counts(cls, genus: int, boundary: int) -> "SurfaceSpec":
        for k, gb in {"disk": (0, 1), "cylinder": (0, 2), "torus": (1, 0)}.items():
            if (genus, boundary) == gb:
                return cls(k, genus, boundary)
        return cls.make("generic", genus, boundary)


@dataclass(frozen=True)
class Vertex:
    id: str
    kind: str
    m: Optional[int] = None              # symmetry index of a degenerate extreme
    crit_points: tuple = ()              # branch counts p of the points on a critical leaf
    level: Optional[Fraction] = None
    dihedral: bool = False

    @property
    def chi(self) -> int:
        if self.kind in EXTREMES:
            return 1
        if self.kind == BOUNDARY:
            return 0
        return len(self.crit_points) - sum(self.crit_points)


@dataclass(frozen=True)
class Edge:
    id: int
    u: str
    v: str

    def other(self, w: str) -> str:
        return self.v if w == self.u else self.u


@dataclass(frozen=True)
class SymAnn:
    """Symmetry of a critical leaf: Z_m (or Z_m x Z_n on a torus) acting on incident regions."""
    leaf: str
    m: int
    fixed: tuple = ()
    orbits: tuple = ()
    n: Optional[int] = None

    @property
    def order(self) -> int:
        return self.m * (self.n or 1)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    where: str
    message: str
    severity: str = "error"

    def as_dict(self):
        return {"code": self.code, "where": self.where, "message": self.message,
                "severity": self.severity}


@dataclass(frozen=True)
class ReebModel:
    surface: SurfaceSpec
    target: str
    vertices: tuple
    edges: tuple
    ribbon: dict = field(default_factory=dict)
    symmetry: dict = field(default_factory=dict)
    X: tuple = ()
    fibration_degree: Optional[int] = None
    cycle_symmetry: Optional[int] = None
    name: str = ""

    # ---------------------------------------------------------- lookups
    @cached_property
    def vmap(self) -> dict:
        return {v.id: v for v in self.vertices}

    @cached_property
    def emap(self) -> dict:
        return {e.id: e for e in self.edges}

    @cached_property
    def incident(self) -> dict:
        inc = defaultdict(list)
        for e in self.edges:
            inc[e.u].append(e.id)
            if e.v != e.u:
                inc[e.v].append(e.id)
            else:
                inc[e.u].append(e.id)
        return inc

    def degree(self, v: str) -> int:
        return len(self.incident.get(v, ()))

    def incident_edges(self, v: str) -> list:
        """Distinct incident edge ids (a self-loop listed once)."""
        return list(dict.fromkeys(self.incident.get(v, ())))

    def neighbours(self, v: str):
        return [(eid, self.emap[eid].other(v)) for eid in self.incident_edges(v)]

    @property
    def is_fibration(self) -> bool:
        return self.fibration_degree is not None

    @property
    def boundary_vertices(self) -> list:
        return [v.id for v in self.vertices if v.kind == BOUNDARY]

    @property
    def has_critical_data(self) -> bool:
        """Some critical point other than a non-degenerate extreme."""
        return any(v.kind in (LEAF, DEG) for v in self.vertices)

    def vertex_genus(self, v: str) -> Fraction:
        vx = self.vmap[v]
        holes = self.degree(v) + (1 if vx.kind == BOUNDARY else 0)
        return Fraction(2 - vx.chi - holes, 2)

    @property
    def euler(self) -> int:
        if self.is_fibration:
            return 0
        return sum(v.chi for v in self.vertices)

    def with_X(self, X: Iterable[str]) -> "ReebModel":
        return replace(self, X=tuple(X))


# ------------------------------------------------------------------ JSON

def _frac(x):
    if x is None:
        return None
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 9)
    return Fraction(x)


def from_dict(d: dict) -> ReebModel:
    try:
        sd = d.get("surface", {})
        if isinstance(sd, str):
            sd = {"kind": sd}
        surface = SurfaceSpec.make(sd.get("kind", "generic"), sd.get("genus"), sd.get("boundary"),
                                   sd.get("orientable", True))
        verts = []
        for vd in d.get("vertices", []):
            cps = []
            for c in vd.get("crit_points", []) or []:
                cps.append(int(c["p"] if isinstance(c, dict) else c))
            verts.append(Vertex(str(vd["id"]), vd["kind"], vd.get("m"), tuple(cps),
                                _frac(vd.get("level")), bool(vd.get("dihedral", False))))
        edges = []
        for i, ed in enumerate(d.get("edges", [])):
            if isinstance(ed, dict):
                u, v = ed["ends"]
                edges.append(Edge(int(ed.get("id", i)), str(u), str(v)))
            else:
                u, v = ed
                edges.append(Edge(i, str(u), str(v)))
        ribbon = {str(k): tuple(int(x) for x in v) for k, v in (d.get("ribbon") or {}).items()}
        sym = {}
        for sd_ in d.get("symmetry") or []:
            a = SymAnn(str(sd_["leaf"]), int(sd_["m"]), tuple(int(x) for x in sd_.get("fixed", [])),
                       tuple(tuple(int(x) for x in o) for o in sd_.get("orbits", [])),
                       sd_.get("n"))
            sym[a.leaf] = a
        return ReebModel(surface, d.get("target", "R"), tuple(verts), tuple(edges), ribbon, sym,
                         tuple(str(x) for x in d.get("X", [])), d.get("fibration_degree"),
                         d.get("cycle_symmetry"), d.get("name", ""))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"malformed model: {e!r}") from None


def load_model(path) -> ReebModel:
    with open(path) as fh:
        return from_dict(json.load(fh))


def to_dict(model: ReebModel) -> dict:
    def lvl(x):
        if x is None:
            return None
        return int(x) if x.denominator == 1 else str(x)

    out = {"surface": {"kind": model.surface.kind, "genus": model.surface.genus,
                       "boundary": model.surface.boundary},
           "target": model.target, "vertices": [], "edges": [], "X": list(model.X)}
    for v in model.vertices:
        vd = {"id": v.id, "kind": v.kind}
        if v.m is not None:
            vd["m"] = v.m
        if v.crit_points:
            vd["crit_points"] = list(v.crit_points)
        if v.level is not None:
            vd["level"] = lvl(v.level)
        if v.dihedral:
            vd["dihedral"] = True
        out["vertices"].append(vd)
    sequential = all(e.id == i for i, e in enumerate(model.edges))
    for e in model.edges:
        out["edges"].append([e.u, e.v] if sequential else {"id": e.id, "ends": [e.u, e.v]})
    if model.ribbon:
        out["ribbon"] = {k: list(v) for k, v in model.ribbon.items()}
    if model.symmetry:
        out["symmetry"] = []
        for a in model.symmetry.values():
            sd = {"leaf": a.leaf, "m": a.m, "fixed": list(a.fixed),
                  "orbits": [list(o) for o in a.orbits]}
            if a.n is not None:
                sd["n"] = a.n
            out["symmetry"].append(sd)
    if model.fibration_degree is not None:
        out["fibration_degree"] = model.fibration_degree
    if model.cycle_symmetry is not None:
        out["cycle_symmetry"] = model.cycle_symmetry
    if model.name:
        out["name"] = model.name
    return out


# ------------------------------------------------------------ graph helpers

def _components(model: ReebModel, vertices=None, banned_edges=()):
    verts = set(vertices if vertices is not None else model.vmap)
    banned = set(banned_edges)
    seen, comps = set(), []
    for s in [v.id for v in model.vertices if v.id in verts]:
        if s in seen:
            continue
        comp, dq = [], deque([s])
        seen.add(s)
        while dq:
            x = dq.popleft()
            comp.append(x)
            for eid, y in model.neighbours(x):
                if eid in banned or y not in verts or y in seen:
                    continue
                seen.add(y)
                dq.append(y)
        comps.append(comp)
    return comps


def cycle_rank(model: ReebModel) -> int:
    if model.is_fibration:
        return 1
    ncomp = len(_components(model))
    return len(model.edges) - len(model.vertices) + ncomp


def surface_counts(model: ReebModel):
    """(genus, boundary) implied by the graph and the leaf data."""
    g = cycle_rank(model) + sum(model.vertex_genus(v.id) for v in model.vertices)
    return g, len(model.boundary_vertices)


def find_cycle(model: ReebModel):
    """Vertices and edges of the unique cycle, in walk order, or None."""
    deg = {v.id: model.degree(v.id) for v in model.vertices}
    alive = set(deg)
    dq = deque(v for v, d in deg.items() if d <= 1)
    while dq:
        x = dq.popleft()
        if x not in alive:
            continue
        alive.discard(x)
        for eid, y in model.neighbours(x):
            if y in alive:
                deg[y] -= 1
                if deg[y] <= 1:
                    dq.append(y)
    if not alive:
        return None
    start = next(v.id for v in model.vertices if v.id in alive)
    vs, es = [start], []
    prev_e = None
    cur = start
    while True:
        nxt = None
        for eid in model.incident[cur]:
            e = model.emap[eid]
            if eid == prev_e and e.u != e.v:
                continue
            y = e.other(cur)
            if y in alive and eid not in es:
                nxt = (eid, y)
                break
        if nxt is None:
            break
        es.append(nxt[0])
        prev_e, cur = nxt
        if cur == start:
            break
        vs.append(cur)
    return vs, es


def subtree_vertices(model: ReebModel, v: str, via_edge: int) -> list:
    """Vertices reachable from v without crossing via_edge."""
    seen, dq = {v}, deque([v])
    while dq:
        x = dq.popleft()
        for eid, y in model.neighbours(x):
            if eid == via_edge or y in seen:
                continue
            seen.add(y)
            dq.append(y)
    return list(seen)


def is_bridge(model: ReebModel, eid: int) -> bool:
    e = model.emap[eid]
    if e.u == e.v:
        return False
    return e.u not in subtree_vertices(model, e.v, eid)


# ----------------------------------------------------------- canonical codes

LEVEL_MODES = ("strict", "loose", "ignore")


def _label(model: ReebModel, v: Vertex, parent: Optional[Vertex], levels: str) -> str:
    if v.kind == BOUNDARY:
        s = "B"
    elif v.kind == NONDEG:
        s = "E"
    elif v.kind == DEG:
        s = f"D{v.m}" + ("d" if v.dihedral else "")
    else:
        s = "L" + ".".join(map(str, sorted(v.crit_points)))
    if v.id in model.X:
        s += "x"
    if levels == "strict" and v.level is not None:
        s += f"@{v.level}"
    elif levels == "loose" and v.level is not None and parent is not None and parent.level is not None:
        s += "+" if v.level > parent.level else "-"
    return s


def canonical_code(model: ReebModel, via_edge: Optional[int], side: str, levels: str = "strict",
                   banned: Iterable[int] = ()) -> str:
    """AHU code of the part of the graph hanging at ``side`` away from ``via_edge``.

    Raises ValueError if that part contains a cycle."""
    if levels not in LEVEL_MODES:
        raise ValueError(f"levels must be one of {LEVEL_MODES}")
    banned = set(banned)
    if via_edge is not None:
        banned.add(via_edge)
    visited = set()

    def code(v, parent, pe):
        if v in visited:
            raise ValueError("canonical_code called on a region containing a cycle")
        visited.add(v)
        vx = model.vmap[v]
        kids = []
        for eid in model.incident_edges(v):
            if eid == pe or eid in banned:
                continue
            w = model.emap[eid].other(v)
            kids.append(code(w, vx, eid))
        return "(" + _label(model, vx, parent, levels) + "".join(sorted(kids)) + ")"

    parent = None
    if via_edge is not None:
        parent = model.vmap.get(model.emap[via_edge].other(side))
    return code(side, parent, via_edge)


# ----------------------------------------------------------------- validation

def validate(model: ReebModel) -> list:
    diags = []

    def err(code, where, msg, severity="error"):
        diags.append(Diagnostic(code, str(where), msg, severity))

    if model.target not in ("R", "S1"):
        err("BAD_TARGET", "target", f"target must be R or S1, got {model.target!r}")
    if model.is_fibration:
        if model.surface.kind != "torus":
            err("FIBRATION_SURFACE", "surface", "a fibration model must live on the torus")
        if model.vertices or model.edges:
            err("FIBRATION_GRAPH", "graph", "a fibration model has no vertices and no edges")
        if not isinstance(model.fibration_degree, int) or model.fibration_degree < 1:
            err("BAD_FIBRATION_DEGREE", "fibration_degree", "fibration degree must be >= 1")
        if model.X:
            err("X_INVALID", "X", "a closed torus has no boundary to put in X")
        return diags
    if model.surface.kind == "generic" and model.surface.euler >= 0:
        err("SURFACE_KIND", "surface", "surfaces with chi >= 0 must use disk/cylinder/torus")
    if not model.vertices:
        err("EMPTY_GRAPH", "graph", "model has no vertices")
        return diags

    ids = [v.id for v in model.vertices]
    for v in set(i for i in ids if ids.count(i) > 1):
        err("DUPLICATE_VERTEX", v, "vertex id used twice")
    eids = [e.id for e in model.edges]
    for e in set(i for i in eids if eids.count(i) > 1):
        err("DUPLICATE_EDGE", e, "edge id used twice")
    bad_refs = False
    for e in model.edges:
        for w in (e.u, e.v):
            if w not in model.vmap:
                err("UNKNOWN_VERTEX", f"edge {e.id}", f"endpoint {w!r} is not a vertex")
                bad_refs = True
    if bad_refs or diags:
        return diags

    for v in model.vertices:
        if v.kind not in KINDS:
            err("UNKNOWN_KIND", v.id, f"unknown vertex kind {v.kind!r}")
            continue
        deg = model.degree(v.id)
        if v.kind in (BOUNDARY,) + EXTREMES and deg != 1:
            err("BAD_DEGREE", v.id, f"{v.kind} must have degree 1, has {deg}")
        if v.kind == DEG:
            if not isinstance(v.m, int) or v.m < 2:
                err("BAD_SYMMETRY_INDEX", v.id, "DegExtreme needs an integer m >= 2")
            elif v.m % 2:
                err("ODD_SYMMETRY_INDEX", v.id,
                    "the symmetry index of a degenerate extreme is expected to be even", "warning")
        if v.kind == LEAF:
            if not v.crit_points or any(p < 1 for p in v.crit_points):
                err("BAD_CRIT_POINTS", v.id, "a critical leaf needs crit_points with p >= 1")
                continue
            if deg < 1:
                err("BAD_DEGREE", v.id, "critical leaf is isolated")
        g = model.vertex_genus(v.id)
        if g < 0 or g.denominator != 1:
            err("BAD_LEAF_TOPOLOGY", v.id,
                f"chi={v.chi} and {deg} incident regions do not fit an orientable surface")
    vertex_errors = any(d.severity == "error" for d in diags)

    if len(_components(model)) != 1:
        err("DISCONNECTED", "graph", "graph is not connected")
        return diags

    rank = cycle_rank(model)
    if rank > model.surface.genus:
        code = "CYCLE_ON_TREE_SURFACE" if model.surface.genus == 0 else "EXCESS_CYCLES"
        err(code, "graph", f"graph has {rank} independent cycles on a surface of genus "
                           f"{model.surface.genus}")
    if vertex_errors:
        return diags
    genus, bdry = surface_counts(model)
    if rank <= model.surface.genus and (genus, bdry) != (model.surface.genus,
                                                          model.surface.boundary):
        err("SURFACE_MISMATCH", "surface",
            f"graph describes genus {genus} with {bdry} boundary circles, declared "
            f"{model.surface.genus}/{model.surface.boundary}")

    for x in model.X:
        if x not in model.vmap:
            err("X_INVALID", x, "X refers to an unknown vertex")
        elif model.vmap[x].kind not in (BOUNDARY,) + EXTREMES:
            err("X_INVALID", x, "X may only contain boundary circles and extremes")

    if model.target == "R":
        for e in model.edges:
            a, b = model.vmap[e.u].level, model.vmap[e.v].level
            if a is not None and b is not None and a == b:
                err("LEVEL_ORDER", f"edge {e.id}", "adjacent leaves must lie on different levels")
        for v in model.vertices:
            if v.kind != LEAF or v.level is None:
                continue
            nl = [model.vmap[w].level for _, w in model.neighbours(v.id)]
            if any(x is None for x in nl) or not nl:
                continue
            if not (any(x < v.level for x in nl) and any(x > v.level for x in nl)):
                err("LEVEL_EXTREMAL_LEAF", v.id,
                    "a critical leaf must have regions both above and below")

    for v, order in model.ribbon.items():
        if v not in model.vmap:
            err("RIBBON_MISMATCH", v, "ribbon refers to an unknown vertex")
        elif sorted(order) != sorted(model.incident_edges(v)):
            err("RIBBON_MISMATCH", v, "ribbon order must list each incident edge exactly once")

    for leaf, a in model.symmetry.items():
        diags.extend(_check_annotation(model, a))
    if model.cycle_symmetry is not None:
        cyc = find_cycle(model)
        if cyc is None or len(cyc[0]) % model.cycle_symmetry:
            err("BAD_CYCLE_SYMMETRY", "cycle_symmetry",
                "cycle_symmetry must divide the number of leaves on the cycle")
    return diags


def _check_annotation(model: ReebModel, a: SymAnn) -> list:
    out = []

    def err(code, msg):
        out.append(Diagnostic(code, a.leaf, msg))

    v = model.vmap.get(a.leaf)
    if v is None or v.kind != LEAF:
        err("SYM_UNKNOWN_LEAF", "symmetry annotation must refer to a critical leaf")
        return out
    if a.m < 1 or (a.n is not None and a.n < 1):
        err("SYM_BAD_ORDER", "symmetry orders must be >= 1")
        return out
    inc = set(model.incident_edges(a.leaf))
    if len(a.fixed) > 2:
        err("SYM_TOO_MANY_FIXED", "at most two incident regions can be fixed")
    if a.order == 1 and not a.orbits:
        if not set(a.fixed) <= inc:
            err("SYM_BAD_PARTITION", "fixed regions must be incident to the leaf")
        return out
    listed = list(a.fixed) + [e for o in a.orbits for e in o]
    if sorted(listed) != sorted(inc):
        err("SYM_BAD_PARTITION", "fixed regions and orbits must partition the incident edges")
        return out
    for o in a.orbits:
        if len(o) != a.order:
            err("SYM_BAD_ORBIT", f"orbit {list(o)} does not have size {a.order}")
    for o in a.orbits:
        codes = set()
        for eid in o:
            if not is_bridge(model, eid):
                codes = None
                break
            w = model.emap[eid].other(a.leaf)
            try:
                codes.add(canonical_code(model, eid, w))
            except ValueError:
                codes = None
                break
        if codes is not None and len(codes) > 1:
            err("SYM_CODE_MISMATCH", f"regions {list(o)} in one orbit are not isomorphic")
    return out


def check(model: ReebModel) -> ReebModel:
    """Validate and raise ModelError on any error-severity diagnostic."""
    bad = [d for d in validate(model) if d.severity == "error"]
    if bad:
        raise ModelError(bad)
    return model


# ----------------------------------------------------------------- internal edges

def internal_edges(model: ReebModel, X: Optional[Iterable[str]] = None) -> list:
    X = set(model.X if X is None else X)

    def special(w):
        vx = model.vmap[w]
        return vx.kind in (DEG, LEAF) or w in X

    return sorted(e.id for e in model.edges if special(e.u) and special(e.v))


def pi0_delta_rank(model: ReebModel, X: Optional[Iterable[str]] = None) -> int:
    return len(internal_edges(model, X))


# ----------------------------------------------------------------- symmetry

def rooted_fixed_edges(model: ReebModel, leaf: str, via_edge: int) -> list:
    """Edges at ``leaf`` fixed by any symmetry when the leaf is entered through
    via_edge: via_edge itself and the edge leading to another boundary circle."""
    fixed = [via_edge]
    for eid, w in model.neighbours(leaf):
        if eid == via_edge:
            continue
        sub = subtree_vertices(model, w, eid)
        if any(model.vmap[x].kind == BOUNDARY for x in sub):
            fixed.append(eid)
    return fixed


def _rotation_period(word):
    L = len(word)
    for r in range(1, L + 1):
        if L % r == 0 and all(word[i] == word[(i + r) % L] for i in range(L)):
            return r
    return L


def infer_leaf_symmetry(model: ReebModel, leaf: str, via_edge: int,
                        levels: str = "strict") -> SymAnn:
    """Symmetry of a critical leaf inside a disk or cylinder entered through via_edge."""
    fixed = rooted_fixed_edges(model, leaf, via_edge)
    free = [e for e in model.incident_edges(leaf) if e not in fixed]
    if leaf in model.symmetry:
        a = model.symmetry[leaf]
        if a.order == 1:
            return SymAnn(leaf, 1, tuple(fixed), tuple((e,) for e in free))
        if not set(fixed) <= set(a.fixed):
            raise ModelError([Diagnostic(
                "SYM_ROOT_NOT_FIXED", leaf,
                f"annotation fixes {list(a.fixed)} but the regions {fixed} must stay fixed")])
        return a
    trivial = SymAnn(leaf, 1, tuple(fixed), tuple((e,) for e in free))
    if len(free) <= 1:
        return trivial
    codes = {e: canonical_code(model, e, model.emap[e].other(leaf), levels) for e in free}
    if len(set(codes.values())) == len(free):
        return trivial
    vx = model.vmap[leaf]
    if leaf in model.ribbon:
        word_edges = [e for e in model.ribbon[leaf] if e not in fixed]
        word = [codes[e] for e in word_edges]
        r = _rotation_period(word)
        m = len(word) // r
        orbits = tuple(tuple(word_edges[i::r]) for i in range(r))
        return SymAnn(leaf, m, tuple(fixed), orbits if m > 1 else tuple((e,) for e in free))
    if vx.crit_points == (2,) and len(free) == 2:
        return SymAnn(leaf, 2, tuple(fixed), (tuple(free),))
    raise AmbiguousSymmetry(
        f"leaf {leaf}: isomorphic regions but no ribbon order or annotation to decide the symmetry")


def default_root(model: ReebModel) -> Optional[str]:
    for x in model.X:
        if model.vmap[x].kind == BOUNDARY:
            return x
    b = model.boundary_vertices
    return b[0] if b else None


def infer_symmetry(model: ReebModel, root: Optional[str] = None, levels: str = "strict") -> ReebModel:
    """Return the model with a symmetry annotation on every critical leaf of a
    tree, leaves being oriented away from ``root`` (a boundary circle)."""
    root = root or default_root(model)
    if root is None or cycle_rank(model) != 0:
        raise AmbiguousSymmetry("symmetry inference needs a tree with a boundary root")
    sym = dict(model.symmetry)
    seen = {root}
    dq = deque([root])
    while dq:
        x = dq.popleft()
        for eid, y in model.neighbours(x):
            if y in seen:
                continue
            seen.add(y)
            dq.append(y)
            if model.vmap[y].kind == LEAF:
                sym[y] = infer_leaf_symmetry(model, y, eid, levels)
    return replace(model, symmetry=sym)


# ----------------------------------------------------------------- reduction

@dataclass(frozen=True)
class Piece:
    model: ReebModel
    X: tuple
    kind: str
    cut_at: tuple = ()


def _submodel(model: ReebModel, keep: Iterable[str], cuts, X) -> ReebModel:
    """Restrict to ``keep`` and attach a new boundary circle for every (edge id,
    inner vertex, new vertex id) in ``cuts``."""
    keep = set(keep)
    verts = [v for v in model.vertices if v.id in keep]
    edges = [e for e in model.edges if e.u in keep and e.v in keep]
    for eid, inner, new in cuts:
        verts.append(Vertex(new, BOUNDARY))
        edges.append(Edge(eid, inner, new))
    vids = {v.id for v in verts}
    ribbon = {k: v for k, v in model.ribbon.items() if k in vids}
    sym = {k: a for k, a in model.symmetry.items() if k in vids}
    sub = ReebModel(SurfaceSpec("disk", 0, 1), model.target, tuple(verts), tuple(edges), ribbon,
                    sym, tuple(x for x in X if x in vids), name=model.name)
    g, b = surface_counts(sub)
    if g.denominator != 1:
        raise ModelError([Diagnostic("BAD_LEAF_TOPOLOGY", "submodel", "non-integral genus")])
    return replace(sub, surface=SurfaceSpec.from_counts(int(g), b))


def _is_disk_region(model: ReebModel, v: str, eid: int) -> bool:
    w = model.emap[eid].other(v)
    if w == v:
        return False
    sub = subtree_vertices(model, w, eid)
    if v in sub:
        return False
    if any(model.vmap[x].kind == BOUNDARY for x in sub):
        return False
    n_edges = sum(1 for e in model.edges if e.u in sub and e.v in sub)
    if n_edges != len(sub) - 1:
        return False
    return all(model.vertex_genus(x) == 0 for x in sub)


def canonical_chi(model: ReebModel, v: str) -> int:
    """chi of the canonical neighbourhood: the leaf plus its adjacent disk regions."""
    vx = model.vmap[v]
    return vx.chi + sum(1 for eid in model.incident_edges(v) if _is_disk_region(model, v, eid))


def reduce(model: ReebModel, X: Optional[Iterable[str]] = None) -> list:
    X = tuple(model.X if X is None else X)
    kind = model.surface.kind
    if kind in ("disk", "torus"):
        return [Piece(model, X, kind)]
    if kind == "cylinder":
        return _split_cylinder(model, X)
    return _cut_negative(model, X)


def _split_cylinder(model: ReebModel, X) -> list:
    b1, b2 = model.boundary_vertices
    # path from b1 to b2
    prev = {b1: None}
    dq = deque([b1])
    while dq:
        x = dq.popleft()
        for eid, y in model.neighbours(x):
            if y not in prev:
                prev[y] = (x, eid)
                dq.append(y)
    path, pedges = [b2], []
    while prev[path[-1]] is not None:
        x, eid = prev[path[-1]]
        pedges.append(eid)
        path.append(x)
    path.reverse()
    pedges.reverse()
    leaves = path[1:-1]
    if len(leaves) <= 1:
        return [Piece(model, X, "cylinder")]
    cut_edges = pedges[1:-1]  # between consecutive path leaves
    pieces = []
    for i, leaf in enumerate(leaves):
        banned = set(cut_edges)
        # region of this leaf: everything reachable without crossing a cut edge
        seen, dq = {leaf}, deque([leaf])
        while dq:
            x = dq.popleft()
            for eid, y in model.neighbours(x):
                if eid in banned or y in seen:
                    continue
                seen.add(y)
                dq.append(y)
        cuts = []
        newX = [x for x in X if x in seen]
        if i > 0:
            nid = f"{leaf}/e{cut_edges[i - 1]}"
            cuts.append((cut_edges[i - 1], leaf, nid))
            newX.insert(0, nid)
        if i < len(leaves) - 1:
            nid = f"{leaf}/e{cut_edges[i]}"
            cuts.append((cut_edges[i], leaf, nid))
            newX.append(nid)
        sub = _submodel(model, seen, cuts, newX)
        pieces.append(Piece(sub, sub.X, sub.surface.kind, (leaf,)))
    return pieces


def _cut_negative(model: ReebModel, X) -> list:
    from .errors import InternalInvariantError

    cut = [v.id for v in model.vertices
           if v.kind == LEAF and canonical_chi(model, v.id) < 0]
    if not cut:
        raise InternalInvariantError("negative Euler characteristic but no negative leaf")
    absorbed = set(cut)
    for c in cut:
        for eid in model.incident_edges(c):
            if _is_disk_region(model, c, eid):
                absorbed.update(subtree_vertices(model, model.emap[eid].other(c), eid))
    rest = [v.id for v in model.vertices if v.id not in absorbed]
    pieces = []
    for comp in _components(model, rest):
        comp_set = set(comp)
        cuts = []
        for e in model.edges:
            for inner, outer in ((e.u, e.v), (e.v, e.u)):
                if inner in comp_set and outer in cut:
                    cuts.append((e.id, inner, f"{outer}/e{e.id}"))
        newX = [x for x in X if x in comp_set] + [c[2] for c in cuts]
        sub = _submodel(model, comp_set, cuts, newX)
        pieces.append(Piece(sub, sub.X, sub.surface.kind, tuple(sorted({c[2].split('/')[0]
                                                                       for c in cuts}))))
    # collars between two cut leaves
    for e in model.edges:
        if e.u in cut and e.v in cut:
            a, b = f"{e.u}/e{e.id}", f"{e.v}/e{e.id}'"
            sub = ReebModel(SurfaceSpec("cylinder", 0, 2), model.target,
                            (Vertex(a, BOUNDARY), Vertex(b, BOUNDARY)), (Edge(e.id, a, b),),
                            X=(a, b), name=model.name)
            pieces.append(Piece(sub, (a, b), "cylinder", (e.u, e.v)))
    return pieces


# ----------------------------------------------------------------- enhanced graph

@dataclass(frozen=True)
class EnhancedGraph:
    model: ReebModel
    pendants: tuple  # (vertex id, pendant id)

    @property
    def edge_count(self) -> int:
        return len(self.model.edges) + len(self.pendants)


def framing_count(v: Vertex) -> int:
    return 2 * v.m if v.dihedral else v.m


def enhanced_graph(model: ReebModel) -> EnhancedGraph:
    pend = []
    for v in model.vertices:
        if v.kind == DEG:
            pend.extend((v.id, f"{v.id}#f{i}") for i in range(framing_count(v)))
    return EnhancedGraph(model, tuple(pend))


def to_dot(model: ReebModel, enhanced: bool = False) -> str:
    shapes = {BOUNDARY: "doublecircle", NONDEG: "circle", DEG: "box", LEAF: "diamond"}
    lines = [f'graph "{model.name or "reeb"}" {{']
    for v in model.vertices:
        label = v.id
        if v.kind == DEG:
            label += f"\\nm={v.m}"
        if v.kind == LEAF:
            label += "\\np=" + ",".join(map(str, v.crit_points))
        if v.level is not None:
            label += f"\\n@{v.level}"
        style = ', style=bold' if v.id in model.X else ""
        lines.append(f'  "{v.id}" [shape={shapes.get(v.kind, "circle")}, label="{label}"{style}];')
    for e in model.edges:
        lines.append(f'  "{e.u}" -- "{e.v}" [label="{e.id}"];')
    if enhanced:
        for v, p in enhanced_graph(model).pendants:
            lines.append(f'  "{p}" [shape=point];')
            lines.append(f'  "{v}" -- "{p}" [style=dashed];')
    if model.is_fibration:
        lines.append(f'  fibration [shape=plaintext, label="fibration degree '
                     f'{model.fibration_degree}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
