"""Short exact sequences A -> B ->> C of group expressions, with build history.

Sequences are built from the special sequences

    triv = (1 -> 1 ->> 1)          z(1) = (Z -> Z ->> 1)
    z(m) = (mZ -> Z ->> Z_m)       z(m,n) = z(m) x z(n)

by products, wreath constructions wr(q, m) = (A^m x mZ -> B wr_m Z ->> C wr Z_m)
and wr2(q, m, n), Garside quotients and diagonal Garside quotients.  The build
record is kept because family membership and the isomorphisms used by the
orbit engine are statements about builds, not about bare triples.

A build can be written as a small script, e.g. ``wr(prod(z(2), triv), 3)``;
the same syntax is used inside the text form ``A -> B ->> C [build: ...]``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Optional, Union

from . import groupexpr as gx
from .errors import BuildError, ParseError


# --------------------------------------------------------------- build records

@dataclass(frozen=True)
class BTriv:
    pass


@dataclass(frozen=True)
class BZ:
    m: int  # 0 encodes the trivial sequence


@dataclass(frozen=True)
class BZ2:
    m: int
    n: int


@dataclass(frozen=True)
class BProd:
    parts: tuple


@dataclass(frozen=True)
class BWr:
    inner: "SeqExpr"
    m: int


@dataclass(frozen=True)
class BWr2:
    inner: "SeqExpr"
    m: int
    n: int


@dataclass(frozen=True)
class BGarside:
    of: "SeqExpr"


@dataclass(frozen=True)
class BDiag:
    of: tuple


@dataclass(frozen=True)
class BTop:
    of: "SeqExpr"


@dataclass(frozen=True)
class BBottom:
    of: "SeqExpr"


Build = Union[BTriv, BZ, BZ2, BProd, BWr, BWr2, BGarside, BDiag, BTop, BBottom]


@dataclass(frozen=True)
class SeqExpr:
    kernel: gx.GroupExpr
    middle: gx.GroupExpr
    quotient: gx.GroupExpr
    build: Build

    @property
    def triple(self):
        return (self.kernel, self.middle, self.quotient)

    @property
    def index(self):
        """Index of the kernel in the middle group (order of the quotient)."""
        return gx.order(self.quotient)

    def __str__(self):
        return to_text(self)


def _mk(a, b, c, build):
    return SeqExpr(gx.normalize(a), gx.normalize(b), gx.normalize(c), build)


class SeqFamily(str, Enum):
    ZZI = "ZZI"
    ssZBtPt = "ssZBtPt"
    ssZBP = "ssZBP"
    gssZBP = "gssZBP"


# ---------------------------------------------------------------- constructors

TRIV = SeqExpr(gx.ONE, gx.ONE, gx.ONE, BTriv())


def special(kind: str, m: Optional[int] = None, n: Optional[int] = None) -> SeqExpr:
    """kind is one of 'triv', 'z1', 'z' (with m) or 'z2' (with m, n)."""
    if kind == "triv":
        return TRIV
    if kind == "z1":
        return z(1)
    if kind == "z":
        return z(m)
    if kind == "z2":
        return z2(m, n)
    raise BuildError(f"unknown special sequence {kind!r}")


def z(m: int) -> SeqExpr:
    if m == 0:
        return TRIV
    if m < 0:
        raise BuildError("z(m) needs m >= 0")
    return _mk(gx.ZZ, gx.ZZ, gx.Zmod(m), BZ(m))


def z2(m: int, n: int) -> SeqExpr:
    if m < 1 or n < 1:
        raise BuildError("z(m,n) needs m, n >= 1")
    return _mk(gx.Prod(gx.ZZ, gx.ZZ), gx.Prod(gx.ZZ, gx.ZZ), gx.Prod(gx.Zmod(m), gx.Zmod(n)),
               BZ2(m, n))


def product(*seqs) -> SeqExpr:
    if len(seqs) == 1 and isinstance(seqs[0], (list, tuple)):
        seqs = tuple(seqs[0])
    if not seqs:
        return TRIV
    if len(seqs) == 1:
        return seqs[0]
    return _mk(gx.Prod(*(s.kernel for s in seqs)), gx.Prod(*(s.middle for s in seqs)),
               gx.Prod(*(s.quotient for s in seqs)), BProd(tuple(seqs)))


def wr(s: SeqExpr, m: int) -> SeqExpr:
    if m < 1:
        raise BuildError("wr(q, m) needs m >= 1")
    return _mk(gx.Prod(*([s.kernel] * m), gx.ZZ), gx.WrZ(s.middle, m), gx.WrZmod(s.quotient, m),
               BWr(s, m))


def wr2(s: SeqExpr, m: int, n: int) -> SeqExpr:
    if m < 1 or n < 1:
        raise BuildError("wr2(q, m, n) needs m, n >= 1")
    return _mk(gx.Prod(*([s.kernel] * (m * n)), gx.ZZ, gx.ZZ), gx.WrZ2(s.middle, m, n),
               gx.WrZmod2(s.quotient, m, n), BWr2(s, m, n))


def garside_quotient(w: SeqExpr) -> SeqExpr:
    """Bottom row of the Garside diagram: divide kernel and middle by the Garside subgroup."""
    b = w.build
    if isinstance(b, BWr):
        s, m = b.inner, b.m
        return _mk(gx.Prod(*([s.kernel] * m)), gx.WrZmod(s.middle, m), gx.WrZmod(s.quotient, m),
                   BGarside(w))
    if isinstance(b, BWr2):
        s, m, n = b.inner, b.m, b.n
        return _mk(gx.Prod(*([s.kernel] * (m * n))), gx.WrZmod2(s.middle, m, n),
                   gx.WrZmod2(s.quotient, m, n), BGarside(w))
    raise BuildError("garside_quotient needs a sequence built by wr or wr2")


def diag_garside(ws) -> SeqExpr:
    """Divide a product of wr-sequences by the diagonal copy of Z spanned by
    (garside_1, ..., garside_k)."""
    ws = tuple(ws)
    if not ws:
        raise BuildError("diag_garside needs at least one sequence")
    for w in ws:
        if not isinstance(w.build, BWr):
            raise BuildError("diag_garside needs sequences built by wr")
    if len(ws) == 1:
        return garside_quotient(ws[0])
    kernel = []
    for w in ws:
        kernel.extend([w.build.inner.kernel] * w.build.m)
    kernel.extend([gx.ZZ] * (len(ws) - 1))
    middle = gx.DiagQuot(tuple((w.build.inner.middle, w.build.m) for w in ws))
    quotient = gx.Prod(*(w.quotient for w in ws))
    return _mk(gx.Prod(*kernel), middle, quotient, BDiag(ws))


def natural(u: SeqExpr):
    """(A = A ->> 1, 1 -> C = C), the top and bottom rows of the diagram for u/u."""
    top = SeqExpr(u.kernel, u.kernel, gx.ONE, BTop(u))
    bottom = SeqExpr(gx.ONE, u.quotient, u.quotient, BBottom(u))
    return top, bottom


@dataclass(frozen=True)
class SplitDiagram:
    """3x3 diagram for k -> k x l ->> l; rows are k, k x l, l."""
    top: SeqExpr
    middle: SeqExpr
    bottom: SeqExpr

    @property
    def columns(self):
        cols = []
        for i in range(3):
            a = self.top.triple[i]
            b = self.middle.triple[i]
            c = self.bottom.triple[i]
            cols.append((a, b, c))
        return cols


def split(s: SeqExpr, t: SeqExpr) -> SplitDiagram:
    return SplitDiagram(s, product(s, t), t)


# ------------------------------------------------------------ canonical builds

_CTRIV = ("prod", ())
_Z1 = ("wr", _CTRIV, 1)


def _atoms(c):
    return list(c[1]) if c[0] == "prod" else [c]


def _prod(atoms):
    return ("prod", tuple(sorted(atoms, key=repr)))


def canonical(s: SeqExpr):
    """Canonical build modulo the identities q x triv = q, z(m) = wr(triv, m),
    z(m,n) = z(m) x z(n) = wr2(triv, m, n), wr(q, 1) = q x z(1),
    wr2(q, m, 1) = wr(q, m) x z(1),
    associativity and commutativity of products."""
    b = s.build
    if isinstance(b, BTriv) or (isinstance(b, BZ) and b.m == 0):
        return _CTRIV
    if isinstance(b, BZ):
        return _prod([("wr", _CTRIV, b.m)] if b.m > 1 else [_Z1])
    if isinstance(b, BZ2):
        return _prod([("wr", _CTRIV, k) for k in (b.m, b.n)])
    if isinstance(b, BProd):
        atoms = []
        for p in b.parts:
            atoms.extend(_atoms(canonical(p)))
        return _prod(atoms)
    if isinstance(b, BWr):
        inner = canonical(b.inner)
        if b.m == 1:
            return _prod(_atoms(inner) + [_Z1])
        return _prod([("wr", inner, b.m)])
    if isinstance(b, BWr2):
        inner = canonical(b.inner)
        m, n = sorted((b.m, b.n))
        if m == 1 and n == 1:
            return _prod(_atoms(inner) + [_Z1, _Z1])
        if m == 1:
            return _prod([("wr", inner, n), _Z1])
        if inner == _CTRIV:
            return _prod([("wr", _CTRIV, m), ("wr", _CTRIV, n)])
        return _prod([("wr2", inner, m, n)])
    if isinstance(b, BGarside):
        return _prod([("garside", canonical(b.of))])
    if isinstance(b, BDiag):
        return _prod([("diag", tuple(sorted((canonical(w) for w in b.of), key=repr)))])
    if isinstance(b, BTop):
        return _prod([("top", canonical(b.of))])
    if isinstance(b, BBottom):
        return _prod([("bottom", canonical(b.of))])
    raise TypeError(b)


def seq_equiv(s: SeqExpr, t: SeqExpr) -> bool:
    return canonical(s) == canonical(t)


def build_depth(s: SeqExpr) -> int:
    """Depth of the canonical build: products and wreaths each add one level."""
    def depth(c):
        if c[0] == "prod":
            atoms = c[1]
            if not atoms:
                return 0
            ds = sorted(depth(a) for a in atoms)
            # a k-fold product is a tree of binary products; merge shallowest first
            while len(ds) > 1:
                a, b = ds.pop(0), ds.pop(0)
                ds.append(max(a, b) + 1)
                ds.sort()
            return ds[0]
        if c[0] in ("wr", "wr2"):
            return depth(c[1]) + 1
        return 1 + max([depth(x) for x in c[1:] if isinstance(x, tuple) and x and x[0] == "prod"]
                       or [0])
    return depth(canonical(s))


def from_canonical(c) -> SeqExpr:
    """A sequence with the given canonical build (products and wreaths only)."""
    if c[0] == "prod":
        parts = [from_canonical(a) for a in c[1]]
        if not parts:
            return TRIV
        return parts[0] if len(parts) == 1 else product(*parts)
    if c[0] == "wr":
        return wr(from_canonical(c[1]), c[2])
    if c[0] == "wr2":
        return wr2(from_canonical(c[1]), c[2], c[3])
    raise BuildError(f"cannot rebuild {c[0]} from a canonical form")


# ---------------------------------------------------------------- families

def _closure_member(c, allowed_m):
    for a in _atoms(c):
        if a[0] != "wr":
            return False
        if allowed_m is not None and a[2] not in allowed_m:
            return False
        if not _closure_member(a[1], allowed_m):
            return False
    return True


def is_nearly_crystallographic(s: SeqExpr) -> bool:
    return gx.in_family(s.kernel, "ccZ") and gx.is_finite(s.quotient)


def is_nearly_bieberbach(s: SeqExpr) -> bool:
    return is_nearly_crystallographic(s) and gx.is_torsion_free(s.middle)


def is_crystallographic(s: SeqExpr) -> Optional[bool]:
    """Decided only when the middle group is free abelian: then the kernel is
    maximal abelian iff it is everything.  Otherwise None (undecided)."""
    if not is_nearly_crystallographic(s):
        return False
    if gx.in_family(s.middle, "ccZ"):
        return gx.order(s.quotient) == 1
    return None


def seq_in_family(s: SeqExpr, f) -> bool:
    f = SeqFamily(f)
    if f is SeqFamily.gssZBP:
        return (is_nearly_crystallographic(s) and gx.in_family(s.middle, "ccB")
                and gx.in_family(s.quotient, "ccP"))
    c = canonical(s)
    if f is SeqFamily.ZZI:
        return all(a == _Z1 for a in _atoms(c))
    if f is SeqFamily.ssZBtPt:
        return _closure_member(c, {1, 2})
    return _closure_member(c, None)


def enumerate_seq_family(f, max_depth: int, max_param: int = 2):
    """Canonical builds of ZZI / ssZBtPt / ssZBP up to the given build depth."""
    f = SeqFamily(f)
    if f is SeqFamily.gssZBP:
        raise BuildError("gssZBP is defined semantically and cannot be enumerated")
    if f is SeqFamily.ZZI:
        ms = [1]
    elif f is SeqFamily.ssZBtPt:
        ms = [m for m in (1, 2) if m <= max_param]
    else:
        ms = list(range(1, max_param + 1))
    level = {_CTRIV: TRIV}
    for _ in range(max_depth):
        cur = list(level.values())
        new = {}
        for i, a in enumerate(cur):
            for b in cur[i:]:
                p = product(a, b)
                new.setdefault(canonical(p), p)
            for m in ms:
                if f is SeqFamily.ZZI and canonical(a) != _CTRIV:
                    continue
                w = wr(a, m)
                new.setdefault(canonical(w), w)
        for k, v in new.items():
            level.setdefault(k, v)
    return [v for v in level.values() if build_depth(v) <= max_depth]


# ---------------------------------------------------------------- finite shadows

def shadow_orders(s: SeqExpr, N: int):
    """Orders of (kernel, middle, quotient) after replacing Z by Z_N.

    Subgroups mZ become the subgroup of order N/m, so N must be divisible by
    every wreath parameter.  Exactness gives |kernel| * |quotient| = |middle|.
    """
    b = s.build
    if isinstance(b, BTriv) or (isinstance(b, BZ) and b.m == 0):
        return (1, 1, 1)

    def div(m):
        if N % m:
            raise BuildError(f"shadow modulus {N} not divisible by {m}")
        return N // m

    if isinstance(b, BZ):
        return (div(b.m), N, b.m)
    if isinstance(b, BZ2):
        return (div(b.m) * div(b.n), N * N, b.m * b.n)
    if isinstance(b, BProd):
        k = mid = q = 1
        for p in b.parts:
            a, bb, c = shadow_orders(p, N)
            k, mid, q = k * a, mid * bb, q * c
        return (k, mid, q)
    if isinstance(b, BWr):
        a, bb, c = shadow_orders(b.inner, N)
        return (a ** b.m * div(b.m), bb ** b.m * N, c ** b.m * b.m)
    if isinstance(b, BWr2):
        a, bb, c = shadow_orders(b.inner, N)
        mn = b.m * b.n
        return (a ** mn * div(b.m) * div(b.n), bb ** mn * N * N, c ** mn * mn)
    if isinstance(b, BGarside):
        w = b.of.build
        a, bb, c = shadow_orders(w.inner, N)
        mn = w.m * (w.n if isinstance(w, BWr2) else 1)
        return (a ** mn, bb ** mn * mn, c ** mn * mn)
    if isinstance(b, BDiag):
        o = reduce(lambda x, y: x * y // math.gcd(x, y), (div(w.build.m) for w in b.of))
        k = mid = q = 1
        for w in b.of:
            a, bb, c = shadow_orders(w, N)
            k, mid, q = k * a, mid * bb, q * c
        return (k // o, mid // o, q)
    if isinstance(b, BTop):
        a, _, _ = shadow_orders(b.of, N)
        return (a, a, 1)
    if isinstance(b, BBottom):
        _, _, c = shadow_orders(b.of, N)
        return (1, c, c)
    raise TypeError(b)


# ------------------------------------------------------------ text and JSON

def build_script(s: SeqExpr) -> str:
    b = s.build
    if isinstance(b, BTriv):
        return "triv"
    if isinstance(b, BZ):
        return "triv" if b.m == 0 else f"z({b.m})"
    if isinstance(b, BZ2):
        return f"z({b.m},{b.n})"
    if isinstance(b, BProd):
        return "prod(" + ", ".join(build_script(p) for p in b.parts) + ")"
    if isinstance(b, BWr):
        return f"wr({build_script(b.inner)}, {b.m})"
    if isinstance(b, BWr2):
        return f"wr2({build_script(b.inner)}, {b.m}, {b.n})"
    if isinstance(b, BGarside):
        return f"garside({build_script(b.of)})"
    if isinstance(b, BDiag):
        return "diag(" + ", ".join(build_script(w) for w in b.of) + ")"
    if isinstance(b, BTop):
        return f"top({build_script(b.of)})"
    if isinstance(b, BBottom):
        return f"bottom({build_script(b.of)})"
    raise TypeError(b)


def to_text(s: SeqExpr) -> str:
    return (f"{gx.to_text(s.kernel)} -> {gx.to_text(s.middle)} ->> {gx.to_text(s.quotient)}"
            f" [build: {build_script(s)}]")


_STOK = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|\d+|[(),])")


def evaluate_script(text: str) -> SeqExpr:
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        mt = _STOK.match(text, pos)
        if not mt:
            raise ParseError(f"bad build script near {text[pos:pos + 10]!r}")
        toks.append(mt.group(1))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def take(exp=None):
        nonlocal i
        if i >= len(toks) or (exp is not None and toks[i] != exp):
            raise ParseError(f"expected {exp or 'token'} in build script {text!r}")
        i += 1
        return toks[i - 1]

    def num():
        t = take()
        if not t.isdigit():
            raise ParseError(f"expected integer, got {t!r}")
        return int(t)

    def node():
        name = take()
        if name in ("triv",):
            return TRIV
        if name == "z1":
            return z(1)
        take("(")
        try:
            if name == "z":
                m = num()
                if toks[i] == ",":
                    take(",")
                    n = num()
                    take(")")
                    return z2(m, n)
                take(")")
                return z(m)
            args = [node()]
            if name in ("wr", "wr2"):
                params = []
                while toks[i] == ",":
                    take(",")
                    params.append(num())
                take(")")
                if name == "wr" and len(params) == 1:
                    return wr(args[0], params[0])
                if name == "wr2" and len(params) == 2:
                    return wr2(args[0], *params)
                raise ParseError(f"wrong number of parameters for {name}")
            while toks[i] == ",":
                take(",")
                args.append(node())
            take(")")
        except IndexError:
            raise ParseError(f"unterminated build script {text!r}") from None
        if name == "prod":
            return product(*args) if len(args) > 1 else _mk(args[0].kernel, args[0].middle,
                                                              args[0].quotient, BProd(tuple(args)))
        if name == "garside" and len(args) == 1:
            return garside_quotient(args[0])
        if name == "diag":
            return diag_garside(args)
        if name == "top" and len(args) == 1:
            return natural(args[0])[0]
        if name == "bottom" and len(args) == 1:
            return natural(args[0])[1]
        raise ParseError(f"unknown build operation {name!r}")

    s = node()
    if i != len(toks):
        raise ParseError(f"trailing tokens in build script {text!r}")
    return s


def parse_seq(text: str) -> SeqExpr:
    """Parse ``A -> B ->> C [build: script]`` (or a bare build script)."""
    if "[build:" not in text:
        return evaluate_script(text)
    head, _, rest = text.partition("[build:")
    script = rest.rsplit("]", 1)[0]
    s = evaluate_script(script)
    parts = re.split(r"\s*->>\s*|\s*->\s*", head.strip())
    if len(parts) != 3:
        raise ParseError("expected 'A -> B ->> C'")
    given = tuple(gx.normalize(gx.parse(p)) for p in parts)
    if given != s.triple:
        raise ParseError(f"groups {tuple(map(gx.to_text, given))} do not match build {script!r}")
    return s


def to_json(s: SeqExpr) -> dict:
    return {"kernel": gx.to_text(s.kernel), "middle": gx.to_text(s.middle),
            "quotient": gx.to_text(s.quotient), "build": _build_json(s), "script": build_script(s)}


def _build_json(s):
    b = s.build
    if isinstance(b, BTriv):
        return {"op": "triv"}
    if isinstance(b, BZ):
        return {"op": "z", "m": b.m}
    if isinstance(b, BZ2):
        return {"op": "z", "m": b.m, "n": b.n}
    if isinstance(b, BProd):
        return {"op": "prod", "args": [_build_json(p) for p in b.parts]}
    if isinstance(b, BWr):
        return {"op": "wr", "m": b.m, "args": [_build_json(b.inner)]}
    if isinstance(b, BWr2):
        return {"op": "wr2", "m": b.m, "n": b.n, "args": [_build_json(b.inner)]}
    if isinstance(b, BGarside):
        return {"op": "garside", "args": [_build_json(b.of)]}
    if isinstance(b, BDiag):
        return {"op": "diag", "args": [_build_json(w) for w in b.of]}
    if isinstance(b, BTop):
        return {"op": "top", "args": [_build_json(b.of)]}
    return {"op": "bottom", "args": [_build_json(b.of)]}


def from_json(d: dict) -> SeqExpr:
    return evaluate_script(d["script"]) if "script" in d else _from_build_json(d["build"])


def _from_build_json(d):
    op = d["op"]
    args = [_from_build_json(a) for a in d.get("args", [])]
    if op == "triv":
        return TRIV
    if op == "z":
        return z2(d["m"], d["n"]) if "n" in d else z(d["m"])
    if op == "prod":
        return product(*args)
    if op == "wr":
        return wr(args[0], d["m"])
    if op == "wr2":
        return wr2(args[0], d["m"], d["n"])
    if op == "garside":
        return garside_quotient(args[0])
    if op == "diag":
        return diag_garside(args)
    if op == "top":
        return natural(args[0])[0]
    if op == "bottom":
        return natural(args[0])[1]
    raise ParseError(f"unknown build op {op!r}")
