"""Symbolic groups built from 1, Z and Z_m by direct products and wreath products.

Expressions are frozen dataclasses.  ``normalize`` produces a canonical word, and
``to_text`` / ``parse`` implement the bracket notation

    1   Z   Z_m   (A x B)   (A wr[m] Z)   (A wr[m,n] Z2)   (A wr Z_m)

plus two forms that only show up as intermediate results of sequence
computations: ``(A wr (Z_m x Z_n))`` and ``diag((A wr[m] Z), ...)``, the
latter being a product of wreath products divided by the diagonal copy of Z
spanned by their Garside elements.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache, reduce
from typing import Iterator, Union

from .errors import FamilyError, ParseError

INFINITE = math.inf


@dataclass(frozen=True)
class Unit:
    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Z:
    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Zmod:
    m: int

    def __post_init__(self):
        _check_param(self.m)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Prod:
    factors: tuple

    def __init__(self, *factors):
        if len(factors) == 1 and isinstance(factors[0], (list, tuple)):
            factors = tuple(factors[0])
        object.__setattr__(self, "factors", tuple(factors))

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class WrZ:
    """inner wr_m Z"""
    inner: "GroupExpr"
    m: int

    def __post_init__(self):
        _check_param(self.m)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class WrZ2:
    """inner wr_{m,n} Z^2"""
    inner: "GroupExpr"
    m: int
    n: int

    def __post_init__(self):
        _check_param(self.m)
        _check_param(self.n)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class WrZmod:
    """inner wr Z_m = inner^m semidirect Z_m"""
    inner: "GroupExpr"
    m: int

    def __post_init__(self):
        _check_param(self.m)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class WrZmod2:
    """inner wr (Z_m x Z_n)"""
    inner: "GroupExpr"
    m: int
    n: int

    def __post_init__(self):
        _check_param(self.m)
        _check_param(self.n)

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class DiagQuot:
    """(B_1 wr_{m_1} Z x ... x B_k wr_{m_k} Z) / <(garside_1, ..., garside_k)>.

    ``parts`` is a tuple of (B_i, m_i) pairs.
    """
    parts: tuple

    def __post_init__(self):
        for _, m in self.parts:
            _check_param(m)

    def __str__(self):
        return to_text(self)


GroupExpr = Union[Unit, Z, Zmod, Prod, WrZ, WrZ2, WrZmod, WrZmod2, DiagQuot]

ONE = Unit()
ZZ = Z()


def _check_param(m):
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ValueError(f"wreath/cyclic parameter must be a positive integer, got {m!r}")


class GroupFamily(str, Enum):
    ccZ = "ccZ"
    ccB = "ccB"
    clsBt = "clsBt"
    ccP = "ccP"
    clsGt = "clsGt"
    ccBprime = "ccBprime"


# ---------------------------------------------------------------- text form

def to_text(e: GroupExpr) -> str:
    if isinstance(e, Unit):
        return "1"
    if isinstance(e, Z):
        return "Z"
    if isinstance(e, Zmod):
        return f"Z_{e.m}"
    if isinstance(e, Prod):
        if not e.factors:
            return "1"
        if len(e.factors) == 1:
            return to_text(e.factors[0])
        return "(" + " x ".join(to_text(f) for f in e.factors) + ")"
    if isinstance(e, WrZ):
        return f"({to_text(e.inner)} wr[{e.m}] Z)"
    if isinstance(e, WrZ2):
        return f"({to_text(e.inner)} wr[{e.m},{e.n}] Z2)"
    if isinstance(e, WrZmod):
        return f"({to_text(e.inner)} wr Z_{e.m})"
    if isinstance(e, WrZmod2):
        return f"({to_text(e.inner)} wr (Z_{e.m} x Z_{e.n}))"
    if isinstance(e, DiagQuot):
        return "diag(" + ", ".join(f"({to_text(b)} wr[{m}] Z)" for b, m in e.parts) + ")"
    raise TypeError(f"not a group expression: {e!r}")


_TOKEN = re.compile(r"\s*(diag|wr|Z2|Z_\d+|Z|\d+|[()\[\],^*x×])")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        mt = _TOKEN.match(text, pos)
        if not mt:
            raise ParseError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        tok = mt.group(1)
        if tok in ("*", "×"):
            tok = "x"
        out.append(tok)
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, k=0):
        j = self.i + k
        return self.toks[j] if j < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'token'}, got {tok!r}")
        self.i += 1
        return tok

    def integer(self):
        tok = self.take()
        if not tok.isdigit() or int(tok) < 1:
            raise ParseError(f"expected a positive integer, got {tok!r}")
        return int(tok)

    def expr(self):
        terms = [self.term()]
        while self.peek() == "x":
            self.take()
            terms.append(self.term())
        return terms[0] if len(terms) == 1 else Prod(*terms)

    def term(self):
        e = self.power()
        while self.peek() == "wr":
            self.take()
            e = self.suffix(e)
        return e

    def power(self):
        e = self.atom()
        if self.peek() == "^":
            self.take()
            k = self.integer()
            e = Prod(*([e] * k))
        return e

    def atom(self):
        tok = self.peek()
        if tok == "1":
            self.take()
            return ONE
        if tok == "Z":
            self.take()
            return ZZ
        if tok == "Z2":
            self.take()
            return Prod(ZZ, ZZ)
        if tok is not None and tok.startswith("Z_"):
            self.take()
            return Zmod(int(tok[2:]))
        if tok == "(":
            self.take()
            e = self.expr()
            self.take(")")
            return e
        if tok == "diag":
            self.take()
            self.take("(")
            parts = [self.expr()]
            while self.peek() == ",":
                self.take()
                parts.append(self.expr())
            self.take(")")
            for p in parts:
                if not isinstance(p, WrZ):
                    raise ParseError("diag(...) arguments must be of the form (B wr[m] Z)")
            return DiagQuot(tuple((p.inner, p.m) for p in parts))
        raise ParseError("unexpected end of input" if tok is None else f"unexpected token {tok!r}")

    def suffix(self, inner):
        tok = self.peek()
        if tok == "[":
            self.take()
            m = self.integer()
            if self.peek() == ",":
                self.take()
                n = self.integer()
                self.take("]")
                if self.peek() == "Z2":
                    self.take()
                else:
                    self.take("(")
                    self.take("Z")
                    self.take("x")
                    self.take("Z")
                    self.take(")")
                return WrZ2(inner, m, n)
            self.take("]")
            self.take("Z")
            return WrZ(inner, m)
        if tok is not None and tok.startswith("Z_"):
            self.take()
            return WrZmod(inner, int(tok[2:]))
        if tok == "(":
            self.take()
            a = self.take()
            self.take("x")
            b = self.take()
            self.take(")")
            if not (a.startswith("Z_") and b.startswith("Z_")):
                raise ParseError("expected (Z_m x Z_n) after wr")
            return WrZmod2(inner, int(a[2:]), int(b[2:]))
        raise ParseError(f"unexpected token after wr: {tok!r}")


def parse(text: str) -> GroupExpr:
    """Parse the bracket notation into a (not yet normalized) expression."""
    p = _Parser(text)
    try:
        e = p.expr()
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc)) from exc
    if p.peek() is not None:
        raise ParseError(f"trailing input at token {p.peek()!r}")
    return e


# ------------------------------------------------------------ normalization

def _key(e):
    return to_text(e)


def normalize(e: GroupExpr) -> GroupExpr:
    return _normalize(e)


@lru_cache(maxsize=65536)
def _normalize(e):
    if isinstance(e, (Unit, Z)):
        return e
    if isinstance(e, Zmod):
        return ONE if e.m == 1 else e
    if isinstance(e, Prod):
        flat = []
        for f in e.factors:
            f = _normalize(f)
            if isinstance(f, Prod):
                flat.extend(f.factors)
            elif not isinstance(f, Unit):
                flat.append(f)
        if not flat:
            return ONE
        if len(flat) == 1:
            return flat[0]
        return Prod(*sorted(flat, key=_key))
    if isinstance(e, WrZ):
        a = _normalize(e.inner)
        if isinstance(a, Unit):
            return ZZ
        if e.m == 1:
            return _normalize(Prod(a, ZZ))
        return WrZ(a, e.m)
    if isinstance(e, WrZ2):
        a = _normalize(e.inner)
        if isinstance(a, Unit):
            return Prod(ZZ, ZZ)
        if e.m == 1 and e.n == 1:
            return _normalize(Prod(a, ZZ, ZZ))
        if e.n == 1 or e.m == 1:
            return _normalize(Prod(WrZ(a, max(e.m, e.n)), ZZ))
        return WrZ2(a, e.m, e.n)
    if isinstance(e, WrZmod):
        c = _normalize(e.inner)
        if isinstance(c, Unit):
            return _normalize(Zmod(e.m))
        if e.m == 1:
            return c
        return WrZmod(c, e.m)
    if isinstance(e, WrZmod2):
        c = _normalize(e.inner)
        if isinstance(c, Unit):
            return _normalize(Prod(Zmod(e.m), Zmod(e.n)))
        if e.m == 1 or e.n == 1:
            return _normalize(WrZmod(c, max(e.m, e.n)))
        return WrZmod2(c, e.m, e.n)
    if isinstance(e, DiagQuot):
        if not e.parts:
            raise ValueError("diag() needs at least one factor")
        parts = tuple(sorted(((_normalize(b), m) for b, m in e.parts),
                             key=lambda bm: (_key(bm[0]), bm[1])))
        if len(parts) == 1:
            b, m = parts[0]
            return _normalize(WrZmod(b, m))
        if all(isinstance(b, Unit) for b, _ in parts):
            # Z^k / <(m_1,...,m_k)> = Z^(k-1) x Z_gcd
            g = reduce(math.gcd, (m for _, m in parts))
            return _normalize(Prod(*([ZZ] * (len(parts) - 1)), Zmod(g)))
        return DiagQuot(parts)
    raise TypeError(f"not a group expression: {e!r}")


# ---------------------------------------------------------------- invariants

def beta1(e: GroupExpr) -> int:
    """Number of Z symbols of the word (WrZ counts 1, WrZ2 counts 2)."""
    if isinstance(e, Unit):
        return 0
    if isinstance(e, Z):
        return 1
    if isinstance(e, Prod):
        return sum(beta1(f) for f in e.factors)
    if isinstance(e, WrZ):
        return beta1(e.inner) + 1
    if isinstance(e, WrZ2):
        return beta1(e.inner) + 2
    if isinstance(e, DiagQuot):
        return sum(beta1(b) + 1 for b, _ in e.parts) - 1
    raise FamilyError(f"beta1 is only defined for torsion-free words, got {to_text(e)}")


def center_rank(e: GroupExpr) -> int:
    """Rank of the centre, via Z(G wr_m Z) = Z(G) x Z and Z(G wr_{m,n} Z^2) = Z(G) x Z^2."""
    e = normalize(e)
    if isinstance(e, Unit):
        return 0
    if isinstance(e, Z):
        return 1
    if isinstance(e, Prod):
        return sum(center_rank(f) for f in e.factors)
    if isinstance(e, WrZ):
        return center_rank(e.inner) + 1
    if isinstance(e, WrZ2):
        return center_rank(e.inner) + 2
    raise FamilyError(f"center rank only implemented on the classes B and B', got {to_text(e)}")


def abelianization(e: GroupExpr) -> GroupExpr:
    """G/[G,G] for G in B or B' (always free abelian)."""
    def ab(x):
        if isinstance(x, Unit):
            return ONE
        if isinstance(x, Z):
            return ZZ
        if isinstance(x, Prod):
            return Prod(*(ab(f) for f in x.factors))
        if isinstance(x, WrZ):
            return Prod(ab(x.inner), ZZ)
        if isinstance(x, WrZ2):
            return Prod(ab(x.inner), ZZ, ZZ)
        raise FamilyError(f"abelianization not available for {to_text(x)}")
    return normalize(ab(normalize(e)))


def free_rank(e: GroupExpr) -> int:
    """Number of Z factors of a normalized product of copies of Z (and Unit)."""
    e = normalize(e)
    if isinstance(e, Unit):
        return 0
    if isinstance(e, Z):
        return 1
    if isinstance(e, Prod) and all(isinstance(f, Z) for f in e.factors):
        return len(e.factors)
    raise FamilyError(f"{to_text(e)} is not free abelian")


def _has_torsion(e):
    if isinstance(e, (Unit, Z)):
        return False
    if isinstance(e, (Zmod, WrZmod, WrZmod2)):
        return True
    if isinstance(e, Prod):
        return any(_has_torsion(f) for f in e.factors)
    if isinstance(e, (WrZ, WrZ2)):
        return _has_torsion(e.inner)
    if isinstance(e, DiagQuot):
        # an element (t_1^{m_1/g}, ..., t_k^{m_k/g}) is a g-th root of the diagonal
        g = reduce(math.gcd, (m for _, m in e.parts))
        return g > 1 or any(_has_torsion(b) for b, _ in e.parts)
    raise TypeError(e)


def is_torsion_free(e: GroupExpr) -> bool:
    return not _has_torsion(normalize(e))


def order(e: GroupExpr):
    """Cardinality as an int, or ``INFINITE``."""
    e = normalize(e)
    if isinstance(e, Unit):
        return 1
    if isinstance(e, Zmod):
        return e.m
    if isinstance(e, Prod):
        return reduce(lambda a, b: a * b, (order(f) for f in e.factors), 1)
    if isinstance(e, WrZmod):
        c = order(e.inner)
        return INFINITE if c == INFINITE else c ** e.m * e.m
    if isinstance(e, WrZmod2):
        c = order(e.inner)
        return INFINITE if c == INFINITE else c ** (e.m * e.n) * e.m * e.n
    return INFINITE


def is_finite(e: GroupExpr) -> bool:
    return order(e) != INFINITE


# ---------------------------------------------------------------- families

def _in_B(e, only2=False):
    if isinstance(e, (Unit, Z)):
        return True
    if isinstance(e, Prod):
        return all(_in_B(f, only2) for f in e.factors)
    if isinstance(e, WrZ):
        return (e.m == 2 or not only2) and _in_B(e.inner, only2)
    return False


def _in_P(e, only2=False):
    if isinstance(e, Unit):
        return True
    if isinstance(e, Zmod):
        return e.m == 2 or not only2
    if isinstance(e, Prod):
        return all(_in_P(f, only2) for f in e.factors)
    if isinstance(e, WrZmod):
        return (e.m == 2 or not only2) and _in_P(e.inner, only2)
    return False


def _in_Bprime(e):
    if isinstance(e, WrZ2):
        return _in_B(e.inner)
    # aliases produced by normalize: A wr_{1,1} Z^2 = A x Z x Z, A wr_{k,1} Z^2 = (A wr_k Z) x Z
    if isinstance(e, Prod) and _in_B(e):
        zs = sum(1 for f in e.factors if isinstance(f, Z))
        if zs >= 2:
            return True
        if len(e.factors) == 2 and zs == 1:
            return any(isinstance(f, WrZ) for f in e.factors)
    return False


def in_family(e: GroupExpr, f) -> bool:
    f = GroupFamily(f)
    e = normalize(e)
    if f is GroupFamily.ccZ:
        return isinstance(e, (Unit, Z)) or (
            isinstance(e, Prod) and all(isinstance(x, Z) for x in e.factors))
    if f is GroupFamily.ccB:
        return _in_B(e)
    if f is GroupFamily.clsBt:
        return _in_B(e, only2=True)
    if f is GroupFamily.ccP:
        return _in_P(e)
    if f is GroupFamily.clsGt:
        return _in_P(e, only2=True)
    return _in_Bprime(e)


def enumerate_family(f, max_depth: int, max_param: int) -> Iterator[GroupExpr]:
    """All normal forms of family ``f`` reachable with at most ``max_depth``
    nested constructors and wreath parameters at most ``max_param``.

    Depth counts binary products and wreath constructors; ``1`` has depth 0.
    """
    f = GroupFamily(f)
    if max_depth < 0:
        return
    if f is GroupFamily.ccBprime:
        seen = set()
        inner = list(_closure(GroupFamily.ccB, max_depth - 1, max_param)) if max_depth >= 1 else []
        for a in inner:
            for m in range(1, max_param + 1):
                for n in range(1, max_param + 1):
                    e = normalize(WrZ2(a, m, n))
                    if e not in seen:
                        seen.add(e)
                        yield e
        return
    for e in _closure(f, max_depth, max_param):
        yield e


def _closure(f, depth, max_param):
    levels = [ONE]
    seen = {ONE}
    order_ = [ONE]
    for _ in range(depth):
        new = []
        current = list(levels)
        cands = []
        for i, a in enumerate(current):
            for b in current[i:]:
                cands.append(Prod(a, b))
        for a in current:
            if f is GroupFamily.ccZ:
                if isinstance(a, Unit):
                    cands.append(WrZ(a, 1))
            elif f in (GroupFamily.ccB, GroupFamily.clsBt):
                ms = [2] if f is GroupFamily.clsBt else range(1, max_param + 1)
                cands.extend(WrZ(a, m) for m in ms if m <= max_param)
            else:
                ms = [2] if f is GroupFamily.clsGt else range(1, max_param + 1)
                cands.extend(WrZmod(a, m) for m in ms if m <= max_param)
        for c in cands:
            c = normalize(c)
            if c not in seen:
                seen.add(c)
                new.append(c)
        levels = current + new
        order_.extend(new)
    return order_
