"""Element-level arithmetic in iterated wreath and semidirect products.

Base groups are either finite (explicit multiplication table over indices
0..n-1) or the integers.  Shapes describe the nesting:

    Base(G)
    ProdShape([S1, S2, ...])        elements are tuples
    WrZShape(S, m)                  elements WrElem(coords, k), len(coords) == m
    WrZ2Shape(S, m, n)              elements WrElem(coords, (k, l)), coords row-major
    SemidirectShape(N, order, phi)  elements SdElem(a, x), x in Z or Z_order

In ``S wr_m Z`` the product is (g; a)(h; b) = (g_i h_{i+a mod m}; a + b).
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

from .errors import ParseError, SectionError, ShapeError, SubgroupError


# ------------------------------------------------------------------ base groups

class BaseGroup:
    """A finite group given by a table, or the integers (``integers=True``)."""

    def __init__(self, names=None, table=None, identity=0, generators=None, integers=False,
                 validate=True):
        self.integers = integers
        if integers:
            self.names = None
            self.table = None
            self.e = 0
            self.inverse = None
            self.gens = (1,)
            self._center = None
            self._derived = None
            return
        n = len(names)
        self.names = tuple(str(x) for x in names)
        self.table = tuple(tuple(row) for row in table)
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise ValueError("multiplication table must be square and match the names")
        self.e = identity
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == identity:
                    inv[a] = b
                    break
        self.inverse = tuple(inv)
        if validate:
            self._validate()
        self.gens = tuple(generators) if generators is not None else tuple(range(n))
        self._center = None
        self._derived = None
        self._ab_rep = None

    def _validate(self):
        n, t, e = len(self.names), self.table, self.e
        for a in range(n):
            if t[e][a] != a or t[a][e] != a:
                raise ValueError("identity law fails")
            if self.inverse[a] is None or t[self.inverse[a]][a] != e:
                raise ValueError(f"element {self.names[a]} has no two-sided inverse")
            for b in range(n):
                if not 0 <= t[a][b] < n:
                    raise ValueError("table entry out of range")
        for a, b, c in itertools.product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise ValueError("multiplication is not associative")

    # constructors
    @classmethod
    def Integers(cls):
        return cls(integers=True)

    @classmethod
    def cyclic(cls, n):
        return cls([str(i) for i in range(n)],
                   [[(a + b) % n for b in range(n)] for a in range(n)],
                   generators=[1 % n])

    @classmethod
    def symmetric(cls, n):
        perms = sorted(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        # (p*q)(x) = p(q(x))
        table = [[index[tuple(p[q[x]] for x in range(n))] for q in perms] for p in perms]
        gens = []
        if n >= 2:
            swap = list(range(n))
            swap[0], swap[1] = 1, 0
            gens.append(index[tuple(swap)])
            cyc = tuple(list(range(1, n)) + [0])
            gens.append(index[cyc])
        names = ["".join(map(str, p)) for p in perms]
        return cls(names, table, identity=index[tuple(range(n))], generators=gens)

    @classmethod
    def direct_product(cls, g, h):
        if g.integers or h.integers:
            raise ValueError("direct_product only for finite base groups")
        ng, nh = g.order, h.order
        names = [f"{a}|{b}" for a in g.names for b in h.names]
        table = [[g.table[i // nh][j // nh] * nh + h.table[i % nh][j % nh]
                  for j in range(ng * nh)] for i in range(ng * nh)]
        gens = [x * nh + h.e for x in g.gens] + [g.e * nh + y for y in h.gens]
        return cls(names, table, identity=g.e * nh + h.e, generators=gens, validate=False)

    @classmethod
    def from_csv(cls, text):
        """Header row holds the element names; each body row holds products.

        A body row may start with its own label, in which case it has one
        more cell than the header (and the header may start with an empty or
        ``*`` corner cell).
        """
        rows = [[c.strip() for c in r] for r in csv.reader(io.StringIO(text.strip())) if r]
        header = rows[0]
        if header and header[0] in ("", "*"):
            header = header[1:]
        names = header
        index = {x: i for i, x in enumerate(names)}
        body = rows[1:]
        if len(body) != len(names):
            raise ParseError("table needs one row per element")
        table = []
        for i, r in enumerate(body):
            if len(r) == len(names) + 1:
                if r[0] != names[i]:
                    raise ParseError(f"row label {r[0]!r} out of order")
                r = r[1:]
            try:
                table.append([index[c] for c in r])
            except KeyError as exc:
                raise ParseError(f"unknown element {exc.args[0]!r}") from None
        ids = [i for i in range(len(names)) if table[i] == list(range(len(names)))]
        if not ids:
            raise ParseError("no identity element in table")
        try:
            return cls(names, table, identity=ids[0])
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    # arithmetic
    @property
    def order(self):
        return None if self.integers else len(self.names)

    def mul(self, a, b):
        if self.integers:
            return a + b
        return self.table[a][b]

    def inv(self, a):
        if self.integers:
            return -a
        return self.inverse[a]

    def elements(self):
        if self.integers:
            raise ShapeError("the integers cannot be enumerated")
        return range(len(self.names))

    def conforms(self, a):
        if self.integers:
            return isinstance(a, int) and not isinstance(a, bool)
        return isinstance(a, int) and 0 <= a < len(self.names)

    def center(self):
        if self.integers:
            raise ShapeError("center of Z is Z; not enumerable")
        if self._center is None:
            t = self.table
            self._center = frozenset(z for z in self.elements()
                                     if all(t[z][g] == t[g][z] for g in self.elements()))
        return self._center

    def derived(self):
        """Derived subgroup, by closing the set of commutators."""
        if self.integers:
            return frozenset({0})
        if self._derived is None:
            comms = {self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
                     for a in self.elements() for b in self.elements()}
            self._derived = frozenset(generated_subgroup(self, comms))
        return self._derived

    def ab(self, a):
        """Canonical representative of a in G/G' (for Z: a itself)."""
        if self.integers:
            return a
        if self._ab_rep is None:
            d = self.derived()
            rep = {}
            for g in self.elements():
                if g not in rep:
                    coset = [self.mul(g, x) for x in d]
                    r = min(coset)
                    for y in coset:
                        rep[y] = r
            self._ab_rep = rep
        return self._ab_rep[a]

    def name(self, a):
        return str(a) if self.integers else self.names[a]

    def lookup(self, token):
        if self.integers:
            return int(token)
        try:
            return self.names.index(token)
        except ValueError:
            raise ParseError(f"unknown element {token!r}") from None


def generated_subgroup(g: BaseGroup, gens):
    out = {g.e}
    frontier = list(out)
    gens = list(gens)
    while frontier:
        x = frontier.pop()
        for s in gens:
            y = g.mul(x, s)
            if y not in out:
                out.add(y)
                frontier.append(y)
    return out


# ---------------------------------------------------------------------- shapes

class WrElem(NamedTuple):
    coords: tuple
    shift: object  # int for WrZ, (int, int) for WrZ2


class SdElem(NamedTuple):
    a: object
    x: int


class Shape:
    finite = False

    def check(self, x):
        if not self.conforms(x):
            raise ShapeError(f"{x!r} does not conform to {self!r}")


class Base(Shape):
    def __init__(self, group: BaseGroup):
        self.group = group
        self.finite = not group.integers

    def __repr__(self):
        return "Base(Z)" if self.group.integers else f"Base(|G|={self.group.order})"

    def conforms(self, x):
        return self.group.conforms(x)

    def identity(self):
        return self.group.e

    def mul(self, x, y):
        return self.group.mul(x, y)

    def inv(self, x):
        return self.group.inv(x)

    def generators(self):
        return list(self.group.gens)

    def elements(self, bound=2):
        if self.group.integers:
            return range(-bound, bound + 1)
        return self.group.elements()

    def random(self, rng, bound=3):
        if self.group.integers:
            return rng.randint(-bound, bound)
        return rng.randrange(self.group.order)


class ProdShape(Shape):
    def __init__(self, factors):
        self.factors = tuple(factors)
        self.finite = all(f.finite for f in self.factors)

    def __repr__(self):
        return f"ProdShape({list(self.factors)!r})"

    def conforms(self, x):
        return (isinstance(x, tuple) and len(x) == len(self.factors)
                and all(f.conforms(a) for f, a in zip(self.factors, x)))

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def mul(self, x, y):
        if len(x) != len(self.factors) or len(y) != len(self.factors):
            raise ShapeError("product arity mismatch")
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, x, y))

    def inv(self, x):
        return tuple(f.inv(a) for f, a in zip(self.factors, x))

    def embed(self, i, a):
        e = list(self.identity())
        e[i] = a
        return tuple(e)

    def generators(self):
        return [self.embed(i, g) for i, f in enumerate(self.factors) for g in f.generators()]

    def elements(self, bound=2):
        return itertools.product(*(f.elements(bound) for f in self.factors))

    def random(self, rng, bound=3):
        return tuple(f.random(rng, bound) for f in self.factors)


class WrZShape(Shape):
    def __init__(self, inner: Shape, m: int):
        if m < 1:
            raise ValueError("m must be positive")
        self.inner = inner
        self.m = m

    def __repr__(self):
        return f"WrZShape({self.inner!r}, {self.m})"

    def conforms(self, x):
        return (isinstance(x, WrElem) and isinstance(x.shift, int) and len(x.coords) == self.m
                and all(self.inner.conforms(c) for c in x.coords))

    def identity(self):
        return WrElem((self.inner.identity(),) * self.m, 0)

    def mul(self, x, y):
        m = self.m
        if len(x.coords) != m or len(y.coords) != m or not isinstance(x.shift, int):
            raise ShapeError(f"element does not conform to {self!r}")
        a = x.shift
        g, h, mul = x.coords, y.coords, self.inner.mul
        return WrElem(tuple(mul(g[i], h[(i + a) % m]) for i in range(m)), a + y.shift)

    def inv(self, x):
        m, k = self.m, x.shift
        if len(x.coords) != m:
            raise ShapeError(f"element does not conform to {self!r}")
        inv = self.inner.inv
        return WrElem(tuple(inv(x.coords[(j - k) % m]) for j in range(m)), -k)

    def embed(self, i, g):
        e = self.inner.identity()
        return WrElem(tuple(g if j == i else e for j in range(self.m)), 0)

    def shift_generator(self):
        return WrElem((self.inner.identity(),) * self.m, 1)

    def generators(self):
        gens = [self.embed(i, g) for i in range(self.m) for g in self.inner.generators()]
        return gens + [self.shift_generator()]

    def elements(self, bound=2, shift_bound=None):
        sb = bound if shift_bound is None else shift_bound
        for coords in itertools.product(list(self.inner.elements(bound)), repeat=self.m):
            for k in range(-sb, sb + 1):
                yield WrElem(tuple(coords), k)

    def random(self, rng, bound=3):
        return WrElem(tuple(self.inner.random(rng, bound) for _ in range(self.m)),
                      rng.randint(-bound, bound))


class WrZ2Shape(Shape):
    def __init__(self, inner: Shape, m: int, n: int):
        if m < 1 or n < 1:
            raise ValueError("m, n must be positive")
        self.inner = inner
        self.m = m
        self.n = n

    def __repr__(self):
        return f"WrZ2Shape({self.inner!r}, {self.m}, {self.n})"

    def conforms(self, x):
        return (isinstance(x, WrElem) and isinstance(x.shift, tuple) and len(x.shift) == 2
                and len(x.coords) == self.m * self.n
                and all(self.inner.conforms(c) for c in x.coords))

    def identity(self):
        return WrElem((self.inner.identity(),) * (self.m * self.n), (0, 0))

    def mul(self, x, y):
        m, n = self.m, self.n
        if len(x.coords) != m * n or len(y.coords) != m * n or not isinstance(x.shift, tuple):
            raise ShapeError(f"element does not conform to {self!r}")
        a, b = x.shift
        g, h, mul = x.coords, y.coords, self.inner.mul
        out = tuple(mul(g[i * n + j], h[((i + a) % m) * n + (j + b) % n])
                    for i in range(m) for j in range(n))
        return WrElem(out, (a + y.shift[0], b + y.shift[1]))

    def inv(self, x):
        m, n = self.m, self.n
        k, l = x.shift
        inv = self.inner.inv
        out = tuple(inv(x.coords[((i - k) % m) * n + (j - l) % n])
                    for i in range(m) for j in range(n))
        return WrElem(out, (-k, -l))

    def embed(self, i, j, g):
        e = self.inner.identity()
        idx = i * self.n + j
        return WrElem(tuple(g if t == idx else e for t in range(self.m * self.n)), (0, 0))

    def generators(self):
        e = (self.inner.identity(),) * (self.m * self.n)
        gens = [self.embed(i, j, g) for i in range(self.m) for j in range(self.n)
                for g in self.inner.generators()]
        return gens + [WrElem(e, (1, 0)), WrElem(e, (0, 1))]

    def elements(self, bound=1, shift_bound=None):
        sb = bound if shift_bound is None else shift_bound
        for coords in itertools.product(list(self.inner.elements(bound)), repeat=self.m * self.n):
            for k in range(-sb, sb + 1):
                for l in range(-sb, sb + 1):
                    yield WrElem(tuple(coords), (k, l))

    def random(self, rng, bound=3):
        return WrElem(tuple(self.inner.random(rng, bound) for _ in range(self.m * self.n)),
                      (rng.randint(-bound, bound), rng.randint(-bound, bound)))


class SemidirectShape(Shape):
    """N semidirect C with C = Z (actor_order None) or Z_k, generator acting by ``phi``."""

    def __init__(self, normal: Shape, actor_order: Optional[int], phi: Callable,
                 phi_inv: Optional[Callable] = None, verify=True):
        self.normal = normal
        self.k = actor_order
        self.phi = phi
        if phi_inv is None:
            if not normal.finite:
                raise ShapeError("phi_inv is required when the normal subgroup is infinite")
            table = {phi(a): a for a in normal.elements()}
            phi_inv = table.__getitem__
        self.phi_inv = phi_inv
        self.finite = normal.finite and actor_order is not None
        if verify and normal.finite:
            self._verify()

    def _verify(self):
        els = list(self.normal.elements())
        images = [self.phi(a) for a in els]
        if len(set(images)) != len(els):
            raise ShapeError("phi is not a bijection")
        for a in els:
            for b in els:
                if self.phi(self.normal.mul(a, b)) != self.normal.mul(self.phi(a), self.phi(b)):
                    raise ShapeError("phi is not a homomorphism")
        if self.k is not None:
            for a in els:
                if self._act(a, self.k) != a:
                    raise ShapeError("phi^k is not the identity")

    def __repr__(self):
        return f"SemidirectShape({self.normal!r}, {self.k})"

    def _act(self, a, x):
        f = self.phi if x >= 0 else self.phi_inv
        for _ in range(abs(x)):
            a = f(a)
        return a

    def _norm(self, x):
        return x % self.k if self.k is not None else x

    def conforms(self, x):
        return isinstance(x, SdElem) and self.normal.conforms(x.a) and isinstance(x.x, int)

    def identity(self):
        return SdElem(self.normal.identity(), 0)

    def mul(self, x, y):
        return SdElem(self.normal.mul(x.a, self._act(y.a, x.x)), self._norm(x.x + y.x))

    def inv(self, x):
        return SdElem(self._act(self.normal.inv(x.a), -x.x), self._norm(-x.x))

    def generators(self):
        return [SdElem(g, 0) for g in self.normal.generators()] + [SdElem(self.normal.identity(), 1)]

    def elements(self, bound=2):
        xs = range(self.k) if self.k is not None else range(-bound, bound + 1)
        return (SdElem(a, x) for a in self.normal.elements(bound) for x in xs)

    def random(self, rng, bound=3):
        x = rng.randrange(self.k) if self.k is not None else rng.randint(-bound, bound)
        return SdElem(self.normal.random(rng, bound), x)


# ----------------------------------------------------------- module functions

def mul(s: Shape, x, y):
    try:
        return s.mul(x, y)
    except (TypeError, AttributeError, IndexError) as exc:
        raise ShapeError(f"element does not conform to {s!r}: {exc}") from None


def inv(s: Shape, x):
    try:
        return s.inv(x)
    except (TypeError, AttributeError, IndexError) as exc:
        raise ShapeError(f"element does not conform to {s!r}: {exc}") from None


def identity(s: Shape):
    return s.identity()


def power(s: Shape, x, n: int):
    result = s.identity()
    if n < 0:
        x, n = s.inv(x), -n
    base = x
    while n:
        if n & 1:
            result = s.mul(result, base)
        base = s.mul(base, base)
        n >>= 1
    return result


def order_of(s: Shape, x, bound: int):
    """Least n <= bound with x^n = e, or None when the bound is exceeded."""
    e = s.identity()
    y = x
    for n in range(1, bound + 1):
        if y == e:
            return n
        y = s.mul(y, x)
    return None


def garside(s: Shape):
    if isinstance(s, WrZShape):
        return WrElem((s.inner.identity(),) * s.m, s.m)
    if isinstance(s, WrZ2Shape):
        e = (s.inner.identity(),) * (s.m * s.n)
        return WrElem(e, (s.m, 0)), WrElem(e, (0, s.n))
    raise ShapeError("garside element only exists in wreath products with Z or Z^2")


def commutes(s: Shape, x, y):
    return s.mul(x, y) == s.mul(y, x)


def is_central(s: Shape, x) -> bool:
    """Centrality certified by commuting with a generating set."""
    return all(commutes(s, x, g) for g in s.generators())


def is_central_closed_form(s: Shape, x) -> bool:
    """The explicit description of the centre of a wreath product.

    Z(G wr_m Z) = {(g,...,g; mk) : g in Z(G)}, similarly for wr_{m,n} Z^2.
    """
    if isinstance(s, Base):
        return True if s.group.integers else x in s.group.center()
    if isinstance(s, ProdShape):
        return all(is_central_closed_form(f, a) for f, a in zip(s.factors, x))
    if isinstance(s, WrZShape):
        c = x.coords
        return (all(v == c[0] for v in c) and x.shift % s.m == 0
                and is_central_closed_form(s.inner, c[0]))
    if isinstance(s, WrZ2Shape):
        c = x.coords
        k, l = x.shift
        return (all(v == c[0] for v in c) and k % s.m == 0 and l % s.n == 0
                and is_central_closed_form(s.inner, c[0]))
    return is_central(s, x)


def _ab(s, x):
    if isinstance(s, Base):
        return s.group.ab(x)
    if isinstance(s, ProdShape):
        return tuple(_ab(f, a) for f, a in zip(s.factors, x))
    if isinstance(s, WrZShape):
        return (_ab_fold(s.inner, x.coords), x.shift)
    if isinstance(s, WrZ2Shape):
        return (_ab_fold(s.inner, x.coords),) + tuple(x.shift)
    raise ShapeError("abelianization is only available for wreath/product shapes")


def _ab_mul(s, u, v):
    if isinstance(s, Base):
        return s.group.ab(s.group.mul(u, v))
    if isinstance(s, ProdShape):
        return tuple(_ab_mul(f, a, b) for f, a, b in zip(s.factors, u, v))
    if isinstance(s, WrZShape):
        return (_ab_mul(s.inner, u[0], v[0]), u[1] + v[1])
    if isinstance(s, WrZ2Shape):
        return (_ab_mul(s.inner, u[0], v[0]), u[1] + v[1], u[2] + v[2])
    raise ShapeError("abelianization is only available for wreath/product shapes")


def _ab_fold(inner, coords):
    acc = _ab(inner, inner.identity())
    for c in coords:
        acc = _ab_mul(inner, acc, _ab(inner, c))
    return acc


def abelianize_map(s: Shape, x):
    """gamma(g; k) = (ab(g_0 ... g_{m-1}), k); for WrZ2 the shift is (k, l)."""
    return _ab(s, x)


def ab_identity(s: Shape):
    return _ab(s, s.identity())


def ab_mul(s: Shape, u, v):
    return _ab_mul(s, u, v)


def in_derived(s: Shape, x) -> bool:
    """Closed form: shift zero and the ordered product of coordinates lies in G'."""
    if isinstance(s, Base):
        return x == 0 if s.group.integers else x in s.group.derived()
    if isinstance(s, ProdShape):
        return all(in_derived(f, a) for f, a in zip(s.factors, x))
    if isinstance(s, (WrZShape, WrZ2Shape)):
        shifts = x.shift if isinstance(x.shift, tuple) else (x.shift,)
        if any(shifts):
            return False
        prod = s.inner.identity()
        for c in x.coords:
            prod = s.inner.mul(prod, c)
        return in_derived(s.inner, prod)
    raise ShapeError("derived subgroup test only for wreath/product shapes")


# ------------------------------------------------------------ element text

def format_element(s: Shape, x) -> str:
    if isinstance(s, Base):
        return s.group.name(x)
    if isinstance(s, ProdShape):
        return "[" + ", ".join(format_element(f, a) for f, a in zip(s.factors, x)) + "]"
    if isinstance(s, WrZShape):
        return "(" + ",".join(format_element(s.inner, c) for c in x.coords) + f"; {x.shift})"
    if isinstance(s, WrZ2Shape):
        rows = [",".join(format_element(s.inner, x.coords[i * s.n + j]) for j in range(s.n))
                for i in range(s.m)]
        return "({" + ";".join(rows) + "}; " + f"{x.shift[0]},{x.shift[1]})"
    if isinstance(s, SemidirectShape):
        return f"({format_element(s.normal, x.a)} | {x.x})"
    raise ShapeError(repr(s))


class _ElemParser:
    def __init__(self, text):
        self.t = text.replace(" ", "")
        self.i = 0

    def peek(self):
        return self.t[self.i] if self.i < len(self.t) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r} at {self.i} in {self.t!r}")
        self.i += 1

    def token(self):
        j = self.i
        while self.i < len(self.t) and self.t[self.i] not in ",;()[]{}|":
            self.i += 1
        if j == self.i:
            raise ParseError(f"empty token at {j} in {self.t!r}")
        return self.t[j:self.i]

    def integer(self):
        tok = self.token()
        try:
            return int(tok)
        except ValueError:
            raise ParseError(f"expected integer, got {tok!r}") from None

    def elem(self, s):
        if isinstance(s, Base):
            return s.group.lookup(self.token())
        if isinstance(s, ProdShape):
            self.expect("[")
            out = []
            for i, f in enumerate(s.factors):
                if i:
                    self.expect(",")
                out.append(self.elem(f))
            self.expect("]")
            return tuple(out)
        if isinstance(s, WrZShape):
            self.expect("(")
            cs = []
            for i in range(s.m):
                if i:
                    self.expect(",")
                cs.append(self.elem(s.inner))
            self.expect(";")
            k = self.integer()
            self.expect(")")
            return WrElem(tuple(cs), k)
        if isinstance(s, WrZ2Shape):
            self.expect("(")
            self.expect("{")
            cs = []
            for i in range(s.m):
                if i:
                    self.expect(";")
                for j in range(s.n):
                    if j:
                        self.expect(",")
                    cs.append(self.elem(s.inner))
            self.expect("}")
            self.expect(";")
            k = self.integer()
            self.expect(",")
            l = self.integer()
            self.expect(")")
            return WrElem(tuple(cs), (k, l))
        if isinstance(s, SemidirectShape):
            self.expect("(")
            a = self.elem(s.normal)
            self.expect("|")
            x = self.integer()
            self.expect(")")
            return SdElem(a, x)
        raise ShapeError(repr(s))


def parse_element(s: Shape, text: str):
    p = _ElemParser(text)
    x = p.elem(s)
    if p.i != len(p.t):
        raise ParseError(f"trailing input in {text!r}")
    return x


# ------------------------------------------------- finite-group criteria

def _check_subgroup(g: BaseGroup, h):
    h = frozenset(h)
    if g.e not in h or any(g.mul(a, b) not in h for a in h for b in h) \
            or any(g.inv(a) not in h for a in h):
        raise SubgroupError(f"{sorted(h)} is not a subgroup")
    return h


def splits_as_direct_product(g: BaseGroup, subgroups: Sequence) -> bool:
    """Is (h_1, ..., h_k) -> h_1 ... h_k an isomorphism H_1 x ... x H_k -> G?

    The subgroups must commute elementwise (then the map is a homomorphism),
    their product set must be all of G, and the orders must multiply to |G|.
    For two subgroups the order condition is the same as trivial intersection.
    """
    if g.integers:
        raise ShapeError("finite groups only")
    hs = [_check_subgroup(g, h) for h in subgroups]
    for i, j in itertools.combinations(range(len(hs)), 2):
        for a in hs[i]:
            for b in hs[j]:
                if g.mul(a, b) != g.mul(b, a):
                    return False
    total = 1
    for h in hs:
        total *= len(h)
    if total != g.order:
        return False
    prod = {g.e}
    for h in hs:
        prod = {g.mul(a, b) for a in prod for b in h}
    return len(prod) == g.order


@dataclass
class SectionReport:
    kernel: list
    kernel_order: int
    quotient_order: int
    homomorphism: bool
    bijective: bool
    pairs_checked: int
    notes: list = field(default_factory=list)

    @property
    def is_isomorphism(self):
        return self.homomorphism and self.bijective


def _as_map(data):
    if callable(data):
        return data
    return data.__getitem__


def semidirect_from_section(G: BaseGroup, Q: BaseGroup, p, s) -> SectionReport:
    """Given p: G -> Q onto and a section s with p s = id, check that
    psi(a, z) = a s(z) identifies ker(p) x|_phi Q with G, where
    phi(z)(a) = s(z) a s(z)^-1.
    """
    p, s = _as_map(p), _as_map(s)
    gels, qels = list(G.elements()), list(Q.elements())
    for a in gels:
        for b in gels:
            if p(G.mul(a, b)) != Q.mul(p(a), p(b)):
                raise SectionError("p is not a homomorphism")
    for z in qels:
        if p(s(z)) != z:
            raise SectionError(f"p(s({Q.name(z)})) != {Q.name(z)}")
    for z in qels:
        for w in qels:
            if s(Q.mul(z, w)) != G.mul(s(z), s(w)):
                raise SectionError(f"s is not a homomorphism at ({Q.name(z)}, {Q.name(w)})")
    kernel = [a for a in gels if p(a) == Q.e]

    def phi(z, a):
        sz = s(z)
        return G.mul(G.mul(sz, a), G.inv(sz))

    def sd_mul(u, v):
        (a, z), (b, w) = u, v
        return (G.mul(a, phi(z, b)), Q.mul(z, w))

    def psi(u):
        return G.mul(u[0], s(u[1]))

    pairs = [(a, z) for a in kernel for z in qels]
    images = {psi(u) for u in pairs}
    hom = True
    checked = 0
    for u in pairs:
        for v in pairs:
            checked += 1
            if psi(sd_mul(u, v)) != G.mul(psi(u), psi(v)):
                hom = False
                break
        if not hom:
            break
    return SectionReport(kernel=kernel, kernel_order=len(kernel), quotient_order=len(qels),
                         homomorphism=hom, bijective=len(images) == len(gels) == len(pairs),
                         pairs_checked=checked)
