"""Isolated critical points of square-free homogeneous polynomials in two variables.

Everything is exact over the rationals.  Real linear factors are counted with
Sturm sequences; the rotational symmetry is read off the support of g in the
basis z^j zbar^(d-j), where rotation by t multiplies the j-th monomial by
exp(i t (2j - d)).
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence, Union

from .errors import ParseError, SquareFreeError


# ------------------------------------------------------------ univariate helpers
# polynomials are lists of Fractions, lowest degree first, no trailing zeros

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _deriv(p):
    return _trim([k * c for k, c in enumerate(p)][1:])


def _divmod(a, b):
    a = _trim(a)
    b = _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        k = len(a) - len(b)
        c = a[-1] / b[-1]
        q[k] = c
        for i, bc in enumerate(b):
            a[i + k] -= c * bc
        a = _trim(a)
    return _trim(q), a


def _gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _divmod(a, b)[1]
    if not a:
        return a
    return [c / a[-1] for c in a]


def _sign_changes(vals):
    vals = [v for v in vals if v != 0]
    return sum(1 for u, v in zip(vals, vals[1:]) if (u > 0) != (v > 0))


def count_real_roots(p) -> int:
    """Number of distinct real roots of p (Sturm's theorem)."""
    p = _trim([Fraction(c) for c in p])
    if len(p) <= 1:
        return 0
    seq = [p, _deriv(p)]
    while True:
        r = _divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    at_neg = [s[-1] * (-1) ** (len(s) - 1) for s in seq]
    at_pos = [s[-1] for s in seq]
    return _sign_changes(at_neg) - _sign_changes(at_pos)


# ------------------------------------------------------------- polynomial type

@dataclass(frozen=True)
class HomogPoly:
    """g = sum_k a_k x^k y^(d-k)."""
    degree: int
    coeffs: tuple  # a_0..a_d as Fractions

    def __post_init__(self):
        if len(self.coeffs) != self.degree + 1:
            raise ValueError("need degree+1 coefficients")
        if all(c == 0 for c in self.coeffs):
            raise ValueError("polynomial is identically zero")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence) -> "HomogPoly":
        cs = tuple(Fraction(c) for c in coeffs)
        if not cs:
            raise ParseError("empty coefficient list")
        try:
            return cls(len(cs) - 1, cs)
        except ValueError as e:
            raise ParseError(str(e)) from None

    @classmethod
    def parse(cls, text: str) -> "HomogPoly":
        return parse_poly(text)

    def __call__(self, x, y):
        return sum(a * x ** k * y ** (self.degree - k) for k, a in enumerate(self.coeffs))

    def __str__(self):
        terms = []
        d = self.degree
        for k in range(d, -1, -1):
            a = self.coeffs[k]
            if a == 0:
                continue
            mono = "*".join(
                f"{v}^{e}" if e > 1 else v for v, e in (("x", k), ("y", d - k)) if e > 0)
            if not mono:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")


_PTOK = re.compile(r"\s*(\d+(?:\.\d+)?|[xy]|[-+*/^()])")


def parse_poly(text: str) -> HomogPoly:
    """Parse text such as ``x^4 + y^4`` or ``(x^2+y^2)*(3x^2+2y^2)``."""
    toks, pos = [], 0
    text = text.strip()
    while pos < len(text):
        mt = _PTOK.match(text, pos)
        if not mt:
            raise ParseError(f"unexpected character in polynomial: {text[pos:]!r}")
        toks.append(mt.group(1))
        pos = mt.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take():
        nonlocal i
        if i >= len(toks):
            raise ParseError("unexpected end of polynomial")
        i += 1
        return toks[i - 1]

    def add(p, q, sign=1):
        r = dict(p)
        for k, v in q.items():
            r[k] = r.get(k, 0) + sign * v
        return {k: v for k, v in r.items() if v != 0}

    def mul(p, q):
        r = {}
        for (a, b), u in p.items():
            for (c, d), v in q.items():
                r[(a + c, b + d)] = r.get((a + c, b + d), 0) + u * v
        return {k: v for k, v in r.items() if v != 0}

    def expr():
        sign = 1
        if peek() in ("+", "-"):
            sign = -1 if take() == "-" else 1
        acc = term()
        if sign < 0:
            acc = {k: -v for k, v in acc.items()}
        while peek() in ("+", "-"):
            s = 1 if take() == "+" else -1
            acc = add(acc, term(), s)
        return acc

    def term():
        acc = power()
        while peek() is not None and peek() not in ("+", "-", ")"):
            if peek() == "*":
                take()
                acc = mul(acc, power())
            elif peek() == "/":
                take()
                den = power()
                if set(den) - {(0, 0)} or not den:
                    raise ParseError("can only divide by a nonzero constant")
                acc = {k: v / den[(0, 0)] for k, v in acc.items()}
            else:  # implicit multiplication, e.g. 3x^2 or 2xy
                acc = mul(acc, power())
        return acc

    def power():
        base = atom()
        if peek() == "^":
            take()
            e = take()
            if not e.isdigit():
                raise ParseError("exponent must be a non-negative integer")
            r = {(0, 0): Fraction(1)}
            for _ in range(int(e)):
                r = mul(r, base)
            return r
        return base

    def atom():
        t = take()
        if t == "(":
            v = expr()
            if take() != ")":
                raise ParseError("missing ')'")
            return v
        if t == "x":
            return {(1, 0): Fraction(1)}
        if t == "y":
            return {(0, 1): Fraction(1)}
        if t[0].isdigit():
            return {(0, 0): Fraction(t)} if Fraction(t) != 0 else {}
        if t == "-":
            return {k: -v for k, v in power().items()}
        raise ParseError(f"unexpected token {t!r}")

    terms = expr()
    if i != len(toks):
        raise ParseError(f"trailing input in polynomial: {' '.join(toks[i:])}")
    if not terms:
        raise ParseError("polynomial is identically zero")
    degs = {a + b for a, b in terms}
    if len(degs) != 1:
        raise ParseError("polynomial is not homogeneous")
    d = degs.pop()
    coeffs = [Fraction(0)] * (d + 1)
    for (a, _b), v in terms.items():
        coeffs[a] = v
    return HomogPoly(d, tuple(coeffs))


def as_poly(g: Union[HomogPoly, str, Sequence]) -> HomogPoly:
    if isinstance(g, HomogPoly):
        return g
    if isinstance(g, str):
        return parse_poly(g)
    return HomogPoly.from_coeffs(g)


# ------------------------------------------------------------ factor counting

def _dehomogenized(g: HomogPoly):
    """h(t) = g(t, 1) and the multiplicity of y as a factor of g."""
    h = _trim(list(g.coeffs))
    return h, g.degree - (len(h) - 1)


def is_square_free(g) -> bool:
    g = as_poly(g)
    h, ymult = _dehomogenized(g)
    if ymult > 1:
        return False
    return len(_gcd(h, _deriv(h))) <= 1


def factor_counts(g) -> tuple:
    """(p, q): numbers of real linear and irreducible quadratic factors."""
    g = as_poly(g)
    if not is_square_free(g):
        raise SquareFreeError(f"{g} has a multiple factor")
    h, ymult = _dehomogenized(g)
    p = count_real_roots(h) + ymult
    return p, (g.degree - p) // 2


# ------------------------------------------------------------- classification

class CritType(str, Enum):
    NonDegExtreme = "NonDegExtreme"
    DegExtreme = "DegExtreme"
    QuasiSaddle = "QuasiSaddle"
    NonDegSaddle = "NonDegSaddle"
    Saddle = "Saddle"
    NoCriticalPoint = "NoCriticalPoint"


@dataclass(frozen=True)
class Classification:
    type: CritType
    p: int
    q: int
    degree: int

    @property
    def rays(self) -> int:
        """Number of rays in the zero level set near the point."""
        return 2 * self.p


def classify(g) -> Classification:
    g = as_poly(g)
    p, q = factor_counts(g)
    if g.degree == 1:
        t = CritType.NoCriticalPoint
    elif p == 0:
        t = CritType.NonDegExtreme if q == 1 else CritType.DegExtreme
    elif p == 1:
        t = CritType.QuasiSaddle
    elif p == 2 and q == 0:
        t = CritType.NonDegSaddle
    else:
        t = CritType.Saddle
    return Classification(t, p, q, g.degree)


# ------------------------------------------------------- gaussian rationals

@dataclass(frozen=True)
class GQ:
    re: Fraction
    im: Fraction = Fraction(0)

    def __add__(self, o):
        return GQ(self.re + o.re, self.im + o.im)

    def __mul__(self, o):
        return GQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def conj(self):
        return GQ(self.re, -self.im)

    def inv(self):
        n = self.re ** 2 + self.im ** 2
        return GQ(self.re / n, -self.im / n)

    def __truediv__(self, o):
        return self * o.inv()

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inv()
        r = GQ(Fraction(1))
        for _ in range(abs(k)):
            r = r * base
        return r

    def __bool__(self):
        return self.re != 0 or self.im != 0


_HALF = Fraction(1, 2)


def complex_coeffs(g) -> list:
    """c_j with g = sum_j c_j z^j zbar^(d-j)."""
    g = as_poly(g)
    d = g.degree
    x = [GQ(_HALF), GQ(_HALF)]               # x = (z + zbar)/2
    y = [GQ(0 * _HALF, _HALF), GQ(0 * _HALF, -_HALF)]  # y = (z - zbar)/(2i)

    def pmul(a, b):
        r = [GQ(Fraction(0))] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            for j, v in enumerate(b):
                r[i + j] = r[i + j] + u * v
        return r

    total = [GQ(Fraction(0))] * (d + 1)
    for k, a in enumerate(g.coeffs):
        if a == 0:
            continue
        mono = [GQ(Fraction(a))]
        for _ in range(k):
            mono = pmul(mono, x)
        for _ in range(d - k):
            mono = pmul(mono, y)
        total = [s + t for s, t in zip(total, mono)]
    return total


# ------------------------------------------------------------- symmetry index

@dataclass(frozen=True)
class LinStab:
    """Linear stabilizer: rotation part (m, or None for all of SO(2)) and a reflection flag."""
    m: Optional[int]
    dihedral: bool

    @property
    def continuous(self) -> bool:
        return self.m is None

    @property
    def orbit_size(self) -> Optional[int]:
        """Size of an orbit of tangent directions under the stabilizer."""
        if self.m is None:
            return None
        return 2 * self.m if self.dihedral else self.m

    def __str__(self):
        if self.m is None:
            return "O(2)" if self.dihedral else "SO(2)"
        return f"D_{self.m}" if self.dihedral else f"Z_{self.m}"


def _bezout(nums):
    """Coefficients a with sum a_i n_i = gcd(nums)."""
    g, coefs = 0, [0] * len(nums)
    for i, n in enumerate(nums):
        if n == 0:
            continue
        # extended gcd of g and n
        old_r, r, old_s, s, old_t, t = g, n, 1, 0, 0, 1
        while r:
            qq = old_r // r
            old_r, r = r, old_r - qq * r
            old_s, s = s, old_s - qq * s
            old_t, t = t, old_t - qq * t
        if old_r < 0:
            old_r, old_s, old_t = -old_r, -old_s, -old_t
        coefs = [c * old_s for c in coefs]
        coefs[i] = old_t
        g = old_r
    return g, coefs


def symmetry_index(g) -> LinStab:
    g = as_poly(g)
    if not is_square_free(g):
        raise SquareFreeError(f"{g} has a multiple factor")
    d = g.degree
    cs = complex_coeffs(g)
    support = [j for j, c in enumerate(cs) if c]
    ks = [2 * j - d for j in support]
    m = reduce(math.gcd, (abs(k) for k in ks), 0)
    # reflection z -> w*zbar preserves g iff w^(2j-d) = conj(c_j)/c_j for all j
    us = [cs[j].conj() / cs[j] for j in support]
    if m == 0:
        dihedral = True
    else:
        g0, a = _bezout(ks)
        U = GQ(Fraction(1))
        for u, e in zip(us, a):
            if e:
                U = U * (u ** e)
        dihedral = all(U ** (k // g0) == u for k, u in zip(ks, us))
    return LinStab(None if m == 0 else m, dihedral)


def check_rotation_numeric(g, m: int, samples: int = 64, rng: Optional[random.Random] = None) -> float:
    """max |g(R v) - g(v)| over random unit vectors v, R = rotation by 2 pi / m."""
    g = as_poly(g)
    rng = rng or random.Random(0)
    cs = [float(a) for a in g.coeffs]
    d = g.degree
    c, s = math.cos(2 * math.pi / m), math.sin(2 * math.pi / m)

    def ev(x, y):
        return sum(a * x ** k * y ** (d - k) for k, a in enumerate(cs))

    worst = 0.0
    for _ in range(samples):
        t = rng.uniform(0, 2 * math.pi)
        x, y = math.cos(t), math.sin(t)
        worst = max(worst, abs(ev(c * x - s * y, s * x + c * y) - ev(x, y)))
    return worst


def describe(g) -> dict:
    """Classification plus symmetry data as a JSON-ready dict."""
    g = as_poly(g)
    cl = classify(g)
    out = {"poly": str(g), "degree": g.degree, "p": cl.p, "q": cl.q, "type": cl.type.value,
           "rays": cl.rays}
    if g.degree >= 2:
        st = symmetry_index(g)
        out.update({"m": st.m, "continuous": st.continuous, "dihedral": st.dihedral,
                    "stabilizer": str(st), "orbit_size": st.orbit_size})
    return out
