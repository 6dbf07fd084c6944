"""Sparse multivariate polynomials over a prime field.

Terms are stored as ``{exponent tuple: coefficient}`` with coefficients in
``range(p)``.  The gcd is computed recursively: content and primitive part
with respect to the variable of lowest degree, then a primitive
pseudo-remainder sequence.  Good enough for a handful of variables and
small degrees, which is all the verifiers need.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from ..discrepancy import is_prime


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p!r} is not a prime")

    def norm(self, c: int) -> int:
        return c % self.p

    def inv(self, c: int) -> int:
        c %= self.p
        if c == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(c, -1, self.p)


@dataclass(frozen=True)
class Ring:
    """F_p[names]."""

    field: PrimeField
    names: tuple

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"repeated variable names {self.names}")

    @classmethod
    def of(cls, p: int, names: Iterable[str]) -> "Ring":
        return cls(PrimeField(p), tuple(names))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no variable {name!r} in {self.names}") from None

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c: int) -> "Poly":
        return Poly(self, {(0,) * self.nvars: c})

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): 1})

    def gens(self) -> tuple:
        return tuple(self.var(n) for n in self.names)


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: dict):
        p, n = ring.p, ring.nvars
        clean = {}
        for e, c in terms.items():
            c %= p
            if c:
                if len(e) != n:
                    raise ValueError(f"exponent {e} has wrong length for {ring.names}")
                clean[tuple(e)] = c
        self.ring = ring
        self.terms = clean

    @classmethod
    def _raw(cls, ring: Ring, terms: dict) -> "Poly":
        """Trusted constructor: coefficients already reduced mod p and nonzero."""
        out = cls.__new__(cls)
        out.ring, out.terms = ring, terms
        return out

    # basic protocol

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        return isinstance(other, Poly) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                n if k == 1 else f"{n}^{k}" for n, k in zip(self.ring.names, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Poly) or other.ring != self.ring:
            raise TypeError(f"cannot combine polynomials over {self.ring} and {getattr(other, 'ring', other)}")
        return other

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        p = self.ring.p
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = (out.get(e, 0) + c) % p
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Poly._raw(self.ring, {e: p - c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(int.__add__, e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        p = self.ring.p
        return Poly._raw(self.ring, {e: c % p for e, c in out.items() if c % p})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = self.ring.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: int) -> "Poly":
        return Poly(self.ring, {e: c * v for e, v in self.terms.items()})

    # structure

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), 0)

    def leading(self) -> tuple:
        """(exponent, coefficient) of the lex-largest term."""
        e = max(self.terms)
        return e, self.terms[e]

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        _, c = self.leading()
        return self.scale(self.ring.field.inv(c))

    def degree_in(self, k: int) -> int:
        return max((e[k] for e in self.terms), default=-1)

    def valuation_in(self, k: int) -> int:
        """Largest power of variable k dividing the polynomial (0 is ``None``)."""
        return min((e[k] for e in self.terms), default=None)

    def variables(self) -> set:
        return {k for e in self.terms for k, x in enumerate(e) if x}

    def derivative(self, k: int) -> "Poly":
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                out[tuple(f)] = c * e[k]
        return Poly(self.ring, out)

    def coefficients_in(self, k: int) -> dict:
        """Split as sum_j c_j * x_k^j; returns {j: c_j} with c_j free of x_k."""
        out: dict = {}
        for e, c in self.terms.items():
            f = list(e)
            j = f[k]
            f[k] = 0
            out.setdefault(j, {})[tuple(f)] = c
        return {j: Poly(self.ring, t) for j, t in out.items()}

    def shift(self, k: int, j: int) -> "Poly":
        """Multiply by x_k^j (j may be negative if the result stays polynomial)."""
        out = {}
        for e, c in self.terms.items():
            f = list(e)
            f[k] += j
            if f[k] < 0:
                raise ValueError("shift leaves the polynomial ring")
            out[tuple(f)] = c
        return Poly(self.ring, out)


def divmod_poly(a: Poly, b: Poly) -> tuple:
    """Multivariate division by a single divisor in lex order."""
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    ring = a.ring
    p = ring.p
    eb, cb = b.leading()
    inv = ring.field.inv(cb)
    rest_b = [(e, c) for e, c in b.terms.items() if e != eb]
    q: dict = {}
    r: dict = {}
    rest = dict(a.terms)
    while rest:
        e = max(rest)
        c = rest.pop(e)
        if all(x >= y for x, y in zip(e, eb)):
            m = tuple(x - y for x, y in zip(e, eb))
            f = c * inv % p
            q[m] = f
            for e2, c2 in rest_b:
                t = tuple(x + y for x, y in zip(m, e2))
                v = (rest.get(t, 0) - f * c2) % p
                if v:
                    rest[t] = v
                else:
                    rest.pop(t, None)
        else:
            r[e] = c
    return Poly(ring, q), Poly(ring, r)


def exact_div(a: Poly, b: Poly) -> Poly:
    q, r = divmod_poly(a, b)
    if r:
        raise ArithmeticError(f"{b} does not divide {a}")
    return q


def divides(b: Poly, a: Poly) -> bool:
    return not divmod_poly(a, b)[1]


def _content(a: Poly, k: int) -> Poly:
    g = a.ring.zero()
    for c in sorted(a.coefficients_in(k).values(), key=lambda c: len(c.terms)):
        g = gcd(g, c)
        if g.is_constant():
            return g
    return g


def _primitive(a: Poly, k: int) -> Poly:
    if not a:
        return a
    return exact_div(a, _content(a, k))


def _prem(a: Poly, b: Poly, k: int) -> Poly:
    db = b.degree_in(k)
    lb = b.coefficients_in(k)[db]
    r = a
    while r and r.degree_in(k) >= db:
        dr = r.degree_in(k)
        lr = r.coefficients_in(k)[dr]
        r = lb * r - (lr * b).shift(k, dr - db)
    return r


def _monomial_gcd(a: Poly, b: Poly) -> Poly:
    lows = [min(e[k] for e in list(a.terms) + list(b.terms)) for k in range(a.ring.nvars)]
    return Poly(a.ring, {tuple(lows): 1})


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (gcd(0, 0) = 0)."""
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    ring = a.ring
    if len(a.terms) == 1 or len(b.terms) == 1:
        return _monomial_gcd(a, b)
    va, vb = a.variables(), b.variables()
    if not va or not vb:
        return ring.one()
    # a variable present in only one argument can only divide through its content
    only = (va ^ vb)
    if only:
        k = min(only)
        return gcd(_content(a, k), b) if k in va else gcd(a, _content(b, k))
    k = min(va, key=lambda j: (min(a.degree_in(j), b.degree_in(j)), max(a.degree_in(j), b.degree_in(j)), j))
    ca, cb = _content(a, k), _content(b, k)
    c = gcd(ca, cb)
    f, g = exact_div(a, ca), exact_div(b, cb)
    if f.degree_in(k) < g.degree_in(k):
        f, g = g, f
    while True:
        if g.degree_in(k) == 0:
            # primitive and free of x_k: a unit
            h = ring.one()
            break
        r = _prem(f, g, k)
        if not r:
            h = g
            break
        f, g = g, _primitive(r, k)
    if h.degree_in(k) > 0:
        h = _primitive(h, k)
    return (c * h).monic()


def gcd_many(polys: Sequence[Poly]) -> Poly:
    it = iter(polys)
    g = next(it)
    for q in it:
        g = gcd(g, q)
    return g
