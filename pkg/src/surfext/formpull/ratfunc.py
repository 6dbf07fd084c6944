"""Rational functions over F_p, kept in lowest terms with a monic denominator."""
from __future__ import annotations

from .poly import Poly, Ring, exact_div, gcd


class PoleOnSubstitution(ZeroDivisionError):
    """A substitution sends a denominator to the zero function."""


class RatFunc:
    __slots__ = ("ring", "num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        ring = num.ring
        if den is None:
            den = ring.one()
        if den.ring != ring:
            raise TypeError("numerator and denominator live in different rings")
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            num, den = ring.zero(), ring.one()
        else:
            g = gcd(num, den)
            if not g.is_constant():
                num, den = exact_div(num, g), exact_div(den, g)
            _, c = den.leading()
            inv = ring.field.inv(c)
            num, den = num.scale(inv), den.scale(inv)
        self.ring = ring
        self.num = num
        self.den = den

    @classmethod
    def _coprime(cls, num: Poly, den: Poly) -> "RatFunc":
        """Build from a numerator and denominator already known to be coprime."""
        out = cls.__new__(cls)
        if not num:
            num, den = num.ring.zero(), num.ring.one()
        else:
            inv = num.ring.field.inv(den.leading()[1])
            num, den = num.scale(inv), den.scale(inv)
        out.ring, out.num, out.den = num.ring, num, den
        return out

    @classmethod
    def var(cls, ring: Ring, name: str) -> "RatFunc":
        return cls(ring.var(name))

    @classmethod
    def const(cls, ring: Ring, c: int) -> "RatFunc":
        return cls(ring.const(c))

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.ring != self.ring:
                raise TypeError("rational functions over different rings")
            return other
        if isinstance(other, Poly):
            return RatFunc(other)
        if isinstance(other, int):
            return RatFunc.const(self.ring, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Poly)):
            other = self._coerce(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.ring == other.ring and self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        # Henrici: only factors of gcd(d1, d2) can cancel from the sum
        g = gcd(self.den, o.den)
        d1, d2 = exact_div(self.den, g), exact_div(o.den, g)
        t = self.num * d2 + o.num * d1
        h = gcd(t, g)
        return RatFunc._coprime(exact_div(t, h), d1 * exact_div(o.den, h))

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        g1, g2 = gcd(self.num, o.den), gcd(o.num, self.den)
        num = exact_div(self.num, g1) * exact_div(o.num, g2) if g1 and g2 else self.ring.zero()
        return RatFunc._coprime(num, exact_div(self.den, g2) * exact_div(o.den, g1))

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero function")
        return RatFunc._coprime(self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._coprime(self.num ** k, self.den ** k)

    def derivative(self, name: str) -> "RatFunc":
        k = self.ring.index(name)
        n, d = self.num, self.den
        # n'/d - n d'/d^2; only factors of d can cancel, and only once
        dd = d.derivative(k)
        g = gcd(d, dd)
        t = n.derivative(k) * exact_div(d, g) - n * exact_div(dd, g)
        h = gcd(t, d)
        return RatFunc._coprime(exact_div(t, h), exact_div(d, h) * exact_div(d, g))

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> int:
        return self.num.constant_value()  # denominator is monic, hence 1

    def valuation(self, name: str) -> int | None:
        """Order of vanishing along {name = 0}; ``None`` for the zero function."""
        if not self.num:
            return None
        k = self.ring.index(name)
        return self.num.valuation_in(k) - self.den.valuation_in(k)


def evaluate_poly(f: Poly, images: dict, target: Ring) -> RatFunc:
    """Substitute rational functions for the variables of ``f``."""
    total = RatFunc(target.zero())
    powers: dict = {}
    for e, c in f.terms.items():
        term = RatFunc.const(target, c)
        for name, k in zip(f.ring.names, e):
            if k:
                key = (name, k)
                if key not in powers:
                    powers[key] = images[name] ** k
                term = term * powers[key]
        total = total + term
    return total


def substitute(f: RatFunc, images: dict, target: Ring) -> RatFunc:
    missing = set(f.ring.names) - set(images)
    needed = {f.ring.names[k] for k in f.num.variables() | f.den.variables()}
    if needed & missing:
        raise KeyError(f"no image for variables {sorted(needed & missing)}")
    num = evaluate_poly(f.num, images, target)
    den = evaluate_poly(f.den, images, target)
    if not den:
        raise PoleOnSubstitution(f"denominator {f.den} vanishes identically after substitution")
    return num / den
