"""Rational 1-forms sum f_v dv over one coordinate chart, with pullback."""
from __future__ import annotations

from dataclasses import dataclass

from .poly import Ring
from .ratfunc import RatFunc, substitute


class LogForm:
    """The 1-form ``sum coefficients[v] * dv``; absent variables have coefficient 0."""

    __slots__ = ("ring", "coefficients")

    def __init__(self, ring: Ring, coefficients: dict | None = None):
        coeffs = {}
        for name, f in (coefficients or {}).items():
            ring.index(name)
            if not isinstance(f, RatFunc):
                f = RatFunc.const(ring, f) if isinstance(f, int) else RatFunc(f)
            if f.ring != ring:
                raise TypeError(f"coefficient of d{name} lives in another chart")
            if f:
                coeffs[name] = f
        self.ring = ring
        self.coefficients = coeffs

    @classmethod
    def basis(cls, ring: Ring, name: str) -> "LogForm":
        return cls(ring, {name: RatFunc.const(ring, 1)})

    def coefficient(self, name: str) -> RatFunc:
        self.ring.index(name)
        return self.coefficients.get(name, RatFunc(self.ring.zero()))

    def __eq__(self, other):
        return (
            isinstance(other, LogForm)
            and self.ring == other.ring
            and self.coefficients == other.coefficients
        )

    def __hash__(self):
        return hash(tuple(sorted((k, v) for k, v in self.coefficients.items())))

    def __bool__(self):
        return bool(self.coefficients)

    def __add__(self, other: "LogForm") -> "LogForm":
        if other.ring != self.ring:
            raise TypeError("forms on different charts")
        out = dict(self.coefficients)
        for k, v in other.coefficients.items():
            out[k] = out[k] + v if k in out else v
        return LogForm(self.ring, out)

    def __neg__(self):
        return LogForm(self.ring, {k: -v for k, v in self.coefficients.items()})

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, f) -> "LogForm":
        return LogForm(self.ring, {k: v * f for k, v in self.coefficients.items()})

    __rmul__ = scaled

    def __repr__(self):
        return f"LogForm({self})"

    def __str__(self):
        if not self.coefficients:
            return "0"
        return " + ".join(f"[{self.coefficients[n]}] d{n}" for n in self.ring.names if n in self.coefficients)


def differential(f: RatFunc) -> LogForm:
    return LogForm(f.ring, {n: f.derivative(n) for n in f.ring.names})


def pullback(images: dict, form: LogForm, target: Ring | None = None) -> LogForm:
    """Pull ``form`` back along the map given by ``images``: variable -> RatFunc.

    The images all live in one chart ``target`` (inferred when omitted).
    """
    if target is None:
        rings = {f.ring for f in images.values()}
        if len(rings) != 1:
            raise ValueError("cannot infer the source chart of the map")
        (target,) = rings
    result = LogForm(target)
    for name, coeff in form.coefficients.items():
        if name not in images:
            raise KeyError(f"no image for variable {name!r}")
        result = result + differential(images[name]).scaled(substitute(coeff, images, target))
    return result


def compose(outer: dict, inner: dict, target: Ring) -> dict:
    """Images of ``outer`` after substituting ``inner``; pulls back like outer then inner."""
    return {k: substitute(v, inner, target) for k, v in outer.items()}


@dataclass(frozen=True)
class PoleOrders:
    """Valuation of each coefficient along {var = 0}, and the resulting verdict."""

    var: str
    orders: dict
    verdict: str

    @property
    def pole_order(self) -> int:
        """Largest pole among the coefficients (0 when the form is regular)."""
        return max([0] + [-o for o in self.orders.values() if o is not None])


REGULAR = "regular"
LOGARITHMIC = "logarithmic"
WORSE = "worse than logarithmic"


def pole_order_along(form: LogForm, var: str) -> PoleOrders:
    form.ring.index(var)
    orders = {n: form.coefficient(n).valuation(var) for n in form.ring.names}
    finite = {n: o for n, o in orders.items() if o is not None}
    if all(o >= 0 for o in finite.values()):
        verdict = REGULAR
    elif finite.get(var, 0) == -1 and all(o >= 0 for n, o in finite.items() if n != var):
        verdict = LOGARITHMIC
    else:
        verdict = WORSE
    return PoleOrders(var, orders, verdict)
