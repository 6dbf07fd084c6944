import random

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from surfext.formpull import (
    E8_EXPECTED,
    LOGARITHMIC,
    REGULAR,
    WORSE,
    InfeasibleParameters,
    LogForm,
    PoleOnSubstitution,
    Poly,
    RatFunc,
    Ring,
    compose,
    differential,
    gcd,
    cone_params,
    pole_order_along,
    pullback,
    substitute,
    verify_e8,
    verify_veronese,
)
from surfext.formpull.examples import hypersurface_relation

PRIMES = [2, 3, 5, 7]
seeds = st.integers(0, 2**32 - 1).map(random.Random)


def ring(p, names="uvw"):
    return Ring.of(p, tuple(names))


def gens(r):
    return tuple(RatFunc.var(r, n) for n in r.names)


def random_poly(rng, r, terms=4, deg=3):
    return Poly(r, {tuple(rng.randint(0, deg) for _ in r.names): rng.randrange(r.p) for _ in range(terms)})


def random_ratfunc(rng, r):
    # small on purpose: the gcd is a plain pseudo-remainder sequence
    den = random_poly(rng, r, terms=2, deg=2)
    if not den:
        den = r.one()
    return RatFunc(random_poly(rng, r, terms=3, deg=2), den)


def to_sympy(f, symbols):
    return sympy.Poly.from_dict(dict(f.terms), *symbols, modulus=f.ring.p)


def sympy_monic_terms(g, p):
    if g.is_zero:
        return {}
    terms = {e: int(c) % p for e, c in g.as_dict().items()}
    lead = terms[max(terms)]
    inv = pow(lead, -1, p)
    return {e: c * inv % p for e, c in terms.items() if c * inv % p}


# polynomial layer


@settings(max_examples=80, deadline=None)
@given(seeds, st.sampled_from(PRIMES))
def test_gcd_matches_sympy(rng, p):
    r = ring(p, "xy")
    common = random_poly(rng, r, terms=2, deg=2)
    a = random_poly(rng, r) * common
    b = random_poly(rng, r) * common
    if not a or not b:
        return
    symbols = sympy.symbols("x y")
    expected = sympy_monic_terms(sympy.gcd(to_sympy(a, symbols), to_sympy(b, symbols)), p)
    assert gcd(a, b).terms == expected


def test_ratfunc_lowest_terms():
    r = ring(3, "xy")
    x, y = r.gens()
    f = RatFunc((x + y) * (x - 1), (x + y) * 2)
    assert f.num == (x - 1) * 2 and f.den == r.one()  # monic denominator absorbs 2^-1 = 2
    assert RatFunc(x * y, x * y) == 1


def test_frobenius_kills_derivatives():
    r = ring(5, "xy")
    x, y = gens(r)
    f = x ** 2 * y + 3 * y ** 4
    assert differential(f ** 5) == LogForm(r)


# differentials


def test_differential_examples():
    u, v, w = gens(ring(2))
    assert differential(u ** 2) == LogForm(u.ring)
    assert differential(w ** 2 / (u * (u + 1))) == LogForm(u.ring, {"u": w ** 2 / (u * (u + 1)) ** 2})
    r3 = ring(3, "uv")
    a, b = gens(r3)
    assert differential(a * b ** 3) == LogForm(r3, {"u": b ** 3})


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(PRIMES))
def test_leibniz_and_linearity(rng, p):
    r = ring(p)
    f, g = random_ratfunc(rng, r), random_ratfunc(rng, r)
    c = rng.randrange(p)
    assert differential(f * g) == differential(f).scaled(g) + differential(g).scaled(f)
    assert differential(f + g * c) == differential(f) + differential(g).scaled(RatFunc.const(r, c))
    assert differential(f ** p) == LogForm(r)


# pullbacks


def test_pullback_example_char_2():
    amb = ring(2, "xyz")
    x, y, _ = gens(amb)
    u, v, w = gens(ring(2))
    phi = {"x": u ** 2 * v ** 5, "y": u * v ** 3, "z": u ** 2 * v ** 7 * w}
    assert pullback(phi, LogForm(amb, {"x": y ** -4})) == LogForm(u.ring, {"v": u ** -2 * v ** -8})


def test_identity_pullback():
    r = ring(7)
    ident = {n: RatFunc.var(r, n) for n in r.names}
    u, v, w = gens(r)
    form = LogForm(r, {"u": v / w, "w": u ** -3})
    assert pullback(ident, form) == form


def random_monomial_map(rng, src, dst):
    out = {}
    for n in src.names:
        img = RatFunc.const(dst, rng.randrange(1, dst.p))
        for g in gens(dst):
            img = img * g ** rng.randint(-2, 3)
        out[n] = img
    return out


@settings(max_examples=60, deadline=None)
@given(seeds, st.sampled_from(PRIMES))
def test_pullback_functorial(rng, p):
    a, b, c = ring(p, "xyz"), ring(p, "uvw"), ring(p, "rst")
    f, g = random_monomial_map(rng, a, b), random_monomial_map(rng, b, c)
    form = LogForm(a, {n: RatFunc(random_poly(rng, a)) for n in a.names if rng.random() < 0.7})
    try:
        two_step = pullback(g, pullback(f, form), c)
        direct = pullback(compose(f, g, c), form, c)
    except PoleOnSubstitution:
        return
    assert two_step == direct


def test_pullback_commutes_with_d():
    df, d_of_pulled = hypersurface_relation(3)
    assert df == d_of_pulled


def test_substitution_into_pole():
    r = ring(3, "uv")
    u, v = gens(r)
    with pytest.raises(PoleOnSubstitution):
        substitute(1 / (u - v), {"u": v, "v": v}, r)


# pole orders


def test_pole_orders():
    u, v, w = gens(ring(5))
    assert pole_order_along(LogForm(u.ring, {"w": w ** -1}), "w").verdict == LOGARITHMIC
    assert pole_order_along(LogForm(u.ring, {"u": u * w}), "w").verdict == REGULAR
    worse = pole_order_along(LogForm(u.ring, {"u": w ** -1}), "w")
    assert worse.verdict == WORSE and worse.pole_order == 1
    two = pole_order_along(LogForm(u.ring, {"w": w ** -2, "v": w ** -1}), "w")
    assert two.pole_order == 2 and two.orders == {"u": None, "v": -1, "w": -2}


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_pole_order_is_max_over_coefficients(rng):
    r = ring(3)
    a, b = random_ratfunc(rng, r), random_ratfunc(rng, r)
    fa = pole_order_along(LogForm(r, {"u": a}), "w").pole_order
    fb = pole_order_along(LogForm(r, {"v": b}), "w").pole_order
    assert pole_order_along(LogForm(r, {"u": a, "v": b}), "w").pole_order == max(fa, fb)


# worked counterexamples


@pytest.mark.parametrize("p", [2, 3, 5])
def test_e8_pullback(p):
    rep = verify_e8(p)
    assert rep.passed
    assert (rep.gamma, rep.alpha, rep.beta) == E8_EXPECTED[p]
    assert rep.poles.pole_order == rep.gamma > 1
    assert rep.poles.verdict == WORSE
    assert rep.scalar == (2 if p == 5 else 1)


def test_e8_rejects_other_primes():
    with pytest.raises(ValueError):
        verify_e8(7)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 11])
def test_veronese(p):
    rep = verify_veronese(p)
    assert rep.passed
    assert rep.log_form_compatible and not rep.regular_form_compatible


# cone parameters


def test_cone_parameter_examples():
    cy = cone_params("calabi-yau", 5, 7)
    assert cy.degree == 1 and cy.cone_discrepancy == -1 and cy.cone_class == "lc"
    fano = cone_params("fano", 12, 7)
    assert fano.degree == 1 and fano.cone_discrepancy == 0
    sq = cone_params("fano-sqrt", 19, 7)
    assert sq.degree == 1 and sq.cone_discrepancy == 1 and sq.cone_class == "terminal"
    assert sq.to_dict()["L"] == "O(3)"


def test_cone_parameter_rejections():
    with pytest.raises(InfeasibleParameters, match="2p - 2 = 12"):
        cone_params("fano", 4, 7)
    with pytest.raises(ValueError):
        cone_params("fano", 20, 4)
    with pytest.raises(ValueError):
        cone_params("nope", 20, 5)


@given(st.sampled_from(["fano", "fano-sqrt", "calabi-yau"]), st.sampled_from([2, 3, 5, 7, 11, 13]),
       st.integers(0, 30))
def test_cone_discrepancy_by_case(case, p, extra):
    lower = {"fano": 2 * p - 2, "fano-sqrt": 3 * p - 2, "calabi-yau": p - 2}[case]
    n = max(2, lower) + extra
    k = cone_params(case, n, p)
    assert k.degree >= 1
    assert k.canonical_plus_p_minus_1 == k.degree - n - 2 + k.twist * (p - 1)
    assert k.cone_discrepancy == {"fano": 0, "fano-sqrt": 1, "calabi-yau": -1}[case]
    assert k.canonical_plus_p - k.canonical_plus_p_minus_1 == k.twist
