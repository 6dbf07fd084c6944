"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line and then asserts, so the
summary is visible in a plain ``pytest -v`` run.
"""
import random
import time
from fractions import Fraction as Q
from itertools import product

import pytest

from graphgen import random_center, random_definite_graph, random_lc_graph
from oracles import (
    chain_matrix,
    cofactor_det,
    graph_matrix,
    oracle_discrepancies,
    oracle_log_degree,
    oracle_negative_definite,
)
from surfext import catalog
from surfext.classify import (
    CUSP,
    CYCLIC,
    DIHEDRAL,
    SIMPLE_ELLIPTIC,
    SMOOTH_QUOTIENT,
    Z2_QUOTIENT,
    LcClass,
    chain_determinant,
    classify_lc_graph,
)
from surfext.discrepancy import discrepancies, tame_determinant_check
from surfext.dualgraph import blowup, determinant, is_negative_definite
from surfext.formpull import LogForm, RatFunc, Ring, cone_params, pullback, verify_e8, verify_veronese
from surfext.formpull.cones import InfeasibleParameters
from surfext.mmp import (
    FAILS,
    HOLDS,
    UNKNOWN,
    ContractionState,
    admissible_full_orders,
    contract,
    extension_verdict,
    find_tame_order,
    is_admissible,
)


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_e8_pole_orders(verdict):
    t0 = time.perf_counter()
    expected = {2: (14, 4, 6), 3: (9, 2, 4), 5: (5, 1, 2)}
    problems = []
    for p, (gamma, alpha, beta) in expected.items():
        rep = verify_e8(p)
        chart = rep.coefficient.ring
        u, w = RatFunc.var(chart, "u"), RatFunc.var(chart, "w")
        shape = u ** alpha * (u + 1) ** beta / w ** gamma
        ratio = rep.coefficient / shape
        if not (ratio.is_constant() and ratio.constant_value() != 0):
            problems.append(f"p={p}: coefficient {rep.coefficient} is not a unit times {shape}")
        if rep.poles.pole_order != gamma or not rep.strict_transform_ok or not rep.passed:
            problems.append(f"p={p}: pole order {rep.poles.pole_order}, strict ok {rep.strict_transform_ok}")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 1.0
    verdict(1, ok, f"E8 pole orders (2,14) (3,9) (5,5) in {elapsed:.3f}s" + "; ".join([""] + problems))


def test_criterion_2_veronese(verdict):
    t0 = time.perf_counter()
    problems = []
    for p in (2, 3, 5, 7, 11):
        if discrepancies(catalog.veronese(p)).values != {"E": -1 + Q(2, p)}:
            problems.append(f"p={p}: discrepancy without boundary")
        if discrepancies(catalog.veronese(p, True)).values != {"E": -Q(p - 1, p)}:
            problems.append(f"p={p}: discrepancy with boundary")
        chk = tame_determinant_check(catalog.veronese(p), p)
        if chk or chk.value != p:
            problems.append(f"p={p}: determinant check should fail with det {p}")
    for p in (2, 7):
        rep = verify_veronese(p)
        if not rep.passed:
            problems.append(f"p={p}: chart compatibility")
        # second route: pull y1^-1 dy1 back by hand along (x1, y1) = (1/x0, x0^p y0)
        u0 = Ring.of(p, ("x0", "y0"))
        x0, y0 = RatFunc.var(u0, "x0"), RatFunc.var(u0, "y0")
        u1 = Ring.of(p, ("x1", "y1"))
        by_hand = pullback({"x1": x0 ** -1, "y1": x0 ** p * y0},
                           LogForm(u1, {"y1": RatFunc.var(u1, "y1") ** -1}), u0)
        if by_hand != LogForm(u0, {"y0": y0 ** -1}):
            problems.append(f"p={p}: hand pullback disagrees")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 1.0
    verdict(2, ok, f"Veronese discrepancies, charts over F_2 and F_7 in {elapsed:.3f}s" + "; ".join([""] + problems))


def test_criterion_3_e8_orders_and_verdicts(verdict):
    t0 = time.perf_counter()
    g = catalog.e8()
    problems = []
    if set(discrepancies(g).values.values()) != {0} or set(oracle_discrepancies(g).values()) != {0}:
        problems.append("discrepancies not all 0")
    if abs(determinant(g)) != 1 or abs(cofactor_det(graph_matrix(g))) != 1:
        problems.append("|det| != 1")
    if find_tame_order(g, 7, "exhaustive") is None:
        problems.append("no tame order at p=7")
    for p in (2, 3, 5):
        if find_tame_order(g, p, "exhaustive") is not None:
            problems.append(f"unexpected tame order at p={p}")
    v7, v5 = extension_verdict(g, 7), extension_verdict(g, 5)
    if (v7.log_ext_1forms, v7.reg_ext_1forms) != (HOLDS, HOLDS):
        problems.append(f"p=7 verdicts {v7.log_ext_1forms}, {v7.reg_ext_1forms}")
    if (v5.log_ext_1forms, v5.reg_ext_1forms) != (FAILS, UNKNOWN):
        problems.append(f"p=5 verdicts {v5.log_ext_1forms}, {v5.reg_ext_1forms}")
    elapsed = time.perf_counter() - t0
    ok = not problems and elapsed < 30
    verdict(3, ok, f"E8 tame order only at p=7, verdicts match, {elapsed:.2f}s" + "; ".join([""] + problems))


def test_criterion_4_blowup_invariance(verdict):
    rng = random.Random(20240)
    problems = []
    two_curve = 0
    for i in range(200):
        g = random_definite_graph(rng)
        center = random_center(rng, g)
        h = blowup(g, center, "NEW")
        if len(h) > 8:
            problems.append(f"#{i}: {len(h)} vertices")
        if abs(determinant(h)) != abs(determinant(g)):
            problems.append(f"#{i}: |det| changed")
        if not (is_negative_definite(h) and oracle_negative_definite(graph_matrix(h))):
            problems.append(f"#{i}: lost negative definiteness")
        old, new = oracle_discrepancies(g), discrepancies(h).values
        if any(new[v] != old[v] for v in g.ids):
            problems.append(f"#{i}: old discrepancy moved")
        if new["NEW"] != sum(r * old[v] for v, r in center.items()) + 1:
            problems.append(f"#{i}: new discrepancy {new['NEW']}")
        if len(center) == 2:
            two_curve += 1
            a, b = center
            if new["NEW"] != old[a] + old[b] + 1:
                problems.append(f"#{i}: a_new != a_a + a_b + 1")
    ok = not problems and two_curve >= 50
    verdict(4, ok, f"200 blowups ({two_curve} at a crossing) keep |det|, definiteness, discrepancies"
            + "; ".join([""] + problems[:5]))


def _maximal_orders(g):
    """Independent DFS: every maximal admissible order, full or not."""
    rep = discrepancies(g)
    protected, targets = rep.partition.e_minus1, rep.partition.contractible
    found = []

    def rec(state, steps):
        cands = [v for v in g.ids if v in targets and v not in state.contracted and is_admissible(state, v)]
        if not cands:
            found.append((state, steps))
            return
        for v in cands:
            nxt, step = contract(state, v)
            rec(nxt, steps + [step])

    rec(ContractionState(g, (), protected), [])
    return targets, found


def test_criterion_5_factorization_invariants(verdict):
    rng = random.Random(5150)
    problems = []
    orders = 0
    for i in range(100):
        g = random_lc_graph(rng)
        targets, found = _maximal_orders(g)
        for state, steps in found:
            orders += 1
            if set(state.contracted) != targets:
                problems.append(f"#{i}: dead end after {state.contracted}")
            if any(s.lam < 0 for s in steps):
                problems.append(f"#{i}: negative lambda along {state.contracted}")
            for v in state.surviving:
                if oracle_log_degree(g, list(state.contracted), v) != 0:
                    problems.append(f"#{i}: (K+D).{v} != 0 after {state.contracted}")
        if len(found) != len(admissible_full_orders(g)):
            problems.append(f"#{i}: order enumerations disagree")
    ok = not problems
    verdict(5, ok, f"100 lc graphs, {orders} full orders, lambda >= 0 and end degrees 0"
            + "; ".join([""] + problems[:5]))


def test_criterion_6_classification_goldens(verdict):
    problems = []

    def expect(name, g, tag, **data):
        res = classify_lc_graph(g)
        if not isinstance(res, LcClass) or res.tag != tag:
            problems.append(f"{name}: got {res}")
            return
        for k, v in data.items():
            if res.data.get(k) != v:
                problems.append(f"{name}: {k} = {res.data.get(k)}, want {v}")

    expect("elliptic", catalog.elliptic(1), SIMPLE_ELLIPTIC)
    expect("cusp", catalog.cycle([3, 3, 3]), CUSP)
    for k in (0, 1, 2):
        expect(f"chain with {k} boundary", catalog.chain([2, 3, 2], k), CYCLIC, boundary_count=k)
    expect("A5", catalog.a_n(5), CYCLIC)
    expect("two-fork shape", catalog.z2_quotient([3, 2]), Z2_QUOTIENT)
    expect("D6", catalog.d_n(6), DIHEDRAL)
    expect("dihedral with boundary", catalog.dihedral([3], with_boundary=True), DIHEDRAL)
    for n, triple in ((8, (2, 3, 5)), (7, (2, 3, 4)), (6, (2, 3, 3))):
        expect(f"E{n}", catalog.e_n(n), SMOOTH_QUOTIENT, triple=triple)
    chains = 0
    for n in range(1, 9):
        weights = product(range(2, 5), repeat=n) if n <= 5 else _sampled(n)
        for w in weights:
            chains += 1
            if chain_determinant(list(w)) != abs(cofactor_det(chain_matrix(list(w)))):
                problems.append(f"chain {w}: determinant mismatch")
    ok = not problems
    verdict(6, ok, f"class goldens and {chains} chain determinants" + "; ".join([""] + problems[:5]))


def _sampled(n, count=150):
    rng = random.Random(n)
    return [[rng.randint(2, 6) for _ in range(n)] for _ in range(count)]


def test_criterion_7_cone_ledger(verdict):
    problems = []
    primes = [2, 3, 5, 7, 11, 13, 17]
    formulas = {
        "fano": (lambda n, p: n - 2 * p + 3, 2, lambda p: 2 * p - 2),
        "fano-sqrt": (lambda n, p: n - 3 * p + 3, 3, lambda p: 3 * p - 2),
        "calabi-yau": (lambda n, p: n - p + 3, 1, lambda p: p - 2),
    }
    checked = 0
    for case, (d_of, c, bound_of) in formulas.items():
        pairs = []
        for p in primes:
            b = bound_of(p)
            pairs += [(n, p) for n in (b - 1, b, b + 1, b + 5) if n >= 2]
        pairs = pairs[:20]
        if len(pairs) != 20:
            problems.append(f"{case}: only {len(pairs)} pairs")
        for n, p in pairs:
            checked += 1
            feasible = n >= bound_of(p)
            try:
                k = cone_params(case, n, p)
            except InfeasibleParameters:
                if feasible:
                    problems.append(f"{case} n={n} p={p}: rejected")
                continue
            if not feasible:
                problems.append(f"{case} n={n} p={p}: accepted")
                continue
            d = d_of(n, p)
            kx = d - n - 2
            if (k.degree, k.twist) != (d, c):
                problems.append(f"{case} n={n} p={p}: d or twist")
            if k.canonical_plus_p_minus_1 != kx + c * (p - 1) or k.canonical_plus_p != kx + c * p:
                problems.append(f"{case} n={n} p={p}: degree identities")
    ok = not problems
    verdict(7, ok, f"{checked} (n, p) pairs across three cases" + "; ".join([""] + problems[:5]))


def test_criterion_8_documented_exclusion(verdict):
    # sheaf-level statements are out of scope; their numerical shadows are criteria 3 to 7
    verdict(8, True, "excluded by design: sheaf isomorphisms and cohomological nonvanishing are not computed")
