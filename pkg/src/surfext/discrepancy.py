"""Discrepancies, Cartier indices and the different on a dual graph.

All discrepancies are computed by Mumford's numerical pullback: the
coefficients a_i are the unique rationals with

    (K_Y + D_Y - sum a_i F_i) . F_j = 0    for every exceptional F_j,

where D_Y is the strict transform of the (reduced) boundary.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import RationalMatrix, SingularMatrixError, det, lcm_of_denominators, solve
from .dualgraph import DualGraph, intersection_matrix, is_negative_definite


class LatticeError(ValueError):
    """The exceptional lattice is not negative definite; no contraction exists."""


class NotLogCanonical(ValueError):
    pass


class SingClass(str, Enum):
    TERMINAL = "terminal"
    CANONICAL = "canonical"
    KLT = "klt"
    LC = "lc-not-klt"
    NOT_LC = "not-lc"

    def __str__(self):
        return self.value

    @property
    def is_lc(self) -> bool:
        return self is not SingClass.NOT_LC


@dataclass(frozen=True)
class DiscrepancyPartition:
    """Exceptional curves sorted by discrepancy: = -1, in (-1, 0), = 0, > 0.

    ``e_lt_minus1`` collects curves below -1 and is empty for lc input.
    """

    e_minus1: frozenset
    e_gt_minus1: frozenset
    e_zero: frozenset
    e_gt0: frozenset
    e_lt_minus1: frozenset = frozenset()

    @property
    def contractible(self) -> frozenset:
        """Curves the factorization contracts (everything but discrepancy -1)."""
        return self.e_gt_minus1 | self.e_zero | self.e_gt0


@dataclass(frozen=True)
class DiscrepancyReport:
    values: dict
    sing_class: SingClass
    cartier_index_proxy: int
    partition: DiscrepancyPartition
    proxy_only: bool = False


def classify_values(values: Iterable[Fraction]) -> SingClass:
    vals = list(values)
    if all(a > 0 for a in vals):
        return SingClass.TERMINAL
    if all(a >= 0 for a in vals):
        return SingClass.CANONICAL
    if all(a > -1 for a in vals):
        return SingClass.KLT
    if all(a >= -1 for a in vals):
        return SingClass.LC
    return SingClass.NOT_LC


def partition_of(values: dict) -> DiscrepancyPartition:
    def pick(pred):
        return frozenset(k for k, a in values.items() if pred(a))

    return DiscrepancyPartition(
        e_minus1=pick(lambda a: a == -1),
        e_gt_minus1=pick(lambda a: -1 < a < 0),
        e_zero=pick(lambda a: a == 0),
        e_gt0=pick(lambda a: a > 0),
        e_lt_minus1=pick(lambda a: a < -1),
    )


def log_canonical_degrees(g: DualGraph) -> dict:
    """(K_Y + D_Y) . F_j for each exceptional curve (D_Y = boundary only)."""
    return {v: g.canonical_degree(v) + g.boundary_meeting(v) for v in g.ids}


def discrepancies(g: DualGraph) -> DiscrepancyReport:
    if len(g) and not is_negative_definite(g):
        raise LatticeError("intersection matrix is not negative definite")
    rhs = log_canonical_degrees(g)
    a = solve(intersection_matrix(g), [rhs[v] for v in g.ids]) if len(g) else []
    values = dict(zip(g.ids, a))
    return DiscrepancyReport(
        values=values,
        sing_class=classify_values(values.values()),
        cartier_index_proxy=lcm_of_denominators(values.values()),
        partition=partition_of(values),
        proxy_only=not g.is_rational_tree(),
    )


@dataclass(frozen=True)
class DeterminantCheck:
    value: int
    p: int
    ok: bool

    def __bool__(self):
        return self.ok


def tame_determinant_check(g: DualGraph, p: int) -> DeterminantCheck:
    """|det(E_i . E_j)| and whether p does not divide it."""
    d = abs(det(intersection_matrix(g))) if len(g) else Fraction(1)
    assert d.denominator == 1
    value = int(d)
    return DeterminantCheck(value, p, value % p != 0)


@dataclass(frozen=True)
class DifferentCoefficient:
    point: str
    coefficient: Fraction
    cartier_index: int


def different(m: int, snc_type: bool = False, point: str = "x") -> DifferentCoefficient:
    """Coefficient of the different at a point of a boundary component.

    At a point where two boundary components cross normally it is 1;
    at a plt point of Cartier index m it is 1 - 1/m.
    """
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"Cartier index must be a positive integer, got {m!r}")
    if snc_type:
        return DifferentCoefficient(point, Fraction(1), m)
    return DifferentCoefficient(point, 1 - Fraction(1, m), m)


# local analysis at the points of a partially contracted surface


@dataclass(frozen=True)
class LocalPoint:
    """Singularity of (Y_i, D_i) at the image of a contracted component."""

    component: tuple
    discrepancies: dict
    index_proxy: int
    smooth: bool
    branches: int
    on_boundary: bool
    dlt: bool

    def tame(self, p: int) -> bool:
        return self.dlt and self.index_proxy % p != 0

    @property
    def lambdas(self) -> dict:
        return {k: a + 1 for k, a in self.discrepancies.items()}


def blows_down_to_smooth_point(g: DualGraph, component: Sequence[str]) -> bool:
    """Whether ``component`` contracts to a smooth point (iterated Castelnuovo)."""
    ids = list(component)
    m = {(a, b): g.intersection(a, b) for a in ids for b in ids}
    genus = {a: g.vertex(a).genus for a in ids}
    alive = list(ids)
    while alive:
        pick = next((v for v in alive if m[v, v] == -1 and genus[v] == 0), None)
        if pick is None:
            return False
        alive.remove(pick)
        for a in alive:
            ma = m[a, pick]
            genus[a] += ma * (ma - 1) // 2
            for b in alive:
                m[a, b] += ma * m[b, pick]
    return True


def local_pair_discrepancies(state, component: Sequence[str]) -> dict:
    """Discrepancies of the contracted curves in ``component`` over (Y_i, D_i).

    ``state`` needs ``base`` (the DualGraph of Y) and ``contracted``.
    Solves sum_i lambda_i F_i . F_j = (K_Y + D_full) . F_j on the component,
    D_full being all exceptional curves plus the boundary; returns
    lambda_i - 1.
    """
    g: DualGraph = state.base
    comp = list(component)
    contracted = set(state.contracted)
    if not comp:
        raise ValueError("empty component")
    if not set(comp) <= contracted:
        raise ValueError(f"component contains uncontracted curves {sorted(set(comp) - contracted)}")
    if not g.is_connected(comp):
        raise ValueError("component is not connected")
    rhs = []
    for j in comp:
        full = sum(g.intersection(i, j) for i in g.ids)
        rhs.append(g.canonical_degree(j) + full + g.boundary_meeting(j))
    mat = RationalMatrix.from_rows([[g.intersection(i, j) for j in comp] for i in comp])
    try:
        lam = solve(mat, rhs)
    except SingularMatrixError:
        raise LatticeError(f"component {comp} is not contractible") from None
    return {v: l - 1 for v, l in zip(comp, lam)}


def analyze_point(state, component: Sequence[str]) -> LocalPoint:
    g: DualGraph = state.base
    comp = tuple(component)
    a = local_pair_discrepancies(state, comp)
    survivors = [v for v in g.ids if v not in set(state.contracted)]
    touching = [v for v in survivors if any(g.multiplicity(v, c) for c in comp)]
    touching_bd = [b.id for b in g.boundary if any(b.meets.get(c, 0) for c in comp)]
    branches = len(touching) + len(touching_bd)
    smooth = blows_down_to_smooth_point(g, comp)
    vals = list(a.values())
    if smooth:
        dlt = all(x >= -1 for x in vals) and (all(x > -1 for x in vals) or branches >= 2)
    else:
        dlt = all(x > -1 for x in vals)
    return LocalPoint(
        component=comp,
        discrepancies=a,
        index_proxy=1 if smooth else lcm_of_denominators(vals),
        smooth=smooth,
        branches=branches,
        on_boundary=branches > 0,
        dlt=dlt,
    )


def is_prime(p: int) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    k = 2
    while k * k <= p:
        if p % k == 0:
            return False
        k += 1
    return True


def require_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p!r} is not a prime")

