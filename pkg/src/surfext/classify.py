"""Structural classification of log canonical resolution graphs.

Minimal resolutions of reduced lc surface pairs over an algebraically closed
field come in seven shapes (simple elliptic, cusp, Z/2-quotient of a cusp or
simple elliptic point, other quotients of a simple elliptic point, cyclic,
dihedral and other quotients of a smooth point).  The class names are
labels only; in small characteristic they need not describe the actual
singularity.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .discrepancy import LatticeError, NotLogCanonical, SingClass, discrepancies, require_prime
from .dualgraph import DualGraph

SIMPLE_ELLIPTIC = "simple-elliptic"
CUSP = "cusp"
Z2_QUOTIENT = "z2-quotient-cusp-or-elliptic"
ELLIPTIC_QUOTIENT = "other-quotient-simple-elliptic"
CYCLIC = "cyclic"
DIHEDRAL = "dihedral"
SMOOTH_QUOTIENT = "other-quotient-smooth"

ELLIPTIC_TRIPLES = {(3, 3, 3), (2, 4, 4), (2, 3, 6)}
SMOOTH_TRIPLES = {(2, 3, 3), (2, 3, 4), (2, 3, 5)}

CASE_NUMBER = {
    SIMPLE_ELLIPTIC: 1,
    CUSP: 2,
    Z2_QUOTIENT: 3,
    ELLIPTIC_QUOTIENT: 4,
    CYCLIC: 5,
    DIHEDRAL: 6,
    SMOOTH_QUOTIENT: 7,
}


def chain_determinant(weights: Sequence[int]) -> int:
    """det of the chain with self-intersections -b_1, ..., -b_n (up to sign).

    Uses det(b_1..b_n) = b_1 det(b_2..b_n) - det(b_3..b_n).
    """
    ws = list(weights)
    if any((not isinstance(b, int)) or b < 2 for b in ws):
        raise ValueError(f"chain weights must be integers >= 2, got {ws}")
    prev, cur = 0, 1
    for b in reversed(ws):
        prev, cur = cur, b * cur - prev
    return cur


@dataclass(frozen=True)
class LcClass:
    tag: str
    data: dict = field(default_factory=dict)

    @property
    def case(self) -> int:
        return CASE_NUMBER[self.tag]


@dataclass(frozen=True)
class Rejection:
    reason: str
    suggestion: str | None = None

    def __bool__(self):
        return False


def _neighbors(g: DualGraph, v: str) -> list[str]:
    return g.neighbors(v)


def _walk_chain(g: DualGraph, start: str, came_from: str | None, allowed: set | None = None) -> list[str]:
    """Follow a path from ``start`` away from ``came_from`` until it ends or forks."""
    path = [start]
    prev, cur = came_from, start
    while True:
        nxt = [n for n in _neighbors(g, cur) if n != prev and (allowed is None or n in allowed)]
        if len(nxt) != 1:
            return path
        prev, cur = cur, nxt[0]
        path.append(cur)


def _weights(g: DualGraph, ids: Sequence[str]) -> list[int]:
    return [-g.vertex(v).self_intersection for v in ids]


def _boundary_incidence(g: DualGraph) -> list[tuple[str, dict]]:
    return [(b.id, dict(b.meets)) for b in g.boundary]


def fork_branches(g: DualGraph, fork: str) -> list[list[str]]:
    """Branches at ``fork`` in a rational tree, each listed from the fork outward."""
    return [_walk_chain(g, n, fork) for n in _neighbors(g, fork)]


def is_e8_graph(g: DualGraph) -> bool:
    """Dynkin E8 configuration of rational (-2)-curves without boundary."""
    if len(g) != 8 or g.boundary or not g.is_rational_tree() or not g.is_connected():
        return False
    if any(v.self_intersection != -2 for v in g.vertices):
        return False
    forks = [v for v in g.ids if len(_neighbors(g, v)) >= 3]
    if len(forks) != 1 or len(_neighbors(g, forks[0])) != 3:
        return False
    return sorted(len(b) for b in fork_branches(g, forks[0])) == [1, 2, 4]


def _expect(values: dict, ids, pred, what: str) -> str | None:
    bad = [v for v in ids if not pred(values[v])]
    return None if not bad else f"discrepancy signature mismatch: {bad[0]} should have {what}"


def classify_lc_graph(g: DualGraph) -> LcClass | Rejection:
    try:
        rep = discrepancies(g)
    except LatticeError:
        return Rejection("intersection matrix is not negative definite")
    if not rep.sing_class.is_lc:
        raise NotLogCanonical(f"pair is {rep.sing_class}")
    a = rep.values
    if len(g) == 0:
        return Rejection("empty exceptional set")
    if not g.is_connected():
        return Rejection("graph is not connected (not the resolution of a single point)")

    # genus
    if any(v.genus for v in g.vertices):
        if len(g) == 1 and g.vertices[0].genus == 1 and not g.boundary:
            return LcClass(SIMPLE_ELLIPTIC, {"curve": g.ids[0]})
        return Rejection("curves of positive genus occur only as a single elliptic curve without boundary")

    minus_one = [v.id for v in g.vertices if v.self_intersection == -1]
    if minus_one:
        return Rejection(
            f"rational (-1)-curve {minus_one[0]} present: resolution is not minimal",
            "blow down the (-1)-curves first (mmp.contract) and classify the result",
        )

    for bid, meets in _boundary_incidence(g):
        if len(meets) != 1 or list(meets.values())[0] != 1:
            return Rejection(f"boundary {bid} must meet exactly one curve transversally once")

    # cusp: a cycle of rational curves
    n_edges = sum(g.edges.values())
    if len(g) >= 2 and n_edges == len(g) and all(
        sum(g.multiplicity(v, w) for w in g.ids if w != v) == 2 for v in g.ids
    ):
        if g.boundary:
            return Rejection("cusp graphs carry no boundary")
        if len(g) > 2 and any(m > 1 for m in g.edges.values()):
            return Rejection("cycle with a multiple edge")
        msg = _expect(a, g.ids, lambda x: x == -1, "discrepancy -1")
        if msg:
            return Rejection(msg)
        return LcClass(CUSP, {"cycle": list(g.ids), "weights": _weights(g, g.ids)})

    if not g.is_rational_tree():
        return Rejection("graph is neither a cycle nor a tree of rational curves")

    valence = {v: len(_neighbors(g, v)) for v in g.ids}
    forks = [v for v in g.ids if valence[v] >= 3]
    bd_at = [list(meets)[0] for _, meets in _boundary_incidence(g)]

    if not forks:
        return _classify_chain(g, a, bd_at)
    if len(forks) == 1 and valence[forks[0]] == 4:
        return _classify_z2(g, a, forks, bd_at)
    if len(forks) == 2:
        return _classify_z2(g, a, forks, bd_at)
    if len(forks) == 1 and valence[forks[0]] == 3:
        return _classify_fork(g, a, forks[0], bd_at)
    return Rejection(f"fork structure not in any lc class ({len(forks)} forks)")


def _classify_chain(g: DualGraph, a: dict, bd_at: list[str]) -> LcClass | Rejection:
    ends = [v for v in g.ids if len(_neighbors(g, v)) <= 1]
    chain = _walk_chain(g, ends[0], None)
    # a boundary meeting the fork-free chain at an interior vertex may be a dihedral shape
    ends_set = {chain[0], chain[-1]}
    if len(bd_at) == 1 and bd_at[0] not in ends_set:
        return _classify_dihedral_boundary(g, a, bd_at[0])
    if len(bd_at) > 2:
        return Rejection("a cyclic quotient has at most two boundary curves")
    if any(v not in ends_set for v in bd_at):
        return Rejection("boundary must meet the ends of the chain")
    if len(bd_at) == 2 and len(chain) > 1 and bd_at[0] == bd_at[1]:
        return Rejection("two boundary curves at the same end of a chain")
    if len(bd_at) == 1 and bd_at[0] != chain[0]:
        chain = chain[::-1]
    if len(bd_at) == 2:
        msg = _expect(a, chain, lambda x: x == -1, "discrepancy -1")
    else:
        msg = _expect(a, chain, lambda x: x > -1, "discrepancy > -1")
    if msg:
        return Rejection(msg)
    w = _weights(g, chain)
    return LcClass(CYCLIC, {
        "chain": chain,
        "weights": w,
        "boundary_count": len(bd_at),
        "determinant": chain_determinant(w),
    })


def _classify_dihedral_boundary(g: DualGraph, a: dict, at: str) -> LcClass | Rejection:
    # fork meets the boundary directly: (-2) - F - (-2) with D through F
    nb = _neighbors(g, at)
    if len(g) == 3 and len(nb) == 2 and all(
        g.vertex(x).self_intersection == -2 and len(_neighbors(g, x)) == 1 for x in nb
    ):
        return _dihedral_result(g, a, at, nb, [at], True)
    return Rejection("boundary meets an interior curve of a chain")


def _dihedral_result(g, a, fork, leaves, spine, with_boundary) -> LcClass | Rejection:
    if with_boundary:
        msg = _expect(a, spine, lambda x: x == -1, "discrepancy -1") or _expect(
            a, leaves, lambda x: x > -1, "discrepancy > -1")
    else:
        msg = _expect(a, g.ids, lambda x: x > -1, "discrepancy > -1")
    if msg:
        return Rejection(msg)
    return LcClass(DIHEDRAL, {
        "fork": fork,
        "leaves": list(leaves),
        "spine": list(spine),
        "weights": _weights(g, spine),
        "boundary": with_boundary,
    })


def _classify_z2(g: DualGraph, a: dict, forks: list[str], bd_at: list[str]) -> LcClass | Rejection:
    if bd_at:
        return Rejection("boundary-decorated Z/2-quotient shapes are not supported")
    leaves = []
    for f in forks:
        lv = [n for n in _neighbors(g, f) if len(_neighbors(g, n)) == 1]
        need = 4 if len(forks) == 1 else 2
        if len(lv) < need or len(_neighbors(g, f)) != (4 if len(forks) == 1 else 3):
            return Rejection(f"fork {f} does not carry the required (-2)-leaves")
        lv = [x for x in lv if g.vertex(x).self_intersection == -2][:need]
        if len(lv) < need:
            return Rejection(f"leaves at fork {f} must be (-2)-curves")
        leaves += lv
    spine = [v for v in g.ids if v not in leaves]
    if len(forks) == 2:
        sub = set(spine)
        path = _walk_chain(g, forks[0], None, sub)
        if set(path) != sub or path[-1] != forks[1]:
            return Rejection("the two forks must be joined by a chain")
        spine = path
    msg = _expect(a, spine, lambda x: x == -1, "discrepancy -1") or _expect(
        a, leaves, lambda x: x > -1, "discrepancy > -1")
    if msg:
        return Rejection(msg)
    return LcClass(Z2_QUOTIENT, {"chain": spine, "leaves": leaves, "weights": _weights(g, spine)})


def _classify_fork(g: DualGraph, a: dict, fork: str, bd_at: list[str]) -> LcClass | Rejection:
    branches = fork_branches(g, fork)
    dets = [chain_determinant(_weights(g, b)) for b in branches]
    two_leaves = [b for b in branches if len(b) == 1 and g.vertex(b[0]).self_intersection == -2]

    if bd_at:
        if len(bd_at) != 1:
            return Rejection("dihedral shapes carry at most one boundary curve")
        if len(two_leaves) < 2:
            return Rejection("a fork with boundary needs two (-2)-leaves")
        leaves = [two_leaves[0][0], two_leaves[1][0]]
        tail = next(b for b in branches if b[0] not in leaves)
        if bd_at[0] != tail[-1]:
            return Rejection("boundary must meet the far end of the dihedral chain")
        return _dihedral_result(g, a, fork, leaves, [fork] + tail, True)

    if len(two_leaves) >= 2:
        leaves = [two_leaves[0][0], two_leaves[1][0]]
        tail = next(b for b in branches if b[0] not in leaves)
        return _dihedral_result(g, a, fork, leaves, [fork] + tail, False)

    triple = tuple(sorted(dets))
    data = {"fork": fork, "branches": branches, "triple": triple}
    if triple in ELLIPTIC_TRIPLES:
        msg = _expect(a, [fork], lambda x: x == -1, "discrepancy -1")
        return Rejection(msg) if msg else LcClass(ELLIPTIC_QUOTIENT, data)
    if triple in SMOOTH_TRIPLES:
        msg = _expect(a, g.ids, lambda x: x > -1, "discrepancy > -1")
        return Rejection(msg) if msg else LcClass(SMOOTH_QUOTIENT, data)
    return Rejection(f"branch determinant triple {triple} matches no lc class")


# rationale


@dataclass(frozen=True)
class Rationale:
    tag: str
    case: int
    route: str
    p: int
    certified: bool
    blocked_by: tuple = ()
    citations: tuple = ()
    notes: tuple = ()


def _leaf_subchain_dets(g: DualGraph, branch: Sequence[str]) -> list[int]:
    """Determinants of the subchains contracted when a branch is eaten from its leaf."""
    w = _weights(g, branch)
    return [chain_determinant(w[k:]) for k in range(len(w) - 1, -1, -1)]


def main_lc_rationale(g: DualGraph, p: int) -> Rationale:
    require_prime(p)
    cls = classify_lc_graph(g)
    if isinstance(cls, Rejection):
        raise ValueError(f"graph is not classified: {cls.reason}")
    tag, case = cls.tag, cls.case

    def ok(route, cites, notes=()):
        return Rationale(tag, case, route, p, True, (), tuple(cites), tuple(notes))

    def blocked(route, dets, cites):
        bad = sorted({d for d in dets if d % p == 0})
        if not bad:
            return ok(route, cites, (f"contracted subchain determinants {sorted(set(dets))} are prime to {p}",))
        return Rationale(tag, case, route, p, False,
                         tuple(f"det {d} divisible by p = {p}" for d in bad), tuple(cites))

    if tag in (SIMPLE_ELLIPTIC, CUSP):
        return ok("tame (r = 0)", ["tame-resolution-suffices"],
                  ("no curve of discrepancy > -1, nothing is contracted",))
    if tag == Z2_QUOTIENT:
        return blocked("tame", [2] * 4, ["tame-resolution-suffices", "z2-quotient-index-2"])
    if tag == CYCLIC:
        return ok("lift-elem direct", ["lifting-along-nonpositive-map"],
                  ("deg(K_P + P^c) is -1 at leaves and 0 elsewhere: no fork",))
    if tag == DIHEDRAL:
        if cls.data["boundary"]:
            return blocked("tame (r = 2)", [2, 2], ["tame-resolution-suffices"])
        r = blocked("prescribed order then lift-elem", [2, 2],
                    ["lifting-along-nonpositive-map", "different-plt-point"])
        if r.certified:
            r = Rationale(tag, case, r.route, p, True, (), r.citations, (
                "contract the two (-2)-leaves first",
                "fork degree deg(K_P + P^c) <= -2 + 1 + 1/2 + 1/2 = 0",
            ))
        return r
    dets = [d for b in cls.data["branches"] for d in _leaf_subchain_dets(g, b)]
    return blocked("tame", dets, ["tame-resolution-suffices", "chain-determinant-bound"])
