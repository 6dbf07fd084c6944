"""Named dual graphs used throughout the tests and scripts."""
from __future__ import annotations

from typing import Sequence

from .dualgraph import BoundaryCurve, DualGraph


def chain(weights: Sequence[int], boundary_ends: int = 0, prefix: str = "E") -> DualGraph:
    """Chain of rational curves with self-intersections ``-w`` for w in weights.

    ``boundary_ends`` = 1 attaches a boundary curve to the first curve,
    2 attaches one to each end.
    """
    ids = [f"{prefix}{i + 1}" for i in range(len(weights))]
    curves = [(i, -w) for i, w in zip(ids, weights)]
    edges = [(a, b) for a, b in zip(ids, ids[1:])]
    boundary = {}
    if boundary_ends >= 1:
        boundary["D1"] = {ids[0]: 1}
    if boundary_ends >= 2:
        if len(ids) == 1:
            boundary["D2"] = {ids[0]: 1}
        else:
            boundary["D2"] = {ids[-1]: 1}
    return DualGraph.build(curves, edges, boundary)


def a_n(n: int) -> DualGraph:
    return chain([2] * n)


def star(arms: Sequence[Sequence[int]], center_weight: int = 2, boundary: dict | None = None) -> DualGraph:
    """A fork ``C`` with chains attached; each arm is listed from the fork outward.

    Arm ``k`` gets ids ``A{k}_1, A{k}_2, ...``.
    """
    curves = [("C", -center_weight)]
    edges = []
    for k, arm in enumerate(arms, start=1):
        prev = "C"
        for j, w in enumerate(arm, start=1):
            vid = f"A{k}_{j}"
            curves.append((vid, -w))
            edges.append((prev, vid))
            prev = vid
    return DualGraph.build(curves, edges, boundary)


def d_n(n: int) -> DualGraph:
    """D_n Dynkin graph of (-2)-curves, n >= 4: fork with two leaves and a tail."""
    if n < 4:
        raise ValueError("D_n needs n >= 4")
    return star([[2], [2], [2] * (n - 3)])


def e_n(n: int) -> DualGraph:
    """E6, E7, E8: fork with arms of length 1, 2, n - 4."""
    if n not in (6, 7, 8):
        raise ValueError("E_n only for n = 6, 7, 8")
    return star([[2], [2, 2], [2] * (n - 4)])


def e8() -> DualGraph:
    return e_n(8)


def cycle(weights: Sequence[int]) -> DualGraph:
    """Cycle of rational curves (cusp graph); two curves meet twice when n = 2."""
    n = len(weights)
    if n < 2:
        raise ValueError("a cycle needs at least two curves")
    ids = [f"E{i + 1}" for i in range(n)]
    curves = [(i, -w) for i, w in zip(ids, weights)]
    edges = [(ids[i], ids[(i + 1) % n]) for i in range(n)]
    return DualGraph.build(curves, edges)


def elliptic(degree: int = 1) -> DualGraph:
    """Single elliptic curve of self-intersection ``-degree``."""
    return DualGraph.build([("E", -degree, 1)])


def veronese(p: int, with_boundary: bool = False) -> DualGraph:
    """Minimal resolution of the p-th Veronese cone: one rational (-p)-curve.

    With ``with_boundary`` a smooth boundary curve meets it transversally once.
    """
    return DualGraph.build([("E", -p)], (), {"D": {"E": 1}} if with_boundary else None)


def z2_quotient(chain_weights: Sequence[int]) -> DualGraph:
    """Chain of curves with two (-2)-leaves hanging off each end."""
    ids = [f"E{i + 1}" for i in range(len(chain_weights))]
    curves = [(i, -w) for i, w in zip(ids, chain_weights)]
    edges = list(zip(ids, ids[1:]))
    for k, end in enumerate((ids[0], ids[0], ids[-1], ids[-1]), start=1):
        curves.append((f"L{k}", -2))
        edges.append((end, f"L{k}"))
    return DualGraph.build(curves, edges)


def dihedral(tail_weights: Sequence[int], fork_weight: int = 2, with_boundary: bool = False) -> DualGraph:
    """Fork with two (-2)-leaves and a chain; optionally a boundary at the chain's far end.

    With ``with_boundary`` and an empty tail, the boundary meets the fork itself.
    """
    g = star([[2], [2], list(tail_weights)], center_weight=fork_weight)
    if not with_boundary:
        return g
    far = f"A3_{len(tail_weights)}" if tail_weights else "C"
    return add_boundary(g, "D", {far: 1})


def add_boundary(g: DualGraph, bid: str, meets: dict) -> DualGraph:
    return DualGraph(g.vertices, g.edges, g.boundary + (BoundaryCurve(bid, meets),))
