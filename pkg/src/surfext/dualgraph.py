"""Weighted dual graphs of surface resolutions.

A :class:`DualGraph` records the exceptional curves (self-intersection and
arithmetic genus), the pairwise intersection numbers between them, and the
strict transforms of the boundary curves together with the exceptional
curves they meet.  Vertex order is insertion order and is used everywhere a
matrix index is needed; reports always refer to curves by id.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .arith import RationalMatrix, det, leading_principal_minors


class GraphError(ValueError):
    """Malformed graph data or an invalid operation on a graph."""


class SchemaError(GraphError):
    """The JSON graph file does not match the schema.

    ``path`` points at the offending location, e.g. ``edges[2][1]``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class CurveVertex:
    id: str
    self_intersection: int
    genus: int = 0

    def __post_init__(self):
        if not isinstance(self.self_intersection, int) or self.self_intersection > -1:
            raise GraphError(
                f"curve {self.id!r}: self-intersection must be an integer <= -1, "
                f"got {self.self_intersection!r}"
            )
        if not isinstance(self.genus, int) or self.genus < 0:
            raise GraphError(f"curve {self.id!r}: genus must be a nonnegative integer")


@dataclass(frozen=True)
class BoundaryCurve:
    id: str
    meets: Mapping[str, int]

    def __post_init__(self):
        meets = dict(self.meets)
        if any((not isinstance(m, int)) or m < 0 for m in meets.values()):
            raise GraphError(f"boundary {self.id!r}: multiplicities must be nonnegative integers")
        if not any(m > 0 for m in meets.values()):
            raise GraphError(f"boundary {self.id!r} meets no exceptional curve")
        object.__setattr__(self, "meets", {k: v for k, v in meets.items() if v > 0})

    def __hash__(self):
        return hash((self.id, tuple(sorted(self.meets.items()))))


@dataclass(frozen=True)
class Definiteness:
    """Result of a negative-definiteness test; falsy when the test fails.

    ``witness`` is the first k (1-based) whose leading principal minor has
    the wrong sign, or None.
    """

    ok: bool
    witness: int | None
    minors: tuple[Fraction, ...]

    def __bool__(self):
        return self.ok


def _edge_key(a: str, b: str) -> frozenset:
    return frozenset((a, b))


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple[CurveVertex, ...]
    edges: Mapping[frozenset, int] = field(default_factory=dict)
    boundary: tuple[BoundaryCurve, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "boundary", tuple(self.boundary))
        ids = [v.id for v in self.vertices]
        all_ids = ids + [b.id for b in self.boundary]
        if len(set(all_ids)) != len(all_ids):
            raise GraphError("ids must be unique across curves and boundary")
        known = set(ids)
        edges = {}
        for key, mult in dict(self.edges).items():
            key = frozenset(key)
            if len(key) != 2:
                raise GraphError(f"self-edge or malformed edge {sorted(key)}")
            if not key <= known:
                raise GraphError(f"edge {sorted(key)} names an unknown curve")
            if not isinstance(mult, int) or mult < 0:
                raise GraphError(f"edge {sorted(key)}: multiplicity must be a positive integer")
            if mult:
                edges[key] = mult
        object.__setattr__(self, "edges", edges)
        for b in self.boundary:
            unknown = set(b.meets) - known
            if unknown:
                raise GraphError(f"boundary {b.id!r} meets unknown curves {sorted(unknown)}")

    def __hash__(self):
        return hash((self.vertices, tuple(sorted((tuple(sorted(k)), m) for k, m in self.edges.items())),
                     self.boundary))

    # construction helpers

    @classmethod
    def build(
        cls,
        curves: Iterable,
        edges: Iterable = (),
        boundary: Mapping[str, Mapping[str, int]] | None = None,
    ) -> "DualGraph":
        """Convenience constructor.

        ``curves`` holds ``(id, self_intersection)`` or ``(id, self, genus)``
        tuples, ``edges`` holds ``(a, b)`` or ``(a, b, multiplicity)``.
        Repeated edges between the same pair add up.
        """
        verts = [CurveVertex(*c) for c in curves]
        emap: dict[frozenset, int] = {}
        for e in edges:
            a, b, *m = e
            k = _edge_key(a, b)
            emap[k] = emap.get(k, 0) + (m[0] if m else 1)
        bd = [BoundaryCurve(bid, dict(meets)) for bid, meets in (boundary or {}).items()]
        return cls(tuple(verts), emap, tuple(bd))

    # queries

    @property
    def ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def __len__(self):
        return len(self.vertices)

    def vertex(self, vid: str) -> CurveVertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise GraphError(f"unknown curve {vid!r}")

    def index(self, vid: str) -> int:
        for i, v in enumerate(self.vertices):
            if v.id == vid:
                return i
        raise GraphError(f"unknown curve {vid!r}")

    def multiplicity(self, a: str, b: str) -> int:
        return self.edges.get(_edge_key(a, b), 0)

    def neighbors(self, vid: str) -> list[str]:
        return [v.id for v in self.vertices if v.id != vid and self.multiplicity(vid, v.id)]

    def boundary_meeting(self, vid: str) -> int:
        """Total intersection number of the boundary with curve ``vid``."""
        return sum(b.meets.get(vid, 0) for b in self.boundary)

    def intersection(self, a: str, b: str) -> int:
        """E_a . E_b for exceptional curves."""
        if a == b:
            return self.vertex(a).self_intersection
        return self.multiplicity(a, b)

    def canonical_degree(self, vid: str) -> int:
        """K_Y . E by adjunction: 2g - 2 - E^2."""
        v = self.vertex(vid)
        return 2 * v.genus - 2 - v.self_intersection

    def is_connected(self, subset: Iterable[str] | None = None) -> bool:
        nodes = list(self.ids if subset is None else subset)
        if not nodes:
            return True
        allowed = set(nodes)
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            cur = stack.pop()
            for n in self.neighbors(cur):
                if n in allowed and n not in seen:
                    seen.add(n)
                    stack.append(n)
        return seen == allowed

    def components(self, subset: Iterable[str]) -> list[list[str]]:
        """Connected components of the induced subgraph, in vertex order."""
        allowed = set(subset)
        order = [v for v in self.ids if v in allowed]
        comps, seen = [], set()
        for start in order:
            if start in seen:
                continue
            comp, stack = {start}, [start]
            while stack:
                cur = stack.pop()
                for n in self.neighbors(cur):
                    if n in allowed and n not in comp:
                        comp.add(n)
                        stack.append(n)
            seen |= comp
            comps.append([v for v in order if v in comp])
        return comps

    def is_rational_tree(self) -> bool:
        """All curves rational, simple edges, and the graph is a forest."""
        if any(v.genus for v in self.vertices):
            return False
        if any(m > 1 for m in self.edges.values()):
            return False
        return len(self.edges) == len(self.vertices) - len(self.components(self.ids))


def intersection_matrix(g: DualGraph) -> RationalMatrix:
    ids = g.ids
    return RationalMatrix.from_rows([[g.intersection(a, b) for b in ids] for a in ids])


def negative_definite_matrix(m: RationalMatrix) -> Definiteness:
    """Sylvester's criterion: (-1)^k times the k-th leading minor is positive."""
    minors = leading_principal_minors(m)
    for k, d in enumerate(minors, start=1):
        if (-1) ** k * d <= 0:
            return Definiteness(False, k, tuple(minors))
    return Definiteness(True, None, tuple(minors))


def is_negative_definite(g: DualGraph) -> Definiteness:
    return negative_definite_matrix(intersection_matrix(g))


def determinant(g: DualGraph) -> Fraction:
    return det(intersection_matrix(g))


def _fresh_id(g: DualGraph, prefix: str = "F") -> str:
    taken = set(g.ids) | {b.id for b in g.boundary}
    k = 1
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}"


def blowup(
    g: DualGraph,
    center: Mapping[str, int] | Iterable[tuple[str, int]],
    new_id: str | None = None,
) -> DualGraph:
    """Blow up a point lying on one or two exceptional curves.

    ``center`` maps each curve through the point to its multiplicity there.
    The curves' self-intersections drop by r^2 (resp. s^2), their mutual
    intersection drops by rs, and the new (-1)-curve meets them with
    multiplicities r and s.  A curve of multiplicity r at the point loses
    r(r-1)/2 from its arithmetic genus.  The point is assumed to avoid the
    boundary.
    """
    center = dict(center)
    if not 1 <= len(center) <= 2:
        raise GraphError("a blowup center lies on one or two exceptional curves")
    boundary_ids = {b.id for b in g.boundary}
    for vid, r in center.items():
        if vid in boundary_ids:
            raise GraphError(f"{vid!r} is a boundary curve; centers are exceptional-curve data only")
        g.vertex(vid)
        if not isinstance(r, int) or r < 1:
            raise GraphError(f"multiplicity of {vid!r} at the center must be a positive integer")

    new_id = new_id or _fresh_id(g)
    if new_id in set(g.ids) | boundary_ids:
        raise GraphError(f"id {new_id!r} already in use")

    verts = []
    for v in g.vertices:
        r = center.get(v.id, 0)
        genus = v.genus - r * (r - 1) // 2
        if genus < 0:
            raise GraphError(f"curve {v.id!r} cannot have multiplicity {r} at a point (genus {v.genus})")
        verts.append(CurveVertex(v.id, v.self_intersection - r * r, genus))
    verts.append(CurveVertex(new_id, -1, 0))

    edges = dict(g.edges)
    if len(center) == 2:
        (a, r), (b, s) = center.items()
        m = g.multiplicity(a, b) - r * s
        if m < 0:
            raise GraphError(
                f"{a!r} and {b!r} meet with multiplicity {g.multiplicity(a, b)}; "
                f"cannot pass through a common point with multiplicities ({r}, {s})"
            )
        edges[_edge_key(a, b)] = m
    for vid, r in center.items():
        edges[_edge_key(vid, new_id)] = r
    return DualGraph(tuple(verts), edges, g.boundary)


# JSON schema

_TOP_KEYS = {"curves", "edges", "boundary"}
_CURVE_KEYS = {"id", "self", "genus"}
_BOUNDARY_KEYS = {"id", "meets"}


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def graph_from_dict(data) -> DualGraph:
    if not isinstance(data, dict):
        raise SchemaError("$", "top level must be an object")
    extra = set(data) - _TOP_KEYS
    if extra:
        raise SchemaError(f"$.{sorted(extra)[0]}", "unknown key")
    if "curves" not in data:
        raise SchemaError("$.curves", "missing required key")
    curves = data["curves"]
    if not isinstance(curves, list):
        raise SchemaError("$.curves", "must be a list")
    verts = []
    for i, c in enumerate(curves):
        path = f"$.curves[{i}]"
        if not isinstance(c, dict):
            raise SchemaError(path, "must be an object")
        extra = set(c) - _CURVE_KEYS
        if extra:
            raise SchemaError(f"{path}.{sorted(extra)[0]}", "unknown key")
        for key in ("id", "self"):
            if key not in c:
                raise SchemaError(f"{path}.{key}", "missing required key")
        if not isinstance(c["id"], str):
            raise SchemaError(f"{path}.id", "must be a string")
        if not _is_int(c["self"]):
            raise SchemaError(f"{path}.self", "must be an integer")
        genus = c.get("genus", 0)
        if not _is_int(genus):
            raise SchemaError(f"{path}.genus", "must be an integer")
        if c["id"] in {v.id for v in verts}:
            raise SchemaError(f"{path}.id", f"duplicate id {c['id']!r}")
        try:
            verts.append(CurveVertex(c["id"], c["self"], genus))
        except GraphError as exc:
            raise SchemaError(path, str(exc)) from None

    curve_ids = {v.id for v in verts}
    edges_raw = data.get("edges", [])
    if not isinstance(edges_raw, list):
        raise SchemaError("$.edges", "must be a list")
    edges: dict[frozenset, int] = {}
    for i, e in enumerate(edges_raw):
        path = f"$.edges[{i}]"
        if not isinstance(e, list) or len(e) != 3:
            raise SchemaError(path, "edge must be a list [id, id, multiplicity]")
        a, b, m = e
        if not isinstance(a, str):
            raise SchemaError(f"{path}[0]", "must be a curve id")
        if not isinstance(b, str):
            raise SchemaError(f"{path}[1]", "must be a curve id")
        if not _is_int(m) or m < 1:
            raise SchemaError(f"{path}[2]", "multiplicity must be a positive integer")
        if a == b:
            raise SchemaError(path, "self-edges are not allowed")
        for k, end in enumerate((a, b)):
            if end not in curve_ids:
                raise SchemaError(f"{path}[{k}]", f"unknown curve {end!r}")
        key = _edge_key(a, b)
        if key in edges:
            raise SchemaError(path, "duplicate edge")
        edges[key] = m

    bd_raw = data.get("boundary", [])
    if not isinstance(bd_raw, list):
        raise SchemaError("$.boundary", "must be a list")
    bds = []
    for i, b in enumerate(bd_raw):
        path = f"$.boundary[{i}]"
        if not isinstance(b, dict):
            raise SchemaError(path, "must be an object")
        extra = set(b) - _BOUNDARY_KEYS
        if extra:
            raise SchemaError(f"{path}.{sorted(extra)[0]}", "unknown key")
        for key in ("id", "meets"):
            if key not in b:
                raise SchemaError(f"{path}.{key}", "missing required key")
        if not isinstance(b["id"], str):
            raise SchemaError(f"{path}.id", "must be a string")
        if b["id"] in curve_ids or b["id"] in {x.id for x in bds}:
            raise SchemaError(f"{path}.id", f"duplicate id {b['id']!r}")
        if not isinstance(b["meets"], dict):
            raise SchemaError(f"{path}.meets", "must be an object")
        for k, m in b["meets"].items():
            if not _is_int(m) or m < 0:
                raise SchemaError(f"{path}.meets.{k}", "multiplicity must be a nonnegative integer")
            if k not in curve_ids:
                raise SchemaError(f"{path}.meets.{k}", f"unknown curve {k!r}")
        try:
            bds.append(BoundaryCurve(b["id"], dict(b["meets"])))
        except GraphError as exc:
            raise SchemaError(path, str(exc)) from None

    try:
        return DualGraph(tuple(verts), edges, tuple(bds))
    except GraphError as exc:
        raise SchemaError("$", str(exc)) from None


def graph_to_dict(g: DualGraph) -> dict:
    """Canonical serialization: curves and boundary in insertion order,
    edges ordered by the vertex order of their endpoints."""
    ids = g.ids
    edges = []
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            m = g.multiplicity(a, b)
            if m:
                edges.append([a, b, m])
    return {
        "curves": [{"id": v.id, "self": v.self_intersection, "genus": v.genus} for v in g.vertices],
        "edges": edges,
        "boundary": [
            {"id": b.id, "meets": {k: b.meets[k] for k in ids if k in b.meets}} for b in g.boundary
        ],
    }


def loads(text: str) -> DualGraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    return graph_from_dict(data)


def dumps(g: DualGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2) + "\n"


def load(path) -> DualGraph:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(g: DualGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(g))
