"""Numerical simulation of the MMP factorization of a resolution.

A :class:`ContractionState` is the resolution graph together with the list
of curves contracted so far; the intermediate surface Y_i is never built
explicitly.  Intersection numbers on Y_i are obtained by Mumford pullback
to Y, and the singularities of (Y_i, D_i) are read off from the contracted
connected components (see :func:`surfext.discrepancy.analyze_point`).

The boundary D_i on Y_i is always the image of all exceptional curves plus
the strict transform of the original boundary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .arith import RationalMatrix, solve
from .dualgraph import DualGraph, negative_definite_matrix
from .discrepancy import (
    LatticeError,
    LocalPoint,
    NotLogCanonical,
    analyze_point,
    discrepancies,
    require_prime,
    tame_determinant_check,
)

EXHAUSTIVE_CAP = 14


class ContractionError(ValueError):
    """A contraction step violates its preconditions."""


class SearchCapError(RuntimeError):
    pass


# divisor classes on Y


@dataclass(frozen=True)
class CurveClass:
    """Q-linear combination of curves on Y, plus a multiple of K_Y."""

    curves: Mapping[str, Fraction] = field(default_factory=dict)
    canonical: Fraction = Fraction(0)

    @classmethod
    def of(cls, *ids: str) -> "CurveClass":
        out: dict[str, Fraction] = {}
        for i in ids:
            out[i] = out.get(i, Fraction(0)) + 1
        return cls(out)

    def __add__(self, other: "CurveClass") -> "CurveClass":
        out = dict(self.curves)
        for k, v in other.curves.items():
            out[k] = out.get(k, Fraction(0)) + v
        return CurveClass(out, self.canonical + other.canonical)

    def scaled(self, c) -> "CurveClass":
        return CurveClass({k: v * c for k, v in self.curves.items()}, self.canonical * c)


def log_canonical_class(g: DualGraph) -> CurveClass:
    """K_Y + (all exceptional curves) + (boundary)."""
    cls = CurveClass.of(*g.ids, *(b.id for b in g.boundary))
    return CurveClass(cls.curves, Fraction(1))


def _pair(g: DualGraph, a: str, b: str) -> int:
    bids = {bd.id: bd for bd in g.boundary}
    if a in bids and b in bids:
        raise ValueError(f"intersection of boundary curves {a!r}, {b!r} is not part of the graph data")
    if a in bids:
        return bids[a].meets.get(b, 0)
    if b in bids:
        return bids[b].meets.get(a, 0)
    return g.intersection(a, b)


def intersect(g: DualGraph, x: CurveClass, y: CurveClass) -> Fraction:
    """Intersection number on Y; raises when it involves unknown data (B.B, K.B, K.K)."""
    total = Fraction(0)
    for a, ca in x.curves.items():
        if not ca:
            continue
        for b, cb in y.curves.items():
            if cb:
                total += ca * cb * _pair(g, a, b)
    for kx, other in ((x.canonical, y), (y.canonical, x)):
        if not kx:
            continue
        for a, ca in other.curves.items():
            if not ca:
                continue
            if a not in g.ids:
                raise ValueError(f"K_Y . {a!r} is not part of the graph data")
            total += kx * ca * g.canonical_degree(a)
    if x.canonical and y.canonical:
        raise ValueError("K_Y^2 is not part of the graph data")
    return total


# contraction states


@dataclass(frozen=True)
class ContractionState:
    base: DualGraph
    contracted: tuple = ()
    protected: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "contracted", tuple(self.contracted))
        if len(set(self.contracted)) != len(self.contracted):
            raise ContractionError("contracted curves must be distinct")
        unknown = set(self.contracted) - set(self.base.ids)
        if unknown:
            raise ContractionError(f"unknown curves {sorted(unknown)}")

    @classmethod
    def start(cls, g: DualGraph) -> "ContractionState":
        """Initial state; curves of discrepancy -1 are protected from contraction."""
        return cls(g, (), discrepancies(g).partition.e_minus1)

    @property
    def step_index(self) -> int:
        return len(self.contracted)

    @property
    def surviving(self) -> list[str]:
        gone = set(self.contracted)
        return [v for v in self.base.ids if v not in gone]

    def components(self) -> list[list[str]]:
        return self.base.components(self.contracted)

    def points(self) -> list[LocalPoint]:
        return [analyze_point(self, c) for c in self.components()]

    def pullback(self, c: CurveClass) -> CurveClass:
        """c + sum gamma_k F_k, orthogonal to every contracted F_k."""
        g = self.base
        fs = list(self.contracted)
        if not fs:
            return c
        mat = RationalMatrix.from_rows([[g.intersection(a, b) for b in fs] for a in fs])
        if not negative_definite_matrix(mat):
            raise LatticeError("contracted curves do not span a negative definite lattice")
        rhs = [-intersect(g, c, CurveClass.of(f)) for f in fs]
        gamma = solve(mat, rhs)
        return c + CurveClass(dict(zip(fs, gamma)))


def pushforward_intersection(state: ContractionState, c: CurveClass, d: CurveClass) -> Fraction:
    """Intersection of the images of c and d on the partially contracted surface."""
    return intersect(state.base, state.pullback(c), d)


def self_intersection(state: ContractionState, vid: str) -> Fraction:
    p = CurveClass.of(vid)
    return pushforward_intersection(state, p, p)


def log_canonical_degree(state: ContractionState, vid: str) -> Fraction:
    """(K_{Y_i} + D_i) . P for a surviving exceptional curve P."""
    return pushforward_intersection(state, log_canonical_class(state.base), CurveClass.of(vid))


def is_tamely_dlt(state: ContractionState, p: int) -> bool:
    return all(pt.tame(p) for pt in state.points())


@dataclass(frozen=True)
class StepReport:
    contracted_vertex: str
    lam: Fraction
    degree: Fraction
    self_intersection: Fraction
    tame: bool | None
    singular_points: tuple

    def to_dict(self) -> dict:
        from .arith import format_rational

        return {
            "contracted": self.contracted_vertex,
            "lambda": format_rational(self.lam),
            "degree": format_rational(self.degree),
            "self_intersection": format_rational(self.self_intersection),
            "tame": self.tame,
            "points": [
                {
                    "component": list(pt.component),
                    "discrepancies": {k: format_rational(v) for k, v in pt.discrepancies.items()},
                    "index_proxy": pt.index_proxy,
                    "smooth": pt.smooth,
                    "dlt": pt.dlt,
                }
                for pt in self.singular_points
            ],
        }


def admissibility(state: ContractionState, vid: str) -> tuple[Fraction, Fraction]:
    """(P^2, (K + D).P) on Y_i, raising ContractionError if P may not be contracted."""
    if vid not in state.base.ids:
        raise ContractionError(f"unknown curve {vid!r}")
    if vid in state.contracted:
        raise ContractionError(f"curve {vid!r} is already contracted")
    if vid in state.protected:
        raise ContractionError(f"curve {vid!r} has discrepancy -1 and must survive")
    sq = self_intersection(state, vid)
    if sq >= 0:
        raise ContractionError(f"curve {vid!r} has self-intersection {sq} >= 0 on Y_{state.step_index}")
    deg = log_canonical_degree(state, vid)
    if deg > 0:
        raise ContractionError(f"(K + D).{vid} = {deg} > 0 on Y_{state.step_index}")
    return sq, deg


def is_admissible(state: ContractionState, vid: str) -> bool:
    try:
        admissibility(state, vid)
    except ContractionError:
        return False
    return True


def contract(state: ContractionState, vid: str, p: int | None = None) -> tuple[ContractionState, StepReport]:
    """Contract one surviving curve.

    The coefficient lambda satisfies (K_{Y_i} + D_i) . P = lambda P^2.  When
    ``p`` is given, the step report records whether (Y_{i+1}, D_{i+1}) is
    tamely dlt in characteristic p.
    """
    sq, deg = admissibility(state, vid)
    lam = deg / sq
    new = ContractionState(state.base, state.contracted + (vid,), state.protected)
    pts = tuple(new.points())
    tame = None if p is None else all(pt.tame(p) for pt in pts)
    return new, StepReport(vid, lam, deg, sq, tame, pts)


@dataclass(frozen=True)
class LiftCheck:
    ok: bool
    witness: str | None
    degrees: dict

    def __bool__(self):
        return self.ok


def check_lift_elem(state: ContractionState) -> LiftCheck:
    """Is -(K_{Y_i} + D_i) nef over X, i.e. (K + D).P <= 0 for every surviving P?"""
    degrees = {v: log_canonical_degree(state, v) for v in state.surviving}
    bad = next((v for v, d in degrees.items() if d > 0), None)
    return LiftCheck(bad is None, bad, degrees)


# tame factorizations


@dataclass(frozen=True)
class TameResolution:
    order: tuple
    steps: tuple


class _Search:
    def __init__(self, g: DualGraph, p: int):
        self.g = g
        self.p = p
        rep = discrepancies(g)
        if not rep.sing_class.is_lc:
            raise NotLogCanonical(f"pair is {rep.sing_class}")
        self.protected = rep.partition.e_minus1
        self.targets = frozenset(rep.partition.contractible)
        # (Z, D_Z) must be tame unless Z -> X is an isomorphism
        self.final_needs_tame = bool(self.protected)
        self._tame: dict[frozenset, bool] = {}
        self._dead: set[frozenset] = set()

    def state(self, contracted: Iterable[str]) -> ContractionState:
        order = [v for v in self.g.ids if v in set(contracted)]
        return ContractionState(self.g, tuple(order), self.protected)

    def acceptable(self, s: frozenset) -> bool:
        if s == self.targets and not self.final_needs_tame:
            return True
        if s not in self._tame:
            self._tame[s] = is_tamely_dlt(self.state(s), self.p)
        return self._tame[s]

    def candidates(self, s: frozenset) -> list[str]:
        st = self.state(s)
        out = []
        for v in self.g.ids:
            if v in self.targets and v not in s and is_admissible(st, v):
                if self.acceptable(s | {v}):
                    out.append(v)
        return out

    def exhaustive(self, s: frozenset) -> list[str] | None:
        if s == self.targets:
            return []
        if s in self._dead:
            return None
        for v in self.candidates(s):
            rest = self.exhaustive(s | {v})
            if rest is not None:
                return [v] + rest
        self._dead.add(s)
        return None

    def greedy(self) -> list[str] | None:
        s: frozenset = frozenset()
        order = []
        while s != self.targets:
            cands = self.candidates(s)
            if not cands:
                return None
            order.append(cands[0])
            s = s | {cands[0]}
        return order


def find_tame_order(g: DualGraph, p: int, mode: str = "exhaustive") -> TameResolution | None:
    """Search for a contraction order all of whose intermediate pairs are tamely dlt.

    Only curves of discrepancy > -1 are contracted.  Exhaustive mode returns
    the lexicographically first successful order (vertex insertion order);
    greedy mode commits to the first acceptable curve at every step.
    """
    require_prime(p)
    if mode not in ("greedy", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    search = _Search(g, p)
    if mode == "exhaustive":
        if len(search.targets) > EXHAUSTIVE_CAP:
            raise SearchCapError(
                f"{len(search.targets)} contractible curves exceed the exhaustive cap of {EXHAUSTIVE_CAP}"
            )
        order = search.exhaustive(frozenset())
    else:
        order = search.greedy()
    if order is None:
        return None
    state = search.state(())
    steps = []
    for v in order:
        state, rep = contract(state, v, p)
        steps.append(rep)
    return TameResolution(tuple(order), tuple(steps))


def admissible_full_orders(g: DualGraph, limit: int | None = None) -> list[list[str]]:
    """All admissible orders contracting every curve of discrepancy > -1.

    Tameness is ignored; used to check the factorization invariants.
    """
    rep = discrepancies(g)
    protected = rep.partition.e_minus1
    targets = rep.partition.contractible
    out: list[list[str]] = []

    def rec(state: ContractionState, prefix: list[str]):
        if limit is not None and len(out) >= limit:
            return
        if set(prefix) == targets:
            out.append(list(prefix))
            return
        for v in g.ids:
            if v in targets and v not in prefix and is_admissible(state, v):
                nxt = ContractionState(g, state.contracted + (v,), protected)
                rec(nxt, prefix + [v])

    rec(ContractionState(g, (), protected), [])
    return out


# verdicts

HOLDS = "holds"
FAILS = "fails-by-example"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class Citation:
    key: str
    note: str

    def to_dict(self) -> dict:
        return {"key": self.key, "note": self.note}


@dataclass(frozen=True)
class ExtensionVerdict:
    log_ext_1forms: str
    reg_ext_1forms: str
    log_justification: tuple
    reg_justification: tuple

    @property
    def justification(self) -> tuple:
        return self.log_justification + self.reg_justification

    @property
    def citations(self) -> list[str]:
        return [c.key for c in self.justification]

    def to_dict(self) -> dict:
        return {
            "log_ext_1forms": {
                "value": self.log_ext_1forms,
                "citations": [c.key for c in self.log_justification],
            },
            "reg_ext_1forms": {
                "value": self.reg_ext_1forms,
                "citations": [c.key for c in self.reg_justification],
            },
        }


def _is_veronese_curve(g: DualGraph, p: int) -> bool:
    if len(g) != 1 or g.boundary:
        return False
    v = g.vertices[0]
    return v.genus == 0 and v.self_intersection == -p


def extension_verdict(g: DualGraph, p: int, mode: str = "exhaustive") -> ExtensionVerdict:
    from .classify import is_e8_graph

    require_prime(p)
    rep = discrepancies(g)
    log_why: list[Citation] = []
    lc = rep.sing_class.is_lc

    if lc and p >= 7:
        log_why.append(Citation(
            "lc-surface-char-ge-7",
            f"log canonical surface pair in characteristic {p} >= 7",
        ))
    if lc:
        try:
            tame = find_tame_order(g, p, mode)
        except SearchCapError:
            tame = None
        if tame is not None:
            order = ", ".join(tame.order) or "empty order"
            log_why.append(Citation("tame-resolution-suffices", f"tame contraction order: {order}"))
    lift = check_lift_elem(ContractionState(g))
    if lift:
        log_why.append(Citation(
            "lifting-along-nonpositive-map",
            "-(K_Y + D_Y) is nef over X on the snc resolution itself",
        ))

    if log_why:
        log_ext = HOLDS
    elif p in (2, 3, 5) and is_e8_graph(g):
        log_ext = FAILS
        log_why.append(Citation(
            "e8-low-characteristic",
            f"E8 graph in characteristic {p}: z^2 + x^3 + y^5 has a reflexive form with "
            "worse than logarithmic poles",
        ))
    else:
        log_ext = UNKNOWN
        log_why.append(Citation("no-route", "no certificate found and no known counterexample"))

    det_check = tame_determinant_check(g, p)
    reg_why: list[Citation] = []
    if log_ext == HOLDS and det_check:
        reg_ext = HOLDS
        reg_why.append(Citation(
            "determinant-criterion",
            f"logarithmic extension holds and p = {p} does not divide det = {det_check.value}",
        ))
    elif _is_veronese_curve(g, p):
        reg_ext = FAILS
        reg_why.append(Citation(
            "veronese-counterexample",
            f"single (-{p})-curve in characteristic {p}: y^-1 dy does not extend regularly",
        ))
    else:
        reg_ext = UNKNOWN
        reason = (f"p = {p} divides det = {det_check.value}" if not det_check
                  else "logarithmic extension not established")
        reg_why.append(Citation("determinant-criterion-inapplicable", reason))
    return ExtensionVerdict(log_ext, reg_ext, tuple(log_why), tuple(reg_why))
