"""Degree bookkeeping for cones over cyclic covers of hypersurfaces.

X is a smooth hypersurface of degree d in P^{n+1}, so K_X = O(d - n - 2),
and L = O(c).  The cone over the corresponding p-cyclic cover has
discrepancy -deg(K_X + (p-1)L) - 1.
"""
from __future__ import annotations

from dataclasses import dataclass

from ..discrepancy import require_prime

# case -> (d as a function of (n, p), twist c, bound as n >= f(p), label of that bound)
CASES = {
    "fano": (lambda n, p: n - 2 * p + 3, 2, lambda p: 2 * p - 2, "2p - 2"),
    "fano-sqrt": (lambda n, p: n - 3 * p + 3, 3, lambda p: 3 * p - 2, "3p - 2"),
    "calabi-yau": (lambda n, p: n - p + 3, 1, lambda p: p - 2, "p - 2"),
}

CLASS_OF_DISCREPANCY = {-1: "lc", 0: "canonical", 1: "terminal"}


class InfeasibleParameters(ValueError):
    def __init__(self, case: str, n: int, p: int, bound: str, value: int):
        self.case, self.n, self.p, self.bound, self.value = case, n, p, bound, value
        super().__init__(f"{case}: n = {n} violates n >= {bound} = {value} at p = {p}")


@dataclass(frozen=True)
class ConeParams:
    case: str
    n: int
    p: int
    degree: int
    twist: int
    bound: int
    canonical_plus_p_minus_1: int
    canonical_plus_p: int
    cone_discrepancy: int

    @property
    def cone_dimension(self) -> int:
        return self.n + 1

    @property
    def cone_class(self) -> str:
        return CLASS_OF_DISCREPANCY[self.cone_discrepancy]

    @property
    def failing_form_degree(self) -> int:
        return self.n - 1

    def to_dict(self) -> dict:
        return {
            "case": self.case,
            "n": self.n,
            "p": self.p,
            "d": self.degree,
            "L": f"O({self.twist})",
            "bound": f"n >= {self.bound}",
            "K_X + (p-1)L": f"O({self.canonical_plus_p_minus_1})",
            "K_X + pL": f"O({self.canonical_plus_p})",
            "cone_dimension": self.cone_dimension,
            "cone_discrepancy": self.cone_discrepancy,
            "cone_class": self.cone_class,
        }


def cone_params(case: str, n: int, p: int) -> ConeParams:
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}; choose from {sorted(CASES)}")
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"dimension must be an integer >= 2, got {n!r}")
    require_prime(p)
    degree_of, c, bound_of, label = CASES[case]
    bound = bound_of(p)
    if n < bound:
        raise InfeasibleParameters(case, n, p, label, bound)
    d = degree_of(n, p)
    k_x = -(n + 2) + d
    low, high = k_x + c * (p - 1), k_x + c * p
    return ConeParams(
        case=case,
        n=n,
        p=p,
        degree=d,
        twist=c,
        bound=bound,
        canonical_plus_p_minus_1=low,
        canonical_plus_p=high,
        cone_discrepancy=-low - 1,
    )
