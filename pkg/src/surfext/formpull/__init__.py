"""A small engine for rational functions and 1-forms over F_p."""
from .cones import ConeParams, InfeasibleParameters, cone_params
from .examples import E8_EXPECTED, E8Report, VeroneseReport, verify_e8, verify_veronese
from .forms import LOGARITHMIC, REGULAR, WORSE, LogForm, PoleOrders, compose, differential, pole_order_along, pullback
from .poly import Poly, PrimeField, Ring, gcd
from .ratfunc import PoleOnSubstitution, RatFunc, substitute

__all__ = [
    "E8_EXPECTED", "E8Report", "VeroneseReport", "verify_e8", "verify_veronese",
    "LOGARITHMIC", "REGULAR", "WORSE", "LogForm", "PoleOrders", "compose",
    "differential", "pole_order_along", "pullback",
    "InfeasibleParameters", "ConeParams", "cone_params",
    "Poly", "PrimeField", "Ring", "gcd",
    "PoleOnSubstitution", "RatFunc", "substitute",
]
