"""Logarithmic and regular extension of 1-forms on log canonical surface pairs.

Dual graphs of resolutions, discrepancies, a simulated minimal model program
that searches for tame contraction orders, a structural classifier for lc
graphs and a small F_p form engine for the counterexamples.
"""
from .dualgraph import DualGraph, blowup, load, loads
from .discrepancy import discrepancies
from .mmp import extension_verdict, find_tame_order

__all__ = ["DualGraph", "blowup", "load", "loads", "discrepancies", "extension_verdict", "find_tame_order"]
