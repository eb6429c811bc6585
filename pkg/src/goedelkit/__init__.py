"""Desk-scale toolkit for Gödel logics with truth constants and the Baaz Δ.

Values follow the reverse convention: 0 is absolute truth, 1 absolute falsity.
"""

from .values import ONE, ZERO, ClosedForm, ConstantFamily, GoedelSet, dmax, delta, resid
from .syntax import parse_formula, parse_theory, print_formula
from .semantics import Structure, eval_formula, models, propositional
from .decide import entails, sat

__version__ = "0.1.0"

__all__ = [
    "ONE", "ZERO", "ClosedForm", "ConstantFamily", "GoedelSet", "dmax", "delta", "resid",
    "parse_formula", "parse_theory", "print_formula",
    "Structure", "eval_formula", "models", "propositional",
    "entails", "sat",
]
