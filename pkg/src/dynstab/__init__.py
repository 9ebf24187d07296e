"""Dynamical stable envelopes for T*Gr_k(C^n): weight functions, R-matrices and the E_y(gl_2) action.

Everything is exact: polynomials over Q in lam, y, w, z, t with factored rational functions on top.
"""
from __future__ import annotations

from .combinatorics import Perm, SubsetIndex, subsets
from .symalg import Poly, RatF, VarTable

__version__ = "0.1.0"

__all__ = ["Perm", "SubsetIndex", "subsets", "Poly", "RatF", "VarTable", "__version__"]
