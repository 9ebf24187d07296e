"""Exact symbolic algebra: polynomials, factored rational functions,
Laurent expansion and matrix inversion."""
from __future__ import annotations

from .poly import MODULUS, Poly, VarTable
from .ratf import RatF, shift_lambda, substitute, swap_z

__all__ = ["MODULUS", "Poly", "VarTable", "RatF", "shift_lambda", "substitute", "swap_z"]
