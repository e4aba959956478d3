"""Orbits of smooth functions on surfaces: group expressions, wreath products,
Bieberbach sequences and their computation from Kronrod-Reeb graphs."""

from __future__ import annotations

from . import groupexpr, orbitcalc, polysym, reebmodel, seqcalc, wreath
from .errors import SurfOrbitError

__all__ = ["groupexpr", "wreath", "seqcalc", "polysym", "reebmodel", "orbitcalc", "SurfOrbitError"]
__version__ = "0.1.0"
