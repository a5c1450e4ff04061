"""Exact-arithmetic tools for Gelfand-Zeitlin strong regularity in gl(n+1)."""

from .gz import GZSpectrum, is_sreg_centralizer, is_sreg_differentials, kw_map, level_diagnostics
from .korbits import BorelSubalgebra, Flag, OrbitClass, classify_korbit, representative_flag
from .linalg import Polynomial, RationalMatrix, charpoly
from .nilfibre import BorelPattern, ClosedOrbitSequence, SignSequence, build_bq, component_of

__all__ = [
    "BorelPattern",
    "BorelSubalgebra",
    "ClosedOrbitSequence",
    "Flag",
    "GZSpectrum",
    "OrbitClass",
    "Polynomial",
    "RationalMatrix",
    "SignSequence",
    "build_bq",
    "charpoly",
    "classify_korbit",
    "component_of",
    "is_sreg_centralizer",
    "is_sreg_differentials",
    "kw_map",
    "level_diagnostics",
    "representative_flag",
]
