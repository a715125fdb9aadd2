"""Exact topological recursion on genus-0 spectral curves.

A curve is given parametrically by two rational functions ``x(t)`` and
``y(t)`` on the Riemann sphere.  Ramification points of ``x`` may have any
index; correlators ``W^g_n`` come out as exact rational functions and free
energies ``F_g`` as exact rationals.

    >>> from ramrec import Engine, SpectralCurve
    >>> print(Engine(SpectralCurve("t + 1/t", "(1/3)*t^3")).free_energy(2))
    -13/72
"""

from .curve import RamPoint, SpectralCurve, find_ramification, swap
from .engine import (
    CheckReport,
    Correlator,
    Engine,
    bernoulli_reference,
    symplectic_compare,
)
from .errors import (
    CoincidentRamification,
    NoRamification,
    ParseError,
    RamrecError,
    TruncationError,
    TruncationUnderflow,
)
from .field import FieldElement
from .parser import parse_expression, parse_to_function
from .ratfun import MultiPoly, RationalFunction
from .series import LaurentSeries

__all__ = [
    "CheckReport",
    "CoincidentRamification",
    "Correlator",
    "Engine",
    "FieldElement",
    "LaurentSeries",
    "MultiPoly",
    "NoRamification",
    "ParseError",
    "RamPoint",
    "RamrecError",
    "RationalFunction",
    "SpectralCurve",
    "TruncationError",
    "TruncationUnderflow",
    "bernoulli_reference",
    "find_ramification",
    "parse_expression",
    "parse_to_function",
    "swap",
    "symplectic_compare",
]
