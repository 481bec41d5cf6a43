"""Arithmetic dynamics of rational maps over the function field Q(t)."""

__version__ = "0.1.0"

from .errors import CapExceededError, FFDynError, MapError, ParseError, PreconditionError
from .field import BasePoly, FuncElem, Place, rational_roots, reduce_at, valuation
from .kpoly import ZPoly, k_rational_roots
from .sunits import PlaceSet, s_coprime_form, solve_unit_equation, sunit_basis
from .dynamics import (
    EndoMap,
    Mobius,
    ProjPoint,
    bad_places_simple,
    conjugate,
    constant_pairs,
    evaluate,
    homogeneous_resultant,
    improve_reduction,
    isotriviality_diagnostic,
    make_map,
    reduce_map,
)
from .distance import log_distance
from .orbits import classify, orbit, periodic_points, preimages, preper_set
from .parsing import parse_map, parse_place, parse_places, parse_point

__all__ = [
    "BasePoly", "FuncElem", "Place", "PlaceSet", "ZPoly", "EndoMap", "Mobius", "ProjPoint",
    "FFDynError", "ParseError", "MapError", "PreconditionError", "CapExceededError",
    "rational_roots", "reduce_at", "valuation", "k_rational_roots", "s_coprime_form",
    "solve_unit_equation", "sunit_basis", "bad_places_simple", "conjugate", "constant_pairs",
    "evaluate", "homogeneous_resultant", "improve_reduction", "isotriviality_diagnostic",
    "make_map", "reduce_map", "log_distance", "classify", "orbit", "periodic_points",
    "preimages", "preper_set", "parse_map", "parse_place", "parse_places", "parse_point",
]
