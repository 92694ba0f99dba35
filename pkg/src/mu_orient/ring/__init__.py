"""Exact arithmetic foundation: Z_(p), Z/p^N, graded polynomials, series."""

from .localrat import LocalRational, PLocalDomain, ResidueRing
from .poly import (MultiPoly, PolyRing, RingAction, apply_action,
                   divide_by_p, grlex_key, parse_poly)
from .series import (SeriesRing, TruncSeries, divided_difference, reversion,
                     series_compose, series_mul, series_recip, series_solve)

__all__ = [
    "LocalRational", "PLocalDomain", "ResidueRing",
    "MultiPoly", "PolyRing", "RingAction", "apply_action", "divide_by_p",
    "grlex_key", "parse_poly",
    "SeriesRing", "TruncSeries", "divided_difference", "reversion",
    "series_compose", "series_mul", "series_recip", "series_solve",
]
