"""Numeric tolerances shared across the package.

All geometry runs in float64.  The defaults below are deliberate: unit/orthogonality
checks are tightest, rank decisions slightly looser, point-coincidence checks looser
still, and LP feasibility sits at 1e-9 so that certificates survive re-validation.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    orth: float = 1e-10     # unit norm / pairwise orthogonality
    rank: float = 1e-9      # pivot / singular-value threshold for rank decisions
    geom: float = 1e-8      # point coincidence and recombination residuals
    lp: float = 1e-9        # LP feasibility and strictness threshold


DEFAULT_TOLS = Tolerances()
